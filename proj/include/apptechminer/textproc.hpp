#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "apptechminer/errors.hpp"
#include "apptechminer/lexicon_data.hpp"
#include "apptechminer/util.hpp"

namespace atm {

// ---------------------------------------------------------------------------
// Tokenization
// ---------------------------------------------------------------------------

// Normalized word tokens. `breaks` holds positions i such that a window may
// not span tokens[i-1] -> tokens[i] (sentence/segment boundaries).
struct TokenSequence {
    std::vector<std::string> tokens;
    std::vector<std::size_t> breaks;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
};

namespace detail {

inline bool is_word_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

inline char fold_byte(unsigned char c) {
    if (c < 0x80) return static_cast<char>(std::tolower(c));
    return static_cast<char>(c);
}

// Raw token with the original-case capitalization bit (for the unknown-word
// heuristic) and whether punctuation separated it from its predecessor
// (noun-phrase runs must not bridge such gaps).
struct RawToken {
    std::string folded;
    bool capitalized = false;
    bool gap_before = false;
};

// Case-folds, strips punctuation, keeps hyphens between word characters.
inline std::vector<RawToken> raw_tokenize(std::string_view text) {
    std::vector<RawToken> out;
    std::string cur;
    bool cap = false;
    bool pending_gap = false;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back({cur, cap, pending_gap});
            cur.clear();
            pending_gap = false;
        }
        cap = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_word_byte(c)) {
            if (cur.empty()) cap = std::isupper(c) != 0;
            cur += fold_byte(c);
        } else if (c == '-' && !cur.empty() && i + 1 < text.size() &&
                   is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
            cur += '-';
        } else {
            flush();
            if (std::isspace(c) == 0) pending_gap = true;
        }
    }
    flush();
    return out;
}

inline bool all_digits(std::string_view w) {
    if (w.empty()) return false;
    return std::all_of(w.begin(), w.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace detail

inline TokenSequence tokenize(std::string_view text) {
    TokenSequence seq;
    for (auto& t : detail::raw_tokenize(text)) seq.tokens.push_back(std::move(t.folded));
    return seq;
}

// Canonical space-joined form used for phrase identity everywhere.
inline std::string normalize_phrase(std::string_view text) {
    auto seq = tokenize(text);
    std::string out;
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        if (i) out += ' ';
        out += seq.tokens[i];
    }
    return out;
}

inline std::string join_tokens(const std::vector<std::string>& tokens,
                               std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) out += ' ';
        out += tokens[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sentence splitting
// ---------------------------------------------------------------------------

namespace detail {

inline const std::unordered_set<std::string>& abbreviation_set() {
    static const std::unordered_set<std::string> set = [] {
        std::unordered_set<std::string> s;
        for (const char* w : kAbbreviations) s.insert(w);
        return s;
    }();
    return set;
}

// Word immediately preceding position `i` (exclusive), folded.
inline std::string word_before(std::string_view text, std::size_t i) {
    std::size_t end = i;
    std::size_t begin = end;
    while (begin > 0 && is_word_byte(static_cast<unsigned char>(text[begin - 1]))) --begin;
    std::string w;
    for (std::size_t k = begin; k < end; ++k)
        w += fold_byte(static_cast<unsigned char>(text[k]));
    return w;
}

}  // namespace detail

// Splits on `.`, `!`, `?` followed by whitespace and an uppercase letter,
// digit, or citation-marker opener, with an abbreviation stop-list.
inline std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    auto emit = [&](std::size_t end) {
        std::string_view s = text.substr(start, end - start);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        if (!s.empty()) out.emplace_back(s);
        start = end;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t j = i + 1;
        while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
        std::size_t k = j;
        while (k < text.size() && (text[k] == ' ' || text[k] == '\t' || text[k] == '\n' || text[k] == '\r')) ++k;
        if (k == j) continue;  // no whitespace after the terminator
        if (k >= text.size()) { emit(j); break; }
        unsigned char nxt = static_cast<unsigned char>(text[k]);
        bool starts_sentence = std::isupper(nxt) != 0 || std::isdigit(nxt) != 0 || nxt == '[';
        if (!starts_sentence) continue;
        if (c == '.') {
            std::string prev = detail::word_before(text, i);
            if (prev.size() == 1 || detail::abbreviation_set().count(prev)) continue;
        }
        emit(j);
        i = j - 1;
    }
    emit(text.size());
    return out;
}

// ---------------------------------------------------------------------------
// N-grams
// ---------------------------------------------------------------------------

struct NGram {
    std::vector<std::string> tokens;
    int n = 0;

    std::string joined() const { return join_tokens(tokens, 0, tokens.size()); }
};

// Every contiguous window of length n_min..n_max in document order, grouped
// by order; windows never cross positions listed in seq.breaks.
inline std::vector<NGram> ngrams(const TokenSequence& seq, int n_min, int n_max) {
    if (n_min < 1 || n_min > n_max)
        throw InvalidRange("ngrams requires 1 <= n_min <= n_max, got [" +
                           std::to_string(n_min) + ", " + std::to_string(n_max) + "]");
    std::vector<bool> break_at(seq.tokens.size() + 1, false);
    for (std::size_t b : seq.breaks)
        if (b < break_at.size()) break_at[b] = true;
    std::vector<NGram> out;
    for (int n = n_min; n <= n_max; ++n) {
        if (seq.tokens.size() < static_cast<std::size_t>(n)) break;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= seq.tokens.size(); ++i) {
            bool crosses = false;
            for (std::size_t k = i + 1; k < i + static_cast<std::size_t>(n); ++k) {
                if (break_at[k]) { crosses = true; break; }
            }
            if (crosses) continue;
            NGram g;
            g.n = n;
            g.tokens.assign(seq.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                            seq.tokens.begin() + static_cast<std::ptrdiff_t>(i + static_cast<std::size_t>(n)));
            out.push_back(std::move(g));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stopwords
// ---------------------------------------------------------------------------

struct Stopwords {
    std::unordered_set<std::string> words;

    bool contains(const std::string& w) const { return words.count(w) != 0; }

    static Stopwords from_file(const std::string& path) {
        Stopwords sw;
        std::string data = read_file(path);
        std::string word;
        for (char c : data + "\n") {
            if (c == '\n' || c == '\r') {
                if (!word.empty()) sw.words.insert(normalize_phrase(word));
                word.clear();
            } else {
                word += c;
            }
        }
        sw.words.erase("");
        return sw;
    }

    static const Stopwords& builtin() {
        static const Stopwords sw = [] {
            Stopwords s;
            for (const char* w : detail::kStopwords) s.words.insert(w);
            return s;
        }();
        return sw;
    }
};

// ---------------------------------------------------------------------------
// POS lexicon and noun-phrase chunking
// ---------------------------------------------------------------------------

enum class PosTag { Noun, Propn, Adj, Other };

inline const char* to_string(PosTag t) {
    switch (t) {
        case PosTag::Noun: return "NOUN";
        case PosTag::Propn: return "PROPN";
        case PosTag::Adj: return "ADJ";
        case PosTag::Other: return "OTHER";
    }
    return "OTHER";
}

// Total lookup: bundled/user entries first, then the default rule
// (digits -> OTHER, capitalized unknown -> PROPN, unknown -> NOUN).
struct PosLexicon {
    std::unordered_map<std::string, PosTag> entries;

    PosTag lookup(const std::string& folded, bool capitalized) const {
        auto it = entries.find(folded);
        if (it != entries.end()) return it->second;
        if (detail::all_digits(folded)) return PosTag::Other;
        if (capitalized) return PosTag::Propn;
        return PosTag::Noun;
    }

    static PosLexicon from_file(const std::string& path) {
        PosLexicon lex;
        std::string data = read_file(path);
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= data.size()) {
            std::size_t eol = data.find('\n', pos);
            if (eol == std::string::npos) eol = data.size();
            std::string line = data.substr(pos, eol - pos);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            ++line_no;
            pos = eol + 1;
            if (line.empty()) continue;
            std::size_t tab = line.find('\t');
            if (tab == std::string::npos)
                throw MalformedRecord(line_no, "lexicon line needs word<TAB>TAG");
            std::string word = normalize_phrase(line.substr(0, tab));
            std::string tag = line.substr(tab + 1);
            PosTag t;
            if (tag == "NOUN") t = PosTag::Noun;
            else if (tag == "PROPN") t = PosTag::Propn;
            else if (tag == "ADJ") t = PosTag::Adj;
            else if (tag == "OTHER") t = PosTag::Other;
            else throw MalformedRecord(line_no, "unknown tag: " + tag);
            if (!word.empty()) lex.entries[word] = t;
        }
        return lex;
    }

    static const PosLexicon& builtin() {
        static const PosLexicon lex = [] {
            PosLexicon l;
            for (const char* w : detail::kOtherWords) l.entries[w] = PosTag::Other;
            for (const char* w : detail::kAdjWords) l.entries[w] = PosTag::Adj;
            return l;
        }();
        return lex;
    }
};

struct NounPhrase {
    std::string text;
    std::vector<std::string> tokens;
};

namespace detail {

// Citation markers `[[id]]` are metadata, not prose; drop them before
// chunking so marker ids never become noun phrases.
inline std::string strip_markers(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '[' && i + 1 < text.size() && text[i + 1] == '[') {
            std::size_t close = text.find("]]", i + 2);
            if (close != std::string_view::npos) {
                i = close + 2;
                out += ' ';
                continue;
            }
        }
        out += text[i];
        ++i;
    }
    return out;
}

}  // namespace detail

// Maximal non-overlapping runs matching (ADJ|NOUN|PROPN)* (NOUN|PROPN),
// left-to-right greedy; single-token stopword phrases are dropped.
inline std::vector<NounPhrase> chunk_noun_phrases(
    std::string_view text, const PosLexicon& lexicon,
    const Stopwords& stopwords = Stopwords::builtin()) {
    std::string cleaned = detail::strip_markers(text);
    auto raw = detail::raw_tokenize(cleaned);
    std::vector<PosTag> tags(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        tags[i] = lexicon.lookup(raw[i].folded, raw[i].capitalized);

    std::vector<NounPhrase> out;
    std::size_t i = 0;
    auto chunkable = [&](std::size_t k) {
        return tags[k] == PosTag::Adj || tags[k] == PosTag::Noun || tags[k] == PosTag::Propn;
    };
    while (i < raw.size()) {
        if (!chunkable(i)) { ++i; continue; }
        std::size_t run_end = i + 1;
        while (run_end < raw.size() && chunkable(run_end) && !raw[run_end].gap_before)
            ++run_end;
        // Phrase must end with a nominal: trim trailing adjectives.
        std::size_t last_nominal = run_end;
        for (std::size_t k = run_end; k > i; --k) {
            if (tags[k - 1] == PosTag::Noun || tags[k - 1] == PosTag::Propn) {
                last_nominal = k;
                break;
            }
            last_nominal = i;
        }
        if (last_nominal > i) {
            NounPhrase np;
            for (std::size_t k = i; k < last_nominal; ++k) np.tokens.push_back(raw[k].folded);
            np.text = join_tokens(np.tokens, 0, np.tokens.size());
            bool single_stopword = np.tokens.size() == 1 && stopwords.contains(np.tokens[0]);
            if (!single_stopword) out.push_back(std::move(np));
        }
        i = run_end;
    }
    return out;
}

}  // namespace atm
