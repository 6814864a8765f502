#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "apptechminer/corpus.hpp"
#include "apptechminer/errors.hpp"
#include "apptechminer/textproc.hpp"

namespace atm {

// ---------------------------------------------------------------------------
// Functional keywords
// ---------------------------------------------------------------------------

// Which side of the keyword carries the area-bearing phrase.
enum class KeywordSide { PhraseAfter, PhraseBefore, Both };

inline const char* to_string(KeywordSide s) {
    switch (s) {
        case KeywordSide::PhraseAfter: return "after";
        case KeywordSide::PhraseBefore: return "before";
        case KeywordSide::Both: return "both";
    }
    return "after";
}

struct FunctionalKeyword {
    std::string word;
    KeywordSide side = KeywordSide::PhraseAfter;
    bool seed = true;
};

struct FunctionalKeywordSet {
    std::map<std::string, FunctionalKeyword> keywords;

    bool contains(const std::string& w) const { return keywords.count(w) != 0; }

    void add(const std::string& word, KeywordSide side, bool seed) {
        auto [it, inserted] = keywords.try_emplace(word, FunctionalKeyword{word, side, seed});
        if (!inserted && it->second.side != side) it->second.side = KeywordSide::Both;
    }

    static FunctionalKeywordSet default_seeds() {
        FunctionalKeywordSet set;
        set.add("for", KeywordSide::PhraseAfter, true);
        set.add("via", KeywordSide::PhraseAfter, true);
        set.add("using", KeywordSide::PhraseBefore, true);
        set.add("with", KeywordSide::PhraseBefore, true);
        set.add("in", KeywordSide::PhraseAfter, true);
        set.add("to", KeywordSide::PhraseAfter, true);
        set.add("of", KeywordSide::PhraseAfter, true);
        return set;
    }

    // Lines of `word<TAB>side`, side one of after|before|both.
    static FunctionalKeywordSet from_file(const std::string& path) {
        FunctionalKeywordSet set;
        std::string data = read_file(path);
        std::size_t line_no = 0, pos = 0;
        while (pos <= data.size() && pos < data.size() + 1) {
            std::size_t eol = data.find('\n', pos);
            if (eol == std::string::npos) eol = data.size();
            std::string line = data.substr(pos, eol - pos);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            ++line_no;
            bool last = eol >= data.size();
            pos = eol + 1;
            if (!line.empty()) {
                std::size_t tab = line.find('\t');
                if (tab == std::string::npos)
                    throw MalformedRecord(line_no, "keyword line needs word<TAB>side");
                std::string word = normalize_phrase(line.substr(0, tab));
                std::string side = line.substr(tab + 1);
                KeywordSide s;
                if (side == "after") s = KeywordSide::PhraseAfter;
                else if (side == "before") s = KeywordSide::PhraseBefore;
                else if (side == "both") s = KeywordSide::Both;
                else throw MalformedRecord(line_no, "side must be after|before|both");
                if (!word.empty()) set.add(word, s, true);
            }
            if (last) break;
        }
        return set;
    }
};

struct CandidatePhrase {
    std::string text;          // normalized, stopword-trimmed
    std::string source_paper;  // title it came from
    std::string delimiter;     // keyword that produced it
};

// ---------------------------------------------------------------------------
// Harvesting
// ---------------------------------------------------------------------------

namespace detail {

// Title token segments: colons and sentence boundaries both end a segment.
inline std::vector<std::vector<std::string>> title_segments(const std::string& title) {
    std::vector<std::vector<std::string>> segments;
    std::size_t start = 0;
    std::vector<std::string> pieces;
    for (std::size_t i = 0; i <= title.size(); ++i) {
        if (i == title.size() || title[i] == ':') {
            pieces.push_back(title.substr(start, i - start));
            start = i + 1;
        }
    }
    for (const auto& piece : pieces) {
        for (const auto& sentence : split_sentences(piece)) {
            auto toks = tokenize(sentence).tokens;
            if (!toks.empty()) segments.push_back(std::move(toks));
        }
    }
    return segments;
}

struct Span {
    std::size_t begin = 0, end = 0;  // half-open token range
    std::string delimiter;
};

// Trim boundary stopwords; empty spans are dropped by the caller.
inline void trim_span(const std::vector<std::string>& tokens, Span& span,
                      const Stopwords& stopwords) {
    while (span.begin < span.end && stopwords.contains(tokens[span.begin])) ++span.begin;
    while (span.begin < span.end && stopwords.contains(tokens[span.end - 1])) --span.end;
}

}  // namespace detail

// Splits each title at keyword occurrences and emits the phrase on the
// keyword's configured side(s), trimmed at the next keyword or segment end.
inline std::vector<CandidatePhrase> harvest_phrases(
    const Corpus& corpus, const FunctionalKeywordSet& keys,
    const Stopwords& stopwords = Stopwords::builtin()) {
    std::vector<CandidatePhrase> out;
    for (const auto& [id, paper] : corpus.papers) {
        for (const auto& tokens : detail::title_segments(paper.title)) {
            std::vector<std::size_t> key_positions;
            for (std::size_t i = 0; i < tokens.size(); ++i)
                if (keys.contains(tokens[i])) key_positions.push_back(i);
            if (key_positions.empty()) continue;

            std::set<std::pair<std::size_t, std::size_t>> seen;
            for (std::size_t ki = 0; ki < key_positions.size(); ++ki) {
                std::size_t i = key_positions[ki];
                const FunctionalKeyword& kw = keys.keywords.at(tokens[i]);
                if (kw.side == KeywordSide::PhraseAfter || kw.side == KeywordSide::Both) {
                    std::size_t stop = ki + 1 < key_positions.size() ? key_positions[ki + 1]
                                                                     : tokens.size();
                    detail::Span span{i + 1, stop, kw.word};
                    detail::trim_span(tokens, span, stopwords);
                    if (span.begin < span.end && seen.insert({span.begin, span.end}).second)
                        out.push_back({join_tokens(tokens, span.begin, span.end), id, kw.word});
                }
                if (kw.side == KeywordSide::PhraseBefore || kw.side == KeywordSide::Both) {
                    std::size_t start = ki > 0 ? key_positions[ki - 1] + 1 : 0;
                    detail::Span span{start, i, kw.word};
                    detail::trim_span(tokens, span, stopwords);
                    if (span.begin < span.end && seen.insert({span.begin, span.end}).second)
                        out.push_back({join_tokens(tokens, span.begin, span.end), id, kw.word});
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ranking schemes
// ---------------------------------------------------------------------------

enum class Scheme { S1, S2, S3 };

inline const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::S1: return "s1";
        case Scheme::S2: return "s2";
        case Scheme::S3: return "s3";
    }
    return "s1";
}

struct SchemeParams {
    Scheme scheme = Scheme::S1;
    std::map<int, double> thresholds;  // n -> minimum score, S3 only
    int n_max = 4;
};

struct RankedArea {
    std::string phrase;
    int n = 0;
    long long count = 0;
    double score = 0.0;
    int rank = 0;
};

struct ScoredNgram {
    std::string phrase;
    int n = 0;
    long long count = 0;
    double score = 0.0;
};

// Occurrence counts of every 1..n_max-gram over the candidate phrases, each
// scored against one pooled denominator so scores compare across orders.
inline std::vector<ScoredNgram> score_ngrams(const std::vector<CandidatePhrase>& cands,
                                             int n_max) {
    std::map<std::string, ScoredNgram> table;
    long long total = 0;
    for (const auto& cand : cands) {
        TokenSequence seq;
        seq.tokens = tokenize(cand.text).tokens;
        for (const auto& gram : ngrams(seq, 1, n_max)) {
            auto& entry = table[gram.joined()];
            if (entry.count == 0) {
                entry.phrase = gram.joined();
                entry.n = gram.n;
            }
            entry.count += 1;
            total += 1;
        }
    }
    std::vector<ScoredNgram> out;
    out.reserve(table.size());
    for (auto& [phrase, entry] : table) {
        entry.score = total > 0 ? static_cast<double>(entry.count) / static_cast<double>(total)
                                : 0.0;
        out.push_back(entry);
    }
    return out;
}

// Border-dominance pruning: an (n-1)-gram is dropped when a *retained*
// n-gram has it as a token-wise prefix or suffix and strictly outscores it.
// Orders are processed top-down so a dominator must itself have survived.
inline std::vector<ScoredNgram> prune_borders(const std::vector<ScoredNgram>& scored) {
    std::map<std::string, const ScoredNgram*> by_phrase;
    int max_order = 0;
    for (const auto& g : scored) {
        by_phrase[g.phrase] = &g;
        max_order = std::max(max_order, g.n);
    }
    std::set<std::string> removed;
    for (int n = max_order; n >= 2; --n) {
        for (const auto& g : scored) {
            if (g.n != n || removed.count(g.phrase)) continue;
            auto tokens = tokenize(g.phrase).tokens;
            const std::string prefix = join_tokens(tokens, 0, tokens.size() - 1);
            const std::string suffix = join_tokens(tokens, 1, tokens.size());
            for (const std::string& border : {prefix, suffix}) {
                auto it = by_phrase.find(border);
                if (it != by_phrase.end() && g.score > it->second->score)
                    removed.insert(border);
            }
        }
    }
    std::vector<ScoredNgram> out;
    out.reserve(scored.size());
    for (const auto& g : scored)
        if (!removed.count(g.phrase)) out.push_back(g);
    return out;
}

inline std::vector<ScoredNgram> apply_thresholds(const std::vector<ScoredNgram>& scored,
                                                 const std::map<int, double>& thresholds,
                                                 int n_max) {
    for (int n = 1; n <= n_max; ++n)
        if (!thresholds.count(n)) throw MissingThreshold(n);
    std::vector<ScoredNgram> out;
    for (const auto& g : scored)
        if (g.score >= thresholds.at(g.n)) out.push_back(g);
    return out;
}

inline std::vector<RankedArea> to_ranked(std::vector<ScoredNgram> scored) {
    std::sort(scored.begin(), scored.end(), [](const ScoredNgram& a, const ScoredNgram& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.phrase < b.phrase;
    });
    std::vector<RankedArea> out;
    out.reserve(scored.size());
    int rank = 1;
    for (const auto& g : scored)
        out.push_back({g.phrase, g.n, g.count, g.score, rank++});
    return out;
}

inline std::vector<RankedArea> rank_areas(const std::vector<CandidatePhrase>& cands,
                                          const SchemeParams& params) {
    auto scored = score_ngrams(cands, params.n_max);
    if (params.scheme == Scheme::S2 || params.scheme == Scheme::S3)
        scored = prune_borders(scored);
    if (params.scheme == Scheme::S3)
        scored = apply_thresholds(scored, params.thresholds, params.n_max);
    return to_ranked(std::move(scored));
}

// ---------------------------------------------------------------------------
// Bootstrapped keyword expansion
// ---------------------------------------------------------------------------

struct BootstrapParams {
    int top_m = 50;        // trusted areas per round
    int min_support = 5;   // distinct titles required to admit a keyword
    int n_max = 4;
};

// Alternates harvesting with keyword admission: words adjacent to trusted
// area occurrences in titles become keyword candidates; candidates with
// enough distinct-title support join the set. Stops at fixpoint or
// max_rounds. Output always contains the seeds.
inline FunctionalKeywordSet bootstrap_keywords(const Corpus& corpus,
                                               const FunctionalKeywordSet& seeds,
                                               int max_rounds,
                                               const BootstrapParams& params = {},
                                               const Stopwords& stopwords = Stopwords::builtin()) {
    FunctionalKeywordSet keys = seeds;
    for (int round = 0; round < max_rounds; ++round) {
        auto cands = harvest_phrases(corpus, keys, stopwords);
        auto ranked = rank_areas(cands, SchemeParams{Scheme::S1, {}, params.n_max});
        std::vector<std::vector<std::string>> trusted;
        for (const auto& area : ranked) {
            if (static_cast<int>(trusted.size()) >= params.top_m) break;
            trusted.push_back(tokenize(area.phrase).tokens);
        }
        // (word, side) -> distinct source titles
        std::map<std::pair<std::string, KeywordSide>, std::set<std::string>> support;
        for (const auto& [id, paper] : corpus.papers) {
            for (const auto& tokens : detail::title_segments(paper.title)) {
                for (const auto& area : trusted) {
                    if (area.empty() || area.size() > tokens.size()) continue;
                    for (std::size_t i = 0; i + area.size() <= tokens.size(); ++i) {
                        if (!std::equal(area.begin(), area.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i)))
                            continue;
                        if (i > 0)
                            support[{tokens[i - 1], KeywordSide::PhraseAfter}].insert(id);
                        if (i + area.size() < tokens.size())
                            support[{tokens[i + area.size()], KeywordSide::PhraseBefore}].insert(id);
                    }
                }
            }
        }
        bool changed = false;
        for (const auto& [cand, titles] : support) {
            if (static_cast<int>(titles.size()) < params.min_support) continue;
            const auto& [word, side] = cand;
            auto it = keys.keywords.find(word);
            if (it == keys.keywords.end()) {
                keys.keywords.emplace(word, FunctionalKeyword{word, side, false});
                changed = true;
            } else if (it->second.side != side && it->second.side != KeywordSide::Both) {
                it->second.side = KeywordSide::Both;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return keys;
}

// ---------------------------------------------------------------------------
// Output format
// ---------------------------------------------------------------------------

inline std::string ranked_areas_csv(const std::vector<RankedArea>& areas) {
    std::string out = "rank,phrase,n,count,score\n";
    char buf[32];
    for (const auto& a : areas) {
        std::snprintf(buf, sizeof buf, "%.6f", a.score);
        out += std::to_string(a.rank) + "," + csv_field(a.phrase) + "," +
               std::to_string(a.n) + "," + std::to_string(a.count) + "," + buf + "\n";
    }
    return out;
}

}  // namespace atm
