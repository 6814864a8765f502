#pragma once

#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "apptechminer/errors.hpp"
#include "apptechminer/textproc.hpp"
#include "apptechminer/util.hpp"

namespace atm {

struct Section {
    std::string heading;
    std::string body;

    bool operator==(const Section&) const = default;
};

struct Paper {
    std::string id;
    std::string title;
    std::optional<std::string> abstract;
    int year = 0;
    std::string venue;
    std::vector<Section> sections;
    std::vector<std::string> references;

    bool operator==(const Paper&) const = default;
};

enum class SectionKind { Methodology, Other };

inline const char* to_string(SectionKind k) {
    return k == SectionKind::Methodology ? "Methodology" : "Other";
}

struct CitationContext {
    std::string citing_id;
    std::string cited_id;
    std::string sentence;
    std::string section_heading;
    SectionKind section_kind = SectionKind::Other;

    bool operator==(const CitationContext&) const = default;
};

inline const std::vector<std::string>& default_methodology_vocab() {
    static const std::vector<std::string> vocab = {
        "method", "methodology", "approach", "model", "algorithm",
        "system description"};
    return vocab;
}

struct CorpusConfig {
    bool lenient = true;
    int year_min = 1900;
    int year_max = 2100;
    std::vector<std::string> methodology_vocab = default_methodology_vocab();
};

// Substring match of a vocabulary term against the case-folded heading with
// leading numbering stripped. Total: any text maps to a kind.
inline SectionKind classify_section(std::string_view heading,
                                    const std::vector<std::string>& vocab =
                                        default_methodology_vocab()) {
    std::string folded;
    folded.reserve(heading.size());
    for (char c : heading)
        folded += detail::fold_byte(static_cast<unsigned char>(c));
    std::size_t start = folded.find_first_not_of("0123456789.()[]:- \t");
    if (start == std::string::npos) return SectionKind::Other;
    // collapse whitespace runs so multi-word vocabulary terms match
    std::string norm;
    bool prev_space = false;
    for (std::size_t i = start; i < folded.size(); ++i) {
        char c = folded[i];
        if (c == ' ' || c == '\t') {
            if (!prev_space && !norm.empty()) norm += ' ';
            prev_space = true;
        } else {
            norm += c;
            prev_space = false;
        }
    }
    for (const auto& term : vocab)
        if (norm.find(term) != std::string::npos) return SectionKind::Methodology;
    return SectionKind::Other;
}

// Per-citing-paper resolver from in-text marker content to cited paper id.
using MarkerResolver = std::map<std::string, std::string>;

// One context per (sentence, resolved marker) pair; a sentence citing two
// papers yields two contexts. Unresolvable markers are skipped and tallied.
inline std::vector<CitationContext> extract_citation_contexts(
    const Paper& paper, const MarkerResolver& resolver,
    const std::vector<std::string>& methodology_vocab = default_methodology_vocab(),
    std::size_t* unresolved_tally = nullptr) {
    std::vector<CitationContext> out;
    for (const auto& section : paper.sections) {
        SectionKind kind = classify_section(section.heading, methodology_vocab);
        for (const auto& sentence : split_sentences(section.body)) {
            std::size_t pos = 0;
            std::set<std::string> seen;  // one context per marker id per sentence
            while ((pos = sentence.find("[[", pos)) != std::string::npos) {
                std::size_t close = sentence.find("]]", pos + 2);
                if (close == std::string::npos) break;
                std::string marker = sentence.substr(pos + 2, close - pos - 2);
                pos = close + 2;
                if (!seen.insert(marker).second) continue;
                auto it = resolver.find(marker);
                if (it == resolver.end()) {
                    if (unresolved_tally) ++*unresolved_tally;
                    continue;
                }
                out.push_back({paper.id, it->second, sentence, section.heading, kind});
            }
        }
    }
    return out;
}

struct LoadIssue {
    std::size_t line = 0;
    std::string code;
    std::string detail;
};

struct LoadReport {
    std::vector<LoadIssue> issues;
    std::size_t unresolved_markers = 0;

    // One line per issue: `LINE <n>: <code>: <detail>`.
    void print(std::ostream& os) const {
        for (const auto& issue : issues)
            os << "LINE " << issue.line << ": " << issue.code << ": "
               << issue.detail << "\n";
    }
};

struct Corpus {
    std::map<std::string, Paper> papers;
    std::vector<CitationContext> contexts;
    // cited id -> indices into `contexts`, in context order
    std::map<std::string, std::vector<std::size_t>> inbound_index;
    // cited id -> number of distinct citing papers whose references resolve to it
    std::map<std::string, int> citation_count;

    int citations_of(const std::string& id) const {
        auto it = citation_count.find(id);
        return it == citation_count.end() ? 0 : it->second;
    }

    std::vector<const CitationContext*> contexts_citing(const std::string& id) const {
        std::vector<const CitationContext*> out;
        auto it = inbound_index.find(id);
        if (it == inbound_index.end()) return out;
        out.reserve(it->second.size());
        for (std::size_t k : it->second) out.push_back(&contexts[k]);
        return out;
    }
};

namespace detail {

inline void build_corpus_indexes(Corpus& corpus, const CorpusConfig& config,
                                 LoadReport& report,
                                 const std::map<std::string, std::size_t>& record_line) {
    auto line_of = [&](const std::string& id) -> std::size_t {
        auto it = record_line.find(id);
        return it == record_line.end() ? 0 : it->second;
    };
    for (const auto& [id, paper] : corpus.papers) {
        std::set<std::string> distinct(paper.references.begin(), paper.references.end());
        for (const auto& ref : distinct) {
            if (corpus.papers.count(ref)) {
                corpus.citation_count[ref] += 1;
            } else {
                report.issues.push_back({line_of(id), "UNRESOLVED_REFERENCE",
                                         id + " references unknown paper " + ref});
            }
        }
    }
    for (const auto& [id, paper] : corpus.papers) {
        MarkerResolver resolver;
        for (const auto& ref : paper.references)
            if (corpus.papers.count(ref)) resolver[ref] = ref;
        auto contexts = extract_citation_contexts(paper, resolver,
                                                  config.methodology_vocab,
                                                  &report.unresolved_markers);
        for (auto& ctx : contexts) {
            corpus.inbound_index[ctx.cited_id].push_back(corpus.contexts.size());
            corpus.contexts.push_back(std::move(ctx));
        }
    }
}

inline Paper parse_paper_record(const nlohmann::json& j, std::size_t line,
                                const CorpusConfig& config) {
    if (!j.is_object()) throw MalformedRecord(line, "record is not an object");
    Paper p;
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
        throw MalformedRecord(line, "missing or empty \"id\"");
    p.id = j["id"].get<std::string>();
    if (!j.contains("title") || !j["title"].is_string())
        throw MalformedRecord(line, "missing \"title\"");
    p.title = j["title"].get<std::string>();
    if (j.contains("abstract") && !j["abstract"].is_null()) {
        if (!j["abstract"].is_string()) throw MalformedRecord(line, "\"abstract\" must be a string");
        p.abstract = j["abstract"].get<std::string>();
    }
    if (!j.contains("year") || !j["year"].is_number_integer())
        throw MalformedRecord(line, "missing integer \"year\"");
    p.year = j["year"].get<int>();
    if (p.year < config.year_min || p.year > config.year_max)
        throw MalformedRecord(line, "year " + std::to_string(p.year) + " outside [" +
                                        std::to_string(config.year_min) + ", " +
                                        std::to_string(config.year_max) + "]");
    if (j.contains("venue")) {
        if (!j["venue"].is_string()) throw MalformedRecord(line, "\"venue\" must be a string");
        p.venue = j["venue"].get<std::string>();
    }
    if (j.contains("sections")) {
        if (!j["sections"].is_array()) throw MalformedRecord(line, "\"sections\" must be an array");
        for (const auto& s : j["sections"]) {
            if (!s.is_object() || !s.contains("heading") || !s.contains("body") ||
                !s["heading"].is_string() || !s["body"].is_string())
                throw MalformedRecord(line, "section needs string \"heading\" and \"body\"");
            p.sections.push_back({s["heading"].get<std::string>(), s["body"].get<std::string>()});
        }
    }
    if (j.contains("references")) {
        if (!j["references"].is_array()) throw MalformedRecord(line, "\"references\" must be an array");
        for (const auto& r : j["references"]) {
            if (!r.is_string()) throw MalformedRecord(line, "references must be strings");
            p.references.push_back(r.get<std::string>());
        }
    }
    return p;
}

}  // namespace detail

struct LoadResult {
    Corpus corpus;
    LoadReport report;
};

// Line-delimited JSON records, one paper per line. In lenient mode bad
// records are reported and skipped; otherwise the first problem throws.
inline LoadResult load_corpus(const std::string& path,
                              const CorpusConfig& config = {}) {
    std::string data = read_file(path);
    LoadResult result;
    std::map<std::string, std::size_t> record_line;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string line = data.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no;
        pos = eol + 1;
        if (line.empty() || line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line, nullptr, true);
            Paper p = detail::parse_paper_record(j, line_no, config);
            if (result.corpus.papers.count(p.id)) {
                if (!config.lenient) throw DuplicateId(p.id);
                result.report.issues.push_back({line_no, "DUPLICATE_ID", p.id});
                continue;
            }
            record_line[p.id] = line_no;
            result.corpus.papers.emplace(p.id, std::move(p));
        } catch (const nlohmann::json::parse_error& e) {
            if (!config.lenient) throw MalformedRecord(line_no, e.what());
            result.report.issues.push_back({line_no, "MALFORMED_RECORD", e.what()});
        } catch (const MalformedRecord& e) {
            if (!config.lenient) throw;
            result.report.issues.push_back({line_no, "MALFORMED_RECORD", e.what()});
        }
    }
    detail::build_corpus_indexes(result.corpus, config, result.report, record_line);
    return result;
}

inline nlohmann::json paper_to_json(const Paper& p) {
    nlohmann::json j;
    j["id"] = p.id;
    j["title"] = p.title;
    if (p.abstract) j["abstract"] = *p.abstract;
    j["year"] = p.year;
    j["venue"] = p.venue;
    j["sections"] = nlohmann::json::array();
    for (const auto& s : p.sections)
        j["sections"].push_back({{"heading", s.heading}, {"body", s.body}});
    j["references"] = p.references;
    return j;
}

inline std::string corpus_to_jsonl(const Corpus& corpus) {
    std::string out;
    for (const auto& [id, p] : corpus.papers) {
        out += paper_to_json(p).dump();
        out += '\n';
    }
    return out;
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
    write_file(path, corpus_to_jsonl(corpus));
}

}  // namespace atm
