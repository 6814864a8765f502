#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "apptechminer/area_extract.hpp"
#include "apptechminer/corpus.hpp"
#include "apptechminer/errors.hpp"
#include "apptechminer/technique_assign.hpp"
#include "apptechminer/util.hpp"

namespace atm {

enum class PopularityMetric { Papers, Citations };

inline const char* to_string(PopularityMetric p) {
    return p == PopularityMetric::Papers ? "papers" : "citations";
}

// Every pipeline tunable with its default. Precedence when assembled by the
// CLI: flags > config file > defaults. Scheme 3 thresholds default to values
// calibrated on the bundled synthetic corpus; override them per corpus.
struct PipelineConfig {
    // corpus
    bool lenient = true;
    int year_min = 1900;
    int year_max = 2100;
    std::vector<std::string> methodology_vocab = default_methodology_vocab();

    // phase 1: area extraction
    FunctionalKeywordSet seed_keywords = FunctionalKeywordSet::default_seeds();
    int n_max = 4;
    Scheme scheme = Scheme::S3;
    std::map<int, double> thresholds = {{1, 0.08}, {2, 0.01}, {3, 0.01}, {4, 0.01}};
    // keyword expansion is opt-in for the assembled pipeline; the
    // bootstrap_keywords operation itself defaults to 3 rounds when invoked
    int bootstrap_rounds = 0;
    int bootstrap_top_m = 50;
    int bootstrap_min_support = 5;
    std::size_t max_areas = 0;  // 0 = keep every phrase surviving the scheme

    // phase 2: area assignment
    double jm_lambda = 0.7;

    // phase 3: technique extraction
    int k1 = 15;
    double k2 = 0.5;

    // phase 4: technique assignment
    std::size_t top_k_techniques = 5;
    RankKey rank_key = RankKey::Product;

    // temporal analysis
    int window_years = 5;
    PopularityMetric popularity = PopularityMetric::Papers;

    // execution
    int threads = 1;

    // optional resource overrides (paths)
    std::string lexicon_file;
    std::string stopword_file;
    std::string keywords_file;

    CorpusConfig corpus_config() const {
        return CorpusConfig{lenient, year_min, year_max, methodology_vocab};
    }

    SchemeParams scheme_params() const { return SchemeParams{scheme, thresholds, n_max}; }

    MethodPaperCriteria method_criteria() const { return MethodPaperCriteria{k1, k2}; }
};

namespace detail {

inline bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("expected a boolean, got \"" + v + "\"");
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v + ",") {
        if (c == ',') {
            std::size_t a = cur.find_first_not_of(" \t");
            std::size_t b = cur.find_last_not_of(" \t");
            if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

inline KeywordSide parse_side(const std::string& s) {
    if (s == "after") return KeywordSide::PhraseAfter;
    if (s == "before") return KeywordSide::PhraseBefore;
    if (s == "both") return KeywordSide::Both;
    throw UsageError("keyword side must be after|before|both, got \"" + s + "\"");
}

}  // namespace detail

// Applies one `key = value` setting. Unknown keys are errors so typos never
// pass silently.
inline void apply_config_setting(PipelineConfig& cfg, const std::string& key,
                                 const std::string& value) {
    try {
        if (key == "lenient") cfg.lenient = detail::parse_bool(value);
        else if (key == "year_min") cfg.year_min = std::stoi(value);
        else if (key == "year_max") cfg.year_max = std::stoi(value);
        else if (key == "methodology_vocab") {
            cfg.methodology_vocab.clear();
            for (auto& term : detail::split_list(value)) {
                std::string norm = normalize_phrase(term);
                if (!norm.empty()) cfg.methodology_vocab.push_back(norm);
            }
        } else if (key == "seed_keywords") {
            FunctionalKeywordSet set;
            for (auto& item : detail::split_list(value)) {
                std::size_t colon = item.find(':');
                if (colon == std::string::npos)
                    throw UsageError("seed_keywords items are word:side");
                set.add(normalize_phrase(item.substr(0, colon)),
                        detail::parse_side(item.substr(colon + 1)), true);
            }
            if (set.keywords.empty()) throw UsageError("seed_keywords must be non-empty");
            cfg.seed_keywords = std::move(set);
        } else if (key == "n_max") {
            cfg.n_max = std::stoi(value);
            if (cfg.n_max < 1) throw UsageError("n_max must be >= 1");
        } else if (key == "scheme") {
            if (value == "s1") cfg.scheme = Scheme::S1;
            else if (value == "s2") cfg.scheme = Scheme::S2;
            else if (value == "s3") cfg.scheme = Scheme::S3;
            else throw UsageError("scheme must be s1|s2|s3");
        } else if (key.rfind("threshold_", 0) == 0) {
            int n = std::stoi(key.substr(10));
            if (n < 1) throw UsageError("threshold order must be >= 1");
            cfg.thresholds[n] = std::stod(value);
        } else if (key == "bootstrap_rounds") cfg.bootstrap_rounds = std::stoi(value);
        else if (key == "bootstrap_top_m") cfg.bootstrap_top_m = std::stoi(value);
        else if (key == "bootstrap_min_support") cfg.bootstrap_min_support = std::stoi(value);
        else if (key == "max_areas") cfg.max_areas = static_cast<std::size_t>(std::stoull(value));
        else if (key == "jm_lambda") {
            cfg.jm_lambda = std::stod(value);
            if (!(cfg.jm_lambda > 0.0 && cfg.jm_lambda < 1.0)) throw InvalidLambda(cfg.jm_lambda);
        } else if (key == "k1") {
            cfg.k1 = std::stoi(value);
            if (cfg.k1 < 0) throw UsageError("k1 must be >= 0");
        } else if (key == "k2") {
            cfg.k2 = std::stod(value);
            if (cfg.k2 < 0.0 || cfg.k2 > 1.0) throw UsageError("k2 must lie in [0, 1]");
        } else if (key == "top_k") {
            cfg.top_k_techniques = static_cast<std::size_t>(std::stoull(value));
            if (cfg.top_k_techniques < 1) throw UsageError("top_k must be >= 1");
        } else if (key == "rank_key") {
            if (value == "product") cfg.rank_key = RankKey::Product;
            else if (value == "local") cfg.rank_key = RankKey::Local;
            else if (value == "global") cfg.rank_key = RankKey::Global;
            else throw UsageError("rank_key must be product|local|global");
        } else if (key == "window_years") {
            cfg.window_years = std::stoi(value);
            if (cfg.window_years < 1) throw UsageError("window_years must be >= 1");
        } else if (key == "popularity") {
            if (value == "papers") cfg.popularity = PopularityMetric::Papers;
            else if (value == "citations") cfg.popularity = PopularityMetric::Citations;
            else throw UsageError("popularity must be papers|citations");
        } else if (key == "threads") {
            cfg.threads = std::stoi(value);
            if (cfg.threads < 1) throw UsageError("threads must be >= 1");
        } else if (key == "lexicon_file") cfg.lexicon_file = value;
        else if (key == "stopword_file") cfg.stopword_file = value;
        else if (key == "keywords_file") cfg.keywords_file = value;
        else throw UsageError("unknown config key \"" + key + "\"");
    } catch (const std::invalid_argument&) {
        throw UsageError("bad value for " + key + ": \"" + value + "\"");
    } catch (const std::out_of_range&) {
        throw UsageError("value out of range for " + key + ": \"" + value + "\"");
    }
}

// UTF-8 `key = value` file; blank lines and #-comments ignored.
inline void load_config_file(PipelineConfig& cfg, const std::string& path) {
    std::string data = read_file(path);
    std::size_t line_no = 0, pos = 0;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string line = data.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no;
        pos = eol + 1;
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw MalformedRecord(line_no, "config line needs key = value");
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            std::size_t b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        apply_config_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

// Canonical snapshot embedded in the KB so results stay attributable to the
// parameters that produced them.
inline nlohmann::json config_snapshot(const PipelineConfig& cfg) {
    nlohmann::json j;
    j["lenient"] = cfg.lenient;
    j["year_min"] = cfg.year_min;
    j["year_max"] = cfg.year_max;
    j["methodology_vocab"] = cfg.methodology_vocab;
    nlohmann::json keys = nlohmann::json::array();
    for (const auto& [word, kw] : cfg.seed_keywords.keywords)
        keys.push_back({{"word", word}, {"side", to_string(kw.side)}, {"seed", kw.seed}});
    j["seed_keywords"] = keys;
    j["n_max"] = cfg.n_max;
    j["scheme"] = to_string(cfg.scheme);
    nlohmann::json th;
    for (const auto& [n, v] : cfg.thresholds) th[std::to_string(n)] = v;
    j["thresholds"] = th;
    j["bootstrap_rounds"] = cfg.bootstrap_rounds;
    j["bootstrap_top_m"] = cfg.bootstrap_top_m;
    j["bootstrap_min_support"] = cfg.bootstrap_min_support;
    j["max_areas"] = cfg.max_areas;
    j["jm_lambda"] = cfg.jm_lambda;
    j["k1"] = cfg.k1;
    j["k2"] = cfg.k2;
    j["top_k"] = cfg.top_k_techniques;
    j["rank_key"] = to_string(cfg.rank_key);
    j["window_years"] = cfg.window_years;
    j["popularity"] = to_string(cfg.popularity);
    return j;
}

}  // namespace atm
