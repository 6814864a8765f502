#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "apptechminer/area_assign.hpp"
#include "apptechminer/area_extract.hpp"
#include "apptechminer/config.hpp"
#include "apptechminer/corpus.hpp"
#include "apptechminer/errors.hpp"
#include "apptechminer/technique_assign.hpp"
#include "apptechminer/technique_extract.hpp"
#include "apptechminer/util.hpp"

namespace atm {

inline constexpr int kKbSchemaVersion = 1;

struct BuildMeta {
    nlohmann::json config;
    std::string corpus_fingerprint;
    std::size_t corpus_papers = 0;
    std::vector<std::string> method_papers;
};

// The assembled product of all four phases plus the derived area->technique
// count matrix. Immutable after build; queries are concurrent-safe reads.
struct KnowledgeBase {
    std::vector<RankedArea> ranked_areas;
    std::map<std::string, AreaAssignment> paper_area;
    GlobalTechniqueVector global;
    std::map<std::string, TechniqueAssignment> paper_techniques;
    std::map<std::string, std::map<std::string, long long>> area_techniques;
    BuildMeta build_meta;

    std::set<std::string> method_paper_set() const {
        return {build_meta.method_papers.begin(), build_meta.method_papers.end()};
    }

    bool knows_area(const std::string& normalized) const {
        if (area_techniques.count(normalized)) return true;
        for (const auto& [id, assign] : paper_area)
            if (assign.area == normalized) return true;
        return false;
    }
};

// ---------------------------------------------------------------------------
// Area -> technique map
// ---------------------------------------------------------------------------

namespace detail {

inline std::map<std::string, std::vector<const CitationContext*>> outbound_contexts(
    const Corpus& corpus) {
    std::map<std::string, std::vector<const CitationContext*>> out;
    for (const auto& ctx : corpus.contexts) out[ctx.citing_id].push_back(&ctx);
    return out;
}

// Techniques of the method papers cited by `paper_id` in its
// methodology-section contexts, as a set (per-paper union).
inline std::set<std::string> techniques_used_by(
    const std::string& paper_id,
    const std::map<std::string, std::vector<const CitationContext*>>& outbound,
    const std::set<std::string>& method_papers,
    const std::map<std::string, TechniqueAssignment>& paper_techniques) {
    std::set<std::string> used;
    auto it = outbound.find(paper_id);
    if (it == outbound.end()) return used;
    std::set<std::string> cited_methods;
    for (const auto* ctx : it->second)
        if (ctx->section_kind == SectionKind::Methodology && method_papers.count(ctx->cited_id))
            cited_methods.insert(ctx->cited_id);
    for (const auto& m : cited_methods) {
        auto ta = paper_techniques.find(m);
        if (ta == paper_techniques.end()) continue;
        for (const auto& [phrase, score] : ta->second.techniques) used.insert(phrase);
    }
    return used;
}

}  // namespace detail

// For each paper with an assigned area: union the techniques of the method
// papers it cites in methodology-section contexts, then bump count[area][t]
// once per paper for each technique in that union.
inline std::map<std::string, std::map<std::string, long long>> build_area_technique_map(
    const Corpus& corpus, const std::map<std::string, AreaAssignment>& paper_area,
    const std::map<std::string, TechniqueAssignment>& paper_techniques,
    const std::set<std::string>& method_papers) {
    std::map<std::string, std::map<std::string, long long>> result;
    auto outbound = detail::outbound_contexts(corpus);
    for (const auto& [paper_id, assign] : paper_area) {
        if (assign.method == AssignMethod::Unassigned) continue;
        auto used = detail::techniques_used_by(paper_id, outbound, method_papers,
                                               paper_techniques);
        for (const auto& t : used) result[assign.area][t] += 1;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

inline std::vector<std::pair<std::string, long long>> query_techniques(
    const KnowledgeBase& kb, const std::string& area, std::size_t top_k) {
    std::string norm = normalize_phrase(area);
    if (!kb.knows_area(norm)) throw UnknownArea(area);
    std::vector<std::pair<std::string, long long>> out;
    auto it = kb.area_techniques.find(norm);
    if (it != kb.area_techniques.end())
        out.assign(it->second.begin(), it->second.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

inline std::vector<std::pair<std::string, long long>> query_areas_for_technique(
    const KnowledgeBase& kb, const std::string& technique, std::size_t top_k) {
    std::string norm = normalize_phrase(technique);
    if (!kb.global.index.count(norm)) throw UnknownTechnique(technique);
    std::vector<std::pair<std::string, long long>> out;
    for (const auto& [area, counts] : kb.area_techniques) {
        auto it = counts.find(norm);
        if (it != counts.end() && it->second > 0) out.emplace_back(area, it->second);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

// ---------------------------------------------------------------------------
// Temporal analyses
// ---------------------------------------------------------------------------

template <typename Payload>
struct TemporalBucket {
    int start_year = 0;
    int end_year = 0;  // inclusive; the last bucket may be short
    Payload payload;
};

using PopularityBucket = TemporalBucket<std::map<std::string, double>>;
using TechniqueTrendBucket = TemporalBucket<std::vector<std::pair<std::string, long long>>>;

namespace detail {

inline std::vector<std::pair<int, int>> tile_years(int year_from, int year_to,
                                                   int window_years) {
    if (window_years < 1) throw InvalidRange("window_years must be >= 1");
    if (year_from > year_to) throw InvalidRange("year range is empty");
    std::vector<std::pair<int, int>> buckets;
    for (int y = year_from; y <= year_to; y += window_years)
        buckets.emplace_back(y, std::min(y + window_years - 1, year_to));
    return buckets;
}

}  // namespace detail

// Per bucket: fraction of that bucket's papers (or citations) falling in
// each assigned area. Unassigned papers stay in the denominator, so
// fractions sum to <= 1.
inline std::vector<PopularityBucket> temporal_area_popularity(
    const KnowledgeBase& kb, const Corpus& corpus, int window_years, int year_from,
    int year_to, PopularityMetric metric = PopularityMetric::Papers) {
    std::vector<PopularityBucket> out;
    for (auto [start, end] : detail::tile_years(year_from, year_to, window_years)) {
        PopularityBucket bucket{start, end, {}};
        double total = 0.0;
        std::map<std::string, double> per_area;
        for (const auto& [id, paper] : corpus.papers) {
            if (paper.year < start || paper.year > end) continue;
            double weight = metric == PopularityMetric::Papers
                                ? 1.0
                                : static_cast<double>(corpus.citations_of(id));
            total += weight;
            auto it = kb.paper_area.find(id);
            if (it != kb.paper_area.end() && it->second.method != AssignMethod::Unassigned)
                per_area[it->second.area] += weight;
        }
        if (total > 0.0)
            for (const auto& [area, w] : per_area) bucket.payload[area] = w / total;
        out.push_back(std::move(bucket));
    }
    return out;
}

// Per bucket: technique usage counts contributed by this area's papers
// published inside the bucket, ranked and truncated to top_k.
inline std::vector<TechniqueTrendBucket> temporal_techniques_in_area(
    const KnowledgeBase& kb, const Corpus& corpus, const std::string& area,
    int window_years, std::size_t top_k, int year_from, int year_to) {
    std::string norm = normalize_phrase(area);
    if (!kb.knows_area(norm)) throw UnknownArea(area);
    auto outbound = detail::outbound_contexts(corpus);
    auto method_set = kb.method_paper_set();
    std::vector<TechniqueTrendBucket> out;
    for (auto [start, end] : detail::tile_years(year_from, year_to, window_years)) {
        TechniqueTrendBucket bucket{start, end, {}};
        std::map<std::string, long long> counts;
        for (const auto& [id, assign] : kb.paper_area) {
            if (assign.area != norm || assign.method == AssignMethod::Unassigned) continue;
            auto paper = corpus.papers.find(id);
            if (paper == corpus.papers.end()) continue;
            if (paper->second.year < start || paper->second.year > end) continue;
            for (const auto& t :
                 detail::techniques_used_by(id, outbound, method_set, kb.paper_techniques))
                counts[t] += 1;
        }
        bucket.payload.assign(counts.begin(), counts.end());
        std::sort(bucket.payload.begin(), bucket.payload.end(),
                  [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                  });
        if (bucket.payload.size() > top_k) bucket.payload.resize(top_k);
        out.push_back(std::move(bucket));
    }
    return out;
}

inline std::string popularity_csv(const std::vector<PopularityBucket>& buckets) {
    std::string out = "bucket_start,bucket_end,label,value\n";
    char buf[32];
    for (const auto& b : buckets) {
        for (const auto& [area, fraction] : b.payload) {
            std::snprintf(buf, sizeof buf, "%.6f", fraction);
            out += std::to_string(b.start_year) + "," + std::to_string(b.end_year) + "," +
                   csv_field(area) + "," + buf + "\n";
        }
    }
    return out;
}

inline std::string technique_trend_csv(const std::vector<TechniqueTrendBucket>& buckets) {
    std::string out = "bucket_start,bucket_end,label,value\n";
    for (const auto& b : buckets)
        for (const auto& [technique, count] : b.payload)
            out += std::to_string(b.start_year) + "," + std::to_string(b.end_year) + "," +
                   csv_field(technique) + "," + std::to_string(count) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Build
// ---------------------------------------------------------------------------

inline KnowledgeBase build_kb(const Corpus& corpus, const PipelineConfig& cfg,
                              const PosLexicon& lexicon = PosLexicon::builtin(),
                              const Stopwords& stopwords = Stopwords::builtin()) {
    KnowledgeBase kb;

    // phase 1: areas
    FunctionalKeywordSet keys = cfg.seed_keywords;
    if (cfg.bootstrap_rounds > 0)
        keys = bootstrap_keywords(corpus, keys, cfg.bootstrap_rounds,
                                  {cfg.bootstrap_top_m, cfg.bootstrap_min_support, cfg.n_max},
                                  stopwords);
    auto cands = harvest_phrases(corpus, keys, stopwords);
    kb.ranked_areas = rank_areas(cands, cfg.scheme_params());
    if (cfg.max_areas > 0 && kb.ranked_areas.size() > cfg.max_areas)
        kb.ranked_areas.resize(cfg.max_areas);

    // phase 2: paper -> area
    std::vector<std::string> area_phrases;
    area_phrases.reserve(kb.ranked_areas.size());
    for (const auto& a : kb.ranked_areas) area_phrases.push_back(a.phrase);
    for (auto& assign : assign_all(corpus, area_phrases, cfg.jm_lambda, cfg.threads))
        kb.paper_area[assign.paper_id] = assign;

    // phase 3: global technique vector
    auto method_papers = detect_method_papers(corpus, cfg.method_criteria());
    kb.global = build_global_vector(corpus, method_papers, lexicon, stopwords);

    // phase 4: paper -> techniques, for every cited paper with evidence
    std::vector<const Paper*> papers;
    papers.reserve(corpus.papers.size());
    for (const auto& [id, paper] : corpus.papers) papers.push_back(&paper);
    std::vector<TechniqueAssignment> assignments(papers.size());
    parallel_chunks(papers.size(), cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto local = build_local_vector(papers[i]->id, corpus, kb.global, lexicon, stopwords);
            assignments[i] = assign_techniques(papers[i]->id, local, kb.global,
                                               cfg.top_k_techniques, cfg.rank_key);
        }
    });
    for (auto& ta : assignments)
        if (!ta.techniques.empty()) kb.paper_techniques[ta.paper_id] = std::move(ta);

    // derived area -> technique matrix
    std::set<std::string> method_set;
    for (const auto& mp : method_papers) method_set.insert(mp.paper_id);
    kb.area_techniques =
        build_area_technique_map(corpus, kb.paper_area, kb.paper_techniques, method_set);

    kb.build_meta.config = config_snapshot(cfg);
    kb.build_meta.corpus_fingerprint = to_hex(fnv1a64(corpus_to_jsonl(corpus)));
    kb.build_meta.corpus_papers = corpus.papers.size();
    kb.build_meta.method_papers.assign(method_set.begin(), method_set.end());
    return kb;
}

// ---------------------------------------------------------------------------
// Persistence (canonical sorted-key JSON document)
// ---------------------------------------------------------------------------

inline nlohmann::json kb_to_json(const KnowledgeBase& kb) {
    nlohmann::json j;
    j["schema_version"] = kKbSchemaVersion;

    nlohmann::json meta;
    meta["config"] = kb.build_meta.config;
    meta["corpus_fingerprint"] = kb.build_meta.corpus_fingerprint;
    meta["corpus_papers"] = kb.build_meta.corpus_papers;
    meta["method_papers"] = kb.build_meta.method_papers;
    j["build_meta"] = meta;

    nlohmann::json areas = nlohmann::json::array();
    for (const auto& a : kb.ranked_areas)
        areas.push_back({{"rank", a.rank},
                         {"phrase", a.phrase},
                         {"n", a.n},
                         {"count", a.count},
                         {"score", a.score}});
    j["ranked_areas"] = areas;

    nlohmann::json paper_area;
    for (const auto& [id, assign] : kb.paper_area) {
        nlohmann::json entry;
        entry["area"] = assign.area;
        entry["method"] = to_string(assign.method);
        if (assign.method == AssignMethod::LanguageModel)
            entry["log_score"] = assign.log_score;
        paper_area[id] = entry;
    }
    j["paper_area"] = paper_area;

    nlohmann::json techniques = nlohmann::json::array();
    for (const auto& t : rank_techniques(kb.global, kb.global.dimension()))
        techniques.push_back({{"rank", t.rank}, {"phrase", t.phrase}, {"count", t.count}});
    j["ranked_techniques"] = techniques;

    nlohmann::json paper_techniques;
    for (const auto& [id, ta] : kb.paper_techniques) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& [phrase, score] : ta.techniques)
            list.push_back({{"technique", phrase}, {"score", score}});
        paper_techniques[id] = list;
    }
    j["paper_techniques"] = paper_techniques;

    nlohmann::json area_techniques;
    for (const auto& [area, counts] : kb.area_techniques) {
        nlohmann::json inner;
        for (const auto& [t, c] : counts) inner[t] = c;
        area_techniques[area] = inner;
    }
    j["area_techniques"] = area_techniques;
    return j;
}

inline void save_kb(const KnowledgeBase& kb, const std::string& path) {
    write_file(path, kb_to_json(kb).dump(2) + "\n");
}

inline KnowledgeBase kb_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("schema_version") ||
        !j["schema_version"].is_number_integer())
        throw SchemaVersionMismatch(-1, kKbSchemaVersion);
    int version = j["schema_version"].get<int>();
    if (version != kKbSchemaVersion) throw SchemaVersionMismatch(version, kKbSchemaVersion);

    KnowledgeBase kb;
    const auto& meta = j.at("build_meta");
    kb.build_meta.config = meta.value("config", nlohmann::json::object());
    kb.build_meta.corpus_fingerprint = meta.value("corpus_fingerprint", "");
    kb.build_meta.corpus_papers = meta.value("corpus_papers", std::size_t{0});
    for (const auto& id : meta.value("method_papers", nlohmann::json::array()))
        kb.build_meta.method_papers.push_back(id.get<std::string>());

    for (const auto& a : j.at("ranked_areas"))
        kb.ranked_areas.push_back({a.at("phrase").get<std::string>(), a.at("n").get<int>(),
                                   a.at("count").get<long long>(),
                                   a.at("score").get<double>(), a.at("rank").get<int>()});

    for (const auto& [id, entry] : j.at("paper_area").items()) {
        AreaAssignment assign;
        assign.paper_id = id;
        assign.area = entry.at("area").get<std::string>();
        auto method = assign_method_from_string(entry.at("method").get<std::string>());
        if (!method) throw IoError("unknown assignment method in KB file");
        assign.method = *method;
        if (entry.contains("log_score")) assign.log_score = entry["log_score"].get<double>();
        kb.paper_area[id] = std::move(assign);
    }

    std::map<std::string, long long> counts;
    for (const auto& t : j.at("ranked_techniques"))
        counts[t.at("phrase").get<std::string>()] = t.at("count").get<long long>();
    kb.global = GlobalTechniqueVector::from_counts(counts);

    for (const auto& [id, list] : j.at("paper_techniques").items()) {
        TechniqueAssignment ta;
        ta.paper_id = id;
        for (const auto& item : list)
            ta.techniques.emplace_back(item.at("technique").get<std::string>(),
                                       item.at("score").get<long long>());
        kb.paper_techniques[id] = std::move(ta);
    }

    for (const auto& [area, inner] : j.at("area_techniques").items())
        for (const auto& [t, c] : inner.items())
            kb.area_techniques[area][t] = c.get<long long>();
    return kb;
}

inline KnowledgeBase load_kb(const std::string& path) {
    std::string data = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(data);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("cannot parse KB file: ") + e.what());
    }
    return kb_from_json(j);
}

}  // namespace atm
