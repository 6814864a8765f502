#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apptechminer/corpus.hpp"
#include "apptechminer/errors.hpp"
#include "apptechminer/textproc.hpp"
#include "apptechminer/util.hpp"

namespace atm {

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

// Unigram statistics over the title+abstract text of the papers that were
// assigned to `area` by a single direct match.
struct AreaLanguageModel {
    std::string area;
    std::map<std::string, long long> token_counts;
    long long total_tokens = 0;
    long long prior_count = 0;

    long long count(const std::string& token) const {
        auto it = token_counts.find(token);
        return it == token_counts.end() ? 0 : it->second;
    }
};

struct CollectionModel {
    std::map<std::string, long long> token_counts;
    long long total_tokens = 0;

    long long count(const std::string& token) const {
        auto it = token_counts.find(token);
        return it == token_counts.end() ? 0 : it->second;
    }
};

enum class AssignMethod { DirectMatchTitle, DirectMatchAbstract, LanguageModel, Unassigned };

inline const char* to_string(AssignMethod m) {
    switch (m) {
        case AssignMethod::DirectMatchTitle: return "DirectMatchTitle";
        case AssignMethod::DirectMatchAbstract: return "DirectMatchAbstract";
        case AssignMethod::LanguageModel: return "LanguageModel";
        case AssignMethod::Unassigned: return "Unassigned";
    }
    return "Unassigned";
}

inline std::optional<AssignMethod> assign_method_from_string(const std::string& s) {
    if (s == "DirectMatchTitle") return AssignMethod::DirectMatchTitle;
    if (s == "DirectMatchAbstract") return AssignMethod::DirectMatchAbstract;
    if (s == "LanguageModel") return AssignMethod::LanguageModel;
    if (s == "Unassigned") return AssignMethod::Unassigned;
    return std::nullopt;
}

struct AreaAssignment {
    std::string paper_id;
    std::string area;  // empty iff method == Unassigned
    AssignMethod method = AssignMethod::Unassigned;
    double log_score = 0.0;  // LanguageModel only

    bool operator==(const AreaAssignment&) const = default;
};

// ---------------------------------------------------------------------------
// Direct match
// ---------------------------------------------------------------------------

namespace detail {

inline bool contains_subsequence(const std::vector<std::string>& haystack,
                                 const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i)
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<std::ptrdiff_t>(i)))
            return true;
    return false;
}

struct DirectMatchDetail {
    std::set<std::string> areas;
    bool from_title = true;
};

inline DirectMatchDetail direct_match_detail(
    const Paper& paper, const std::vector<std::pair<std::string, std::vector<std::string>>>& area_tokens) {
    DirectMatchDetail result;
    auto title_tokens = tokenize(paper.title).tokens;
    for (const auto& [phrase, tokens] : area_tokens)
        if (contains_subsequence(title_tokens, tokens)) result.areas.insert(phrase);
    if (!result.areas.empty() || !paper.abstract) return result;
    result.from_title = false;
    auto abstract_tokens = tokenize(*paper.abstract).tokens;
    for (const auto& [phrase, tokens] : area_tokens)
        if (contains_subsequence(abstract_tokens, tokens)) result.areas.insert(phrase);
    return result;
}

inline std::vector<std::pair<std::string, std::vector<std::string>>> tokenize_areas(
    const std::vector<std::string>& areas) {
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    std::set<std::string> seen;
    for (const auto& area : areas) {
        std::string norm = normalize_phrase(area);
        if (norm.empty() || !seen.insert(norm).second) continue;
        out.emplace_back(norm, tokenize(norm).tokens);
    }
    return out;
}

}  // namespace detail

// Areas whose token sequence occurs contiguously in the title; when the
// title yields nothing and an abstract exists, the abstract is searched.
inline std::set<std::string> direct_match(const Paper& paper,
                                          const std::vector<std::string>& areas) {
    return detail::direct_match_detail(paper, detail::tokenize_areas(areas)).areas;
}

// ---------------------------------------------------------------------------
// Language models
// ---------------------------------------------------------------------------

// Builds one unigram model per area from single-direct-match assignments;
// the collection model is the pool of all area models.
inline std::pair<std::map<std::string, AreaLanguageModel>, CollectionModel>
build_language_models(const Corpus& corpus, const std::vector<AreaAssignment>& single_match) {
    std::map<std::string, AreaLanguageModel> models;
    for (const auto& assign : single_match) {
        if (assign.method != AssignMethod::DirectMatchTitle &&
            assign.method != AssignMethod::DirectMatchAbstract)
            continue;
        auto paper_it = corpus.papers.find(assign.paper_id);
        if (paper_it == corpus.papers.end()) continue;
        const Paper& paper = paper_it->second;
        auto& model = models[assign.area];
        model.area = assign.area;
        model.prior_count += 1;
        auto add_tokens = [&](const std::string& text) {
            for (const auto& tok : tokenize(text).tokens) {
                model.token_counts[tok] += 1;
                model.total_tokens += 1;
            }
        };
        add_tokens(paper.title);
        if (paper.abstract) add_tokens(*paper.abstract);
    }
    CollectionModel coll;
    for (const auto& [area, model] : models) {
        for (const auto& [tok, c] : model.token_counts) coll.token_counts[tok] += c;
        coll.total_tokens += model.total_tokens;
    }
    return {std::move(models), std::move(coll)};
}

// Jelinek-Mercer smoothed unigram probability:
// (1-lambda) * P_ml(token | model) + lambda * P_ml(token | collection).
inline double jm_probability(const std::string& token, const AreaLanguageModel& model,
                             const CollectionModel& coll, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidLambda(lambda);
    double model_term = 0.0;
    if (model.total_tokens > 0)
        model_term = static_cast<double>(model.count(token)) /
                     static_cast<double>(model.total_tokens);
    double coll_term = 0.0;
    if (coll.total_tokens > 0)
        coll_term = static_cast<double>(coll.count(token)) /
                    static_cast<double>(coll.total_tokens);
    return (1.0 - lambda) * model_term + lambda * coll_term;
}

// Log-space query-likelihood scoring: log prior + sum of log JM
// probabilities over the query tokens (title then abstract, in order).
// Tokens with zero collection probability are skipped for every candidate,
// keeping scores comparable. Ties break toward the larger prior, then the
// lexicographically smaller area.
inline AreaAssignment classify(const Paper& paper,
                               const std::map<std::string, AreaLanguageModel>& models,
                               const CollectionModel& coll, double lambda,
                               const std::optional<std::set<std::string>>& candidate_filter =
                                   std::nullopt) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidLambda(lambda);
    if (models.empty()) throw NoModels();

    std::vector<std::string> query = tokenize(paper.title).tokens;
    if (paper.abstract)
        for (auto& tok : tokenize(*paper.abstract).tokens) query.push_back(std::move(tok));

    const AreaLanguageModel* best = nullptr;
    double best_score = 0.0;
    for (const auto& [area, model] : models) {
        if (candidate_filter && !candidate_filter->count(area)) continue;
        double score = std::log(static_cast<double>(model.prior_count));
        for (const auto& tok : query) {
            if (coll.count(tok) == 0) continue;
            score += std::log(jm_probability(tok, model, coll, lambda));
        }
        bool better = best == nullptr || score > best_score ||
                      (score == best_score && (model.prior_count > best->prior_count ||
                                               (model.prior_count == best->prior_count &&
                                                area < best->area)));
        if (better) {
            best = &model;
            best_score = score;
        }
    }
    if (!best) return {paper.id, "", AssignMethod::Unassigned, 0.0};
    return {paper.id, best->area, AssignMethod::LanguageModel, best_score};
}

// ---------------------------------------------------------------------------
// Whole-phase driver
// ---------------------------------------------------------------------------

// Pass 1: direct-match every paper (single hit -> direct assignment).
// Pass 2: train per-area models on the single-match papers.
// Pass 3: language-model classification for zero-match papers
// (unrestricted) and multi-match papers (restricted to the matched set).
inline std::vector<AreaAssignment> assign_all(const Corpus& corpus,
                                              const std::vector<std::string>& areas,
                                              double lambda, int threads = 1) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidLambda(lambda);
    auto area_tokens = detail::tokenize_areas(areas);

    std::vector<const Paper*> papers;
    papers.reserve(corpus.papers.size());
    for (const auto& [id, paper] : corpus.papers) papers.push_back(&paper);

    std::vector<detail::DirectMatchDetail> matches(papers.size());
    parallel_chunks(papers.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            matches[i] = detail::direct_match_detail(*papers[i], area_tokens);
    });

    std::vector<AreaAssignment> result(papers.size());
    std::vector<AreaAssignment> single;
    for (std::size_t i = 0; i < papers.size(); ++i) {
        if (matches[i].areas.size() == 1) {
            result[i] = {papers[i]->id, *matches[i].areas.begin(),
                         matches[i].from_title ? AssignMethod::DirectMatchTitle
                                               : AssignMethod::DirectMatchAbstract,
                         0.0};
            single.push_back(result[i]);
        }
    }

    auto [models, coll] = build_language_models(corpus, single);

    parallel_chunks(papers.size(), threads, [&, &models = models, &coll = coll](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            if (matches[i].areas.size() == 1) continue;
            if (models.empty()) {
                result[i] = {papers[i]->id, "", AssignMethod::Unassigned, 0.0};
                continue;
            }
            std::optional<std::set<std::string>> filter;
            if (matches[i].areas.size() > 1) filter = matches[i].areas;
            result[i] = classify(*papers[i], models, coll, lambda, filter);
        }
    });
    return result;
}

inline std::string assignments_csv(const std::vector<AreaAssignment>& assignments) {
    std::string out = "paper_id,area,method,log_score\n";
    char buf[48];
    for (const auto& a : assignments) {
        if (a.method == AssignMethod::LanguageModel)
            std::snprintf(buf, sizeof buf, "%.6f", a.log_score);
        else
            buf[0] = '\0';
        out += csv_field(a.paper_id) + "," + csv_field(a.area) + "," +
               to_string(a.method) + "," + buf + "\n";
    }
    return out;
}

}  // namespace atm
