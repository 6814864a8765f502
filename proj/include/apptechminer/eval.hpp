#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "apptechminer/errors.hpp"

namespace atm {

// Fraction of the top-K ranked phrases that are in the gold set; the
// denominator clamps to the list length for short lists.
inline double precision_at_k(const std::vector<std::string>& ranked,
                             const std::set<std::string>& gold, std::size_t k) {
    if (ranked.empty()) throw EmptyRanking();
    if (k < 1) throw InvalidRange("precision_at_k requires K >= 1");
    std::size_t depth = std::min(k, ranked.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < depth; ++i)
        if (gold.count(ranked[i])) ++hits;
    return static_cast<double>(hits) / static_cast<double>(depth);
}

inline double recall_of_list(const std::set<std::string>& extracted,
                             const std::set<std::string>& gold) {
    if (gold.empty()) throw EmptyGold();
    std::size_t hits = 0;
    for (const auto& g : gold)
        if (extracted.count(g)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

// Label agreement over the gold domain; papers missing from the prediction
// map count as misses.
inline double accuracy(const std::map<std::string, std::string>& pred,
                       const std::map<std::string, std::string>& gold) {
    if (gold.empty()) throw EmptyGold();
    std::size_t overlap = 0, matches = 0;
    for (const auto& [id, label] : gold) {
        auto it = pred.find(id);
        if (it == pred.end()) continue;
        ++overlap;
        if (it->second == label) ++matches;
    }
    if (overlap == 0) throw NoOverlap();
    return static_cast<double>(matches) / static_cast<double>(gold.size());
}

// Two-annotator yes/no agreement counts.
struct AgreementMatrix {
    long long yes_yes = 0;
    long long yes_no = 0;
    long long no_yes = 0;
    long long no_no = 0;

    long long total() const { return yes_yes + yes_no + no_yes + no_no; }
};

// kappa = (p_o - p_e) / (1 - p_e). Perfect observed agreement under
// degenerate chance agreement is 1; anything less is undefined.
inline double cohens_kappa(const AgreementMatrix& m) {
    long long total = m.total();
    if (total <= 0) throw InvalidRange("agreement matrix must have a positive total");
    double t = static_cast<double>(total);
    double p_o = static_cast<double>(m.yes_yes + m.no_no) / t;
    double row_yes = static_cast<double>(m.yes_yes + m.yes_no);
    double row_no = static_cast<double>(m.no_yes + m.no_no);
    double col_yes = static_cast<double>(m.yes_yes + m.no_yes);
    double col_no = static_cast<double>(m.yes_no + m.no_no);
    double p_e = (row_yes * col_yes + row_no * col_no) / (t * t);
    if (p_e >= 1.0) {
        if (p_o >= 1.0) return 1.0;
        throw DegenerateChanceAgreement();
    }
    return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace atm
