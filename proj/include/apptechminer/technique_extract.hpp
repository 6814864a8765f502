#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "apptechminer/corpus.hpp"
#include "apptechminer/textproc.hpp"

namespace atm {

struct MethodPaperCriteria {
    int k1 = 15;      // minimum distinct citing papers
    double k2 = 0.5;  // minimum fraction of contexts in methodology sections
};

struct MethodPaper {
    std::string paper_id;
    int citation_count = 0;
    double method_citation_fraction = 0.0;
};

// A paper qualifies iff it is cited by >= k1 distinct papers AND at least a
// k2 fraction of its citation contexts sit in methodology sections. Both
// thresholds are inclusive; papers with no contexts never qualify.
inline std::vector<MethodPaper> detect_method_papers(const Corpus& corpus,
                                                     const MethodPaperCriteria& criteria = {}) {
    std::vector<MethodPaper> out;
    for (const auto& [id, paper] : corpus.papers) {
        auto contexts = corpus.contexts_citing(id);
        if (contexts.empty()) continue;
        int cited_by = corpus.citations_of(id);
        if (cited_by < criteria.k1) continue;
        std::size_t in_method = 0;
        for (const auto* ctx : contexts)
            if (ctx->section_kind == SectionKind::Methodology) ++in_method;
        double fraction = static_cast<double>(in_method) / static_cast<double>(contexts.size());
        if (fraction >= criteria.k2)
            out.push_back({id, cited_by, fraction});
    }
    return out;
}

// Lexicographically ordered noun-phrase -> raw count map pooled over all
// citation contexts that cite any method paper.
struct GlobalTechniqueVector {
    std::vector<std::pair<std::string, long long>> entries;  // lex order
    std::map<std::string, std::size_t> index;                // phrase -> position

    std::size_t dimension() const { return entries.size(); }

    static GlobalTechniqueVector from_counts(const std::map<std::string, long long>& counts) {
        GlobalTechniqueVector vec;
        vec.entries.assign(counts.begin(), counts.end());
        for (std::size_t i = 0; i < vec.entries.size(); ++i)
            vec.index[vec.entries[i].first] = i;
        return vec;
    }
};

inline GlobalTechniqueVector build_global_vector(const Corpus& corpus,
                                                 const std::vector<MethodPaper>& method_papers,
                                                 const PosLexicon& lexicon = PosLexicon::builtin(),
                                                 const Stopwords& stopwords = Stopwords::builtin()) {
    std::set<std::string> method_ids;
    for (const auto& mp : method_papers) method_ids.insert(mp.paper_id);
    std::map<std::string, long long> counts;
    for (const auto& ctx : corpus.contexts) {
        if (!method_ids.count(ctx.cited_id)) continue;
        for (const auto& np : chunk_noun_phrases(ctx.sentence, lexicon, stopwords))
            counts[np.text] += 1;
    }
    return GlobalTechniqueVector::from_counts(counts);
}

struct RankedTechnique {
    std::string phrase;
    long long count = 0;
    int rank = 0;
};

// Count-descending view of the global vector, lexicographic tie-break.
inline std::vector<RankedTechnique> rank_techniques(const GlobalTechniqueVector& vec,
                                                    std::size_t top_k) {
    std::vector<std::pair<std::string, long long>> sorted = vec.entries;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (sorted.size() > top_k) sorted.resize(top_k);
    std::vector<RankedTechnique> out;
    out.reserve(sorted.size());
    int rank = 1;
    for (auto& [phrase, count] : sorted) out.push_back({phrase, count, rank++});
    return out;
}

inline std::string ranked_techniques_csv(const std::vector<RankedTechnique>& list) {
    std::string out = "rank,phrase,count\n";
    for (const auto& t : list)
        out += std::to_string(t.rank) + "," + csv_field(t.phrase) + "," +
               std::to_string(t.count) + "\n";
    return out;
}

}  // namespace atm
