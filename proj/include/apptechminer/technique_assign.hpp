#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "apptechminer/corpus.hpp"
#include "apptechminer/errors.hpp"
#include "apptechminer/technique_extract.hpp"
#include "apptechminer/textproc.hpp"

namespace atm {

// Noun-phrase counts over the contexts citing one paper, aligned to the
// global vocabulary; out-of-vocabulary phrases carry no weight.
struct LocalTechniqueVector {
    std::string paper_id;
    std::vector<long long> counts;  // parallel to GlobalTechniqueVector::entries
};

inline LocalTechniqueVector build_local_vector(const std::string& paper_id,
                                               const Corpus& corpus,
                                               const GlobalTechniqueVector& global_vec,
                                               const PosLexicon& lexicon = PosLexicon::builtin(),
                                               const Stopwords& stopwords = Stopwords::builtin()) {
    LocalTechniqueVector local;
    local.paper_id = paper_id;
    local.counts.assign(global_vec.dimension(), 0);
    for (const auto* ctx : corpus.contexts_citing(paper_id)) {
        for (const auto& np : chunk_noun_phrases(ctx->sentence, lexicon, stopwords)) {
            auto it = global_vec.index.find(np.text);
            if (it != global_vec.index.end()) local.counts[it->second] += 1;
        }
    }
    return local;
}

// Which per-component value orders the technique list.
enum class RankKey { Product, Local, Global };

inline const char* to_string(RankKey k) {
    switch (k) {
        case RankKey::Product: return "product";
        case RankKey::Local: return "local";
        case RankKey::Global: return "global";
    }
    return "product";
}

struct TechniqueAssignment {
    std::string paper_id;
    // (phrase, local*global product), at most K entries, score-descending
    std::vector<std::pair<std::string, long long>> techniques;
};

// Component-wise local*global products over the shared vocabulary, ranked
// descending (lexicographic tie-break) and truncated to K. The stored score
// is always the product; rank_key only selects the ordering key.
inline TechniqueAssignment assign_techniques(const std::string& paper_id,
                                             const LocalTechniqueVector& local,
                                             const GlobalTechniqueVector& global_vec,
                                             std::size_t top_k,
                                             RankKey rank_key = RankKey::Product) {
    if (local.counts.size() != global_vec.dimension())
        throw DimensionMismatch(local.counts.size(), global_vec.dimension());

    struct Entry {
        const std::string* phrase;
        long long product;
        long long key;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < local.counts.size(); ++i) {
        long long lc = local.counts[i];
        if (lc <= 0) continue;
        long long gc = global_vec.entries[i].second;
        long long product = lc * gc;
        long long key = product;
        if (rank_key == RankKey::Local) key = lc;
        else if (rank_key == RankKey::Global) key = gc;
        entries.push_back({&global_vec.entries[i].first, product, key});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.key != b.key) return a.key > b.key;
        return *a.phrase < *b.phrase;
    });
    if (entries.size() > top_k) entries.resize(top_k);

    TechniqueAssignment out;
    out.paper_id = paper_id;
    out.techniques.reserve(entries.size());
    for (const auto& e : entries) out.techniques.emplace_back(*e.phrase, e.product);
    return out;
}

inline std::string technique_assignments_csv(const std::vector<TechniqueAssignment>& list) {
    std::string out = "paper_id,rank,technique,score\n";
    for (const auto& a : list) {
        int rank = 1;
        for (const auto& [phrase, score] : a.techniques)
            out += csv_field(a.paper_id) + "," + std::to_string(rank++) + "," +
                   csv_field(phrase) + "," + std::to_string(score) + "\n";
    }
    return out;
}

}  // namespace atm
