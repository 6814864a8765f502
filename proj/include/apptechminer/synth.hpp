#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "apptechminer/corpus.hpp"
#include "apptechminer/errors.hpp"
#include "apptechminer/util.hpp"

namespace atm {

// Label carried by injected noise papers in the ground-truth map; they have
// no recoverable area and evaluations exclude them.
inline constexpr const char* kNoiseAreaLabel = "(noise)";

struct SynthConfig {
    std::uint64_t rng_seed = 1;
    int n_areas = 5;
    int papers_per_area = 20;
    int n_method_papers = 10;
    int techniques_per_method_paper = 2;
    int year_from = 1980;
    int year_to = 2013;
    double noise_rate = 0.0;
    // thresholds the generated citation structure must satisfy
    int k1 = 15;
    double k2 = 0.5;
    // fraction of each area's papers that only mention their area's tokens
    // non-contiguously, forcing language-model classification
    double lm_paper_rate = 0.1;
};

struct GroundTruth {
    std::set<std::string> planted_areas;
    std::map<std::string, std::string> paper_area;  // every generated paper
    std::map<std::string, std::set<std::string>> method_paper_techniques;
    // citing paper -> union of planted techniques of the method papers it
    // cites in methodology-section contexts
    std::map<std::string, std::set<std::string>> paper_expected_techniques;
};

struct SynthResult {
    Corpus corpus;
    GroundTruth truth;
};

namespace detail {

// Token sets are pairwise disjoint across the three pools so planted areas
// are separable from techniques and filler at noise_rate 0.
inline const std::vector<std::string>& synth_area_pool() {
    static const std::vector<std::string> pool = {
        "machine translation", "dependency parsing", "speech recognition",
        "information extraction", "question answering", "sentiment analysis",
        "coreference resolution", "word segmentation", "semantic labeling",
        "entity linking", "dialogue systems", "grammar induction"};
    return pool;
}

inline const std::vector<std::string>& synth_technique_pool() {
    static const std::vector<std::string> pool = {
        "bleu score", "penn treebank", "viterbi decoder", "gibbs sampler",
        "beam search", "maximum entropy", "perceptron tagger", "softmax classifier",
        "charniak parser", "hmm aligner", "crf chunker", "topic model",
        "vector quantizer", "kernel machine", "suffix automaton", "hash embedding"};
    return pool;
}

inline const std::vector<std::string>& synth_filler_adjs() {
    static const std::vector<std::string> pool = {"robust", "adaptive", "scalable",
                                                  "efficient", "modular", "incremental"};
    return pool;
}

inline const std::vector<std::string>& synth_filler_nouns() {
    static const std::vector<std::string> pool = {"framework", "toolkit", "pipeline",
                                                  "architecture", "workbench", "testbed"};
    return pool;
}

inline const std::vector<std::string>& synth_noise_words() {
    static const std::vector<std::string> pool = {
        "quantum", "fractal", "photonic", "crystalline", "orbital", "seismic",
        "thermal", "magnetic", "volcanic", "glacial", "enzyme", "neutron",
        "photon", "plasma", "membrane", "tectonic"};
    return pool;
}

inline std::string padded_id(char prefix, int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%04d", prefix, n);
    return buf;
}

}  // namespace detail

// Deterministic synthetic corpus with planted areas, techniques, method
// papers and citation structure, plus the matching ground truth.
inline SynthResult generate(const SynthConfig& config) {
    if (config.n_areas < 1 || config.papers_per_area < 1 || config.n_method_papers < 1 ||
        config.techniques_per_method_paper < 1)
        throw InfeasibleConfig("all counts must be >= 1");
    if (config.noise_rate < 0.0 || config.noise_rate >= 0.5)
        throw InfeasibleConfig("noise_rate must lie in [0, 0.5)");
    if (config.year_from > config.year_to)
        throw InfeasibleConfig("year_from must not exceed year_to");
    const auto& area_pool = detail::synth_area_pool();
    const auto& tech_pool = detail::synth_technique_pool();
    if (config.n_areas > static_cast<int>(area_pool.size()))
        throw InfeasibleConfig("at most " + std::to_string(area_pool.size()) +
                               " planted areas are supported");
    if (config.techniques_per_method_paper > static_cast<int>(tech_pool.size()))
        throw InfeasibleConfig("at most " + std::to_string(tech_pool.size()) +
                               " techniques per method paper are supported");
    const int n_area_papers = config.n_areas * config.papers_per_area;
    if (n_area_papers < config.k1)
        throw InfeasibleConfig("need at least k1=" + std::to_string(config.k1) +
                               " papers to cite each method paper, have " +
                               std::to_string(n_area_papers));

    Rng rng(config.rng_seed);
    const auto& adjs = detail::synth_filler_adjs();
    const auto& nouns = detail::synth_filler_nouns();
    const int year_span = config.year_to - config.year_from + 1;

    SynthResult result;
    GroundTruth& truth = result.truth;
    std::map<std::string, Paper> papers;

    std::vector<std::string> areas(area_pool.begin(), area_pool.begin() + config.n_areas);
    truth.planted_areas.insert(areas.begin(), areas.end());

    // area papers; the tail lm-share of each area avoids contiguous mentions
    std::vector<std::string> area_paper_ids;
    int lm_papers_per_area = static_cast<int>(config.papers_per_area * config.lm_paper_rate);
    int serial = 0;
    for (int a = 0; a < config.n_areas; ++a) {
        const std::string& area = areas[static_cast<std::size_t>(a)];
        auto area_tokens = tokenize(area).tokens;
        for (int p = 0; p < config.papers_per_area; ++p) {
            Paper paper;
            paper.id = detail::padded_id('a', serial);
            paper.year = config.year_from + serial % year_span;
            paper.venue = serial % 3 == 0 ? "synthcl" : "synthnlp";
            const std::string adj = adjs[rng.below(adjs.size())];
            const std::string noun = nouns[rng.below(nouns.size())];
            bool lm_paper = p >= config.papers_per_area - lm_papers_per_area;
            if (lm_paper && area_tokens.size() >= 2) {
                paper.title = "a " + adj + " study of " + area_tokens[1] + " driven " +
                              area_tokens[0] + " models";
                paper.abstract = "this work studies " + area_tokens[0] + " and " +
                                 area_tokens[1] + " in applied settings .";
            } else {
                switch (rng.below(3)) {
                    case 0: paper.title = "a " + adj + " " + noun + " for " + area; break;
                    case 1: paper.title = area + " using a " + adj + " " + noun; break;
                    default:
                        paper.title = "a " + adj + " " + noun + " for " + area + " using " +
                                      nouns[rng.below(nouns.size())];
                }
                paper.abstract = "we present a " + adj + " " + noun + " for " + area +
                                 " . experiments are reported .";
            }
            truth.paper_area[paper.id] = area;
            area_paper_ids.push_back(paper.id);
            papers.emplace(paper.id, std::move(paper));
            ++serial;
        }
    }

    // method papers with planted technique sets
    std::vector<std::string> method_ids;
    std::vector<std::vector<std::string>> method_techniques;
    int tech_cursor = 0;
    for (int m = 0; m < config.n_method_papers; ++m) {
        Paper paper;
        paper.id = detail::padded_id('m', m);
        paper.year = config.year_from + (m * 3) % year_span;
        paper.venue = "synthtools";
        const std::string& area = areas[static_cast<std::size_t>(m % config.n_areas)];
        std::vector<std::string> planted;
        for (int t = 0; t < config.techniques_per_method_paper; ++t) {
            planted.push_back(tech_pool[static_cast<std::size_t>(tech_cursor) % tech_pool.size()]);
            ++tech_cursor;
        }
        paper.title = planted[0] + " : a " + nouns[rng.below(nouns.size())] + " for " + area;
        paper.abstract = "we describe the " + planted[0] + " for " + area + " .";
        truth.paper_area[paper.id] = area;
        truth.method_paper_techniques[paper.id] = {planted.begin(), planted.end()};
        method_ids.push_back(paper.id);
        method_techniques.push_back(std::move(planted));
        papers.emplace(paper.id, std::move(paper));
    }

    // citation structure: every method paper gets >= k1 distinct citers with
    // >= k2 of the contexts in methodology sections, each context naming one
    // planted technique
    auto cite_sentence = [](std::size_t variant, const std::string& technique,
                            const std::string& target) {
        switch (variant % 3) {
            case 0: return "We apply the " + technique + " of [[" + target + "]].";
            case 1: return "We use the " + technique + " from [[" + target + "]].";
            default: return "The " + technique + " of [[" + target + "]] is used.";
        }
    };
    std::map<std::string, std::vector<std::string>> method_sentences;  // citer -> sentences
    std::map<std::string, std::vector<std::string>> other_sentences;
    int citers_per_method = std::min(n_area_papers, config.k1 + 3);
    std::size_t rotation = 0;
    for (std::size_t m = 0; m < method_ids.size(); ++m) {
        for (int c = 0; c < citers_per_method; ++c) {
            const std::string& citer = area_paper_ids[rotation % area_paper_ids.size()];
            ++rotation;
            const std::string& technique =
                method_techniques[m][static_cast<std::size_t>(c) %
                                     method_techniques[m].size()];
            std::string sentence =
                cite_sentence(static_cast<std::size_t>(c), technique, method_ids[m]);
            bool in_method = c % 5 != 4;  // 80% methodology share
            Paper& paper = papers.at(citer);
            paper.references.push_back(method_ids[m]);
            if (in_method) {
                method_sentences[citer].push_back(sentence);
                truth.paper_expected_techniques[citer].insert(
                    truth.method_paper_techniques[method_ids[m]].begin(),
                    truth.method_paper_techniques[method_ids[m]].end());
            } else {
                other_sentences[citer].push_back(sentence);
            }
        }
    }

    // noise papers: keyword-free salad titles, citations with salad contexts
    const auto& noise_words = detail::synth_noise_words();
    int n_noise = static_cast<int>(config.noise_rate *
                                   (n_area_papers + config.n_method_papers));
    std::vector<std::string> citable(area_paper_ids);
    citable.insert(citable.end(), method_ids.begin(), method_ids.end());
    for (int n = 0; n < n_noise; ++n) {
        Paper paper;
        paper.id = detail::padded_id('n', n);
        paper.year = config.year_from + (n * 5) % year_span;
        paper.venue = "synthmisc";
        std::size_t len = 3 + rng.below(3);
        for (std::size_t w = 0; w < len; ++w) {
            if (w) paper.title += ' ';
            paper.title += noise_words[rng.below(noise_words.size())];
        }
        for (int cite = 0; cite < 2; ++cite) {
            const std::string& target = citable[rng.below(citable.size())];
            std::string np = noise_words[rng.below(noise_words.size())] + " " +
                             noise_words[rng.below(noise_words.size())];
            std::string sentence = "The " + np + " of [[" + target + "]] is used.";
            paper.references.push_back(target);
            bool in_method = rng.below(2) == 0;
            Section section{in_method ? "Method" : "Results", sentence};
            paper.sections.push_back(std::move(section));
            if (in_method && truth.method_paper_techniques.count(target))
                truth.paper_expected_techniques[paper.id].insert(
                    truth.method_paper_techniques[target].begin(),
                    truth.method_paper_techniques[target].end());
        }
        truth.paper_area[paper.id] = kNoiseAreaLabel;
        papers.emplace(paper.id, std::move(paper));
    }

    // materialize citer sections
    for (auto& [id, paper] : papers) {
        auto join = [](const std::vector<std::string>& sentences) {
            std::string body;
            for (const auto& s : sentences) {
                if (!body.empty()) body += ' ';
                body += s;
            }
            return body;
        };
        auto mit = method_sentences.find(id);
        if (mit != method_sentences.end())
            paper.sections.push_back({"Method", join(mit->second)});
        auto oit = other_sentences.find(id);
        if (oit != other_sentences.end())
            paper.sections.push_back({"Experiments", join(oit->second)});
    }

    // rebuild through the corpus indexer so all invariants hold
    Corpus corpus;
    corpus.papers = std::move(papers);
    LoadReport report;
    detail::build_corpus_indexes(corpus, CorpusConfig{}, report, {});
    result.corpus = std::move(corpus);
    return result;
}

// ---------------------------------------------------------------------------
// Ground-truth file format: CSV rows `record,key,value`
// ---------------------------------------------------------------------------

inline std::string ground_truth_csv(const GroundTruth& truth) {
    std::string out = "record,key,value\n";
    for (const auto& area : truth.planted_areas)
        out += "planted_area," + csv_field(area) + ",\n";
    for (const auto& [id, area] : truth.paper_area)
        out += "paper_area," + csv_field(id) + "," + csv_field(area) + "\n";
    for (const auto& [id, techniques] : truth.method_paper_techniques)
        for (const auto& t : techniques)
            out += "method_techniques," + csv_field(id) + "," + csv_field(t) + "\n";
    for (const auto& [id, techniques] : truth.paper_expected_techniques)
        for (const auto& t : techniques)
            out += "expected_techniques," + csv_field(id) + "," + csv_field(t) + "\n";
    return out;
}

inline void save_ground_truth(const GroundTruth& truth, const std::string& path) {
    write_file(path, ground_truth_csv(truth));
}

inline GroundTruth load_ground_truth(const std::string& path) {
    GroundTruth truth;
    std::string data = read_file(path);
    std::size_t pos = 0;
    bool header = true;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string line = data.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        if (header) { header = false; continue; }
        auto fields = split_csv_line(line);
        if (fields.size() < 3) throw IoError("ground truth rows need 3 fields");
        const std::string& record = fields[0];
        if (record == "planted_area") truth.planted_areas.insert(fields[1]);
        else if (record == "paper_area") truth.paper_area[fields[1]] = fields[2];
        else if (record == "method_techniques")
            truth.method_paper_techniques[fields[1]].insert(fields[2]);
        else if (record == "expected_techniques")
            truth.paper_expected_techniques[fields[1]].insert(fields[2]);
        else throw IoError("unknown ground truth record type: " + record);
    }
    return truth;
}

}  // namespace atm
