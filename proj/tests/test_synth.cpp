#include <catch_amalgamated.hpp>

#include <set>

#include "apptechminer/synth.hpp"
#include "test_util.hpp"

using namespace atm;

TEST_CASE("generation satisfies the construction contract") {
    SynthConfig sc;
    sc.rng_seed = 1;
    sc.n_areas = 3;
    sc.papers_per_area = 10;
    sc.n_method_papers = 3;
    sc.k1 = 6;
    auto [corpus, truth] = generate(sc);

    CHECK(corpus.papers.size() == 33);  // 30 area papers + 3 method papers
    CHECK(truth.planted_areas.size() == 3);
    // ground truth is exhaustive
    for (const auto& [id, paper] : corpus.papers) CHECK(truth.paper_area.count(id) == 1);
    CHECK(truth.paper_area.size() == corpus.papers.size());
    CHECK(truth.method_paper_techniques.size() == 3);

    // every method paper clears the generated citation thresholds
    for (const auto& [mid, planted] : truth.method_paper_techniques) {
        CHECK(corpus.citations_of(mid) >= sc.k1);
        auto contexts = corpus.contexts_citing(mid);
        REQUIRE_FALSE(contexts.empty());
        std::size_t in_method = 0;
        for (auto* ctx : contexts)
            if (ctx->section_kind == SectionKind::Methodology) ++in_method;
        CHECK(double(in_method) / double(contexts.size()) >= sc.k2);
        CHECK(planted.size() ==
              static_cast<std::size_t>(sc.techniques_per_method_paper));
    }

    // years inside the configured range
    for (const auto& [id, paper] : corpus.papers) {
        CHECK(paper.year >= sc.year_from);
        CHECK(paper.year <= sc.year_to);
    }
}

TEST_CASE("same seed, same bytes; different seed, different corpus") {
    SynthConfig sc;
    sc.rng_seed = 42;
    sc.n_areas = 2;
    sc.papers_per_area = 6;
    sc.n_method_papers = 2;
    sc.k1 = 4;
    sc.noise_rate = 0.2;
    auto a = generate(sc);
    auto b = generate(sc);
    CHECK(corpus_to_jsonl(a.corpus) == corpus_to_jsonl(b.corpus));
    CHECK(ground_truth_csv(a.truth) == ground_truth_csv(b.truth));

    sc.rng_seed = 43;
    auto c = generate(sc);
    CHECK(corpus_to_jsonl(a.corpus) != corpus_to_jsonl(c.corpus));
}

TEST_CASE("generated corpora pass corpus validation on reload") {
    testutil::TempDir dir;
    SynthConfig sc;
    sc.n_areas = 2;
    sc.papers_per_area = 6;
    sc.n_method_papers = 2;
    sc.k1 = 4;
    sc.noise_rate = 0.3;
    auto synth = generate(sc);
    save_corpus(synth.corpus, dir.file("c.jsonl"));
    auto loaded = load_corpus(dir.file("c.jsonl"));
    CHECK(loaded.report.issues.empty());
    CHECK(loaded.corpus.papers.size() == synth.corpus.papers.size());
    CHECK(loaded.corpus.contexts == synth.corpus.contexts);
}

TEST_CASE("noise papers carry the sentinel label and planted papers do not") {
    SynthConfig sc;
    sc.n_areas = 2;
    sc.papers_per_area = 6;
    sc.n_method_papers = 2;
    sc.k1 = 4;
    sc.noise_rate = 0.25;
    auto synth = generate(sc);
    int noise = 0;
    for (const auto& [id, area] : synth.truth.paper_area) {
        if (area == kNoiseAreaLabel) {
            ++noise;
            CHECK(id[0] == 'n');
        } else {
            CHECK(synth.truth.planted_areas.count(area) == 1);
        }
    }
    CHECK(noise == 3);  // floor(0.25 * 14)
}

TEST_CASE("planted vocabularies are pairwise disjoint") {
    // separability at noise 0 rests on this
    SynthConfig sc;
    auto synth = generate(sc);
    std::set<std::string> area_tokens, tech_tokens;
    for (const auto& area : synth.truth.planted_areas)
        for (auto& t : tokenize(area).tokens) CHECK(area_tokens.insert(t).second);
    std::set<std::string> seen_techs;
    for (const auto& [m, techs] : synth.truth.method_paper_techniques)
        for (const auto& tech : techs) seen_techs.insert(tech);
    for (const auto& tech : seen_techs)
        for (auto& t : tokenize(tech).tokens) {
            CHECK(area_tokens.count(t) == 0);
            tech_tokens.insert(t);
        }
}

TEST_CASE("expected techniques mirror methodology citations") {
    SynthConfig sc;
    sc.n_areas = 2;
    sc.papers_per_area = 8;
    sc.n_method_papers = 2;
    sc.k1 = 5;
    auto synth = generate(sc);
    for (const auto& [pid, expected] : synth.truth.paper_expected_techniques) {
        std::set<std::string> rebuilt;
        for (const auto& ctx : synth.corpus.contexts) {
            if (ctx.citing_id != pid || ctx.section_kind != SectionKind::Methodology) continue;
            auto it = synth.truth.method_paper_techniques.find(ctx.cited_id);
            if (it == synth.truth.method_paper_techniques.end()) continue;
            rebuilt.insert(it->second.begin(), it->second.end());
        }
        CHECK(rebuilt == expected);
    }
}

TEST_CASE("infeasible configurations are rejected") {
    SynthConfig sc;
    SECTION("zero counts") {
        sc.n_areas = 0;
        CHECK_THROWS_AS(generate(sc), InfeasibleConfig);
    }
    SECTION("noise rate cap") {
        sc.noise_rate = 0.5;
        CHECK_THROWS_AS(generate(sc), InfeasibleConfig);
    }
    SECTION("area pool exhausted") {
        sc.n_areas = 99;
        CHECK_THROWS_AS(generate(sc), InfeasibleConfig);
    }
    SECTION("not enough citers for k1") {
        sc.n_areas = 1;
        sc.papers_per_area = 5;
        sc.k1 = 50;
        CHECK_THROWS_AS(generate(sc), InfeasibleConfig);
    }
    SECTION("inverted year range") {
        sc.year_from = 2000;
        sc.year_to = 1990;
        CHECK_THROWS_AS(generate(sc), InfeasibleConfig);
    }
}

TEST_CASE("ground truth round-trips through its CSV format") {
    testutil::TempDir dir;
    SynthConfig sc;
    sc.n_areas = 2;
    sc.papers_per_area = 6;
    sc.n_method_papers = 2;
    sc.k1 = 4;
    sc.noise_rate = 0.2;
    auto synth = generate(sc);
    save_ground_truth(synth.truth, dir.file("t.csv"));
    auto loaded = load_ground_truth(dir.file("t.csv"));
    CHECK(loaded.planted_areas == synth.truth.planted_areas);
    CHECK(loaded.paper_area == synth.truth.paper_area);
    CHECK(loaded.method_paper_techniques == synth.truth.method_paper_techniques);
    CHECK(loaded.paper_expected_techniques == synth.truth.paper_expected_techniques);
}
