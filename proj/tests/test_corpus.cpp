#include <catch_amalgamated.hpp>

#include <sstream>

#include "apptechminer/corpus.hpp"
#include "apptechminer/synth.hpp"
#include "test_util.hpp"

using namespace atm;

namespace {

std::string record(const std::string& id, const std::string& title,
                   const std::vector<std::string>& refs = {},
                   const std::vector<std::pair<std::string, std::string>>& sections = {},
                   int year = 2005) {
    nlohmann::json j;
    j["id"] = id;
    j["title"] = title;
    j["year"] = year;
    j["venue"] = "acl";
    j["references"] = refs;
    j["sections"] = nlohmann::json::array();
    for (auto& [h, b] : sections) j["sections"].push_back({{"heading", h}, {"body", b}});
    return j.dump();
}

}  // namespace

TEST_CASE("load_corpus reads minimal well-formed input") {
    testutil::TempDir dir;
    write_file(dir.file("c.jsonl"), record("p1", "First paper") + "\n" +
                                        record("p2", "Second paper", {"p1"}) + "\n");
    auto result = load_corpus(dir.file("c.jsonl"));
    CHECK(result.report.issues.empty());
    REQUIRE(result.corpus.papers.size() == 2);
    CHECK(result.corpus.citations_of("p1") == 1);
    CHECK(result.corpus.citations_of("p2") == 0);
}

TEST_CASE("lenient mode reports a record missing its title and loads the rest") {
    testutil::TempDir dir;
    write_file(dir.file("c.jsonl"),
               record("p1", "Fine") + "\n" + R"({"id":"p2","year":2000})" + "\n" +
                   record("p3", "Also fine") + "\n");
    auto result = load_corpus(dir.file("c.jsonl"));
    REQUIRE(result.corpus.papers.size() == 2);
    REQUIRE(result.report.issues.size() == 1);
    CHECK(result.report.issues[0].line == 2);
    CHECK(result.report.issues[0].code == "MALFORMED_RECORD");

    CorpusConfig strict;
    strict.lenient = false;
    CHECK_THROWS_AS(load_corpus(dir.file("c.jsonl"), strict), MalformedRecord);
}

TEST_CASE("citation context extraction through the loader") {
    testutil::TempDir dir;
    write_file(dir.file("c.jsonl"),
               record("A", "The cited paper") + "\n" +
                   record("B", "The citing paper", {"A"},
                          {{"3 Approach", "We build on the parser of [[A]]."}}) +
                   "\n");
    auto result = load_corpus(dir.file("c.jsonl"));
    REQUIRE(result.corpus.contexts.size() == 1);
    const auto& ctx = result.corpus.contexts[0];
    CHECK(ctx.citing_id == "B");
    CHECK(ctx.cited_id == "A");
    CHECK(ctx.section_kind == SectionKind::Methodology);
    CHECK(ctx.sentence == "We build on the parser of [[A]].");
    auto inbound = result.corpus.contexts_citing("A");
    REQUIRE(inbound.size() == 1);
    CHECK(*inbound[0] == ctx);
}

TEST_CASE("classify_section vocabulary semantics") {
    CHECK(classify_section("3. Methodology") == SectionKind::Methodology);
    CHECK(classify_section("Related Work") == SectionKind::Other);
    CHECK(classify_section("Our Approach") == SectionKind::Methodology);
    CHECK(classify_section("4 Model") == SectionKind::Methodology);
    CHECK(classify_section("System   Description") == SectionKind::Methodology);
    CHECK(classify_section("") == SectionKind::Other);
    CHECK(classify_section("5.1") == SectionKind::Other);
    // configurable vocabulary
    CHECK(classify_section("Evaluation", {"evaluation"}) == SectionKind::Methodology);
    CHECK(classify_section("Our Approach", {"evaluation"}) == SectionKind::Other);
}

TEST_CASE("extract_citation_contexts fans out per marker") {
    Paper paper;
    paper.id = "B";
    paper.sections = {{"Method", "We use the parser of [[p42]]."}};
    MarkerResolver resolver{{"p42", "p42"}};
    auto contexts = extract_citation_contexts(paper, resolver);
    REQUIRE(contexts.size() == 1);
    CHECK(contexts[0].cited_id == "p42");
    CHECK(contexts[0].section_kind == SectionKind::Methodology);

    paper.sections = {{"Intro", "We combine [[p1]] and [[p2]] here."}};
    resolver = {{"p1", "p1"}, {"p2", "p2"}};
    contexts = extract_citation_contexts(paper, resolver);
    REQUIRE(contexts.size() == 2);
    CHECK(contexts[0].sentence == contexts[1].sentence);
    CHECK(contexts[0].cited_id == "p1");
    CHECK(contexts[1].cited_id == "p2");
}

TEST_CASE("only the citing sentence becomes the context") {
    Paper paper;
    paper.id = "B";
    paper.sections = {
        {"Experiments", "We start simple. We cite [[p7]] here. We conclude."}};
    MarkerResolver resolver{{"p7", "p7"}};
    auto contexts = extract_citation_contexts(paper, resolver);
    REQUIRE(contexts.size() == 1);
    CHECK(contexts[0].sentence == "We cite [[p7]] here.");
    CHECK(contexts[0].section_kind == SectionKind::Other);
}

TEST_CASE("unresolvable markers are skipped and tallied") {
    Paper paper;
    paper.id = "B";
    paper.sections = {{"Method", "We use [[ghost]] and [[real]]."}};
    MarkerResolver resolver{{"real", "real"}};
    std::size_t tally = 0;
    auto contexts = extract_citation_contexts(paper, resolver,
                                              default_methodology_vocab(), &tally);
    REQUIRE(contexts.size() == 1);
    CHECK(contexts[0].cited_id == "real");
    CHECK(tally == 1);
}

TEST_CASE("duplicate ids are rejected") {
    testutil::TempDir dir;
    write_file(dir.file("c.jsonl"),
               record("p1", "One") + "\n" + record("p1", "One again") + "\n");
    auto result = load_corpus(dir.file("c.jsonl"));
    CHECK(result.corpus.papers.size() == 1);
    CHECK(result.corpus.papers.at("p1").title == "One");
    REQUIRE(result.report.issues.size() == 1);
    CHECK(result.report.issues[0].code == "DUPLICATE_ID");

    CorpusConfig strict;
    strict.lenient = false;
    CHECK_THROWS_AS(load_corpus(dir.file("c.jsonl"), strict), DuplicateId);
}

TEST_CASE("year range is enforced") {
    testutil::TempDir dir;
    write_file(dir.file("c.jsonl"), record("p1", "Ancient", {}, {}, 1850) + "\n");
    auto result = load_corpus(dir.file("c.jsonl"));
    CHECK(result.corpus.papers.empty());
    REQUIRE(result.report.issues.size() == 1);
    CHECK(result.report.issues[0].code == "MALFORMED_RECORD");

    CorpusConfig wide;
    wide.year_min = 1800;
    CHECK(load_corpus(dir.file("c.jsonl"), wide).corpus.papers.size() == 1);
}

TEST_CASE("unresolved references are retained but flagged") {
    testutil::TempDir dir;
    write_file(dir.file("c.jsonl"), record("p1", "Paper", {"missing", "p1x"}) + "\n");
    auto result = load_corpus(dir.file("c.jsonl"));
    REQUIRE(result.corpus.papers.size() == 1);
    CHECK(result.corpus.papers.at("p1").references ==
          std::vector<std::string>{"missing", "p1x"});
    CHECK(result.report.issues.size() == 2);
    for (auto& issue : result.report.issues) CHECK(issue.code == "UNRESOLVED_REFERENCE");
}

TEST_CASE("diagnostics print one LINE row per issue") {
    LoadReport report;
    report.issues.push_back({7, "MALFORMED_RECORD", "missing \"title\""});
    std::ostringstream os;
    report.print(os);
    CHECK(os.str() == "LINE 7: MALFORMED_RECORD: missing \"title\"\n");
}

TEST_CASE("missing file raises FileUnreadable") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), FileUnreadable);
}

TEST_CASE("reference/citation-count double counting check") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        SynthConfig sc;
        sc.rng_seed = seed;
        sc.n_areas = 3;
        sc.papers_per_area = 8;
        sc.n_method_papers = 4;
        sc.k1 = 5;
        sc.noise_rate = seed == 3 ? 0.2 : 0.0;
        auto synth = generate(sc);
        long long from_refs = 0;
        for (const auto& [id, paper] : synth.corpus.papers) {
            std::set<std::string> distinct(paper.references.begin(), paper.references.end());
            for (const auto& r : distinct)
                if (synth.corpus.papers.count(r)) ++from_refs;
        }
        long long from_counts = 0;
        for (const auto& [id, c] : synth.corpus.citation_count) from_counts += c;
        CHECK(from_refs == from_counts);
    }
}

TEST_CASE("inbound index is consistent with the context list") {
    SynthConfig sc;
    sc.n_areas = 2;
    sc.papers_per_area = 6;
    sc.n_method_papers = 2;
    sc.k1 = 4;
    auto synth = generate(sc);
    std::size_t indexed = 0;
    for (const auto& [cited, positions] : synth.corpus.inbound_index) {
        for (std::size_t pos : positions) {
            REQUIRE(pos < synth.corpus.contexts.size());
            CHECK(synth.corpus.contexts[pos].cited_id == cited);
        }
        indexed += positions.size();
    }
    CHECK(indexed == synth.corpus.contexts.size());
}

TEST_CASE("save then reload is idempotent") {
    testutil::TempDir dir;
    SynthConfig sc;
    sc.n_areas = 2;
    sc.papers_per_area = 6;
    sc.n_method_papers = 2;
    sc.k1 = 4;
    sc.noise_rate = 0.1;
    auto synth = generate(sc);
    save_corpus(synth.corpus, dir.file("c.jsonl"));
    auto loaded = load_corpus(dir.file("c.jsonl"));
    CHECK(loaded.corpus.papers == synth.corpus.papers);
    CHECK(loaded.corpus.contexts == synth.corpus.contexts);
    CHECK(loaded.corpus.citation_count == synth.corpus.citation_count);
    save_corpus(loaded.corpus, dir.file("c2.jsonl"));
    CHECK(read_file(dir.file("c.jsonl")) == read_file(dir.file("c2.jsonl")));
}

TEST_CASE("context extraction is deterministic") {
    Paper paper;
    paper.id = "B";
    paper.sections = {{"Method", "We use [[x]] then [[y]]. Later we use [[x]] again."}};
    MarkerResolver resolver{{"x", "x"}, {"y", "y"}};
    auto a = extract_citation_contexts(paper, resolver);
    auto b = extract_citation_contexts(paper, resolver);
    CHECK(a == b);
    REQUIRE(a.size() == 3);
}
