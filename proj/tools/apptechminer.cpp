// Command-line front door: each phase reads and writes plain files so runs
// compose via shell pipelines. Exit codes: 0 success, 1 usage, 2 data error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apptechminer/config.hpp"
#include "apptechminer/eval.hpp"
#include "apptechminer/knowledge_base.hpp"
#include "apptechminer/synth.hpp"

namespace {

using namespace atm;

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

std::string config_keys_help() {
    return R"(Config keys (file: `key = value` lines, or --set key=value; flags win):
  lenient                eat bad corpus records, report to stderr (true)
  year_min / year_max    accepted publication years (1900 / 2100)
  methodology_vocab      comma list matched inside section headings
                         (method,methodology,approach,model,algorithm,system description)
  seed_keywords          comma list of word:side, side in after|before|both
                         (for:after,via:after,using:before,with:before,in:after,to:after,of:after)
  n_max                  longest n-gram order for area ranking (4)
  scheme                 area ranking scheme s1|s2|s3 (s3)
  threshold_N            minimum score for order-N n-grams under s3
                         (0.08 / 0.01 / 0.01 / 0.01 for N=1..4, calibrated on
                         the bundled synthetic corpus; retune per corpus)
  bootstrap_rounds       keyword-expansion rounds before harvesting (0 = off;
                         the expansion itself defaults to 3 rounds when used)
  bootstrap_top_m        trusted areas per expansion round (50)
  bootstrap_min_support  distinct titles needed to admit a keyword (5)
  max_areas              truncate the ranked area list, 0 = keep all (0)
  jm_lambda              Jelinek-Mercer interpolation weight (0.7)
  k1                     min distinct citers for a method paper (15)
  k2                     min methodology-citation fraction (0.5)
  top_k                  techniques kept per paper (5)
  rank_key               technique ordering key product|local|global (product)
  window_years           temporal bucket width (5)
  popularity             temporal weight papers|citations (papers)
  threads                worker threads; output is independent of it (1)
  lexicon_file           POS lexicon override, lines `word<TAB>TAG`
  stopword_file          stopword override, one word per line
  keywords_file          functional keywords, lines `word<TAB>side`

Environment: APPTECHMINER_CONFIG names a config file loaded before --config.)";
}

struct Resources {
    PosLexicon lexicon;
    Stopwords stopwords;
    FunctionalKeywordSet keywords;
};

Resources resolve_resources(const PipelineConfig& cfg) {
    Resources r;
    r.lexicon = cfg.lexicon_file.empty() ? PosLexicon::builtin()
                                         : PosLexicon::from_file(cfg.lexicon_file);
    r.stopwords = cfg.stopword_file.empty() ? Stopwords::builtin()
                                            : Stopwords::from_file(cfg.stopword_file);
    r.keywords = cfg.keywords_file.empty() ? cfg.seed_keywords
                                           : FunctionalKeywordSet::from_file(cfg.keywords_file);
    return r;
}

Corpus load_or_die(const std::string& path, const PipelineConfig& cfg) {
    auto result = load_corpus(path, cfg.corpus_config());
    result.report.print(std::cerr);
    return std::move(result.corpus);
}

std::vector<std::string> read_phrase_column(const std::string& path) {
    // Accepts the ranked CSV formats (phrase in column 2) or one phrase per line.
    std::string data = read_file(path);
    std::vector<std::string> phrases;
    std::size_t pos = 0;
    bool first = true;
    bool ranked_csv = false;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string line = data.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = eol + 1;
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("rank,phrase", 0) == 0) {
                ranked_csv = true;
                continue;
            }
            if (line == "phrase") continue;
        }
        if (ranked_csv) {
            auto fields = split_csv_line(line);
            if (fields.size() >= 2) phrases.push_back(normalize_phrase(fields[1]));
        } else {
            phrases.push_back(normalize_phrase(line));
        }
    }
    return phrases;
}

std::map<std::string, std::string> read_label_map(const std::string& path) {
    std::string data = read_file(path);
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    bool first = true;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string line = data.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = eol + 1;
        if (line.empty()) continue;
        if (first && line == "paper_id,label") { first = false; continue; }
        first = false;
        auto fields = split_csv_line(line);
        if (fields.size() < 2) throw UsageError("label files need paper_id,label rows");
        out[fields[0]] = fields[1];
    }
    return out;
}

GlobalTechniqueVector read_global_vector(const std::string& path) {
    std::string data = read_file(path);
    std::map<std::string, long long> counts;
    std::size_t pos = 0;
    bool first = true;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string line = data.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = eol + 1;
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("rank,phrase,count", 0) == 0) continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() < 3) throw UsageError("technique files need rank,phrase,count rows");
        counts[normalize_phrase(fields[1])] = std::stoll(fields[2]);
    }
    return GlobalTechniqueVector::from_counts(counts);
}

AgreementMatrix parse_matrix(const std::string& spec) {
    auto fields = split_csv_line(spec);
    if (fields.size() != 4) throw UsageError("--kappa needs yy,yn,ny,nn");
    try {
        return {std::stoll(fields[0]), std::stoll(fields[1]), std::stoll(fields[2]),
                std::stoll(fields[3])};
    } catch (const std::exception&) {
        throw UsageError("--kappa needs four integers: yy,yn,ny,nn");
    }
}

void print_metric(double v) { std::printf("%.4f\n", v); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AppTechMiner: mines ranked application areas and techniques from a "
                 "paper corpus into a queryable knowledge base"};
    app.footer(config_keys_help());
    app.require_subcommand(1);

    std::string config_file;
    std::vector<std::string> overrides;
    int threads_flag = 0;
    app.add_option("--config", config_file, "config file (key = value lines)");
    app.add_option("--set", overrides, "override one config key (key=value), repeatable");
    app.add_option("--threads", threads_flag, "worker threads (output independent of it)");

    // --- ingest ---------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "validate a corpus file and print a summary");
    std::string in_corpus, ingest_save;
    bool ingest_strict = false;
    ingest->add_option("--corpus", in_corpus, "corpus file (one JSON record per line)")->required();
    ingest->add_flag("--strict", ingest_strict, "fail on the first bad record");
    ingest->add_option("--save", ingest_save, "re-emit the corpus in canonical form");

    // --- areas ----------------------------------------------------------
    auto* areas_cmd = app.add_subcommand("areas", "phase 1: harvest and rank area phrases");
    std::string areas_corpus, areas_out;
    areas_cmd->add_option("--corpus", areas_corpus)->required();
    areas_cmd->add_option("--out", areas_out, "output CSV (default stdout)");

    // --- assign-areas ---------------------------------------------------
    auto* assign_cmd = app.add_subcommand("assign-areas", "phase 2: assign one area per paper");
    std::string aa_corpus, aa_areas, aa_out;
    assign_cmd->add_option("--corpus", aa_corpus)->required();
    assign_cmd->add_option("--areas", aa_areas, "ranked areas CSV from `areas`")->required();
    assign_cmd->add_option("--out", aa_out, "output CSV (default stdout)");

    // --- techniques -----------------------------------------------------
    auto* tech_cmd = app.add_subcommand("techniques", "phase 3: ranked technique list");
    std::string t_corpus, t_out;
    std::size_t t_top = 0;
    tech_cmd->add_option("--corpus", t_corpus)->required();
    tech_cmd->add_option("--top", t_top, "keep only the top N techniques (0 = all)");
    tech_cmd->add_option("--out", t_out, "output CSV (default stdout)");

    // --- assign-techniques ------------------------------------------------
    auto* ta_cmd = app.add_subcommand("assign-techniques",
                                      "phase 4: rank techniques per cited paper");
    std::string ta_corpus, ta_vector, ta_out;
    ta_cmd->add_option("--corpus", ta_corpus)->required();
    ta_cmd->add_option("--techniques", ta_vector, "technique CSV from `techniques`")->required();
    ta_cmd->add_option("--out", ta_out, "output CSV (default stdout)");

    // --- kb ---------------------------------------------------------------
    auto* kb_cmd = app.add_subcommand("kb", "build or query the knowledge base");
    kb_cmd->require_subcommand(1);
    auto* kb_build = kb_cmd->add_subcommand("build", "run all phases and persist the KB");
    std::string kb_corpus, kb_out;
    kb_build->add_option("--corpus", kb_corpus)->required();
    kb_build->add_option("--out", kb_out, "KB file path")->required();
    auto* kb_query = kb_cmd->add_subcommand("query", "query techniques for an area or vice versa");
    std::string q_kb, q_area, q_technique;
    std::size_t q_top = 10;
    kb_query->add_option("--kb", q_kb, "KB file from `kb build`")->required();
    auto* q_area_opt = kb_query->add_option("--area", q_area, "rank techniques for this area");
    auto* q_tech_opt =
        kb_query->add_option("--technique", q_technique, "rank areas for this technique");
    kb_query->add_option("--top", q_top, "result rows (default 10)");
    q_area_opt->excludes(q_tech_opt);

    // --- temporal ---------------------------------------------------------
    auto* temporal_cmd = app.add_subcommand("temporal", "bucketed trend reports");
    std::string tm_kb, tm_corpus, tm_area, tm_out;
    int tm_from = 0, tm_to = 0;
    std::size_t tm_top = 10;
    bool tm_areas = false;
    temporal_cmd->add_option("--kb", tm_kb)->required();
    temporal_cmd->add_option("--corpus", tm_corpus)->required();
    auto* tm_areas_flag =
        temporal_cmd->add_flag("--areas", tm_areas, "per-bucket area popularity fractions");
    auto* tm_in_opt = temporal_cmd->add_option("--techniques-in", tm_area,
                                               "per-bucket technique counts for one area");
    tm_areas_flag->excludes(tm_in_opt);
    temporal_cmd->add_option("--from", tm_from, "first year (default: corpus minimum)");
    temporal_cmd->add_option("--to", tm_to, "last year (default: corpus maximum)");
    temporal_cmd->add_option("--top", tm_top, "techniques per bucket (default 10)");
    temporal_cmd->add_option("--out", tm_out, "output CSV (default stdout)");

    // --- eval -------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "list/assignment metrics");
    std::string e_gold, e_ranked, e_extracted, e_pred, e_kappa;
    std::size_t e_k = 0;
    bool e_precision = false, e_recall = false, e_accuracy = false;
    auto* ep = eval_cmd->add_flag("--precision", e_precision, "precision at K of a ranked list");
    auto* er = eval_cmd->add_flag("--recall", e_recall, "recall of an extracted list");
    auto* ea = eval_cmd->add_flag("--accuracy", e_accuracy, "label accuracy against gold");
    auto* ek = eval_cmd->add_option("--kappa", e_kappa,
                                    "Cohen's kappa from agreement counts yy,yn,ny,nn");
    ep->excludes(er)->excludes(ea)->excludes(ek);
    er->excludes(ea)->excludes(ek);
    ea->excludes(ek);
    eval_cmd->add_option("--gold", e_gold, "gold phrases (one per line) or paper_id,label CSV");
    eval_cmd->add_option("--ranked", e_ranked, "ranked CSV from `areas`/`techniques`");
    eval_cmd->add_option("--extracted", e_extracted, "extracted phrases file");
    eval_cmd->add_option("--pred", e_pred, "predicted paper_id,label CSV");
    eval_cmd->add_option("--k", e_k, "K for --precision");

    // --- synth ------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "emit a deterministic synthetic corpus");
    SynthConfig synth_cfg;
    std::string s_out, s_truth;
    synth_cmd->add_option("--seed", synth_cfg.rng_seed, "RNG seed (default 1)");
    synth_cmd->add_option("--areas", synth_cfg.n_areas, "planted areas (default 5)");
    synth_cmd->add_option("--papers-per-area", synth_cfg.papers_per_area, "default 20");
    synth_cmd->add_option("--method-papers", synth_cfg.n_method_papers, "default 10");
    synth_cmd->add_option("--techniques-per-method", synth_cfg.techniques_per_method_paper,
                          "default 2");
    synth_cmd->add_option("--noise", synth_cfg.noise_rate, "noise rate in [0, 0.5)");
    synth_cmd->add_option("--year-from", synth_cfg.year_from, "default 1980");
    synth_cmd->add_option("--year-to", synth_cfg.year_to, "default 2013");
    synth_cmd->add_option("--k1", synth_cfg.k1, "citers per method paper (default 15)");
    synth_cmd->add_option("--k2", synth_cfg.k2, "methodology fraction floor (default 0.5)");
    synth_cmd->add_option("--out", s_out, "corpus file")->required();
    synth_cmd->add_option("--truth", s_truth, "ground-truth CSV");

    for (auto* sub : app.get_subcommands({})) sub->footer(config_keys_help());
    for (auto* sub : kb_cmd->get_subcommands({})) sub->footer(config_keys_help());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    PipelineConfig cfg;
    try {
        // bad config input is a usage problem, distinct from data errors below
        if (const char* env = std::getenv("APPTECHMINER_CONFIG"); env && *env)
            load_config_file(cfg, env);
        if (!config_file.empty()) load_config_file(cfg, config_file);
        for (const auto& kv : overrides) {
            std::size_t eq = kv.find('=');
            if (eq == std::string::npos) throw UsageError("--set needs key=value");
            apply_config_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (threads_flag > 0) cfg.threads = threads_flag;
        if (ingest_strict) cfg.lenient = false;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        Resources res = resolve_resources(cfg);

        if (*ingest) {
            auto result = load_corpus(in_corpus, cfg.corpus_config());
            result.report.print(std::cerr);
            const Corpus& corpus = result.corpus;
            std::size_t method_contexts = 0;
            for (const auto& ctx : corpus.contexts)
                if (ctx.section_kind == SectionKind::Methodology) ++method_contexts;
            std::cout << "papers: " << corpus.papers.size() << "\n"
                      << "contexts: " << corpus.contexts.size() << "\n"
                      << "methodology_contexts: " << method_contexts << "\n"
                      << "issues: " << result.report.issues.size() << "\n"
                      << "unresolved_markers: " << result.report.unresolved_markers << "\n";
            if (!ingest_save.empty()) save_corpus(corpus, ingest_save);
        } else if (*areas_cmd) {
            Corpus corpus = load_or_die(areas_corpus, cfg);
            FunctionalKeywordSet keys = res.keywords;
            if (cfg.bootstrap_rounds > 0)
                keys = bootstrap_keywords(corpus, keys, cfg.bootstrap_rounds,
                                          {cfg.bootstrap_top_m, cfg.bootstrap_min_support,
                                           cfg.n_max},
                                          res.stopwords);
            auto ranked =
                rank_areas(harvest_phrases(corpus, keys, res.stopwords), cfg.scheme_params());
            if (cfg.max_areas > 0 && ranked.size() > cfg.max_areas) ranked.resize(cfg.max_areas);
            emit(ranked_areas_csv(ranked), areas_out);
        } else if (*assign_cmd) {
            Corpus corpus = load_or_die(aa_corpus, cfg);
            auto assignments =
                assign_all(corpus, read_phrase_column(aa_areas), cfg.jm_lambda, cfg.threads);
            emit(assignments_csv(assignments), aa_out);
        } else if (*tech_cmd) {
            Corpus corpus = load_or_die(t_corpus, cfg);
            auto methods = detect_method_papers(corpus, cfg.method_criteria());
            auto global = build_global_vector(corpus, methods, res.lexicon, res.stopwords);
            auto ranked = rank_techniques(global, t_top == 0 ? global.dimension() : t_top);
            emit(ranked_techniques_csv(ranked), t_out);
        } else if (*ta_cmd) {
            Corpus corpus = load_or_die(ta_corpus, cfg);
            auto global = read_global_vector(ta_vector);
            std::vector<TechniqueAssignment> all;
            for (const auto& [id, paper] : corpus.papers) {
                auto local = build_local_vector(id, corpus, global, res.lexicon, res.stopwords);
                auto ta = assign_techniques(id, local, global, cfg.top_k_techniques, cfg.rank_key);
                if (!ta.techniques.empty()) all.push_back(std::move(ta));
            }
            emit(technique_assignments_csv(all), ta_out);
        } else if (*kb_build) {
            Corpus corpus = load_or_die(kb_corpus, cfg);
            PipelineConfig build_cfg = cfg;
            build_cfg.seed_keywords = res.keywords;
            KnowledgeBase kb = build_kb(corpus, build_cfg, res.lexicon, res.stopwords);
            save_kb(kb, kb_out);
        } else if (*kb_query) {
            KnowledgeBase kb = load_kb(q_kb);
            std::string out;
            int rank = 1;
            if (!q_area.empty()) {
                for (const auto& [technique, count] : query_techniques(kb, q_area, q_top))
                    out += std::to_string(rank++) + "," + csv_field(technique) + "," +
                           std::to_string(count) + "\n";
            } else if (!q_technique.empty()) {
                for (const auto& [area, count] : query_areas_for_technique(kb, q_technique, q_top))
                    out += std::to_string(rank++) + "," + csv_field(area) + "," +
                           std::to_string(count) + "\n";
            } else {
                throw UsageError("kb query needs --area or --technique");
            }
            std::cout << out;
        } else if (*temporal_cmd) {
            KnowledgeBase kb = load_kb(tm_kb);
            Corpus corpus = load_or_die(tm_corpus, cfg);
            int from = tm_from, to = tm_to;
            if (from == 0 || to == 0) {
                int min_year = 0, max_year = 0;
                for (const auto& [id, paper] : corpus.papers) {
                    if (min_year == 0 || paper.year < min_year) min_year = paper.year;
                    if (paper.year > max_year) max_year = paper.year;
                }
                if (from == 0) from = min_year;
                if (to == 0) to = max_year;
            }
            if (from == 0 || to == 0) throw UsageError("empty corpus and no --from/--to");
            if (tm_areas) {
                auto buckets = temporal_area_popularity(kb, corpus, cfg.window_years, from, to,
                                                        cfg.popularity);
                emit(popularity_csv(buckets), tm_out);
            } else if (!tm_area.empty()) {
                auto buckets = temporal_techniques_in_area(kb, corpus, tm_area,
                                                           cfg.window_years, tm_top, from, to);
                emit(technique_trend_csv(buckets), tm_out);
            } else {
                throw UsageError("temporal needs --areas or --techniques-in <area>");
            }
        } else if (*eval_cmd) {
            if (e_precision) {
                if (e_gold.empty() || e_ranked.empty() || e_k == 0)
                    throw UsageError("--precision needs --gold, --ranked and --k");
                auto ranked = read_phrase_column(e_ranked);
                auto gold_list = read_phrase_column(e_gold);
                print_metric(precision_at_k(
                    ranked, {gold_list.begin(), gold_list.end()}, e_k));
            } else if (e_recall) {
                if (e_gold.empty() || e_extracted.empty())
                    throw UsageError("--recall needs --gold and --extracted");
                auto extracted = read_phrase_column(e_extracted);
                auto gold_list = read_phrase_column(e_gold);
                print_metric(recall_of_list({extracted.begin(), extracted.end()},
                                            {gold_list.begin(), gold_list.end()}));
            } else if (e_accuracy) {
                if (e_gold.empty() || e_pred.empty())
                    throw UsageError("--accuracy needs --pred and --gold");
                print_metric(accuracy(read_label_map(e_pred), read_label_map(e_gold)));
            } else if (!e_kappa.empty()) {
                print_metric(cohens_kappa(parse_matrix(e_kappa)));
            } else {
                throw UsageError("eval needs --precision, --recall, --accuracy or --kappa");
            }
        } else if (*synth_cmd) {
            auto result = generate(synth_cfg);
            save_corpus(result.corpus, s_out);
            if (!s_truth.empty()) save_ground_truth(result.truth, s_truth);
            std::cout << "papers: " << result.corpus.papers.size() << "\n"
                      << "contexts: " << result.corpus.contexts.size() << "\n";
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
