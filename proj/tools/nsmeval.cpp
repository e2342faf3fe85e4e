// nsmeval: score NSM explications, run benchmarks, test cross-translatability
// and drive the dataset construction pipeline.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nsm/backends.hpp"
#include "nsm/crosslingual.hpp"
#include "nsm/dataset.hpp"
#include "nsm/errors.hpp"
#include "nsm/legality.hpp"
#include "nsm/lexicon.hpp"
#include "nsm/report_io.hpp"
#include "nsm/scoring.hpp"
#include "nsm/substitutability.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunConfig {
    std::string lexicon_path = "data/nsm_lexicon.txt";
    std::string backends_path;
    int k = 2;
    double alpha = 10.0;
    double beta = 40.0;
    double gamma = 2.0;
    double threshold = 35.0;
    int cap = 2;
    std::uint64_t seed = 0;
    std::string langs = "alz,rw,dz,din,ab";
    int jobs = 1;
    std::string record_path;

    json to_json() const {
        return {{"lexicon", lexicon_path}, {"backends", backends_path},
                {"k", k},                  {"alpha", alpha},
                {"beta", beta},            {"gamma", gamma},
                {"threshold", threshold},  {"cap", cap},
                {"seed", seed},            {"langs", langs},
                {"jobs", jobs}};
    }
};

nsm::PrimeLexicon load_lexicon_checked(const RunConfig& cfg) {
    return nsm::load_lexicon(cfg.lexicon_path);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nsm::LoadError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

nsm::Explication read_explication(const std::string& word, const std::string& path) {
    return nsm::Explication::make(word, read_lines(path));
}

std::vector<nsm::MaskedPassage> read_passages_jsonl(const std::string& path, int k) {
    std::ifstream in(path);
    if (!in) throw nsm::LoadError("cannot open passages file: " + path);
    std::vector<nsm::MaskedPassage> passages;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            nsm::MaskedPassage p = nsm::passage_from_json(j);
            passages.push_back(nsm::MaskedPassage::make(p.sentences, p.target_word,
                                                        static_cast<std::size_t>(k) + 1));
        } catch (const json::exception& e) {
            throw nsm::LoadError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (passages.empty()) throw nsm::ValidationError("no passages in " + path);
    return passages;
}

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void write_report(const std::string& path, json report) {
    report["generated_at"] = nsm::iso8601_utc_now();
    std::ofstream out(path);
    if (!out) throw nsm::Error("cannot write report: " + path);
    out << report.dump(2) << '\n';
}

struct RecordScope {
    std::shared_ptr<nsm::Recorder> recorder;
    std::string path;

    explicit RecordScope(const std::string& record_path) : path(record_path) {
        if (!path.empty()) recorder = std::make_shared<nsm::Recorder>();
    }
    void finish() const {
        if (recorder) {
            recorder->save(path);
            std::printf("recorded %zu backend responses -> %s\n", recorder->size(), path.c_str());
        }
    }
};

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_lexicon_validate(const RunConfig& cfg, const std::string& out) {
    nsm::PrimeLexicon lexicon = load_lexicon_checked(cfg);
    std::size_t exponents = 0, inflections = 0;
    json categories = json::object();
    for (const auto& p : lexicon.primes()) {
        exponents += p.exponents.size();
        inflections += p.inflections.size();
        categories[p.category] = categories.value(p.category, 0) + 1;
    }
    json doc = {{"schema", "nsm-lexicon/1"},
                {"run_config", cfg.to_json()},
                {"primes", lexicon.primes().size()},
                {"exponents", exponents},
                {"inflected_forms", inflections},
                {"stopwords", lexicon.stopwords().size()},
                {"categories", categories}};
    write_report(out, doc);
    std::printf("lexicon ok: %zu primes, %zu exponents, %zu inflected forms, %zu stopwords -> %s\n",
                lexicon.primes().size(), exponents, inflections, lexicon.stopwords().size(),
                out.c_str());
    return 0;
}

int cmd_legality(const RunConfig& cfg, const std::string& word, const std::string& expl_file,
                 const std::string& out) {
    nsm::PrimeLexicon lexicon = load_lexicon_checked(cfg);
    nsm::Explication expl = read_explication(word, expl_file);
    nsm::LegalityReport report = nsm::legality(expl, lexicon, cfg.alpha);

    json doc = {{"schema", "nsm-legality/1"},
                {"run_config", cfg.to_json()},
                {"word", word},
                {"explication", nsm::to_json(expl)},
                {"report", nsm::to_json(report)}};
    write_report(out, doc);
    std::printf("legality_score=%.4f primes=%d molecules=%d stopwords=%d total=%d circular=%s -> %s\n",
                report.legality_score, report.prime_count, report.molecule_count,
                report.stopword_count, report.total_words, report.circular ? "true" : "false",
                out.c_str());
    return 0;
}

int cmd_substitutability(const RunConfig& cfg, const std::string& word,
                         const std::string& expl_file, const std::string& passages_file,
                         const std::string& out) {
    nsm::Explication expl = read_explication(word, expl_file);
    auto passages = read_passages_jsonl(passages_file, cfg.k);
    RecordScope record(cfg.record_path);
    nsm::BackendSet backends = nsm::load_backends(cfg.backends_path, record.recorder);
    if (backends.scorers.empty())
        throw nsm::ValidationError("backend config has no scorers: " + cfg.backends_path);

    nsm::SubstitutabilityReport report =
        nsm::substitutability(backends.scorers, passages, expl, cfg.k, cfg.beta, cfg.jobs);
    record.finish();

    json doc = {{"schema", "nsm-subst/1"},
                {"run_config", cfg.to_json()},
                {"word", word},
                {"report", nsm::to_json(report)}};
    write_report(out, doc);
    std::printf("substitutability_score=%.4f graders=%zu passages=%zu k=%d beta=%.1f -> %s\n",
                report.score, backends.scorers.size(), passages.size(), report.k, report.beta,
                out.c_str());
    return 0;
}

int cmd_score(const RunConfig& cfg, const std::string& word, const std::string& expl_file,
              const std::string& passages_file, const std::string& out) {
    nsm::PrimeLexicon lexicon = load_lexicon_checked(cfg);
    nsm::Explication expl = read_explication(word, expl_file);
    auto passages = read_passages_jsonl(passages_file, cfg.k);
    RecordScope record(cfg.record_path);
    nsm::BackendSet backends = nsm::load_backends(cfg.backends_path, record.recorder);
    if (backends.scorers.empty())
        throw nsm::ValidationError("backend config has no scorers: " + cfg.backends_path);

    nsm::LegalityReport leg = nsm::legality(expl, lexicon, cfg.alpha);
    nsm::SubstitutabilityReport sub =
        nsm::substitutability(backends.scorers, passages, expl, cfg.k, cfg.beta, cfg.jobs);
    nsm::ScoreReport report = nsm::explication_score(leg, sub, cfg.gamma);
    record.finish();

    json doc = {{"schema", "nsm-score/1"},
                {"run_config", cfg.to_json()},
                {"word", word},
                {"explication", nsm::to_json(expl)},
                {"report", nsm::to_json(report)}};
    write_report(out, doc);
    std::printf("explication_score=%.4f (legality=%.4f substitutability=%.4f circular=%s) -> %s\n",
                report.explication_score, leg.legality_score, sub.score,
                leg.circular ? "true" : "false", out.c_str());
    return 0;
}

int cmd_crosstranslate(const RunConfig& cfg, const std::string& input_file,
                       const std::string& out) {
    std::vector<std::string> texts;
    for (auto& line : read_lines(input_file))
        if (!line.empty()) texts.push_back(line);
    if (texts.empty()) throw nsm::ValidationError("no input texts in " + input_file);

    RecordScope record(cfg.record_path);
    nsm::BackendSet backends = nsm::load_backends(cfg.backends_path, record.recorder);
    if (!backends.translator)
        throw nsm::ValidationError("backend config has no translator: " + cfg.backends_path);
    if (!backends.embedder)
        throw nsm::ValidationError("backend config has no embedder: " + cfg.backends_path);

    nsm::CrossReport report = nsm::cross_report(*backends.translator, *backends.embedder, texts,
                                                split_csv(cfg.langs), cfg.jobs);
    record.finish();

    json doc = nsm::to_json(report);
    doc["run_config"] = cfg.to_json();
    write_report(out, doc);

    double mean_bleu = 0.0, mean_sim = 0.0;
    for (const auto& a : report.per_language) {
        mean_bleu += a.mean_bleu;
        mean_sim += a.mean_similarity;
    }
    if (!report.per_language.empty()) {
        mean_bleu /= static_cast<double>(report.per_language.size());
        mean_sim /= static_cast<double>(report.per_language.size());
    }
    std::printf("crosstranslate: %zu texts x %zu langs, mean bleu=%.2f sim=%.2f, %zu failed -> %s\n",
                texts.size(), report.per_language.size(), mean_bleu, mean_sim,
                report.failed_pairs, out.c_str());
    return 0;
}

int cmd_bench(const RunConfig& cfg, const std::string& entries_file, const std::string& out,
              const std::string& table_out) {
    nsm::PrimeLexicon lexicon = load_lexicon_checked(cfg);
    std::vector<nsm::DatasetEntry> entries = nsm::read_entries_jsonl(entries_file);
    RecordScope record(cfg.record_path);
    nsm::BackendSet backends = nsm::load_backends(cfg.backends_path, record.recorder);
    if (backends.scorers.empty())
        throw nsm::ValidationError("backend config has no scorers: " + cfg.backends_path);

    nsm::BenchConfig bench_cfg{cfg.k, cfg.alpha, cfg.beta, cfg.gamma, cfg.jobs};
    nsm::BenchmarkReport report = nsm::run_benchmark(entries, lexicon, backends.scorers, bench_cfg);
    record.finish();

    json doc = nsm::to_json(report);
    doc["run_config"] = cfg.to_json();
    write_report(out, doc);
    if (!table_out.empty()) nsm::write_text_file(table_out, nsm::render_benchmark_table(report));

    std::printf("bench: %zu entries scored, %zu excluded, mean explication score %.2f -> %s\n",
                report.entries.size(), report.excluded.size(), report.explication_score.mean,
                out.c_str());
    return 0;
}

void write_manifest(const std::string& path, const std::string& stage, const RunConfig& cfg,
                    const json& counts, const json& extra = json::object()) {
    json manifest = {{"schema", "nsm-manifest/1"},
                     {"stage", stage},
                     {"config", cfg.to_json()},
                     {"config_hash", nsm::config_hash(cfg.to_json())},
                     {"seed", cfg.seed},
                     {"threshold", cfg.threshold},
                     {"cap", cfg.cap},
                     {"counts", counts}};
    for (const auto& [key, value] : extra.items()) manifest[key] = value;
    write_report(path, manifest);
}

int cmd_dataset_build(const RunConfig& cfg, const std::string& senses_file,
                      const std::string& out_dir, const nsm::PipelineConfig& pipe_in) {
    nsm::PrimeLexicon lexicon = load_lexicon_checked(cfg);
    nsm::IngestStats stats;
    std::vector<nsm::WordSense> senses = nsm::ingest_senses(senses_file, lexicon, &stats);
    if (senses.empty()) throw nsm::ValidationError("no usable senses in " + senses_file);

    RecordScope record(cfg.record_path);
    nsm::BackendSet backends = nsm::load_backends(cfg.backends_path, record.recorder);
    if (!backends.generator)
        throw nsm::ValidationError("backend config has no generator: " + cfg.backends_path);
    if (backends.scorers.empty())
        throw nsm::ValidationError("backend config has no scorers: " + cfg.backends_path);

    nsm::PipelineConfig pipe = pipe_in;
    pipe.k = cfg.k;
    pipe.alpha = cfg.alpha;
    pipe.beta = cfg.beta;
    pipe.gamma = cfg.gamma;
    pipe.threshold = cfg.threshold;
    pipe.cap = cfg.cap;
    pipe.seed = cfg.seed;
    pipe.jobs = cfg.jobs;

    nsm::BuildResult result =
        nsm::build_dataset(senses, *backends.generator, backends.scorers, lexicon, pipe);
    record.finish();

    fs::create_directories(out_dir);
    std::string pool_path = (fs::path(out_dir) / "pool.jsonl").string();
    nsm::write_entries_jsonl(pool_path, result.entries);

    json counts = {{"senses_ingested", senses.size()},
                   {"senses_excluded", result.excluded.size()},
                   {"entries", result.entries.size()},
                   {"unparseable_completions", result.unparseable_completions},
                   {"partial_example_senses", result.partial_example_senses},
                   {"ingest",
                    {{"parsed", stats.parsed},
                     {"malformed_skipped", stats.malformed_skipped},
                     {"prime_dropped", stats.prime_dropped},
                     {"duplicate_dropped", stats.duplicate_dropped}}}};
    json extra = {{"generation_prompt_version", pipe.prompts.version},
                  {"scoring_prompt_version", nsm::kScoringPromptVersion},
                  {"generator", backends.generator->id()},
                  {"temperature", pipe.temperature}};
    write_manifest((fs::path(out_dir) / "manifest.json").string(), "build", cfg, counts, extra);

    std::printf("dataset build: %zu senses -> %zu scored candidates (%zu senses excluded) -> %s\n",
                senses.size(), result.entries.size(), result.excluded.size(), pool_path.c_str());
    return 0;
}

int cmd_dataset_filter(const RunConfig& cfg, const std::string& in_file,
                       const std::string& out_file) {
    std::vector<nsm::DatasetEntry> entries = nsm::read_entries_jsonl(in_file);
    std::vector<nsm::DatasetEntry> kept = nsm::filter_and_cap(entries, cfg.threshold, cfg.cap);
    nsm::write_entries_jsonl(out_file, kept);
    json counts = {{"in", entries.size()}, {"kept", kept.size()}};
    write_manifest(out_file + ".manifest.json", "filter", cfg, counts);
    std::printf("dataset filter: kept %zu of %zu entries (threshold=%.1f cap=%d) -> %s\n",
                kept.size(), entries.size(), cfg.threshold, cfg.cap, out_file.c_str());
    return 0;
}

int cmd_dataset_split(const RunConfig& cfg, const std::string& in_file,
                      const std::string& out_dir, std::size_t val_count) {
    std::vector<nsm::DatasetEntry> entries = nsm::read_entries_jsonl(in_file);
    nsm::SplitResult result = nsm::split_dataset(entries, val_count, cfg.seed);

    fs::create_directories(out_dir);
    std::string train_path = (fs::path(out_dir) / "train.jsonl").string();
    std::string val_path = (fs::path(out_dir) / "validation.jsonl").string();
    nsm::write_entries_jsonl(train_path, result.train);
    nsm::write_entries_jsonl(val_path, result.validation);

    json counts = {{"in", entries.size()},
                   {"train", result.train.size()},
                   {"validation", result.validation.size()},
                   {"requested_validation", result.requested_val},
                   {"unplaced_senses", result.unplaced_sense_ids}};
    write_manifest((fs::path(out_dir) / "manifest.json").string(), "split", cfg, counts);

    std::printf("dataset split: %zu train / %zu validation (requested %zu, seed %llu) -> %s\n",
                result.train.size(), result.validation.size(), result.requested_val,
                static_cast<unsigned long long>(cfg.seed), out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nsmeval: automatic evaluation and dataset tooling for NSM explications"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    RunConfig cfg;
    app.add_option("--lexicon", cfg.lexicon_path, "Prime lexicon file")->capture_default_str();
    app.add_option("--backends", cfg.backends_path, "Backend config JSON");
    app.add_option("--k", cfg.k, "Truncation depth for the substitutability probes")
        ->capture_default_str();
    app.add_option("--alpha", cfg.alpha, "Legality score weight")->capture_default_str();
    app.add_option("--beta", cfg.beta, "Substitutability per-cell cap")->capture_default_str();
    app.add_option("--gamma", cfg.gamma, "Explication score scale")->capture_default_str();
    app.add_option("--threshold", cfg.threshold, "Dataset quality threshold")
        ->capture_default_str();
    app.add_option("--cap", cfg.cap, "Max entries per word sense")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for sampling and splits")->capture_default_str();
    app.add_option("--langs", cfg.langs, "Comma-separated language codes")->capture_default_str();
    app.add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();
    app.add_option("--record", cfg.record_path,
                   "Record backend responses into a replayable mock table");

    std::string word, expl_file, passages_file, input_file, entries_file, senses_file, in_file;
    std::string out_file, table_out, out_dir = "nsm-out";

    auto* lexicon_cmd = app.add_subcommand("lexicon", "Lexicon utilities");
    lexicon_cmd->require_subcommand(1);
    auto* lexicon_validate_cmd =
        lexicon_cmd->add_subcommand("validate", "Load the lexicon and report its shape");
    lexicon_validate_cmd->add_option("--out", out_file, "Report path");
    std::size_t val_count = 1000;
    nsm::PipelineConfig pipe;

    auto* legality_cmd = app.add_subcommand("legality", "Legality score for one explication");
    legality_cmd->add_option("--word", word, "Target word")->required();
    legality_cmd->add_option("--explication-file", expl_file, "Explication lines, one per line")
        ->required();
    legality_cmd->add_option("--out", out_file, "Report path");

    auto* subst_cmd =
        app.add_subcommand("substitutability", "Substitutability score for one explication");
    subst_cmd->add_option("--word", word, "Target word")->required();
    subst_cmd->add_option("--explication-file", expl_file, "Explication lines")->required();
    subst_cmd->add_option("--passages", passages_file, "Masked passages (JSONL)")->required();
    subst_cmd->add_option("--out", out_file, "Report path");

    auto* score_cmd = app.add_subcommand("score", "Composite explication score");
    score_cmd->add_option("--word", word, "Target word")->required();
    score_cmd->add_option("--explication-file", expl_file, "Explication lines")->required();
    score_cmd->add_option("--passages", passages_file, "Masked passages (JSONL)")->required();
    score_cmd->add_option("--out", out_file, "Report path");

    auto* cross_cmd = app.add_subcommand("crosstranslate", "Round-trip translation report");
    cross_cmd->add_option("--input", input_file, "Input texts, one per line")->required();
    cross_cmd->add_option("--out", out_file, "Report path");

    auto* bench_cmd = app.add_subcommand("bench", "Score a benchmark entry file");
    bench_cmd->add_option("--entries", entries_file, "Benchmark entries (JSONL)")->required();
    bench_cmd->add_option("--out", out_file, "Report path");
    bench_cmd->add_option("--table", table_out, "Also write an aligned text table here");

    auto* dataset_cmd = app.add_subcommand("dataset", "Dataset pipeline stages");
    auto* build_cmd = dataset_cmd->add_subcommand("build", "Generate and score candidates");
    build_cmd->add_option("--senses", senses_file, "Sense corpus (JSONL)")->required();
    build_cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    build_cmd->add_option("--examples-per-sense", pipe.examples_per_sense,
                          "Generated example pool per sense")->capture_default_str();
    build_cmd->add_option("--candidates-per-sense", pipe.candidates_per_sense,
                          "Candidate explications per sense")->capture_default_str();
    build_cmd->add_option("--passages-per-sense", pipe.passages_per_sense,
                          "Masked passages per sense")->capture_default_str();
    build_cmd->add_option("--passage-sentences", pipe.passage_sentences,
                          "Requested sentences per passage")->capture_default_str();
    build_cmd->add_option("--temperature", pipe.temperature, "Generation temperature")
        ->capture_default_str();
    build_cmd->add_option("--retry-budget", pipe.retry_budget, "Generation retry rounds")
        ->capture_default_str();

    auto* filter_cmd = dataset_cmd->add_subcommand("filter", "Quality filter and per-sense cap");
    filter_cmd->add_option("--in", in_file, "Scored pool (JSONL)")->required();
    filter_cmd->add_option("--out", out_file, "Filtered output (JSONL)")->required();

    auto* split_cmd = dataset_cmd->add_subcommand("split", "Contamination-safe train/val split");
    split_cmd->add_option("--in", in_file, "Filtered entries (JSONL)")->required();
    split_cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    split_cmd->add_option("--val-count", val_count, "Validation entries")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // usage problems are validation errors
    }

    auto default_out = [&](const std::string& name) {
        if (out_file.empty()) out_file = name;
    };

    try {
        if (lexicon_cmd->parsed()) {
            default_out("lexicon_report.json");
            return cmd_lexicon_validate(cfg, out_file);
        }
        if (legality_cmd->parsed()) {
            default_out("legality_report.json");
            return cmd_legality(cfg, word, expl_file, out_file);
        }
        if (subst_cmd->parsed()) {
            default_out("substitutability_report.json");
            return cmd_substitutability(cfg, word, expl_file, passages_file, out_file);
        }
        if (score_cmd->parsed()) {
            default_out("score_report.json");
            return cmd_score(cfg, word, expl_file, passages_file, out_file);
        }
        if (cross_cmd->parsed()) {
            default_out("cross_report.json");
            return cmd_crosstranslate(cfg, input_file, out_file);
        }
        if (bench_cmd->parsed()) {
            default_out("bench_report.json");
            return cmd_bench(cfg, entries_file, out_file, table_out);
        }
        if (dataset_cmd->parsed()) {
            if (build_cmd->parsed()) return cmd_dataset_build(cfg, senses_file, out_dir, pipe);
            if (filter_cmd->parsed()) return cmd_dataset_filter(cfg, in_file, out_file);
            if (split_cmd->parsed()) return cmd_dataset_split(cfg, in_file, out_dir, val_count);
            std::cerr << "dataset: pick one of build, filter, split\n";
            return 1;
        }
    } catch (const nsm::BackendError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nsm::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
