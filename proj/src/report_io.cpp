#include "nsm/report_io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include "nsm/backends.hpp"
#include "nsm/errors.hpp"

namespace nsm {

using json = nlohmann::json;

json to_json(const LegalityReport& r) {
    return {{"prime_count", r.prime_count},
            {"prime_occurrences", r.prime_occurrences},
            {"molecule_count", r.molecule_count},
            {"stopword_count", r.stopword_count},
            {"total_words", r.total_words},
            {"circular", r.circular},
            {"alpha", r.alpha},
            {"legality_score", r.legality_score},
            {"primes_ratio", r.primes_ratio},
            {"molecules_ratio", r.molecules_ratio}};
}

json to_json(const SubstitutabilityReport& r) {
    json cells = json::array();
    for (const auto& c : r.cells)
        cells.push_back({{"grader", c.grader},
                         {"passage_index", c.passage_index},
                         {"delta_baseline", c.delta_baseline},
                         {"delta_min", c.delta_min},
                         {"delta_ent", c.delta_ent},
                         {"composite", c.composite}});
    return {{"score", r.score},
            {"k", r.k},
            {"beta", r.beta},
            {"prompt_version", r.prompt_version},
            {"per_grader_mean", r.per_grader_mean},
            {"cells", std::move(cells)}};
}

json to_json(const ScoreReport& r) {
    return {{"explication_score", r.explication_score},
            {"raw_score", r.raw_score},
            {"gamma", r.gamma},
            {"circular_zeroed", r.circular_zeroed},
            {"legality", to_json(r.legality)},
            {"substitutability", to_json(r.substitutability)}};
}

json to_json(const WordSense& s) {
    return {{"sense_id", s.sense_id},
            {"lemma", s.lemma},
            {"gloss", s.gloss},
            {"synonyms", s.synonyms},
            {"examples", s.examples}};
}

json to_json(const Explication& e) {
    return {{"target_word", e.target_word}, {"lines", e.lines}};
}

json to_json(const MaskedPassage& p) {
    return {{"sentences", p.sentences},
            {"mask_sentence_index", p.mask_sentence_index},
            {"target_word", p.target_word}};
}

json to_json(const DatasetEntry& e) {
    json out = {{"sense", to_json(e.sense)},
                {"usage_examples", e.usage_examples},
                {"explication", to_json(e.explication)},
                {"provenance",
                 {{"generator", e.provenance.generator},
                  {"temperature", e.provenance.temperature},
                  {"prompt_version", e.provenance.prompt_version}}}};
    json passages = json::array();
    for (const auto& p : e.masked_passages) passages.push_back(to_json(p));
    out["masked_passages"] = std::move(passages);
    if (e.score) out["score"] = to_json(*e.score);
    return out;
}

namespace {

json to_json(const MetricSummary& m) {
    return {{"mean", m.mean}, {"std_error", m.std_error}};
}

} // namespace

json to_json(const BenchmarkReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        json row = to_json(e.report);
        row["id"] = e.id;
        row["word"] = e.word;
        entries.push_back(std::move(row));
    }
    json excluded = json::array();
    for (const auto& x : r.excluded) excluded.push_back({{"id", x.id}, {"reason", x.reason}});
    return {{"schema", "nsm-bench/1"},
            {"params", {{"k", r.k}, {"alpha", r.alpha}, {"beta", r.beta}, {"gamma", r.gamma}}},
            {"aggregation", "per-entry arithmetic mean with standard error"},
            {"prompt_version", r.prompt_version},
            {"aggregates",
             {{"explication_score", to_json(r.explication_score)},
              {"legality_score", to_json(r.legality_score)},
              {"substitutability_score", to_json(r.substitutability_score)},
              {"primes_ratio", to_json(r.primes_ratio)},
              {"molecules_ratio", to_json(r.molecules_ratio)},
              {"circular_pct", r.circular_pct}}},
            {"excluded", {{"count", excluded.size()}, {"entries", std::move(excluded)}}},
            {"entries", std::move(entries)}};
}

json to_json(const CrossReport& r) {
    json reports = json::array();
    for (const auto& rt : r.reports)
        reports.push_back({{"language", rt.language},
                           {"original", rt.original},
                           {"forward", rt.forward},
                           {"back", rt.back},
                           {"bleu", rt.bleu},
                           {"embed_similarity", rt.embed_similarity}});
    json langs = json::array();
    for (const auto& a : r.per_language)
        langs.push_back({{"language", a.language},
                         {"mean_bleu", a.mean_bleu},
                         {"mean_similarity", a.mean_similarity},
                         {"count", a.count}});
    return {{"schema", "nsm-cross/1"},
            {"bleu_variant", r.bleu_variant},
            {"per_language", std::move(langs)},
            {"failed_pairs", r.failed_pairs},
            {"failures", r.failures},
            {"reports", std::move(reports)}};
}

WordSense sense_from_json(const json& j) {
    WordSense s;
    s.sense_id = j.at("sense_id").get<std::string>();
    s.lemma = j.at("lemma").get<std::string>();
    s.gloss = j.value("gloss", "");
    if (j.contains("synonyms")) s.synonyms = j.at("synonyms").get<std::vector<std::string>>();
    if (j.contains("examples")) s.examples = j.at("examples").get<std::vector<std::string>>();
    return s;
}

Explication explication_from_json(const json& j) {
    return Explication::make(j.at("target_word").get<std::string>(),
                             j.at("lines").get<std::vector<std::string>>());
}

MaskedPassage passage_from_json(const json& j) {
    MaskedPassage p = MaskedPassage::make(j.at("sentences").get<std::vector<std::string>>(),
                                          j.at("target_word").get<std::string>());
    if (j.contains("mask_sentence_index") &&
        j.at("mask_sentence_index").get<std::size_t>() != p.mask_sentence_index)
        throw ValidationError("masked passage for '" + p.target_word +
                              "': stored mask_sentence_index disagrees with the <UNK> position");
    return p;
}

ScoreReport score_from_json(const json& j) {
    ScoreReport r;
    r.explication_score = j.at("explication_score").get<double>();
    r.raw_score = j.at("raw_score").get<double>();
    r.gamma = j.at("gamma").get<double>();
    r.circular_zeroed = j.at("circular_zeroed").get<bool>();
    const json& leg = j.at("legality");
    r.legality.prime_count = leg.at("prime_count").get<int>();
    r.legality.prime_occurrences = leg.value("prime_occurrences", 0);
    r.legality.molecule_count = leg.at("molecule_count").get<int>();
    r.legality.stopword_count = leg.at("stopword_count").get<int>();
    r.legality.total_words = leg.at("total_words").get<int>();
    r.legality.circular = leg.at("circular").get<bool>();
    r.legality.alpha = leg.at("alpha").get<double>();
    r.legality.legality_score = leg.at("legality_score").get<double>();
    r.legality.primes_ratio = leg.at("primes_ratio").get<double>();
    r.legality.molecules_ratio = leg.at("molecules_ratio").get<double>();
    const json& sub = j.at("substitutability");
    r.substitutability.score = sub.at("score").get<double>();
    r.substitutability.k = sub.at("k").get<int>();
    r.substitutability.beta = sub.at("beta").get<double>();
    r.substitutability.prompt_version = sub.at("prompt_version").get<std::string>();
    r.substitutability.per_grader_mean = sub.at("per_grader_mean").get<std::vector<double>>();
    for (const auto& c : sub.at("cells")) {
        SubstitutabilityCell cell;
        cell.grader = c.at("grader").get<std::string>();
        cell.passage_index = c.at("passage_index").get<std::size_t>();
        cell.delta_baseline = c.at("delta_baseline").get<double>();
        cell.delta_min = c.at("delta_min").get<double>();
        cell.delta_ent = c.at("delta_ent").get<double>();
        cell.composite = c.at("composite").get<double>();
        r.substitutability.cells.push_back(std::move(cell));
    }
    return r;
}

DatasetEntry entry_from_json(const json& j) {
    DatasetEntry e;
    e.sense = sense_from_json(j.at("sense"));
    if (j.contains("usage_examples"))
        e.usage_examples = j.at("usage_examples").get<std::vector<std::string>>();
    e.explication = explication_from_json(j.at("explication"));
    if (j.contains("masked_passages"))
        for (const auto& p : j.at("masked_passages")) e.masked_passages.push_back(passage_from_json(p));
    if (j.contains("score")) e.score = score_from_json(j.at("score"));
    if (j.contains("provenance")) {
        const json& p = j.at("provenance");
        e.provenance.generator = p.value("generator", "");
        e.provenance.temperature = p.value("temperature", 0.0);
        e.provenance.prompt_version = p.value("prompt_version", "");
    }
    return e;
}

std::vector<DatasetEntry> read_entries_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open entries file: " + path);
    std::vector<DatasetEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            entries.push_back(entry_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw LoadError(path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw LoadError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return entries;
}

void write_entries_jsonl(const std::string& path, const std::vector<DatasetEntry>& entries) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write entries file: " + path);
    for (const auto& e : entries) out << to_json(e).dump() << '\n';
}

std::string render_benchmark_table(const BenchmarkReport& r) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-24s %12s %10s %18s %8s %11s %10s\n", "word",
                  "Explication", "Legality", "Substitutability", "Primes", "Molecules",
                  "Circular%");
    out += buf;
    out += std::string(98, '-') + '\n';
    for (const auto& e : r.entries) {
        std::snprintf(buf, sizeof buf, "%-24s %12.2f %10.2f %18.2f %8.1f %11.1f %10s\n",
                      e.word.substr(0, 24).c_str(), e.report.explication_score,
                      e.report.legality.legality_score, e.report.substitutability.score,
                      e.report.legality.primes_ratio, e.report.legality.molecules_ratio,
                      e.report.legality.circular ? "yes" : "no");
        out += buf;
    }
    out += std::string(98, '-') + '\n';
    std::snprintf(buf, sizeof buf, "%-24s %12.2f %10.2f %18.2f %8.1f %11.1f %10.1f\n", "mean",
                  r.explication_score.mean, r.legality_score.mean,
                  r.substitutability_score.mean, r.primes_ratio.mean, r.molecules_ratio.mean,
                  r.circular_pct);
    out += buf;
    return out;
}

std::string iso8601_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string config_hash(const json& config) {
    std::uint64_t h = fnv1a64(config.dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

} // namespace nsm
