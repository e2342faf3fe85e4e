#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nsm/scoring.hpp"

namespace nsm {

/// One lexical-database word sense.
struct WordSense {
    std::string lemma;
    std::string sense_id;
    std::string gloss;
    std::vector<std::string> synonyms;
    std::vector<std::string> examples;
};

/// Text-generation backend contract: `count` completions for a prompt at the
/// given sampling temperature.
class TextGenerator {
  public:
    virtual ~TextGenerator() = default;
    virtual std::vector<std::string> generate(const std::string& prompt, double temperature,
                                              int count) = 0;
    virtual std::string id() const = 0;
    virtual bool thread_safe() const { return true; }
};

struct Provenance {
    std::string generator;
    double temperature = 0.0;
    std::string prompt_version;
};

/// One candidate unit of the training corpus: sense, usage examples, the
/// candidate explication, its masked passages and (once scored) the report.
struct DatasetEntry {
    WordSense sense;
    std::vector<std::string> usage_examples; // 2 to 5
    Explication explication;
    std::vector<MaskedPassage> masked_passages;
    std::optional<ScoreReport> score;
    Provenance provenance;
};

/// Generation prompt templates. Placeholders: {lemma}, {gloss}, {examples},
/// {sentences}. Versioned so reports can state exactly what was asked.
struct PromptSet {
    std::string version = "nsm-gen/1";
    std::string example_prompt =
        "Write one example sentence that uses the word \"{lemma}\" with this meaning: {gloss}";
    std::string candidate_prompt =
        "Paraphrase the meaning of the word \"{lemma}\" using only simple, universal words.\n"
        "Meaning: {gloss}\n"
        "Examples of use:\n{examples}\n"
        "Write one short line per idea, and nothing else.";
    std::string passage_prompt =
        "Write a short passage of {sentences} sentences in which the word \"{lemma}\" "
        "(meaning: {gloss}) occurs exactly once, replaced by <UNK>. Make the passage ambiguous "
        "enough that the masked word is hard to guess without clues. "
        "Write one sentence per line.";
};

struct PipelineConfig {
    int examples_per_sense = 20; // generated example pool size per sense
    int min_usage_examples = 2;
    int max_usage_examples = 5;
    int candidates_per_sense = 5;
    int passages_per_sense = 4;
    int passage_sentences = 4; // requested length; never below k + 1
    double temperature = 0.7;
    int retry_budget = 2;
    int k = 2;
    double alpha = 10.0;
    double beta = 40.0;
    double gamma = 2.0;
    double threshold = 35.0;
    int cap = 2;
    std::uint64_t seed = 0;
    int jobs = 1;
    PromptSet prompts;
};

struct IngestStats {
    std::size_t parsed = 0;
    std::size_t malformed_skipped = 0;
    std::size_t prime_dropped = 0;
    std::size_t duplicate_dropped = 0;
};

/// Reads a line-delimited sense-corpus file (one JSON record per line with
/// sense_id, lemma, gloss, synonyms, examples). Senses whose lemma is a
/// prime surface form are dropped; duplicates by sense_id keep the first
/// occurrence. Malformed lines are skipped and counted.
std::vector<WordSense> ingest_senses(const std::string& path, const PrimeLexicon& lexicon,
                                     IngestStats* stats = nullptr);

struct ExampleBatch {
    std::vector<std::string> sentences;
    bool complete = false; // n survivors reached before the retry budget ran out
};

/// Generates n usage sentences for the sense, rejecting any that do not
/// contain the lemma (surface or inflected form) and retrying the shortfall
/// up to the retry budget. The lexicon supplies the stopword list used to
/// pick the content words of multiword lemmas.
ExampleBatch generate_examples(TextGenerator& gen, const WordSense& sense, int n,
                               const PipelineConfig& cfg, const PrimeLexicon& lexicon);

/// Generates candidate explications from 2 to 5 selected usage examples.
/// Completions are split on newlines with list markers stripped; a completion
/// that parses to no lines is skipped and counted in *skipped.
std::vector<Explication> generate_candidates(TextGenerator& gen, const WordSense& sense,
                                             const std::vector<std::string>& examples, int count,
                                             const PipelineConfig& cfg,
                                             std::size_t* skipped = nullptr);

/// Generates masked passages for the sense, enforcing the single-<UNK>
/// invariant and the minimum sentence count k + 1; invalid completions are
/// retried then dropped.
std::vector<MaskedPassage> generate_passages(TextGenerator& gen, const WordSense& sense, int count,
                                             const PipelineConfig& cfg);

struct SenseExclusion {
    std::string sense_id;
    std::string reason;
};

struct BuildResult {
    std::vector<DatasetEntry> entries; // scored candidate pool, input sense order
    std::vector<SenseExclusion> excluded;
    std::size_t unparseable_completions = 0;
    std::size_t partial_example_senses = 0;
};

/// Runs the full generation pipeline over the senses: example generation,
/// seeded usage sampling, passage generation, candidate explication and
/// scoring. Senses run concurrently under cfg.jobs; results are assembled in
/// input order so output does not depend on scheduling.
BuildResult build_dataset(const std::vector<WordSense>& senses, TextGenerator& gen,
                          const std::vector<std::shared_ptr<WordScorer>>& scorers,
                          const PrimeLexicon& lexicon, const PipelineConfig& cfg);

/// Quality filter: keeps entries with explication_score >= threshold, then
/// caps entries per sense_id keeping the highest scores (ties broken by
/// higher legality, then lexicographically smaller explication text). Output
/// is canonically ordered and the operation is idempotent.
std::vector<DatasetEntry> filter_and_cap(const std::vector<DatasetEntry>& entries,
                                         double threshold = 35.0, int cap = 2);

struct SplitResult {
    std::vector<DatasetEntry> train;
    std::vector<DatasetEntry> validation;
    std::size_t requested_val = 0;
    /// Contamination groups too large to place in validation (their senses
    /// stay in train). Non-empty means the validation split is short.
    std::vector<std::string> unplaced_sense_ids;
};

/// Deterministic seeded train/validation split. Senses are first merged into
/// contamination groups (same sense_id, shared lemma, or overlapping synonym
/// sets); whole groups are assigned so no sense or synonym straddles the
/// splits. Groups are drawn in seeded shuffle order into validation while
/// they fit under val_count; groups that cannot fit go to train and are
/// reported. Throws ValidationError when val_count >= entries, and an
/// infeasible-split error naming the offending senses when validation would
/// stay empty even though several groups exist.
SplitResult split_dataset(const std::vector<DatasetEntry>& entries, std::size_t val_count,
                          std::uint64_t seed);

} // namespace nsm
