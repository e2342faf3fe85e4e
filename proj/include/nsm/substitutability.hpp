#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsm/legality.hpp"

namespace nsm {

/// Version tag of the scoring prompt template. Recorded in every report so
/// scores stay re-derivable; bump it whenever the template text changes.
inline constexpr const char* kScoringPromptVersion = "nsm-sub-prompt/1";

/// An ambiguous multi-sentence passage with the target word masked as <UNK>
/// in exactly one sentence.
struct MaskedPassage {
    std::vector<std::string> sentences;
    std::size_t mask_sentence_index = 0;
    std::string target_word;

    /// Validates the single-mask invariant, locates the mask sentence, and
    /// (when min_sentences > 0) enforces the minimum sentence count needed
    /// for the configured truncation depth. Throws ValidationError.
    static MaskedPassage make(std::vector<std::string> sentences, std::string target_word,
                              std::size_t min_sentences = 0);
};

/// Grader backend contract: total natural-log probability of `target` as the
/// masked-word prediction given `context`. Must be deterministic for fixed
/// inputs and return finite values.
class WordScorer {
  public:
    virtual ~WordScorer() = default;
    virtual double log_prob(const std::string& context, const std::string& target) = 0;
    virtual std::string id() const = 0;
    /// Engines only issue concurrent calls when this returns true.
    virtual bool thread_safe() const { return true; }
};

struct SubstitutabilityCell {
    std::string grader;
    std::size_t passage_index = 0;
    double delta_baseline = 0.0;
    double delta_min = 0.0;
    double delta_ent = 0.0;
    double composite = 0.0; // min(beta, delta_baseline - delta_min + delta_ent)
};

struct SubstitutabilityReport {
    std::vector<SubstitutabilityCell> cells; // grader-major, passage-minor order
    std::vector<double> per_grader_mean;
    double score = 0.0; // grand mean of capped composites
    int k = 2;
    double beta = 40.0;
    std::string prompt_version = kScoringPromptVersion;
};

/// Renders the fixed scoring prompt: instruction block, the passage, then
/// (when explication lines are supplied) the "Here, <UNK> means:" block, and
/// finally the answer cue the target word is scored after.
std::string build_scoring_prompt(const std::vector<std::string>& sentences,
                                 const std::vector<std::string>* explication_lines);

/// log p(w | x, e) - log p(w | x): how much the explication helps the grader
/// recover the masked word.
double delta_baseline(WordScorer& scorer, const MaskedPassage& passage,
                      const Explication& explication);

/// Minimality probe: lines are removed one at a time from the end of the
/// explication and the per-removal log-probability change is averaged. At
/// most k removals are made and the last line is never removed; with fewer
/// lines than k+1 the divisor is the removal count actually performed, and a
/// one-line explication yields 0.
double delta_min(WordScorer& scorer, const MaskedPassage& passage, const Explication& explication,
                 int k);

/// Entailment probe: non-mask sentences are removed one at a time from the
/// end of the passage (the <UNK> sentence is never touched) with the full
/// explication held fixed, averaging the per-removal change as in delta_min.
double delta_ent(WordScorer& scorer, const MaskedPassage& passage, const Explication& explication,
                 int k);

/// Fills the full (grader, passage) matrix and aggregates
///   score = mean over cells of min(beta, delta_baseline - delta_min + delta_ent).
/// Cells may be evaluated concurrently (jobs > 1) when every scorer is
/// thread safe; aggregation always runs in grader-major order so the result
/// is identical regardless of scheduling. Any backend failure aborts the
/// evaluation; nothing is imputed.
SubstitutabilityReport substitutability(const std::vector<std::shared_ptr<WordScorer>>& scorers,
                                        const std::vector<MaskedPassage>& passages,
                                        const Explication& explication, int k = 2,
                                        double beta = 40.0, int jobs = 1);

} // namespace nsm
