#include "nsm/substitutability.hpp"

#include <algorithm>
#include <cmath>

#include "nsm/errors.hpp"
#include "nsm/parallel.hpp"

namespace nsm {

namespace {

constexpr const char* kMaskToken = "<UNK>";

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

double checked_log_prob(WordScorer& scorer, const std::string& context, const std::string& target) {
    double lp = scorer.log_prob(context, target);
    if (!std::isfinite(lp))
        throw BackendError(scorer.id(), "non-finite log-probability for target '" + target + "'");
    return lp;
}

/// Sentence lists for the truncation series x_{-0} .. x_{-r}: the last j
/// non-mask sentences removed, mask sentence always kept.
std::vector<std::string> passage_without_last(const MaskedPassage& passage, int removed) {
    std::vector<std::string> out;
    int to_remove = removed;
    // Walk backwards marking removals, then emit in order.
    std::vector<bool> keep(passage.sentences.size(), true);
    for (std::size_t r = passage.sentences.size(); r-- > 0 && to_remove > 0;) {
        if (r == passage.mask_sentence_index) continue;
        keep[r] = false;
        --to_remove;
    }
    for (std::size_t i = 0; i < passage.sentences.size(); ++i)
        if (keep[i]) out.push_back(passage.sentences[i]);
    return out;
}

std::vector<std::string> lines_without_last(const Explication& explication, int removed) {
    std::vector<std::string> out(explication.lines.begin(),
                                 explication.lines.end() - removed);
    return out;
}

} // namespace

MaskedPassage MaskedPassage::make(std::vector<std::string> sentences, std::string target_word,
                                  std::size_t min_sentences) {
    MaskedPassage p;
    p.sentences = std::move(sentences);
    p.target_word = std::move(target_word);
    if (p.target_word.empty()) throw ValidationError("masked passage has empty target word");
    if (p.sentences.empty()) throw ValidationError("masked passage has no sentences");

    std::size_t masked = 0;
    for (std::size_t i = 0; i < p.sentences.size(); ++i) {
        std::size_t occ = count_occurrences(p.sentences[i], kMaskToken);
        if (occ == 0) continue;
        if (occ > 1)
            throw ValidationError("sentence " + std::to_string(i) +
                                  " contains more than one <UNK>");
        p.mask_sentence_index = i;
        ++masked;
    }
    if (masked != 1)
        throw ValidationError("passage for '" + p.target_word + "' must contain exactly one " +
                              "<UNK> sentence, found " + std::to_string(masked));
    if (min_sentences > 0 && p.sentences.size() < min_sentences)
        throw ValidationError("passage for '" + p.target_word + "' has " +
                              std::to_string(p.sentences.size()) + " sentences, needs at least " +
                              std::to_string(min_sentences));
    return p;
}

std::string build_scoring_prompt(const std::vector<std::string>& sentences,
                                 const std::vector<std::string>* explication_lines) {
    std::string prompt =
        "A word in the passage below has been replaced with <UNK>.\n"
        "Read the passage and predict the masked word.\n\n";
    std::string passage;
    for (const auto& s : sentences) {
        if (!passage.empty()) passage += ' ';
        passage += s;
    }
    prompt += passage;
    prompt += '\n';
    if (explication_lines != nullptr) {
        prompt += "\nHere, <UNK> means:\n";
        for (const auto& line : *explication_lines) {
            prompt += line;
            prompt += '\n';
        }
    }
    prompt += "\nThe word <UNK> stands for:";
    return prompt;
}

double delta_baseline(WordScorer& scorer, const MaskedPassage& passage,
                      const Explication& explication) {
    double with_expl = checked_log_prob(
        scorer, build_scoring_prompt(passage.sentences, &explication.lines), passage.target_word);
    double without_expl = checked_log_prob(scorer, build_scoring_prompt(passage.sentences, nullptr),
                                           passage.target_word);
    return with_expl - without_expl;
}

double delta_min(WordScorer& scorer, const MaskedPassage& passage, const Explication& explication,
                 int k) {
    if (k < 1) throw ValidationError("delta_min requires k >= 1");
    int removals = std::min<int>(k, static_cast<int>(explication.lines.size()) - 1);
    if (removals <= 0) return 0.0;

    double sum = 0.0;
    double prev = checked_log_prob(
        scorer, build_scoring_prompt(passage.sentences, &explication.lines), passage.target_word);
    for (int i = 1; i <= removals; ++i) {
        std::vector<std::string> truncated = lines_without_last(explication, i);
        double cur = checked_log_prob(scorer, build_scoring_prompt(passage.sentences, &truncated),
                                      passage.target_word);
        sum += cur - prev;
        prev = cur;
    }
    return sum / removals;
}

double delta_ent(WordScorer& scorer, const MaskedPassage& passage, const Explication& explication,
                 int k) {
    if (k < 1) throw ValidationError("delta_ent requires k >= 1");
    int removable = static_cast<int>(passage.sentences.size()) - 1;
    int removals = std::min(k, removable);
    if (removals <= 0) return 0.0;

    double sum = 0.0;
    double prev = checked_log_prob(
        scorer, build_scoring_prompt(passage.sentences, &explication.lines), passage.target_word);
    for (int j = 1; j <= removals; ++j) {
        std::vector<std::string> truncated = passage_without_last(passage, j);
        double cur = checked_log_prob(scorer, build_scoring_prompt(truncated, &explication.lines),
                                      passage.target_word);
        sum += cur - prev;
        prev = cur;
    }
    return sum / removals;
}

SubstitutabilityReport substitutability(const std::vector<std::shared_ptr<WordScorer>>& scorers,
                                        const std::vector<MaskedPassage>& passages,
                                        const Explication& explication, int k, double beta,
                                        int jobs) {
    if (scorers.empty()) throw ValidationError("substitutability requires at least one grader");
    if (passages.empty()) throw ValidationError("substitutability requires at least one passage");
    if (k < 1) throw ValidationError("substitutability requires k >= 1");

    SubstitutabilityReport report;
    report.k = k;
    report.beta = beta;
    report.cells.resize(scorers.size() * passages.size());

    bool all_thread_safe =
        std::all_of(scorers.begin(), scorers.end(), [](const auto& s) { return s->thread_safe(); });
    int effective_jobs = all_thread_safe ? jobs : 1;

    std::size_t completed_guess = 0;
    try {
        parallel_for(report.cells.size(), effective_jobs, [&](std::size_t idx) {
            std::size_t g = idx / passages.size();
            std::size_t p = idx % passages.size();
            WordScorer& scorer = *scorers[g];
            SubstitutabilityCell cell;
            cell.grader = scorer.id();
            cell.passage_index = p;
            cell.delta_baseline = delta_baseline(scorer, passages[p], explication);
            cell.delta_min = delta_min(scorer, passages[p], explication, k);
            cell.delta_ent = delta_ent(scorer, passages[p], explication, k);
            cell.composite =
                std::min(beta, cell.delta_baseline - cell.delta_min + cell.delta_ent);
            report.cells[idx] = std::move(cell); // filled only once fully computed
        });
    } catch (const BackendError& e) {
        for (const auto& cell : report.cells)
            if (!cell.grader.empty()) ++completed_guess;
        throw BackendError(e.backend(), e.message() + " (evaluation aborted, " +
                                            std::to_string(completed_guess) + "/" +
                                            std::to_string(report.cells.size()) +
                                            " cells completed)");
    }

    // Fixed-order aggregation; with a full matrix the per-grader-then-grand
    // mean equals the flat mean, which we assert below.
    double flat_sum = 0.0;
    for (const auto& cell : report.cells) flat_sum += cell.composite;
    report.score = flat_sum / static_cast<double>(report.cells.size());

    double grader_mean_sum = 0.0;
    for (std::size_t g = 0; g < scorers.size(); ++g) {
        double s = 0.0;
        for (std::size_t p = 0; p < passages.size(); ++p)
            s += report.cells[g * passages.size() + p].composite;
        double mean = s / static_cast<double>(passages.size());
        report.per_grader_mean.push_back(mean);
        grader_mean_sum += mean;
    }
    double grand = grader_mean_sum / static_cast<double>(scorers.size());
    if (std::fabs(grand - report.score) > 1e-9)
        throw Error("substitutability aggregation mismatch: flat mean " +
                    std::to_string(report.score) + " vs per-grader mean " + std::to_string(grand));

    return report;
}

} // namespace nsm
