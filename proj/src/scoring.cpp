#include "nsm/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "nsm/dataset.hpp"
#include "nsm/errors.hpp"
#include "nsm/parallel.hpp"

namespace nsm {

namespace {

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        double sample_var = sq / static_cast<double>(values.size() - 1);
        s.std_error = std::sqrt(sample_var / static_cast<double>(values.size()));
    }
    return s;
}

} // namespace

ScoreReport explication_score(const LegalityReport& legality,
                              const SubstitutabilityReport& substitutability, double gamma) {
    ScoreReport report;
    report.legality = legality;
    report.substitutability = substitutability;
    report.gamma = gamma;
    report.raw_score = gamma * (substitutability.score + legality.legality_score);
    if (legality.circular) {
        report.explication_score = 0.0;
        report.circular_zeroed = true;
    } else {
        report.explication_score = std::max(0.0, report.raw_score);
    }
    return report;
}

BenchmarkReport run_benchmark(const std::vector<DatasetEntry>& entries,
                              const PrimeLexicon& lexicon,
                              const std::vector<std::shared_ptr<WordScorer>>& scorers,
                              const BenchConfig& config) {
    if (entries.empty()) throw ValidationError("benchmark entry list is empty");
    if (scorers.empty()) throw ValidationError("benchmark requires at least one grader");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].masked_passages.empty())
            throw ValidationError("benchmark entry " + std::to_string(i) + " ('" +
                                  entries[i].explication.target_word +
                                  "') has no masked passages");
    }

    std::vector<std::optional<ScoreReport>> results(entries.size());
    std::vector<std::string> failures(entries.size());

    parallel_for(entries.size(), config.jobs, [&](std::size_t i) {
        const DatasetEntry& entry = entries[i];
        try {
            LegalityReport leg = legality(entry.explication, lexicon, config.alpha);
            SubstitutabilityReport sub = substitutability(scorers, entry.masked_passages,
                                                          entry.explication, config.k, config.beta);
            results[i] = explication_score(leg, sub, config.gamma);
        } catch (const BackendError& e) {
            failures[i] = e.what();
        }
    });

    BenchmarkReport report;
    report.k = config.k;
    report.alpha = config.alpha;
    report.beta = config.beta;
    report.gamma = config.gamma;

    std::vector<double> scores, legs, subs, primes, mols;
    int circular_count = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::string id = entries[i].sense.sense_id.empty() ? entries[i].explication.target_word
                                                           : entries[i].sense.sense_id;
        if (!failures[i].empty()) {
            report.excluded.push_back({id, failures[i]});
            continue;
        }
        const ScoreReport& r = *results[i];
        report.entries.push_back({id, entries[i].explication.target_word, r});
        scores.push_back(r.explication_score);
        legs.push_back(r.legality.legality_score);
        subs.push_back(r.substitutability.score);
        primes.push_back(r.legality.primes_ratio);
        mols.push_back(r.legality.molecules_ratio);
        if (r.legality.circular) ++circular_count;
    }
    if (report.entries.empty())
        throw BackendError("benchmark", "every entry failed; first failure: " +
                                            report.excluded.front().reason);

    report.explication_score = summarize(scores);
    report.legality_score = summarize(legs);
    report.substitutability_score = summarize(subs);
    report.primes_ratio = summarize(primes);
    report.molecules_ratio = summarize(mols);
    report.circular_pct = 100.0 * circular_count / static_cast<double>(report.entries.size());
    return report;
}

} // namespace nsm
