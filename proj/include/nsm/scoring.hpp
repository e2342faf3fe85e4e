#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsm/legality.hpp"
#include "nsm/substitutability.hpp"

namespace nsm {

struct DatasetEntry; // dataset.hpp

/// Composite score for one explication. The raw value
/// gamma * (substitutability + legality) is kept alongside the reported
/// score, which is floored at 0 and forced to 0 for circular explications.
struct ScoreReport {
    LegalityReport legality;
    SubstitutabilityReport substitutability;
    double gamma = 2.0;
    double raw_score = 0.0;
    double explication_score = 0.0; // in [0, 100]
    bool circular_zeroed = false;
};

struct MetricSummary {
    double mean = 0.0;
    double std_error = 0.0; // standard error of the per-entry mean
};

struct BenchmarkEntryResult {
    std::string id;
    std::string word;
    ScoreReport report;
};

struct BenchmarkExclusion {
    std::string id;
    std::string reason;
};

/// Benchmark-set aggregates over per-entry reports, one row per metric
/// column of the standard report table.
struct BenchmarkReport {
    std::vector<BenchmarkEntryResult> entries;
    MetricSummary explication_score;
    MetricSummary legality_score;
    MetricSummary substitutability_score;
    MetricSummary primes_ratio;
    MetricSummary molecules_ratio;
    double circular_pct = 0.0;
    std::vector<BenchmarkExclusion> excluded;
    int k = 2;
    double alpha = 10.0;
    double beta = 40.0;
    double gamma = 2.0;
    std::string prompt_version = kScoringPromptVersion;
};

struct BenchConfig {
    int k = 2;
    double alpha = 10.0;
    double beta = 40.0;
    double gamma = 2.0;
    int jobs = 1;
};

/// Combines the two component scores:
///   score = gamma * (substitutability + legality), floored at 0,
/// and 0 outright when the explication is circular. With the defaults the
/// maximum attainable value is exactly 100.
ScoreReport explication_score(const LegalityReport& legality,
                              const SubstitutabilityReport& substitutability, double gamma = 2.0);

/// Scores every entry (legality, substitutability over its passages, then
/// the composite) and aggregates per-entry means with standard errors.
/// Backend failures exclude the affected entry and are listed in the report;
/// malformed entries and an empty entry list are validation errors.
BenchmarkReport run_benchmark(const std::vector<DatasetEntry>& entries,
                              const PrimeLexicon& lexicon,
                              const std::vector<std::shared_ptr<WordScorer>>& scorers,
                              const BenchConfig& config);

} // namespace nsm
