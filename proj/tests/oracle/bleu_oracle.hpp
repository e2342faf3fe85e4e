#pragma once

// Independent brute-force BLEU reference. Counts n-grams as raw token
// vectors, computes clipped matches by scanning the reference for every
// hypothesis position, and applies the smoothing and brevity-penalty rules
// directly. Shares only the tokenizer with the implementation, which is part
// of the metric's definition here.

#include <cmath>
#include <string>
#include <vector>

#include "nsm/lexicon.hpp"

namespace nsmtest {

inline std::vector<std::vector<std::string>> oracle_ngrams(const std::vector<std::string>& words,
                                                           std::size_t n) {
    std::vector<std::vector<std::string>> grams;
    for (std::size_t i = 0; i + n <= words.size(); ++i)
        grams.emplace_back(words.begin() + i, words.begin() + i + n);
    return grams;
}

inline double oracle_bleu(const std::string& reference, const std::string& hypothesis) {
    std::vector<std::string> ref, hyp;
    for (const nsm::Token& t : nsm::tokenize(reference)) ref.push_back(t.normalized);
    for (const nsm::Token& t : nsm::tokenize(hypothesis)) hyp.push_back(t.normalized);
    if (hyp.empty()) return 0.0;

    double log_sum = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        auto hyp_grams = oracle_ngrams(hyp, n);
        auto ref_grams = oracle_ngrams(ref, n);
        // Clipped matches: count each hypothesis n-gram type at most as often
        // as it appears in the reference.
        long long matched = 0;
        std::vector<bool> hyp_used(hyp_grams.size(), false);
        for (std::size_t i = 0; i < hyp_grams.size(); ++i) {
            if (hyp_used[i]) continue;
            long long hyp_count = 0;
            for (std::size_t j = 0; j < hyp_grams.size(); ++j) {
                if (hyp_grams[j] == hyp_grams[i]) {
                    hyp_used[j] = true;
                    ++hyp_count;
                }
            }
            long long ref_count = 0;
            for (const auto& rg : ref_grams)
                if (rg == hyp_grams[i]) ++ref_count;
            matched += hyp_count < ref_count ? hyp_count : ref_count;
        }
        long long total = static_cast<long long>(hyp_grams.size());
        double p;
        if (n == 1) {
            if (total == 0 || matched == 0) return 0.0;
            p = static_cast<double>(matched) / static_cast<double>(total);
        } else {
            p = static_cast<double>(matched + 1) / static_cast<double>(total + 1);
        }
        log_sum += std::log(p) / 4.0;
    }

    double c = static_cast<double>(hyp.size());
    double r = static_cast<double>(ref.size());
    double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
    return 100.0 * bp * std::exp(log_sum);
}

} // namespace nsmtest
