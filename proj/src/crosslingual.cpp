#include "nsm/crosslingual.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "nsm/errors.hpp"
#include "nsm/parallel.hpp"

namespace nsm {

namespace {

std::vector<std::string> normalized_words(const std::string& text) {
    std::vector<std::string> words;
    for (const Token& t : tokenize(text)) words.push_back(t.normalized);
    return words;
}

// n-gram counts keyed by the joined word sequence.
std::map<std::string, int> ngram_counts(const std::vector<std::string>& words, std::size_t n) {
    std::map<std::string, int> counts;
    if (words.size() < n) return counts;
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
        std::string key;
        for (std::size_t j = 0; j < n; ++j) {
            if (j) key += '\x1f';
            key += words[i + j];
        }
        ++counts[key];
    }
    return counts;
}

} // namespace

const std::vector<std::string>& default_language_preset() {
    static const std::vector<std::string> preset = {"alz", "rw", "dz", "din", "ab"};
    return preset;
}

std::string canonical_language(const std::string& code) {
    if (code == "dn") return "dz";
    return code;
}

std::pair<std::string, std::string> round_trip(Translator& translator, const std::string& text,
                                               const std::string& lang) {
    if (text.empty()) throw ValidationError("round_trip requires non-empty text");
    std::string code = canonical_language(lang);
    std::string forward = translator.translate(text, "en", code);
    std::string back = translator.translate(forward, code, "en");
    return {forward, back};
}

double bleu(const std::string& reference, const std::string& hypothesis) {
    const std::vector<std::string> ref = normalized_words(reference);
    const std::vector<std::string> hyp = normalized_words(hypothesis);
    if (hyp.empty()) return 0.0;

    double log_precision_sum = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto ref_counts = ngram_counts(ref, n);
        const auto hyp_counts = ngram_counts(hyp, n);
        long long total = 0, matched = 0;
        for (const auto& [gram, count] : hyp_counts) {
            total += count;
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) matched += std::min(count, it->second);
        }
        double p;
        if (n == 1) {
            if (total == 0 || matched == 0) return 0.0;
            p = static_cast<double>(matched) / static_cast<double>(total);
        } else {
            // Add-one smoothing keeps short sentences scoreable.
            p = static_cast<double>(matched + 1) / static_cast<double>(total + 1);
        }
        log_precision_sum += 0.25 * std::log(p);
    }

    const double c = static_cast<double>(hyp.size());
    const double r = static_cast<double>(ref.size());
    const double brevity_penalty = c < r ? std::exp(1.0 - r / c) : 1.0;
    return 100.0 * brevity_penalty * std::exp(log_precision_sum);
}

double embedding_similarity(Embedder& embedder, const std::string& a, const std::string& b) {
    if (a.empty() || b.empty())
        throw ValidationError("embedding_similarity requires non-empty texts");
    const std::vector<double> va = embedder.embed(a);
    const std::vector<double> vb = embedder.embed(b);
    if (va.size() != vb.size())
        throw Error("embedder '" + embedder.id() + "' returned vectors of different dimensions (" +
                    std::to_string(va.size()) + " vs " + std::to_string(vb.size()) + ")");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        dot += va[i] * vb[i];
        na += va[i] * va[i];
        nb += vb[i] * vb[i];
    }
    if (na == 0.0 || nb == 0.0)
        throw Error("embedder '" + embedder.id() + "' returned a zero-norm vector");
    double cosine = dot / (std::sqrt(na) * std::sqrt(nb));
    return 100.0 * std::max(0.0, cosine);
}

CrossReport cross_report(Translator& translator, Embedder& embedder,
                         const std::vector<std::string>& texts,
                         const std::vector<std::string>& langs, int jobs) {
    if (texts.empty()) throw ValidationError("cross_report requires at least one text");
    if (langs.empty()) throw ValidationError("cross_report requires at least one language");

    std::vector<std::string> codes;
    for (const auto& l : langs) {
        std::string code = canonical_language(l);
        if (std::find(codes.begin(), codes.end(), code) == codes.end()) codes.push_back(code);
    }

    CrossReport out;
    const std::size_t cells = texts.size() * codes.size();
    std::vector<std::optional<RoundTripReport>> results(cells);
    std::vector<std::string> failures(cells);

    int effective_jobs = translator.thread_safe() && embedder.thread_safe() ? jobs : 1;
    parallel_for(cells, effective_jobs, [&](std::size_t idx) {
        const std::size_t t = idx / codes.size();
        const std::size_t l = idx % codes.size();
        try {
            RoundTripReport r;
            r.language = codes[l];
            r.original = texts[t];
            auto [forward, back] = round_trip(translator, texts[t], codes[l]);
            r.forward = forward;
            r.back = back;
            r.bleu = bleu(r.original, r.back);
            r.embed_similarity = embedding_similarity(embedder, r.original, r.back);
            results[idx] = std::move(r);
        } catch (const BackendError& e) {
            failures[idx] = e.what();
        }
    });

    std::map<std::string, LanguageAggregate> agg;
    for (const auto& code : codes) agg[code].language = code;
    for (std::size_t idx = 0; idx < cells; ++idx) {
        if (!failures[idx].empty()) {
            ++out.failed_pairs;
            out.failures.push_back(std::to_string(idx / codes.size()) + "/" +
                                   codes[idx % codes.size()] + ": " + failures[idx]);
            continue;
        }
        const RoundTripReport& r = *results[idx];
        LanguageAggregate& a = agg[r.language];
        a.mean_bleu += r.bleu;
        a.mean_similarity += r.embed_similarity;
        ++a.count;
        out.reports.push_back(r);
    }
    for (const auto& code : codes) {
        LanguageAggregate a = agg[code];
        if (a.count > 0) {
            a.mean_bleu /= static_cast<double>(a.count);
            a.mean_similarity /= static_cast<double>(a.count);
        }
        out.per_language.push_back(a);
    }
    return out;
}

} // namespace nsm
