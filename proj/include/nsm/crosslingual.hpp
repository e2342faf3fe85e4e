#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsm/lexicon.hpp"

namespace nsm {

/// Version tag of the BLEU variant: sentence-level BLEU-4, add-one smoothing
/// on numerator and denominator for n >= 2, brevity penalty exp(1 - r/c).
inline constexpr const char* kBleuVariant = "sentence-bleu4-addone/1";

/// Translation backend contract. Deterministic per (text, source, target)
/// within a session; must return non-empty text for non-empty input or throw.
class Translator {
  public:
    virtual ~Translator() = default;
    virtual std::string translate(const std::string& text, const std::string& source,
                                  const std::string& target) = 0;
    virtual std::string id() const = 0;
    virtual bool thread_safe() const { return true; }
};

/// Sentence-embedding backend contract. Same text, same vector within a
/// session; fixed dimension per backend.
class Embedder {
  public:
    virtual ~Embedder() = default;
    virtual std::vector<double> embed(const std::string& text) = 0;
    virtual std::string id() const = 0;
    virtual bool thread_safe() const { return true; }
};

struct RoundTripReport {
    std::string language;
    std::string original;
    std::string forward;
    std::string back;
    double bleu = 0.0;             // [0, 100]
    double embed_similarity = 0.0; // [0, 100]
};

struct LanguageAggregate {
    std::string language;
    double mean_bleu = 0.0;
    double mean_similarity = 0.0;
    std::size_t count = 0;
};

struct CrossReport {
    std::vector<RoundTripReport> reports; // text-major, language-minor order
    std::vector<LanguageAggregate> per_language;
    std::size_t failed_pairs = 0;
    std::vector<std::string> failures; // "text_index/lang: reason"
    std::string bleu_variant = kBleuVariant;
};

/// The five low-resource stress-test languages: Alur, Kinyarwanda, Dzongkha,
/// Dinka, Abkhaz.
const std::vector<std::string>& default_language_preset();

/// Canonicalizes a language code ("dn" is accepted as an alias of "dz").
std::string canonical_language(const std::string& code);

/// English -> lang -> English round trip. Empty input is a validation error;
/// provider failures propagate.
std::pair<std::string, std::string> round_trip(Translator& translator, const std::string& text,
                                               const std::string& lang);

/// Sentence-level BLEU-4 of hypothesis against reference, scaled to [0, 100].
/// Uses the shared tokenizer; empty hypothesis scores 0.
double bleu(const std::string& reference, const std::string& hypothesis);

/// 100 * max(0, cosine(embed(a), embed(b))). Throws on zero-norm vectors or
/// a dimension mismatch.
double embedding_similarity(Embedder& embedder, const std::string& a, const std::string& b);

/// One round-trip report per (text, language), with per-language mean BLEU
/// and similarity. Per-pair provider failures are recorded and excluded.
CrossReport cross_report(Translator& translator, Embedder& embedder,
                         const std::vector<std::string>& texts,
                         const std::vector<std::string>& langs, int jobs = 1);

} // namespace nsm
