#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <random>

#include "nsm/backends.hpp"
#include "nsm/crosslingual.hpp"
#include "nsm/errors.hpp"
#include "oracle/bleu_oracle.hpp"
#include "support/fakes.hpp"

using namespace nsm;
using nsmtest::FnEmbedder;
using nsmtest::FnTranslator;

TEST_CASE("bleu identity and disjoint cases") {
    CHECK(bleu("i want this thing now", "i want this thing now") == doctest::Approx(100.0));
    CHECK(bleu("one", "one") == doctest::Approx(100.0)); // short identity still perfect
    CHECK(bleu("the cat sat", "dog runs fast") == 0.0);
    CHECK(bleu("anything", "") == 0.0);
    CHECK(bleu("", "anything") == 0.0); // no reference unigrams to match
}

TEST_CASE("bleu worked example matches the brute-force reference") {
    const std::string ref = "the cat sat on the mat";
    const std::string hyp = "the cat sat on mat";
    double expected = nsmtest::oracle_bleu(ref, hyp);
    CHECK(bleu(ref, hyp) == doctest::Approx(expected).epsilon(1e-6));
    // Sanity on the oracle itself: all 5 unigrams match; brevity penalty
    // applies since the hypothesis is one word short.
    CHECK(expected > 0.0);
    CHECK(expected < 100.0);
}

TEST_CASE("bleu is asymmetric in general but bounded") {
    const std::string a = "people say good things about this place";
    const std::string b = "people say things";
    CHECK(bleu(a, b) != doctest::Approx(bleu(b, a)));

    std::mt19937 rng(5);
    const std::vector<std::string> pool = {"the", "cat",  "sat",   "on",   "mat",
                                           "dog", "good", "thing", "time", "place"};
    for (int i = 0; i < 200; ++i) {
        auto sentence = [&](int len) {
            std::string s;
            for (int j = 0; j < len; ++j) s += pool[rng() % pool.size()] + ' ';
            return s;
        };
        std::string ref = sentence(1 + static_cast<int>(rng() % 12));
        std::string hyp = sentence(1 + static_cast<int>(rng() % 12));
        double v = bleu(ref, hyp);
        CHECK(v >= 0.0);
        CHECK(v <= 100.0 + 1e-9);
        CHECK(v == doctest::Approx(nsmtest::oracle_bleu(ref, hyp)).epsilon(1e-9));
    }
}

TEST_CASE("bleu uses the shared tokenizer (case and punctuation)") {
    CHECK(bleu("I want This.", "i want this") == doctest::Approx(100.0));
}

TEST_CASE("round trip composes the two translations") {
    auto identity = identity_translator("id");
    auto [fwd, back] = round_trip(*identity, "people say things", "rw");
    CHECK(fwd == "people say things");
    CHECK(back == "people say things");

    FnTranslator stepper("stepper", [](const std::string& text, const std::string& source,
                                       const std::string&) {
        if (source == "en") {
            std::string up = text;
            std::transform(up.begin(), up.end(), up.begin(), ::toupper);
            return up;
        }
        std::string low = text;
        std::transform(low.begin(), low.end(), low.begin(), ::tolower);
        return low;
    });
    auto [f2, b2] = round_trip(stepper, "Mixed Case Text", "rw");
    CHECK(f2 == "MIXED CASE TEXT");
    CHECK(b2 == "mixed case text");

    CHECK_THROWS_AS(round_trip(*identity, "", "rw"), ValidationError);
}

TEST_CASE("embedding similarity") {
    FnEmbedder ortho("ortho", [](const std::string& text) -> std::vector<double> {
        if (text == "a") return {1.0, 0.0};
        if (text == "b") return {0.0, 1.0};
        if (text == "c") return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
        if (text == "zero") return {0.0, 0.0};
        return {0.5, 0.5};
    });
    CHECK(embedding_similarity(ortho, "a", "a") == doctest::Approx(100.0));
    CHECK(embedding_similarity(ortho, "a", "b") == doctest::Approx(0.0));
    CHECK(embedding_similarity(ortho, "a", "c") == doctest::Approx(70.710678).epsilon(1e-6));
    CHECK_THROWS(embedding_similarity(ortho, "a", "zero"));
    CHECK_THROWS_AS(embedding_similarity(ortho, "", "a"), ValidationError);

    // Negative cosine clamps to zero.
    FnEmbedder neg("neg", [](const std::string& text) -> std::vector<double> {
        return text == "p" ? std::vector<double>{1.0, 0.0} : std::vector<double>{-1.0, 0.0};
    });
    CHECK(embedding_similarity(neg, "p", "q") == 0.0);

    // Reflexivity holds for any deterministic embedder.
    auto hash = hash_embedder("h", 16, 7);
    CHECK(embedding_similarity(*hash, "some text", "some text") == doctest::Approx(100.0));
}

TEST_CASE("cross_report over the default language preset") {
    auto identity = identity_translator("id");
    auto embedder = hash_embedder("h", 16, 3);

    CrossReport report = cross_report(*identity, *embedder, {"people say good things"},
                                      default_language_preset());
    REQUIRE(report.reports.size() == 5);
    for (const auto& r : report.reports) {
        CHECK(r.bleu == doctest::Approx(100.0));
        CHECK(r.embed_similarity == doctest::Approx(100.0));
        CHECK(r.back == r.original);
    }
    REQUIRE(report.per_language.size() == 5);
    CHECK(report.per_language[0].language == "alz");
    CHECK(report.per_language[2].language == "dz");
    CHECK(report.failed_pairs == 0);
}

TEST_CASE("dn is accepted as an alias of dz") {
    CHECK(canonical_language("dn") == "dz");
    CHECK(canonical_language("dz") == "dz");
    CHECK(canonical_language("rw") == "rw");

    auto identity = identity_translator("id");
    auto embedder = hash_embedder("h", 8, 3);
    CrossReport report = cross_report(*identity, *embedder, {"text"}, {"dn"});
    REQUIRE(report.reports.size() == 1);
    CHECK(report.reports[0].language == "dz");
}

TEST_CASE("per-pair provider failures are recorded and excluded") {
    FnTranslator flaky("flaky", [](const std::string& text, const std::string& source,
                                   const std::string& target) -> std::string {
        if (target == "din" || source == "din") throw BackendError("flaky", "unsupported");
        return text;
    });
    auto embedder = hash_embedder("h", 8, 3);
    CrossReport report =
        cross_report(flaky, *embedder, {"text one", "text two"}, default_language_preset());
    CHECK(report.failed_pairs == 2); // din fails for both texts
    CHECK(report.reports.size() == 8);
    for (const auto& a : report.per_language) {
        if (a.language == "din")
            CHECK(a.count == 0);
        else
            CHECK(a.count == 2);
    }
}

TEST_CASE("cardinality: one text, five languages, five reports") {
    auto identity = identity_translator("id");
    auto embedder = hash_embedder("h", 8, 1);
    CrossReport report = cross_report(*identity, *embedder, {"a single text"},
                                      {"alz", "rw", "dz", "din", "ab"});
    CHECK(report.reports.size() == 5);
}

TEST_CASE("empty inputs are validation errors") {
    auto identity = identity_translator("id");
    auto embedder = hash_embedder("h", 8, 1);
    CHECK_THROWS_AS(cross_report(*identity, *embedder, {}, {"rw"}), ValidationError);
    CHECK_THROWS_AS(cross_report(*identity, *embedder, {"text"}, {}), ValidationError);
}
