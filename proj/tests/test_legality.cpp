#include <doctest.h>

#include <random>

#include "nsm/errors.hpp"
#include "nsm/legality.hpp"

using namespace nsm;

namespace {

const PrimeLexicon& lex() {
    static PrimeLexicon lexicon = load_lexicon(NSM_DATA_DIR "/nsm_lexicon.txt");
    return lexicon;
}

Explication make_expl(const std::string& word, std::vector<std::string> lines) {
    return Explication::make(word, std::move(lines));
}

} // namespace

TEST_CASE("explication construction trims and validates") {
    Explication e = make_expl("rough", {"  someone feels something bad  ", "", "this is true"});
    CHECK(e.lines.size() == 2);
    CHECK(e.lines[0] == "someone feels something bad");
    CHECK_THROWS_AS(Explication::make("", {"x"}), ValidationError);
    CHECK_THROWS_AS(Explication::make("rough", {"", "   "}), ValidationError);
}

TEST_CASE("legality score boundaries") {
    // Every counted word is a prime exponent: perfectly legal.
    LegalityReport all_prime =
        legality(make_expl("rough", {"i want this", "you know something"}), lex());
    CHECK(all_prime.legality_score == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(all_prime.prime_count == 6);
    CHECK(all_prime.total_words == 6);
    CHECK(all_prime.primes_ratio == doctest::Approx(100.0));

    // No primes, no stopwords: every word is a molecule.
    LegalityReport all_mol = legality(make_expl("dog", {"canine quadruped barks"}), lex());
    CHECK(all_mol.legality_score == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(all_mol.molecule_count == 3);

    // 10 counted words: 6 primes, 2 molecules, 2 stopwords -> 4.0.
    LegalityReport mixed = legality(
        make_expl("rough", {"i want this good thing because giraffe elephant of the"}), lex());
    CHECK(mixed.total_words == 10);
    CHECK(mixed.prime_count == 6);
    CHECK(mixed.molecule_count == 2);
    CHECK(mixed.stopword_count == 2);
    CHECK(mixed.legality_score == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(mixed.primes_ratio == doctest::Approx(60.0));
    CHECK(mixed.molecules_ratio == doctest::Approx(20.0));
}

TEST_CASE("count partition holds") {
    LegalityReport r = legality(
        make_expl("rough", {"for a long time people did strange things there"}), lex());
    CHECK(r.prime_count + r.molecule_count + r.stopword_count == r.total_words);
}

TEST_CASE("multiword primes keep the +10 boundary") {
    // "a long time" consumes three tokens, all counted as primes.
    LegalityReport r = legality(make_expl("while", {"a long time before now"}), lex());
    CHECK(r.total_words == 5);
    CHECK(r.prime_count == 5);
    CHECK(r.prime_occurrences == 3);
    CHECK(r.legality_score == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("explication with no countable words scores zero") {
    LegalityReport r = legality(make_expl("rough", {"???"}), lex());
    CHECK(r.total_words == 0);
    CHECK(r.legality_score == 0.0);
    CHECK(r.circular == false);
}

TEST_CASE("circularity detection") {
    CHECK(detect_circularity(make_expl("cry", {"someone cries for a long time"}), lex()));
    CHECK(detect_circularity(make_expl("cry", {"this someone cried before"}), lex()));
    CHECK(detect_circularity(make_expl("run", {"someone is running now"}), lex()));
    CHECK(detect_circularity(make_expl("arm", {"part of someone's arm"}), lex()));
    CHECK_FALSE(detect_circularity(make_expl("rough", {"this part is not smooth"}), lex()));
    CHECK_FALSE(
        detect_circularity(make_expl("sad", {"this someone feels something bad"}), lex()));
    // Multiword target: content words checked independently.
    CHECK(detect_circularity(make_expl("give up", {"someone gives something to someone"}), lex()));
    CHECK_FALSE(detect_circularity(make_expl("give up", {"someone stops wanting this"}), lex()));
}

TEST_CASE("inflection variants and stemmer") {
    auto v = inflection_variants("cry");
    CHECK(v.count("cries"));
    CHECK(v.count("cried"));
    CHECK(v.count("crying"));
    v = inflection_variants("make");
    CHECK(v.count("making"));
    CHECK(v.count("made") == 0); // irregular forms are out of scope
    v = inflection_variants("stop");
    CHECK(v.count("stopped"));
    CHECK(v.count("stopping"));

    CHECK(simple_stem("running") == "run");
    CHECK(simple_stem("cries") == "cry");
    CHECK(simple_stem("feels") == "feel");
    CHECK(simple_stem("someone's") == "someone");
    CHECK(simple_stem("pass") == "pass");
    CHECK(simple_stem("bad") == "bad");
}

TEST_CASE("circularity is independent of the counts") {
    LegalityReport with_target =
        legality(make_expl("giraffe", {"a giraffe is big"}), lex());
    LegalityReport other_target =
        legality(make_expl("rough", {"a giraffe is big"}), lex());
    CHECK(with_target.circular);
    CHECK_FALSE(other_target.circular);
    CHECK(with_target.legality_score == other_target.legality_score);
    CHECK(with_target.prime_count == other_target.prime_count);
}

TEST_CASE("property: swapping one molecule for a prime adds 2*alpha/total") {
    std::mt19937 rng(7);
    const std::vector<std::string> pool = {"i",     "want",    "this",  "know",  "giraffe",
                                           "rocket", "plastic", "of",   "the",   "people",
                                           "see",   "hear",     "lamp", "cloud", "with"};
    int tested = 0;
    for (int iter = 0; iter < 300 && tested < 100; ++iter) {
        std::vector<std::string> words;
        int len = 3 + static_cast<int>(rng() % 10);
        for (int i = 0; i < len; ++i) words.push_back(pool[rng() % pool.size()]);
        std::string text;
        for (const auto& w : words) text += w + ' ';

        auto tokens = tokenize(text);
        auto classes = classify(tokens, lex());
        int molecule_at = -1;
        for (const auto& c : classes)
            if (c.kind == TokenKind::Molecule) molecule_at = static_cast<int>(c.token_index);
        if (molecule_at < 0) continue;

        LegalityReport before = legality(Explication::make("zzz", {text}), lex());
        // "good" joins no multiword form, so only this token's class changes.
        words[static_cast<std::size_t>(molecule_at)] = "good";
        std::string text2;
        for (const auto& w : words) text2 += w + ' ';
        LegalityReport after = legality(Explication::make("zzz", {text2}), lex());

        REQUIRE(after.total_words == before.total_words);
        double expected = before.legality_score + 2.0 * before.alpha / before.total_words;
        CHECK(after.legality_score == doctest::Approx(expected).epsilon(1e-12));
        ++tested;
    }
    CHECK(tested == 100);
}

TEST_CASE("property: stopword-for-stopword swap leaves the score unchanged") {
    std::mt19937 rng(11);
    const std::vector<std::string> pool = {"i",   "want", "of",     "giraffe", "know",
                                           "the", "with", "people", "cloud",   "at"};
    int tested = 0;
    for (int iter = 0; iter < 300 && tested < 100; ++iter) {
        std::vector<std::string> words;
        int len = 3 + static_cast<int>(rng() % 10);
        for (int i = 0; i < len; ++i) words.push_back(pool[rng() % pool.size()]);
        std::string text;
        for (const auto& w : words) text += w + ' ';

        auto classes = classify(tokenize(text), lex());
        int stop_at = -1;
        for (const auto& c : classes)
            if (c.kind == TokenKind::Stopword) stop_at = static_cast<int>(c.token_index);
        if (stop_at < 0) continue;

        LegalityReport before = legality(Explication::make("zzz", {text}), lex());
        words[static_cast<std::size_t>(stop_at)] = "from"; // another pure stopword
        std::string text2;
        for (const auto& w : words) text2 += w + ' ';
        LegalityReport after = legality(Explication::make("zzz", {text2}), lex());

        CHECK(after.legality_score == doctest::Approx(before.legality_score).epsilon(1e-12));
        ++tested;
    }
    CHECK(tested == 100);
}

TEST_CASE("legality score is always within [-alpha, +alpha]") {
    std::mt19937 rng(13);
    const std::vector<std::string> pool = {"i",       "want", "this", "giraffe", "of",
                                           "because", "very", "lamp", "a",       "long",
                                           "time",    "the",  "same", "there",   "is"};
    for (int iter = 0; iter < 200; ++iter) {
        std::string text;
        int len = 1 + static_cast<int>(rng() % 14);
        for (int i = 0; i < len; ++i) text += pool[rng() % pool.size()] + ' ';
        LegalityReport r = legality(Explication::make("zzz", {text}), lex());
        CHECK(r.legality_score <= 10.0 + 1e-12);
        CHECK(r.legality_score >= -10.0 - 1e-12);
        CHECK(r.prime_count + r.molecule_count + r.stopword_count == r.total_words);
    }
}
