#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "nsm/errors.hpp"
#include "nsm/lexicon.hpp"

using namespace nsm;

namespace {

const char* kLexiconPath = NSM_DATA_DIR "/nsm_lexicon.txt";

const PrimeLexicon& default_lexicon() {
    static PrimeLexicon lexicon = load_lexicon(kLexiconPath);
    return lexicon;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::vector<std::string> normalized(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(t.normalized);
    return out;
}

} // namespace

TEST_CASE("default lexicon has the 65-prime inventory") {
    const PrimeLexicon& lex = default_lexicon();
    CHECK(lex.primes().size() == 65);
    // Loading is deterministic: same file, same table.
    PrimeLexicon again = load_lexicon(kLexiconPath);
    REQUIRE(again.primes().size() == lex.primes().size());
    for (std::size_t i = 0; i < lex.primes().size(); ++i) {
        CHECK(again.primes()[i].canonical == lex.primes()[i].canonical);
        CHECK(again.primes()[i].exponents == lex.primes()[i].exponents);
        CHECK(again.primes()[i].inflections == lex.primes()[i].inflections);
    }
    CHECK(lex.stopwords() == again.stopwords());
}

TEST_CASE("no stopword is a prime exponent after load") {
    const PrimeLexicon& lex = default_lexicon();
    for (const auto& word : lex.stopwords()) CHECK(lex.prime_for_word(word) == nullptr);
    // Known collisions from the shipped list resolved in favour of the primes.
    CHECK(lex.prime_for_word("because") != nullptr);
    CHECK(lex.prime_for_word("very") != nullptr);
    CHECK(!lex.is_stopword("because"));
    CHECK(lex.is_stopword("of"));
    CHECK(lex.is_stopword("the"));
}

TEST_CASE("duplicate exponent is a validation error") {
    std::string path = write_temp("lex_dup.txt",
                                  "[PRIMES]\n"
                                  "GOOD|evaluators|good|\n"
                                  "NICE|evaluators|good|\n");
    CHECK_THROWS_AS(load_lexicon(path), ValidationError);
}

TEST_CASE("empty and malformed lexicon files fail to load") {
    CHECK_THROWS_AS(load_lexicon(write_temp("lex_empty.txt", "")), LoadError);
    CHECK_THROWS_AS(load_lexicon("/nonexistent/lexicon.txt"), LoadError);
    // Error names the offending line.
    std::string path = write_temp("lex_badline.txt", "[PRIMES]\nGOOD|evaluators\n");
    try {
        load_lexicon(path);
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
}

TEST_CASE("tokenize splits, strips punctuation and lowercases") {
    CHECK(normalized(tokenize("I want this.")) ==
          std::vector<std::string>{"i", "want", "this"});
    CHECK(normalized(tokenize("arm [m] of someone's body")) ==
          std::vector<std::string>{"arm", "of", "someone's", "body"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("  ... !!! ").empty());
    // Positions index the surviving token stream.
    auto tokens = tokenize("Good, (very) good!");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0].position == 0);
    CHECK(tokens[2].position == 2);
    CHECK(tokens[2].normalized == "good");
}

TEST_CASE("classify matches multiword primes greedily") {
    const PrimeLexicon& lex = default_lexicon();

    auto classes = classify(tokenize("a long time"), lex);
    REQUIRE(classes.size() == 1);
    CHECK(classes[0].kind == TokenKind::Prime);
    CHECK(classes[0].prime->canonical == "A LONG TIME");
    CHECK(classes[0].span == 3);

    classes = classify(tokenize("because of the"), lex);
    REQUIRE(classes.size() == 3);
    CHECK(classes[0].kind == TokenKind::Prime);
    CHECK(classes[0].prime->canonical == "BECAUSE");
    CHECK(classes[1].kind == TokenKind::Stopword);
    CHECK(classes[2].kind == TokenKind::Stopword);

    classes = classify(tokenize("giraffe"), lex);
    REQUIRE(classes.size() == 1);
    CHECK(classes[0].kind == TokenKind::Molecule);
}

TEST_CASE("multiword inflections and longest match") {
    const PrimeLexicon& lex = default_lexicon();

    // "the same" beats stopword "the"; "there is" beats stopword "there".
    auto classes = classify(tokenize("the same thing happened there"), lex);
    REQUIRE(classes.size() == 4);
    CHECK(classes[0].prime->canonical == "THE SAME");
    CHECK(classes[0].span == 2);
    CHECK(classes[3].kind == TokenKind::Stopword); // bare "there"

    classes = classify(tokenize("there is a giraffe"), lex);
    REQUIRE(classes.size() == 3);
    CHECK(classes[0].prime->canonical == "THERE IS");
    CHECK(classes[0].span == 2);

    classes = classify(tokenize("someone doesn't want this"), lex);
    REQUIRE(classes.size() == 3);
    CHECK(classes[1].prime->canonical == "DON'T WANT");
    CHECK(classes[1].span == 2);
}

TEST_CASE("class partition: consumed tokens cover the stream exactly") {
    const PrimeLexicon& lex = default_lexicon();
    std::mt19937 rng(42);
    const std::vector<std::string> pool = {"a",    "long",  "time",  "good",  "giraffe",
                                           "the",  "same",  "of",    "want",  "know",
                                           "very", "quick", "brown", "don't", "there",
                                           "is",   "for",   "some",  "people"};
    for (int iter = 0; iter < 200; ++iter) {
        std::string text;
        int len = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < len; ++i) {
            if (!text.empty()) text += ' ';
            text += pool[rng() % pool.size()];
        }
        auto tokens = tokenize(text);
        auto classes = classify(tokens, lex);
        std::size_t covered = 0;
        std::size_t expected_next = 0;
        for (const auto& c : classes) {
            CHECK(c.token_index == expected_next);
            covered += c.span;
            expected_next = c.token_index + c.span;
            if (c.kind != TokenKind::Prime) CHECK(c.span == 1);
        }
        CHECK(covered == tokens.size());

        // Pure function: same inputs, same classes.
        auto again = classify(tokens, lex);
        REQUIRE(again.size() == classes.size());
        for (std::size_t i = 0; i < classes.size(); ++i) {
            CHECK(again[i].kind == classes[i].kind);
            CHECK(again[i].span == classes[i].span);
            CHECK(again[i].prime == classes[i].prime);
        }
    }
}

TEST_CASE("longest match: multiword constituents are never classified alone") {
    const PrimeLexicon& lex = default_lexicon();
    auto tokens = tokenize("people waited for a long time before this");
    auto classes = classify(tokens, lex);
    bool found = false;
    for (const auto& c : classes) {
        if (c.kind == TokenKind::Prime && c.prime->canonical == "A LONG TIME") {
            found = true;
            CHECK(c.span == 3);
        }
        if (c.span == 1 && c.kind == TokenKind::Prime)
            CHECK(c.prime->canonical != "A LONG TIME");
    }
    CHECK(found);
}
