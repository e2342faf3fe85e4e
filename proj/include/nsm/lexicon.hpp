#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace nsm {

/// One semantic prime: canonical label, surface exponents (allolexes
/// included), and hand-listed inflected forms. Multiword forms are stored as
/// ordered word sequences.
struct PrimeEntry {
    std::string canonical;                           // uppercase label, e.g. "A LONG TIME"
    std::string category;                            // group label from the inventory chart
    std::vector<std::vector<std::string>> exponents; // each a sequence of lowercase words
    std::vector<std::vector<std::string>> inflections;
};

struct Token {
    std::string surface;    // original substring
    std::string normalized; // lowercased, edge punctuation stripped
    std::size_t position = 0;
};

enum class TokenKind { Prime, Stopword, Molecule };

/// Classification of one counted unit. A multiword prime match is a single
/// unit whose span covers all consumed tokens.
struct TokenClass {
    TokenKind kind = TokenKind::Molecule;
    const PrimeEntry* prime = nullptr; // set when kind == Prime
    std::size_t token_index = 0;       // start index in the token stream
    std::size_t span = 1;              // tokens consumed
};

/// Immutable prime inventory plus stopword list. Safe to share across threads
/// after construction.
class PrimeLexicon {
  public:
    PrimeLexicon(std::vector<PrimeEntry> primes, std::unordered_set<std::string> stopwords);

    const std::vector<PrimeEntry>& primes() const { return primes_; }
    const std::unordered_set<std::string>& stopwords() const { return stopwords_; }

    bool is_stopword(const std::string& normalized) const {
        return stopwords_.count(normalized) > 0;
    }

    /// Entry whose single-word exponent or inflection matches, else nullptr.
    const PrimeEntry* prime_for_word(const std::string& normalized) const;

    /// Longest multiword prime form starting at tokens[start]; returns the
    /// matched entry and writes the span, or nullptr when no multiword form
    /// matches there.
    const PrimeEntry* longest_multiword_match(const std::vector<Token>& tokens,
                                              std::size_t start, std::size_t* span_out) const;

  private:
    struct MultiwordForm {
        std::vector<std::string> words;
        std::size_t entry_index;
    };

    std::vector<PrimeEntry> primes_;
    std::unordered_set<std::string> stopwords_;
    std::unordered_map<std::string, std::size_t> single_word_; // word -> entry index
    std::unordered_map<std::string, std::vector<MultiwordForm>> multiword_; // first word -> forms
};

/// Parses the line-oriented lexicon file ([PRIMES] / [STOPWORDS] sections,
/// '#' comments). Throws LoadError on malformed input and ValidationError on
/// duplicate exponents. Loading is deterministic: same file, same table.
PrimeLexicon load_lexicon(const std::string& path);

/// Whitespace split, edge punctuation stripped per token, lowercased.
/// Apostrophes inside a token survive ("someone's" is one token). Bare "[m]"
/// molecule markers are dropped before counting, as are tokens whose
/// normalized form comes out empty.
std::vector<Token> tokenize(const std::string& text);

/// Greedy longest-match left to right: multiword prime forms first, then
/// single-word exponents and inflections, then stopwords, else Molecule.
/// Tokens consumed by a multiword match are not classified individually.
/// Matching is purely surface level: an exponent used in a non-prime sense
/// ("like" the verb, "way" the road) still counts as its prime.
std::vector<TokenClass> classify(const std::vector<Token>& tokens, const PrimeLexicon& lexicon);

} // namespace nsm
