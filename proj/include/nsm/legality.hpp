#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "nsm/lexicon.hpp"

namespace nsm {

/// A target word plus its ordered explication lines. Lines are trimmed and
/// non-empty; there is always at least one line.
struct Explication {
    std::string target_word;
    std::vector<std::string> lines;

    /// Trims lines, drops blank ones, validates the invariants. Throws
    /// ValidationError when no usable line or target word remains.
    static Explication make(std::string target_word, std::vector<std::string> lines);

    /// Lines joined with single spaces; the text legality counting runs on.
    std::string joined_text() const;
};

struct LegalityReport {
    int prime_count = 0;    // tokens consumed by prime matches
    int prime_occurrences = 0; // prime matches (a multiword match counts once)
    int molecule_count = 0;
    int stopword_count = 0;
    int total_words = 0;
    bool circular = false;
    double alpha = 10.0;
    double legality_score = 0.0; // alpha * (primes - molecules) / total_words
    double primes_ratio = 0.0;   // percent of total_words
    double molecules_ratio = 0.0;
};

/// Inflectional family of a word: the word itself plus -s/-es/-ed/-d/-ing
/// forms with e-drop, consonant doubling, y->ie and possessive variants.
std::unordered_set<std::string> inflection_variants(const std::string& word);

/// Conservative suffix stripper used as the second circularity route. Strips
/// possessives and the -s/-es/-ies/-ed/-ied/-ing family, undoubling a doubled
/// final consonant, and never reduces a word below three characters.
std::string simple_stem(const std::string& word);

/// True iff any explication token matches a form of the target word: exact,
/// in its inflectional family, or sharing a simple_stem. Multiword targets
/// are checked per content word (stopword parts of the target are skipped;
/// see module docs).
bool detect_circularity(const Explication& explication, const PrimeLexicon& lexicon);

/// Tokenizes all lines, classifies against the lexicon, and fills counts and
/// the legality score. alpha defaults to 10; an empty explication text yields
/// score 0 and circular = false.
LegalityReport legality(const Explication& explication, const PrimeLexicon& lexicon,
                        double alpha = 10.0);

} // namespace nsm
