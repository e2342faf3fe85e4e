#include "nsm/legality.hpp"

#include <algorithm>
#include <cctype>

#include "nsm/errors.hpp"

namespace nsm {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool is_consonant(char c) { return std::isalpha(static_cast<unsigned char>(c)) && !is_vowel(c); }

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

Explication Explication::make(std::string target_word, std::vector<std::string> lines) {
    Explication e;
    e.target_word = trim(target_word);
    if (e.target_word.empty()) throw ValidationError("explication target word is empty");
    for (auto& line : lines) {
        std::string t = trim(line);
        if (!t.empty()) e.lines.push_back(std::move(t));
    }
    if (e.lines.empty())
        throw ValidationError("explication for '" + e.target_word + "' has no non-empty lines");
    return e;
}

std::string Explication::joined_text() const {
    std::string out;
    for (const auto& line : lines) {
        if (!out.empty()) out += ' ';
        out += line;
    }
    return out;
}

std::unordered_set<std::string> inflection_variants(const std::string& word) {
    std::unordered_set<std::string> out;
    if (word.empty()) return out;
    const std::string& w = word;
    out.insert(w);
    out.insert(w + "'s");
    out.insert(w + "s");
    out.insert(w + "es");
    out.insert(w + "ed");
    out.insert(w + "ing");
    char last = w.back();
    if (w.size() >= 2) {
        char prev = w[w.size() - 2];
        if (last == 'y' && is_consonant(prev)) {
            std::string stem = w.substr(0, w.size() - 1);
            out.insert(stem + "ies");
            out.insert(stem + "ied");
        }
        if (last == 'e') {
            out.insert(w + "d"); // love -> loved
            if (prev != 'e') {
                std::string stem = w.substr(0, w.size() - 1);
                out.insert(stem + "ing"); // make -> making
            }
        }
        // stop -> stopped, run -> running
        if (w.size() >= 3 && is_consonant(last) && last != 'w' && last != 'x' && last != 'y' &&
            is_vowel(prev) && is_consonant(w[w.size() - 3])) {
            out.insert(w + std::string(1, last) + "ed");
            out.insert(w + std::string(1, last) + "ing");
        }
    }
    return out;
}

std::string simple_stem(const std::string& word) {
    std::string w = word;
    if (ends_with(w, "'s"))
        w = w.substr(0, w.size() - 2);
    else if (ends_with(w, "s'"))
        w = w.substr(0, w.size() - 1);

    auto undouble = [](std::string s) {
        if (s.size() >= 4 && s[s.size() - 1] == s[s.size() - 2] &&
            is_consonant(s.back()) && s.back() != 's' && s.back() != 'l')
            s.pop_back();
        return s;
    };

    if (ends_with(w, "ies") && w.size() >= 5) return w.substr(0, w.size() - 3) + "y";
    if (ends_with(w, "ied") && w.size() >= 5) return w.substr(0, w.size() - 3) + "y";
    if (ends_with(w, "ing") && w.size() >= 6) return undouble(w.substr(0, w.size() - 3));
    if (ends_with(w, "ed") && w.size() >= 5) return undouble(w.substr(0, w.size() - 2));
    if (ends_with(w, "es") && w.size() >= 5) return w.substr(0, w.size() - 2);
    if (ends_with(w, "s") && !ends_with(w, "ss") && w.size() >= 4) return w.substr(0, w.size() - 1);
    return w;
}

bool detect_circularity(const Explication& explication, const PrimeLexicon& lexicon) {
    // Content words of the target; a fully-stopword target falls back to all
    // of its words.
    std::vector<Token> target_tokens = tokenize(explication.target_word);
    std::vector<std::string> target_words;
    for (const Token& t : target_tokens)
        if (!lexicon.is_stopword(t.normalized)) target_words.push_back(t.normalized);
    if (target_words.empty())
        for (const Token& t : target_tokens) target_words.push_back(t.normalized);
    if (target_words.empty()) return false;

    std::vector<Token> tokens = tokenize(explication.joined_text());
    for (const std::string& target : target_words) {
        const auto variants = inflection_variants(target);
        const std::string target_stem = simple_stem(target);
        for (const Token& tok : tokens) {
            if (variants.count(tok.normalized)) return true;
            if (simple_stem(tok.normalized) == target_stem) return true;
        }
    }
    return false;
}

LegalityReport legality(const Explication& explication, const PrimeLexicon& lexicon, double alpha) {
    LegalityReport report;
    report.alpha = alpha;

    std::vector<Token> tokens = tokenize(explication.joined_text());
    for (const TokenClass& tc : classify(tokens, lexicon)) {
        switch (tc.kind) {
            case TokenKind::Prime:
                report.prime_count += static_cast<int>(tc.span);
                report.prime_occurrences += 1;
                break;
            case TokenKind::Stopword:
                report.stopword_count += 1;
                break;
            case TokenKind::Molecule:
                report.molecule_count += 1;
                break;
        }
    }
    report.total_words = static_cast<int>(tokens.size());

    if (report.total_words > 0) {
        report.legality_score =
            alpha * (report.prime_count - report.molecule_count) / report.total_words;
        report.primes_ratio = 100.0 * report.prime_count / report.total_words;
        report.molecules_ratio = 100.0 * report.molecule_count / report.total_words;
        report.circular = detect_circularity(explication, lexicon);
    }
    return report;
}

} // namespace nsm
