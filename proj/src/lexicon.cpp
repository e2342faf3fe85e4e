#include "nsm/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "nsm/errors.hpp"

namespace nsm {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> split_words(const std::string& phrase) {
    std::vector<std::string> words;
    std::istringstream in(phrase);
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }

} // namespace

PrimeLexicon::PrimeLexicon(std::vector<PrimeEntry> primes,
                           std::unordered_set<std::string> stopwords)
    : primes_(std::move(primes)), stopwords_(std::move(stopwords)) {
    std::unordered_set<std::string> seen_exponents;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        const PrimeEntry& entry = primes_[i];
        if (entry.canonical.empty())
            throw ValidationError("prime entry with empty canonical label");
        auto add_form = [&](const std::vector<std::string>& words, bool is_exponent) {
            if (words.empty())
                throw ValidationError("empty surface form under prime '" + entry.canonical + "'");
            std::string key = join_words(words);
            if (is_exponent && !seen_exponents.insert(key).second)
                throw ValidationError("exponent '" + key + "' listed under more than one prime");
            if (words.size() == 1) {
                auto [it, inserted] = single_word_.emplace(words[0], i);
                if (!inserted && it->second != i)
                    throw ValidationError("surface form '" + key +
                                          "' maps to two primes: " + primes_[it->second].canonical +
                                          " and " + entry.canonical);
            } else {
                multiword_[words[0]].push_back(MultiwordForm{words, i});
            }
        };
        for (const auto& exp : entry.exponents) add_form(exp, true);
        for (const auto& infl : entry.inflections) add_form(infl, false);
        if (entry.exponents.empty())
            throw ValidationError("prime '" + entry.canonical + "' has no exponents");
    }
    // Longest form first so greedy matching needs no backtracking.
    for (auto& [first, forms] : multiword_) {
        std::sort(forms.begin(), forms.end(), [](const MultiwordForm& a, const MultiwordForm& b) {
            if (a.words.size() != b.words.size()) return a.words.size() > b.words.size();
            return a.words < b.words;
        });
    }
    // Primes win over stopwords; drop collisions from the stopword set.
    for (auto it = stopwords_.begin(); it != stopwords_.end();) {
        if (single_word_.count(*it))
            it = stopwords_.erase(it);
        else
            ++it;
    }
}

const PrimeEntry* PrimeLexicon::prime_for_word(const std::string& normalized) const {
    auto it = single_word_.find(normalized);
    return it == single_word_.end() ? nullptr : &primes_[it->second];
}

const PrimeEntry* PrimeLexicon::longest_multiword_match(const std::vector<Token>& tokens,
                                                        std::size_t start,
                                                        std::size_t* span_out) const {
    auto it = multiword_.find(tokens[start].normalized);
    if (it == multiword_.end()) return nullptr;
    for (const MultiwordForm& form : it->second) {
        if (start + form.words.size() > tokens.size()) continue;
        bool match = true;
        for (std::size_t j = 1; j < form.words.size(); ++j) {
            if (tokens[start + j].normalized != form.words[j]) {
                match = false;
                break;
            }
        }
        if (match) {
            *span_out = form.words.size();
            return &primes_[form.entry_index];
        }
    }
    return nullptr;
}

PrimeLexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open lexicon file: " + path);

    enum class Section { None, Primes, Stopwords };
    Section section = Section::None;
    std::vector<PrimeEntry> primes;
    std::unordered_set<std::string> stopwords;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t == "[PRIMES]") {
            section = Section::Primes;
            continue;
        }
        if (t == "[STOPWORDS]") {
            section = Section::Stopwords;
            continue;
        }
        auto fail = [&](const std::string& what) {
            throw LoadError(path + ":" + std::to_string(line_no) + ": " + what);
        };
        switch (section) {
            case Section::None:
                fail("content before any section header");
                break;
            case Section::Primes: {
                auto fields = split(t, '|');
                if (fields.size() != 4)
                    fail("expected CANONICAL|category|exponents|inflections, got " +
                         std::to_string(fields.size()) + " fields");
                PrimeEntry entry;
                entry.canonical = trim(fields[0]);
                entry.category = trim(fields[1]);
                if (entry.canonical.empty()) fail("empty canonical label");
                for (const auto& exp : split(fields[2], ',')) {
                    std::string e = trim(exp);
                    if (e.empty()) continue;
                    if (e != to_lower(e)) fail("exponent '" + e + "' is not lowercase");
                    entry.exponents.push_back(split_words(e));
                }
                if (entry.exponents.empty()) fail("prime '" + entry.canonical + "' has no exponents");
                for (const auto& infl : split(fields[3], ',')) {
                    std::string f = trim(infl);
                    if (f.empty()) continue;
                    if (f != to_lower(f)) fail("inflection '" + f + "' is not lowercase");
                    entry.inflections.push_back(split_words(f));
                }
                primes.push_back(std::move(entry));
                break;
            }
            case Section::Stopwords: {
                if (t.find(' ') != std::string::npos) fail("stopword '" + t + "' contains a space");
                stopwords.insert(to_lower(t));
                break;
            }
        }
    }
    if (primes.empty()) throw LoadError(path + ": no prime entries found");

    try {
        return PrimeLexicon(std::move(primes), std::move(stopwords));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    std::istringstream in(text);
    std::string raw;
    while (in >> raw) {
        // NSM molecule annotations are markers, not words.
        if (raw == "[m]" || raw == "[M]") continue;
        std::size_t b = 0, e = raw.size();
        while (b < e && !is_word_char(static_cast<unsigned char>(raw[b]))) ++b;
        while (e > b && !is_word_char(static_cast<unsigned char>(raw[e - 1]))) --e;
        if (b == e) continue;
        Token tok;
        tok.surface = raw.substr(b, e - b);
        tok.normalized = to_lower(tok.surface);
        tok.position = tokens.size();
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

std::vector<TokenClass> classify(const std::vector<Token>& tokens, const PrimeLexicon& lexicon) {
    std::vector<TokenClass> classes;
    std::size_t i = 0;
    while (i < tokens.size()) {
        TokenClass tc;
        tc.token_index = i;
        std::size_t span = 0;
        if (const PrimeEntry* entry = lexicon.longest_multiword_match(tokens, i, &span)) {
            tc.kind = TokenKind::Prime;
            tc.prime = entry;
            tc.span = span;
        } else if (const PrimeEntry* single = lexicon.prime_for_word(tokens[i].normalized)) {
            tc.kind = TokenKind::Prime;
            tc.prime = single;
            tc.span = 1;
        } else if (lexicon.is_stopword(tokens[i].normalized)) {
            tc.kind = TokenKind::Stopword;
        } else {
            tc.kind = TokenKind::Molecule;
        }
        i += tc.span;
        classes.push_back(tc);
    }
    return classes;
}

} // namespace nsm
