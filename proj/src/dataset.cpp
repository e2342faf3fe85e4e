#include "nsm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nsm/errors.hpp"
#include "nsm/parallel.hpp"

namespace nsm {

using json = nlohmann::json;

namespace {

std::uint64_t local_fnv(const std::string& data, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    for (std::size_t pos = text.find(from); pos != std::string::npos;
         pos = text.find(from, pos + to.size()))
        text.replace(pos, from.size(), to);
    return text;
}

std::string format_prompt(const std::string& tmpl, const WordSense& sense,
                          const std::vector<std::string>* examples, int sentences) {
    std::string out = replace_all(tmpl, "{lemma}", sense.lemma);
    out = replace_all(out, "{gloss}", sense.gloss);
    if (examples != nullptr) {
        std::string joined;
        for (const auto& e : *examples) {
            if (!joined.empty()) joined += '\n';
            joined += "- " + e;
        }
        out = replace_all(out, "{examples}", joined);
    }
    out = replace_all(out, "{sentences}", std::to_string(sentences));
    return out;
}

/// True when the sentence contains every content word of the lemma, allowing
/// inflected forms.
bool contains_lemma(const std::string& sentence, const std::string& lemma,
                    const PrimeLexicon& lexicon) {
    std::vector<Token> lemma_tokens = tokenize(lemma);
    std::vector<std::string> content;
    for (const Token& t : lemma_tokens)
        if (!lexicon.is_stopword(t.normalized)) content.push_back(t.normalized);
    if (content.empty())
        for (const Token& t : lemma_tokens) content.push_back(t.normalized);
    if (content.empty()) return false;

    std::vector<Token> tokens = tokenize(sentence);
    for (const std::string& word : content) {
        const auto variants = inflection_variants(word);
        const std::string stem = simple_stem(word);
        bool found = false;
        for (const Token& tok : tokens) {
            if (variants.count(tok.normalized) || simple_stem(tok.normalized) == stem) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

std::string strip_list_marker(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    if (i < line.size() && (line[i] == '-' || line[i] == '*' || line[i] == '+')) {
        ++i;
    } else {
        std::size_t digits = i;
        while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits])))
            ++digits;
        if (digits > i && digits < line.size() && (line[digits] == '.' || line[digits] == ')'))
            i = digits + 1;
        else
            i = start;
    }
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::string out = line.substr(i);
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string s = strip_list_marker(line);
        if (!s.empty()) lines.push_back(std::move(s));
    }
    return lines;
}

/// Newline-separated completions become sentences directly; a single-line
/// completion is split on terminal punctuation.
std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.size() > 1) return lines;
    std::vector<std::string> sentences;
    std::string cur;
    for (char c : text) {
        cur += c;
        if (c == '.' || c == '?' || c == '!') {
            std::string s = strip_list_marker(cur);
            if (!s.empty()) sentences.push_back(std::move(s));
            cur.clear();
        }
    }
    std::string tail = strip_list_marker(cur);
    if (!tail.empty()) sentences.push_back(std::move(tail));
    return sentences;
}

std::string retry_prompt(const std::string& base, int round) {
    if (round == 0) return base;
    return base + "\nVariation " + std::to_string(round) + ".";
}

/// True when the lemma as a whole is one prime surface form.
bool lemma_is_prime(const std::string& lemma, const PrimeLexicon& lexicon) {
    std::vector<Token> tokens = tokenize(to_lower(lemma));
    if (tokens.empty()) return false;
    std::vector<TokenClass> classes = classify(tokens, lexicon);
    return classes.size() == 1 && classes[0].kind == TokenKind::Prime &&
           classes[0].span == tokens.size();
}

} // namespace

std::vector<WordSense> ingest_senses(const std::string& path, const PrimeLexicon& lexicon,
                                     IngestStats* stats) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open sense corpus: " + path);

    IngestStats local;
    std::vector<WordSense> senses;
    std::set<std::string> seen_ids;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception&) {
            ++local.malformed_skipped;
            continue;
        }
        WordSense sense;
        sense.sense_id = record.value("sense_id", "");
        sense.lemma = record.value("lemma", "");
        sense.gloss = record.value("gloss", "");
        if (record.contains("synonyms") && record["synonyms"].is_array())
            sense.synonyms = record["synonyms"].get<std::vector<std::string>>();
        if (record.contains("examples") && record["examples"].is_array())
            sense.examples = record["examples"].get<std::vector<std::string>>();
        if (sense.sense_id.empty() || sense.lemma.empty()) {
            ++local.malformed_skipped;
            continue;
        }
        ++local.parsed;
        if (lemma_is_prime(sense.lemma, lexicon)) {
            ++local.prime_dropped;
            continue;
        }
        if (!seen_ids.insert(sense.sense_id).second) {
            ++local.duplicate_dropped;
            continue;
        }
        senses.push_back(std::move(sense));
    }
    if (local.parsed == 0 && local.malformed_skipped > 0)
        throw LoadError("sense corpus " + path + ": no parseable records (" +
                        std::to_string(local.malformed_skipped) + " malformed lines)");
    if (stats) *stats = local;
    return senses;
}

ExampleBatch generate_examples(TextGenerator& gen, const WordSense& sense, int n,
                               const PipelineConfig& cfg, const PrimeLexicon& lexicon) {
    if (n < 1) throw ValidationError("generate_examples requires n >= 1");
    const std::string base = format_prompt(cfg.prompts.example_prompt, sense, nullptr, 0);

    ExampleBatch batch;
    std::set<std::string> seen;
    for (int round = 0; round <= cfg.retry_budget; ++round) {
        int missing = n - static_cast<int>(batch.sentences.size());
        if (missing <= 0) break;
        auto completions = gen.generate(retry_prompt(base, round), cfg.temperature, missing);
        for (const auto& completion : completions) {
            std::string sentence = strip_list_marker(completion);
            if (sentence.empty()) continue;
            if (!contains_lemma(sentence, sense.lemma, lexicon)) continue;
            if (seen.insert(sentence).second) batch.sentences.push_back(sentence);
        }
    }
    batch.complete = static_cast<int>(batch.sentences.size()) >= n;
    return batch;
}

std::vector<Explication> generate_candidates(TextGenerator& gen, const WordSense& sense,
                                             const std::vector<std::string>& examples, int count,
                                             const PipelineConfig& cfg, std::size_t* skipped) {
    if (examples.size() < 2 || examples.size() > 5)
        throw ValidationError("generate_candidates needs 2 to 5 usage examples, got " +
                              std::to_string(examples.size()));
    const std::string prompt = format_prompt(cfg.prompts.candidate_prompt, sense, &examples, 0);
    auto completions = gen.generate(prompt, cfg.temperature, count);

    std::size_t local_skipped = 0;
    std::vector<Explication> out;
    for (const auto& completion : completions) {
        std::vector<std::string> lines = split_lines(completion);
        if (lines.empty()) {
            ++local_skipped;
            continue;
        }
        out.push_back(Explication::make(sense.lemma, std::move(lines)));
    }
    if (skipped) *skipped += local_skipped;
    return out;
}

std::vector<MaskedPassage> generate_passages(TextGenerator& gen, const WordSense& sense, int count,
                                             const PipelineConfig& cfg) {
    const int min_sentences = std::max(cfg.passage_sentences, cfg.k + 1);
    const std::string base =
        format_prompt(cfg.prompts.passage_prompt, sense, nullptr, min_sentences);

    std::vector<MaskedPassage> out;
    std::set<std::string> seen;
    for (int round = 0; round <= cfg.retry_budget; ++round) {
        int missing = count - static_cast<int>(out.size());
        if (missing <= 0) break;
        auto completions = gen.generate(retry_prompt(base, round), cfg.temperature, missing);
        for (const auto& completion : completions) {
            if (!seen.insert(completion).second) continue;
            try {
                out.push_back(MaskedPassage::make(split_sentences(completion), sense.lemma,
                                                  static_cast<std::size_t>(cfg.k) + 1));
            } catch (const ValidationError&) {
                // invalid passage, retry round picks up the shortfall
            }
        }
    }
    return out;
}

BuildResult build_dataset(const std::vector<WordSense>& senses, TextGenerator& gen,
                          const std::vector<std::shared_ptr<WordScorer>>& scorers,
                          const PrimeLexicon& lexicon, const PipelineConfig& cfg) {
    if (senses.empty()) throw ValidationError("build_dataset: sense list is empty");
    if (scorers.empty()) throw ValidationError("build_dataset: no grader backends");

    struct SenseOutcome {
        std::vector<DatasetEntry> entries;
        std::string failure;
        std::size_t unparseable = 0;
        bool partial_examples = false;
    };
    std::vector<SenseOutcome> outcomes(senses.size());

    int jobs = gen.thread_safe() ? cfg.jobs : 1;
    parallel_for(senses.size(), jobs, [&](std::size_t i) {
        const WordSense& sense = senses[i];
        SenseOutcome& outcome = outcomes[i];
        try {
            std::mt19937_64 rng(local_fnv(sense.sense_id, cfg.seed));

            // Example pool: corpus examples plus generated ones.
            std::vector<std::string> pool = sense.examples;
            int need = cfg.examples_per_sense - static_cast<int>(pool.size());
            if (need > 0) {
                ExampleBatch batch = generate_examples(gen, sense, need, cfg, lexicon);
                if (!batch.complete) outcome.partial_examples = true;
                pool.insert(pool.end(), batch.sentences.begin(), batch.sentences.end());
            }
            if (pool.size() < static_cast<std::size_t>(cfg.min_usage_examples)) {
                outcome.failure = "only " + std::to_string(pool.size()) + " usable usage examples";
                return;
            }

            // Seeded per-sense sampling keeps output independent of job count.
            int max_u = std::min<int>(cfg.max_usage_examples, static_cast<int>(pool.size()));
            int u = cfg.min_usage_examples +
                    static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                 max_u - cfg.min_usage_examples + 1));
            std::vector<std::size_t> order(pool.size());
            for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
            for (std::size_t j = order.size(); j-- > 1;)
                std::swap(order[j], order[rng() % (j + 1)]);
            std::vector<std::string> usage;
            for (int j = 0; j < u; ++j) usage.push_back(pool[order[static_cast<std::size_t>(j)]]);

            std::vector<MaskedPassage> passages =
                generate_passages(gen, sense, cfg.passages_per_sense, cfg);
            if (passages.empty()) {
                outcome.failure = "no valid masked passages after retries";
                return;
            }

            std::vector<Explication> candidates = generate_candidates(
                gen, sense, usage, cfg.candidates_per_sense, cfg, &outcome.unparseable);

            for (Explication& expl : candidates) {
                LegalityReport leg = legality(expl, lexicon, cfg.alpha);
                SubstitutabilityReport sub =
                    substitutability(scorers, passages, expl, cfg.k, cfg.beta);
                DatasetEntry entry;
                entry.sense = sense;
                entry.usage_examples = usage;
                entry.explication = std::move(expl);
                entry.masked_passages = passages;
                entry.score = explication_score(leg, sub, cfg.gamma);
                entry.provenance = {gen.id(), cfg.temperature, cfg.prompts.version};
                outcome.entries.push_back(std::move(entry));
            }
        } catch (const BackendError& e) {
            outcome.failure = e.what();
        }
    });

    BuildResult result;
    for (std::size_t i = 0; i < senses.size(); ++i) {
        SenseOutcome& outcome = outcomes[i];
        result.unparseable_completions += outcome.unparseable;
        if (outcome.partial_examples) ++result.partial_example_senses;
        if (!outcome.failure.empty()) {
            result.excluded.push_back({senses[i].sense_id, outcome.failure});
            continue;
        }
        for (auto& e : outcome.entries) result.entries.push_back(std::move(e));
    }
    return result;
}

std::vector<DatasetEntry> filter_and_cap(const std::vector<DatasetEntry>& entries,
                                         double threshold, int cap) {
    if (cap < 1) throw ValidationError("filter_and_cap requires cap >= 1");
    for (const auto& e : entries)
        if (!e.score)
            throw ValidationError("filter_and_cap: unscored entry for sense '" +
                                  e.sense.sense_id + "'");

    auto better = [](const DatasetEntry& a, const DatasetEntry& b) {
        if (a.score->explication_score != b.score->explication_score)
            return a.score->explication_score > b.score->explication_score;
        if (a.score->legality.legality_score != b.score->legality.legality_score)
            return a.score->legality.legality_score > b.score->legality.legality_score;
        return a.explication.joined_text() < b.explication.joined_text();
    };

    std::map<std::string, std::vector<const DatasetEntry*>> by_sense;
    for (const auto& e : entries)
        if (e.score->explication_score >= threshold) by_sense[e.sense.sense_id].push_back(&e);

    std::vector<DatasetEntry> out;
    for (auto& [sense_id, group] : by_sense) {
        std::sort(group.begin(), group.end(),
                  [&](const DatasetEntry* a, const DatasetEntry* b) { return better(*a, *b); });
        for (std::size_t i = 0; i < group.size() && i < static_cast<std::size_t>(cap); ++i)
            out.push_back(*group[i]);
    }
    return out;
}

SplitResult split_dataset(const std::vector<DatasetEntry>& entries, std::size_t val_count,
                          std::uint64_t seed) {
    if (val_count >= entries.size() && !entries.empty())
        throw ValidationError("split: val_count " + std::to_string(val_count) +
                              " must be smaller than the entry count " +
                              std::to_string(entries.size()));
    if (entries.empty()) throw ValidationError("split: no entries");

    // Contamination groups: union-find over sense ids and the lemma/synonym
    // word sets, so no word or synonym straddles the splits.
    std::vector<std::size_t> parent(entries.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    std::map<std::string, std::size_t> key_owner;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::vector<std::string> keys;
        keys.push_back("id:" + entries[i].sense.sense_id);
        keys.push_back("w:" + to_lower(entries[i].sense.lemma));
        for (const auto& syn : entries[i].sense.synonyms) keys.push_back("w:" + to_lower(syn));
        for (const auto& key : keys) {
            auto [it, inserted] = key_owner.emplace(key, i);
            if (!inserted) unite(i, it->second);
        }
    }

    struct Group {
        std::string min_sense_id;
        std::vector<std::size_t> entry_indices;
        std::set<std::string> sense_ids;
    };
    std::map<std::size_t, Group> by_root;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Group& g = by_root[find(i)];
        g.entry_indices.push_back(i);
        g.sense_ids.insert(entries[i].sense.sense_id);
        if (g.min_sense_id.empty() || entries[i].sense.sense_id < g.min_sense_id)
            g.min_sense_id = entries[i].sense.sense_id;
    }
    std::vector<Group> groups;
    for (auto& [root, g] : by_root) groups.push_back(std::move(g));
    std::sort(groups.begin(), groups.end(),
              [](const Group& a, const Group& b) { return a.min_sense_id < b.min_sense_id; });

    // Hand-rolled Fisher-Yates so the order is stable across platforms.
    std::mt19937_64 rng(seed ^ 0x6e736d2d73706c69ULL);
    for (std::size_t i = groups.size(); i-- > 1;) std::swap(groups[i], groups[rng() % (i + 1)]);

    SplitResult result;
    result.requested_val = val_count;
    std::vector<bool> in_val(entries.size(), false);
    std::size_t val_size = 0;
    for (const Group& g : groups) {
        if (val_size < val_count && val_size + g.entry_indices.size() <= val_count) {
            for (std::size_t idx : g.entry_indices) in_val[idx] = true;
            val_size += g.entry_indices.size();
        } else if (val_size < val_count) {
            result.unplaced_sense_ids.insert(result.unplaced_sense_ids.end(), g.sense_ids.begin(),
                                             g.sense_ids.end());
        }
    }
    if (val_size == 0 && val_count > 0 && groups.size() > 1) {
        std::string names;
        for (const auto& s : result.unplaced_sense_ids) {
            if (!names.empty()) names += ", ";
            names += s;
        }
        throw ValidationError("split infeasible under the contamination constraint: no sense "
                              "group fits the requested validation size " +
                              std::to_string(val_count) + "; offending senses: " + names);
    }

    for (std::size_t i = 0; i < entries.size(); ++i)
        (in_val[i] ? result.validation : result.train).push_back(entries[i]);
    std::sort(result.unplaced_sense_ids.begin(), result.unplaced_sense_ids.end());
    return result;
}

} // namespace nsm
