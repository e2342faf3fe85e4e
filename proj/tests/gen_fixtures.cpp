// Regenerates the checked-in fixtures under tests/data:
//   bleu_golden.json      50 (reference, hypothesis) pairs with expected BLEU
//                         values computed by the brute-force reference
//   mini_senses.jsonl     100-sense corpus for the pipeline determinism runs
//   bench_entries.jsonl   10-entry benchmark fixture
//   bench_mock_table.json recorded grader traffic for the benchmark fixture
//   bench_backends.json   table-backed grader config replaying that traffic
//
// The benchmark golden report itself is produced by running the CLI once on
// these fixtures (see README) so that the checked-in bytes come from the real
// command path.

#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nsm/backends.hpp"
#include "nsm/dataset.hpp"
#include "nsm/report_io.hpp"
#include "nsm/scoring.hpp"
#include "oracle/bleu_oracle.hpp"

using json = nlohmann::json;

namespace {

const std::string kOutDir = NSM_TEST_DATA_DIR;

void write_file(const std::string& name, const std::string& content) {
    std::ofstream out(kOutDir + "/" + name);
    out << content;
    std::printf("wrote %s/%s\n", kOutDir.c_str(), name.c_str());
}

// ---------------------------------------------------------------------------
// BLEU golden corpus
// ---------------------------------------------------------------------------

void gen_bleu_golden() {
    std::vector<std::pair<std::string, std::string>> pairs = {
        // identity pairs, varied lengths
        {"one", "one"},
        {"people say things", "people say things"},
        {"I want this.", "i want this"},
        {"the quick brown fox jumps over the lazy dog", "the quick brown fox jumps over the lazy dog"},
        {"someone feels something good because of this", "someone feels something good because of this"},
        // no shared unigrams
        {"alpha beta gamma", "delta epsilon zeta"},
        {"one two three four", "five six seven eight nine"},
        {"cold winter night", "warm summer day here"},
        {"red", "blue"},
        {"many words in this reference sentence", "completely different hypothesis tokens appear"},
        // near misses and partial overlaps
        {"the cat sat on the mat", "the cat sat on mat"},
        {"the cat sat on the mat", "the cat sat on the mat quietly"},
        {"the cat sat on the mat", "a cat sat on a mat"},
        {"the cat sat on the mat", "the mat sat on the cat"},
        {"people want to know what happened here", "people want to know what happened"},
        {"people want to know what happened here", "people wanted to know what happened here"},
        {"this thing is very big and very good", "this thing is very big and good"},
        {"someone did something bad to this place", "someone did something very bad to this place"},
        {"after a long time people moved away", "after a long time people moved far away"},
        {"water runs under the old stone bridge", "water runs under the stone bridge"},
        // repetition and clipping
        {"the the the the", "the the"},
        {"the the", "the the the the the"},
        {"buffalo buffalo buffalo", "buffalo"},
        {"a b a b a b", "a a a b b b"},
        {"one one two two three three", "one two three one two three"},
        // length extremes
        {"short", "a considerably longer hypothesis than the reference text"},
        {"a very long reference sentence that keeps going for a while longer", "short"},
        {"mid size reference here", "mid size reference here exactly matched plus extra trailing words"},
        {"tiny ref", "tiny"},
        {"word", "word word word word"},
    };

    // Deterministic generated tail: controlled corruption of a base sentence.
    const std::vector<std::string> base = {"people", "say",  "good", "things", "about",
                                           "this",   "place", "when", "someone", "asks"};
    std::mt19937 rng(20240601);
    while (pairs.size() < 50) {
        int ref_len = 4 + static_cast<int>(rng() % 7);
        std::vector<std::string> ref(base.begin(), base.begin() + ref_len);
        std::vector<std::string> hyp = ref;
        int edits = 1 + static_cast<int>(rng() % 3);
        for (int e = 0; e < edits; ++e) {
            switch (rng() % 3) {
                case 0: // substitute
                    hyp[rng() % hyp.size()] = "noise" + std::to_string(rng() % 5);
                    break;
                case 1: // delete
                    if (hyp.size() > 1) hyp.erase(hyp.begin() + (rng() % hyp.size()));
                    break;
                default: // duplicate a word
                    hyp.insert(hyp.begin() + (rng() % hyp.size()), hyp[rng() % hyp.size()]);
                    break;
            }
        }
        auto join = [](const std::vector<std::string>& ws) {
            std::string s;
            for (const auto& w : ws) {
                if (!s.empty()) s += ' ';
                s += w;
            }
            return s;
        };
        pairs.emplace_back(join(ref), join(hyp));
    }

    json rows = json::array();
    for (const auto& [ref, hyp] : pairs) {
        double expected = nsmtest::oracle_bleu(ref, hyp);
        rows.push_back({{"reference", ref}, {"hypothesis", hyp}, {"bleu", expected}});
    }
    json doc = {{"schema", "nsm-bleu-golden/1"},
                {"note", "expected values computed by the brute-force reference in "
                         "tests/oracle/bleu_oracle.hpp"},
                {"pairs", rows}};
    write_file("bleu_golden.json", doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Mini sense corpus
// ---------------------------------------------------------------------------

void gen_mini_senses() {
    const std::vector<std::string> lemmas = {
        "anchor",   "basket",   "candle",  "danger",   "engine",   "feather", "garden",
        "hammer",   "island",   "jacket",  "kettle",   "ladder",   "magnet",  "needle",
        "orchard",  "pencil",   "quarry",  "ribbon",   "saddle",   "tunnel",  "umbrella",
        "valley",   "wagon",    "xylophone", "yogurt",  "zebra",    "apple",   "bridge",
        "castle",   "dolphin",  "eagle",   "forest",   "guitar",   "harbor",  "jungle",
        "kitchen",  "lantern",  "marble",  "nest",     "ocean",    "palace",  "quilt",
        "river",    "shovel",   "tiger",   "village",  "window",   "yarn",    "zipper",
        "acorn",    "blanket",  "cactus",  "desert",   "elbow",    "fountain", "glacier",
        "helmet",   "icicle",   "jewel",   "kite",     "lemon",    "mountain", "notebook",
        "onion",    "pillow",   "quartz",  "rocket",   "sandal",   "temple",  "utensil",
        "volcano",  "whistle",  "yacht",   "arrow",    "button",   "canyon",  "drum",
        "envelope", "flute",    "goblet",  "hill",     "jar",      "lamp",    "mirror",
        "nail",     "oven",     "piano",   "rug",      "spoon",    "tent",    "vase",
        "wheel",    "axe",      "bottle",  "cliff",    "barrel",   "chimney", "anchor",
        "basket",   "candle"};
    // The last three repeat earlier lemmas under new sense ids: polysemy that
    // the split stage must keep on one side.

    std::string out;
    for (std::size_t i = 0; i < 100; ++i) {
        const std::string& lemma = lemmas[i];
        json sense = {
            {"sense_id", "mini-" + std::string(i < 10 ? "0" : "") + std::to_string(i)},
            {"lemma", lemma},
            {"gloss", "a common object or place called " + lemma},
            {"synonyms", json::array()},
            {"examples", json::array({"The " + lemma + " was right where they left it."})}};
        // Every tenth sense names the next lemma as a synonym, chaining the
        // two senses into one contamination group.
        if (i % 10 == 0 && i + 1 < 100) sense["synonyms"].push_back(lemmas[i + 1]);
        out += sense.dump() + "\n";
    }
    write_file("mini_senses.jsonl", out);
}

// ---------------------------------------------------------------------------
// Benchmark fixture: entries, recorded grader table, backend config
// ---------------------------------------------------------------------------

nsm::DatasetEntry bench_entry(const std::string& id, const std::string& word,
                              const std::string& gloss, std::vector<std::string> lines,
                              std::vector<std::vector<std::string>> passages) {
    nsm::DatasetEntry e;
    e.sense.sense_id = id;
    e.sense.lemma = word;
    e.sense.gloss = gloss;
    e.explication = nsm::Explication::make(word, std::move(lines));
    for (auto& sentences : passages)
        e.masked_passages.push_back(nsm::MaskedPassage::make(std::move(sentences), word));
    return e;
}

std::vector<nsm::DatasetEntry> bench_entries() {
    std::vector<nsm::DatasetEntry> entries;
    entries.push_back(bench_entry(
        "bench-01", "cry", "to shed tears",
        {"someone feels something very bad", "because of this, water moves from this someone's eyes",
         "other people can see this"},
        {{"The child sat alone by the window.", "After the phone call she began to <UNK>.",
          "Her shoulders shook for a long time.", "Nobody knew what to say."},
         {"He tried to hold it back.", "At the funeral he started to <UNK> quietly.",
          "His friends stood close to him.", "The rain kept falling outside."}}));
    entries.push_back(bench_entry(
        "bench-02", "rough", "not smooth to the touch",
        {"when someone touches this thing, this someone feels something bad",
         "this thing is not like things people want to touch",
         "many small parts of this thing are hard"},
        {{"She ran her hand along the plank.", "The surface felt <UNK> under her fingers.",
          "Splinters caught on her glove.", "She reached for the sandpaper."},
         {"The climbers checked the wall.", "The <UNK> stone scraped their palms.",
          "They kept climbing anyway.", "The summit was close now."}}));
    entries.push_back(bench_entry(
        "bench-03", "wall", "an upright structure enclosing a space",
        {"a wall is a big thing near people", "people cannot move to the other side"},
        {{"The garden ended abruptly.", "A tall <UNK> blocked the path.",
          "Ivy covered every brick.", "They turned back toward the gate."},
         {"Workers arrived at dawn.", "They built the <UNK> in a week.",
          "It kept the wind out.", "The village felt safer."}}));
    entries.push_back(bench_entry(
        "bench-04", "gift", "something given willingly without payment",
        {"someone wants another someone to have something good",
         "because of this, this someone does something",
         "after this, the other someone has this good thing"},
        {{"The box sat on the table all morning.", "She had wrapped the <UNK> the night before.",
          "A ribbon held the paper in place.", "Her brother had no idea."},
         {"He never expected anything in return.", "The <UNK> was his way of saying thanks.",
          "She kept it on her desk for years.", "It still made her smile."}}));
    entries.push_back(bench_entry(
        "bench-05", "ladder", "a structure for climbing up or down",
        {"a contraption with horizontal rungs between two vertical rails",
         "workers lean this apparatus against scaffolding"},
        {{"The roof gutter was clogged again.", "He steadied the <UNK> against the house.",
          "Each step creaked under his boots.", "His wife held the bottom."},
         {"The orchard crew started early.", "A wooden <UNK> leaned on every tree.",
          "Baskets filled with apples quickly.", "The morning stayed cool."}}));
    entries.push_back(bench_entry(
        "bench-06", "whisper", "to speak very softly",
        {"someone says something with a very small voice",
         "this someone does not want other people to hear it",
         "only someone very near can hear these words"},
        {{"The library was silent.", "She leaned over to <UNK> the answer.",
          "The librarian glanced up anyway.", "They both looked down quickly."},
         {"The children hid behind the curtain.", "One began to <UNK> the plan.",
          "The other nodded without a sound.", "Footsteps passed in the hall."}}));
    entries.push_back(bench_entry(
        "bench-07", "bright", "giving out much light",
        {"people can see this thing well because much light comes from it",
         "when people see it, their eyes can feel something"},
        {{"The studio needed new bulbs.", "The <UNK> lamp lit every corner.",
          "No shadow survived anywhere.", "The painter smiled at last."},
         {"Morning broke over the bay.", "A <UNK> glare came off the water.",
          "The sailors shaded their eyes.", "Gulls wheeled overhead."}}));
    entries.push_back(bench_entry(
        "bench-08", "promise", "a declaration that one will do something",
        {"someone says words like this: I will do this thing",
         "this someone wants another someone to know it is true",
         "after these words, the other someone thinks this thing will happen"},
        {{"The election neared its end.", "The mayor made a <UNK> about the bridge.",
          "Few believed it would hold.", "The bridge stayed broken for years."},
         {"She held out her little finger.", "A <UNK> sealed between two children.",
          "Neither of them ever forgot it.", "Decades later they still laughed about it."}}));
    entries.push_back(bench_entry(
        "bench-09", "engine", "a machine that converts energy into motion",
        {"a machine with pistons and cylinders", "combustion propels the locomotive machinery",
         "an engine is this machine"},
        {{"The mechanic opened the hood.", "The old <UNK> rattled and smoked.",
          "A belt had worn through.", "Parts were ordered that afternoon."},
         {"The train waited at the platform.", "Its <UNK> hummed with steady power.",
          "Steam rose into the cold air.", "The conductor checked his watch."}}));
    entries.push_back(bench_entry(
        "bench-10", "calm", "free from agitation or strong emotion",
        {"this someone does not feel something bad now",
         "nothing bad is happening in this someone's body",
         "this someone can think well because of this"},
        {{"The storm had finally passed.", "The sea turned <UNK> by evening.",
          "Fishermen readied their boats again.", "Stars appeared one by one."},
         {"The interview made her nervous at first.", "Her voice grew <UNK> as she spoke.",
          "The panel listened closely.", "She left the room smiling."}}));
    return entries;
}

void gen_bench_fixture() {
    auto entries = bench_entries();
    std::string jsonl;
    for (const auto& e : entries) jsonl += nsm::to_json(e).dump() + "\n";
    write_file("bench_entries.jsonl", jsonl);

    // Record grader traffic for the whole benchmark through the engine path,
    // so the table replays exactly.
    nsm::PrimeLexicon lexicon = nsm::load_lexicon(NSM_DATA_DIR "/nsm_lexicon.txt");
    auto recorder = std::make_shared<nsm::Recorder>();
    std::vector<std::shared_ptr<nsm::WordScorer>> scorers;
    for (auto [name, seed] : {std::pair<const char*, std::uint64_t>{"grader-a", 101},
                              {"grader-b", 102},
                              {"grader-c", 103}})
        scorers.push_back(nsm::recording_word_scorer(nsm::synthetic_word_scorer(name, seed),
                                                     recorder));
    nsm::BenchConfig cfg;
    nsm::run_benchmark(entries, lexicon, scorers, cfg);
    recorder->save(kOutDir + "/bench_mock_table.json");
    std::printf("wrote %s/bench_mock_table.json (%zu responses)\n", kOutDir.c_str(),
                recorder->size());

    json backends = {{"scorers", json::array()}};
    for (const char* name : {"grader-a", "grader-b", "grader-c"})
        backends["scorers"].push_back({{"name", name},
                                       {"kind", "table"},
                                       {"model", name},
                                       {"table", "bench_mock_table.json"}});
    write_file("bench_backends.json", backends.dump(2) + "\n");
}

} // namespace

int main() {
    gen_bleu_golden();
    gen_mini_senses();
    gen_bench_fixture();
    return 0;
}
