#include "nsm/backends.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "nsm/errors.hpp"

namespace nsm {

using json = nlohmann::json;

std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fingerprint(const json& request) {
    std::uint64_t h = fnv1a64(request.dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void BackendConfig::validate() const {
    if (name.empty()) throw ValidationError("backend config without a name");
    if (rate_limit <= 0.0)
        throw ValidationError("backend '" + name + "': rate_limit must be > 0");
    if (timeout <= 0.0) throw ValidationError("backend '" + name + "': timeout must be > 0");
    if (retries < 0) throw ValidationError("backend '" + name + "': retries must be >= 0");
}

// ---------------------------------------------------------------------------
// MockTable
// ---------------------------------------------------------------------------

MockTable::MockTable(const MockTable& other) {
    std::lock_guard<std::mutex> lock(other.mutex_);
    entries_ = other.entries_;
}

MockTable MockTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open mock table: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw LoadError("mock table " + path + ": " + e.what());
    }
    if (doc.value("schema", "") != "nsm-mock/1")
        throw LoadError("mock table " + path + ": unknown schema '" +
                        doc.value("schema", "") + "'");
    MockTable table;
    for (const auto& [fp, entry] : doc.at("entries").items()) {
        table.entries_[fp] =
            Entry{entry.at("request").dump(), entry.at("response").dump()};
    }
    return table;
}

void MockTable::save(const std::string& path) const {
    json entries = json::object();
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (const auto& [fp, entry] : entries_) {
            entries[fp] = {{"request", json::parse(entry.request_dump)},
                           {"response", json::parse(entry.response_dump)}};
        }
    }
    json doc = {{"schema", "nsm-mock/1"}, {"entries", std::move(entries)}};
    std::ofstream out(path);
    if (!out) throw Error("cannot write mock table: " + path);
    out << doc.dump(1) << '\n';
}

void MockTable::put(const json& request, const json& response) {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_[fingerprint(request)] = Entry{request.dump(), response.dump()};
}

json MockTable::lookup(const std::string& backend_name, const json& request) const {
    std::string fp = fingerprint(request);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(fp);
    if (it == entries_.end()) {
        std::string summary = request.dump();
        if (summary.size() > 160) summary = summary.substr(0, 160) + "...";
        throw MockMissError(backend_name, fp, summary);
    }
    return json::parse(it->second.response_dump);
}

std::size_t MockTable::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

// ---------------------------------------------------------------------------
// RateLimiter / Recorder
// ---------------------------------------------------------------------------

RateLimiter::RateLimiter(double requests_per_second)
    : interval_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(1.0 / requests_per_second))),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto now = std::chrono::steady_clock::now();
        slot = next_ < now ? now : next_;
        next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
}

void Recorder::add(const json& request, const json& response) { table_.put(request, response); }

void Recorder::save(const std::string& path) const { table_.save(path); }

std::size_t Recorder::size() const { return table_.size(); }

// ---------------------------------------------------------------------------
// Request payloads (shared by HTTP, table and recording backends)
// ---------------------------------------------------------------------------

namespace {

json scorer_request(const std::string& model, const std::string& context,
                    const std::string& target) {
    return {{"contract", "word_scorer"},
            {"model", model},
            {"context", context},
            {"target", target}};
}

json generator_request(const std::string& model, const std::string& prompt, double temperature,
                       int count) {
    return {{"contract", "text_generator"},
            {"model", model},
            {"prompt", prompt},
            {"temperature", temperature},
            {"count", count}};
}

json translator_request(const std::string& model, const std::string& text,
                        const std::string& source, const std::string& target) {
    return {{"contract", "translator"},
            {"model", model},
            {"text", text},
            {"source", source},
            {"target", target}};
}

json embedder_request(const std::string& model, const std::string& text) {
    return {{"contract", "embedder"}, {"model", model}, {"text", text}};
}

// ---------------------------------------------------------------------------
// HTTP client plumbing
// ---------------------------------------------------------------------------

struct ParsedUrl {
    std::string base; // scheme://host[:port]
    std::string path;
};

ParsedUrl parse_url(const std::string& url, const std::string& backend) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ValidationError("backend '" + backend + "': endpoint '" + url +
                              "' is not an http(s) URL");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

/// POSTs JSON with auth, rate limiting and bounded-backoff retries. One
/// in-flight request per backend; the limiter makes more useless anyway.
class HttpChannel {
  public:
    explicit HttpChannel(const BackendConfig& config)
        : config_(config),
          url_(parse_url(config.endpoint, config.name)),
          limiter_(config.rate_limit) {
        config_.validate();
    }

    json post(const json& body) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (!client_) {
            client_ = std::make_unique<httplib::Client>(url_.base);
            auto timeout = std::chrono::duration<double>(config_.timeout);
            client_->set_connection_timeout(timeout);
            client_->set_read_timeout(timeout);
            client_->set_write_timeout(timeout);
        }
        httplib::Headers headers;
        if (!config_.auth_env.empty()) {
            const char* token = std::getenv(config_.auth_env.c_str());
            if (token != nullptr && *token != '\0')
                headers.emplace("Authorization", std::string("Bearer ") + token);
        }

        std::string payload = body.dump();
        for (int attempt = 0;; ++attempt) {
            limiter_.acquire();
            auto res = client_->Post(url_.path, headers, payload, "application/json");
            if (res) {
                if (res->status == 200) {
                    try {
                        return json::parse(res->body);
                    } catch (const json::exception& e) {
                        throw BackendError(config_.name,
                                           std::string("unparseable response body: ") + e.what());
                    }
                }
                if (res->status == 401 || res->status == 403)
                    throw BackendError(config_.name,
                                       "authentication failed (HTTP " +
                                           std::to_string(res->status) + "); check $" +
                                           (config_.auth_env.empty() ? std::string("<no auth_env configured>")
                                                                     : config_.auth_env));
                if (res->status < 500)
                    throw BackendError(config_.name, "HTTP " + std::to_string(res->status) + ": " +
                                                         res->body.substr(0, 200));
            }
            if (attempt >= config_.retries) {
                std::string why = res ? "HTTP " + std::to_string(res->status)
                                      : "transport error (" + httplib::to_string(res.error()) + ")";
                throw BackendError(config_.name, why + " after " + std::to_string(attempt + 1) +
                                                     " attempt(s) to " + config_.endpoint);
            }
            auto backoff = std::chrono::milliseconds(50) * (1 << std::min(attempt, 4));
            std::this_thread::sleep_for(backoff);
        }
    }

    const BackendConfig& config() const { return config_; }

  private:
    BackendConfig config_;
    ParsedUrl url_;
    RateLimiter limiter_;
    std::unique_ptr<httplib::Client> client_;
    std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// HTTP backends
// ---------------------------------------------------------------------------

class HttpWordScorer : public WordScorer {
  public:
    explicit HttpWordScorer(const BackendConfig& config) : channel_(config) {}

    double log_prob(const std::string& context, const std::string& target) override {
        json request = scorer_request(channel_.config().model, context, target);
        std::string fp = fingerprint(request);
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            auto it = cache_.find(fp);
            if (it != cache_.end()) return it->second;
        }
        json body = request;
        body["temperature"] = 0.0;
        body["logprobs"] = true;
        json response = channel_.post(body);
        double total = 0.0;
        if (!response.contains("token_logprobs") || !response["token_logprobs"].is_array())
            throw BackendError(id(), "response missing token_logprobs array");
        for (const auto& v : response["token_logprobs"]) total += v.get<double>();
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            cache_.emplace(fp, total);
        }
        return total;
    }

    std::string id() const override { return channel_.config().name; }

  private:
    HttpChannel channel_;
    std::unordered_map<std::string, double> cache_; // per-run, content addressed
    std::mutex cache_mutex_;
};

class HttpTextGenerator : public TextGenerator {
  public:
    explicit HttpTextGenerator(const BackendConfig& config) : channel_(config) {}

    std::vector<std::string> generate(const std::string& prompt, double temperature,
                                      int count) override {
        json response =
            channel_.post(generator_request(channel_.config().model, prompt, temperature, count));
        if (!response.contains("completions") || !response["completions"].is_array())
            throw BackendError(id(), "response missing completions array");
        std::vector<std::string> out;
        for (const auto& c : response["completions"]) out.push_back(c.get<std::string>());
        if (static_cast<int>(out.size()) != count)
            throw BackendError(id(), "asked for " + std::to_string(count) + " completions, got " +
                                         std::to_string(out.size()));
        return out;
    }

    std::string id() const override { return channel_.config().name; }

  private:
    HttpChannel channel_;
};

class HttpTranslator : public Translator {
  public:
    explicit HttpTranslator(const BackendConfig& config) : channel_(config) {}

    std::string translate(const std::string& text, const std::string& source,
                          const std::string& target) override {
        json response =
            channel_.post(translator_request(channel_.config().model, text, source, target));
        std::string out = response.value("translation", "");
        if (out.empty()) throw BackendError(id(), "empty translation for " + source + "->" + target);
        return out;
    }

    std::string id() const override { return channel_.config().name; }

  private:
    HttpChannel channel_;
};

class HttpEmbedder : public Embedder {
  public:
    explicit HttpEmbedder(const BackendConfig& config) : channel_(config) {}

    std::vector<double> embed(const std::string& text) override {
        json response = channel_.post(embedder_request(channel_.config().model, text));
        if (!response.contains("embedding") || !response["embedding"].is_array())
            throw BackendError(id(), "response missing embedding array");
        std::vector<double> v;
        for (const auto& x : response["embedding"]) v.push_back(x.get<double>());
        if (v.empty()) throw BackendError(id(), "empty embedding vector");
        return v;
    }

    std::string id() const override { return channel_.config().name; }

  private:
    HttpChannel channel_;
};

// ---------------------------------------------------------------------------
// Table-backed mocks
// ---------------------------------------------------------------------------

class TableWordScorer : public WordScorer {
  public:
    TableWordScorer(BackendConfig config, std::shared_ptr<const MockTable> table)
        : config_(std::move(config)), table_(std::move(table)) {}

    double log_prob(const std::string& context, const std::string& target) override {
        json response =
            table_->lookup(config_.name, scorer_request(config_.model, context, target));
        return response.at("log_prob").get<double>();
    }

    std::string id() const override { return config_.name; }

  private:
    BackendConfig config_;
    std::shared_ptr<const MockTable> table_;
};

class TableTextGenerator : public TextGenerator {
  public:
    TableTextGenerator(BackendConfig config, std::shared_ptr<const MockTable> table)
        : config_(std::move(config)), table_(std::move(table)) {}

    std::vector<std::string> generate(const std::string& prompt, double temperature,
                                      int count) override {
        json response = table_->lookup(config_.name,
                                       generator_request(config_.model, prompt, temperature, count));
        return response.at("completions").get<std::vector<std::string>>();
    }

    std::string id() const override { return config_.name; }

  private:
    BackendConfig config_;
    std::shared_ptr<const MockTable> table_;
};

class TableTranslator : public Translator {
  public:
    TableTranslator(BackendConfig config, std::shared_ptr<const MockTable> table)
        : config_(std::move(config)), table_(std::move(table)) {}

    std::string translate(const std::string& text, const std::string& source,
                          const std::string& target) override {
        json response = table_->lookup(config_.name,
                                       translator_request(config_.model, text, source, target));
        return response.at("translation").get<std::string>();
    }

    std::string id() const override { return config_.name; }

  private:
    BackendConfig config_;
    std::shared_ptr<const MockTable> table_;
};

class TableEmbedder : public Embedder {
  public:
    TableEmbedder(BackendConfig config, std::shared_ptr<const MockTable> table)
        : config_(std::move(config)), table_(std::move(table)) {}

    std::vector<double> embed(const std::string& text) override {
        json response = table_->lookup(config_.name, embedder_request(config_.model, text));
        return response.at("embedding").get<std::vector<double>>();
    }

    std::string id() const override { return config_.name; }

  private:
    BackendConfig config_;
    std::shared_ptr<const MockTable> table_;
};

// ---------------------------------------------------------------------------
// Deterministic fakes
// ---------------------------------------------------------------------------

double unit_hash(std::uint64_t h) {
    // [0, 1) with 53-bit resolution.
    return static_cast<double>(h >> 11) / 9007199254740992.0;
}

class SyntheticWordScorer : public WordScorer {
  public:
    SyntheticWordScorer(std::string name, std::uint64_t seed)
        : name_(std::move(name)), seed_(seed) {}

    double log_prob(const std::string& context, const std::string& target) override {
        std::uint64_t h = fnv1a64(target, fnv1a64(context, fnv1a64(name_, seed_ + 0x9e3779b9ULL)));
        // Hash noise plus a reward per explication line in the prompt, so
        // explication-bearing contexts predict the masked word better, the
        // way a real grader is expected to behave.
        double noise = -12.0 * unit_hash(h);
        double line_bonus = 3.0 * static_cast<double>(explication_lines(context));
        return -40.0 + line_bonus + noise;
    }

    std::string id() const override { return name_; }

  private:
    static std::size_t explication_lines(const std::string& context) {
        auto start = context.find("Here, <UNK> means:\n");
        if (start == std::string::npos) return 0;
        start += std::string("Here, <UNK> means:\n").size();
        auto end = context.find("\nThe word <UNK> stands for:", start);
        if (end == std::string::npos || end <= start) return 0;
        // Every explication line ends with exactly one newline.
        std::size_t lines = 0;
        for (std::size_t i = start; i < end; ++i)
            if (context[i] == '\n') ++lines;
        return lines;
    }

    std::string name_;
    std::uint64_t seed_;
};

std::string extract_quoted(const std::string& prompt) {
    auto b = prompt.find('"');
    if (b == std::string::npos) return "thing";
    auto e = prompt.find('"', b + 1);
    if (e == std::string::npos) return "thing";
    return prompt.substr(b + 1, e - b - 1);
}

class SyntheticTextGenerator : public TextGenerator {
  public:
    SyntheticTextGenerator(std::string name, std::uint64_t seed)
        : name_(std::move(name)), seed_(seed) {}

    std::vector<std::string> generate(const std::string& prompt, double temperature,
                                      int count) override {
        std::vector<std::string> out;
        const std::string lemma = extract_quoted(prompt);
        for (int i = 0; i < count; ++i) {
            std::uint64_t h =
                fnv1a64(prompt, fnv1a64(name_, seed_ + 0x51ed2701ULL)) + 0x9e3779b97f4a7c15ULL * i;
            h ^= static_cast<std::uint64_t>(temperature * 1e6);
            if (prompt.rfind("Write one example sentence", 0) == 0)
                out.push_back(example_sentence(lemma, h));
            else if (prompt.rfind("Paraphrase the meaning", 0) == 0)
                out.push_back(explication_text(lemma, h));
            else if (prompt.rfind("Write a short passage", 0) == 0)
                out.push_back(passage_text(h));
            else
                out.push_back("Completion " + std::to_string(i) + " about " + lemma + ".");
        }
        return out;
    }

    std::string id() const override { return name_; }

  private:
    static std::string example_sentence(const std::string& lemma, std::uint64_t h) {
        static const char* openers[] = {"Yesterday someone mentioned the",
                                        "People in this place often talk about the",
                                        "I did not think about the",
                                        "After some time we saw the",
                                        "Everyone here knows about the"};
        static const char* closers[] = {"near the old house.", "before anything happened.",
                                        "and said nothing more.", "during the long afternoon.",
                                        "without any reason."};
        return std::string(openers[h % 5]) + " " + lemma + " " + closers[(h >> 8) % 5];
    }

    static std::string explication_text(const std::string& lemma, std::uint64_t h) {
        static const char* prime_lines[] = {
            "someone feels something good because of this",
            "people can see this thing here",
            "someone wants to do something now",
            "this thing is not like other things",
            "something big happens in this place",
            "someone knows something about this",
            "people think this is very good",
            "this part of something can move"};
        static const char* molecule_lines[] = {
            "a peculiar contraption rattles nearby",
            "the machinery hums with electricity",
            "ornate decorations cover the furniture",
            "chemical reactions produce vivid colors"};
        int lines = 3 + static_cast<int>(h % 3);
        std::string text;
        for (int i = 0; i < lines; ++i) {
            std::uint64_t lh = h + 0x2545f4914f6cdd1dULL * (i + 1);
            if (!text.empty()) text += '\n';
            if (lh % 11 == 0)
                text += "it is like a " + lemma; // deliberate circular candidates
            else if (lh % 3 == 0)
                text += molecule_lines[(lh >> 4) % 4];
            else
                text += prime_lines[(lh >> 4) % 8];
        }
        return text;
    }

    static std::string passage_text(std::uint64_t h) {
        static const char* fillers[] = {"Nobody wanted to say anything about it.",
                                        "The morning had been quiet until then.",
                                        "Something felt different in the room.",
                                        "People moved slowly through the place.",
                                        "A few of them had seen this before."};
        std::string text = "Everyone stopped when the <UNK> appeared that day.";
        int extra = 3 + static_cast<int>(h % 2);
        for (int i = 0; i < extra; ++i)
            text += std::string("\n") + fillers[(h + 0x9e3779b9ULL * i) % 5];
        return text;
    }

    std::string name_;
    std::uint64_t seed_;
};

class IdentityTranslator : public Translator {
  public:
    explicit IdentityTranslator(std::string name) : name_(std::move(name)) {}

    std::string translate(const std::string& text, const std::string&,
                          const std::string&) override {
        if (text.empty()) throw BackendError(name_, "empty input text");
        return text;
    }

    std::string id() const override { return name_; }

  private:
    std::string name_;
};

class HashEmbedder : public Embedder {
  public:
    HashEmbedder(std::string name, int dim, std::uint64_t seed)
        : name_(std::move(name)), dim_(dim), seed_(seed) {
        if (dim_ < 1) throw ValidationError("hash embedder dimension must be >= 1");
    }

    std::vector<double> embed(const std::string& text) override {
        std::vector<double> v(static_cast<std::size_t>(dim_));
        for (int i = 0; i < dim_; ++i) {
            std::uint64_t h = fnv1a64(text, seed_ + 0x100001b3ULL * (i + 1));
            v[static_cast<std::size_t>(i)] = 2.0 * unit_hash(h) - 1.0;
        }
        return v;
    }

    std::string id() const override { return name_; }

  private:
    std::string name_;
    int dim_;
    std::uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Recording wrappers
// ---------------------------------------------------------------------------

class RecordingWordScorer : public WordScorer {
  public:
    RecordingWordScorer(std::shared_ptr<WordScorer> inner, std::shared_ptr<Recorder> recorder)
        : inner_(std::move(inner)), recorder_(std::move(recorder)) {}

    double log_prob(const std::string& context, const std::string& target) override {
        double lp = inner_->log_prob(context, target);
        recorder_->add(scorer_request(inner_->id(), context, target), json{{"log_prob", lp}});
        return lp;
    }

    std::string id() const override { return inner_->id(); }
    bool thread_safe() const override { return inner_->thread_safe(); }

  private:
    std::shared_ptr<WordScorer> inner_;
    std::shared_ptr<Recorder> recorder_;
};

class RecordingTextGenerator : public TextGenerator {
  public:
    RecordingTextGenerator(std::shared_ptr<TextGenerator> inner, std::shared_ptr<Recorder> recorder)
        : inner_(std::move(inner)), recorder_(std::move(recorder)) {}

    std::vector<std::string> generate(const std::string& prompt, double temperature,
                                      int count) override {
        auto completions = inner_->generate(prompt, temperature, count);
        recorder_->add(generator_request(inner_->id(), prompt, temperature, count),
                       json{{"completions", completions}});
        return completions;
    }

    std::string id() const override { return inner_->id(); }
    bool thread_safe() const override { return inner_->thread_safe(); }

  private:
    std::shared_ptr<TextGenerator> inner_;
    std::shared_ptr<Recorder> recorder_;
};

class RecordingTranslator : public Translator {
  public:
    RecordingTranslator(std::shared_ptr<Translator> inner, std::shared_ptr<Recorder> recorder)
        : inner_(std::move(inner)), recorder_(std::move(recorder)) {}

    std::string translate(const std::string& text, const std::string& source,
                          const std::string& target) override {
        std::string out = inner_->translate(text, source, target);
        recorder_->add(translator_request(inner_->id(), text, source, target),
                       json{{"translation", out}});
        return out;
    }

    std::string id() const override { return inner_->id(); }
    bool thread_safe() const override { return inner_->thread_safe(); }

  private:
    std::shared_ptr<Translator> inner_;
    std::shared_ptr<Recorder> recorder_;
};

class RecordingEmbedder : public Embedder {
  public:
    RecordingEmbedder(std::shared_ptr<Embedder> inner, std::shared_ptr<Recorder> recorder)
        : inner_(std::move(inner)), recorder_(std::move(recorder)) {}

    std::vector<double> embed(const std::string& text) override {
        auto v = inner_->embed(text);
        recorder_->add(embedder_request(inner_->id(), text), json{{"embedding", v}});
        return v;
    }

    std::string id() const override { return inner_->id(); }
    bool thread_safe() const override { return inner_->thread_safe(); }

  private:
    std::shared_ptr<Embedder> inner_;
    std::shared_ptr<Recorder> recorder_;
};

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

BackendConfig parse_backend_config(const json& node) {
    BackendConfig cfg;
    cfg.name = node.value("name", "");
    cfg.kind = node.value("kind", "http");
    cfg.endpoint = node.value("endpoint", "");
    cfg.model = node.value("model", cfg.name);
    cfg.auth_env = node.value("auth_env", "");
    cfg.rate_limit = node.value("rate_limit", 4.0);
    cfg.timeout = node.value("timeout", 30.0);
    cfg.retries = node.value("retries", 2);
    cfg.table_path = node.value("table", "");
    cfg.seed = node.value("seed", 0ULL);
    cfg.dim = node.value("dim", 16);
    cfg.validate();
    return cfg;
}

std::shared_ptr<const MockTable> load_table(const BackendConfig& cfg,
                                             const std::string& base_dir) {
    if (cfg.table_path.empty())
        throw ValidationError("backend '" + cfg.name + "': table kind needs a 'table' path");
    std::string path = cfg.table_path;
    if (!base_dir.empty() && path.front() != '/') path = base_dir + "/" + path;
    return std::make_shared<const MockTable>(MockTable::load(path));
}

} // namespace

std::shared_ptr<WordScorer> http_word_scorer(const BackendConfig& config) {
    return std::make_shared<HttpWordScorer>(config);
}
std::shared_ptr<TextGenerator> http_text_generator(const BackendConfig& config) {
    return std::make_shared<HttpTextGenerator>(config);
}
std::shared_ptr<Translator> http_translator(const BackendConfig& config) {
    return std::make_shared<HttpTranslator>(config);
}
std::shared_ptr<Embedder> http_embedder(const BackendConfig& config) {
    return std::make_shared<HttpEmbedder>(config);
}

std::shared_ptr<WordScorer> table_word_scorer(const BackendConfig& config,
                                              std::shared_ptr<const MockTable> table) {
    return std::make_shared<TableWordScorer>(config, std::move(table));
}
std::shared_ptr<TextGenerator> table_text_generator(const BackendConfig& config,
                                                    std::shared_ptr<const MockTable> table) {
    return std::make_shared<TableTextGenerator>(config, std::move(table));
}
std::shared_ptr<Translator> table_translator(const BackendConfig& config,
                                             std::shared_ptr<const MockTable> table) {
    return std::make_shared<TableTranslator>(config, std::move(table));
}
std::shared_ptr<Embedder> table_embedder(const BackendConfig& config,
                                         std::shared_ptr<const MockTable> table) {
    return std::make_shared<TableEmbedder>(config, std::move(table));
}

std::shared_ptr<WordScorer> synthetic_word_scorer(const std::string& name, std::uint64_t seed) {
    return std::make_shared<SyntheticWordScorer>(name, seed);
}
std::shared_ptr<TextGenerator> synthetic_text_generator(const std::string& name,
                                                        std::uint64_t seed) {
    return std::make_shared<SyntheticTextGenerator>(name, seed);
}
std::shared_ptr<Translator> identity_translator(const std::string& name) {
    return std::make_shared<IdentityTranslator>(name);
}
std::shared_ptr<Embedder> hash_embedder(const std::string& name, int dim, std::uint64_t seed) {
    return std::make_shared<HashEmbedder>(name, dim, seed);
}

std::shared_ptr<WordScorer> recording_word_scorer(std::shared_ptr<WordScorer> inner,
                                                  std::shared_ptr<Recorder> recorder) {
    return std::make_shared<RecordingWordScorer>(std::move(inner), std::move(recorder));
}
std::shared_ptr<TextGenerator> recording_text_generator(std::shared_ptr<TextGenerator> inner,
                                                        std::shared_ptr<Recorder> recorder) {
    return std::make_shared<RecordingTextGenerator>(std::move(inner), std::move(recorder));
}
std::shared_ptr<Translator> recording_translator(std::shared_ptr<Translator> inner,
                                                 std::shared_ptr<Recorder> recorder) {
    return std::make_shared<RecordingTranslator>(std::move(inner), std::move(recorder));
}
std::shared_ptr<Embedder> recording_embedder(std::shared_ptr<Embedder> inner,
                                             std::shared_ptr<Recorder> recorder) {
    return std::make_shared<RecordingEmbedder>(std::move(inner), std::move(recorder));
}

BackendSet make_backends(const json& config, std::shared_ptr<Recorder> recorder,
                         const std::string& base_dir) {
    BackendSet set;
    if (config.contains("scorers")) {
        for (const auto& node : config.at("scorers")) {
            BackendConfig cfg = parse_backend_config(node);
            std::shared_ptr<WordScorer> scorer;
            if (cfg.kind == "http")
                scorer = http_word_scorer(cfg);
            else if (cfg.kind == "table")
                scorer = table_word_scorer(cfg, load_table(cfg, base_dir));
            else if (cfg.kind == "synthetic")
                scorer = synthetic_word_scorer(cfg.name, cfg.seed);
            else
                throw ValidationError("backend '" + cfg.name + "': unknown scorer kind '" +
                                      cfg.kind + "'");
            if (recorder) scorer = recording_word_scorer(scorer, recorder);
            set.scorers.push_back(std::move(scorer));
        }
    }
    if (config.contains("generator")) {
        BackendConfig cfg = parse_backend_config(config.at("generator"));
        if (cfg.kind == "http")
            set.generator = http_text_generator(cfg);
        else if (cfg.kind == "table")
            set.generator = table_text_generator(cfg, load_table(cfg, base_dir));
        else if (cfg.kind == "synthetic")
            set.generator = synthetic_text_generator(cfg.name, cfg.seed);
        else
            throw ValidationError("backend '" + cfg.name + "': unknown generator kind '" +
                                  cfg.kind + "'");
        if (recorder) set.generator = recording_text_generator(set.generator, recorder);
    }
    if (config.contains("translator")) {
        BackendConfig cfg = parse_backend_config(config.at("translator"));
        if (cfg.kind == "http")
            set.translator = http_translator(cfg);
        else if (cfg.kind == "table")
            set.translator = table_translator(cfg, load_table(cfg, base_dir));
        else if (cfg.kind == "identity")
            set.translator = identity_translator(cfg.name);
        else
            throw ValidationError("backend '" + cfg.name + "': unknown translator kind '" +
                                  cfg.kind + "'");
        if (recorder) set.translator = recording_translator(set.translator, recorder);
    }
    if (config.contains("embedder")) {
        BackendConfig cfg = parse_backend_config(config.at("embedder"));
        if (cfg.kind == "http")
            set.embedder = http_embedder(cfg);
        else if (cfg.kind == "table")
            set.embedder = table_embedder(cfg, load_table(cfg, base_dir));
        else if (cfg.kind == "hash")
            set.embedder = hash_embedder(cfg.name, cfg.dim, cfg.seed);
        else
            throw ValidationError("backend '" + cfg.name + "': unknown embedder kind '" +
                                  cfg.kind + "'");
        if (recorder) set.embedder = recording_embedder(set.embedder, recorder);
    }
    return set;
}

BackendSet load_backends(const std::string& config_path, std::shared_ptr<Recorder> recorder) {
    std::ifstream in(config_path);
    if (!in) throw LoadError("cannot open backend config: " + config_path);
    json config;
    try {
        in >> config;
    } catch (const json::exception& e) {
        throw LoadError("backend config " + config_path + ": " + e.what());
    }
    std::string base_dir;
    auto slash = config_path.find_last_of('/');
    if (slash != std::string::npos) base_dir = config_path.substr(0, slash);
    return make_backends(config, std::move(recorder), base_dir);
}

} // namespace nsm
