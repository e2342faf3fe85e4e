#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nsm/crosslingual.hpp"
#include "nsm/dataset.hpp"
#include "nsm/substitutability.hpp"

namespace nsm {

/// FNV-1a 64-bit. Used for request fingerprints and synthetic backends.
std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Canonical fingerprint of (contract, request payload): hex FNV-1a over the
/// sorted-key JSON dump.
std::string fingerprint(const nlohmann::json& request);

struct BackendConfig {
    std::string name;
    std::string kind;     // http, table, synthetic, identity, hash
    std::string endpoint; // full URL including path, http kind only
    std::string model;
    std::string auth_env;   // environment variable holding the credential
    double rate_limit = 4.0; // requests per second
    double timeout = 30.0;   // seconds
    int retries = 2;
    std::string table_path; // table kind only
    std::uint64_t seed = 0; // synthetic/hash kinds
    int dim = 16;           // hash embedder

    void validate() const;
};

/// Exact-match request/response store for offline replay. A missing
/// fingerprint is always an error; mocks never fabricate values.
class MockTable {
  public:
    MockTable() = default;

    static MockTable load(const std::string& path);
    void save(const std::string& path) const;

    void put(const nlohmann::json& request, const nlohmann::json& response);
    /// Throws MockMissError when the request was never recorded.
    nlohmann::json lookup(const std::string& backend_name, const nlohmann::json& request) const;

    std::size_t size() const;

  private:
    struct Entry {
        std::string request_dump;
        std::string response_dump;
    };
    std::unordered_map<std::string, Entry> entries_;
    mutable std::mutex mutex_;

  public:
    MockTable(const MockTable& other);
    MockTable& operator=(const MockTable&) = delete;
};

/// Shared token-interval rate limiter; callers block until their slot.
class RateLimiter {
  public:
    explicit RateLimiter(double requests_per_second);
    void acquire();

  private:
    std::chrono::steady_clock::duration interval_;
    std::chrono::steady_clock::time_point next_;
    std::mutex mutex_;
};

/// Collects request/response pairs while real backends run, for later replay.
class Recorder {
  public:
    void add(const nlohmann::json& request, const nlohmann::json& response);
    void save(const std::string& path) const;
    std::size_t size() const;
    const MockTable& table() const { return table_; }

  private:
    MockTable table_;
};

// ---------------------------------------------------------------------------
// Factories. Table-backed mocks and deterministic fakes satisfy the same
// contracts as the HTTP clients, so every module runs offline unchanged.
// ---------------------------------------------------------------------------

std::shared_ptr<WordScorer> http_word_scorer(const BackendConfig& config);
std::shared_ptr<TextGenerator> http_text_generator(const BackendConfig& config);
std::shared_ptr<Translator> http_translator(const BackendConfig& config);
std::shared_ptr<Embedder> http_embedder(const BackendConfig& config);

std::shared_ptr<WordScorer> table_word_scorer(const BackendConfig& config,
                                              std::shared_ptr<const MockTable> table);
std::shared_ptr<TextGenerator> table_text_generator(const BackendConfig& config,
                                                    std::shared_ptr<const MockTable> table);
std::shared_ptr<Translator> table_translator(const BackendConfig& config,
                                             std::shared_ptr<const MockTable> table);
std::shared_ptr<Embedder> table_embedder(const BackendConfig& config,
                                         std::shared_ptr<const MockTable> table);

/// Hash-driven scorer: finite, deterministic log-probabilities in [-30, 0).
std::shared_ptr<WordScorer> synthetic_word_scorer(const std::string& name, std::uint64_t seed);
/// Template-driven generator producing example sentences, explication lines
/// and masked passages offline, varying deterministically with the prompt.
std::shared_ptr<TextGenerator> synthetic_text_generator(const std::string& name,
                                                        std::uint64_t seed);
std::shared_ptr<Translator> identity_translator(const std::string& name);
std::shared_ptr<Embedder> hash_embedder(const std::string& name, int dim, std::uint64_t seed);

std::shared_ptr<WordScorer> recording_word_scorer(std::shared_ptr<WordScorer> inner,
                                                  std::shared_ptr<Recorder> recorder);
std::shared_ptr<TextGenerator> recording_text_generator(std::shared_ptr<TextGenerator> inner,
                                                        std::shared_ptr<Recorder> recorder);
std::shared_ptr<Translator> recording_translator(std::shared_ptr<Translator> inner,
                                                 std::shared_ptr<Recorder> recorder);
std::shared_ptr<Embedder> recording_embedder(std::shared_ptr<Embedder> inner,
                                             std::shared_ptr<Recorder> recorder);

/// Everything a run needs, built from one backend config file.
struct BackendSet {
    std::vector<std::shared_ptr<WordScorer>> scorers;
    std::shared_ptr<TextGenerator> generator;
    std::shared_ptr<Translator> translator;
    std::shared_ptr<Embedder> embedder;
};

/// Parses the backend config JSON (`scorers` array plus `generator`,
/// `translator`, `embedder` objects) and instantiates each backend by kind.
/// When `recorder` is non-null every backend is wrapped to capture traffic.
/// Relative mock-table paths resolve against `base_dir` (the config file's
/// directory when loaded from disk).
BackendSet make_backends(const nlohmann::json& config, std::shared_ptr<Recorder> recorder = nullptr,
                         const std::string& base_dir = "");
BackendSet load_backends(const std::string& config_path,
                         std::shared_ptr<Recorder> recorder = nullptr);

} // namespace nsm
