#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nsm/crosslingual.hpp"
#include "nsm/dataset.hpp"
#include "nsm/scoring.hpp"

namespace nsm {

// JSON views of the record types. Keys are emitted in sorted order by the
// JSON library, so serialization is deterministic for identical values.

nlohmann::json to_json(const LegalityReport& r);
nlohmann::json to_json(const SubstitutabilityReport& r);
nlohmann::json to_json(const ScoreReport& r);
nlohmann::json to_json(const WordSense& s);
nlohmann::json to_json(const Explication& e);
nlohmann::json to_json(const MaskedPassage& p);
nlohmann::json to_json(const DatasetEntry& e);
nlohmann::json to_json(const BenchmarkReport& r);
nlohmann::json to_json(const CrossReport& r);

WordSense sense_from_json(const nlohmann::json& j);
Explication explication_from_json(const nlohmann::json& j);
MaskedPassage passage_from_json(const nlohmann::json& j);
ScoreReport score_from_json(const nlohmann::json& j);
DatasetEntry entry_from_json(const nlohmann::json& j);

/// Line-delimited dataset record files (one JSON entry per line).
std::vector<DatasetEntry> read_entries_jsonl(const std::string& path);
void write_entries_jsonl(const std::string& path, const std::vector<DatasetEntry>& entries);

/// Aligned plain-text benchmark table mirroring the standard report columns.
std::string render_benchmark_table(const BenchmarkReport& r);

std::string iso8601_utc_now();

/// Hex FNV-1a of the sorted-key dump; ties a manifest to its exact config.
std::string config_hash(const nlohmann::json& config);

void write_text_file(const std::string& path, const std::string& content);

} // namespace nsm
