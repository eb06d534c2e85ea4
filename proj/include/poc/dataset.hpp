#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "poc/errors.hpp"
#include "poc/features.hpp"
#include "poc/metrics.hpp"

namespace poc {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

enum class TaskKind { qa, summarization };

inline std::string_view task_kind_name(TaskKind k) { return k == TaskKind::qa ? "qa" : "summarization"; }

inline TaskKind parse_task_kind(std::string_view s) {
  if (s == "qa") return TaskKind::qa;
  if (s == "summarization") return TaskKind::summarization;
  throw DataError("unknown task_kind '" + std::string(s) + "'");
}

struct DatasetRecord {
  std::string id;
  std::string context;
  std::string instruction;
  std::string answer;
  TaskKind task_kind = TaskKind::qa;
  std::string dataset_tag = "default";
  nlohmann::json meta;  // generator parameters, absent for external data
};

struct CalibrationRecord {
  std::string record_id;
  std::string dataset_tag = "default";
  std::string metric_name = "f1";
  std::vector<FeatureVector> chunk_features;
  std::vector<std::size_t> chunk_token_counts;
  std::vector<double> ratios;
  std::vector<double> retentions;
  std::vector<double> raw_scores;
  double baseline_score = 0.0;
};

// Provenance line written first in every JSONL output.
struct OutputHeader {
  std::string kind;  // "dataset", "calibration", ...
  std::string config_hash;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const {
    return {{"record_type", "header"}, {"kind", kind},         {"schema_version", kSchemaVersion},
            {"tool_version", kToolVersion}, {"config_hash", config_hash}, {"seed", seed}};
  }
};

inline bool is_header_line(const nlohmann::json& j) {
  return j.is_object() && j.contains("record_type") && j["record_type"] == "header";
}

inline nlohmann::json to_json(const DatasetRecord& r) {
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"id", r.id},
                   {"context", r.context},
                   {"instruction", r.instruction},
                   {"answer", r.answer},
                   {"task_kind", task_kind_name(r.task_kind)},
                   {"dataset_tag", r.dataset_tag}};
  if (!r.meta.is_null()) j["meta"] = r.meta;
  return j;
}

inline DatasetRecord dataset_record_from_json(const nlohmann::json& j) {
  try {
    DatasetRecord r;
    r.id = j.at("id").get<std::string>();
    r.context = j.at("context").get<std::string>();
    r.instruction = j.value("instruction", std::string{});
    r.answer = j.at("answer").get<std::string>();
    r.task_kind = parse_task_kind(j.value("task_kind", std::string("qa")));
    r.dataset_tag = j.value("dataset_tag", std::string("default"));
    if (j.contains("meta")) r.meta = j["meta"];
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("dataset record: ") + e.what());
  }
}

inline nlohmann::json to_json(const CalibrationRecord& r) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : r.chunk_features) features.push_back(std::vector<double>(f.begin(), f.end()));
  return {{"schema_version", kSchemaVersion},
          {"record_id", r.record_id},
          {"dataset_tag", r.dataset_tag},
          {"metric_name", r.metric_name},
          {"chunk_features", features},
          {"chunk_token_counts", r.chunk_token_counts},
          {"ratios", r.ratios},
          {"retentions", r.retentions},
          {"raw_scores", r.raw_scores},
          {"baseline_score", r.baseline_score}};
}

inline CalibrationRecord calibration_record_from_json(const nlohmann::json& j) {
  try {
    CalibrationRecord r;
    r.record_id = j.at("record_id").get<std::string>();
    r.dataset_tag = j.value("dataset_tag", std::string("default"));
    r.metric_name = j.at("metric_name").get<std::string>();
    for (const auto& row : j.at("chunk_features")) {
      const auto v = row.get<std::vector<double>>();
      if (v.size() != kFeatureCount) throw DataError("calibration record: feature vector has wrong length");
      FeatureVector f{};
      std::copy(v.begin(), v.end(), f.begin());
      r.chunk_features.push_back(f);
    }
    r.chunk_token_counts = j.value("chunk_token_counts", std::vector<std::size_t>{});
    r.ratios = j.at("ratios").get<std::vector<double>>();
    r.retentions = j.at("retentions").get<std::vector<double>>();
    r.raw_scores = j.value("raw_scores", std::vector<double>{});
    r.baseline_score = j.value("baseline_score", 0.0);
    if (r.ratios.size() != r.retentions.size())
      throw DataError("calibration record " + r.record_id + ": ratios and retentions differ in length");
    for (double p : r.retentions)
      if (!(p >= 0.0 && p <= 1.0)) throw DataError("calibration record " + r.record_id + ": retention outside [0,1]");
    if (r.chunk_token_counts.empty()) r.chunk_token_counts.assign(r.chunk_features.size(), 1);
    if (r.chunk_token_counts.size() != r.chunk_features.size())
      throw DataError("calibration record " + r.record_id + ": chunk counts do not match features");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("calibration record: ") + e.what());
  }
}

// Reads every non-header line of a JSONL file.
inline std::vector<nlohmann::json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<nlohmann::json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!is_header_line(j)) out.push_back(std::move(j));
  }
  return out;
}

inline std::vector<DatasetRecord> load_dataset(const std::string& path) {
  std::vector<DatasetRecord> out;
  for (const auto& j : read_jsonl(path)) out.push_back(dataset_record_from_json(j));
  return out;
}

inline std::vector<CalibrationRecord> load_calibration(const std::string& path) {
  std::vector<CalibrationRecord> out;
  for (const auto& j : read_jsonl(path)) out.push_back(calibration_record_from_json(j));
  return out;
}

inline void write_dataset(const std::string& path, const std::vector<DatasetRecord>& records,
                          const OutputHeader& header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << header.to_json().dump() << '\n';
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace poc
