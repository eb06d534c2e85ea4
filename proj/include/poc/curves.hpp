#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "poc/dataset.hpp"
#include "poc/errors.hpp"
#include "poc/par.hpp"

namespace poc {

struct CurvePoint {
  double ratio = 0.0;
  double retention = 0.0;
  double raw_score = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct CurveTable {
  std::vector<std::string> comments;  // '#' lines without the marker
  std::vector<CurvePoint> points;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_curve_csv(const std::string& path, const CurveTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& c : table.comments) out << "# " << c << '\n';
  out << "ratio,retention,raw_score\n";
  for (const auto& p : table.points)
    out << format_double(p.ratio) << ',' << format_double(p.retention) << ',' << format_double(p.raw_score) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

inline CurveTable read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CurveTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      table.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    if (!header_seen) {
      if (line != "ratio,retention,raw_score") throw DataError(path + ": unexpected CSV header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ','))
      throw DataError(path + ": malformed row '" + line + "'");
    try {
      table.points.push_back({std::stod(a), std::stod(b), std::stod(c)});
    } catch (const std::exception&) {
      throw DataError(path + ": non-numeric row '" + line + "'");
    }
  }
  return table;
}

inline std::string safe_file_stem(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back((std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_');
  return out.empty() ? "untagged" : out;
}

// Mean (over records) of retention and raw score at each sampled ratio.
inline std::vector<CurvePoint> mean_curve(std::span<const CalibrationRecord> records) {
  std::map<long long, std::pair<CurvePoint, std::size_t>> acc;
  for (const auto& r : records)
    for (std::size_t k = 0; k < r.ratios.size(); ++k) {
      const auto key = std::llround(r.ratios[k] * 1e9);
      auto& [p, n] = acc[key];
      p.ratio = r.ratios[k];
      p.retention += r.retentions[k];
      p.raw_score += k < r.raw_scores.size() ? r.raw_scores[k] : 0.0;
      ++n;
    }
  std::vector<CurvePoint> out;
  for (auto& [key, v] : acc) {
    auto [p, n] = v;
    p.retention /= static_cast<double>(n);
    p.raw_score /= static_cast<double>(n);
    out.push_back(p);
  }
  return out;
}

struct EmittedCurves {
  std::vector<std::string> mean_files;
  std::vector<std::string> sample_files;
};

// Per dataset tag: one mean-curve file and one file for each of the first
// `samples_per_tag` records.
inline EmittedCurves emit_curves(std::span<const CalibrationRecord> records, const std::string& dir,
                                 std::size_t samples_per_tag = 3, std::vector<std::string> comments = {}) {
  if (records.empty()) throw DataError("emit_curves: no records");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir);

  std::map<std::string, std::vector<CalibrationRecord>> by_tag;
  for (const auto& r : records) by_tag[r.dataset_tag].push_back(r);

  EmittedCurves out;
  for (const auto& [tag, recs] : by_tag) {
    const auto stem = safe_file_stem(tag);
    CurveTable mean{comments, mean_curve(recs)};
    mean.comments.push_back("dataset_tag=" + tag);
    mean.comments.push_back("records=" + std::to_string(recs.size()));
    const auto mean_path = (std::filesystem::path(dir) / (stem + "_mean.csv")).string();
    write_curve_csv(mean_path, mean);
    out.mean_files.push_back(mean_path);
    for (std::size_t i = 0; i < std::min(samples_per_tag, recs.size()); ++i) {
      const auto& r = recs[i];
      CurveTable t{comments, {}};
      t.comments.push_back("dataset_tag=" + tag);
      t.comments.push_back("record_id=" + r.record_id);
      for (std::size_t k = 0; k < r.ratios.size(); ++k)
        t.points.push_back({r.ratios[k], r.retentions[k], k < r.raw_scores.size() ? r.raw_scores[k] : 0.0});
      const auto path = (std::filesystem::path(dir) / (stem + "_sample_" + safe_file_stem(r.record_id) + ".csv")).string();
      write_curve_csv(path, t);
      out.sample_files.push_back(path);
    }
  }
  return out;
}

// Fitted P@R curve: knots (normalized by the r = 1 score) plus raw scores.
inline std::string emit_par_curve(const ParResult& par, const std::string& path, std::vector<std::string> comments = {}) {
  CurveTable t{std::move(comments), {}};
  t.comments.push_back("par_value=" + format_double(par.par_value));
  const double full = par.anchor_one.mean_score;
  for (std::size_t i = 0; i < par.curve.knot_ratios().size(); ++i) {
    const double raw = par.curve.knot_values()[i];
    t.points.push_back({par.curve.knot_ratios()[i], full > 0.0 ? std::clamp(raw / full, 0.0, 1.0) : 1.0, raw});
  }
  write_curve_csv(path, t);
  return path;
}

}  // namespace poc
