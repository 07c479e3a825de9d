#pragma once

#include "qsa/qsa.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace qsa::cli {

// Rows of numbers, formatted with std::to_chars (shortest round-trip form).
class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header);
  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
  const std::string& text() const { return text_; }

 private:
  std::size_t cols_;
  std::string text_;
};

std::string format_number(double x);

// Writes experiment outputs into one directory and records them for the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir);

  const std::filesystem::path& path() const { return dir_; }
  void write(const std::string& name, const std::string& content);
  void write_csv(const std::string& name, const Csv& csv) { write(name, csv.text()); }
  void write_json(const std::string& name, const nlohmann::ordered_json& j);

  // manifest.json: resolved config, status, SHA-256 of every output.
  void write_manifest(const nlohmann::ordered_json& config, const std::string& status,
                      const nlohmann::ordered_json& extra = nlohmann::ordered_json::object());

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

std::string sha256_hex(const std::string& data);

Csv trajectory_csv(const Trajectory& traj);
Csv scaled_error_csv(const ScaledErrorSeries& z);
nlohmann::ordered_json rate_json(const RateFit& fit);
nlohmann::ordered_json vec_json(const Vec& v);

}  // namespace qsa::cli
