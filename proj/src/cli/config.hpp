#pragma once

#include "qsa/gain.hpp"
#include "qsa/probe.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

namespace qsa::cli {

// Bad config file, key, value or override. line/column are 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Accepted keys of one experiment. `defaults` is a TOML document giving every
// key with a default; `optional` lists keys that may be absent (values only fix
// the type); `required` keys must appear in the user file.
struct Schema {
  std::string defaults;
  std::string optional;
  std::vector<std::string> required;
};

// Applies a dotted-path override "a.b=value". The value is parsed as TOML and
// falls back to a plain string.
void apply_override(toml::table& tbl, const std::string& assignment);

// Rejects unknown keys and type mismatches, checks required keys, and fills in defaults.
toml::table resolve(const toml::table& user, const Schema& schema);

class Config {
 public:
  explicit Config(toml::table resolved) : t_(std::move(resolved)) {}

  const toml::table& table() const { return t_; }

  double num(std::string_view path) const;
  std::optional<double> opt_num(std::string_view path) const;
  long long integer(std::string_view path) const;
  std::string str(std::string_view path) const;
  bool flag(std::string_view path) const;
  std::vector<double> nums(std::string_view path) const;
  Vec vec(std::string_view path) const;
  Mat matrix(std::string_view path) const;  // row-major nested arrays
  bool has(std::string_view path) const;

  // Sections [probe] and [gain].
  ProbeSpec probe() const;
  GainSchedule gain() const;

 private:
  toml::node_view<const toml::node> at(std::string_view path) const;
  toml::table t_;
};

nlohmann::ordered_json to_json(const toml::table& tbl);

}  // namespace qsa::cli
