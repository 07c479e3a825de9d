#include "config.hpp"

#include <cmath>
#include <functional>
#include <set>

namespace qsa::cli {

ConfigError::ConfigError(const std::string& what, int line, int column)
    : Error(what), line_(line), column_(column) {}

namespace {

[[noreturn]] void fail_at(const std::string& what, const toml::node& node) {
  const auto& src = node.source();
  throw ConfigError(what, static_cast<int>(src.begin.line), static_cast<int>(src.begin.column));
}

[[noreturn]] void fail_at_key(const std::string& what, const toml::key& key) {
  const auto& src = key.source();
  throw ConfigError(what, static_cast<int>(src.begin.line), static_cast<int>(src.begin.column));
}

bool is_number(const toml::node& n) { return n.is_floating_point() || n.is_integer(); }

// Numbers and (nested) arrays of numbers are interchangeable with their float forms.
bool same_shape(const toml::node& schema, const toml::node& user) {
  if (schema.is_floating_point()) return is_number(user);
  if (schema.is_array()) {
    if (!user.is_array()) return false;
    const auto& sa = *schema.as_array();
    const auto& ua = *user.as_array();
    if (sa.empty() || sa[0].is_table()) return true;  // checked by the consumer
    for (const auto& el : ua)
      if (!same_shape(sa[0], el)) return false;
    return true;
  }
  return schema.type() == user.type();
}

std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

void check_keys(const toml::table& user, const toml::table* defaults, const toml::table* optional,
                const std::string& prefix) {
  for (const auto& [key, value] : user) {
    const std::string path = join(prefix, key.str());
    const toml::node* d = defaults ? defaults->get(key.str()) : nullptr;
    const toml::node* o = optional ? optional->get(key.str()) : nullptr;
    const toml::node* ref = d ? d : o;
    if (ref == nullptr) fail_at_key("unknown key '" + path + "'", key);
    if (ref->is_table()) {
      if (!value.is_table()) fail_at("key '" + path + "' must be a table", value);
      check_keys(*value.as_table(), d ? d->as_table() : nullptr, o ? o->as_table() : nullptr, path);
      continue;
    }
    if (!same_shape(*ref, value)) fail_at("key '" + path + "' has the wrong type", value);
  }
}

void merge_into(toml::table& base, const toml::table& over) {
  for (const auto& [key, value] : over) {
    toml::node* existing = base.get(key.str());
    if (existing && existing->is_table() && value.is_table()) {
      merge_into(*existing->as_table(), *value.as_table());
    } else {
      base.insert_or_assign(key.str(), value);
    }
  }
}

toml::table parse_schema_part(const std::string& text) {
  try {
    return toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw Error(std::string("internal schema error: ") + std::string(e.description()));
  }
}

}  // namespace

void apply_override(toml::table& tbl, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  toml::table parsed;
  try {
    parsed = toml::parse("value = " + text);
  } catch (const toml::parse_error&) {
    parsed.insert_or_assign("value", text);
  }

  toml::table* cur = &tbl;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
    if (dot == std::string::npos) {
      cur->insert_or_assign(key, *parsed.get("value"));
      return;
    }
    toml::node* next = cur->get(key);
    if (next == nullptr) {
      cur->insert_or_assign(key, toml::table{});
      next = cur->get(key);
    }
    if (!next->is_table()) throw ConfigError("override '" + assignment + "' descends into a non-table");
    cur = next->as_table();
    start = dot + 1;
  }
}

toml::table resolve(const toml::table& user, const Schema& schema) {
  const toml::table defaults = parse_schema_part(schema.defaults);
  const toml::table optional = parse_schema_part(schema.optional);
  check_keys(user, &defaults, &optional, "");
  for (const auto& key : schema.required)
    if (!toml::at_path(user, key)) throw ConfigError("missing required key '" + key + "'");
  toml::table out = defaults;
  merge_into(out, user);
  return out;
}

toml::node_view<const toml::node> Config::at(std::string_view path) const {
  auto v = toml::at_path(t_, path);
  if (!v) throw ConfigError("missing key '" + std::string(path) + "'");
  return v;
}

bool Config::has(std::string_view path) const { return static_cast<bool>(toml::at_path(t_, path)); }

double Config::num(std::string_view path) const {
  const auto v = at(path);
  if (auto d = v.value<double>()) return *d;
  throw ConfigError("key '" + std::string(path) + "' must be a number");
}

std::optional<double> Config::opt_num(std::string_view path) const {
  if (!has(path)) return std::nullopt;
  return num(path);
}

long long Config::integer(std::string_view path) const {
  const auto v = at(path);
  if (v.is_integer()) return *v.value<long long>();
  if (auto d = v.value<double>(); d && *d == std::floor(*d) && std::abs(*d) < 9e15) return static_cast<long long>(*d);
  throw ConfigError("key '" + std::string(path) + "' must be an integer");
}

std::string Config::str(std::string_view path) const {
  const auto v = at(path);
  if (auto s = v.value<std::string>()) return *s;
  throw ConfigError("key '" + std::string(path) + "' must be a string");
}

bool Config::flag(std::string_view path) const {
  const auto v = at(path);
  if (auto b = v.value<bool>()) return *b;
  throw ConfigError("key '" + std::string(path) + "' must be a boolean");
}

namespace {

std::vector<double> numbers_of(const toml::array& arr, std::string_view path) {
  std::vector<double> out;
  for (const auto& el : arr) {
    auto d = el.value<double>();
    if (!d) throw ConfigError("key '" + std::string(path) + "' must hold numbers");
    out.push_back(*d);
  }
  return out;
}

}  // namespace

std::vector<double> Config::nums(std::string_view path) const {
  const auto v = at(path);
  if (!v.is_array()) throw ConfigError("key '" + std::string(path) + "' must be an array");
  return numbers_of(*v.as_array(), path);
}

Vec Config::vec(std::string_view path) const {
  const auto xs = nums(path);
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Mat Config::matrix(std::string_view path) const {
  const auto v = at(path);
  if (!v.is_array()) throw ConfigError("key '" + std::string(path) + "' must be an array of rows");
  const auto& rows = *v.as_array();
  if (rows.empty()) throw ConfigError("key '" + std::string(path) + "' is empty");
  Mat m;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array()) throw ConfigError("key '" + std::string(path) + "' must be an array of rows");
    const auto row = numbers_of(*rows[i].as_array(), path);
    if (i == 0) m.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != m.cols())
      throw ConfigError("key '" + std::string(path) + "' has rows of different length");
    for (std::size_t j = 0; j < row.size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
  }
  return m;
}

ProbeSpec Config::probe() const {
  ProbeSpec spec;
  const std::string kind = str("probe.kind");
  if (kind == "sinusoid") spec.kind = ProbeKind::SinusoidMixture;
  else if (kind == "sawtooth") spec.kind = ProbeKind::SawtoothMixture;
  else if (kind == "torus") spec.kind = ProbeKind::TorusExponential;
  else if (kind == "rotation") spec.kind = ProbeKind::IrrationalRotation;
  else fail_at("probe.kind must be sinusoid, sawtooth, torus or rotation", *at("probe.kind").node());

  const auto terms = at("probe.terms");
  if (!terms.is_array()) throw ConfigError("probe.terms must be an array of tables");
  for (const auto& el : *terms.as_array()) {
    if (!el.is_table()) fail_at("probe.terms entries must be tables", el);
    ProbeTerm term;
    if (!el.as_table()->contains("omega")) fail_at("probe term needs 'omega'", el);
    for (const auto& [key, value] : *el.as_table()) {
      const auto k = key.str();
      if (k == "v") {
        if (!value.is_array()) fail_at("probe term 'v' must be an array", value);
        const auto xs = numbers_of(*value.as_array(), "probe.terms.v");
        term.v = Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
      } else if (k == "omega" || k == "phi") {
        auto d = value.value<double>();
        if (!d) fail_at("probe term '" + std::string(k) + "' must be a number", value);
        (k == "omega" ? term.omega : term.phi) = *d;
      } else {
        fail_at("unknown key 'probe.terms." + std::string(k) + "'", value);
      }
    }
    spec.terms.push_back(std::move(term));
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    fail_at(std::string("probe: ") + e.what(), *terms.node());
  }
  return spec;
}

GainSchedule Config::gain() const {
  GainSchedule s;
  const std::string kind = str("gain.kind");
  if (kind == "power") s.kind = GainKind::Power;
  else if (kind == "constant") s.kind = GainKind::Constant;
  else fail_at("gain.kind must be power or constant", *at("gain.kind").node());
  s.g = num("gain.g");
  s.rho = num("gain.rho");
  s.cap = opt_num("gain.cap");
  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("gain: ") + e.what());
  }
  return s;
}

nlohmann::ordered_json to_json(const toml::table& tbl) {
  std::function<nlohmann::ordered_json(const toml::node&)> conv = [&](const toml::node& n) -> nlohmann::ordered_json {
    if (auto t = n.as_table()) {
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      std::set<std::string> keys;
      for (const auto& [k, v] : *t) keys.insert(std::string(k.str()));
      for (const auto& k : keys) j[k] = conv(*t->get(k));
      return j;
    }
    if (auto a = n.as_array()) {
      nlohmann::ordered_json j = nlohmann::ordered_json::array();
      for (const auto& el : *a) j.push_back(conv(el));
      return j;
    }
    if (auto v = n.as_floating_point()) return v->get();
    if (auto v = n.as_integer()) return v->get();
    if (auto v = n.as_boolean()) return v->get();
    if (auto v = n.as_string()) return v->get();
    return nullptr;
  };
  return conv(tbl);
}

}  // namespace qsa::cli
