#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

namespace qsa::cli {

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Csv::Csv(const std::vector<std::string>& header) : cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void Csv::row(std::span<const double> values) {
  if (values.size() != cols_) throw Error("CSV row has the wrong number of columns");
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    const auto res = std::to_chars(buf, buf + sizeof buf, values[i]);
    text_.append(buf, res.ptr);
  }
  text_ += '\n';
}

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void OutputDir::write(const std::string& name, const std::string& content) {
  std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error("cannot write " + (dir_ / name).string());
  if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

void OutputDir::write_json(const std::string& name, const nlohmann::ordered_json& j) {
  write(name, j.dump(2) + "\n");
}

std::string sha256_hex(const std::string& data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

void OutputDir::write_manifest(const nlohmann::ordered_json& config, const std::string& status,
                               const nlohmann::ordered_json& extra) {
  nlohmann::ordered_json m;
  m["status"] = status;
  m["partial"] = status != "ok";
  for (const auto& [k, v] : extra.items()) m[k] = v;
  m["config"] = config;
  nlohmann::ordered_json outs = nlohmann::ordered_json::array();
  std::vector<std::string> names = files_;
  std::sort(names.begin(), names.end());
  for (const auto& name : names) {
    std::ifstream in(dir_ / name, std::ios::binary);
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    outs.push_back({{"file", name}, {"bytes", data.size()}, {"sha256", sha256_hex(data)}});
  }
  m["outputs"] = outs;
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  out << m.dump(2) << "\n";
  if (!out) throw Error("cannot write manifest.json");
}

Csv trajectory_csv(const Trajectory& traj) {
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= traj.dim(); ++i) header.push_back("theta_" + std::to_string(i));
  Csv csv(header);
  std::vector<double> row(static_cast<std::size_t>(traj.dim()) + 1);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    row[0] = traj.time(k);
    const auto s = traj.state(k);
    for (int i = 0; i < traj.dim(); ++i) row[static_cast<std::size_t>(i) + 1] = s[i];
    csv.row(row);
  }
  return csv;
}

Csv scaled_error_csv(const ScaledErrorSeries& z) {
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= z.dim; ++i) header.push_back("z_" + std::to_string(i));
  Csv csv(header);
  std::vector<double> row(static_cast<std::size_t>(z.dim) + 1);
  for (std::size_t k = 0; k < z.size(); ++k) {
    row[0] = z.times[k];
    const auto v = z.value(k);
    for (int i = 0; i < z.dim; ++i) row[static_cast<std::size_t>(i) + 1] = v[i];
    csv.row(row);
  }
  return csv;
}

nlohmann::ordered_json rate_json(const RateFit& fit) {
  return {{"rho_hat", fit.rho_hat},
          {"intercept", fit.intercept},
          {"t_lo", fit.t_lo},
          {"t_hi", fit.t_hi},
          {"residual", fit.residual}};
}

nlohmann::ordered_json vec_json(const Vec& v) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

}  // namespace qsa::cli
