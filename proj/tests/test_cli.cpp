#include "qsa/cli.hpp"

#include "config.hpp"
#include "experiments.hpp"
#include "output.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace qsa;
using namespace qsa::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qsa_lab_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured lab(std::vector<std::string> args) {
  args.insert(args.begin(), "qsa-lab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

const char* kSmallRates = R"(experiment = "rates"
T = 200.0
h = 0.01
[gain]
kind = "power"
rho = 0.7
[probe]
kind = "sinusoid"
terms = [{ v = [1.0], omega = 1.0, phi = 0.0 }]
)";

}  // namespace

TEST_CASE("list prints the ten experiments") {
  const auto r = lab({"list"});
  CHECK(r.code == 0);
  int lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 10);
  CHECK(r.out.find("qmc") != std::string::npos);
  CHECK(r.out.find("mountain-car") != std::string::npos);
  CHECK(registry().size() == 10);
  CHECK(find_experiment("poisson-check") != nullptr);
  CHECK(find_experiment("nope") == nullptr);
}

TEST_CASE("every registered schema parses and its defaults resolve") {
  for (const auto& e : registry()) {
    CAPTURE(e.name);
    toml::table user;
    user.insert("experiment", e.name);
    user.insert("T", 1.0);
    user.insert("h", 0.1);
    if (e.name == "mountain-car") {
      user.erase("T");
      user.erase("h");
      toml::table params;
      params.insert("episodes", 10);
      user.insert("params", params);
    }
    if (e.name == "poisson-check") {
      user.erase("T");
      user.erase("h");
    }
    CHECK_NOTHROW(resolve(user, e.schema));
  }
}

TEST_CASE("config errors exit with status 2 and a location") {
  const auto dir = scratch("errors");
  auto run = [&](const std::string& name, const std::string& text) {
    return lab({"run", write_file(dir, name, text).string()});
  };

  const auto missing = run("missing.toml", "experiment = \"rates\"\nh = 0.01\n");
  CHECK(missing.code == 2);
  CHECK(missing.err.find("missing required key 'T'") != std::string::npos);

  const auto syntax = run("syntax.toml", "experiment = \"rates\"\nT = 1.0\nh = = 0.01\n");
  CHECK(syntax.code == 2);
  CHECK(syntax.err.find("syntax.toml:3:") != std::string::npos);

  const auto unknown = run("unknown.toml", std::string(kSmallRates) + "[params]\nthetta0 = 1.0\n");
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("unknown key 'params.thetta0'") != std::string::npos);
  CHECK(unknown.err.find("unknown.toml:11:") != std::string::npos);

  const auto type = run("type.toml", "experiment = \"rates\"\nT = \"long\"\nh = 0.01\n");
  CHECK(type.code == 2);
  CHECK(type.err.find("wrong type") != std::string::npos);

  CHECK(run("noexp.toml", "experiment = \"nope\"\n").code == 2);
  CHECK(run("nokey.toml", "T = 1.0\n").code == 2);

  const auto probe = run("probe.toml", std::string(kSmallRates) + "[params]\ntheta0 = 0.0\n");
  CHECK(probe.code == 0);
  const auto badprobe = run("badprobe.toml", R"(experiment = "rates"
T = 10.0
h = 0.01
[probe]
kind = "sinusoid"
terms = [{ v = [1.0], omega = -1.0 }]
)");
  CHECK(badprobe.code == 2);
  const auto badgain = run("badgain.toml", "experiment = \"rates\"\nT = 10.0\nh = 0.01\n[gain]\nrho = 2.0\n");
  CHECK(badgain.code == 2);

  CHECK(lab({"run", (dir / "does-not-exist.toml").string()}).code == 2);
  CHECK(lab({"run", write_file(dir, "ok.toml", kSmallRates).string(), "--override", "noequals"}).code == 2);
  CHECK(lab({"bogus"}).code == 2);
}

TEST_CASE("rates with --override gain.rho=0.7 fits rho_hat near 0.7") {
  const auto dir = scratch("rates");
  const auto cfg = write_file(dir, "rates.toml", R"(experiment = "rates"
T = 10000.0
h = 0.001
[gain]
kind = "power"
rho = 0.5
[probe]
kind = "sinusoid"
terms = [{ v = [1.0], omega = 1.0, phi = 0.0 }]
)");
  const auto out = dir / "out";
  const auto r = lab({"run", cfg.string(), "--override", "gain.rho=0.7", "--override", "out_dir=\"" + out.string() + "\""});
  REQUIRE(r.code == 0);
  const auto rate = nlohmann::json::parse(slurp(out / "rate.json"));
  CHECK(rate["rho_hat"].get<double>() == doctest::Approx(0.7).epsilon(0.1));
  const std::string csv = slurp(out / "rates.csv");
  CHECK(csv.rfind("rho_hat,intercept,t_lo,t_hi,residual\n", 0) == 0);
  CHECK(slurp(out / "trajectory.csv").rfind("t,theta_1\n", 0) == 0);
  CHECK(slurp(out / "scaled_error.csv").rfind("t,z_1\n", 0) == 0);
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["config"]["gain"]["rho"].get<double>() == 0.7);
}

TEST_CASE("reruns are byte-identical and manifest hashes verify") {
  const auto dir = scratch("determinism");
  const auto cfg = write_file(dir, "qsgd.toml", R"(experiment = "qsgd"
T = 500.0
h = 0.01
[gain]
kind = "power"
rho = 0.7
[probe]
kind = "sinusoid"
terms = [{ v = [1.4142135623730951], omega = 1.0, phi = 0.0 }]
[params]
epsilons = [0.1, 0.2, 0.3]
)");
  setenv("QSA_LAB_OUT", (dir / "a").string().c_str(), 1);
  REQUIRE(lab({"run", cfg.string()}).code == 0);
  setenv("QSA_LAB_OUT", (dir / "b").string().c_str(), 1);
  REQUIRE(lab({"run", cfg.string(), "--jobs", "3"}).code == 0);
  unsetenv("QSA_LAB_OUT");

  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["partial"] == false);
  REQUIRE(manifest["outputs"].size() == 3);
  for (const auto& o : manifest["outputs"]) {
    const std::string file = o["file"];
    const std::string a = slurp(dir / "a" / file);
    CHECK(a == slurp(dir / "b" / file));
    CHECK(o["sha256"] == sha256_hex(a));
    CHECK(o["bytes"].get<std::size_t>() == a.size());
  }
  // The out_dir override differs between the two runs, everything else matches.
  CHECK(slurp(dir / "a" / "sweep.csv").rfind("epsilon,bias\n", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
  CHECK(summary.contains("theta_rp"));
  CHECK(summary.contains("L_at_rp"));
  CHECK(summary.contains("evals"));
}

TEST_CASE("divergence exits with status 3 and flags partial outputs") {
  const auto dir = scratch("diverge");
  const auto cfg = write_file(dir, "div.toml", R"(experiment = "linear-check"
T = 100.0
h = 0.01
[gain]
kind = "constant"
g = 1.0
[params]
A = [[1.0]]
B = [[1.0]]
theta_star = [0.0]
theta0 = [1.0]
)");
  setenv("QSA_LAB_OUT", (dir / "out").string().c_str(), 1);
  const auto r = lab({"run", cfg.string()});
  unsetenv("QSA_LAB_OUT");
  CHECK(r.code == 3);
  const auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(manifest["status"] == "diverged");
  CHECK(manifest["partial"] == true);
  CHECK(manifest["diverged_at"].get<double>() > 0.0);
  CHECK(fs::exists(dir / "out" / "trajectory_partial.csv"));
  CHECK(manifest["outputs"][0]["file"] == "trajectory_partial.csv");
}

TEST_CASE("poisson-check and mountain-car run from minimal configs") {
  const auto dir = scratch("small");
  setenv("QSA_LAB_OUT", (dir / "p").string().c_str(), 1);
  CHECK(lab({"run", write_file(dir, "p.toml", "experiment = \"poisson-check\"\n").string()}).code == 0);
  setenv("QSA_LAB_OUT", (dir / "m").string().c_str(), 1);
  CHECK(lab({"run", write_file(dir, "m.toml", "experiment = \"mountain-car\"\n[params]\nepisodes = 200\nscan = false\n").string()})
            .code == 0);
  unsetenv("QSA_LAB_OUT");
  const auto p = nlohmann::json::parse(slurp(dir / "p" / "summary.json"));
  CHECK(p["coefficient_bound_holds"] == true);
  CHECK(p["max_identity_gap"].get<double>() < p["tolerance"].get<double>());
  CHECK(slurp(dir / "m" / "mountain_car.csv").rfind("episode,theta\n", 0) == 0);
  CHECK(!fs::exists(dir / "m" / "scan.csv"));
}

TEST_CASE("apply_override builds nested keys and falls back to strings") {
  toml::table t;
  apply_override(t, "gain.rho=0.7");
  apply_override(t, "params.instance=additive");
  apply_override(t, "params.window=[1.0, 2.0]");
  CHECK(t.at_path("gain.rho").value<double>() == 0.7);
  CHECK(t.at_path("params.instance").value<std::string>() == "additive");
  CHECK(t.at_path("params.window").as_array()->size() == 2);
  CHECK_THROWS_AS(apply_override(t, "=3"), ConfigError);
  CHECK_THROWS_AS(apply_override(t, "gain.rho.x=1"), ConfigError);
}

TEST_CASE("resolve fills defaults, accepts integers for floats, rejects unknown keys") {
  const Schema s{"a = 1.0\n[sub]\nb = \"x\"\nc = [1.0]\n", "[sub]\nd = 2.0\n", {"a"}};
  const auto r = resolve(toml::parse("a = 3\n[sub]\nc = [1, 2]\n"), s);
  const Config c(r);
  CHECK(c.num("a") == 3.0);
  CHECK(c.str("sub.b") == "x");
  CHECK(c.nums("sub.c") == std::vector<double>{1.0, 2.0});
  CHECK(!c.has("sub.d"));
  CHECK_THROWS_AS(resolve(toml::parse("[sub]\nb = \"y\"\n"), s), ConfigError);
  CHECK_THROWS_AS(resolve(toml::parse("a = 1.0\nz = 1\n"), s), ConfigError);
  CHECK_THROWS_AS(resolve(toml::parse("a = 1.0\n[sub]\nb = 2\n"), s), ConfigError);
  try {
    resolve(toml::parse("a = 1.0\n\n[sub]\n  e = 1\n"), s);
  } catch (const ConfigError& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("Config parses probe and gain sections") {
  const Config c(toml::parse(R"(
[probe]
kind = "torus"
terms = [{ omega = 1.0 }, { omega = 2.5, phi = 0.25 }]
[gain]
kind = "power"
g = 2.0
rho = 0.9
cap = 0.01
)"));
  const auto p = c.probe();
  CHECK(p.kind == ProbeKind::TorusExponential);
  CHECK(p.terms.size() == 2);
  CHECK(p.terms[1].phi == 0.25);
  CHECK(p.dim() == 4);
  const auto g = c.gain();
  CHECK(g.g == 2.0);
  CHECK(g.cap == 0.01);
  const Config bad(toml::parse("[probe]\nkind = \"square\"\nterms = []\n"));
  CHECK_THROWS_AS(bad.probe(), ConfigError);
  const Config noomega(toml::parse("[probe]\nkind = \"sinusoid\"\nterms = [{ v = [1.0] }]\n"));
  CHECK_THROWS_AS(noomega.probe(), ConfigError);
  const Config m(toml::parse("A = [[1.0, 2.0], [3.0, 4.0]]\nragged = [[1.0], [1.0, 2.0]]\n"));
  CHECK(m.matrix("A")(1, 0) == 3.0);
  CHECK_THROWS_AS(m.matrix("ragged"), ConfigError);
}

TEST_CASE("CSV numbers use the shortest round-trip form") {
  Csv csv({"a", "b"});
  csv.row({0.1, 1e-20});
  csv.row({-2.0, 1.0 / 3.0});
  CHECK(csv.text() == "a,b\n0.1,1e-20\n-2,0.3333333333333333\n");
  CHECK_THROWS_AS(csv.row({1.0}), Error);
  CHECK(format_number(2.0) == "2");
}

TEST_CASE("sha256 test vector") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("resolved config serializes with sorted keys") {
  const auto j = to_json(toml::parse("b = 1\na = { d = 2.5, c = \"x\" }\n"));
  CHECK(j.dump() == R"({"a":{"c":"x","d":2.5},"b":1})");
}
