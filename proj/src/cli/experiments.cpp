#include "experiments.hpp"

#include "qsa/envs/lqr.hpp"
#include "qsa/envs/mountain_car.hpp"
#include "qsa/envs/qmc.hpp"
#include "qsa/envs/softmin.hpp"
#include "qsa/linmodel.hpp"
#include "qsa/qsgd.hpp"
#include "qsa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsa::cli {
namespace {

using json = nlohmann::ordered_json;

IntegrateOptions integrate_options(const Config& c) {
  IntegrateOptions o;
  const long long m = c.integer("max_samples");
  if (m < 2) throw ConfigError("max_samples must be at least 2");
  o.max_samples = static_cast<std::size_t>(m);
  return o;
}

double positive(const Config& c, std::string_view key) {
  const double v = c.num(key);
  if (!(v > 0.0)) throw ConfigError("key '" + std::string(key) + "' must be positive");
  return v;
}

QsgdVariant variant_of(const Config& c, std::string_view key) {
  const std::string v = c.str(key);
  if (v == "one") return QsgdVariant::One;
  if (v == "two") return QsgdVariant::Two;
  if (v == "three") return QsgdVariant::Three;
  throw ConfigError("key '" + std::string(key) + "' must be one, two or three");
}

std::optional<Box> box_of(const Config& c, int d) {
  const bool lo = c.has("params.box_lo"), hi = c.has("params.box_hi");
  if (lo != hi) throw ConfigError("params.box_lo and params.box_hi go together");
  if (!lo) return std::nullopt;
  Box b{c.vec("params.box_lo"), c.vec("params.box_hi")};
  try {
    b.validate(d);
  } catch (const Error& e) {
    throw ConfigError(std::string("box: ") + e.what());
  }
  return b;
}

// Sample k of a trajectory nearest to time t.
std::size_t index_at(const Trajectory& traj, double t) {
  const double k = std::round((t - traj.t0()) / traj.h());
  return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(traj.size() - 1)));
}

// ---------------------------------------------------------------- qmc

void run_qmc(RunContext& ctx) {
  const auto& c = ctx.cfg;
  envs::QmcConfig q;
  q.gains = c.nums("params.gains");
  q.rho = c.num("params.rho");
  q.T = positive(c, "T");
  q.h = positive(c, "h");
  const long long trials = c.integer("params.trials");
  if (trials < 1) throw ConfigError("params.trials must be at least 1");
  q.trials = static_cast<std::size_t>(trials);
  q.init_spread = c.num("params.init_spread");
  const std::string init = c.str("params.init");
  if (init == "quasi") q.init = envs::InitMode::QuasiNormal;
  else if (init == "normal") q.init = envs::InitMode::SeededNormal;
  else throw ConfigError("params.init must be quasi or normal");
  q.seed = static_cast<std::uint64_t>(c.integer("params.seed"));
  const long long mc = c.integer("params.mc_samples");
  if (mc < 0) throw ConfigError("params.mc_samples must be nonnegative");
  q.mc_samples = static_cast<std::size_t>(mc);
  const std::string sampling = c.str("params.sampling");
  if (sampling == "right") q.sampling = ProbeSampling::Right;
  else if (sampling == "left") q.sampling = ProbeSampling::Left;
  else throw ConfigError("params.sampling must be left or right");
  q.jobs = ctx.jobs;

  const auto res = envs::qmc_experiment(q);
  json summary;
  summary["exact_mean"] = envs::qmc_exact_mean();
  json rows = json::array();
  auto emit = [&](const envs::QmcSummary& s, const std::string& file) {
    Csv csv({"trial", "estimate"});
    for (std::size_t i = 0; i < s.estimates.size(); ++i) csv.row({static_cast<double>(i), s.estimates[i]});
    ctx.out.write_csv(file, csv);
    return json{{"file", file}, {"median", s.median}, {"mean", s.mean}, {"variance", s.variance}};
  };
  for (const auto& s : res.by_gain) {
    json r = emit(s, "histogram_g" + format_number(s.gain) + ".csv");
    r["gain"] = s.gain;
    rows.push_back(r);
  }
  summary["qsa"] = rows;
  if (res.by_gain.size() >= 2)
    summary["variance_ratio_first_last"] = res.by_gain.front().variance / res.by_gain.back().variance;
  if (res.monte_carlo) {
    json r = emit(*res.monte_carlo, "histogram_mc.csv");
    r["samples"] = q.mc_samples;
    summary["monte_carlo"] = r;
  }
  ctx.out.write_json("summary.json", summary);
}

// ---------------------------------------------------------------- rates

VectorField scalar_instance(const std::string& instance, double theta_star) {
  if (instance == "multiplicative")
    return [theta_star](const Vec& th, const Vec& xi) -> Vec {
      return -(th.array() - theta_star).matrix() + xi[0] * (Vec::Ones(th.size()) + th);
    };
  if (instance == "additive")
    return [theta_star](const Vec& th, const Vec& xi) -> Vec {
      return -(th.array() - theta_star).matrix() + Vec::Constant(th.size(), xi[0]);
    };
  throw ConfigError("params.instance must be multiplicative or additive");
}

void run_rates(RunContext& ctx) {
  const auto& c = ctx.cfg;
  const ProbeSpec probe = c.probe();
  const GainSchedule gain = c.gain();
  const double T = positive(c, "T"), h = positive(c, "h");
  const double star = c.num("params.theta_star");
  const VectorField f = scalar_instance(c.str("params.instance"), star);
  const Vec theta_star = Vec::Constant(1, star);

  const auto traj = integrate_qsa(f, probe, gain, Vec::Constant(1, c.num("params.theta0")), T, h,
                                  integrate_options(c));
  ctx.out.write_csv("trajectory.csv", trajectory_csv(traj));
  ctx.out.write_csv("scaled_error.csv", scaled_error_csv(scaled_error(traj, theta_star, gain)));

  double lo = T / 100.0, hi = T;
  if (c.has("params.window")) {
    const auto w = c.nums("params.window");
    if (w.size() != 2) throw ConfigError("params.window must have two entries");
    lo = w[0];
    hi = w[1];
  }
  const long long bins = c.integer("params.bins_per_decade");
  if (bins < 1) throw ConfigError("params.bins_per_decade must be positive");
  std::vector<double> t(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) t[k] = traj.time(k);
  const auto err = error_norms(traj, theta_star);
  const auto [et, ee] = log_binned_envelope(t, err, lo, hi, static_cast<int>(bins));
  const RateFit fit = estimate_rate(et, ee, std::pair{lo, hi});

  Csv rates({"rho_hat", "intercept", "t_lo", "t_hi", "residual"});
  rates.row({fit.rho_hat, fit.intercept, fit.t_lo, fit.t_hi, fit.residual});
  ctx.out.write_csv("rates.csv", rates);
  ctx.out.write_json("rate.json", rate_json(fit));
}

// ---------------------------------------------------------------- linear-check

void run_linear_check(RunContext& ctx) {
  const auto& c = ctx.cfg;
  const ProbeSpec probe = c.probe();
  const GainSchedule gain = c.gain();
  if (gain.kind != GainKind::Constant) throw ConfigError("linear-check needs gain.kind = constant");
  const double alpha = gain.g;
  const double T = positive(c, "T"), h = positive(c, "h");
  LinearModel m{c.matrix("params.A"), c.matrix("params.B"), c.vec("params.theta_star")};
  const Vec theta0 = c.vec("params.theta0");
  const double K = c.num("params.K");
  const VectorField f = [&m](const Vec& th, const Vec& xi) { return m.field(th, xi); };
  const int d = static_cast<int>(theta0.size());

  auto compare = [&](double step, Csv* csv) {
    const auto traj = integrate_qsa(f, probe, gain, theta0, T, step, integrate_options(c));
    double dev = 0.0;
    std::vector<double> row(2 * static_cast<std::size_t>(d) + 1);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const Vec cf = m.theta_star + linear_qsa_closed_form(m, probe, alpha, theta0, traj.time(k));
      dev = std::max(dev, (traj.state(k) - cf).cwiseAbs().maxCoeff());
      if (csv) {
        row[0] = traj.time(k);
        for (int i = 0; i < d; ++i) {
          row[static_cast<std::size_t>(i) + 1] = traj.state(k)[i];
          row[static_cast<std::size_t>(d + i) + 1] = cf[i];
        }
        csv->row(row);
      }
    }
    return std::pair{dev, traj};
  };
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= d; ++i) header.push_back("euler_" + std::to_string(i));
  for (int i = 1; i <= d; ++i) header.push_back("closed_" + std::to_string(i));
  Csv csv(header);
  const auto [d1, traj] = compare(h, &csv);
  const double d2 = compare(h / 2, nullptr).first;
  ctx.out.write_csv("comparison.csv", csv);

  const Vec rp_cf = rp_closed_form(m, probe, alpha, theta0, traj.end_time(), K);
  const Vec rp_num = rp_average(traj, RpMode::windowed(K)).back();
  ctx.out.write_json("summary.json", {{"max_dev_h", d1},
                                      {"max_dev_half_h", d2},
                                      {"ratio", d1 / d2},
                                      {"rp_closed_form", vec_json(rp_cf)},
                                      {"rp_euler", vec_json(rp_num)},
                                      {"rp_gap", (rp_cf - rp_num).cwiseAbs().maxCoeff()}});
}

// ---------------------------------------------------------------- rp-averaging

void run_rp_averaging(RunContext& ctx) {
  const auto& c = ctx.cfg;
  const ProbeSpec probe = c.probe();
  if (probe.dim() < 2) throw ConfigError("rp-averaging instances read xi[0] and xi[1]; probe dimension must be >= 2");
  const GainSchedule gain = c.gain();
  const double T = positive(c, "T"), h = positive(c, "h");
  const std::string instance = c.str("params.instance");
  VectorField f;
  if (instance == "additive")
    f = [](const Vec& th, const Vec& xi) -> Vec { return -th + Vec::Constant(th.size(), xi[0]); };
  else if (instance == "multiplicative")
    f = [](const Vec& th, const Vec& xi) -> Vec { return -(1.0 + xi[1]) * th + Vec::Constant(th.size(), xi[0]); };
  else
    throw ConfigError("params.instance must be additive or multiplicative");
  const std::string mode_name = c.str("params.mode");
  RpMode mode;
  if (mode_name == "ode") mode = RpMode::ode_form();
  else if (mode_name == "windowed") mode = RpMode::windowed(c.num("params.K"));
  else throw ConfigError("params.mode must be ode or windowed");

  const Vec star = Vec::Zero(1);
  const auto traj = integrate_qsa(f, probe, gain, Vec::Constant(1, c.num("params.theta0")), T, h,
                                  integrate_options(c));
  const auto rp = rp_average(traj, mode);
  const long long n = c.integer("params.horizons");
  if (n < 10) throw ConfigError("params.horizons must be at least 10");
  Csv csv({"T", "error"});
  std::vector<double> ts, es;
  for (long long i = 0; i < n; ++i) {
    const double Ti = (T / 100.0) * std::pow(100.0, static_cast<double>(i) / static_cast<double>(n - 1));
    const auto k = index_at(rp, Ti);
    ts.push_back(rp.time(k));
    es.push_back((rp.state(k) - star).norm());
    csv.row({ts.back(), es.back()});
  }
  ctx.out.write_csv("rp.csv", csv);
  const RateFit fit = estimate_rate(ts, es, std::pair{ts.front(), ts.back()});

  const Vec ups = upsilon_bar_numeric(f, probe, star, c.num("params.upsilon_T"), c.num("params.upsilon_h"));
  Mat Astar = Mat::Zero(1, 1);
  const int N = 4096;
  const double period = 2.0 * std::numbers::pi / probe.terms.front().omega;
  Vec xi;
  for (int i = 0; i < N; ++i) {
    probe_eval(probe, period * i / N, xi);
    Astar += jacobian_theta(f, star, xi) / N;
  }
  json summary{{"instance", instance}, {"mode", mode_name}, {"slope", fit.rho_hat},
               {"upsilon_bar", vec_json(ups)}, {"A_star", Astar(0, 0)}};
  try {
    summary["y_bar"] = vec_json(y_bar(Astar, gain.rho, ups, gain.g).y_bar);
  } catch (const Error& e) {
    summary["y_bar"] = e.what();
  }
  const auto z = scaled_error(traj, star, gain);
  double sum = 0.0;
  long long cnt = 0;
  for (std::size_t k = 0; k < z.size(); ++k)
    if (z.times[k] >= 0.9 * T) {
      sum += z.value(k)[0];
      ++cnt;
    }
  summary["z_tail_mean"] = cnt ? sum / static_cast<double>(cnt) : 0.0;
  ctx.out.write_json("summary.json", summary);
}

// ---------------------------------------------------------------- qsgd

Loss named_loss(const std::string& name) {
  if (name == "quadratic") return [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  if (name == "quartic")
    return [](const Vec& x) { return (0.5 * x.array().square() + 0.25 * x.array().pow(4)).sum(); };
  if (name == "asymmetric-quartic")
    return [](const Vec& x) {
      return (0.5 * x.array().square() + x.array().cube() / 3.0 + 0.25 * x.array().pow(4)).sum();
    };
  throw ConfigError("params.loss must be quadratic, quartic or asymmetric-quartic");
}

void run_qsgd_experiment(RunContext& ctx) {
  const auto& c = ctx.cfg;
  const ProbeSpec probe = c.probe();
  const GainSchedule gain = c.gain();
  const double T = positive(c, "T"), h = positive(c, "h");
  const Vec theta0 = c.vec("params.theta0");
  const int d = static_cast<int>(theta0.size());
  QsgdConfig q;
  q.variant = variant_of(c, "params.variant");
  q.G = c.has("params.G") ? c.matrix("params.G") : Mat::Identity(d, d);
  q.epsilon = c.num("params.epsilon");
  q.box = box_of(c, d);
  q.delta = c.num("params.delta");
  const Loss L = named_loss(c.str("params.loss"));

  const QsgdRun run = run_qsgd(q, L, probe, gain, theta0, T, h, integrate_options(c));
  ctx.out.write_csv("trajectory.csv", trajectory_csv(run.traj));
  ctx.out.write_json("summary.json",
                     {{"theta_rp", vec_json(run.theta_rp)}, {"L_at_rp", L(run.theta_rp)}, {"evals", run.evals}});

  const auto eps = c.nums("params.epsilons");
  if (!eps.empty()) {
    const auto rows = epsilon_bias_sweep(q, L, probe, gain, eps, theta0, Vec::Zero(d), T, h, ctx.jobs);
    Csv csv({"epsilon", "bias"});
    for (const auto& r : rows) csv.row({r.epsilon, r.bias});
    ctx.out.write_csv("sweep.csv", csv);
  }
}

// ---------------------------------------------------------------- softmin

void run_softmin(RunContext& ctx) {
  const auto& c = ctx.cfg;
  envs::SoftminSetup s;
  s.probe = c.probe();
  s.gain = c.gain();
  s.T = positive(c, "T");
  s.h = positive(c, "h");
  s.variant = variant_of(c, "params.variant");
  s.epsilon = c.num("params.epsilon");
  s.theta0 = c.vec("params.theta0");
  s.box = c.flag("params.projection") ? box_of(c, 2) : std::nullopt;
  if (s.theta0.size() != 2) throw ConfigError("params.theta0 must have two entries");

  const auto r = envs::softmin_experiment(s);
  ctx.out.write_csv("trajectory.csv", trajectory_csv(r.run.traj));
  ctx.out.write_json("summary.json", {{"theta_rp", vec_json(r.run.theta_rp)},
                                      {"L_at_rp", r.loss_rp},
                                      {"theta_star", vec_json(r.theta_star)},
                                      {"L_star", r.loss_star},
                                      {"relative_gap", std::abs(r.loss_rp - r.loss_star) / std::abs(r.loss_star)},
                                      {"evals", r.run.evals}});
}

// ---------------------------------------------------------------- lqr

struct LqrSetup {
  envs::LqrProblem p;
  ProbeSpec probe;
  GainSchedule gain;
  envs::LqrEvalOptions opts;
};

LqrSetup lqr_setup(const Config& c) {
  LqrSetup s;
  s.p = envs::LqrProblem::standard();
  const Vec K = c.vec("params.K"), K0 = c.vec("params.K0");
  if (K.size() != 2 || K0.size() != 2) throw ConfigError("params.K and params.K0 must have two entries");
  s.p.K = K.transpose();
  s.p.K0 = K0.transpose();
  const long long terms = c.integer("params.probe_terms");
  if (terms < 0) throw ConfigError("params.probe_terms must be nonnegative");
  s.probe = envs::lqr_probe(static_cast<int>(terms), c.num("params.probe_max_freq"),
                            c.num("params.probe_amplitude"), static_cast<std::uint64_t>(c.integer("params.seed")));
  s.gain = c.gain();
  s.opts.T = positive(c, "T");
  s.opts.h = positive(c, "h");
  s.opts.substeps = static_cast<int>(c.integer("params.substeps"));
  s.opts.matrix_gain = c.flag("params.matrix_gain");
  s.opts.burn_in_fraction = c.num("params.burn_in_fraction");
  return s;
}

void run_lqr_eval(RunContext& ctx) {
  auto s = lqr_setup(ctx.cfg);
  const auto ev = envs::lqr_policy_eval(s.p, s.p.K, s.probe, s.gain, s.opts);
  const Vec oracle = envs::q_oracle(s.p, s.p.K);
  Csv csv({"index", "estimate", "least_squares", "oracle"});
  for (int i = 0; i < 6; ++i) csv.row({static_cast<double>(i + 1), ev.theta[i], ev.theta_ls[i], oracle[i]});
  ctx.out.write_csv("theta.csv", csv);
  ctx.out.write_json(
      "summary.json",
      {{"theta", vec_json(ev.theta)},
       {"theta_ls", vec_json(ev.theta_ls)},
       {"oracle", vec_json(oracle)},
       {"max_rel_error", (ev.theta - oracle).cwiseQuotient(oracle).cwiseAbs().maxCoeff()},
       {"bellman_mse", ev.bellman_mse},
       {"bellman_mse_oracle", envs::lqr_bellman_error(s.p, s.p.K, s.probe, oracle, s.opts)}});
}

void run_lqr_pia(RunContext& ctx) {
  const auto& c = ctx.cfg;
  auto s = lqr_setup(c);
  const auto rounds = c.integer("params.rounds");
  if (rounds < 1) throw ConfigError("params.rounds must be at least 1");
  const auto pia = envs::lqr_pia(s.p, static_cast<int>(rounds), s.probe, s.gain, s.opts, c.num("params.tol"));
  const Mat Kstar = envs::kleinman(s.p, s.p.K);
  Csv csv({"round", "k1", "k2", "weighted_error"});
  json costs = json::array();
  for (std::size_t j = 0; j < pia.gains.size(); ++j) {
    const Mat& K = pia.gains[j];
    csv.row({static_cast<double>(j), K(0, 0), K(0, 1), (K - Kstar).norm() / Kstar.norm()});
    costs.push_back(envs::policy_cost(s.p, K));
  }
  ctx.out.write_csv("pia.csv", csv);
  ctx.out.write_json("summary.json", {{"K_star", vec_json(Kstar.row(0).transpose())},
                                      {"K_final", vec_json(pia.gains.back().row(0).transpose())},
                                      {"distance", (pia.gains.back() - Kstar).norm()},
                                      {"policy_costs", costs},
                                      {"optimal_cost", envs::policy_cost(s.p, Kstar)}});
}

// ---------------------------------------------------------------- mountain-car

void run_mountain_car(RunContext& ctx) {
  const auto& c = ctx.cfg;
  envs::MountainCarConfig m;
  m.episodes = c.integer("params.episodes");
  m.alpha = c.num("params.alpha");
  m.epsilon = c.num("params.epsilon");
  m.J_max = c.integer("params.J_max");
  m.loss_scale = c.num("params.loss_scale");
  m.theta0 = c.num("params.theta0");
  m.variant = variant_of(c, "params.variant");
  m.delta = c.num("params.delta");
  const auto res = envs::mountain_car_pg(m);
  Csv csv({"episode", "theta"});
  for (std::size_t n = 0; n < res.theta.size(); ++n) csv.row({static_cast<double>(n), res.theta[n]});
  ctx.out.write_csv("mountain_car.csv", csv);
  const auto [lo, hi] = std::minmax_element(res.theta.begin(), res.theta.end());
  json summary{{"theta_rp", res.theta_rp}, {"theta_min", *lo}, {"theta_max", *hi}};
  if (c.flag("params.scan")) {
    const auto rows = envs::threshold_scan(c.nums("params.scan_thetas"), c.integer("params.scan_states"), m.J_max,
                                           ctx.jobs);
    Csv scan({"theta", "average_cost"});
    for (const auto& r : rows) scan.row({r.theta, r.average_cost});
    ctx.out.write_csv("scan.csv", scan);
    const auto best = std::min_element(rows.begin(), rows.end(),
                                       [](const auto& a, const auto& b) { return a.average_cost < b.average_cost; });
    if (best != rows.end()) summary["scan_argmin"] = best->theta;
  }
  ctx.out.write_json("summary.json", summary);
}

// ---------------------------------------------------------------- poisson-check

void run_poisson_check(RunContext& ctx) {
  const auto& c = ctx.cfg;
  Lcg64 rng(static_cast<std::uint64_t>(c.integer("params.seed")));
  const auto omegas = c.nums("params.omegas");
  if (omegas.empty()) throw ConfigError("params.omegas is empty");
  const long long degree = c.integer("params.degree");
  const long long intervals = c.integer("params.intervals");
  const double h = positive(c, "params.h");
  if (degree < 1 || intervals < 1) throw ConfigError("params.degree and params.intervals must be positive");

  // Random power series on the torus: multi-indices in {0..degree}^K.
  FourierSeries a;
  MultiIndex n(omegas.size(), 0);
  while (true) {
    a.coeffs[n] = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
    std::size_t i = 0;
    while (i < n.size() && ++n[i] > degree) n[i++] = 0;
    if (i == n.size()) break;
  }
  const FourierSeries hat = poisson_fourier(a, omegas);
  const double w1 = *std::min_element(omegas.begin(), omegas.end());
  bool bound = true;
  for (const auto& [idx, coef] : hat.coeffs)
    if (std::abs(coef) > std::abs(a.coeffs.at(idx)) / w1 * (1 + 1e-12)) bound = false;

  const auto a0 = a.coeffs.at(MultiIndex(omegas.size(), 0));
  Csv csv({"interval", "t0", "t1", "gap"});
  double worst = 0.0;
  for (long long k = 0; k < intervals; ++k) {
    const double t0 = 20.0 * rng.uniform();
    const double t1 = t0 + 0.5 + 10.0 * rng.uniform();
    const auto steps = static_cast<long long>(std::ceil((t1 - t0) / h));
    const double dt = (t1 - t0) / static_cast<double>(steps);
    std::complex<double> integral = 0.0;
    for (long long s = 0; s <= steps; ++s) {
      const double w = (s == 0 || s == steps) ? 0.5 : 1.0;
      integral += w * dt * (fourier_eval(a, omegas, t0 + static_cast<double>(s) * dt) - a0);
    }
    const double gap = std::abs(fourier_eval(hat, omegas, t0) - integral - fourier_eval(hat, omegas, t1));
    worst = std::max(worst, gap);
    csv.row({static_cast<double>(k), t0, t1, gap});
  }
  ctx.out.write_csv("poisson.csv", csv);

  // Sawtooth route on g(z) = z.
  const long long grid = c.integer("params.sawtooth_grid");
  if (grid < 2) throw ConfigError("params.sawtooth_grid must be at least 2");
  const auto sp = poisson_sawtooth([](double z) { return z; }, static_cast<std::size_t>(grid));
  double saw = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double z = k / 200.0;
    saw = std::max(saw, std::abs(sp(z) - (-z * z / 2 + z / 2 - 1.0 / 12.0)));
  }
  ctx.out.write_json("summary.json", {{"max_identity_gap", worst},
                                      {"tolerance", 10 * h},
                                      {"coefficient_bound_holds", bound},
                                      {"sawtooth_gbar", sp.gbar},
                                      {"sawtooth_max_error", saw}});
}

// ---------------------------------------------------------------- schemas

constexpr const char* kCommonOptional = R"(
[gain]
cap = 1.0
)";

std::vector<Experiment> build_registry() {
  std::vector<Experiment> r;

  r.push_back({"qmc", "scalar QSA estimate of the mean of e^{4x} sin(100x) under a sawtooth probe; trial histograms",
               {R"(
experiment = "qmc"
out_dir = "out/qmc"
T = 100.0
h = 0.001
[params]
gains = [1.0, 2.0]
rho = 1.0
trials = 1000
init_spread = 3.1622776601683795
init = "quasi"
seed = 1
mc_samples = 10000
sampling = "right"
)",
                "", {"experiment", "T", "h"}},
               run_qmc});

  r.push_back({"rates", "fitted convergence rate of a scalar QSA instance (rates.csv, rate.json)",
               {R"(
experiment = "rates"
out_dir = "out/rates"
T = 10000.0
h = 0.001
max_samples = 100000
[gain]
kind = "power"
g = 1.0
rho = 0.7
[probe]
kind = "sinusoid"
terms = [{ v = [1.0], omega = 1.0, phi = 0.0 }]
[params]
instance = "multiplicative"
theta_star = 0.0
theta0 = 0.0
bins_per_decade = 20
)",
                std::string(kCommonOptional) + "[params]\nwindow = [1.0, 2.0]\n", {"experiment", "T", "h"}},
               run_rates});

  r.push_back({"linear-check", "constant-gain linear QSA: closed form against Euler at h and h/2",
               {R"(
experiment = "linear-check"
out_dir = "out/linear-check"
T = 50.0
h = 0.01
max_samples = 1000000
[gain]
kind = "constant"
g = 0.1
rho = 1.0
[probe]
kind = "sinusoid"
terms = [{ v = [1.0], omega = 1.0, phi = 0.1 }]
[params]
A = [[-1.0, 0.5], [-0.5, -2.0]]
B = [[1.0], [0.5]]
theta_star = [1.0, -1.0]
theta0 = [2.0, 0.0]
K = 5.0
)",
                kCommonOptional, {"experiment", "T", "h"}},
               run_linear_check});

  r.push_back({"rp-averaging", "Ruppert-Polyak averaged error against horizon, with Upsilon-bar and Y-bar",
               {R"(
experiment = "rp-averaging"
out_dir = "out/rp-averaging"
T = 10000.0
h = 0.001
max_samples = 1000000
[gain]
kind = "power"
g = 1.0
rho = 0.7
[probe]
kind = "torus"
terms = [{ omega = 1.0, phi = 0.0 }]
[params]
instance = "multiplicative"
mode = "ode"
K = 5.0
theta0 = 0.0
horizons = 41
upsilon_T = 6283.185307179586
upsilon_h = 0.001
)",
                kCommonOptional, {"experiment", "T", "h"}},
               run_rp_averaging});

  r.push_back({"qsgd", "gradient-free qSGD on a test loss, with an optional epsilon-bias sweep",
               {R"(
experiment = "qsgd"
out_dir = "out/qsgd"
T = 10000.0
h = 0.01
max_samples = 100000
[gain]
kind = "power"
g = 1.0
rho = 0.7
[probe]
kind = "sinusoid"
terms = [{ v = [1.4142135623730951], omega = 1.0, phi = 0.0 }]
[params]
loss = "asymmetric-quartic"
variant = "three"
epsilon = 0.1
theta0 = [0.5]
delta = 0.0
epsilons = [0.05, 0.1, 0.2]
)",
                std::string(kCommonOptional) + "[params]\nG = [[1.0]]\nbox_lo = [1.0]\nbox_hi = [1.0]\n",
                {"experiment", "T", "h"}},
               run_qsgd_experiment});

  r.push_back({"softmin", "qSGD on the four-well soft-min landscape",
               {R"(
experiment = "softmin"
out_dir = "out/softmin"
T = 50000.0
h = 1.0
max_samples = 100000
[gain]
kind = "power"
g = 1.0
rho = 0.9
cap = 0.001
[probe]
kind = "sinusoid"
terms = [{ v = [1.4142135623730951, 0.0], omega = 0.25, phi = 0.0 },
         { v = [0.0, 1.4142135623730951], omega = 0.1353352832366127, phi = 0.0 }]
[params]
variant = "one"
epsilon = 0.15
theta0 = [-2.0, -2.0]
projection = true
box_lo = [-3.0, -3.0]
box_hi = [3.0, 3.0]
)",
                "", {"experiment", "T", "h"}},
               run_softmin});

  const std::string lqr_common = R"(
T = 500.0
h = 0.01
[gain]
kind = "power"
g = 5.0
rho = 1.0
[params]
K = [-1.0, 0.0]
K0 = [-1.0, -2.0]
substeps = 10
matrix_gain = true
burn_in_fraction = 0.1
probe_terms = 24
probe_max_freq = 50.0
probe_amplitude = 1.0
seed = 1
)";
  r.push_back({"lqr-eval", "Q-function coefficients of a linear policy by QSA, against the Lyapunov oracle",
               {"experiment = \"lqr-eval\"\nout_dir = \"out/lqr-eval\"\n" + lqr_common, kCommonOptional,
                {"experiment", "T", "h"}},
               run_lqr_eval});
  r.push_back({"lqr-pia", "policy iteration with QSA policy evaluation, against the Riccati gain",
               {"experiment = \"lqr-pia\"\nout_dir = \"out/lqr-pia\"\n" + lqr_common + "rounds = 8\ntol = 0.0001\n",
                kCommonOptional, {"experiment", "T", "h"}},
               run_lqr_pia});

  r.push_back({"mountain-car", "episodic qSGD on the mountain-car threshold policy, plus a threshold scan",
               {R"(
experiment = "mountain-car"
out_dir = "out/mountain-car"
[params]
episodes = 10000
alpha = 0.1
epsilon = 0.05
J_max = 5000
loss_scale = 0.0
theta0 = -0.3
variant = "one"
delta = 1.0
scan = true
scan_states = 10000
scan_thetas = [-1.2, -1.1, -1.0, -0.9, -0.8, -0.7, -0.6, -0.5, -0.4, -0.3, -0.2, -0.1, 0.0]
)",
                "", {"experiment", "params.episodes"}},
               run_mountain_car});

  r.push_back({"poisson-check", "Poisson's equation: Fourier and sawtooth solutions against quadrature",
               {R"(
experiment = "poisson-check"
out_dir = "out/poisson-check"
[params]
seed = 7
omegas = [1.0, 1.9142135623730951]
degree = 4
intervals = 10
h = 0.001
sawtooth_grid = 1001
)",
                "", {"experiment"}},
               run_poisson_check});
  return r;
}

}  // namespace

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> r = build_registry();
  return r;
}

const Experiment* find_experiment(std::string_view name) {
  for (const auto& e : registry())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace qsa::cli
