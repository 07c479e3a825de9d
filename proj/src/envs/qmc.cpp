#include "qsa/envs/qmc.hpp"

#include "qsa/parallel.hpp"
#include "qsa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

namespace qsa::envs {

double qmc_target(double x) { return std::exp(4.0 * x) * std::sin(100.0 * x); }

double qmc_exact_mean() {
  const std::complex<double> s(4.0, 100.0);
  return ((std::exp(s) - 1.0) / s).imag();
}

std::vector<double> qmc_initial_conditions(std::size_t n, double spread, InitMode mode,
                                           std::uint64_t seed) {
  std::vector<double> out(n);
  if (mode == InitMode::QuasiNormal) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    const boost::math::normal_distribution<double> normal;
    for (std::size_t i = 0; i < n; ++i) {
      double u = quasi_uniform(r, static_cast<long long>(i) + 1);
      u = std::clamp(u, 1e-15, 1.0 - 1e-15);
      out[i] = spread * boost::math::quantile(normal, u);
    }
  } else {
    Lcg64 rng(seed);
    for (auto& x : out) x = spread * rng.normal();
  }
  return out;
}

ProbeSpec qmc_probe() {
  ProbeSpec spec;
  spec.kind = ProbeKind::SawtoothMixture;
  spec.terms.push_back({Vec::Ones(1), 2.0 * std::numbers::pi, 0.0});
  return spec;
}

double qmc_trial(const GainSchedule& gain, double theta0, double T, double h, ProbeSampling sampling) {
  gain.validate();
  if (!(h > 0.0) || !(T >= h)) throw Error("qmc_trial needs 0 < h <= T");
  const ProbeSpec probe = qmc_probe();
  const auto n = static_cast<long long>(std::llround(T / h));
  Vec xi(1);
  double theta = theta0;
  for (long long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * h;
    if (sampling == ProbeSampling::Right)
      probe_eval_left(probe, static_cast<double>(k + 1) * h, xi);
    else
      probe_eval(probe, t, xi);
    theta += h * gain_value(gain, t) * (qmc_target(xi[0]) - theta);
  }
  return theta;
}

QmcSummary summarize(double gain, std::vector<double> estimates) {
  if (estimates.empty()) throw Error("no estimates to summarize");
  QmcSummary s;
  s.gain = gain;
  std::vector<double> sorted = estimates;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  double sum = 0.0;
  for (double x : estimates) sum += x;
  s.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : estimates) ss += (x - s.mean) * (x - s.mean);
  s.variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  s.estimates = std::move(estimates);
  return s;
}

QmcResult qmc_experiment(const QmcConfig& cfg) {
  if (cfg.trials < 1) throw Error("trials must be at least 1");
  if (cfg.gains.empty()) throw Error("no gains given");
  const auto inits = qmc_initial_conditions(cfg.trials, cfg.init_spread, cfg.init, cfg.seed);

  QmcResult result;
  for (double g : cfg.gains) {
    const GainSchedule gain{GainKind::Power, g, cfg.rho, std::nullopt};
    gain.validate();
    std::vector<double> est(cfg.trials);
    parallel_for(cfg.trials, cfg.jobs, [&](std::size_t i) {
      est[i] = qmc_trial(gain, inits[i], cfg.T, cfg.h, cfg.sampling);
    });
    result.by_gain.push_back(summarize(g, std::move(est)));
  }

  if (cfg.mc_samples > 0) {
    std::vector<double> est(cfg.trials);
    parallel_for(cfg.trials, cfg.jobs, [&](std::size_t i) {
      Lcg64 rng(cfg.seed + 0x9E3779B97F4A7C15ULL * (i + 1));
      double sum = 0.0;
      for (std::size_t k = 0; k < cfg.mc_samples; ++k) sum += qmc_target(rng.uniform());
      est[i] = sum / static_cast<double>(cfg.mc_samples);
    });
    result.monte_carlo = summarize(0.0, std::move(est));
  }
  return result;
}

}  // namespace qsa::envs
