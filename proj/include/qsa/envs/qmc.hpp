#pragma once

#include "qsa/qsa.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qsa::envs {

// y(x) = e^{4x} sin(100x)
double qmc_target(double x);

// int_0^1 y(x) dx in closed form.
double qmc_exact_mean();

enum class InitMode { QuasiNormal, SeededNormal };

// QuasiNormal: spread * Phi^-1(frac((i+1) r)), r the golden-ratio conjugate.
// SeededNormal: spread * N(0,1) draws from the 64-bit LCG.
std::vector<double> qmc_initial_conditions(std::size_t n, double spread, InitMode mode,
                                           std::uint64_t seed);

// Unit-period sawtooth on [0, 1).
ProbeSpec qmc_probe();

// Final state of d/dt theta = a_t [y(xi_t) - theta] under Euler.
double qmc_trial(const GainSchedule& gain, double theta0, double T, double h, ProbeSampling sampling);

struct QmcConfig {
  std::vector<double> gains{1.0, 2.0};
  double rho = 1.0;
  double T = 100.0;
  double h = 1e-3;
  std::size_t trials = 1000;
  double init_spread = 3.1622776601683795;  // sqrt(10)
  InitMode init = InitMode::QuasiNormal;
  std::uint64_t seed = 1;
  std::size_t mc_samples = 0;  // 0 skips the Monte Carlo baseline
  ProbeSampling sampling = ProbeSampling::Right;
  unsigned jobs = 1;
};

struct QmcSummary {
  double gain = 0.0;
  std::vector<double> estimates;
  double median = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

QmcSummary summarize(double gain, std::vector<double> estimates);

struct QmcResult {
  std::vector<QmcSummary> by_gain;
  std::optional<QmcSummary> monte_carlo;
};

QmcResult qmc_experiment(const QmcConfig& cfg);

}  // namespace qsa::envs
