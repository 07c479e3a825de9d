#pragma once

#include "qsa/gain.hpp"
#include "qsa/probe.hpp"

#include <cstdint>
#include <vector>

namespace qsa::envs {

// dx/dt = A x + B u, cost c(x,u) = x^T M x + u^T R u. Behaviour input u = K0 x + xi.
// Two states and one input, to match the quadratic feature basis below.
struct LqrProblem {
  Mat A;
  Mat B;
  Mat M;
  Mat R;
  Mat K;
  Mat K0;

  // Double integrator with friction 0.1, M = I, R = 10, K = [-1, 0], K0 = [-1, -2].
  static LqrProblem standard();

  void validate() const;
};

// psi(x, u) = (x1^2, x2^2, x1 x2, x1 u, x2 u, u^2)
Vec lqr_features(double x1, double x2, double u);

// P with (A+BK)^T P + P(A+BK) + M + K^T R K = 0.
Mat lqr_value_matrix(const LqrProblem& p, const Mat& K);

// Coefficients of Q(x,u) = c(x,u) + x^T P x + 2 x^T P (Ax + Bu) in the feature basis.
Vec q_oracle(const LqrProblem& p, const Mat& K);

// Average cost over x0 ~ N(0, I): trace P.
double policy_cost(const LqrProblem& p, const Mat& K);

// Sum of `terms` unit sinusoids, frequencies uniform in (0, max_freq), phases uniform in [0, 1).
ProbeSpec lqr_probe(int terms, double max_freq, double amplitude, std::uint64_t seed);

struct LqrEvalOptions {
  double T = 500.0;
  double h = 0.01;
  int substeps = 10;
  bool matrix_gain = true;
  double burn_in_fraction = 0.1;
};

struct LqrEvalResult {
  Vec theta;     // QSA estimate
  Vec theta_ls;  // least-squares solution -Mhat^-1 bhat
  Mat G_hat;     // mean of zeta zeta^T over the run
  double bellman_mse = 0.0;  // mean of (theta^T zeta + b)^2 at theta
};

// Runs the closed loop and the QSA recursion d/dt theta = -a_t [zeta zeta^T theta + b zeta],
// optionally preconditioned by G_hat^-1 after a burn-in.
LqrEvalResult lqr_policy_eval(const LqrProblem& p, const Mat& K, const ProbeSpec& probe,
                              const GainSchedule& gain, const LqrEvalOptions& opts = {});

// Empirical mean-square Bellman error of theta along the same closed loop.
double lqr_bellman_error(const LqrProblem& p, const Mat& K, const ProbeSpec& probe, const Vec& theta,
                         const LqrEvalOptions& opts = {});

// argmin_u of the fitted Q: u = -(theta_4 x1 + theta_5 x2) / (2 theta_6).
Mat policy_from_q(const Vec& theta);

struct PiaResult {
  std::vector<Mat> gains;   // K_0 .. K_final
  std::vector<Vec> thetas;  // estimate for each evaluated policy
};

PiaResult lqr_pia(const LqrProblem& p, int rounds, const ProbeSpec& probe, const GainSchedule& gain,
                  const LqrEvalOptions& opts = {}, double tol = 1e-4);

// Model-based Newton iteration on the Riccati equation from a stabilizing K.
Mat kleinman(const LqrProblem& p, const Mat& K_init, int max_iter = 100, double tol = 1e-12);

}  // namespace qsa::envs
