#include "qsa/envs/lqr.hpp"

#include "qsa/linmodel.hpp"
#include "qsa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace qsa::envs {

LqrProblem LqrProblem::standard() {
  LqrProblem p;
  p.A = (Mat(2, 2) << 0.0, 1.0, 0.0, -0.1).finished();
  p.B = (Mat(2, 1) << 0.0, 1.0).finished();
  p.M = Mat::Identity(2, 2);
  p.R = Mat::Constant(1, 1, 10.0);
  p.K = (Mat(1, 2) << -1.0, 0.0).finished();
  p.K0 = (Mat(1, 2) << -1.0, -2.0).finished();
  return p;
}

void LqrProblem::validate() const {
  if (A.rows() != 2 || A.cols() != 2 || B.rows() != 2 || B.cols() != 1)
    throw Error("LQR: the quadratic basis needs two states and one input");
  if (M.rows() != 2 || M.cols() != 2 || R.rows() != 1 || R.cols() != 1) throw Error("LQR: cost dimension mismatch");
  if (K.rows() != 1 || K.cols() != 2 || K0.rows() != 1 || K0.cols() != 2) throw Error("LQR: gain must be 1 x 2");
  if (!(R(0, 0) > 0.0)) throw Error("LQR: R must be positive definite");
  if (Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (M + M.transpose())).eigenvalues().minCoeff() < -1e-12)
    throw Error("LQR: M must be positive semidefinite");
  if (!is_hurwitz(A + B * K0)) throw Error("LQR: behaviour gain K0 does not stabilize the plant");
}

Vec lqr_features(double x1, double x2, double u) {
  Vec psi(6);
  psi << x1 * x1, x2 * x2, x1 * x2, x1 * u, x2 * u, u * u;
  return psi;
}

Mat lqr_value_matrix(const LqrProblem& p, const Mat& K) {
  const Mat Acl = p.A + p.B * K;
  if (!is_hurwitz(Acl)) throw Error("LQR: policy does not stabilize the plant");
  return solve_lyapunov(Acl, p.M + K.transpose() * p.R * K);
}

Vec q_oracle(const LqrProblem& p, const Mat& K) {
  const Mat P = lqr_value_matrix(p, K);
  const Mat Hxx = p.M + P + p.A.transpose() * P + P * p.A;
  const Mat Hxu = P * p.B;
  Vec theta(6);
  theta << Hxx(0, 0), Hxx(1, 1), 2.0 * Hxx(0, 1), 2.0 * Hxu(0, 0), 2.0 * Hxu(1, 0), p.R(0, 0);
  return theta;
}

double policy_cost(const LqrProblem& p, const Mat& K) { return lqr_value_matrix(p, K).trace(); }

ProbeSpec lqr_probe(int terms, double max_freq, double amplitude, std::uint64_t seed) {
  if (terms < 0) throw Error("LQR probe: negative term count");
  if (!(max_freq > 0.0)) throw Error("LQR probe: max_freq must be positive");
  ProbeSpec spec;
  spec.kind = ProbeKind::SinusoidMixture;
  Lcg64 rng(seed);
  for (int i = 0; i < terms; ++i) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    const double phi = rng.uniform();
    spec.terms.push_back({Vec::Constant(1, amplitude), max_freq * u, phi});
  }
  return spec;
}

namespace {

// Walks the sampled closed loop and calls visit(t_k, zeta_k, b_k) once per interval.
template <class Visit>
void closed_loop(const LqrProblem& p, const Mat& K, const ProbeSpec& probe, const LqrEvalOptions& opts,
                 Visit&& visit) {
  p.validate();
  if (K.rows() != 1 || K.cols() != 2) throw Error("LQR: gain must be 1 x 2");
  if (!(opts.h > 0.0) || !(opts.T >= opts.h)) throw Error("LQR: need 0 < h <= T");
  if (opts.substeps < 1) throw Error("LQR: substeps must be at least 1");
  if (probe.dim() != 1) throw Error("LQR: probe must be scalar");

  const double h = opts.h;
  const double hs = h / opts.substeps;
  const auto n = static_cast<long long>(std::llround(opts.T / h));
  const double r = p.R(0, 0);
  auto cost = [&](const Eigen::Vector2d& x, double u) {
    return x.dot(p.M * x) + r * u * u;
  };
  const Eigen::Matrix2d A = p.A;
  const Eigen::Vector2d B = p.B.col(0);
  const Eigen::RowVector2d Kp = K.row(0);
  const Eigen::RowVector2d K0 = p.K0.row(0);

  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  Vec xi(1);
  for (long long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * h;
    probe_eval(probe, t, xi);
    const double u = K0.dot(x) + xi[0];
    Eigen::Vector2d y = x;
    for (int s = 0; s < opts.substeps; ++s) y += hs * (A * y + B * u);
    if (!y.allFinite()) throw Error("LQR: closed loop diverged");

    const Vec phi0 = lqr_features(x[0], x[1], Kp.dot(x));
    const Vec phi1 = lqr_features(y[0], y[1], Kp.dot(y));
    const Vec zeta = -0.5 * (lqr_features(x[0], x[1], u) + lqr_features(y[0], y[1], u)) +
                     0.5 * (phi0 + phi1) + (phi1 - phi0) / h;
    const double b = 0.5 * (cost(x, u) + cost(y, u));
    visit(t, zeta, b);
    x = y;
  }
}

Mat checked_inverse(const Mat& G) {
  const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(G).eigenvalues();
  if (!(ev.maxCoeff() > 0.0) || ev.minCoeff() <= 1e-12 * ev.maxCoeff()) throw Error("insufficient excitation");
  return G.inverse();
}

}  // namespace

LqrEvalResult lqr_policy_eval(const LqrProblem& p, const Mat& K, const ProbeSpec& probe,
                              const GainSchedule& gain, const LqrEvalOptions& opts) {
  gain.validate();
  if (!(opts.burn_in_fraction > 0.0 && opts.burn_in_fraction < 1.0))
    throw Error("LQR: burn-in fraction must lie in (0, 1)");
  const double TG = opts.matrix_gain ? opts.burn_in_fraction * opts.T : 0.0;

  Vec theta = Vec::Zero(6);
  Mat Mhat = Mat::Zero(6, 6), Gacc = Mat::Zero(6, 6), Ginv;
  Vec bhat = Vec::Zero(6);
  double bb = 0.0;
  long long count = 0, burn = 0;
  closed_loop(p, K, probe, opts, [&](double t, const Vec& zeta, double b) {
    Mhat.noalias() += zeta * zeta.transpose();
    bhat += b * zeta;
    bb += b * b;
    ++count;
    if (t < TG) {
      Gacc.noalias() += zeta * zeta.transpose();
      ++burn;
      return;
    }
    const Vec dir = zeta * zeta.dot(theta) + b * zeta;
    if (opts.matrix_gain) {
      if (Ginv.size() == 0) Ginv = checked_inverse(Gacc / static_cast<double>(burn));
      theta -= opts.h * gain_value(gain, t - TG) * (Ginv * dir);
    } else {
      theta -= opts.h * gain_value(gain, t) * dir;
    }
    if (!theta.allFinite()) throw Error("LQR: QSA estimate diverged");
  });

  LqrEvalResult res;
  Mhat /= static_cast<double>(count);
  bhat /= static_cast<double>(count);
  res.G_hat = opts.matrix_gain ? Mat(Gacc / static_cast<double>(burn)) : Mhat;
  res.theta_ls = -checked_inverse(Mhat) * bhat;
  res.theta = theta;
  // Expanded square; near the least-squares point the sum cancels to roundoff.
  res.bellman_mse =
      std::max(0.0, theta.dot(Mhat * theta) + 2.0 * theta.dot(bhat) + bb / static_cast<double>(count));
  return res;
}

double lqr_bellman_error(const LqrProblem& p, const Mat& K, const ProbeSpec& probe, const Vec& theta,
                         const LqrEvalOptions& opts) {
  if (theta.size() != 6) throw Error("LQR: theta must have 6 entries");
  double sum = 0.0;
  long long count = 0;
  closed_loop(p, K, probe, opts, [&](double, const Vec& zeta, double b) {
    const double e = theta.dot(zeta) + b;
    sum += e * e;
    ++count;
  });
  return sum / static_cast<double>(count);
}

Mat policy_from_q(const Vec& theta) {
  if (theta.size() != 6) throw Error("LQR: theta must have 6 entries");
  if (!(theta[5] > 0.0)) throw Error("LQR: fitted Q is not convex in u");
  Mat K(1, 2);
  K << -theta[3] / (2.0 * theta[5]), -theta[4] / (2.0 * theta[5]);
  return K;
}

PiaResult lqr_pia(const LqrProblem& p, int rounds, const ProbeSpec& probe, const GainSchedule& gain,
                  const LqrEvalOptions& opts, double tol) {
  p.validate();
  if (rounds < 1) throw Error("PIA needs at least one round");
  if (!is_hurwitz(p.A + p.B * p.K)) throw Error("PIA: initial policy is not stabilizing");
  PiaResult out;
  out.gains.push_back(p.K);
  for (int j = 1; j <= rounds; ++j) {
    const LqrEvalResult ev = lqr_policy_eval(p, out.gains.back(), probe, gain, opts);
    out.thetas.push_back(ev.theta);
    const Mat next = policy_from_q(ev.theta);
    if (!is_hurwitz(p.A + p.B * next))
      throw Error("PIA: destabilizing policy update at round " + std::to_string(j));
    const double step = (next - out.gains.back()).norm();
    out.gains.push_back(next);
    if (step <= tol) break;
  }
  return out;
}

Mat kleinman(const LqrProblem& p, const Mat& K_init, int max_iter, double tol) {
  p.validate();
  Mat K = K_init;
  const Mat Rinv = p.R.inverse();
  for (int i = 0; i < max_iter; ++i) {
    const Mat P = lqr_value_matrix(p, K);
    const Mat next = -Rinv * p.B.transpose() * P;
    const double step = (next - K).norm();
    K = next;
    if (step <= tol) break;
  }
  return K;
}

}  // namespace qsa::envs
