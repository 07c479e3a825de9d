#include "qsa/linmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace qsa {
namespace {

constexpr int kMaxDim = 16;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_square(const Mat& A, const char* what) {
  if (A.rows() != A.cols() || A.rows() == 0) throw Error(std::string(what) + ": matrix must be square");
  if (A.rows() > kMaxDim) throw Error(std::string(what) + ": dimension above 16");
  if (!A.allFinite()) throw Error(std::string(what) + ": non-finite entries");
}

// Solves (alpha A - j w I) X = C for complex C = Cr + j Ci, via the real
// 2d x 2d system [[alpha A, w I], [-w I, alpha A]] [Xr; Xi] = [Cr; Ci].
// Returns Xi = Im X.
Mat shifted_solve_imag(const Mat& alphaA, double w, const Mat& Cr, const Mat& Ci) {
  const auto d = alphaA.rows();
  Mat big(2 * d, 2 * d);
  const Mat I = Mat::Identity(d, d);
  big << alphaA, w * I, -w * I, alphaA;
  Mat rhs(2 * d, Cr.cols());
  rhs << Cr, Ci;
  Eigen::FullPivLU<Mat> lu(big);
  if (!lu.isInvertible()) throw Error("alpha A - j omega I is singular");
  return lu.solve(rhs).bottomRows(d);
}

void check_closed_form_inputs(const LinearModel& m, const ProbeSpec& probe, double alpha,
                              const Vec& theta0) {
  m.validate();
  probe.validate();
  if (probe.kind != ProbeKind::SinusoidMixture) throw Error("closed form needs a sinusoid mixture probe");
  if (probe.dim() != m.B.cols()) throw Error("probe dimension does not match B");
  if (theta0.size() != m.A.rows()) throw Error("theta0 dimension mismatch");
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  if (!is_hurwitz(m.A)) throw Error("closed form needs a Hurwitz A");
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Mat& A) {
  check_square(A, "eigenvalues");
  Eigen::EigenSolver<Mat> solver(A, false);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue iteration did not converge");
  std::vector<std::complex<double>> out(solver.eigenvalues().data(),
                                        solver.eigenvalues().data() + A.rows());
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

bool is_hurwitz(const Mat& A) {
  const auto ev = eigenvalues(A);
  return std::all_of(ev.begin(), ev.end(), [](auto l) { return l.real() < -1e-10; });
}

Mat matrix_exponential(const Mat& A, double t) {
  check_square(A, "matrix_exponential");
  const Mat X = A * t;
  const double norm = X.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Mat S = X / std::ldexp(1.0, squarings);

  const auto d = A.rows();
  Mat result = Mat::Identity(d, d);
  Mat term = Mat::Identity(d, d);
  for (int k = 1; k <= 30; ++k) {
    term = term * S / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) {
    result = result * result;
    if (!result.allFinite()) throw Error("matrix exponential overflow");
  }
  if (!result.allFinite()) throw Error("matrix exponential overflow");
  return result;
}

Mat solve_lyapunov(const Mat& A, const Mat& Q) {
  check_square(A, "solve_lyapunov");
  if (Q.rows() != A.rows() || Q.cols() != A.cols()) throw Error("solve_lyapunov: Q dimension mismatch");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, Q.cwiseAbs().maxCoeff()))
    throw Error("solve_lyapunov: Q must be symmetric");
  if (!is_hurwitz(A)) throw Error("solve_lyapunov: A is not Hurwitz");
  const auto n = A.rows();
  // Column-major vec: vec(A^T P) = (I kron A^T) vec P, vec(P A) = (A^T kron I) vec P.
  Mat kron = Mat::Zero(n * n, n * n);
  const Mat At = A.transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      kron.block(i * n, i * n, n, n)(j, Eigen::all) += At.row(j);
      kron.block(i * n, j * n, n, n).diagonal().array() += At(i, j);
    }
  Vec rhs = -Eigen::Map<const Vec>(Q.data(), n * n);
  Eigen::FullPivLU<Mat> lu(kron);
  if (!lu.isInvertible()) throw Error("solve_lyapunov: singular Kronecker system");
  Vec p = lu.solve(rhs);
  Mat P = Eigen::Map<Mat>(p.data(), n, n);
  return 0.5 * (P + P.transpose());
}

void LinearModel::validate() const {
  check_square(A, "LinearModel");
  if (B.rows() != A.rows()) throw Error("LinearModel: B row count must match A");
  if (theta_star.size() != A.rows()) throw Error("LinearModel: theta_star dimension mismatch");
}

Vec LinearModel::field(const Vec& theta, const Vec& xi) const { return A * (theta - theta_star) + B * xi; }

Vec linear_qsa_closed_form(const LinearModel& m, const ProbeSpec& probe, double alpha,
                           const Vec& theta0, double t) {
  check_closed_form_inputs(m, probe, alpha, theta0);
  const auto d = m.A.rows();
  const Mat I = Mat::Identity(d, d);
  const Mat alphaA = alpha * m.A;
  const Mat E = matrix_exponential(alphaA, t);
  Vec out = E * (theta0 - m.theta_star);
  for (const auto& term : probe.terms) {
    const double c = kTwoPi * term.phi;
    const double x = term.omega * t + c;
    const Mat Cr = E * std::cos(c) - std::cos(x) * I;
    const Mat Ci = E * std::sin(c) - std::sin(x) * I;
    const Mat gamma = shifted_solve_imag(alphaA, term.omega, Cr, Ci);
    out += alpha * gamma * m.B * term.v;
  }
  return out;
}

Vec rp_closed_form(const LinearModel& m, const ProbeSpec& probe, double alpha, const Vec& theta0,
                   double T, double K) {
  check_closed_form_inputs(m, probe, alpha, theta0);
  if (!(K > 1.0)) throw Error("rp_closed_form needs K > 1");
  if (!(T > 0.0)) throw Error("rp_closed_form needs T > 0");
  const auto d = m.A.rows();
  const Mat I = Mat::Identity(d, d);
  const Mat alphaA = alpha * m.A;
  const double T0 = T - T / K;
  const double width = T - T0;
  const Mat S = alphaA.fullPivLu().solve(matrix_exponential(alphaA, T) - matrix_exponential(alphaA, T0));

  Vec out = m.theta_star + S * (theta0 - m.theta_star) / width;
  for (const auto& term : probe.terms) {
    const double w = term.omega;
    const double c = kTwoPi * term.phi;
    const double x1 = w * T + c, x0 = w * T0 + c;
    const Mat Cr = S * std::cos(c) - (std::sin(x1) - std::sin(x0)) / w * I;
    const Mat Ci = S * std::sin(c) + (std::cos(x1) - std::cos(x0)) / w * I;
    const Mat gamma = shifted_solve_imag(alphaA, w, Cr, Ci) / width;
    out += alpha * gamma * m.B * term.v;
  }
  return out;
}

Mat jacobian_theta(const VectorField& f, const Vec& theta, const Vec& xi) {
  const auto d = theta.size();
  const double eta = 1e-6 * std::max(1.0, theta.cwiseAbs().maxCoeff());
  Mat J(d, d);
  Vec tp = theta, tm = theta;
  for (Eigen::Index i = 0; i < d; ++i) {
    tp[i] += eta;
    tm[i] -= eta;
    J.col(i) = (f(tp, xi) - f(tm, xi)) / (2.0 * eta);
    tp[i] = theta[i];
    tm[i] = theta[i];
  }
  return J;
}

Vec upsilon_bar_numeric(const VectorField& f, const ProbeSpec& probe, const Vec& theta_star,
                        double T, double h) {
  probe.validate();
  if (!(h > 0.0) || !(T >= h)) throw Error("upsilon_bar_numeric needs 0 < h <= T");
  const auto n = static_cast<long long>(std::llround(T / h));
  const auto d = theta_star.size();
  Vec xi;

  Mat Abar = Mat::Zero(d, d);
  for (long long k = 0; k < n; ++k) {
    probe_eval(probe, static_cast<double>(k) * h, xi);
    Abar += jacobian_theta(f, theta_star, xi);
  }
  Abar /= static_cast<double>(n);

  Mat S = Mat::Zero(d, d);
  Vec sum = Vec::Zero(d);
  for (long long k = 0; k < n; ++k) {
    probe_eval(probe, static_cast<double>(k) * h, xi);
    const Mat A = jacobian_theta(f, theta_star, xi);
    const Vec fx = f(theta_star, xi);
    // Trapezoid for the running integral at the sample point.
    const Mat S_mid = S + 0.5 * h * (A - Abar);
    sum += S_mid * fx - 0.5 * h * (A - Abar) * fx;
    S += h * (A - Abar);
  }
  return sum / static_cast<double>(n);
}

Vec upsilon_bar_fourier(const VectorField& f, const ProbeSpec& probe, const Vec& theta_star,
                        int grid) {
  probe.validate();
  if (probe.kind != ProbeKind::SinusoidMixture && probe.kind != ProbeKind::TorusExponential)
    throw Error("Fourier route needs a sinusoid or torus probe");
  if (grid < 4 || grid % 2 != 0) throw Error("grid must be even and at least 4");
  const auto K = probe.terms.size();
  const auto d = theta_star.size();
  std::size_t points = 1;
  for (std::size_t i = 0; i < K; ++i) {
    points *= static_cast<std::size_t>(grid);
    if (points > (1u << 22)) throw Error("angle grid too large");
  }
  std::vector<double> omegas;
  for (const auto& term : probe.terms) omegas.push_back(term.omega);

  // Grid point g has angles x_i = 2 pi idx_i / N, idx in mixed radix.
  auto angles_of = [&](std::size_t g, std::vector<int>& idx, std::vector<double>& x) {
    for (std::size_t i = 0; i < K; ++i) {
      idx[i] = static_cast<int>(g % grid);
      g /= grid;
      x[i] = kTwoPi * idx[i] / grid;
    }
  };

  std::vector<Mat> A(points);
  std::vector<Vec> F(points);
  std::vector<int> idx(K);
  std::vector<double> x(K);
  Vec xi;
  for (std::size_t g = 0; g < points; ++g) {
    angles_of(g, idx, x);
    probe_eval_angles(probe, x, xi);
    A[g] = jacobian_theta(f, theta_star, xi);
    F[g] = f(theta_star, xi);
  }

  // Wave numbers n_i in (-N/2, N/2); the Nyquist index is dropped.
  std::vector<int> wave(K);
  auto wave_of = [&](std::size_t g) -> bool {
    for (std::size_t i = 0; i < K; ++i) {
      const int k = static_cast<int>(g % grid);
      g /= grid;
      if (k == grid / 2) return false;
      wave[i] = k < grid / 2 ? k : k - grid;
    }
    return true;
  };

  Vec result = Vec::Zero(d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      FourierSeries series;
      for (std::size_t m = 0; m < points; ++m) {
        if (!wave_of(m)) continue;
        std::complex<double> coef = 0.0;
        for (std::size_t g = 0; g < points; ++g) {
          angles_of(g, idx, x);
          double phase = 0.0;
          for (std::size_t i = 0; i < K; ++i) phase += wave[i] * x[i];
          coef += A[g](r, c) * std::polar(1.0, -phase);
        }
        coef /= static_cast<double>(points);
        if (std::abs(coef) > 1e-13) series.coeffs[wave] = coef;
      }
      const FourierSeries hat = poisson_fourier(series, omegas);
      // -mean over the grid of A_hat(x) f_c(x)
      for (std::size_t g = 0; g < points; ++g) {
        angles_of(g, idx, x);
        std::complex<double> value = 0.0;
        for (const auto& [n, a] : hat.coeffs) {
          double phase = 0.0;
          for (std::size_t i = 0; i < K; ++i) phase += n[i] * x[i];
          value += a * std::polar(1.0, phase);
        }
        result[r] -= value.real() * F[g][c] / static_cast<double>(points);
      }
    }
  }
  return result;
}

BiasVectors y_bar(const Mat& A_star, double rho, const Vec& upsilon_bar, double g) {
  check_square(A_star, "y_bar");
  if (upsilon_bar.size() != A_star.rows()) throw Error("y_bar: dimension mismatch");
  if (!(rho > 0.0 && rho <= 1.0)) throw Error("y_bar: rho must lie in (0, 1]");
  if (!(g > 0.0)) throw Error("y_bar: gain scale must be positive");
  const double r = (rho == 1.0) ? 1.0 / g : 0.0;
  const Mat M = A_star + r * Mat::Identity(A_star.rows(), A_star.cols());
  if (!is_hurwitz(M)) throw Error("rate theorem inapplicable: A* + r I is not Hurwitz");
  return {upsilon_bar, M.fullPivLu().solve(upsilon_bar), rho};
}

}  // namespace qsa
