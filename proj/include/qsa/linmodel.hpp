#pragma once

#include "qsa/core.hpp"
#include "qsa/probe.hpp"
#include "qsa/qsa.hpp"

#include <complex>
#include <vector>

namespace qsa {

std::vector<std::complex<double>> eigenvalues(const Mat& A);
bool is_hurwitz(const Mat& A);
Mat matrix_exponential(const Mat& A, double t);

// Solves A^T P + P A + Q = 0.
Mat solve_lyapunov(const Mat& A, const Mat& Q);

// f(theta, xi) = A (theta - theta_star) + B xi
struct LinearModel {
  Mat A;
  Mat B;
  Vec theta_star;

  void validate() const;
  Vec field(const Vec& theta, const Vec& xi) const;
};

// Error theta_t - theta_star of the constant-gain recursion d/dt theta = alpha f(theta, xi_t)
// under a sinusoid mixture probe.
Vec linear_qsa_closed_form(const LinearModel& m, const ProbeSpec& probe, double alpha,
                           const Vec& theta0, double t);

// Windowed average of the same solution over [T - T/K, T] (absolute, not error).
Vec rp_closed_form(const LinearModel& m, const ProbeSpec& probe, double alpha, const Vec& theta0,
                   double T, double K);

// d x d Jacobian of f in theta, by central differences.
Mat jacobian_theta(const VectorField& f, const Vec& theta, const Vec& xi);

// Time average over [0, T] of Upsilon_t = (int_0^t [A(xi_s) - Abar] ds) f(theta*, xi_t),
// with A = d/dtheta f(theta*, .).
Vec upsilon_bar_numeric(const VectorField& f, const ProbeSpec& probe, const Vec& theta_star,
                        double T, double h);

// Same quantity as -int A_hat f dpi, on an N^K grid of probe angles, with A_hat
// from poisson_fourier. Needs a sinusoid or torus probe with independent frequencies.
Vec upsilon_bar_fourier(const VectorField& f, const ProbeSpec& probe, const Vec& theta_star,
                        int grid = 64);

struct BiasVectors {
  Vec upsilon_bar;
  Vec y_bar;
  double rho_used = 0.0;
};

// Y_bar = (A* + r I)^{-1} Upsilon_bar with r = 1/g when rho = 1 and 0 otherwise.
BiasVectors y_bar(const Mat& A_star, double rho, const Vec& upsilon_bar, double g = 1.0);

}  // namespace qsa
