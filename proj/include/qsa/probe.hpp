#pragma once

#include "qsa/core.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace qsa {

enum class ProbeKind { SinusoidMixture, SawtoothMixture, TorusExponential, IrrationalRotation };

// omega is an angular rate (rad per unit time) for the sinusoid, sawtooth and
// torus kinds; phi is a phase in cycles, in [0, 1).
//   SinusoidMixture:    sum_i v_i sin(omega_i t + 2 pi phi_i)
//   SawtoothMixture:    sum_i v_i frac(phi_i + omega_i t / (2 pi))
//   TorusExponential:   (cos x_1, sin x_1, ..., cos x_K, sin x_K), x_i = omega_i t + 2 pi phi_i
//   IrrationalRotation: sum_i v_i frac(phi_i + omega_i floor(t)); omega is the rotation number
struct ProbeTerm {
  Vec v;
  double omega = 1.0;
  double phi = 0.0;
};

struct ProbeSpec {
  ProbeKind kind = ProbeKind::SinusoidMixture;
  std::vector<ProbeTerm> terms;

  int dim() const;
  void validate() const;
};

Vec probe_eval(const ProbeSpec& spec, double t);
void probe_eval(const ProbeSpec& spec, double t, Vec& out);

// Left limit at t. Differs from probe_eval only at the jumps of the sawtooth
// and rotation kinds, where the sawtooth takes the value 1 instead of 0.
void probe_eval_left(const ProbeSpec& spec, double t, Vec& out);

// Evaluates a sinusoid or torus probe at explicit angles x_i (one per term).
void probe_eval_angles(const ProbeSpec& spec, std::span<const double> angles, Vec& out);

// Angle of term i at time t: omega_i t + 2 pi phi_i.
double term_angle(const ProbeTerm& term, double t);

ProbeSpec make_normalized_probe(int d, std::span<const double> base_freqs);

struct ErgodicMoments {
  Vec mean;
  Mat second_moment;
};

ErgodicMoments ergodic_average(const std::function<Vec(double)>& signal, double T, double h);

double quasi_uniform(double r, long long n);

// Tabulated solution of Poisson's equation for the unit sawtooth probe.
struct SawtoothPoisson {
  double gbar = 0.0;
  std::vector<double> ghat;  // values on the uniform grid z_k = k / (size - 1)

  double operator()(double z) const;
};

SawtoothPoisson poisson_sawtooth(const std::function<double(double)>& g, std::size_t grid);

using MultiIndex = std::vector<int>;

struct FourierSeries {
  std::map<MultiIndex, std::complex<double>> coeffs;
};

// sum_n a_n exp(j (n . omega) t)
std::complex<double> fourier_eval(const FourierSeries& a, std::span<const double> omegas, double t);

FourierSeries poisson_fourier(const FourierSeries& a, std::span<const double> omegas);

}  // namespace qsa
