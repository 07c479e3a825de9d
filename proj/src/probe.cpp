#include "qsa/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsa {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResonanceTol = 1e-12;

double frac(double x) { return x - std::floor(x); }

// frac with values in (0, 1]: the left limit of the sawtooth.
double frac_left(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return 1.0;
  return x - std::floor(x);
}

double floor_left(double t) {
  const double r = std::round(t);
  if (std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t))) return r - 1.0;
  return std::floor(t);
}

void check_time(double t) {
  if (!(t >= 0.0)) throw Error("probe evaluated at negative time");
}

}  // namespace

int ProbeSpec::dim() const {
  if (terms.empty()) return 0;
  if (kind == ProbeKind::TorusExponential) return 2 * static_cast<int>(terms.size());
  return static_cast<int>(terms.front().v.size());
}

void ProbeSpec::validate() const {
  if (terms.empty()) throw Error("empty probe");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& term = terms[i];
    if (!(term.omega > 0.0) || !std::isfinite(term.omega))
      throw Error("probe frequencies must be positive");
    if (!(term.phi >= 0.0 && term.phi < 1.0)) throw Error("probe phase must lie in [0, 1)");
    if (kind != ProbeKind::TorusExponential) {
      if (term.v.size() == 0) throw Error("probe amplitude vector is empty");
      if (term.v.size() != terms.front().v.size())
        throw Error("probe amplitude vectors differ in dimension");
      if (!term.v.allFinite()) throw Error("probe amplitude is not finite");
    }
    for (std::size_t j = 0; j < i; ++j)
      if (terms[j].omega == term.omega) throw Error("duplicate probe frequency");
  }
}

double term_angle(const ProbeTerm& term, double t) { return term.omega * t + kTwoPi * term.phi; }

void probe_eval(const ProbeSpec& spec, double t, Vec& out) {
  check_time(t);
  if (spec.terms.empty()) throw Error("empty probe");
  out.setZero(spec.dim());
  switch (spec.kind) {
    case ProbeKind::SinusoidMixture:
      for (const auto& term : spec.terms) out += term.v * std::sin(term_angle(term, t));
      break;
    case ProbeKind::SawtoothMixture:
      for (const auto& term : spec.terms) out += term.v * frac(term.phi + term.omega * t / kTwoPi);
      break;
    case ProbeKind::TorusExponential:
      for (std::size_t i = 0; i < spec.terms.size(); ++i) {
        const double x = term_angle(spec.terms[i], t);
        out[2 * i] = std::cos(x);
        out[2 * i + 1] = std::sin(x);
      }
      break;
    case ProbeKind::IrrationalRotation:
      for (const auto& term : spec.terms)
        out += term.v * frac(term.phi + term.omega * std::floor(t));
      break;
  }
}

Vec probe_eval(const ProbeSpec& spec, double t) {
  Vec out;
  probe_eval(spec, t, out);
  return out;
}

void probe_eval_left(const ProbeSpec& spec, double t, Vec& out) {
  switch (spec.kind) {
    case ProbeKind::SawtoothMixture:
      check_time(t);
      if (spec.terms.empty()) throw Error("empty probe");
      out.setZero(spec.dim());
      for (const auto& term : spec.terms)
        out += term.v * frac_left(term.phi + term.omega * t / kTwoPi);
      return;
    case ProbeKind::IrrationalRotation:
      check_time(t);
      if (spec.terms.empty()) throw Error("empty probe");
      out.setZero(spec.dim());
      for (const auto& term : spec.terms)
        out += term.v * frac(term.phi + term.omega * floor_left(t));
      return;
    default:
      probe_eval(spec, t, out);
  }
}

void probe_eval_angles(const ProbeSpec& spec, std::span<const double> angles, Vec& out) {
  if (angles.size() != spec.terms.size()) throw Error("angle count does not match probe terms");
  out.setZero(spec.dim());
  if (spec.kind == ProbeKind::SinusoidMixture) {
    for (std::size_t i = 0; i < angles.size(); ++i) out += spec.terms[i].v * std::sin(angles[i]);
  } else if (spec.kind == ProbeKind::TorusExponential) {
    for (std::size_t i = 0; i < angles.size(); ++i) {
      out[2 * i] = std::cos(angles[i]);
      out[2 * i + 1] = std::sin(angles[i]);
    }
  } else {
    throw Error("angle evaluation needs a sinusoid or torus probe");
  }
}

ProbeSpec make_normalized_probe(int d, std::span<const double> base_freqs) {
  if (d < 1) throw Error("probe dimension must be at least 1");
  if (base_freqs.size() != static_cast<std::size_t>(d))
    throw Error("need one base frequency per coordinate");
  for (int i = 0; i < d; ++i) {
    if (!(base_freqs[i] > 0.0)) throw Error("probe frequencies must be positive");
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const double wi = base_freqs[i], wj = base_freqs[j];
      if (std::abs(wi - wj) <= 1e-12 * std::max(wi, wj)) throw Error("duplicate probe frequency");
      if (std::abs(wi - 2.0 * wj) <= 1e-12 * wi) throw Error("harmonically colliding probe frequencies");
    }
  }
  ProbeSpec spec;
  spec.kind = ProbeKind::SinusoidMixture;
  for (int i = 0; i < d; ++i) {
    ProbeTerm term;
    term.v = Vec::Zero(d);
    term.v[i] = std::numbers::sqrt2;
    term.omega = base_freqs[i];
    spec.terms.push_back(std::move(term));
  }
  return spec;
}

ErgodicMoments ergodic_average(const std::function<Vec(double)>& signal, double T, double h) {
  if (!(T > 0.0) || !(h > 0.0) || h > T) throw Error("ergodic_average needs T > 0 and 0 < h <= T");
  const auto n = static_cast<long long>(std::llround(T / h));
  const double dt = T / static_cast<double>(n);
  Vec x = signal(0.0);
  Vec sum = 0.5 * x;
  Mat outer = 0.5 * x * x.transpose();
  for (long long k = 1; k <= n; ++k) {
    x = signal(static_cast<double>(k) * dt);
    const double w = (k == n) ? 0.5 : 1.0;
    sum += w * x;
    outer += w * x * x.transpose();
  }
  return {sum / static_cast<double>(n), outer / static_cast<double>(n)};
}

double quasi_uniform(double r, long long n) {
  if (n < 0) throw Error("quasi_uniform index must be non-negative");
  return frac(static_cast<double>(n) * r);
}

double SawtoothPoisson::operator()(double z) const {
  if (ghat.size() < 2) throw Error("empty Poisson table");
  z = std::clamp(z, 0.0, 1.0);
  const double pos = z * static_cast<double>(ghat.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(pos), ghat.size() - 2);
  const double s = pos - static_cast<double>(k);
  return ghat[k] + s * (ghat[k + 1] - ghat[k]);
}

SawtoothPoisson poisson_sawtooth(const std::function<double(double)>& g, std::size_t grid) {
  if (grid < 2) throw Error("Poisson grid needs at least 2 intervals");
  const double dz = 1.0 / static_cast<double>(grid);
  std::vector<double> gv(grid + 1);
  for (std::size_t k = 0; k <= grid; ++k) gv[k] = g(static_cast<double>(k) * dz);

  SawtoothPoisson out;
  for (std::size_t k = 0; k < grid; ++k) out.gbar += 0.5 * (gv[k] + gv[k + 1]) * dz;

  out.ghat.assign(grid + 1, 0.0);
  for (std::size_t k = 0; k < grid; ++k)
    out.ghat[k + 1] = out.ghat[k] - 0.5 * (gv[k] + gv[k + 1] - 2.0 * out.gbar) * dz;

  double mean = 0.0;
  for (std::size_t k = 0; k < grid; ++k) mean += 0.5 * (out.ghat[k] + out.ghat[k + 1]) * dz;
  for (auto& v : out.ghat) v -= mean;
  return out;
}

std::complex<double> fourier_eval(const FourierSeries& a, std::span<const double> omegas, double t) {
  std::complex<double> sum = 0.0;
  for (const auto& [n, c] : a.coeffs) {
    if (n.size() != omegas.size()) throw Error("multi-index length does not match frequencies");
    double lambda = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) lambda += n[i] * omegas[i];
    sum += c * std::polar(1.0, lambda * t);
  }
  return sum;
}

FourierSeries poisson_fourier(const FourierSeries& a, std::span<const double> omegas) {
  FourierSeries out;
  for (const auto& [n, c] : a.coeffs) {
    if (n.size() != omegas.size()) throw Error("multi-index length does not match frequencies");
    if (std::all_of(n.begin(), n.end(), [](int k) { return k == 0; })) continue;
    if (c == 0.0) continue;
    double lambda = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) lambda += n[i] * omegas[i];
    if (std::abs(lambda) < kResonanceTol) throw Error("resonant multi-index");
    out.coeffs[n] = c * std::complex<double>(0.0, 1.0) / lambda;
  }
  return out;
}

}  // namespace qsa
