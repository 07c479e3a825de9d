#include "qsa/gain.hpp"

#include <algorithm>
#include <cmath>

namespace qsa {
namespace {

void check_time(double t) {
  if (!(t >= 0.0)) throw Error("gain evaluated at negative time");
}

}  // namespace

void GainSchedule::validate() const {
  if (!(g > 0.0) || !std::isfinite(g)) throw Error("gain scale g must be positive");
  if (kind == GainKind::Power && !(rho > 0.0 && rho <= 1.0))
    throw Error("gain exponent rho must lie in (0, 1]");
  if (cap && !(*cap > 0.0)) throw Error("gain cap must be positive");
}

double gain_value(const GainSchedule& s, double t) {
  check_time(t);
  if (s.kind == GainKind::Constant) return s.g;
  const double a = s.g / std::pow(1.0 + t, s.rho);
  return s.cap ? std::min(*s.cap, a) : a;
}

double gain_integral(const GainSchedule& s, double t) {
  check_time(t);
  if (s.kind == GainKind::Constant) return s.g * t;
  if (s.cap) throw Error("no closed form for a capped gain integral");
  if (s.rho == 1.0) return s.g * std::log1p(t);
  return s.g * (std::pow(1.0 + t, 1.0 - s.rho) - 1.0) / (1.0 - s.rho);
}

double gain_integral_numeric(const GainSchedule& s, double t, double h) {
  check_time(t);
  if (!(h > 0.0)) throw Error("step must be positive");
  if (t == 0.0) return 0.0;
  const auto n = std::max<long long>(1, static_cast<long long>(std::ceil(t / h)));
  const double dt = t / static_cast<double>(n);
  double sum = 0.5 * (gain_value(s, 0.0) + gain_value(s, t));
  for (long long k = 1; k < n; ++k) sum += gain_value(s, static_cast<double>(k) * dt);
  return sum * dt;
}

double gain_log_derivative(const GainSchedule& s, double t) {
  check_time(t);
  if (s.kind == GainKind::Constant) return 0.0;
  if (s.cap && s.g / std::pow(1.0 + t, s.rho) > *s.cap) return 0.0;
  return s.rho / (1.0 + t);
}

}  // namespace qsa
