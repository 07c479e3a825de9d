#include <cmath>

#include "qsa/qsa.hpp"

namespace qsa {

Eigen::Map<const Vec> ScaledErrorSeries::value(std::size_t k) const {
  if (k >= size()) throw Error("scaled error index out of range");
  return Eigen::Map<const Vec>(values.data() + k * dim, dim);
}

ScaledErrorSeries scaled_error(const Trajectory& traj, const Vec& theta_star, const GainSchedule& gain) {
  if (theta_star.size() != traj.dim()) throw Error("reference dimension mismatch");
  ScaledErrorSeries out;
  out.dim = traj.dim();
  out.reference_point = theta_star;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.time(k);
    const Vec z = (traj.state(k) - theta_star) / gain_value(gain, t);
    out.times.push_back(t);
    out.values.insert(out.values.end(), z.data(), z.data() + z.size());
  }
  return out;
}

ScaledErrorSeries scaled_error(const Trajectory& traj, const Trajectory& ref, const GainSchedule& gain) {
  if (ref.size() != traj.size() || ref.dim() != traj.dim()) throw Error("mismatched trajectory lengths");
  if (std::abs(ref.t0() - traj.t0()) > 1e-12 || std::abs(ref.h() - traj.h()) > 1e-12 * traj.h())
    throw Error("mismatched trajectory sampling");
  ScaledErrorSeries out;
  out.dim = traj.dim();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.time(k);
    const Vec z = (traj.state(k) - ref.state(k)) / gain_value(gain, t);
    out.times.push_back(t);
    out.values.insert(out.values.end(), z.data(), z.data() + z.size());
  }
  return out;
}

Trajectory rp_average(const Trajectory& traj, const RpMode& mode) {
  if (traj.size() < 2) throw Error("trajectory shorter than the averaging window");
  const double dt = traj.h();
  Trajectory out(traj.t0(), dt, traj.dim());

  if (mode.kind == RpMode::Kind::OdeForm) {
    Vec rp = traj.state(0);
    out.push(rp);
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      rp += dt * (traj.state(k) - rp) / (1.0 + traj.time(k));
      out.push(rp);
    }
    return out;
  }

  if (!(mode.K > 1.0)) throw Error("windowed averaging needs K > 1");
  // prefix[k] = int_{t0}^{t_k} of the piecewise-linear interpolant.
  std::vector<Vec> prefix(traj.size(), Vec::Zero(traj.dim()));
  for (std::size_t k = 1; k < traj.size(); ++k)
    prefix[k] = prefix[k - 1] + 0.5 * dt * (traj.state(k - 1) + traj.state(k));

  auto integral_to = [&](double s) -> Vec {
    const double pos = (s - traj.t0()) / dt;
    if (pos <= 0.0) return Vec::Zero(traj.dim());
    auto j = static_cast<std::size_t>(std::floor(pos));
    if (j >= traj.size() - 1) return prefix.back();
    const double frac = pos - static_cast<double>(j);
    const Vec x0 = traj.state(j);
    const Vec x1 = traj.state(j + 1);
    return prefix[j] + dt * (frac * x0 + 0.5 * frac * frac * (x1 - x0));
  };

  out.push(traj.state(0));
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double T = traj.time(k);
    const double T0 = std::max(traj.t0(), T - T / mode.K);
    out.push((prefix[k] - integral_to(T0)) / (T - T0));
  }
  return out;
}

}  // namespace qsa
