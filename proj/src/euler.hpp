#pragma once

// Shared fixed-step loop for the Euler integrators.

#include "qsa/qsa.hpp"

#include <algorithm>
#include <cmath>

namespace qsa::detail {

inline long long step_count(double span, double h) {
  if (!(h > 0.0)) throw Error("step h must be positive");
  if (!(span >= h * (1.0 - 1e-9))) throw Error("horizon must be at least one step");
  return std::max<long long>(1, static_cast<long long>(std::ceil(span / h - 1e-9)));
}

// step(theta, k, t_k) advances theta in place by one Euler step.
template <class Step>
Trajectory euler_loop(Vec theta, double t0, double span, double h, const IntegrateOptions& opts,
                      Step&& step) {
  long long n = step_count(span, h);
  const auto cap = static_cast<long long>(std::max<std::size_t>(opts.max_samples, 2));
  const long long stride = std::max<long long>(1, (n + cap - 2) / (cap - 1));
  n = ((n + stride - 1) / stride) * stride;

  Trajectory traj(t0, h * static_cast<double>(stride), static_cast<int>(theta.size()));
  traj.push(theta);
  for (long long k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    step(theta, k, t);
    if (!theta.allFinite() || theta.norm() > opts.blowup)
      throw DivergenceError(t0 + static_cast<double>(k + 1) * h, traj);
    if ((k + 1) % stride == 0) traj.push(theta);
  }
  return traj;
}

}  // namespace qsa::detail
