#include "qsa/qsa.hpp"

#include <string>

#include "euler.hpp"

namespace qsa {

Trajectory::Trajectory(double t0, double h, int dim) : t0_(t0), h_(h), dim_(dim) {
  if (dim < 1) throw Error("trajectory dimension must be positive");
}

Eigen::Map<const Vec> Trajectory::state(std::size_t k) const {
  if (k >= size()) throw Error("trajectory index out of range");
  return Eigen::Map<const Vec>(values_.data() + k * dim_, dim_);
}

Vec Trajectory::back() const {
  if (empty()) throw Error("empty trajectory");
  return state(size() - 1);
}

void Trajectory::push(const Vec& x) {
  if (x.size() != dim_) throw Error("state dimension mismatch");
  values_.insert(values_.end(), x.data(), x.data() + dim_);
}

DivergenceError::DivergenceError(double t, Trajectory partial)
    : Error("diverged at t=" + std::to_string(t)), t_(t), partial_(std::move(partial)) {}

Trajectory integrate_qsa(const VectorField& f, const ProbeSpec& probe, const GainSchedule& gain,
                         const Vec& theta0, double T, double h, const IntegrateOptions& opts) {
  probe.validate();
  gain.validate();
  Vec xi;
  return detail::euler_loop(theta0, 0.0, T, h, opts, [&](Vec& theta, long long k, double t) {
    if (opts.sampling == ProbeSampling::Left)
      probe_eval(probe, t, xi);
    else
      probe_eval_left(probe, static_cast<double>(k + 1) * h, xi);
    const Vec dtheta = f(theta, xi);
    if (dtheta.size() != theta.size()) throw Error("vector field dimension mismatch");
    theta += (h * gain_value(gain, t)) * dtheta;
  });
}

Trajectory integrate_mean_flow(const MeanField& fbar, const GainSchedule& gain, const Vec& theta0,
                               double t0, double T, double h, const IntegrateOptions& opts) {
  gain.validate();
  if (!(t0 >= 0.0)) throw Error("start time must be non-negative");
  return detail::euler_loop(theta0, t0, T - t0, h, opts, [&](Vec& theta, long long, double t) {
    theta += (h * gain_value(gain, t)) * fbar(theta);
  });
}

Trajectory integrate_autonomous(const MeanField& fbar, const Vec& theta0, double T, double h,
                                const IntegrateOptions& opts) {
  return detail::euler_loop(theta0, 0.0, T, h, opts,
                            [&](Vec& theta, long long, double) { theta += h * fbar(theta); });
}

Vec ode_at_infinity(const MeanField& fbar, const Vec& theta, double r) {
  if (!(r > 0.0)) throw Error("scale r must be positive");
  return fbar(r * theta) / r;
}

}  // namespace qsa
