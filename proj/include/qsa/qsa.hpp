#pragma once

#include "qsa/core.hpp"
#include "qsa/gain.hpp"
#include "qsa/probe.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qsa {

using VectorField = std::function<Vec(const Vec& theta, const Vec& xi)>;
using MeanField = std::function<Vec(const Vec& theta)>;

// Uniformly sampled states: state k is at time t0 + k * h.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(double t0, double h, int dim);

  double t0() const { return t0_; }
  double h() const { return h_; }
  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  bool empty() const { return size() == 0; }

  double time(std::size_t k) const { return t0_ + static_cast<double>(k) * h_; }
  double end_time() const { return time(size() - 1); }
  Eigen::Map<const Vec> state(std::size_t k) const;
  Vec back() const;

  void push(const Vec& x);

 private:
  double t0_ = 0.0;
  double h_ = 0.0;
  int dim_ = 0;
  std::vector<double> values_;
};

// Which probe sample an Euler step uses: xi(t_k) (Left), or the left limit
// xi(t_{k+1}-) (Right, the indexing theta_{k+1} = theta_k + alpha f(theta_k, xi_{k+1})).
enum class ProbeSampling { Left, Right };

struct IntegrateOptions {
  std::size_t max_samples = 1'000'000;
  ProbeSampling sampling = ProbeSampling::Left;
  double blowup = 1e12;
};

class DivergenceError : public Error {
 public:
  DivergenceError(double t, Trajectory partial);
  double time() const { return t_; }
  const Trajectory& partial() const { return partial_; }

 private:
  double t_;
  Trajectory partial_;
};

Trajectory integrate_qsa(const VectorField& f, const ProbeSpec& probe, const GainSchedule& gain,
                         const Vec& theta0, double T, double h, const IntegrateOptions& opts = {});

Trajectory integrate_mean_flow(const MeanField& fbar, const GainSchedule& gain, const Vec& theta0,
                               double t0, double T, double h, const IntegrateOptions& opts = {});

Trajectory integrate_autonomous(const MeanField& fbar, const Vec& theta0, double T, double h,
                                const IntegrateOptions& opts = {});

struct ScaledErrorSeries {
  std::vector<double> times;
  int dim = 0;
  std::vector<double> values;          // row-major, dim per sample
  std::optional<Vec> reference_point;  // set when the reference was a fixed theta*

  std::size_t size() const { return times.size(); }
  Eigen::Map<const Vec> value(std::size_t k) const;
};

ScaledErrorSeries scaled_error(const Trajectory& traj, const Vec& theta_star, const GainSchedule& gain);
ScaledErrorSeries scaled_error(const Trajectory& traj, const Trajectory& ref, const GainSchedule& gain);

struct RpMode {
  enum class Kind { Windowed, OdeForm };
  Kind kind = Kind::Windowed;
  double K = 5.0;

  static RpMode windowed(double K) { return {Kind::Windowed, K}; }
  static RpMode ode_form() { return {Kind::OdeForm, 0.0}; }
};

Trajectory rp_average(const Trajectory& traj, const RpMode& mode);

struct RateFit {
  double rho_hat = 0.0;
  double intercept = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual = 0.0;
  std::size_t samples = 0;
};

// Least-squares fit of log e against log t. Default window: [t_max/100, t_max].
RateFit estimate_rate(std::span<const double> t, std::span<const double> err,
                      std::optional<std::pair<double, double>> window = std::nullopt);

std::vector<double> error_norms(const Trajectory& traj, const Vec& theta_star);

// Max of |e| over log-spaced bins of [t_lo, t_hi]; abscissa is the bin's left
// edge. Empty bins are skipped. Used to fit the limsup rate of oscillating errors.
std::pair<std::vector<double>, std::vector<double>> log_binned_envelope(
    std::span<const double> t, std::span<const double> err, double t_lo, double t_hi,
    int bins_per_decade);

Vec ode_at_infinity(const MeanField& fbar, const Vec& theta, double r);

}  // namespace qsa
