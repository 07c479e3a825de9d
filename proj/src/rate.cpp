#include <algorithm>
#include <cmath>

#include "qsa/qsa.hpp"

namespace qsa {

RateFit estimate_rate(std::span<const double> t, std::span<const double> err,
                      std::optional<std::pair<double, double>> window) {
  if (t.size() != err.size()) throw Error("rate fit needs matching time and error samples");
  if (t.empty()) throw Error("rate fit needs samples");
  double lo, hi;
  if (window) {
    std::tie(lo, hi) = *window;
  } else {
    hi = *std::max_element(t.begin(), t.end());
    lo = hi / 100.0;
  }
  if (!(lo >= 1.0)) throw Error("rate window must start at t >= 1");
  if (!(hi > lo)) throw Error("rate window is empty");

  std::vector<double> x, y;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < lo || t[k] > hi) continue;
    if (!(err[k] > 0.0) || !std::isfinite(err[k])) continue;
    x.push_back(std::log(t[k]));
    y.push_back(std::log(err[k]));
  }
  if (x.size() < 10) throw Error("fewer than 10 positive error samples in the rate window");

  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw Error("rate window holds a single time value");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (intercept + slope * x[k]);
    ss += r * r;
  }
  return {-slope, intercept, lo, hi, std::sqrt(ss / n), x.size()};
}

std::vector<double> error_norms(const Trajectory& traj, const Vec& theta_star) {
  if (theta_star.size() != traj.dim()) throw Error("reference dimension mismatch");
  std::vector<double> out(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) out[k] = (traj.state(k) - theta_star).norm();
  return out;
}

std::pair<std::vector<double>, std::vector<double>> log_binned_envelope(
    std::span<const double> t, std::span<const double> err, double t_lo, double t_hi,
    int bins_per_decade) {
  if (t.size() != err.size()) throw Error("envelope needs matching samples");
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || bins_per_decade < 1) throw Error("bad envelope window");
  const double decades = std::log10(t_hi / t_lo);
  const auto bins = std::max(1, static_cast<int>(std::lround(decades * bins_per_decade)));
  const double width = decades / bins;
  std::vector<double> peak(bins, -1.0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_lo || t[k] >= t_hi) continue;
    const int b = std::min(bins - 1, static_cast<int>(std::log10(t[k] / t_lo) / width));
    peak[b] = std::max(peak[b], std::abs(err[k]));
  }
  std::vector<double> edges, values;
  for (int b = 0; b < bins; ++b) {
    if (peak[b] < 0.0) continue;
    edges.push_back(t_lo * std::pow(10.0, b * width));
    values.push_back(peak[b]);
  }
  return {edges, values};
}

}  // namespace qsa
