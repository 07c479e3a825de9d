#include "qsa/envs/mountain_car.hpp"

#include "qsa/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsa::envs {

bool at_goal(const MountainCarState& s) { return s.z >= kCarZGoal; }

MountainCarState mountain_car_step(const MountainCarState& s, double u) {
  if (at_goal(s)) return {kCarZGoal, 0.0};
  if (!(u >= -1.0 && u <= 1.0)) throw Error("throttle must lie in [-1, 1]");
  MountainCarState next;
  next.z = std::clamp(s.z + s.v, kCarZMin, kCarZGoal);
  next.v = std::clamp(s.v + 1e-3 * u - 2.5e-3 * std::cos(3.0 * s.z), -kCarVMax, kCarVMax);
  if (at_goal(next)) next.v = 0.0;
  return next;
}

double mountain_car_policy(double theta, const MountainCarState& s) {
  if (s.z + s.v <= theta) return 1.0;
  return s.v > 0.0 ? 1.0 : (s.v < 0.0 ? -1.0 : 0.0);
}

long long mountain_car_cost(double theta, MountainCarState x0, long long J_max) {
  if (J_max < 1) throw Error("J_max must be at least 1");
  MountainCarState s = x0;
  for (long long k = 0; k < J_max; ++k) {
    if (at_goal(s)) return k;
    s = mountain_car_step(s, mountain_car_policy(theta, s));
  }
  return J_max;
}

MountainCarState mountain_car_initial_state(long long n) {
  return {kCarZMin + (kCarZGoal - kCarZMin) * quasi_uniform(std::numbers::e, n),
          kCarVMax * (2.0 * quasi_uniform(std::numbers::pi, n) - 1.0)};
}

double mountain_car_average_cost(double theta, long long count, long long J_max) {
  if (count < 1) throw Error("need at least one initial state");
  double sum = 0.0;
  for (long long n = 1; n <= count; ++n)
    sum += static_cast<double>(mountain_car_cost(theta, mountain_car_initial_state(n), J_max));
  return sum / static_cast<double>(count);
}

MountainCarResult mountain_car_pg(const MountainCarConfig& cfg, std::function<double(long long)> probe_n) {
  if (cfg.episodes < 1) throw Error("episodes must be at least 1");
  if (!(cfg.lo < cfg.hi)) throw Error("threshold box must have nonempty interior");
  if (!probe_n) probe_n = [](long long n) { return std::sin(static_cast<double>(n)); };
  const double scale = cfg.loss_scale > 0.0 ? cfg.loss_scale : 1.0 / static_cast<double>(cfg.J_max);

  QsgdConfig q;
  q.variant = cfg.variant;
  q.G = Mat::Identity(1, 1);
  q.epsilon = cfg.epsilon;
  q.box = Box{Vec::Constant(1, cfg.lo), Vec::Constant(1, cfg.hi)};
  q.delta = cfg.delta;

  const EpisodeLoss L = [&](const Vec& th, long long n) {
    return scale * static_cast<double>(mountain_car_cost(th[0], mountain_car_initial_state(n), cfg.J_max));
  };
  const auto seq = episodic_qsgd(
      q, L, [&](long long) { return cfg.alpha; }, [&](long long n) { return Vec::Constant(1, probe_n(n)); },
      cfg.episodes, Vec::Constant(1, cfg.theta0));

  MountainCarResult out;
  out.theta.reserve(seq.size());
  for (const auto& v : seq) out.theta.push_back(v[0]);
  // Final 20% of theta_1 .. theta_N.
  const auto N = static_cast<std::size_t>(cfg.episodes);
  const std::size_t first = N - N / 5 + 1;
  double sum = 0.0;
  for (std::size_t i = first; i <= N; ++i) sum += out.theta[i];
  out.theta_rp = sum / static_cast<double>(N - first + 1);
  return out;
}

std::vector<ScanRow> threshold_scan(const std::vector<double>& thetas, long long count, long long J_max,
                                    unsigned jobs) {
  std::vector<ScanRow> rows(thetas.size());
  parallel_for(thetas.size(), jobs, [&](std::size_t i) {
    rows[i] = {thetas[i], mountain_car_average_cost(thetas[i], count, J_max)};
  });
  return rows;
}

}  // namespace qsa::envs
