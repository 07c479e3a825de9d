#pragma once

#include "qsa/qsgd.hpp"

#include <functional>
#include <vector>

namespace qsa::envs {

inline constexpr double kCarZMin = -1.2;
inline constexpr double kCarZGoal = 0.5;
inline constexpr double kCarVMax = 0.07;

struct MountainCarState {
  double z = 0.0;
  double v = 0.0;
};

bool at_goal(const MountainCarState& s);

// z+ = [z + v], v+ = [v + 1e-3 u - 2.5e-3 cos(3z)], both clamped. Reaching
// z = 0.5 lands in the absorbing goal state (0.5, 0).
MountainCarState mountain_car_step(const MountainCarState& s, double u);

// u = 1 if z + v <= theta, else sign(v).
double mountain_car_policy(double theta, const MountainCarState& s);

// Steps to reach the goal under the threshold policy, capped at J_max.
long long mountain_car_cost(double theta, MountainCarState x0, long long J_max);

// n-th initial state: z = -1.2 + 1.7 frac(n e), v = 0.07 (2 frac(n pi) - 1).
MountainCarState mountain_car_initial_state(long long n);

// Mean cost over initial states 1..count.
double mountain_car_average_cost(double theta, long long count, long long J_max);

struct MountainCarConfig {
  long long episodes = 10000;
  double alpha = 0.1;
  double epsilon = 0.05;
  long long J_max = 5000;
  double loss_scale = 0.0;  // 0 means 1 / J_max
  double theta0 = -0.3;
  double lo = kCarZMin;
  double hi = kCarZGoal;
  QsgdVariant variant = QsgdVariant::One;
  double delta = 1.0;  // variant Two only
};

struct MountainCarResult {
  std::vector<double> theta;  // theta_0 .. theta_N
  double theta_rp = 0.0;      // mean of the final 20%
};

// probe_n defaults to sin(n).
MountainCarResult mountain_car_pg(const MountainCarConfig& cfg,
                                  std::function<double(long long)> probe_n = {});

struct ScanRow {
  double theta = 0.0;
  double average_cost = 0.0;
};

std::vector<ScanRow> threshold_scan(const std::vector<double>& thetas, long long count, long long J_max,
                                    unsigned jobs = 1);

}  // namespace qsa::envs
