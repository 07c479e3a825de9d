#pragma once

#include "qsa/core.hpp"
#include "qsa/gain.hpp"
#include "qsa/probe.hpp"
#include "qsa/qsa.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qsa {

enum class QsgdVariant { One, Two, Three };

struct Box {
  Vec lo;
  Vec hi;

  void validate(int d) const;
  Vec project(const Vec& x) const;
  bool contains(const Vec& x) const;
};

// All variants descend on L. delta is the finite-difference interval of
// variant Two; 0 means "use the integrator step".
struct QsgdConfig {
  QsgdVariant variant = QsgdVariant::Three;
  Mat G;
  double epsilon = 0.1;
  std::optional<Box> box;
  double delta = 0.0;

  void validate(int d) const;
};

using Loss = std::function<double(const Vec&)>;

// Probe sample and loss L(theta + eps xi) taken delta time units earlier.
struct PrevSample {
  Vec xi;
  double loss = 0.0;
};

class QsgdLossError : public Error {
 public:
  explicit QsgdLossError(Vec point);
  const Vec& point() const { return point_; }

 private:
  Vec point_;
};

// Evaluates L, throwing QsgdLossError on a non-finite value.
double checked_loss(const Loss& L, const Vec& x);

//   One:   -(1/eps) G xi L(theta + eps xi)
//   Two:   -(1/eps) G xi' L', primes being delta-differences against aux
//   Three: -(1/2eps) G xi [L(theta + eps xi) - L(theta - eps xi)]
Vec qsgd_field(const QsgdConfig& cfg, const Loss& L, const Vec& theta, const Vec& xi,
               const PrevSample* aux = nullptr);

struct QsgdRun {
  Trajectory traj;
  Vec theta_rp;  // average over the final 20%
  long long evals = 0;
};

QsgdRun run_qsgd(const QsgdConfig& cfg, const Loss& L, const ProbeSpec& probe,
                 const GainSchedule& gain, const Vec& theta0, double T, double h,
                 const IntegrateOptions& opts = {});

using EpisodeLoss = std::function<double(const Vec& theta_probe, long long n)>;

// theta_{n+1} = theta_n - alpha(n+1) (1/eps) G xi_{n+1} L(theta_n + eps xi_{n+1}, n+1) for
// variant One, with the matching forms for Two and Three. Returns theta_0..theta_N.
std::vector<Vec> episodic_qsgd(const QsgdConfig& cfg, const EpisodeLoss& L,
                               const std::function<double(long long)>& alpha,
                               const std::function<Vec(long long)>& probe_n, long long N,
                               const Vec& theta0);

struct BiasRow {
  double epsilon = 0.0;
  double bias = 0.0;
  Vec theta_rp;
};

std::vector<BiasRow> epsilon_bias_sweep(const QsgdConfig& cfg, const Loss& L, const ProbeSpec& probe,
                                        const GainSchedule& gain, std::vector<double> eps_list,
                                        const Vec& theta0, const Vec& theta_star, double T, double h,
                                        unsigned jobs = 1);

}  // namespace qsa
