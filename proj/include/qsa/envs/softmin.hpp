#pragma once

#include "qsa/qsgd.hpp"

#include <vector>

namespace qsa::envs {

// L(theta) = -log sum_k exp(-(z_k + |theta - c_k|^2) / sigma^2)
struct SoftminLandscape {
  std::vector<Vec> centers;
  std::vector<double> offsets;
  double sigma = 0.1;

  // Centers (+-1, +-1) with offsets -1, -2, -2, -3; the deepest well is at (1, 1).
  static SoftminLandscape standard();

  void validate() const;
  double loss(const Vec& theta) const;
  Vec gradient(const Vec& theta) const;
};

double softmin_loss(const Vec& theta);

// Grid search over [lo, hi]^2 followed by gradient polishing.
Vec softmin_argmin(const SoftminLandscape& land, double lo, double hi, double step);

// sqrt2 sin(t/4), sqrt2 sin(t/e^2)
ProbeSpec softmin_probe();

struct SoftminSetup {
  QsgdVariant variant = QsgdVariant::One;
  double epsilon = 0.15;
  GainSchedule gain{GainKind::Power, 1.0, 0.9, 1e-3};
  ProbeSpec probe = softmin_probe();
  double T = 5e4;
  double h = 1.0;
  Vec theta0 = Vec::Constant(2, -2.0);
  std::optional<Box> box = Box{Vec::Constant(2, -3.0), Vec::Constant(2, 3.0)};
};

struct SoftminResult {
  QsgdRun run;
  double loss_rp = 0.0;
  double loss_star = 0.0;
  Vec theta_star;
};

SoftminResult softmin_experiment(const SoftminSetup& setup,
                                 const SoftminLandscape& land = SoftminLandscape::standard());

}  // namespace qsa::envs
