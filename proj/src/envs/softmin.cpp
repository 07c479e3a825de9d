#include "qsa/envs/softmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsa::envs {

SoftminLandscape SoftminLandscape::standard() {
  SoftminLandscape l;
  l.centers = {Vec::Constant(2, -1.0), (Vec(2) << -1.0, 1.0).finished(), (Vec(2) << 1.0, -1.0).finished(),
               Vec::Constant(2, 1.0)};
  l.offsets = {-1.0, -2.0, -2.0, -3.0};
  l.sigma = 0.1;
  return l;
}

void SoftminLandscape::validate() const {
  if (centers.empty() || centers.size() != offsets.size()) throw Error("soft-min: centers and offsets must match");
  if (!(sigma > 0.0)) throw Error("soft-min: sigma must be positive");
  for (const auto& c : centers)
    if (c.size() != centers.front().size()) throw Error("soft-min: center dimension mismatch");
}

namespace {

// Exponents e_k = (z_k + |theta - c_k|^2) / sigma^2 and their minimum.
double exponents(const SoftminLandscape& l, const Vec& theta, std::vector<double>& e) {
  const double s2 = l.sigma * l.sigma;
  e.resize(l.centers.size());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < e.size(); ++k) {
    e[k] = (l.offsets[k] + (theta - l.centers[k]).squaredNorm()) / s2;
    m = std::min(m, e[k]);
  }
  return m;
}

}  // namespace

double SoftminLandscape::loss(const Vec& theta) const {
  if (theta.size() != centers.front().size()) throw Error("soft-min: dimension mismatch");
  std::vector<double> e;
  const double m = exponents(*this, theta, e);
  double acc = 0.0;
  for (double x : e) acc += std::exp(-(x - m));
  return m - std::log(acc);
}

Vec SoftminLandscape::gradient(const Vec& theta) const {
  if (theta.size() != centers.front().size()) throw Error("soft-min: dimension mismatch");
  std::vector<double> e;
  const double m = exponents(*this, theta, e);
  double acc = 0.0;
  Vec num = Vec::Zero(theta.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double w = std::exp(-(e[k] - m));
    acc += w;
    num += w * 2.0 * (theta - centers[k]) / (sigma * sigma);
  }
  return num / acc;
}

double softmin_loss(const Vec& theta) {
  static const SoftminLandscape land = SoftminLandscape::standard();
  return land.loss(theta);
}

Vec softmin_argmin(const SoftminLandscape& land, double lo, double hi, double step) {
  land.validate();
  if (land.centers.front().size() != 2) throw Error("soft-min grid search is two-dimensional");
  if (!(hi > lo) || !(step > 0.0)) throw Error("soft-min grid: bad range");
  const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  Vec best(2), p(2);
  double best_val = std::numeric_limits<double>::infinity();
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      p << lo + i * step, lo + j * step;
      const double v = land.loss(p);
      if (v < best_val) {
        best_val = v;
        best = p;
      }
    }
  // Within a well the Hessian is about 2/sigma^2, so this step is near Newton.
  const double eta = 0.5 * land.sigma * land.sigma;
  for (int it = 0; it < 200; ++it) {
    const Vec g = land.gradient(best);
    if (g.norm() < 1e-12) break;
    best -= eta * g;
  }
  return best;
}

ProbeSpec softmin_probe() {
  const double freqs[] = {0.25, std::exp(-2.0)};
  return make_normalized_probe(2, freqs);
}

SoftminResult softmin_experiment(const SoftminSetup& setup, const SoftminLandscape& land) {
  land.validate();
  QsgdConfig cfg;
  cfg.variant = setup.variant;
  cfg.G = Mat::Identity(2, 2);
  cfg.epsilon = setup.epsilon;
  cfg.box = setup.box;
  const Loss L = [&land](const Vec& x) { return land.loss(x); };

  SoftminResult r;
  r.run = run_qsgd(cfg, L, setup.probe, setup.gain, setup.theta0, setup.T, setup.h);
  r.loss_rp = land.loss(r.run.theta_rp);
  r.theta_star = softmin_argmin(land, -2.0, 2.0, 1e-2);
  r.loss_star = land.loss(r.theta_star);
  return r;
}

}  // namespace qsa::envs
