#include "qsa/qsgd.hpp"

#include "euler.hpp"
#include "qsa/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace qsa {

void Box::validate(int d) const {
  if (lo.size() != d || hi.size() != d) throw Error("box dimension mismatch");
  for (int i = 0; i < d; ++i)
    if (!(lo[i] < hi[i])) throw Error("box must have nonempty interior");
}

Vec Box::project(const Vec& x) const { return x.cwiseMax(lo).cwiseMin(hi); }

bool Box::contains(const Vec& x) const {
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

void QsgdConfig::validate(int d) const {
  if (G.rows() != d || G.cols() != d) throw Error("G must be d x d");
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, G.cwiseAbs().maxCoeff()))
    throw Error("G must be symmetric");
  if (Eigen::LLT<Mat>(G).info() != Eigen::Success) throw Error("G must be positive definite");
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (box) box->validate(d);
  if (delta < 0.0) throw Error("delta must be nonnegative");
}

QsgdLossError::QsgdLossError(Vec point) : Error("non-finite loss value"), point_(std::move(point)) {}

double checked_loss(const Loss& L, const Vec& x) {
  const double v = L(x);
  if (!std::isfinite(v)) throw QsgdLossError(x);
  return v;
}

Vec qsgd_field(const QsgdConfig& cfg, const Loss& L, const Vec& theta, const Vec& xi,
               const PrevSample* aux) {
  if (xi.size() != theta.size() || cfg.G.rows() != theta.size()) throw Error("qsgd_field: dimension mismatch");
  const double eps = cfg.epsilon;
  switch (cfg.variant) {
    case QsgdVariant::One:
      return -(checked_loss(L, theta + eps * xi) / eps) * (cfg.G * xi);
    case QsgdVariant::Two: {
      if (aux == nullptr) throw Error("variant Two needs the previous sample");
      if (!(cfg.delta > 0.0)) throw Error("variant Two needs delta > 0");
      const Vec dxi = (xi - aux->xi) / cfg.delta;
      const double dl = (checked_loss(L, theta + eps * xi) - aux->loss) / cfg.delta;
      return -(dl / eps) * (cfg.G * dxi);
    }
    case QsgdVariant::Three: {
      const double diff = checked_loss(L, theta + eps * xi) - checked_loss(L, theta - eps * xi);
      return -(diff / (2.0 * eps)) * (cfg.G * xi);
    }
  }
  throw Error("unknown qSGD variant");
}

QsgdRun run_qsgd(const QsgdConfig& cfg, const Loss& L, const ProbeSpec& probe,
                 const GainSchedule& gain, const Vec& theta0, double T, double h,
                 const IntegrateOptions& opts) {
  const int d = static_cast<int>(theta0.size());
  cfg.validate(d);
  probe.validate();
  gain.validate();
  if (probe.dim() != d) throw Error("probe dimension must equal parameter dimension");

  QsgdConfig c = cfg;
  long long lag = 1;
  if (c.variant == QsgdVariant::Two) {
    if (c.delta == 0.0) c.delta = h;
    lag = std::llround(c.delta / h);
    if (lag < 1 || std::abs(static_cast<double>(lag) * h - c.delta) > 1e-9 * c.delta)
      throw Error("delta must be a positive multiple of the step h");
  }

  long long evals = 0;
  std::deque<PrevSample> history;  // samples at t_{k-lag} .. t_{k-1}
  Vec xi;
  Vec start = theta0;
  if (c.box) start = c.box->project(start);

  auto step = [&](Vec& theta, long long, double t) {
    probe_eval(probe, t, xi);
    Vec field;
    if (c.variant == QsgdVariant::Two) {
      const double now = checked_loss(L, theta + c.epsilon * xi);
      ++evals;
      if (static_cast<long long>(history.size()) == lag) {
        const Vec dxi = (xi - history.front().xi) / c.delta;
        field = -((now - history.front().loss) / (c.delta * c.epsilon)) * (c.G * dxi);
        history.pop_front();
      } else {
        field = Vec::Zero(d);
      }
      history.push_back({xi, now});
    } else {
      field = qsgd_field(c, L, theta, xi);
      evals += c.variant == QsgdVariant::Three ? 2 : 1;
    }
    theta += h * gain_value(gain, t) * field;
    if (c.box) theta = c.box->project(theta);
  };

  QsgdRun run;
  run.traj = detail::euler_loop(start, 0.0, T, h, opts, step);
  run.theta_rp = rp_average(run.traj, RpMode::windowed(5.0)).back();
  run.evals = evals;
  return run;
}

std::vector<Vec> episodic_qsgd(const QsgdConfig& cfg, const EpisodeLoss& L,
                               const std::function<double(long long)>& alpha,
                               const std::function<Vec(long long)>& probe_n, long long N,
                               const Vec& theta0) {
  const int d = static_cast<int>(theta0.size());
  cfg.validate(d);
  if (N < 1) throw Error("episode count must be at least 1");
  if (cfg.variant == QsgdVariant::Two && !(cfg.delta > 0.0)) throw Error("variant Two needs delta > 0");

  auto loss = [&](const Vec& x, long long n) {
    const double v = L(x, n);
    if (!std::isfinite(v)) throw QsgdLossError(x);
    return v;
  };

  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(N) + 1);
  Vec theta = cfg.box ? cfg.box->project(theta0) : theta0;
  out.push_back(theta);
  const double eps = cfg.epsilon;
  std::optional<PrevSample> prev;
  for (long long n = 0; n < N; ++n) {
    const Vec xi = probe_n(n + 1);
    if (xi.size() != d) throw Error("episodic probe dimension mismatch");
    const double a = alpha(n + 1);
    if (a < 0.0) throw Error("step sizes must be nonnegative");
    Vec dir = Vec::Zero(d);
    switch (cfg.variant) {
      case QsgdVariant::One:
        dir = (loss(theta + eps * xi, n + 1) / eps) * (cfg.G * xi);
        break;
      case QsgdVariant::Two: {
        const double now = loss(theta + eps * xi, n + 1);
        if (prev) dir = ((now - prev->loss) / (cfg.delta * cfg.delta * eps)) * (cfg.G * (xi - prev->xi));
        prev = PrevSample{xi, now};
        break;
      }
      case QsgdVariant::Three:
        dir = ((loss(theta + eps * xi, n + 1) - loss(theta - eps * xi, n + 1)) / (2.0 * eps)) * (cfg.G * xi);
        break;
    }
    theta -= a * dir;
    if (cfg.box) theta = cfg.box->project(theta);
    out.push_back(theta);
  }
  return out;
}

std::vector<BiasRow> epsilon_bias_sweep(const QsgdConfig& cfg, const Loss& L, const ProbeSpec& probe,
                                        const GainSchedule& gain, std::vector<double> eps_list,
                                        const Vec& theta0, const Vec& theta_star, double T, double h,
                                        unsigned jobs) {
  if (eps_list.empty()) throw Error("empty epsilon list");
  if (theta_star.size() != theta0.size()) throw Error("theta_star dimension mismatch");
  std::sort(eps_list.begin(), eps_list.end());
  std::vector<BiasRow> rows(eps_list.size());
  parallel_for(eps_list.size(), jobs, [&](std::size_t i) {
    QsgdConfig c = cfg;
    c.epsilon = eps_list[i];
    const QsgdRun run = run_qsgd(c, L, probe, gain, theta0, T, h);
    rows[i] = {eps_list[i], (run.theta_rp - theta_star).norm(), run.theta_rp};
  });
  return rows;
}

}  // namespace qsa
