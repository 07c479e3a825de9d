#include "qsa/probe.hpp"
#include "qsa/rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace qsa;
using namespace qsa::test;
using doctest::Approx;
using std::numbers::pi;

TEST_CASE("sinusoid at t = 0 is zero") {
  CHECK(probe_eval(sine(1.0), 0.0)[0] == Approx(0.0));
}

TEST_CASE("sinusoid uses angular frequency and phase in cycles") {
  CHECK(probe_eval(sine(2.0, 3.0, 0.25), 0.5)[0] == Approx(3.0 * std::sin(1.0 + pi / 2)));
}

TEST_CASE("unit sawtooth at t = 1.25 is 0.25") {
  CHECK(probe_eval(sawtooth(), 1.25)[0] == Approx(0.25));
}

TEST_CASE("left limit of the sawtooth at an integer is 1") {
  Vec out;
  probe_eval_left(sawtooth(), 3.0, out);
  CHECK(out[0] == Approx(1.0));
  probe_eval(sawtooth(), 3.0, out);
  CHECK(out[0] == Approx(0.0));
}

TEST_CASE("torus probe lies on the unit circle") {
  ProbeSpec p;
  p.kind = ProbeKind::TorusExponential;
  p.terms = {{Vec(), 1.0, 0.0}, {Vec(), std::sqrt(2.0), 0.3}};
  for (double t : {0.0, 0.7, 13.1, 250.0}) {
    const Vec x = probe_eval(p, t);
    REQUIRE(x.size() == 4);
    CHECK(std::hypot(x[0], x[1]) == Approx(1.0));
    CHECK(std::hypot(x[2], x[3]) == Approx(1.0));
    CHECK(x[0] == Approx(std::cos(t)));
    CHECK(x[1] == Approx(std::sin(t)));
  }
}

TEST_CASE("irrational rotation steps once per unit time") {
  ProbeSpec p;
  p.kind = ProbeKind::IrrationalRotation;
  p.terms.push_back({Vec::Ones(1), std::numbers::sqrt2, 0.0});
  CHECK(probe_eval(p, 2.9)[0] == Approx(2 * std::numbers::sqrt2 - 2));
}

TEST_CASE("four-well experiment probe matches sqrt2 sin(t/4), sqrt2 sin(t/e^2)") {
  const std::vector<double> w{0.25, std::exp(-2.0)};
  const ProbeSpec p = make_normalized_probe(2, w);
  for (double t : {0.0, 1.0, 17.3, 1234.5}) {
    const Vec x = probe_eval(p, t);
    CHECK(x[0] == Approx(std::sqrt(2.0) * std::sin(t / 4)));
    CHECK(x[1] == Approx(std::sqrt(2.0) * std::sin(t * std::exp(-2.0))));
  }
}

TEST_CASE("probe validation errors") {
  ProbeSpec empty;
  CHECK_THROWS_WITH(probe_eval(empty, 0.0), "empty probe");
  ProbeSpec dup = sine(1.0);
  dup.terms.push_back({Vec::Ones(1), 1.0, 0.0});
  CHECK_THROWS_WITH(dup.validate(), "duplicate probe frequency");
  CHECK_THROWS_AS(sine(-1.0).validate(), Error);
  CHECK_THROWS_AS(sine(1.0, 1.0, 1.0).validate(), Error);
  ProbeSpec mixed = sine(1.0);
  mixed.terms.push_back({Vec::Ones(2), 2.0, 0.0});
  CHECK_THROWS_AS(mixed.validate(), Error);
  CHECK_THROWS_AS(probe_eval(sine(1.0), -1.0), Error);
}

TEST_CASE("probe sup norm is bounded by the sum of amplitude norms") {
  ProbeSpec p;
  p.terms = {{vec({1.0, -2.0}), 1.0, 0.1}, {vec({0.5, 0.5}), std::numbers::sqrt3, 0.7}};
  const double bound = std::sqrt(5.0) + std::sqrt(0.5);
  Lcg64 rng(3);
  for (int i = 0; i < 2000; ++i) CHECK(probe_eval(p, 1000.0 * rng.uniform()).norm() <= bound + 1e-12);
  p.kind = ProbeKind::SawtoothMixture;
  for (int i = 0; i < 2000; ++i) CHECK(probe_eval(p, 1000.0 * rng.uniform()).norm() <= bound + 1e-12);
}

TEST_CASE("normalized probe: d = 1 has amplitude sqrt2 and unit second moment") {
  const std::vector<double> w{1.0};
  const ProbeSpec p = make_normalized_probe(1, w);
  REQUIRE(p.terms.size() == 1);
  CHECK(p.terms[0].v[0] == Approx(std::sqrt(2.0)));
  const auto m = ergodic_average([&](double t) { return probe_eval(p, t); }, 2 * pi * 100, 1e-3);
  CHECK(m.second_moment(0, 0) == Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(m.mean[0]) < 1e-6);
}

TEST_CASE("normalized probe: d = 2 moments within 1e-2 of (0, I) at T = 1e4") {
  const std::vector<double> w{0.25, std::exp(-2.0)};
  const ProbeSpec p = make_normalized_probe(2, w);
  const auto m = ergodic_average([&](double t) { return probe_eval(p, t); }, 1e4, 1e-2);
  CHECK(m.mean.cwiseAbs().maxCoeff() < 1e-2);
  CHECK((m.second_moment - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("normalized probe moment error shrinks as T grows") {
  const std::vector<double> w{0.25, std::exp(-2.0)};
  const ProbeSpec p = make_normalized_probe(2, w);
  auto gap = [&](double T) {
    const auto m = ergodic_average([&](double t) { return probe_eval(p, t); }, T, 1e-2);
    return std::max(m.mean.cwiseAbs().maxCoeff(), (m.second_moment - Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
  };
  CHECK(gap(1e5) < gap(1e3));
}

TEST_CASE("normalized probe rejects duplicate and harmonic frequencies") {
  const std::vector<double> same{1.0, 1.0};
  CHECK_THROWS_WITH(make_normalized_probe(2, same), "duplicate probe frequency");
  const std::vector<double> harmonic{2.0, 1.0};
  CHECK_THROWS_AS(make_normalized_probe(2, harmonic), Error);
  const std::vector<double> short_list{1.0};
  CHECK_THROWS_AS(make_normalized_probe(2, short_list), Error);
}

TEST_CASE("ergodic average of a constant signal") {
  const Vec c = vec({2.0, -1.0});
  const auto m = ergodic_average([&](double) { return c; }, 3.0, 0.1);
  CHECK((m.mean - c).norm() == Approx(0.0));
  CHECK((m.second_moment - c * c.transpose()).norm() == Approx(0.0));
}

TEST_CASE("sawtooth mean over an integer horizon is 1/2") {
  const auto m = ergodic_average([](double t) { return probe_eval(sawtooth(), t); }, 20.0, 1e-4);
  CHECK(m.mean[0] == Approx(0.5).epsilon(1e-3));
}

TEST_CASE("quasi_uniform") {
  CHECK(quasi_uniform(pi, 0) == 0.0);
  CHECK(quasi_uniform(pi, 1) == Approx(pi - 3.0));
  CHECK_THROWS_AS(quasi_uniform(pi, -1), Error);
}

TEST_CASE("frac(n pi) is equidistributed: CDF gap below 0.02 for n < 1e4") {
  std::vector<double> x;
  for (long long n = 0; n < 10000; ++n) x.push_back(quasi_uniform(pi, n));
  std::sort(x.begin(), x.end());
  double gap = 0.0;
  const double N = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    gap = std::max({gap, std::abs((i + 1) / N - x[i]), std::abs(i / N - x[i])});
  CHECK(gap < 0.02);
  // And within C / sqrt(n) with C = 1.
  CHECK(gap < 1.0 / std::sqrt(N));
}

TEST_CASE("poisson_sawtooth of a constant") {
  const auto s = poisson_sawtooth([](double) { return 3.0; }, 100);
  CHECK(s.gbar == Approx(3.0));
  for (double z : {0.0, 0.3, 0.99}) CHECK(std::abs(s(z)) < 1e-12);
}

TEST_CASE("poisson_sawtooth of g(z) = z") {
  const auto s = poisson_sawtooth([](double z) { return z; }, 1000);
  CHECK(s.gbar == Approx(0.5));
  for (double z : {0.0, 0.1, 0.5, 0.77, 0.999})
    CHECK(s(z) == Approx(-z * z / 2 + z / 2 - 1.0 / 12).epsilon(1e-6));
  CHECK_THROWS_AS(poisson_sawtooth([](double z) { return z; }, 1), Error);
}

TEST_CASE("sawtooth Poisson flow identity on random intervals") {
  auto g = [](double z) { return std::exp(4 * z) * std::sin(10 * z); };
  const auto s = poisson_sawtooth(g, 20000);
  Lcg64 rng(11);
  // Simpson on each unit-period piece, where g(frac(t)) is smooth.
  auto integral = [&](double t0, double t1) {
    double total = 0.0;
    for (double a = t0; a < t1;) {
      const double b = std::min(t1, std::floor(a) + 1.0);
      const double base = std::floor(a);
      const int n = 2000;
      const double dt = (b - a) / n;
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * (g(a + i * dt - base) - s.gbar);
      }
      total += acc * dt / 3;
      a = b;
    }
    return total;
  };
  for (int k = 0; k < 10; ++k) {
    const double t0 = 10 * rng.uniform();
    const double t1 = t0 + 0.3 + 3 * rng.uniform();
    const double frac0 = t0 - std::floor(t0), frac1 = t1 - std::floor(t1);
    CHECK(std::abs(s(frac0) - integral(t0, t1) - s(frac1)) < 1e-6);
  }
}

TEST_CASE("poisson_fourier single entry a_(1) = 1 with omega 2 gives j/2") {
  FourierSeries a;
  a.coeffs[{1}] = 1.0;
  const std::vector<double> w{2.0};
  const auto hat = poisson_fourier(a, w);
  REQUIRE(hat.coeffs.count({1}) == 1);
  CHECK(hat.coeffs.at({1}).real() == Approx(0.0));
  CHECK(hat.coeffs.at({1}).imag() == Approx(0.5));
}

TEST_CASE("poisson_fourier of a constant is zero") {
  FourierSeries a;
  a.coeffs[{0, 0}] = 4.0;
  const std::vector<double> w{1.0, std::numbers::sqrt2};
  const auto hat = poisson_fourier(a, w);
  for (const auto& [n, c] : hat.coeffs) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("poisson_fourier rejects resonance") {
  FourierSeries a;
  a.coeffs[{1, -1}] = 1.0;
  const std::vector<double> w{1.0, 1.0};
  CHECK_THROWS_WITH(poisson_fourier(a, w), "resonant multi-index");
}

TEST_CASE("poisson_fourier coefficient bound and integral identity on a random power series") {
  Lcg64 rng(5);
  const std::vector<double> w{1.0, std::numbers::sqrt2 + 0.5};
  FourierSeries a;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j) a.coeffs[{i, j}] = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
  const auto hat = poisson_fourier(a, w);
  for (const auto& [n, c] : hat.coeffs) CHECK(std::abs(c) <= std::abs(a.coeffs.at(n)) / w[0] + 1e-15);

  const auto a0 = a.coeffs.at({0, 0});
  const double h = 1e-3;
  for (int k = 0; k < 10; ++k) {
    const double t0 = 5 * rng.uniform(), t1 = t0 + 1 + 4 * rng.uniform();
    const auto n = static_cast<long long>(std::ceil((t1 - t0) / h));
    const double dt = (t1 - t0) / n;
    std::complex<double> integral = 0.0;
    for (long long i = 0; i < n; ++i) integral += dt * (fourier_eval(a, w, t0 + (i + 0.5) * dt) - a0);
    CHECK(std::abs(fourier_eval(hat, w, t0) - integral - fourier_eval(hat, w, t1)) < 10 * h);
  }
}
