#include "qsa/gain.hpp"
#include "qsa/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qsa;
using doctest::Approx;

namespace {
GainSchedule power(double g, double rho) { return {GainKind::Power, g, rho, std::nullopt}; }
}  // namespace

TEST_CASE("gain_value examples") {
  CHECK(gain_value(power(1, 1), 0.0) == Approx(1.0));
  CHECK(gain_value(power(2, 0.5), 3.0) == Approx(1.0));
  CHECK(gain_value({GainKind::Power, 1.0, 0.9, 1e-3}, 0.0) == Approx(1e-3));
  CHECK(gain_value({GainKind::Constant, 0.3, 1.0, std::nullopt}, 1e6) == Approx(0.3));
}

TEST_CASE("gain validation") {
  CHECK_THROWS_AS(power(0, 1).validate(), Error);
  CHECK_THROWS_AS(power(1, 0).validate(), Error);
  CHECK_THROWS_AS(power(1, 1.5).validate(), Error);
  CHECK_THROWS_AS((GainSchedule{GainKind::Power, 1, 1, -1.0}.validate()), Error);
  CHECK_THROWS_AS(gain_value(power(1, 1), -1.0), Error);
}

TEST_CASE("gain is positive, non-increasing and vanishing") {
  for (double rho : {0.5, 0.7, 1.0}) {
    const auto s = power(1.5, rho);
    double prev = gain_value(s, 0.0);
    for (double t = 0.5; t < 1e4; t *= 1.7) {
      const double a = gain_value(s, t);
      CHECK(a > 0.0);
      CHECK(a <= prev);
      prev = a;
    }
    CHECK(gain_value(s, 1e12) < 1e-4);
  }
}

TEST_CASE("gain_integral examples") {
  CHECK(gain_integral(power(1, 1), std::numbers::e - 1) == Approx(1.0));
  CHECK(gain_integral(power(3, 0.7), 0.0) == 0.0);
  CHECK(gain_integral(power(1, 0.5), 3.0) == Approx(2.0));
  CHECK_THROWS_WITH(gain_integral({GainKind::Power, 1, 0.9, 1e-3}, 1.0), doctest::Contains("no closed form"));
}

TEST_CASE("gain_integral is an antiderivative of gain_value") {
  Lcg64 rng(1);
  for (double rho : {0.5, 0.8, 1.0}) {
    const auto s = power(2.0, rho);
    for (int i = 0; i < 20; ++i) {
      const double t = 50 * rng.uniform(), h = 1e-5;
      const double fd = (gain_integral(s, t + h) - gain_integral(s, t)) / h;
      CHECK(fd == Approx(gain_value(s, t)).epsilon(1e-4));
    }
  }
}

TEST_CASE("numeric gain integral matches the closed form and handles caps") {
  CHECK(gain_integral_numeric(power(1, 0.7), 20.0, 1e-3) == Approx(gain_integral(power(1, 0.7), 20.0)).epsilon(1e-5));
  // Capped at 0.5 until t = 1, then 1/(1+t).
  const GainSchedule capped{GainKind::Power, 1.0, 1.0, 0.5};
  CHECK(gain_integral_numeric(capped, 3.0, 1e-4) == Approx(0.5 + std::log(2.0)).epsilon(1e-4));
}

TEST_CASE("gain_log_derivative examples") {
  CHECK(gain_log_derivative(power(1, 1), 0.0) == Approx(1.0));
  CHECK(gain_log_derivative(power(1, 0.7), 9.0) == Approx(0.07));
  CHECK(gain_log_derivative({GainKind::Constant, 1, 1, std::nullopt}, 5.0) == 0.0);
}

TEST_CASE("log derivative times a_t equals -da/dt") {
  for (double rho : {0.6, 1.0}) {
    const auto s = power(1.3, rho);
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
      const double h = 1e-6 * (1 + t);
      const double da = (gain_value(s, t + h) - gain_value(s, t - (t > 0 ? h : 0))) / (t > 0 ? 2 * h : h);
      CHECK(gain_log_derivative(s, t) * gain_value(s, t) == Approx(-da).epsilon(1e-4));
    }
  }
}

TEST_CASE("r_t / a_t is 1/g for rho = 1 and vanishes for rho < 1") {
  const auto s1 = power(2.0, 1.0);
  for (double t : {0.0, 3.0, 1e3}) CHECK(gain_log_derivative(s1, t) / gain_value(s1, t) == Approx(0.5));
  const auto s2 = power(2.0, 0.6);
  CHECK(gain_log_derivative(s2, 1e6) / gain_value(s2, 1e6) < 1e-2);
}
