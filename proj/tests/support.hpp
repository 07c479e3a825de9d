#pragma once

#include "qsa/probe.hpp"

#include <cmath>
#include <numbers>

namespace qsa::test {

inline ProbeSpec sine(double omega, double amp = 1.0, double phi = 0.0) {
  ProbeSpec p;
  p.kind = ProbeKind::SinusoidMixture;
  p.terms.push_back({Vec::Constant(1, amp), omega, phi});
  return p;
}

inline ProbeSpec sawtooth(double omega = 2.0 * std::numbers::pi, double phi = 0.0) {
  ProbeSpec p;
  p.kind = ProbeKind::SawtoothMixture;
  p.terms.push_back({Vec::Ones(1), omega, phi});
  return p;
}

inline ProbeSpec torus(double omega) {
  ProbeSpec p;
  p.kind = ProbeKind::TorusExponential;
  p.terms.push_back({Vec(), omega, 0.0});
  return p;
}

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace qsa::test
