#pragma once

#include "qsa/core.hpp"

#include <optional>

namespace qsa {

enum class GainKind { Power, Constant };

// Power: a_t = min(cap, g / (1 + t)^rho).  Constant: a_t = g.
struct GainSchedule {
  GainKind kind = GainKind::Power;
  double g = 1.0;
  double rho = 1.0;
  std::optional<double> cap;

  void validate() const;
};

double gain_value(const GainSchedule& s, double t);

// Closed-form g_t = int_0^t a_s ds. Capped schedules have none.
double gain_integral(const GainSchedule& s, double t);

// Trapezoidal g_t; works for every schedule.
double gain_integral_numeric(const GainSchedule& s, double t, double h);

// r_t = -d/dt log a_t.
double gain_log_derivative(const GainSchedule& s, double t);

}  // namespace qsa
