#pragma once

#include <cmath>

namespace satroute {

/// Forward-mode dual number: value + derivative * e with e^2 = 0.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : value{v} {}  // NOLINT: implicit lift of constants
  constexpr Dual(double v, double d) : value{v}, deriv{d} {}

  static constexpr Dual variable(double v) { return {v, 1.0}; }
};

constexpr Dual operator+(Dual a, Dual b) { return {a.value + b.value, a.deriv + b.deriv}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.value - b.value, a.deriv - b.deriv}; }
constexpr Dual operator-(Dual a) { return {-a.value, -a.deriv}; }
constexpr Dual operator*(Dual a, Dual b) { return {a.value * b.value, a.deriv * b.value + a.value * b.deriv}; }
constexpr Dual operator/(Dual a, Dual b) {
  return {a.value / b.value, (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)};
}

inline Dual exp(Dual a) {
  const double e = std::exp(a.value);
  return {e, e * a.deriv};
}

}  // namespace satroute
