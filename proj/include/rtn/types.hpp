// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rtn {

/// Raised when an argument lies outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Complex = std::complex<double>;

/// Real and imaginary parts of a characteristic-function value E[exp(i m theta)].
struct ComplexValue {
  double re = 0.0;
  double im = 0.0;

  ComplexValue() = default;
  ComplexValue(double r, double i) : re(r), im(i) {}
  explicit ComplexValue(Complex z) : re(z.real()), im(z.imag()) {}

  [[nodiscard]] Complex as_complex() const { return {re, im}; }
  [[nodiscard]] double abs() const { return std::abs(as_complex()); }
  [[nodiscard]] ComplexValue conj() const { return {re, -im}; }
  [[nodiscard]] bool finite() const;

  friend ComplexValue operator*(ComplexValue a, ComplexValue b) {
    return ComplexValue(a.as_complex() * b.as_complex());
  }
  friend bool operator==(const ComplexValue&, const ComplexValue&) = default;
};

enum class State { positive, negative };

inline State flipped(State s) { return s == State::positive ? State::negative : State::positive; }

/// Which initial state a path starts in. `mixed` draws the state from the
/// source's p_plus.
enum class StartPolicy { positive, negative, mixed };

/// One two-state telegraph source.
///
/// The signal sits at +delta or -delta. It leaves the positive state with rate
/// 1/tau_plus and the negative state with rate 1/tau_minus.
struct TelegraphSource {
  double delta = 1.0;
  double tau_plus = 1.0;
  double tau_minus = 1.0;
  double p_plus = 0.5;

  /// Equal dwell times, equiprobable start.
  static TelegraphSource symmetric(double delta, double tau_c, double p_plus = 0.5) {
    return TelegraphSource{delta, tau_c, tau_c, p_plus};
  }

  [[nodiscard]] bool is_symmetric() const { return tau_plus == tau_minus; }
  [[nodiscard]] double tau(State s) const { return s == State::positive ? tau_plus : tau_minus; }

  /// Throws DomainError if any invariant is violated.
  void validate() const;
};

/// Fourier multiplier m and duration t.
struct EvaluationPoint {
  double m = 0.0;
  double t = 0.0;

  void validate() const;
};

/// Expected-flip-count parameters of one source over a duration.
struct FlipRates {
  double lambda_plus;   // t / tau_plus
  double lambda_minus;  // t / tau_minus
  double theta_c;       // delta * t

  static FlipRates of(const TelegraphSource& s, double t) {
    return {t / s.tau_plus, t / s.tau_minus, s.delta * t};
  }
};

std::string to_string(StartPolicy p);
StartPolicy parse_start_policy(const std::string& name);

}  // namespace rtn
