// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "rtn/special_functions.hpp"

namespace rtn {

namespace mp = boost::multiprecision;

namespace {

// Write 1 - sqrt(1 - 2t) = 2 h(t/2) with h(s) = sum_{j>=1} Catalan(j-1) s^j.
// Then [t^n] g(t)^k = 2^{k-n} [s^n] h(s)^k and
//   p_n(x) = n! sum_k x^k / k! * 2^{k-n} [s^n] h^k,
// which keeps the power expansion in exact integers.
std::vector<std::vector<double>> expand_generating_function(int max_order) {
  const int N = max_order;
  std::vector<mp::cpp_int> h(N + 1, 0);
  mp::cpp_int catalan = 1;  // Catalan(0)
  for (int j = 1; j <= N; ++j) {
    h[j] = catalan;
    // Catalan(j) = Catalan(j-1) * 2(2j-1) / (j+1)
    catalan = catalan * 2 * (2 * j - 1) / (j + 1);
  }

  // powers[k][n] = [s^n] h^k, truncated at order N.
  std::vector<std::vector<mp::cpp_int>> powers(N + 1, std::vector<mp::cpp_int>(N + 1, 0));
  powers[0][0] = 1;
  for (int k = 1; k <= N; ++k) {
    for (int a = k - 1; a <= N; ++a) {
      if (powers[k - 1][a] == 0) continue;
      for (int b = 1; a + b <= N; ++b) powers[k][a + b] += powers[k - 1][a] * h[b];
    }
  }

  std::vector<mp::cpp_int> factorial(N + 1, 1);
  for (int i = 1; i <= N; ++i) factorial[i] = factorial[i - 1] * i;

  std::vector<std::vector<double>> coeffs(N + 1);
  for (int n = 0; n <= N; ++n) {
    coeffs[n].assign(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
      if (powers[k][n] == 0) continue;
      const mp::cpp_int num = factorial[n] * powers[k][n] * (mp::cpp_int(1) << k);
      const mp::cpp_int den = factorial[k] * (mp::cpp_int(1) << n);
      // The coefficients are integers; keep the rational path as a fallback.
      coeffs[n][k] = num % den == 0 ? static_cast<double>(mp::cpp_int(num / den))
                                    : static_cast<double>(mp::cpp_rational(num, den));
    }
  }
  return coeffs;
}

template <typename T>
T horner(const std::vector<double>& c, T x) {
  T acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + T(*it);
  return acc;
}

}  // namespace

CarlitzTable::CarlitzTable(int max_order) {
  if (max_order < 0) throw DomainError("CarlitzTable: max_order must be nonnegative");
  coeffs_ = expand_generating_function(max_order);
}

const std::vector<double>& CarlitzTable::coefficients(int n) const {
  if (n < 0 || n > max_order()) {
    throw DomainError("Carlitz order " + std::to_string(n) + " outside table [0, " +
                      std::to_string(max_order()) + "]");
  }
  return coeffs_[n];
}

double CarlitzTable::eval(int n, double x) const { return horner(coefficients(n), x); }

Complex CarlitzTable::eval(int n, Complex x) const { return horner(coefficients(n), x); }

double CarlitzTable::derivative(int n, double x) const {
  const auto& c = coefficients(n);
  double acc = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) acc = acc * x + k * c[k];
  return acc;
}

const CarlitzTable& CarlitzTable::instance() {
  static const CarlitzTable table;
  return table;
}

double carlitz_bessel_p(int n, double x) { return CarlitzTable::instance().eval(n, x); }

Complex carlitz_bessel_p(int n, Complex x) { return CarlitzTable::instance().eval(n, x); }

}  // namespace rtn
