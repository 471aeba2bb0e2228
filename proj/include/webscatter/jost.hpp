#pragma once

#include <vector>

#include "webscatter/websystem.hpp"

namespace webscatter {

// Finite Laurent polynomial with real coefficients: sum_m c[m - min_pow] x^m.
struct LaurentPoly {
  int min_pow = 0;
  std::vector<double> coef;

  int max_pow() const { return min_pow + static_cast<int>(coef.size()) - 1; }
  double at(int m) const {
    const int i = m - min_pow;
    return (i >= 0 && i < static_cast<int>(coef.size())) ? coef[i] : 0.0;
  }
  void add(int m, double v);
  cplx eval(cplx x) const;
  cplx eval_deriv(cplx x) const;  // d/dx
};

// Exact finite representation of the Jost solutions of one compactly
// supported channel: e(k, theta) = c(k) sum_m a(k, m) theta^m with
// a(k, k) = 1 and e(k, theta) = theta^k for k > K0.
struct JostTable {
  int support = 0;  // K0
  double limit_a = 0.0, limit_b = 1.0;
  std::vector<double> cnorm;       // c(k), k = 0..K0+2
  std::vector<LaurentPoly> poly;   // normalized coefficient lists a(k, .)

  int stored() const { return static_cast<int>(poly.size()); }
  double c_of(int k) const {
    return (k < static_cast<int>(cnorm.size())) ? cnorm[k] : 1.0;
  }
  // a(k, m); identity table beyond the stored range.
  double coeff(int k, int m) const {
    if (k < stored()) return poly[k].at(m);
    return (m == k) ? 1.0 : 0.0;
  }
  cplx eval(int k, cplx theta) const;
  cplx eval_deriv_theta(int k, cplx theta) const;
};

JostTable build_jost(const ChannelSpec& ch);

// e^(1)(k, theta): the second solution fixed by e^(1)(k) = theta^{-k} for
// k > K0, stored for k = 0..K0+2.
std::vector<LaurentPoly> build_second(const ChannelSpec& ch);

// p(0) = 1, p(1) = 0 and the channel recurrence at the global lambda.
std::vector<cplx> build_p(const ChannelSpec& ch, cplx lambda, int k_max);

// Coefficient recovery for k = 1..k_max from the a(k, m) table (any source:
// Jost construction or the Marchenko solver). a(k, m) must read 0 beyond the
// stored range.
struct CoefficientTable {
  virtual ~CoefficientTable() = default;
  virtual double a(int k, int m) const = 0;
};

std::pair<std::vector<double>, std::vector<double>> recover_coefficients(
    const CoefficientTable& table, double limit_a, double limit_b, int k_max);

std::pair<std::vector<double>, std::vector<double>> recover_coefficients(
    const JostTable& table, int k_max);

inline cplx wronskian(cplx xk, cplx xk1, cplx yk, cplx yk1) {
  return xk * yk1 - xk1 * yk;
}

}  // namespace webscatter
