#include "webscatter/jost.hpp"

#include <cmath>
#include <sstream>

namespace webscatter {

void LaurentPoly::add(int m, double v) {
  if (coef.empty()) {
    min_pow = m;
    coef.push_back(v);
    return;
  }
  if (m < min_pow) {
    coef.insert(coef.begin(), min_pow - m, 0.0);
    min_pow = m;
  } else if (m > max_pow()) {
    coef.resize(m - min_pow + 1, 0.0);
  }
  coef[m - min_pow] += v;
}

cplx LaurentPoly::eval(cplx x) const {
  // Horner over the ascending coefficients, then shift by x^{min_pow}.
  cplx acc = 0.0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * x + *it;
  return acc * std::pow(x, min_pow);
}

cplx LaurentPoly::eval_deriv(cplx x) const {
  cplx acc = 0.0;
  for (int i = static_cast<int>(coef.size()) - 1; i >= 0; --i) {
    const int m = min_pow + i;
    if (m != 0) acc += coef[i] * double(m) * std::pow(x, m - 1);
  }
  return acc;
}

cplx JostTable::eval(int k, cplx theta) const {
  if (k >= stored()) return std::pow(theta, k);
  return c_of(k) * poly[k].eval(theta);
}

cplx JostTable::eval_deriv_theta(int k, cplx theta) const {
  if (k >= stored()) return double(k) * std::pow(theta, k - 1);
  return c_of(k) * poly[k].eval_deriv(theta);
}

namespace {

// One backward step of the free-limit recurrence written for coefficient
// lists: b(k-1) e(k-1) = (frak_a(k) - a + b(th + 1/th)) e(k) - frak_b(k) e(k+1).
LaurentPoly backward_step(const ChannelSpec& ch, int k, const LaurentPoly& ek,
                          const LaurentPoly& ek1) {
  LaurentPoly out;
  const double d = ch.diag_at(k) - ch.limit_a;
  const double inv = 1.0 / ch.hop_at(k - 1);
  for (int m = ek.min_pow; m <= ek.max_pow(); ++m) {
    const double v = ek.at(m);
    if (v == 0.0) continue;
    out.add(m, d * v * inv);
    out.add(m + 1, ch.limit_b * v * inv);
    out.add(m - 1, ch.limit_b * v * inv);
  }
  for (int m = ek1.min_pow; m <= ek1.max_pow(); ++m) {
    const double v = ek1.at(m);
    if (v != 0.0) out.add(m, -ch.hop_at(k) * v * inv);
  }
  return out;
}

std::vector<LaurentPoly> backward_tables(const ChannelSpec& ch, int seed_pow) {
  const int k0 = ch.support;
  std::vector<LaurentPoly> raw(k0 + 3);
  raw[k0 + 1].add(seed_pow > 0 ? k0 + 1 : -(k0 + 1), 1.0);
  raw[k0 + 2].add(seed_pow > 0 ? k0 + 2 : -(k0 + 2), 1.0);
  for (int k = k0 + 1; k >= 1; --k)
    raw[k - 1] = backward_step(ch, k, raw[k], raw[k + 1]);
  return raw;
}

}  // namespace

JostTable build_jost(const ChannelSpec& ch) {
  ch.validate();
  JostTable t;
  t.support = ch.support;
  t.limit_a = ch.limit_a;
  t.limit_b = ch.limit_b;
  auto raw = backward_tables(ch, +1);
  t.poly.resize(raw.size());
  t.cnorm.resize(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const double lead = raw[k].at(static_cast<int>(k));
    t.cnorm[k] = lead;
    t.poly[k] = raw[k];
    for (double& c : t.poly[k].coef) c /= lead;
  }
  return t;
}

std::vector<LaurentPoly> build_second(const ChannelSpec& ch) {
  ch.validate();
  return backward_tables(ch, -1);
}

std::vector<cplx> build_p(const ChannelSpec& ch, cplx lambda, int k_max) {
  std::vector<cplx> p(k_max + 1);
  p[0] = 1.0;
  if (k_max >= 1) p[1] = 0.0;
  for (int k = 1; k < k_max; ++k)
    p[k + 1] =
        ((ch.diag_at(k) - lambda) * p[k] - ch.hop_at(k - 1) * p[k - 1]) /
        ch.hop_at(k);
  return p;
}

std::pair<std::vector<double>, std::vector<double>> recover_coefficients(
    const CoefficientTable& table, double limit_a, double limit_b, int k_max) {
  std::vector<double> diag(k_max), hop(k_max);
  for (int k = 1; k <= k_max; ++k) {
    const double da = table.a(k - 1, k) - table.a(k, k + 1);
    diag[k - 1] = limit_a + limit_b * da;
    const double bb =
        da * table.a(k, k + 1) + table.a(k, k + 2) - table.a(k - 1, k + 1) + 1.0;
    if (bb <= 0.0) {
      std::ostringstream msg;
      msg << "coefficient recovery failed at k=" << k
          << ": non-positive value under the square root (" << bb << ")";
      throw ReconstructionError(msg.str());
    }
    hop[k - 1] = limit_b * std::sqrt(bb);
  }
  return {diag, hop};
}

namespace {
struct JostCoeffView : CoefficientTable {
  const JostTable& t;
  explicit JostCoeffView(const JostTable& tt) : t(tt) {}
  double a(int k, int m) const override { return t.coeff(k, m); }
};
}  // namespace

std::pair<std::vector<double>, std::vector<double>> recover_coefficients(
    const JostTable& table, int k_max) {
  JostCoeffView view(table);
  return recover_coefficients(view, table.limit_a, table.limit_b, k_max);
}

}  // namespace webscatter
