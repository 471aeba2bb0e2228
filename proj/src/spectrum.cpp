#include "webscatter/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace webscatter {

namespace {

// det T(omega) for real omega in (-1,1): all data real there, so the
// determinant is real. Returns NaN where the resolvent has a pole.
double det_t_real(const Model& m, double w) {
  try {
    return std::real(t_matrix(m, cplx(w)).determinant());
  } catch (const PoleError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo) {
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (!std::isfinite(fm)) break;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Real zeros of a continuous function on [lo, hi] by dense scan + bisection.
std::vector<double> scan_zeros(const std::function<double(double)>& f,
                               double lo, double hi, int n) {
  std::vector<double> roots;
  double xp = lo, fp = f(xp);
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double fx = f(x);
    if (std::isfinite(fx) && fx == 0.0)
      roots.push_back(x);  // grid point is an exact root; no bracket exists
    else if (std::isfinite(fp) && std::isfinite(fx) && fp * fx < 0.0)
      roots.push_back(bisect(f, xp, x, fp));
    xp = x;
    fp = fx;
  }
  return roots;
}

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
  return f1 < f2 ? x1 : x2;
}

// The two roots of b_s th^2 + (lambda - a_s) th + b_s = 0.
std::pair<cplx, cplx> theta_roots(double as, double bs, cplx lam) {
  const cplx u = (as - lam) / (2.0 * bs);
  const cplx d = std::sqrt(u * u - 1.0);
  return {u + d, u - d};
}

cplx pick_near(std::pair<cplx, cplx> roots, cplx prev) {
  return std::abs(roots.first - prev) <= std::abs(roots.second - prev)
             ? roots.first
             : roots.second;
}

// Points omega where the resolvent R(lambda(omega)) has a pole; they must be
// kept outside residue contours.
std::vector<cplx> resolvent_pole_points(const Model& m) {
  std::vector<cplx> pts;
  for (int j = 0; j < m.sys.central_eigenvalues().size(); ++j) {
    const double u = (m.chart.a() - m.sys.central_eigenvalues()[j]) /
                     (2.0 * m.chart.b());
    if (std::abs(u) >= 1.0) {
      pts.emplace_back(u - std::copysign(std::sqrt(u * u - 1.0), u), 0.0);
    } else {
      const double im = std::sqrt(1.0 - u * u);
      pts.emplace_back(u, im);
      pts.emplace_back(u, -im);
    }
  }
  return pts;
}

}  // namespace

std::vector<PoleSeed> find_poles(const Model& m) {
  std::vector<PoleSeed> seeds;
  const double eps = kEdgeExclusion;

  // (i) sign changes of det T on (-1,1)\{0}.
  auto f = [&](double w) { return det_t_real(m, w); };
  for (auto [lo, hi] : {std::pair{-1.0 + eps, -eps}, std::pair{eps, 1.0 - eps}})
    for (double r : scan_zeros(f, lo, hi, 4000))
      if (std::abs(det_t_real(m, r)) < 1e-6)
        seeds.push_back({cplx(r, 0.0), "detT"});

  // (ii) real zeros of e_s(1, theta) mapped back to omega.
  for (int s = 0; s < m.channels(); ++s) {
    if (m.sys.channel(s).support < 1) continue;
    auto g = [&](double th) { return std::real(m.jost[s].eval(1, cplx(th))); };
    for (auto [lo, hi] : {std::pair{-1.0 + eps, -eps}, std::pair{eps, 1.0 - eps}})
      for (double t : scan_zeros(g, lo, hi, 2000)) {
        const double lam = m.sys.channel(s).limit_a -
                           m.sys.channel(s).limit_b * (t + 1.0 / t);
        const double u = (m.chart.a() - lam) / (2.0 * m.chart.b());
        if (std::abs(u) > 1.0 + 1e-12) {
          const double w = u - std::copysign(std::sqrt(u * u - 1.0), u);
          if (std::abs(w) > eps && std::abs(w) < 1.0 - eps)
            seeds.push_back({cplx(w, 0.0), "jost1"});
        } else {
          seeds.push_back({cplx(u, std::sqrt(std::max(0.0, 1.0 - u * u))),
                           "jost1"});
        }
      }
  }

  // (iii) minima of |det T| on the upper half circle.
  {
    const int n = 4096;
    auto h = [&](double phi) {
      try {
        return std::abs(t_matrix(m, std::polar(1.0, phi)).determinant());
      } catch (const PoleError&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    auto near_edge = [&](double phi) {
      if (phi < eps || kPi - phi < eps) return true;
      for (double e : m.chart.edge_angles())
        if (std::abs(phi - e) < eps) return true;
      return false;
    };
    std::vector<double> val(n + 1);
    for (int j = 0; j <= n; ++j) {
      const double phi = eps + (kPi - 2 * eps) * j / n;
      val[j] = near_edge(phi) ? std::numeric_limits<double>::quiet_NaN()
                              : h(phi);
    }
    for (int j = 1; j < n; ++j) {
      if (!std::isfinite(val[j - 1]) || !std::isfinite(val[j]) ||
          !std::isfinite(val[j + 1]))
        continue;
      // The grid only brackets the dip; a simple zero reaches ~slope*h at
      // the nearest grid point, so trigger refinement well above the final
      // acceptance threshold and let golden_min decide. A bracketed zero of
      // |det| makes a V-shape whose sample sits below ~25% of the two-step
      // neighbours regardless of the slope, so also trigger on that
      // scale-free signature (a smooth nonzero minimum stays near 100%).
      const bool vshape = j >= 2 && j + 2 <= n &&
                          std::isfinite(val[j - 2]) &&
                          std::isfinite(val[j + 2]) &&
                          val[j] < 0.125 * (val[j - 2] + val[j + 2]);
      if (val[j] <= val[j - 1] && val[j] <= val[j + 1] &&
          (val[j] < 1e-2 || vshape)) {
        const double plo = eps + (kPi - 2 * eps) * (j - 1) / n;
        const double phi = eps + (kPi - 2 * eps) * (j + 1) / n;
        const double pm = golden_min(h, plo, phi);
        if (h(pm) < kCircleDetThreshold && !near_edge(pm))
          seeds.push_back({std::polar(1.0, pm), "circle"});
      }
    }
  }

  // Deduplicate.
  std::vector<PoleSeed> out;
  for (const auto& s : seeds) {
    bool dup = false;
    for (const auto& o : out)
      if (std::abs(s.omega - o.omega) < 1e-7) dup = true;
    if (!dup) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const PoleSeed& x, const PoleSeed& y) {
    return std::real(x.omega) < std::real(y.omega);
  });
  return out;
}

double safe_contour_radius(const Model& m, cplx omega_hat,
                           const std::vector<PoleSeed>& all) {
  double d = std::min({std::abs(omega_hat), std::abs(omega_hat - 1.0),
                       std::abs(omega_hat + 1.0)});
  for (const auto& s : all) {
    const double v = std::abs(omega_hat - s.omega);
    if (v > 1e-9) d = std::min(d, v);
    const double vc = std::abs(omega_hat - std::conj(s.omega));
    if (vc > 1e-9) d = std::min(d, vc);
  }
  for (double e : m.chart.edge_angles()) {
    d = std::min(d, std::abs(omega_hat - std::polar(1.0, e)));
    d = std::min(d, std::abs(omega_hat - std::polar(1.0, -e)));
  }
  for (cplx p : resolvent_pole_points(m)) d = std::min(d, std::abs(omega_hat - p));
  const double r = std::min(0.5 * d, 0.05);
  if (r < 1e-6)
    throw std::runtime_error("residue contour radius collapsed; pole too close"
                             " to an excluded point");
  return r;
}

namespace {

// One trapezoid pass around the contour with theta tracked by continuity.
Eigen::MatrixXcd contour_pass(const Model& m, cplx omega_hat, int k, double r,
                              int npts) {
  const int c = m.channels();
  // Anchor strictly inside the disk where the chart branch is authoritative.
  const cplx anchor = omega_hat * (1.0 - r);
  std::vector<cplx> th(c);
  for (int s = 0; s < c; ++s) th[s] = m.chart.theta(s, anchor);

  auto advance = [&](cplx w) {
    const cplx lam = m.chart.lambda_of_omega(w);
    for (int s = 0; s < c; ++s)
      th[s] = pick_near(theta_roots(m.sys.channel(s).limit_a,
                                    m.sys.channel(s).limit_b, lam),
                        th[s]);
  };
  const cplx first = omega_hat + r;
  for (int j = 1; j <= 16; ++j)
    advance(anchor + (first - anchor) * (double(j) / 16.0));
  const std::vector<cplx> th_start = th;

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(c, c);
  for (int j = 0; j < npts; ++j) {
    const cplx w = omega_hat + std::polar(r, 2.0 * kPi * j / npts);
    advance(w);
    acc += u_matrix_theta(m, k, w, th) * (w - omega_hat);
  }
  advance(first);  // close the loop
  for (int s = 0; s < c; ++s)
    if (std::abs(th[s] - th_start[s]) > 1e-6)
      throw std::runtime_error(
          "residue contour crossed a branch point (theta monodromy)");
  return acc / double(npts);
}

}  // namespace

Eigen::MatrixXcd residue_matrix(const Model& m, cplx omega_hat, int k,
                                double radius) {
  if (radius <= 0.0)
    radius = safe_contour_radius(m, omega_hat, find_poles(m));
  Eigen::MatrixXcd res = contour_pass(m, omega_hat, k, radius, 64);
  for (int npts = 128; npts <= 4096; npts *= 2) {
    Eigen::MatrixXcd next = contour_pass(m, omega_hat, k, radius, npts);
    const double diff = (next - res).norm();
    res = next;
    if (diff < 1e-9 * (1.0 + res.norm())) break;
  }
  // M(omega_hat) = E(k, omega_hat)^{-1} Res U(k, .).
  for (int s = 0; s < m.channels(); ++s) {
    const cplx ek = m.jost[s].eval(k, m.chart.theta(s, omega_hat));
    res.row(s) /= ek;
  }
  return res;
}

double level_energy(const Model& m, const DiscreteLevel& level, int nu) {
  const cplx th = level.theta[nu];
  const double bn = m.sys.channel(nu).limit_b;
  const cplx wbar = std::conj(level.omega_hat);
  const cplx factor = bn * (1.0 - 1.0 / (th * th)) /
                      (m.chart.b() * (1.0 - 1.0 / (wbar * wbar)));
  const cplx e = -factor * th * level.m_raw(nu, nu);
  if (std::abs(std::imag(e)) > 1e-7 * (1.0 + std::abs(e)))
    throw std::runtime_error("level energy has a non-real residue component");
  if (std::real(e) < -1e-9)
    throw std::runtime_error("negative level energy: inconsistent residue");
  return std::max(0.0, std::real(e));
}

EigenfunctionSamples eigenfunction_samples(const Model& m,
                                           const DiscreteLevel& level, int nu,
                                           int k_max) {
  const int c = m.channels();
  EigenfunctionSamples out;
  out.values.assign(c, std::vector<cplx>(k_max + 1));
  for (int s = 0; s < c; ++s)
    for (int k = 0; k <= k_max; ++k)
      out.values[s][k] = m.jost[s].eval(k, level.theta[s]) * level.m_raw(s, nu);
  Eigen::VectorXcd xi1(c);
  for (int s = 0; s < c; ++s) xi1[s] = out.values[s][1];
  out.interior = m.sys.prolong_to_interior(xi1, cplx(level.lambda_hat));
  return out;
}

std::vector<DiscreteLevel> compute_levels(const Model& m) {
  const auto seeds = find_poles(m);
  const int k1 = m.sys.max_support() + 1;
  std::vector<DiscreteLevel> levels;
  for (const auto& seed : seeds) {
    // Shrink the contour until the residue is stable under radius halving
    // (simplicity check): the safe radius only accounts for known seeds, so
    // a resolvent resonance just past the unit circle can sit inside the
    // initial contour and contaminate the integral.
    double r = safe_contour_radius(m, seed.omega, seeds);
    Eigen::MatrixXcd m1 = residue_matrix(m, seed.omega, k1, r);
    Eigen::MatrixXcd m2;
    for (;;) {
      Eigen::MatrixXcd mh = residue_matrix(m, seed.omega, k1, 0.5 * r);
      m2 = residue_matrix(m, seed.omega, k1 + 1, 0.5 * r);
      const bool r_stable = (m1 - mh).norm() < 1e-6 * (1.0 + mh.norm());
      const bool k_stable = (mh - m2).norm() < 1e-7 * (1.0 + mh.norm());
      m1 = mh;
      r *= 0.5;
      if (r_stable && k_stable) break;
      if (r < 1e-5)
        throw std::runtime_error(
            "residue depends on k or on the contour radius: "
            "pole is not simple");
    }
    if (m1.norm() < 1e-9) continue;  // spurious seed, zero residue

    DiscreteLevel lv;
    lv.omega_hat = seed.omega;
    lv.on_circle = std::abs(std::abs(seed.omega) - 1.0) < 1e-9;
    lv.lambda_hat = std::real(m.chart.lambda_of_omega(seed.omega));
    lv.provenance = seed.provenance;
    lv.m_raw = m1;
    lv.m_re = m1.real();
    lv.theta.resize(m.channels());
    lv.dtheta.resize(m.channels());
    for (int s = 0; s < m.channels(); ++s) {
      lv.theta[s] = m.chart.theta(s, seed.omega);
      lv.dtheta[s] = m.chart.dtheta_domega(s, seed.omega);
    }
    lv.energy.resize(m.channels());
    for (int s = 0; s < m.channels(); ++s)
      lv.energy[s] = level_energy(m, lv, s);
    levels.push_back(std::move(lv));
  }
  std::sort(levels.begin(), levels.end(),
            [](const DiscreteLevel& x, const DiscreteLevel& y) {
              return x.lambda_hat < y.lambda_hat;
            });
  return levels;
}

}  // namespace webscatter
