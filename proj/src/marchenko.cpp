#include "webscatter/marchenko.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace webscatter {

SpectralChart SpectralDataset::chart() const {
  std::vector<std::pair<double, double>> ab;
  for (const auto& ch : channels) ab.emplace_back(ch.limit_a, ch.limit_b);
  return SpectralChart::from_limits(std::move(ab));
}

namespace {

// Gauss-Legendre nodes on [lo, hi] through the cosine map
// x = lo + (hi-lo)(1 - cos(pi u))/2; the Jacobian vanishes like sqrt at both
// endpoints, which absorbs the 1/sqrt edge singularities of the integrands.
void cosine_mapped_nodes(int n, double lo, double hi,
                         std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> u, gw;
  gauss_legendre(n, 0.0, 1.0, u, gw);
  for (int i = 0; i < n; ++i) {
    x.push_back(lo + (hi - lo) * 0.5 * (1.0 - std::cos(kPi * u[i])));
    w.push_back(gw[i] * (hi - lo) * 0.5 * kPi * std::sin(kPi * u[i]));
  }
}

// Geometrically graded panels toward both endpoints of [lo, hi], plain
// Gauss-Legendre on each panel and a cosine-mapped innermost panel.  The
// grading resolves both the sqrt endpoint behaviour and near-endpoint
// resonance peaks (threshold resonances make the cross data grow like
// 1/(1 - theta) toward a band-edge image) that a single mapped rule cannot.
void graded_panel_nodes(int budget, double lo, double hi,
                        std::vector<double>& x, std::vector<double>& w) {
  const double len = hi - lo;
  const int depth = 12;  // panel ratio 1/4: innermost width ~ len * 3e-8
  const int per_panel = std::max(6, budget / (2 * depth + 2));
  std::vector<double> cuts;
  cuts.push_back(lo);
  for (int j = depth; j >= 1; --j) cuts.push_back(lo + 0.5 * len * std::pow(0.25, j));
  for (int j = 1; j <= depth; ++j) cuts.push_back(hi - 0.5 * len * std::pow(0.25, j));
  cuts.push_back(hi);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (i == 0 || i + 2 == cuts.size()) {
      cosine_mapped_nodes(per_panel, cuts[i], cuts[i + 1], x, w);
    } else {
      std::vector<double> px, pw;
      gauss_legendre(per_panel, cuts[i], cuts[i + 1], px, pw);
      x.insert(x.end(), px.begin(), px.end());
      w.insert(w.end(), pw.begin(), pw.end());
    }
  }
}

// Sub-segment boundaries of one closed segment: the segment endpoints plus
// the images of the other channels' band edges (square-root kinks).
std::vector<double> segment_cuts(const SpectralChart& chart, int sigma,
                                 const Segment& seg);

// Image of a band-edge energy on the real theta axis of channel sigma, or
// NaN when the edge lies inside the sigma band.
double theta_image(double as, double bs, double edge) {
  const double u = (as - edge) / (2.0 * bs);
  if (std::abs(u) <= 1.0) return std::numeric_limits<double>::quiet_NaN();
  return u - std::copysign(std::sqrt(u * u - 1.0), u);
}

std::vector<double> segment_cuts(const SpectralChart& chart, int sigma,
                                 const Segment& seg) {
  const double as = chart.limit_a(sigma), bs = chart.limit_b(sigma);
  std::vector<double> cuts = {seg.lo, seg.hi};
  for (int v = 0; v < chart.channels(); ++v) {
    if (v == sigma) continue;
    for (double edge : {chart.limit_a(v) - 2 * chart.limit_b(v),
                        chart.limit_a(v) + 2 * chart.limit_b(v)}) {
      const double t = theta_image(as, bs, edge);
      if (std::isfinite(t) && t > seg.lo + 1e-12 && t < seg.hi - 1e-12)
        cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

// Hurwitz zeta for negative real s by Euler-Maclaurin continuation; used for
// the endpoint corrections of the uniform-grid circle quadrature.
double hurwitz_zeta(double s, double a) {
  static const double bern[] = {1.0 / 6,  -1.0 / 30,  1.0 / 42,
                                -1.0 / 30, 5.0 / 66,  -691.0 / 2730};
  const int n = 24;
  double tot = 0.0;
  for (int k = 0; k < n; ++k) tot += std::pow(a + k, -s);
  const double an = a + n;
  tot += std::pow(an, 1.0 - s) / (s - 1.0);
  tot += 0.5 * std::pow(an, -s);
  double poch = s, fact = 2.0;
  for (int j = 1; j <= 6; ++j) {
    tot += bern[j - 1] / fact * poch * std::pow(an, -s - 2 * j + 1);
    poch *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  return tot;
}

// One-sided local model c0 + c_h sqrt(t) + c1 t + c_3h t^{3/2} + c2 t^2
// fitted to the samples nearest a kink; returns {c_h, c1, c_3h}.
struct KinkFit {
  cplx c_half, c_one, c_three_half;
  bool ok = false;
};

KinkFit fit_kink_side(const std::vector<cplx>& s, int n, int j0, int step,
                      double alpha, double h, int npts) {
  KinkFit out;
  if (npts < 6) return out;
  const double scale = (alpha + npts - 1) * h;
  Eigen::MatrixXd v(npts, 5);
  Eigen::VectorXcd rhs(npts);
  for (int i = 0; i < npts; ++i) {
    const double tau = (alpha + i) * h / scale;
    const double r = std::sqrt(tau);
    v(i, 0) = 1.0;
    v(i, 1) = r;
    v(i, 2) = tau;
    v(i, 3) = tau * r;
    v(i, 4) = tau * tau;
    rhs[i] = s[((j0 + step * i) % n + n) % n];
  }
  Eigen::VectorXcd c =
      v.cast<cplx>().colPivHouseholderQr().solve(rhs).eval();
  out.c_half = c[1] / std::sqrt(scale);
  out.c_one = c[2] / scale;
  out.c_three_half = c[3] / (scale * std::sqrt(scale));
  out.ok = true;
  return out;
}

}  // namespace

ClosedQuadrature closed_segment_quadrature(const SpectralChart& chart,
                                           int sigma, int nodes_per_segment) {
  ClosedQuadrature out;
  for (const Segment& seg : chart.segments(sigma)) {
    const std::vector<double> cuts = segment_cuts(chart, sigma, seg);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      graded_panel_nodes(nodes_per_segment, cuts[i], cuts[i + 1], out.theta,
                         out.weight);
  }
  return out;
}

ClosedQuadrature adaptive_closed_quadrature(
    const SpectralChart& chart, int sigma, int nodes_per_segment,
    const std::function<double(double)>& integrand_mag) {
  ClosedQuadrature out;
  const int depth = 12;
  const int per_panel = std::max(6, nodes_per_segment / (2 * depth + 2));
  const std::size_t node_cap = 200000;

  auto estimate = [&](double lo, double hi) {
    std::vector<double> x, w;
    gauss_legendre(per_panel, lo, hi, x, w);
    double tot = 0.0;
    for (int i = 0; i < per_panel; ++i) tot += w[i] * integrand_mag(x[i]);
    return tot;
  };
  auto emit = [&](double lo, double hi) {
    std::vector<double> x, w;
    gauss_legendre(per_panel, lo, hi, x, w);
    out.theta.insert(out.theta.end(), x.begin(), x.end());
    out.weight.insert(out.weight.end(), w.begin(), w.end());
    if (out.theta.size() > node_cap)
      throw std::runtime_error(
          "adaptive closed-segment quadrature did not converge "
          "(near-singular scattering data on channel " +
          std::to_string(sigma) + ")");
  };

  for (const Segment& seg : chart.segments(sigma)) {
    const std::vector<double> cuts = segment_cuts(chart, sigma, seg);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      const double len = hi - lo;
      // Same base layout as graded_panel_nodes: tiny cosine-mapped panels
      // absorbing the sqrt endpoint singularities, geometric grading toward
      // both ends, plain Gauss-Legendre panels in between.
      std::vector<double> pc;
      pc.push_back(lo);
      for (int j = depth; j >= 1; --j)
        pc.push_back(lo + 0.5 * len * std::pow(0.25, j));
      for (int j = 1; j <= depth; ++j)
        pc.push_back(hi - 0.5 * len * std::pow(0.25, j));
      pc.push_back(hi);

      // Scale for the refinement tolerance from a first pass over the
      // interior panels (the cosine endpoint panels stay fixed).
      double scale = 0.0;
      std::vector<double> whole(pc.size() - 1, 0.0);
      for (std::size_t p = 1; p + 2 < pc.size(); ++p) {
        whole[p] = estimate(pc[p], pc[p + 1]);
        scale += std::abs(whole[p]);
      }
      const double tol = 1e-11 * (1.0 + scale);

      std::function<void(double, double, double, int)> refine =
          [&](double a, double b, double est, int d) {
            const double mid = 0.5 * (a + b);
            const double left = estimate(a, mid);
            const double right = estimate(mid, b);
            if (d >= 40)
              throw std::runtime_error(
                  "adaptive closed-segment quadrature did not converge "
                  "(near-singular scattering data on channel " +
                  std::to_string(sigma) + ")");
            if (std::abs(left + right - est) <= tol) {
              emit(a, mid);
              emit(mid, b);
              return;
            }
            refine(a, mid, left, d + 1);
            refine(mid, b, right, d + 1);
          };

      for (std::size_t p = 0; p + 1 < pc.size(); ++p) {
        if (p == 0 || p + 2 == pc.size()) {
          cosine_mapped_nodes(per_panel, pc[p], pc[p + 1], out.theta,
                              out.weight);
        } else if (std::abs(whole[p]) <= tol) {
          emit(pc[p], pc[p + 1]);
        } else {
          refine(pc[p], pc[p + 1], whole[p], 0);
        }
      }
    }
  }
  return out;
}

std::vector<cplx> fourier_reflection(const SpectralDataset& d, int sigma,
                                     int n_min, int n_max) {
  const auto& s = d.channels[sigma].s_diag;
  const int n = static_cast<int>(s.size());
  std::vector<cplx> out(n_max - n_min + 1, cplx(0.0));
  if (n == 0) return out;
  // theta_j = exp(2 pi i (j+1/2)/n); (1/2 pi i) sum s theta^{m-1} dtheta
  // collapses to (1/n) sum_j s_j theta_j^m.
  for (int j = 0; j < n; ++j) {
    const cplx th = std::polar(1.0, 2.0 * kPi * (j + 0.5) / n);
    cplx p = std::pow(th, n_min);
    for (int m = n_min; m <= n_max; ++m) {
      out[m - n_min] += s[j] * p;
      p *= th;
    }
  }
  for (auto& v : out) v /= double(n);

  // The reflection coefficient has sqrt-type kinks in theta at the images of
  // the other channels' band edges, which caps the uniform-grid quadrature at
  // O(h^{3/2}). Correct the leading endpoint terms (Euler-Maclaurin with
  // Hurwitz-zeta coefficients) using locally fitted one-sided models.
  const double h = 2.0 * kPi / n;
  const double as = d.channels[sigma].limit_a;
  const double bs = d.channels[sigma].limit_b;
  std::vector<double> kinks;
  for (int v = 0; v < d.channel_count(); ++v) {
    if (v == sigma) continue;
    for (double edge : {d.channels[v].limit_a - 2 * d.channels[v].limit_b,
                        d.channels[v].limit_a + 2 * d.channels[v].limit_b}) {
      const double u = (as - edge) / (2.0 * bs);
      if (std::abs(u) < 1.0 - 1e-6) {
        const double phi = std::acos(u);
        kinks.push_back(phi);
        kinks.push_back(2.0 * kPi - phi);
      }
    }
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end(),
                          [](double x, double y) { return y - x < 1e-12; }),
              kinks.end());
  for (double phi_e : kinks) {
    // half the distance to the nearest other special angle bounds the stencil
    double window = std::min(phi_e, 2.0 * kPi - phi_e);
    window = std::min(window, std::abs(phi_e - kPi));
    for (double o : kinks)
      if (std::abs(o - phi_e) > 1e-12)
        window = std::min(window, std::abs(o - phi_e));
    const int npts = std::min(10, static_cast<int>(0.5 * window / h));
    const int jr = static_cast<int>(std::ceil(phi_e / h - 0.5));
    const double alpha_r = (jr + 0.5) - phi_e / h;
    const double alpha_l = 1.0 - alpha_r;
    KinkFit right = fit_kink_side(s, n, jr, +1, alpha_r, h, npts);
    KinkFit left = fit_kink_side(s, n, jr - 1, -1, alpha_l, h, npts);
    if (!right.ok || !left.ok) continue;
    const double zhr = hurwitz_zeta(-0.5, alpha_r);
    const double zhl = hurwitz_zeta(-0.5, alpha_l);
    const double z1 = hurwitz_zeta(-1.0, alpha_r);  // = value at alpha_l too
    const double z3r = hurwitz_zeta(-1.5, alpha_r);
    const double z3l = hurwitz_zeta(-1.5, alpha_l);
    const double h32 = h * std::sqrt(h), h52 = h32 * h;
    for (int m = n_min; m <= n_max; ++m) {
      const cplx im(0.0, double(m));
      const cplx err =
          (right.c_half * zhr + left.c_half * zhl) * h32 +
          (right.c_one + left.c_one) * z1 * h * h +
          ((right.c_three_half + im * right.c_half) * z3r +
           (left.c_three_half - im * left.c_half) * z3l) *
              h52;
      out[m - n_min] -= std::polar(1.0, m * phi_e) * err / (2.0 * kPi);
    }
  }
  return out;
}

std::vector<double> closed_channel_kernel(const SpectralDataset& d, int sigma,
                                          int n_max) {
  std::vector<double> out(n_max, 0.0);
  const auto& nodes = d.closed_nodes[sigma];
  if (nodes.empty()) return out;
  SpectralChart chart = d.chart();
  ClosedQuadrature quad;
  if (sigma < static_cast<int>(d.closed_weights.size()) &&
      d.closed_weights[sigma].size() == nodes.size()) {
    quad.theta = nodes;
    quad.weight = d.closed_weights[sigma];
  } else {
    quad = closed_segment_quadrature(chart, sigma, d.nodes_per_segment);
    if (quad.theta.size() != nodes.size())
      throw std::invalid_argument(
          "closed-channel data does not match the quadrature layout");
  }

  const int c = d.channel_count();
  const double bs = d.channels[sigma].limit_b;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double th = quad.theta[i];
    const cplx w = chart.omega_of_theta(sigma, th);
    const double lam = std::real(chart.lambda_of_omega(w));
    cplx phi = 0.0;
    bool any_open = false;
    double max_mag = 0.0;
    for (int v = 0; v < c; ++v) {
      if (v == sigma) continue;
      const double mag = d.cross_mag[sigma][v].empty()
                             ? 0.0
                             : d.cross_mag[sigma][v][i];
      max_mag = std::max(max_mag, mag);
      const double av = d.channels[v].limit_a, bv = d.channels[v].limit_b;
      if (lam <= av - 2 * bv || lam >= av + 2 * bv) continue;  // v closed
      any_open = true;
      const cplx thv = chart.theta(v, w);
      phi += mag * mag * bs * (1.0 / th - th) / (bv * (1.0 / thv - thv));
    }
    if (!any_open && max_mag > 1e-12)
      throw std::invalid_argument(
          "cross magnitudes present where no channel is open");
    const cplx fac = phi * quad.weight[i] / (2.0 * kPi * cplx(0.0, 1.0));
    double p = 1.0;  // theta^{n-1} starting at n = 1
    for (int n = 1; n <= n_max; ++n) {
      out[n - 1] += std::real(fac * p);
      p *= th;
    }
  }
  return out;
}

std::vector<double> discrete_kernel(const SpectralDataset& d, int nu,
                                    int n_max) {
  std::vector<double> out(n_max, 0.0);
  for (const auto& lv : d.levels) {
    const cplx th = lv.theta[nu];
    const cplx dth = lv.dtheta[nu];
    cplx p = 1.0;
    for (int n = 1; n <= n_max; ++n) {
      out[n - 1] += std::real(dth * lv.m_diag[nu] * p);
      p *= th;
    }
  }
  return out;
}

MarchenkoKernel assemble_kernel(const SpectralDataset& d, int nu, int n_max) {
  MarchenkoKernel k;
  k.nu = nu;
  k.n_max = n_max;
  std::vector<cplx> st = fourier_reflection(d, nu, 1, n_max);
  k.q = closed_channel_kernel(d, nu, n_max);
  k.m = discrete_kernel(d, nu, n_max);
  k.s_tilde.resize(n_max);
  k.f.resize(n_max);
  for (int n = 1; n <= n_max; ++n) {
    const double im = std::abs(std::imag(st[n - 1]));
    k.max_imag = std::max(k.max_imag, im);
    if (im > 1e-9 * (1.0 + std::abs(st[n - 1]))) {
      std::ostringstream msg;
      msg << "kernel assembly: imaginary residue " << im << " at n=" << n;
      throw ReconstructionError(msg.str());
    }
    k.s_tilde[n - 1] = std::real(st[n - 1]);
    k.f[n - 1] = k.s_tilde[n - 1] + k.q[n - 1] - k.m[n - 1];
  }
  return k;
}

MarchenkoRow solve_marchenko(const MarchenkoKernel& kernel, int k,
                             int n_limit) {
  const int q = n_limit - k;
  if (q <= 0) throw std::invalid_argument("solve_marchenko: empty system");
  if (2 * n_limit > kernel.n_max)
    throw std::invalid_argument(
        "solve_marchenko: kernel too short for the requested cutoff");
  auto f = [&](int n) { return kernel.f[n - 1]; };
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(q, q);
  Eigen::VectorXd rhs(q);
  for (int i = 0; i < q; ++i) {
    const int mi = k + 1 + i;
    rhs[i] = -f(k + mi);
    for (int j = 0; j < q; ++j) g(i, j) += f((k + 1 + j) + mi);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible())
    throw ReconstructionError(
        "Marchenko system singular within tolerance: bad kernel data");
  MarchenkoRow row;
  row.k = k;
  Eigen::VectorXd sol = lu.solve(rhs);
  row.residual = (g * sol - rhs).norm();
  row.a.assign(sol.data(), sol.data() + q);
  return row;
}

namespace {
struct RowTable : CoefficientTable {
  const std::vector<MarchenkoRow>& rows;
  explicit RowTable(const std::vector<MarchenkoRow>& r) : rows(r) {}
  double a(int k, int m) const override {
    if (m == k) return 1.0;
    if (k < 0 || k >= static_cast<int>(rows.size())) return 0.0;
    return rows[k].coeff(m);
  }
};
}  // namespace

RecoveredChannel recover_channel(const MarchenkoKernel& kernel, double limit_a,
                                 double limit_b, int k_max, int n_limit) {
  if (n_limit <= 0) {
    int last = 0;
    for (int n = 1; n <= kernel.n_max; ++n)
      if (std::abs(kernel.f[n - 1]) >= 1e-13) last = n;
    n_limit = std::max(last, k_max + 3);
  }
  n_limit = std::min(n_limit, kernel.n_max / 2);
  if (n_limit < k_max + 3)
    throw std::invalid_argument("recover_channel: kernel too short");

  std::vector<MarchenkoRow> rows;
  for (int k = 0; k <= k_max + 1; ++k)
    rows.push_back(solve_marchenko(kernel, k, n_limit));

  RowTable table(rows);
  auto [diag, hop] = recover_coefficients(table, limit_a, limit_b, k_max);
  RecoveredChannel out;
  out.diag = std::move(diag);
  out.hop = std::move(hop);
  for (const auto& r : rows) out.residuals.push_back(r.residual);
  return out;
}

namespace {

// Circle split at every band-edge angle (upper and lower reflections), with
// cosine-mapped Gauss nodes per arc. visit(omega, weight) is called in a
// fixed order; weights include d omega = i omega d phi.
void circle_arcs(const SpectralChart& chart, int nodes_per_arc,
                 const std::function<void(cplx, cplx)>& visit) {
  std::vector<double> cuts = {0.0, kPi, 2.0 * kPi};
  for (double e : chart.edge_angles()) {
    cuts.push_back(e);
    cuts.push_back(2.0 * kPi - e);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-12) continue;
    std::vector<double> phi, w;
    cosine_mapped_nodes(nodes_per_arc, cuts[i], cuts[i + 1], phi, w);
    for (std::size_t j = 0; j < phi.size(); ++j) {
      const cplx om = std::polar(1.0, phi[j]);
      try {
        visit(om, w[j] * cplx(0.0, 1.0) * om);
      } catch (const std::domain_error&) {
        // Node so close to a band-edge image that theta rounds onto +-1;
        // its cosine-mapped weight is O(1e-10) of the arc, safe to skip.
      }
    }
  }
}

}  // namespace

Eigen::MatrixXcd j_integral_pv(const Model& m, int l, int k,
                               int nodes_per_arc) {
  const int c = m.channels();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(c, c);
  circle_arcs(m.chart, nodes_per_arc, [&](cplx om, cplx dw) {
    Eigen::MatrixXcd u = u_matrix(m, k, om);
    for (int nu = 0; nu < c; ++nu) {
      const cplx th = m.chart.theta(nu, om);
      const cplx row = std::pow(th, l - 1) * m.chart.dtheta_domega(nu, om);
      acc.row(nu) += (row * dw) * u.row(nu);
    }
  });
  return acc / (2.0 * kPi * cplx(0.0, 1.0));
}

cplx q_cross_pv(const Model& m, int nu, int sigma, int n, int nodes_per_arc) {
  cplx acc = 0.0;
  circle_arcs(m.chart, nodes_per_arc, [&](cplx om, cplx dw) {
    ScatteringSample smp = scattering_sample(m, om);
    if (smp.flagged)
      throw NearPoleError("q_cross_pv: sample on a circle pole");
    const cplx th = m.chart.theta(nu, om);
    acc += smp.s(nu, sigma) * std::pow(th, n - 1) *
           m.chart.dtheta_domega(nu, om) * dw;
  });
  return acc / (2.0 * kPi * cplx(0.0, 1.0));
}

cplx q_diag_pv(const Model& m, int sigma, int n, int nodes_per_arc) {
  cplx acc = 0.0;
  const double as = m.sys.channel(sigma).limit_a;
  const double bs = m.sys.channel(sigma).limit_b;
  circle_arcs(m.chart, nodes_per_arc, [&](cplx om, cplx dw) {
    const double lam = std::real(m.chart.lambda_of_omega(om));
    if (lam > as - 2 * bs && lam < as + 2 * bs) return;  // sigma open
    ScatteringSample smp = scattering_sample(m, om);
    const cplx ths = m.chart.theta(sigma, om);
    cplx phi = 0.0;
    for (int v = 0; v < m.channels(); ++v) {
      if (v == sigma || !smp.open[v]) continue;
      const double mag = std::abs(smp.s(sigma, v));
      const cplx thv = smp.theta[v];
      const cplx dv = 1.0 / thv - thv;
      // |s|^2 vanishes at least as fast as this threshold factor, so nodes
      // where it has rounded to zero contribute nothing.
      if (!(std::abs(dv) > 1e-12) || !std::isfinite(mag)) continue;
      phi += mag * mag * bs * (1.0 / ths - ths) /
             (m.sys.channel(v).limit_b * dv);
    }
    acc += phi * std::pow(ths, n - 1) * m.chart.dtheta_domega(sigma, om) * dw;
  });
  // The two conjugate circle arcs traverse the same real theta segment, so
  // the jump of the resolvent boundary values is collected twice; halve.
  return 0.5 * acc / (2.0 * kPi * cplx(0.0, 1.0));
}

double discrete_cross(const std::vector<DiscreteLevel>& levels, int nu,
                      int sigma, int n) {
  double acc = 0.0;
  for (const auto& lv : levels)
    acc += std::real(lv.dtheta[nu] * std::pow(lv.theta[nu], n - 1)) *
           lv.m_re(nu, sigma);
  return acc;
}

}  // namespace webscatter
