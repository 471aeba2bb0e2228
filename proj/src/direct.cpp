#include "webscatter/direct.hpp"

#include <cmath>

namespace webscatter {

Model Model::build(WebSystem s) {
  SpectralChart chart = SpectralChart::build(s);
  std::vector<JostTable> tables;
  tables.reserve(s.channel_count());
  for (const auto& ch : s.channels()) tables.push_back(build_jost(ch));
  return Model{std::move(s), std::move(chart), std::move(tables)};
}

Eigen::MatrixXcd t_matrix_theta(const Model& m, cplx lambda,
                                const std::vector<cplx>& theta) {
  const int c = m.channels();
  Eigen::MatrixXcd r = m.sys.attachment_resolvent(lambda);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(c, c);
  for (int s = 0; s < c; ++s) {
    const cplx e1 = m.jost[s].eval(1, theta[s]);
    const double b0 = m.sys.channel(s).coupling_b0;
    for (int g = 0; g < c; ++g) t(g, s) = -r(g, s) * b0 * e1;
    t(s, s) += m.jost[s].eval(0, theta[s]);
  }
  return t;
}

Eigen::MatrixXcd t_matrix(const Model& m, cplx w) {
  std::vector<cplx> th(m.channels());
  for (int s = 0; s < m.channels(); ++s) th[s] = m.chart.theta(s, w);
  return t_matrix_theta(m, m.chart.lambda_of_omega(w), th);
}

Eigen::MatrixXcd u_matrix_theta(const Model& m, int k, cplx w,
                                const std::vector<cplx>& theta) {
  const int c = m.channels();
  const cplx lam = m.chart.lambda_of_omega(w);
  Eigen::MatrixXcd t = t_matrix_theta(m, lam, theta);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(t);
  const double adet = std::abs(lu.determinant());
  if (adet < kNearPoleRel * t.norm())
    throw NearPoleError("u_matrix: T(omega) is singular within tolerance");
  Eigen::MatrixXcd tinv = lu.inverse();

  Eigen::MatrixXcd u(c, c);
  for (int g = 0; g < c; ++g) {
    const ChannelSpec& ch = m.sys.channel(g);
    const cplx pk = build_p(ch, lam, k)[k];
    const cplx ek = m.jost[g].eval(k, theta[g]);
    for (int s = 0; s < c; ++s)
      u(g, s) = (g == s ? -pk : cplx(0.0)) + ek * tinv(g, s);
  }
  for (int s = 0; s < c; ++s) {
    const ChannelSpec& ch = m.sys.channel(s);
    const cplx e1 = m.jost[s].eval(1, theta[s]);
    if (std::abs(e1) < 1e-13)
      throw NearPoleError("u_matrix: e_sigma(1, theta) vanishes");
    const cplx col = (ch.limit_b / ch.coupling_b0) *
                     (1.0 / theta[s] - theta[s]) / e1;
    u.col(s) *= col;
  }
  return u;
}

Eigen::MatrixXcd u_matrix(const Model& m, int k, cplx w) {
  std::vector<cplx> th(m.channels());
  for (int s = 0; s < m.channels(); ++s) th[s] = m.chart.theta(s, w);
  return u_matrix_theta(m, k, w, th);
}

ScatteringSample scattering_sample(const Model& m, cplx w) {
  const int c = m.channels();
  ScatteringSample out;
  out.omega = w;
  out.lambda = m.chart.lambda_of_omega(w);
  out.theta.resize(c);
  out.open.resize(c);
  for (int s = 0; s < c; ++s) {
    out.theta[s] = m.chart.theta(s, w);
    out.open[s] = std::abs(std::abs(out.theta[s]) - 1.0) <= SpectralChart::kOpenTol;
  }
  out.tmat = t_matrix_theta(m, out.lambda, out.theta);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(out.tmat);
  out.abs_det_t = std::abs(lu.determinant());
  if (out.abs_det_t < kNearPoleRel * out.tmat.norm()) {
    out.flagged = true;
    out.s = Eigen::MatrixXcd::Zero(c, c);
    return out;
  }
  out.tinv = lu.inverse();
  out.cond_t = out.tmat.norm() * out.tinv.norm();
  out.s = Eigen::MatrixXcd::Zero(c, c);

  for (int s = 0; s < c; ++s) {
    const ChannelSpec& ch = m.sys.channel(s);
    const cplx th = out.theta[s];
    const cplx e1 = m.jost[s].eval(1, th);
    if (std::abs(e1) < 1e-13) {
      out.flagged = true;
      continue;
    }
    const cplx fac = (ch.limit_b / ch.coupling_b0) * (1.0 / th - th) / e1;
    for (int g = 0; g < c; ++g)
      if (g != s) out.s(g, s) = out.tinv(g, s) * fac;

    if (!out.open[s]) continue;
    // Diagonal entry by Wronskian projection against the pure powers in the
    // free region: psi(k) = A theta^{-k} + B theta^k for k > K0, s = B / A.
    const int ks = ch.support + 1;
    Eigen::MatrixXcd u0 = u_matrix_theta(m, ks, w, out.theta);
    Eigen::MatrixXcd u1 = u_matrix_theta(m, ks + 1, w, out.theta);
    const cplx psi0 = u0(s, s), psi1 = u1(s, s);
    const cplx incoming =
        (psi0 * std::pow(th, ks + 1) - psi1 * std::pow(th, ks)) / (th - 1.0 / th);
    const cplx outgoing =
        (psi0 * std::pow(th, -(ks + 1)) - psi1 * std::pow(th, -ks)) /
        (1.0 / th - th);
    out.s(s, s) = outgoing / incoming;
  }
  return out;
}

SpecialSolution special_solution(const Model& m, int sigma, cplx w, int k_max) {
  const int c = m.channels();
  SpecialSolution out;
  out.source = sigma;
  out.omega = w;
  out.values.assign(c, std::vector<cplx>(k_max + 1));
  std::vector<cplx> th(c);
  for (int s = 0; s < c; ++s) th[s] = m.chart.theta(s, w);
  Eigen::VectorXcd xi1;
  for (int k = 0; k <= k_max; ++k) {
    Eigen::MatrixXcd u = u_matrix_theta(m, k, w, th);
    for (int g = 0; g < c; ++g) out.values[g][k] = u(g, sigma);
    if (k == 1) xi1 = u.col(sigma);
  }
  out.interior = m.sys.prolong_to_interior(xi1, m.chart.lambda_of_omega(w));
  return out;
}

}  // namespace webscatter
