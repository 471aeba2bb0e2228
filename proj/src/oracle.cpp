#include "webscatter/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace webscatter {

std::vector<TruncatedLevel> truncated_eigenvalues(const WebSystem& sys,
                                                  int N) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& ch : sys.channels()) {
    lo = std::min(lo, ch.limit_a - 2 * ch.limit_b);
    hi = std::max(hi, ch.limit_a + 2 * ch.limit_b);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.assemble_truncated(N));
  const int m = sys.center_size();
  const int c = sys.channel_count();
  std::vector<TruncatedLevel> out;
  for (int j = 0; j < es.eigenvalues().size(); ++j) {
    const double lam = es.eigenvalues()[j];
    if (lam > lo - 1e-12 && lam < hi + 1e-12) continue;
    const Eigen::VectorXd v = es.eigenvectors().col(j);
    double last = 0.0;
    for (int s = 0; s < c; ++s)
      last = std::max(last, std::abs(v[m + s * N + (N - 1)]));
    const double decay = last / v.cwiseAbs().maxCoeff();
    if (decay < 1e-6) out.push_back({lam, decay});
  }
  return out;
}

std::vector<cplx> scattering_by_linear_solve(const Model& model, int sigma,
                                             cplx w, int N) {
  const WebSystem& sys = model.sys;
  const int m = sys.center_size();
  const int c = sys.channel_count();
  const cplx lam = model.chart.lambda_of_omega(w);
  std::vector<cplx> th(c);
  for (int s = 0; s < c; ++s) th[s] = model.chart.theta(s, w);
  if (std::abs(std::abs(th[sigma]) - 1.0) > 1e-9)
    throw std::invalid_argument(
        "scattering_by_linear_solve: source channel is closed at omega");
  for (const auto& ch : sys.channels())
    if (N < ch.support + 4)
      throw std::invalid_argument("scattering_by_linear_solve: N too small");

  // Unknowns: xi(alpha) for the central block, psi_g(k) for k = 1..N-1, and
  // the scaled outgoing amplitude A_g per channel; psi(N+j) is closed as
  // inc(N+j) + A_g theta_g^j with inc(k) = delta_{g sigma} theta_sigma^{-k}.
  const int n_unknowns = m + c * N;
  auto site = [&](int g, int k) { return m + g * N + (k - 1); };
  auto amp = [&](int g) { return m + g * N + (N - 1); };

  std::vector<Eigen::Triplet<cplx>> trip;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_unknowns);

  for (int al = 0; al < m; ++al) {
    for (int be = 0; be < m; ++be) {
      cplx v = sys.central().matrix(al, be);
      if (al == be) v -= lam;
      if (v != cplx(0.0)) trip.emplace_back(al, be, v);
    }
  }
  for (int g = 0; g < c; ++g) {
    const ChannelSpec& ch = sys.channel(g);
    const int att = sys.attachment(g);
    trip.emplace_back(att, site(g, 1), cplx(-ch.coupling_b0));

    auto inc = [&](int k) {
      return g == sigma ? std::pow(th[sigma], -k) : cplx(0.0);
    };
    for (int k = 1; k <= N; ++k) {
      // equations for k = 1..N-1 sit in the site rows; the k = N equation
      // takes the amplitude column's row.
      const int r = (k <= N - 1) ? site(g, k) : amp(g);
      // psi(k-1) term
      if (k == 1) {
        trip.emplace_back(r, att, cplx(-ch.hop_at(0)));
      } else if (k - 1 <= N - 1) {
        trip.emplace_back(r, site(g, k - 1), cplx(-ch.hop_at(k - 1)));
      }
      // psi(k) term
      const cplx dk = ch.diag_at(k) - lam;
      if (k <= N - 1) {
        trip.emplace_back(r, site(g, k), dk);
      } else {  // k == N: psi(N) = inc(N) + A
        trip.emplace_back(r, amp(g), dk);
        rhs[r] -= dk * inc(N);
      }
      // psi(k+1) term
      const double bk = ch.hop_at(k);
      if (k + 1 <= N - 1) {
        trip.emplace_back(r, site(g, k + 1), cplx(-bk));
      } else if (k + 1 == N) {  // psi(N) = inc(N) + A
        trip.emplace_back(r, amp(g), cplx(-bk));
        rhs[r] += bk * inc(N);
      } else {  // k + 1 == N + 1: psi(N+1) = inc(N+1) + A theta
        trip.emplace_back(r, amp(g), -bk * th[g]);
        rhs[r] += bk * inc(N + 1);
      }
    }
  }

  Eigen::SparseMatrix<cplx> a(n_unknowns, n_unknowns);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success)
    throw NearPoleError("scattering_by_linear_solve: singular system");
  Eigen::VectorXcd sol = lu.solve(rhs);

  std::vector<cplx> out(c);
  for (int g = 0; g < c; ++g) {
    const int ks = sys.channel(g).support + 1;
    const cplx p0 = sol[site(g, ks)], p1 = sol[site(g, ks + 1)];
    const cplx t = th[g];
    // psi(k) = A t^{-k} + B t^k in the free region
    const cplx outg =
        (p0 * std::pow(t, -(ks + 1)) - p1 * std::pow(t, -ks)) / (1.0 / t - t);
    if (g == sigma) {
      const cplx incg =
          (p0 * std::pow(t, ks + 1) - p1 * std::pow(t, ks)) / (t - 1.0 / t);
      out[g] = outg / incg;
    } else {
      out[g] = outg;
    }
  }
  return out;
}

Eigen::MatrixXd residue_by_eigenvector(const Model& model, cplx omega_hat,
                                       int N) {
  if (std::abs(omega_hat) >= 1.0 - 1e-9 || std::abs(std::imag(omega_hat)) > 1e-12)
    throw std::invalid_argument(
        "residue_by_eigenvector: interior real poles only");
  const double lam_hat =
      std::real(model.chart.lambda_of_omega(omega_hat));
  const WebSystem& sys = model.sys;
  const int m = sys.center_size();
  const int c = sys.channel_count();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.assemble_truncated(N));
  int best = -1;
  double bestd = 1e-4;
  for (int j = 0; j < es.eigenvalues().size(); ++j) {
    const double d = std::abs(es.eigenvalues()[j] - lam_hat);
    if (d < bestd) {
      bestd = d;
      best = j;
    }
  }
  if (best < 0)
    throw std::runtime_error(
        "residue_by_eigenvector: no truncation eigenvalue near lambda_hat");
  const Eigen::VectorXd v = es.eigenvectors().col(best);

  // v(s(k)) = g_s theta_s^k in the free region; the energy identity
  // ||phi^nu||^2 = -F_nu theta_nu m_nn with phi^nu = c_nu v, ||v|| = 1 and
  // m_{s nu} = c_nu g_s pins c_nu = -F_nu theta_nu g_nu.
  std::vector<double> g(c), th(c);
  for (int s = 0; s < c; ++s) {
    th[s] = std::real(model.chart.theta(s, omega_hat));
    const int ks = sys.channel(s).support + 1;
    g[s] = v[m + s * N + (ks - 1)] / std::pow(th[s], ks);
  }
  const double w2 = std::real(omega_hat) * std::real(omega_hat);
  Eigen::MatrixXd mm(c, c);
  for (int nu = 0; nu < c; ++nu) {
    const double f = sys.channel(nu).limit_b * (1.0 - 1.0 / (th[nu] * th[nu])) /
                     (model.chart.b() * (1.0 - 1.0 / w2));
    for (int s = 0; s < c; ++s) mm(s, nu) = -f * th[nu] * g[nu] * g[s];
  }
  return mm;
}

}  // namespace webscatter
