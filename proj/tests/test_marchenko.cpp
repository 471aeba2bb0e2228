#include <doctest.h>

#include <cmath>

#include "webscatter/pipeline.hpp"
#include "fixtures.hpp"

using namespace webscatter;

namespace {

SpectralDataset export_of(const WebSystem& sys, int grid = 8192,
                          int nodes = 512) {
  Model m = Model::build(sys);
  ExportConfig cfg;
  cfg.circle_grid = grid;
  cfg.nodes_per_segment = nodes;
  return export_spectral_data(m, compute_levels(m), cfg);
}

}  // namespace

TEST_CASE("fourier coefficients of the free reflection") {
  // Free channel: s(omega) = -omega^2 and theta = omega, so the only
  // nonvanishing coefficient is s~(-2) = -1.
  SpectralDataset d = export_of(wsfix::single(2.0));
  auto st = fourier_reflection(d, 0, -4, 4);
  for (int n = -4; n <= 4; ++n) {
    const cplx want = (n == -2) ? cplx(-1.0) : cplx(0.0);
    CHECK(std::abs(st[n + 4] - want) < 1e-11);
  }
}

TEST_CASE("zero samples give zero coefficients") {
  SpectralDataset d;
  d.a = 2.0;
  d.b = 1.0;
  d.nodes_per_segment = 64;
  SpectralDataset::Channel c;
  c.id = "z";
  c.limit_a = 2.0;
  c.limit_b = 1.0;
  c.s_diag.assign(4096, cplx(0.0));
  d.channels.push_back(c);
  d.closed_nodes.assign(1, {});
  d.closed_weights.assign(1, {});
  d.cross_mag.assign(1, {{}});
  auto st = fourier_reflection(d, 0, -5, 5);
  for (const cplx& v : st) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("conjugate-symmetric samples give real coefficients") {
  SpectralDataset d = export_of(wsfix::single(4.0));
  auto st = fourier_reflection(d, 0, 1, 30);
  for (const cplx& v : st) CHECK(std::abs(std::imag(v)) < 1e-9);
}

TEST_CASE("closed-channel kernel is zero without closed segments") {
  // Single channel: nobody else is ever open on its closed set.
  SpectralDataset d = export_of(wsfix::single(4.0));
  for (double v : closed_channel_kernel(d, 0, 20)) CHECK(v == 0.0);

  // Two matched channels: the closed set inside the global band is empty.
  Eigen::MatrixXd m(2, 2);
  m << 2.5, -1.0, -1.0, 2.5;
  ChannelSpec c1{"m1", 2.0, 1.0, 1.0, 0, {}, {}};
  ChannelSpec c2{"m2", 2.0, 1.0, 0.7, 0, {}, {}};
  SpectralDataset dm =
      export_of(WebSystem(CentralBlock{m}, {c1, c2}, {0, 1}));
  CHECK(dm.closed_nodes[0].empty());
  CHECK(dm.closed_nodes[1].empty());
  for (int s : {0, 1})
    for (double v : closed_channel_kernel(dm, s, 20)) CHECK(v == 0.0);
}

TEST_CASE("closed-channel kernel matches the contour form in the other variable") {
  // Independent evaluation: the same coefficient written as an integral over
  // the circle arcs (in omega) where the channel is closed must agree with
  // the segment quadrature in theta.
  Model m = Model::build(wsfix::f1());
  SpectralDataset d = export_of(wsfix::f1());
  for (int s : {0, 1}) {
    auto q = closed_channel_kernel(d, s, 10);
    REQUIRE(!d.closed_nodes[s].empty());
    for (int n = 1; n <= 10; ++n) {
      const cplx oracle = q_diag_pv(m, s, n, 800);
      CHECK(std::abs(std::imag(oracle)) < 1e-8);
      CHECK(std::abs(q[n - 1] - std::real(oracle)) < 1e-6);
    }
  }
}

TEST_CASE("replayed node layout without stored weights") {
  // A dataset whose cross samples sit on the deterministic (non-adaptive)
  // layout and carry no weight column must be integrable by replaying the
  // layout from the chart.
  Model m = Model::build(wsfix::f1());
  SpectralDataset d = export_of(wsfix::f1());
  for (int s : {0, 1}) {
    ClosedQuadrature quad = closed_segment_quadrature(m.chart, s, 512);
    d.closed_nodes[s] = quad.theta;
    d.closed_weights[s].clear();
    const int other = 1 - s;
    d.cross_mag[s][other].assign(quad.theta.size(), 0.0);
    for (std::size_t i = 0; i < quad.theta.size(); ++i) {
      const cplx w = m.chart.omega_of_theta(s, quad.theta[i]);
      ScatteringSample smp = scattering_sample(m, w);
      if (smp.open[other]) d.cross_mag[s][other][i] = std::abs(smp.s(s, other));
    }
    auto q = closed_channel_kernel(d, s, 10);
    for (int n = 1; n <= 10; ++n)
      CHECK(std::abs(q[n - 1] - std::real(q_diag_pv(m, s, n, 800))) < 1e-6);
  }
}

TEST_CASE("discrete kernel: closed form and empty case") {
  // Bound-state fixture: theta_hat = -1/2, m = 3/8, dtheta/domega = 1.
  SpectralDataset d = export_of(wsfix::single(4.0));
  REQUIRE(d.levels.size() == 1);
  auto mk = discrete_kernel(d, 0, 12);
  for (int n = 1; n <= 12; ++n)
    CHECK(std::abs(mk[n - 1] - 0.375 * std::pow(-0.5, n - 1)) < 1e-9);

  SpectralDataset d0 = export_of(wsfix::single(2.5));
  CHECK(d0.levels.empty());
  for (double v : discrete_kernel(d0, 0, 12)) CHECK(v == 0.0);
}

TEST_CASE("assembled kernel is linear in the levels") {
  SpectralDataset d = export_of(wsfix::single(4.0));
  MarchenkoKernel with = assemble_kernel(d, 0, 40);
  SpectralDataset stripped = d;
  stripped.levels.clear();
  MarchenkoKernel without = assemble_kernel(stripped, 0, 40);
  for (int n = 1; n <= 40; ++n)
    CHECK(std::abs(without.f[n - 1] - (with.f[n - 1] + with.m[n - 1])) <
          1e-12);
}

TEST_CASE("bound-state fixture: reflection tail cancels the level exactly") {
  // s(omega) = -omega(2+omega)/(2omega+1) has its only pole inside the disk
  // at -1/2 with residue 3/8, so s~(n) = (3/8)(-1/2)^{n-1} = M(n) for n >= 1
  // and the kernel vanishes identically.
  SpectralDataset d = export_of(wsfix::single(4.0));
  MarchenkoKernel k = assemble_kernel(d, 0, 40);
  CHECK(k.max_imag < 1e-9);
  for (int n = 1; n <= 40; ++n) {
    CHECK(std::abs(k.s_tilde[n - 1] - 0.375 * std::pow(-0.5, n - 1)) < 1e-9);
    CHECK(std::abs(k.f[n - 1]) < 1e-9);
  }
}

TEST_CASE("vanishing kernel solves to the free channel") {
  MarchenkoKernel k;
  k.nu = 0;
  k.n_max = 60;
  k.f.assign(60, 0.0);
  for (int row = 0; row <= 3; ++row) {
    MarchenkoRow r = solve_marchenko(k, row, 20);
    CHECK(r.residual < 1e-14);
    for (int mm = row + 1; mm <= 20; ++mm) CHECK(r.coeff(mm) == 0.0);
  }
  RecoveredChannel rec = recover_channel(k, 2.0, 1.0, 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(rec.diag[i] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rec.hop[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("site-1 perturbation: first Marchenko coefficient is d/b") {
  // diag(1) = a + d on an otherwise free channel forces a(0,1) = d/b.
  const double dshift = 0.6;
  ChannelSpec tw;
  tw.support = 1;
  tw.diag = {2.0 + dshift};
  tw.hop = {1.0};
  WebSystem sys = wsfix::single(2.0, 2.0, 1.0, 1.0, tw);
  Model m = Model::build(sys);
  CHECK(std::abs(m.jost[0].coeff(0, 1) - dshift) < 1e-12);

  SpectralDataset d = export_of(sys);
  MarchenkoKernel k = assemble_kernel(d, 0, 120);
  MarchenkoRow row = solve_marchenko(k, 0, 40);
  CHECK(row.residual < 1e-10);
  CHECK(std::abs(row.coeff(1) - dshift) < 1e-6);

  InvertResult inv = invert_dataset(d, 3);
  CHECK(std::abs(inv.channels[0].diag[0] - 2.6) < 1e-6);
  CHECK(std::abs(inv.channels[0].hop[0] - 1.0) < 1e-6);
  CHECK(std::abs(inv.channels[0].diag[1] - 2.0) < 1e-6);
  for (double b : inv.channels[0].hop) CHECK(b > 0.0);
}

TEST_CASE("kernel reality and finite support") {
  // For a compactly supported perturbation the level tail cancels the
  // reflection tail exactly: f(n) vanishes past twice the support, down to
  // the circle-quadrature floor.
  Model m = Model::build(wsfix::f1_perturbed());
  auto levels = compute_levels(m);
  REQUIRE(!levels.empty());
  SpectralDataset d = export_spectral_data(m, levels, {});
  for (int nu = 0; nu < 2; ++nu) {
    const int k0 = m.sys.channel(nu).support;
    MarchenkoKernel k = assemble_kernel(d, nu, 160);
    CHECK(k.max_imag < 1e-9);
    CHECK(std::abs(k.f[2 * k0 - 1]) > 1e-2);  // last supported entry
    for (int n = 2 * k0 + 1; n <= 160; ++n)
      CHECK(std::abs(k.f[n - 1]) < 1e-8);
  }
}

TEST_CASE("off-diagonal kernels cancel against the discrete sum") {
  Model m = Model::build(wsfix::f1_perturbed());
  auto levels = compute_levels(m);
  REQUIRE(!levels.empty());
  for (int nu = 0; nu < 2; ++nu) {
    const int sg = 1 - nu;
    for (int n = 1; n <= 20; ++n) {
      const cplx q = q_cross_pv(m, nu, sg, n, 2048);
      const double ms = discrete_cross(levels, nu, sg, n);
      CHECK(std::abs(q - cplx(ms)) < 1e-6);
    }
  }
}

TEST_CASE("contour identity for the transformed resolvent") {
  // With no perturbation on the channels the coefficient matrices are
  // trivial, and the contour integral of the transformed resolvent must
  // reduce to identity-at-coincidence plus the kernel matrix Z(l+k).
  Model m = Model::build(wsfix::f1());
  CHECK(compute_levels(m).empty());
  SpectralDataset d = export_of(wsfix::f1());

  auto st0 = fourier_reflection(d, 0, 0, 4);
  auto st1 = fourier_reflection(d, 1, 0, 4);
  auto zmat = [&](int n) {
    Eigen::MatrixXcd z(2, 2);
    z(0, 0) = st0[n] + q_diag_pv(m, 0, n, 800);
    z(1, 1) = st1[n] + q_diag_pv(m, 1, n, 800);
    z(0, 1) = q_cross_pv(m, 0, 1, n, 800);
    z(1, 0) = q_cross_pv(m, 1, 0, n, 800);
    return z;
  };
  std::vector<Eigen::MatrixXcd> z;
  for (int n = 0; n <= 4; ++n) z.push_back(zmat(n));

  for (int l = 0; l <= 2; ++l)
    for (int k = 0; k <= 2; ++k) {
      Eigen::MatrixXcd lhs = j_integral_pv(m, l, k, 800);
      Eigen::MatrixXcd rhs = z[l + k];
      if (l == k) rhs += Eigen::MatrixXcd::Identity(2, 2);
      CHECK((lhs - rhs).norm() < 1e-6);
    }
}

TEST_CASE("full round trip on the perturbed fixture") {
  RoundtripResult r = roundtrip(wsfix::f1_perturbed(), 4, {});
  CHECK(r.max_error < 1e-8);
}
