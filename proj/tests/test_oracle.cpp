#include <doctest.h>

#include <cmath>

#include "webscatter/oracle.hpp"
#include "webscatter/spectrum.hpp"
#include "fixtures.hpp"

using namespace webscatter;

TEST_CASE("truncated eigensolver: closed-form bound state") {
  auto levels = truncated_eigenvalues(wsfix::single(4.0), 2000);
  REQUIRE(levels.size() == 1);
  CHECK(std::abs(levels[0].lambda - 4.5) < 1e-10);
  CHECK(levels[0].decay < 1e-6);
}

TEST_CASE("truncated eigensolver: free system has no bound states") {
  CHECK(truncated_eigenvalues(wsfix::single(2.0), 1200).empty());
  CHECK(truncated_eigenvalues(wsfix::f1(), 1200).empty());
}

TEST_CASE("truncated eigenvalues are stable in the cutoff") {
  auto a = truncated_eigenvalues(wsfix::f1_perturbed(), 1000);
  auto b = truncated_eigenvalues(wsfix::f1_perturbed(), 2000);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a[i].lambda - b[i].lambda) < 1e-8);
}

TEST_CASE("linear-solve scattering: free channel reflects -omega^2") {
  Model m = Model::build(wsfix::single(2.0));
  for (double phi : {0.4, 1.1, 2.0, 2.9}) {
    const cplx w = std::polar(1.0, phi);
    auto s = scattering_by_linear_solve(m, 0, w, 1200);
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0] - (-w * w)) < 1e-10);
  }
}

TEST_CASE("linear-solve scattering agrees with the analytic pipeline") {
  for (Model m :
       {Model::build(wsfix::f1()), Model::build(wsfix::f1_perturbed())}) {
    for (double phi : {1.0, 1.5, 2.0}) {
      const cplx w = std::polar(1.0, phi);
      ScatteringSample smp = scattering_sample(m, w);
      REQUIRE(!smp.flagged);
      for (int sg = 0; sg < m.channels(); ++sg) {
        if (!smp.open[sg]) continue;
        auto s = scattering_by_linear_solve(m, sg, w, 1500);
        for (int g = 0; g < m.channels(); ++g) {
          if (smp.open[g]) {
            CHECK(std::abs(s[g] - smp.s(g, sg)) < 1e-8);
          } else {
            CHECK(std::abs(std::abs(s[g]) - std::abs(smp.s(g, sg))) < 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("linear-solve scattering covers closed channels") {
  // lambda below the second band: channel 1 closed, channel 0 open.
  Model m = Model::build(wsfix::f1());
  const cplx w = std::polar(1.0, 0.5);
  ScatteringSample smp = scattering_sample(m, w);
  REQUIRE(smp.open[0]);
  REQUIRE(!smp.open[1]);
  auto s = scattering_by_linear_solve(m, 0, w, 1500);
  CHECK(std::abs(std::abs(s[1]) - std::abs(smp.s(1, 0))) < 1e-8);
  CHECK(std::abs(std::abs(s[0]) - 1.0) < 1e-10);  // unitarity, one open channel
}

TEST_CASE("residue from a truncation eigenvector: closed form") {
  Model m = Model::build(wsfix::single(4.0));
  Eigen::MatrixXd mm = residue_by_eigenvector(m, cplx(-0.5), 1500);
  REQUIRE(mm.rows() == 1);
  CHECK(std::abs(mm(0, 0) - 0.375) < 1e-6);
}

TEST_CASE("residue from a truncation eigenvector matches the contour residue") {
  Model m = Model::build(wsfix::f1_perturbed());
  auto levels = compute_levels(m);
  REQUIRE(!levels.empty());
  for (const auto& lv : levels) {
    if (lv.on_circle) continue;
    Eigen::MatrixXd mm = residue_by_eigenvector(m, lv.omega_hat, 1500);
    CHECK((mm - lv.m_re).norm() < 1e-5 * (1.0 + lv.m_re.norm()));
    // weighted symmetry of the oracle matrix itself
    for (int g = 0; g < m.channels(); ++g)
      for (int s = 0; s < m.channels(); ++s) {
        const double wg =
            std::real(m.chart.limit_b(g) * (1.0 / lv.theta[g] - lv.theta[g]));
        const double ws =
            std::real(m.chart.limit_b(s) * (1.0 / lv.theta[s] - lv.theta[s]));
        CHECK(std::abs(wg * mm(g, s) - ws * mm(s, g)) <
              1e-6 * (1.0 + std::abs(wg * mm(g, s))));
      }
  }
}
