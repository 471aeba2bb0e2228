#pragma once

#include <vector>

#include "webscatter/chart.hpp"
#include "webscatter/jost.hpp"
#include "webscatter/websystem.hpp"

namespace webscatter {

// System + chart + per-channel Jost tables, bundled so the direct-problem
// functions stay pure. Immutable after build(); thread-safe.
struct Model {
  WebSystem sys;
  SpectralChart chart;
  std::vector<JostTable> jost;

  static Model build(WebSystem s);
  int channels() const { return sys.channel_count(); }
};

// One evaluation point on the unit circle: T, its inverse, and the extracted
// scattering coefficients s[gamma][sigma] (wave observed on gamma, incoming
// on sigma). Diagonal entries are meaningful only where the channel is open.
struct ScatteringSample {
  cplx omega;
  cplx lambda;
  std::vector<cplx> theta;
  std::vector<bool> open;
  Eigen::MatrixXcd tmat, tinv;
  Eigen::MatrixXcd s;
  double abs_det_t = 0.0;
  double cond_t = 0.0;
  bool flagged = false;  // too close to a pole; excluded from quadrature
};

struct SpecialSolution {
  int source = 0;  // sigma
  cplx omega;
  // values[gamma][k] = psi^sigma(gamma(k), omega), k = 0..k_max
  std::vector<std::vector<cplx>> values;
  Eigen::VectorXcd interior;  // over the central block
};

// T(omega) = E(0) - R(lambda) B(0) E(1) with E(k) = diag{e_s(k, theta_s)}.
Eigen::MatrixXcd t_matrix(const Model& m, cplx w);

// Same with externally supplied theta values (used by contour integration,
// where the branch must be tracked by continuity rather than recomputed).
Eigen::MatrixXcd t_matrix_theta(const Model& m, cplx lambda,
                                const std::vector<cplx>& theta);

// U(k,omega) = [-P(k) + E(k) T^{-1}] B B(0)^{-1} D E(1)^{-1},
// D = diag{theta^{-1} - theta}, P(k) = diag{p_s(k)}.
Eigen::MatrixXcd u_matrix(const Model& m, int k, cplx w);
Eigen::MatrixXcd u_matrix_theta(const Model& m, int k, cplx w,
                                const std::vector<cplx>& theta);

ScatteringSample scattering_sample(const Model& m, cplx w);

SpecialSolution special_solution(const Model& m, int sigma, cplx w, int k_max);

// |det T| threshold (relative to the matrix norm) below which samples are
// flagged instead of computed.
constexpr double kNearPoleRel = 1e-8;

}  // namespace webscatter
