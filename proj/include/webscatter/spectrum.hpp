#pragma once

#include <string>
#include <vector>

#include "webscatter/direct.hpp"

namespace webscatter {

// One discrete level: a simple pole omega_hat of U(k, omega), either real in
// (-1,1)\{0} or on the unit circle (stored with Im >= 0), together with the
// residue-derived matrix M(omega_hat) and per-channel energies.
struct DiscreteLevel {
  cplx omega_hat;
  double lambda_hat = 0.0;
  bool on_circle = false;
  std::vector<cplx> theta;       // theta_s(omega_hat)
  std::vector<cplx> dtheta;      // dtheta_s/domega at omega_hat
  Eigen::MatrixXcd m_raw;        // E(k)^{-1} Res U(k); complex diagnostic
  Eigen::MatrixXd m_re;          // Re of m_raw; drives the inverse problem
  std::vector<double> energy;    // ||phi^nu||^2 per channel
  std::string provenance;        // "detT" | "jost1" | "circle"
};

struct PoleSeed {
  cplx omega;
  std::string provenance;
};

// Candidate pole locations: sign changes of det T on (-1,1)\{0}, real zeros
// of e_s(1, theta_s(omega)) mapped into the interval, and minima of |det T|
// on the circle below threshold. Band-edge neighborhoods of width
// kEdgeExclusion are excluded from the search.
std::vector<PoleSeed> find_poles(const Model& m);

// (1 / 2 pi i) contour integral of U(k, omega) around omega_hat, premultiplied
// by E(k, omega_hat)^{-1}. Trapezoid rule, point count doubled until stable;
// theta branches are tracked by continuity along the contour so circle poles
// (where the contour leaves the disk) are handled correctly.
Eigen::MatrixXcd residue_matrix(const Model& m, cplx omega_hat, int k,
                                double radius = 0.0);

// ||phi^nu||^2 from the diagonal residue entry.
double level_energy(const Model& m, const DiscreteLevel& level, int nu);

// phi^nu(s(k)) for k = 0..k_max on every channel, plus central-block values.
struct EigenfunctionSamples {
  std::vector<std::vector<cplx>> values;  // [channel][k]
  Eigen::VectorXcd interior;
};
EigenfunctionSamples eigenfunction_samples(const Model& m,
                                           const DiscreteLevel& level, int nu,
                                           int k_max);

// Full pipeline: locate, deduplicate, compute residues (with simplicity and
// k-independence checks) and energies. Sorted by lambda_hat ascending.
std::vector<DiscreteLevel> compute_levels(const Model& m);

constexpr double kEdgeExclusion = 1e-4;
constexpr double kCircleDetThreshold = 1e-6;

// Distance from omega_hat to the nearest point that must stay outside the
// residue contour (other seeds, 0, +-1, band-edge angles).
double safe_contour_radius(const Model& m, cplx omega_hat,
                           const std::vector<PoleSeed>& all);

}  // namespace webscatter
