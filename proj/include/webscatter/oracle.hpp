#pragma once

#include <vector>

#include "webscatter/direct.hpp"

namespace webscatter {

// Brute-force validators: everything here works on finite truncations and
// never touches the Jost tables, so agreement with the pipeline is a real
// cross-check (the chart branch convention is shared — it defines what the
// coefficients mean).

struct TruncatedLevel {
  double lambda = 0.0;
  double decay = 0.0;  // |eigenvector at the last site| / max |eigenvector|
};

// Out-of-band eigenvalues of the N-site truncation whose eigenvectors decay
// at the cut below 1e-6.
std::vector<TruncatedLevel> truncated_eigenvalues(const WebSystem& sys, int N);

// Scattering coefficients {s_gamma} for a unit wave incoming along sigma
// (sigma must be open at omega), from a sparse linear solve with exact
// two-site radiation closure at k = N, N+1. The closure unknowns are the
// scaled outgoing amplitudes A_gamma = s_gamma theta_gamma^N, which keeps the
// system well scaled for closed channels; s is then read off near the origin
// by Wronskian projection in the free region.
std::vector<cplx> scattering_by_linear_solve(const Model& m, int sigma, cplx w,
                                             int N);

// Residue/normalization matrix reconstructed from a truncation eigenvector:
// the eigenvector is matched against e_s(k, theta_s(omega_hat)) in the free
// region and normalized via the energy identity. Interior poles only.
Eigen::MatrixXd residue_by_eigenvector(const Model& m, cplx omega_hat, int N);

}  // namespace webscatter
