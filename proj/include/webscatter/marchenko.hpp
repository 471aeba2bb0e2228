#pragma once

#include <functional>
#include <string>
#include <vector>

#include "webscatter/direct.hpp"
#include "webscatter/spectrum.hpp"

namespace webscatter {

// Exactly the observable scattering data: diagonal reflection coefficients on
// a uniform theta grid, closed-channel cross magnitudes at quadrature nodes,
// and the discrete levels. The inverse problem consumes only this (plus the
// limit constants), never the system itself.
struct SpectralDataset {
  double a = 0.0, b = 1.0;  // global band constants

  struct Channel {
    std::string id;
    double limit_a = 0.0, limit_b = 1.0;
    // s_{ss}(omega(theta_j)) at theta_j = exp(2 pi i (j + 1/2) / N)
    std::vector<cplx> s_diag;
    int flagged = 0;  // near-pole samples replaced by neighbor averages
  };
  std::vector<Channel> channels;

  // Quadrature nodes and weights on J_sigma (flattened over sub-segments)
  // and |s_{sigma nu}| sampled there. cross_mag[sigma][nu] is empty when
  // sigma has no closed segments or nu never opens there. When weights are
  // absent (older files) the deterministic layout is replayed from the chart
  // and nodes_per_segment.
  int nodes_per_segment = 0;
  std::vector<std::vector<double>> closed_nodes;
  std::vector<std::vector<double>> closed_weights;
  std::vector<std::vector<std::vector<double>>> cross_mag;

  struct Level {
    cplx omega_hat;
    std::vector<cplx> theta, dtheta;
    std::vector<cplx> m_diag;  // m_{nn} (complex for on-circle levels)
  };
  std::vector<Level> levels;

  int channel_count() const { return static_cast<int>(channels.size()); }
  SpectralChart chart() const;
};

// Quadrature on the closed segments J_sigma: each segment is subdivided at
// the images of the other channels' band edges (where square-root kinks
// live), then cosine-mapped Gauss-Legendre nodes are placed per sub-segment
// so the endpoint 1/sqrt singularities of the integrand are absorbed into
// the vanishing Jacobian.
struct ClosedQuadrature {
  std::vector<double> theta;
  std::vector<double> weight;  // includes the cosine-map Jacobian
};
ClosedQuadrature closed_segment_quadrature(const SpectralChart& chart,
                                           int sigma, int nodes_per_segment);

// Same layout as closed_segment_quadrature but with the interior panels
// refined adaptively (bisection driven by |integrand|) so narrow resonance
// peaks in the middle of a segment are resolved. The resulting nodes and
// weights are meant to be stored with the sampled data. Throws when the
// refinement fails to converge within the node cap (near-singular data).
ClosedQuadrature adaptive_closed_quadrature(
    const SpectralChart& chart, int sigma, int nodes_per_segment,
    const std::function<double(double)>& integrand_mag);

// Scalar kernel of one channel plus its components, n = 1..n_max stored at
// index n-1.
struct MarchenkoKernel {
  int nu = 0;
  int n_max = 0;
  std::vector<double> f, s_tilde, q, m;
  double max_imag = 0.0;  // largest imaginary residue discarded
};

struct MarchenkoRow {
  int k = 0;
  std::vector<double> a;  // a(k, m) for m = k+1 .. k+a.size()
  double residual = 0.0;
  double coeff(int m) const {
    const int i = m - k - 1;
    if (m == k) return 1.0;
    return (i >= 0 && i < static_cast<int>(a.size())) ? a[i] : 0.0;
  }
};

struct RecoveredChannel {
  std::vector<double> diag, hop;      // k = 1..k_max
  std::vector<double> residuals;      // Marchenko solver residual per row k
};

// Fourier coefficients of the reflection coefficient in the theta variable:
// s~(n) = (1/2 pi i) closed-circle integral of s_{ss} theta^{n-1} d theta.
std::vector<cplx> fourier_reflection(const SpectralDataset& d, int sigma,
                                     int n_min, int n_max);

// q_{ss}(n) = (1/2 pi i) integral over J_sigma of Phi_sigma(theta)
// theta^{n-1} d theta; zeros when J_sigma is empty.
std::vector<double> closed_channel_kernel(const SpectralDataset& d, int sigma,
                                          int n_max);

// M_{nn}(n) = sum over levels of Re[(d theta_n / d omega) theta_n^{n-1}]
// times Re m_{nn}.
std::vector<double> discrete_kernel(const SpectralDataset& d, int nu,
                                    int n_max);

// f = s~ + q - M with the reality check.
MarchenkoKernel assemble_kernel(const SpectralDataset& d, int nu, int n_max);

// Solve f(k+m) + a(k,m) + sum_{s=k+1}^{N} a(k,s) f(s+m) = 0,
// m = k+1..n_limit. Requires kernel.n_max >= 2 n_limit.
MarchenkoRow solve_marchenko(const MarchenkoKernel& kernel, int k,
                             int n_limit);

// Rows for k = 0..k_max+1, then the coefficient-recovery identities.
// n_limit = 0 picks the smallest cutoff with |f| below 1e-13 past it.
RecoveredChannel recover_channel(const MarchenkoKernel& kernel, double limit_a,
                                 double limit_b, int k_max, int n_limit = 0);

// --- diagnostics (cross-checks of the derivation, not pipeline stages) ---

// Row-nu of (1/2 pi i) PV integral over the circle of
// diag{theta^{l-1} dtheta/domega} U(k, omega); assembled row by row with the
// circle split at band-edge angles and cosine-mapped Gauss nodes per arc.
Eigen::MatrixXcd j_integral_pv(const Model& m, int l, int k,
                               int nodes_per_arc);

// q_{nu sigma}(n) for nu != sigma, from the full complex s_{nu sigma} on the
// circle (test-only; not observable data).
cplx q_cross_pv(const Model& m, int nu, int sigma, int n, int nodes_per_arc);

// q_{sigma sigma}(n) evaluated in the omega variable over the arcs where
// sigma is closed; change-of-variables cross-check of the segment quadrature
// (test-only). Valid for any integer n.
cplx q_diag_pv(const Model& m, int sigma, int n, int nodes_per_arc);

// Off-diagonal discrete sum matching q_cross_pv for nu != sigma.
double discrete_cross(const std::vector<DiscreteLevel>& levels, int nu,
                      int sigma, int n);

}  // namespace webscatter
