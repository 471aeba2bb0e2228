#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "webscatter/util.hpp"

namespace webscatter {

// One semi-infinite channel. Coefficients are stored for k = 1..support and
// equal the limit values (limit_a, limit_b) exactly beyond the support.
struct ChannelSpec {
  std::string id;
  double limit_a = 0.0;
  double limit_b = 1.0;
  double coupling_b0 = 1.0;  // bond between the attachment vertex and site 1
  int support = 0;           // K0
  std::vector<double> diag;  // values at k = 1..K0
  std::vector<double> hop;   // values at k = 1..K0

  double diag_at(int k) const {
    return (k >= 1 && k <= support) ? diag[k - 1] : limit_a;
  }
  // hop_at(0) is the coupling bond, hop_at(k) for k >= 1 the in-channel bond.
  double hop_at(int k) const {
    if (k == 0) return coupling_b0;
    return (k >= 1 && k <= support) ? hop[k - 1] : limit_b;
  }
  void validate() const;
};

struct CentralBlock {
  Eigen::MatrixXd matrix;  // symmetric M x M
  int size() const { return static_cast<int>(matrix.rows()); }
};

// The full physical system: central block, channels and their attachment
// vertices. The eigendecomposition of the central block is computed once at
// construction; everything else is a pure function of it, so instances are
// safe to share between threads.
class WebSystem {
 public:
  WebSystem(CentralBlock central, std::vector<ChannelSpec> channels,
            std::vector<int> attachments);

  int center_size() const { return central_.size(); }
  int channel_count() const { return static_cast<int>(channels_.size()); }
  const CentralBlock& central() const { return central_; }
  const ChannelSpec& channel(int i) const { return channels_[i]; }
  const std::vector<ChannelSpec>& channels() const { return channels_; }
  int attachment(int i) const { return attachments_[i]; }
  int max_support() const;

  const Eigen::VectorXd& central_eigenvalues() const { return evals_; }
  const Eigen::MatrixXd& central_eigenvectors() const { return evecs_; }

  // L restricted to the central block plus n_sites sites per channel, with a
  // Dirichlet cut after the last site. Requires n_sites >= K0 + 2 on every
  // channel.
  Eigen::MatrixXd assemble_truncated(int n_sites) const;

  // R(lambda) restricted to the attachment vertices, via the spectral sum.
  Eigen::MatrixXcd attachment_resolvent(cplx lambda) const;

  // xi(0) - R(lambda) diag{b_nu(0)} xi(1); zero iff the boundary condition
  // holds.
  Eigen::VectorXcd boundary_residual(const Eigen::VectorXcd& xi0,
                                     const Eigen::VectorXcd& xi1,
                                     cplx lambda) const;

  // Unique prolongation of channel data into the central block.
  Eigen::VectorXcd prolong_to_interior(const Eigen::VectorXcd& xi1,
                                       cplx lambda) const;

  // Smallest eigenvalue of a finite truncation; reported, not enforced.
  double truncated_smallest_eigenvalue(int n_sites) const;

  static constexpr double kPoleTol = 1e-12;

 private:
  void check_lambda(cplx lambda) const;

  CentralBlock central_;
  std::vector<ChannelSpec> channels_;
  std::vector<int> attachments_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
};

}  // namespace webscatter
