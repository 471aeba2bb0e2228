#include "webscatter/websystem.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace webscatter {

void ChannelSpec::validate() const {
  if (limit_b <= 0.0)
    throw std::invalid_argument("channel " + id + ": limit b must be positive");
  if (coupling_b0 <= 0.0)
    throw std::invalid_argument("channel " + id + ": b(0) must be positive");
  if (support < 0)
    throw std::invalid_argument("channel " + id + ": negative support");
  if (static_cast<int>(diag.size()) != support ||
      static_cast<int>(hop.size()) != support)
    throw std::invalid_argument("channel " + id +
                                ": diag/hop length must equal the support");
  for (double b : hop)
    if (b <= 0.0)
      throw std::invalid_argument("channel " + id +
                                  ": all hopping values must be positive");
}

WebSystem::WebSystem(CentralBlock central, std::vector<ChannelSpec> channels,
                     std::vector<int> attachments)
    : central_(std::move(central)),
      channels_(std::move(channels)),
      attachments_(std::move(attachments)) {
  const int m = central_.size();
  if (central_.matrix.cols() != m)
    throw std::invalid_argument("central block must be square");
  if ((central_.matrix - central_.matrix.transpose()).cwiseAbs().maxCoeff() >
      0.0)
    throw std::invalid_argument("central block must be exactly symmetric");
  if (attachments_.size() != channels_.size())
    throw std::invalid_argument("one attachment vertex per channel required");
  std::set<int> seen;
  for (int v : attachments_) {
    if (v < 0 || v >= m)
      throw std::invalid_argument("attachment vertex out of range");
    if (!seen.insert(v).second)
      throw std::invalid_argument("channels must attach at distinct vertices");
  }
  for (const auto& ch : channels_) ch.validate();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(central_.matrix);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("central block eigendecomposition failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

int WebSystem::max_support() const {
  int k0 = 0;
  for (const auto& ch : channels_) k0 = std::max(k0, ch.support);
  return k0;
}

Eigen::MatrixXd WebSystem::assemble_truncated(int n_sites) const {
  for (const auto& ch : channels_) {
    if (n_sites < ch.support + 2) {
      std::ostringstream msg;
      msg << "n_sites=" << n_sites << " too small for channel '" << ch.id
          << "' (needs at least K0+2=" << ch.support + 2 << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  const int m = central_.size();
  const int c = channel_count();
  const int n = m + c * n_sites;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  L.topLeftCorner(m, m) = central_.matrix;
  for (int s = 0; s < c; ++s) {
    const ChannelSpec& ch = channels_[s];
    const int base = m + s * n_sites;  // site k=1 lives at base
    const int v = attachments_[s];
    L(v, base) = -ch.coupling_b0;
    L(base, v) = -ch.coupling_b0;
    for (int k = 1; k <= n_sites; ++k) {
      const int row = base + k - 1;
      L(row, row) = ch.diag_at(k);
      if (k < n_sites) {
        L(row, row + 1) = -ch.hop_at(k);
        L(row + 1, row) = -ch.hop_at(k);
      }
    }
  }
  return L;
}

void WebSystem::check_lambda(cplx lambda) const {
  for (int j = 0; j < evals_.size(); ++j) {
    if (std::abs(lambda - cplx(evals_[j])) <= kPoleTol) {
      std::ostringstream msg;
      msg << "lambda hits central eigenvalue " << evals_[j] << " (index " << j
          << ")";
      throw PoleError(j, msg.str());
    }
  }
}

Eigen::MatrixXcd WebSystem::attachment_resolvent(cplx lambda) const {
  check_lambda(lambda);
  const int c = channel_count();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(c, c);
  for (int j = 0; j < evals_.size(); ++j) {
    const cplx w = 1.0 / (cplx(evals_[j]) - lambda);
    for (int s = 0; s < c; ++s) {
      const double ps = evecs_(attachments_[s], j);
      for (int n = s; n < c; ++n) {
        const cplx v = w * ps * evecs_(attachments_[n], j);
        r(s, n) += v;
        if (n != s) r(n, s) += v;
      }
    }
  }
  return r;
}

Eigen::VectorXcd WebSystem::boundary_residual(const Eigen::VectorXcd& xi0,
                                              const Eigen::VectorXcd& xi1,
                                              cplx lambda) const {
  Eigen::MatrixXcd r = attachment_resolvent(lambda);
  Eigen::VectorXcd b0xi1 = xi1;
  for (int s = 0; s < channel_count(); ++s) b0xi1[s] *= channels_[s].coupling_b0;
  return xi0 - r * b0xi1;
}

Eigen::VectorXcd WebSystem::prolong_to_interior(const Eigen::VectorXcd& xi1,
                                                cplx lambda) const {
  check_lambda(lambda);
  const int m = central_.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m);
  // xi(alpha) = sum_nu r(alpha, nu(0); lambda) b_nu(0) xi(nu(1))
  for (int j = 0; j < evals_.size(); ++j) {
    const cplx w = 1.0 / (cplx(evals_[j]) - lambda);
    cplx proj = 0.0;
    for (int s = 0; s < channel_count(); ++s)
      proj += evecs_(attachments_[s], j) * channels_[s].coupling_b0 * xi1[s];
    out += (w * proj) * evecs_.col(j).cast<cplx>();
  }
  return out;
}

double WebSystem::truncated_smallest_eigenvalue(int n_sites) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      assemble_truncated(n_sites), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace webscatter
