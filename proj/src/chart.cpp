#include "webscatter/chart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace webscatter {

namespace {

constexpr double kCircleTol = 1e-12;

bool on_circle(cplx w) { return std::abs(std::abs(w) - 1.0) <= kCircleTol; }

}  // namespace

SpectralChart::SpectralChart(std::vector<std::pair<double, double>> limits)
    : limits_(std::move(limits)) {
  if (limits_.empty()) throw std::invalid_argument("chart needs channels");
  for (auto& [la, lb] : limits_)
    if (lb <= 0.0) throw std::invalid_argument("limit b must be positive");

  // Global band from the union of the channel bands; the union of the open
  // bands must be connected.
  std::vector<std::pair<double, double>> bands;
  for (auto& [la, lb] : limits_) bands.emplace_back(la - 2 * lb, la + 2 * lb);
  std::sort(bands.begin(), bands.end());
  double lo = bands.front().first, hi = bands.front().second;
  for (std::size_t i = 1; i < bands.size(); ++i) {
    if (bands[i].first >= hi)
      throw std::invalid_argument("channel bands form a disconnected union");
    hi = std::max(hi, bands[i].second);
  }
  a_ = 0.5 * (lo + hi);
  b_ = 0.25 * (hi - lo);

  const int c = channels();
  arcs_.resize(c);
  segs_.resize(c);
  for (int s = 0; s < c; ++s) {
    const double as = limits_[s].first, bs = limits_[s].second;
    // lambda(e^{i phi}) = a - 2b cos(phi) lies in I_s iff cos(phi) is in
    // [(a - as - 2bs) / 2b, (a - as + 2bs) / 2b] (clipped).
    const double clo = std::max(-1.0, (a_ - as - 2 * bs) / (2 * b_));
    const double chi = std::min(1.0, (a_ - as + 2 * bs) / (2 * b_));
    const double plo = std::acos(chi);
    const double phi = std::acos(clo);
    if (plo <= 0.0 && phi >= kPi) {
      arcs_[s].push_back({0.0, 2 * kPi});
    } else {
      arcs_[s].push_back({plo, phi});
      arcs_[s].push_back({2 * kPi - phi, 2 * kPi - plo});
    }
    // J_s: one or two real segments attached to +1 / -1.
    if (a_ - 2 * b_ < as - 2 * bs - 1e-15) {
      const double t = (as - (a_ - 2 * b_)) / (2 * bs);  // >= 1
      segs_[s].push_back({t - std::sqrt(t * t - 1.0), 1.0});
    }
    if (a_ + 2 * b_ > as + 2 * bs + 1e-15) {
      const double t = (as - (a_ + 2 * b_)) / (2 * bs);  // <= -1
      segs_[s].push_back({-1.0, t + std::sqrt(t * t - 1.0)});
    }
    std::sort(segs_[s].begin(), segs_[s].end(),
              [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  }

  for (int s = 0; s < c; ++s) {
    const double as = limits_[s].first, bs = limits_[s].second;
    for (double edge : {as - 2 * bs, as + 2 * bs}) {
      const double t = (a_ - edge) / (2 * b_);
      if (std::abs(t) < 1.0 - 1e-14) edge_angles_.push_back(std::acos(t));
    }
  }
  std::sort(edge_angles_.begin(), edge_angles_.end());
  edge_angles_.erase(std::unique(edge_angles_.begin(), edge_angles_.end(),
                                 [](double x, double y) {
                                   return std::abs(x - y) < 1e-12;
                                 }),
                     edge_angles_.end());
}

SpectralChart SpectralChart::build(const WebSystem& sys) {
  std::vector<std::pair<double, double>> limits;
  for (const auto& ch : sys.channels())
    limits.emplace_back(ch.limit_a, ch.limit_b);
  return SpectralChart(std::move(limits));
}

SpectralChart SpectralChart::from_limits(
    std::vector<std::pair<double, double>> ab) {
  return SpectralChart(std::move(ab));
}

cplx SpectralChart::lambda_of_omega(cplx w) const {
  if (w == cplx(0.0)) throw std::domain_error("lambda_of_omega: omega = 0");
  return a_ - b_ * (w + 1.0 / w);
}

cplx SpectralChart::theta(int s, cplx w) const {
  if (w == cplx(0.0)) throw std::domain_error("theta: omega = 0");
  const double as = limits_[s].first, bs = limits_[s].second;
  if (on_circle(w)) {
    // lambda real; both quadratic roots either unimodular or real.
    const double t = std::real(a_ - as - b_ * (w + 1.0 / w)) / (2.0 * bs);
    // theta + 1/theta = -2t
    const double u = -t;
    if (std::abs(u) <= 1.0) {
      const double im = std::sqrt(std::max(0.0, 1.0 - u * u));
      const double sgn = (std::imag(w) >= 0.0) ? 1.0 : -1.0;
      return {u, sgn * im};
    }
    return u - std::copysign(std::sqrt(u * u - 1.0), u);
  }
  if (std::abs(w) > 1.0 + kCircleTol)
    throw std::domain_error("theta: omega outside the closed unit disk");
  const cplx lam = lambda_of_omega(w);
  const cplx u = (as - lam) / (2.0 * bs);  // theta + 1/theta = 2u
  cplx disc = std::sqrt(u * u - 1.0);
  // stable large root, small root by reciprocal
  if (std::real(std::conj(u) * disc) < 0.0) disc = -disc;
  const cplx big = u + disc;
  return 1.0 / big;
}

cplx SpectralChart::dtheta_domega(int s, cplx w) const {
  const cplx th = theta(s, w);
  const cplx denom = limits_[s].second * (1.0 - 1.0 / (th * th));
  if (std::abs(denom) < 1e-12)
    throw std::domain_error("dtheta_domega: band edge (theta = +-1)");
  return b_ * (1.0 - 1.0 / (w * w)) / denom;
}

bool SpectralChart::is_open(int s, cplx w) const {
  const cplx th = theta(s, w);
  return std::abs(std::abs(th) - 1.0) <= kOpenTol;
}

ChartPoint SpectralChart::point(cplx w) const {
  ChartPoint p;
  p.omega = w;
  p.lambda = lambda_of_omega(w);
  const bool circ = on_circle(w);
  p.theta.resize(channels());
  p.open.resize(channels());
  for (int s = 0; s < channels(); ++s) {
    p.theta[s] = theta(s, w);
    p.open[s] = circ && std::abs(std::abs(p.theta[s]) - 1.0) <= kOpenTol;
  }
  return p;
}

cplx SpectralChart::omega_of_theta(int s, double th) const {
  bool inside = false;
  for (const auto& seg : segs_[s])
    if (th > seg.lo - 1e-13 && th < seg.hi + 1e-13) inside = true;
  if (!inside || th == 0.0)
    throw std::domain_error("omega_of_theta: theta outside J_sigma");
  const double lam = limits_[s].first - limits_[s].second * (th + 1.0 / th);
  const double t = (a_ - lam) / (2.0 * b_);
  if (std::abs(t) > 1.0 + 1e-12)
    throw std::domain_error("omega_of_theta: image leaves the unit circle");
  const double im = std::sqrt(std::max(0.0, 1.0 - t * t));
  return {t, im};
}

cplx SpectralChart::omega_on_open_arc(int s, cplx th_unit) const {
  if (std::abs(std::abs(th_unit) - 1.0) > 1e-9)
    throw std::domain_error("omega_on_open_arc: theta must be unimodular");
  const double lam = std::real(limits_[s].first -
                               limits_[s].second * (th_unit + 1.0 / th_unit));
  const double t = (a_ - lam) / (2.0 * b_);
  if (std::abs(t) > 1.0 + 1e-12)
    throw std::domain_error("omega_on_open_arc: lambda outside the band");
  const double im = std::sqrt(std::max(0.0, 1.0 - t * t));
  const double sgn = (std::imag(th_unit) >= 0.0) ? 1.0 : -1.0;
  return {t, sgn * im};
}

}  // namespace webscatter
