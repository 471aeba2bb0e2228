#pragma once

#include <utility>
#include <vector>

#include "webscatter/websystem.hpp"

namespace webscatter {

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return hi <= lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Evaluation of the chart at one point of the closed unit disk.
struct ChartPoint {
  cplx omega;
  cplx lambda;
  std::vector<cplx> theta;
  std::vector<bool> open;  // |theta_s| = 1 within tolerance
};

// Band geometry and the uniformization lambda = a - b(omega + 1/omega),
// together with the per-channel maps theta_s(omega). Immutable; all
// operations are pure.
class SpectralChart {
 public:
  static SpectralChart build(const WebSystem& sys);
  static SpectralChart from_limits(std::vector<std::pair<double, double>> ab);

  double a() const { return a_; }
  double b() const { return b_; }
  int channels() const { return static_cast<int>(limits_.size()); }
  double limit_a(int s) const { return limits_[s].first; }
  double limit_b(int s) const { return limits_[s].second; }

  cplx lambda_of_omega(cplx w) const;

  // Branch of b_s th^2 + (lambda - a_s) th + b_s = 0 fixed by:
  //   |w| < 1            -> |theta| < 1,
  //   w on T, both roots unimodular -> sign(Im theta) = sign(Im w),
  //   w on T, real roots -> the root in [-1, 1].
  cplx theta(int s, cplx w) const;
  cplx dtheta_domega(int s, cplx w) const;
  bool is_open(int s, cplx w_on_circle) const;
  ChartPoint point(cplx w) const;

  // Inverse maps. omega_of_theta takes theta in the interior of J_s and
  // returns the point of T_s^- in the closed upper half circle;
  // omega_on_open_arc takes unimodular theta and returns the point of T_s^+
  // with theta_s(omega) = theta.
  cplx omega_of_theta(int s, double th) const;
  cplx omega_on_open_arc(int s, cplx th_unit) const;

  // T_s^+ as angle intervals in [0, 2pi); J_s as up to two real segments.
  const std::vector<std::pair<double, double>>& open_arcs(int s) const {
    return arcs_[s];
  }
  const std::vector<Segment>& segments(int s) const { return segs_[s]; }

  // Angles in (0, pi) where some channel's band edge sits on the circle.
  const std::vector<double>& edge_angles() const { return edge_angles_; }

  static constexpr double kOpenTol = 1e-12;

 private:
  explicit SpectralChart(std::vector<std::pair<double, double>> limits);

  double a_ = 0.0, b_ = 1.0;
  std::vector<std::pair<double, double>> limits_;
  std::vector<std::vector<std::pair<double, double>>> arcs_;
  std::vector<std::vector<Segment>> segs_;
  std::vector<double> edge_angles_;
};

}  // namespace webscatter
