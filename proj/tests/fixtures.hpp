#pragma once

#include <random>

#include "webscatter/direct.hpp"

namespace wsfix {

using namespace webscatter;

// Single channel with limits (a, b), coupling b0, attached to the 1x1
// central block [c].
inline WebSystem single(double c, double a = 2.0, double b = 1.0,
                        double b0 = 1.0, ChannelSpec tweak = {}) {
  ChannelSpec ch;
  ch.id = "s";
  ch.limit_a = a;
  ch.limit_b = b;
  ch.coupling_b0 = b0;
  ch.support = tweak.support;
  ch.diag = tweak.diag;
  ch.hop = tweak.hop;
  Eigen::MatrixXd m(1, 1);
  m << c;
  return WebSystem(CentralBlock{m}, {ch}, {0});
}

// Two-vertex central block [[2.5,-1],[-1,2.5]] with channels (2,1) and (3,1)
// attached at distinct vertices, all couplings 1.
inline WebSystem f1() {
  Eigen::MatrixXd m(2, 2);
  m << 2.5, -1.0, -1.0, 2.5;
  ChannelSpec c1{"c1", 2.0, 1.0, 1.0, 0, {}, {}};
  ChannelSpec c2{"c2", 3.0, 1.0, 1.0, 0, {}, {}};
  return WebSystem(CentralBlock{m}, {c1, c2}, {0, 1});
}

// Like f1 but with a compactly supported perturbation on the first channel,
// strong enough to carry a bound state below the band.
inline WebSystem f1_perturbed() {
  Eigen::MatrixXd m(2, 2);
  m << 5.3, -1.0, -1.0, 2.6;
  ChannelSpec c1{"c1", 2.0, 1.0, 1.0, 2, {2.4, 1.8}, {1.2, 0.9}};
  ChannelSpec c2{"c2", 3.0, 1.0, 1.0, 1, {3.3}, {1.1}};
  return WebSystem(CentralBlock{m}, {c1, c2}, {0, 1});
}

inline ChannelSpec random_channel(std::mt19937& rng, int k0_max = 10,
                                  double pert = 0.5) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ChannelSpec ch;
  ch.id = "r";
  ch.limit_a = -1.0 + 4.0 * u01(rng);
  ch.limit_b = 0.5 + 1.5 * u01(rng);
  ch.coupling_b0 = 0.4 + 1.2 * u01(rng);
  ch.support = static_cast<int>(u01(rng) * (k0_max + 1));
  for (int k = 0; k < ch.support; ++k) {
    ch.diag.push_back(ch.limit_a + pert * ch.limit_b * (2.0 * u01(rng) - 1.0));
    ch.hop.push_back(ch.limit_b * (1.0 + pert * (2.0 * u01(rng) - 1.0)));
  }
  return ch;
}

// Random multichannel system with overlapping bands around a common center.
inline WebSystem random_system(std::mt19937& rng, int n_channels, int k0_max,
                               double pert = 0.4) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int m = n_channels + 1;
  Eigen::MatrixXd central = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    central(i, i) = 1.5 + 2.0 * u01(rng);
    for (int j = i + 1; j < m; ++j) {
      const double v = (u01(rng) < 0.6) ? (2.0 * u01(rng) - 1.0) : 0.0;
      central(i, j) = v;
      central(j, i) = v;
    }
  }
  std::vector<ChannelSpec> chans;
  std::vector<int> att;
  for (int s = 0; s < n_channels; ++s) {
    ChannelSpec ch;
    ch.id = "ch" + std::to_string(s);
    // overlapping bands: centers close together relative to widths
    ch.limit_a = 2.0 + 1.0 * u01(rng);
    ch.limit_b = 0.8 + 0.6 * u01(rng);
    ch.coupling_b0 = 0.5 + u01(rng);
    ch.support = static_cast<int>(u01(rng) * (k0_max + 1));
    for (int k = 0; k < ch.support; ++k) {
      ch.diag.push_back(ch.limit_a +
                        pert * ch.limit_b * (2.0 * u01(rng) - 1.0));
      ch.hop.push_back(ch.limit_b * (1.0 + pert * (2.0 * u01(rng) - 1.0)));
    }
    chans.push_back(std::move(ch));
    att.push_back(s);
  }
  return WebSystem(CentralBlock{central}, std::move(chans), std::move(att));
}

}  // namespace wsfix
