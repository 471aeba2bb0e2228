#include "webscatter/pipeline.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace webscatter {

SpectralDataset export_spectral_data(const Model& m,
                                     const std::vector<DiscreteLevel>& levels,
                                     const ExportConfig& cfg) {
  if (cfg.circle_grid < 4096 || (cfg.circle_grid & (cfg.circle_grid - 1)))
    throw std::invalid_argument("circle grid must be a power of two >= 4096");
  const int c = m.channels();
  SpectralDataset d;
  d.a = m.chart.a();
  d.b = m.chart.b();
  d.nodes_per_segment = cfg.nodes_per_segment;
  d.channels.resize(c);
  d.closed_nodes.assign(c, {});
  d.closed_weights.assign(c, {});
  d.cross_mag.assign(c, std::vector<std::vector<double>>(c));

  for (int s = 0; s < c; ++s) {
    auto& ch = d.channels[s];
    ch.id = m.sys.channel(s).id;
    ch.limit_a = m.sys.channel(s).limit_a;
    ch.limit_b = m.sys.channel(s).limit_b;

    // Diagonal reflection coefficient on the uniform theta_s grid.
    const int n = cfg.circle_grid;
    ch.s_diag.assign(n, cplx(0.0));
    std::vector<char> bad(n, 0);
    parallel_for(
        n,
        [&](std::size_t j) {
          const cplx th = std::polar(1.0, 2.0 * kPi * (double(j) + 0.5) / n);
          try {
            const cplx w = m.chart.omega_on_open_arc(s, th);
            ScatteringSample smp = scattering_sample(m, w);
            if (smp.flagged) {
              bad[j] = 1;
            } else {
              ch.s_diag[j] = smp.s(s, s);
            }
          } catch (const NearPoleError&) {
            bad[j] = 1;
          } catch (const PoleError&) {
            bad[j] = 1;
          }
        },
        cfg.threads);
    for (int j = 0; j < n; ++j) {
      if (!bad[j]) continue;
      ++ch.flagged;
      int lo = j, hi = j;
      while (bad[(lo + n - 1) % n]) lo = (lo + n - 1) % n;
      while (bad[(hi + 1) % n]) hi = (hi + 1) % n;
      ch.s_diag[j] = 0.5 * (ch.s_diag[(lo + n - 1) % n] +
                            ch.s_diag[(hi + 1) % n]);
    }
    if (ch.flagged * 100 > n)
      throw std::runtime_error("more than 1% flagged samples on channel " +
                               ch.id);

    // Cross magnitudes on the closed segments. The node layout is refined
    // adaptively against |Phi_sigma| so that narrow resonance peaks in the
    // cross data (shallow zeros of det T near a closed segment) are resolved;
    // nodes and weights are stored with the samples.
    auto phi_mag = [&](double th) -> double {
      const cplx w = m.chart.omega_of_theta(s, th);
      ScatteringSample smp = scattering_sample(m, w);
      double tot = 0.0;
      for (int v = 0; v < c; ++v) {
        if (v == s || !smp.open[v]) continue;
        const cplx thv = m.chart.theta(v, w);
        const double mag = std::abs(smp.s(s, v));
        tot += mag * mag *
               std::abs(m.sys.channel(s).limit_b * (1.0 / th - th) /
                        (m.sys.channel(v).limit_b * (1.0 / thv - thv)));
      }
      return tot;
    };
    ClosedQuadrature quad =
        adaptive_closed_quadrature(m.chart, s, cfg.nodes_per_segment, phi_mag);
    d.closed_nodes[s] = quad.theta;
    d.closed_weights[s] = quad.weight;
    if (quad.theta.empty()) continue;
    const std::size_t q = quad.theta.size();
    for (int v = 0; v < c; ++v)
      if (v != s) d.cross_mag[s][v].assign(q, 0.0);
    parallel_for(
        q,
        [&](std::size_t i) {
          const cplx w = m.chart.omega_of_theta(s, quad.theta[i]);
          ScatteringSample smp = scattering_sample(m, w);
          for (int v = 0; v < c; ++v)
            if (v != s && smp.open[v])
              d.cross_mag[s][v][i] = std::abs(smp.s(s, v));
        },
        cfg.threads);
  }

  for (const auto& lv : levels) {
    SpectralDataset::Level l;
    l.omega_hat = lv.omega_hat;
    l.theta = lv.theta;
    l.dtheta = lv.dtheta;
    for (int s = 0; s < c; ++s) l.m_diag.push_back(lv.m_raw(s, s));
    d.levels.push_back(std::move(l));
  }
  return d;
}

InvertResult invert_dataset(const SpectralDataset& d, int k_max, int threads) {
  const int c = d.channel_count();
  // Assemble a long kernel and let the solver truncate where the data has
  // decayed; slowly decaying kernels (shallow levels, narrow resonances)
  // are capped by the kernel length.
  const int n_f = std::max(2 * k_max + 6, 600);

  InvertResult out;
  out.channels.resize(c);
  parallel_for(
      c,
      [&](std::size_t nu) {
        MarchenkoKernel kernel =
            assemble_kernel(d, static_cast<int>(nu), 2 * n_f);
        out.channels[nu] = recover_channel(kernel, d.channels[nu].limit_a,
                                           d.channels[nu].limit_b, k_max);
      },
      threads);
  return out;
}

RoundtripResult roundtrip(WebSystem sys, int k_max, const ExportConfig& cfg) {
  Model model = Model::build(std::move(sys));
  std::vector<DiscreteLevel> levels = compute_levels(model);
  SpectralDataset data = export_spectral_data(model, levels, cfg);
  RoundtripResult out;
  out.inverted = invert_dataset(data, k_max, cfg.threads);
  for (int s = 0; s < model.channels(); ++s) {
    const ChannelSpec& ch = model.sys.channel(s);
    const RecoveredChannel& rec = out.inverted.channels[s];
    for (int k = 1; k <= k_max; ++k) {
      out.max_error = std::max(
          out.max_error, std::abs(rec.diag[k - 1] - ch.diag_at(k)));
      out.max_error = std::max(
          out.max_error, std::abs(rec.hop[k - 1] - ch.hop_at(k)));
    }
  }
  return out;
}

}  // namespace webscatter
