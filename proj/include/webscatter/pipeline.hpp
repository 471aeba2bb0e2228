#pragma once

#include "webscatter/marchenko.hpp"
#include "webscatter/spectrum.hpp"

namespace webscatter {

struct ExportConfig {
  int circle_grid = 8192;       // power of two, >= 4096
  int nodes_per_segment = 512;  // node budget per closed sub-segment
  int threads = 0;
};

// Sample exactly the observable spectral data from the direct pipeline.
SpectralDataset export_spectral_data(const Model& m,
                                     const std::vector<DiscreteLevel>& levels,
                                     const ExportConfig& cfg);

struct InvertResult {
  std::vector<RecoveredChannel> channels;
};

// Recover all channel coefficients for k = 1..k_max from a dataset alone.
InvertResult invert_dataset(const SpectralDataset& d, int k_max,
                            int threads = 0);

struct RoundtripResult {
  InvertResult inverted;
  double max_error = 0.0;  // against the true coefficients, k = 1..k_max
};

RoundtripResult roundtrip(WebSystem sys, int k_max, const ExportConfig& cfg);

}  // namespace webscatter
