#pragma once

#include <string>

#include "webscatter/marchenko.hpp"
#include "webscatter/websystem.hpp"

namespace webscatter {

// Thrown on malformed input files; message carries the JSON path when known.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

WebSystem load_system(const std::string& path);
void save_system(const WebSystem& sys, const std::string& path);

SpectralDataset load_dataset(const std::string& path);
void save_dataset(const SpectralDataset& d, const std::string& path);

std::string chart_to_json(const SpectralChart& chart);

// Write via a temp file in the same directory + rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace webscatter
