#pragma once
// Field snapshot files: one JSON header line {"n":..,"time":..,"name":..}
// terminated by '\n', then n*n little-endian float64 physical samples in the
// row-major layout of Grid (index i2*n + i1). See docs/formats.md.

#include <filesystem>
#include <string>

#include "bsq/spectral/field.hpp"

namespace bsq::spectral {

struct Snapshot {
  int n = 0;
  double time = 0.0;
  std::string name;
  Samples samples;
};

void write_snapshot(const std::filesystem::path& path, const ScalarField& f,
                    double time, const std::string& name);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace bsq::spectral
