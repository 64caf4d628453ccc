#pragma once

#include <complex>
#include <vector>

#include "gsr/raster.hpp"

namespace gsr {

/// Unnormalized forward 2-D DFT (radix-2 Cooley-Tukey, rows then columns)
/// of a single-channel raster with power-of-two dimensions. Row-major
/// H x W output; satisfies sum |F|^2 = H*W * sum |x|^2.
std::vector<std::complex<double>> fft2d(const Raster& map);

/// Mean DFT magnitude over annuli of integer frequency radius, DC in bin
/// 0, bins above floor(min(H, W) / 2) discarded.
struct RadialSpectrum {
  std::vector<double> mean_magnitude;  // index = radius in cycles/image
  std::vector<long long> count;        // grid entries per bin
  std::vector<double> std_dev;         // filled by aggregate_profiles

  int max_radius() const { return static_cast<int>(mean_magnitude.size()) - 1; }
};

RadialSpectrum radial_profile(const std::vector<std::complex<double>>& spectrum, int height, int width);

/// Per-bin mean and population standard deviation across sample profiles.
/// All inputs must share the same radius axis.
RadialSpectrum aggregate_profiles(const std::vector<RadialSpectrum>& profiles);

}  // namespace gsr
