#pragma once

#include <string>

#include "gsr/raster.hpp"

namespace gsr {

/// One sample: HR guide G (C x H x W), HR target Y (1 x H x W) and the LR
/// source S (1 x H/alpha x W/alpha) it is upsampled from.
struct PatchRecord {
  std::string id;
  Raster guide;
  Raster target;
  Raster source;
  int alpha = 1;

  void validate() const;

  bool operator==(const PatchRecord&) const = default;
};

}  // namespace gsr
