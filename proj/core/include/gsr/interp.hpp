#pragma once

#include "gsr/raster.hpp"

namespace gsr {

/// Unguided upsamplers, alpha >= 1. All three share the pixel-center
/// coordinate mapping x_lr = (x_hr + 0.5) / alpha - 0.5 and replicate
/// (clamp) edge padding.

/// Exact block replication: output (i, j) = source(i / alpha, j / alpha).
Raster upsample_nearest(const Raster& source, int alpha);

/// Tensor-product linear interpolation.
Raster upsample_bilinear(const Raster& source, int alpha);

/// Tensor-product cubic convolution, Keys kernel with a = -0.5
/// (Catmull-Rom); reproduces degree-1 fields exactly in the interior.
/// Requires source height and width >= 2.
Raster upsample_bicubic(const Raster& source, int alpha);

/// Keys cubic convolution weight at offset t, a = -0.5.
double keys_weight(double t);

}  // namespace gsr
