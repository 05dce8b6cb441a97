#pragma once

#include <optional>

#include "texturedge/raster.hpp"

namespace texturedge {

/// Speckle-reducing anisotropic diffusion parameters.
struct SradParams {
  int iterations = 100;
  double time_step = 0.05;     // explicit scheme is stable for (0, 0.25]
  double q0_decay_rho = 0.05;  // q0(t) = q0(0) * exp(-rho * t)
  // Region used to estimate the initial speckle scale q0(0) = std/mean.
  // When absent q0(0) = 1.
  std::optional<Rect> homogeneous_region;

  friend bool operator==(const SradParams&, const SradParams&) = default;
};

struct ClaheParams {
  double clip_limit = 2.0;  // multiple of the uniform bin height
  int tiles_x = 8;
  int tiles_y = 8;
  int bins = 256;

  friend bool operator==(const ClaheParams&, const ClaheParams&) = default;
};

/// Explicit 4-neighbour SRAD with mirror boundaries. Works on intensities
/// normalised to (0,1]; the result is re-quantised with round-half-up.
/// Rows are updated in parallel; every pixel depends only on the previous
/// iterate, so Serial and Parallel produce identical images.
GrayImage srad(const GrayImage& img, const SradParams& params,
               Execution exec = Execution::Parallel);

/// Contrast-limited adaptive histogram equalisation with bilinear
/// interpolation between the four nearest tile mappings.
GrayImage clahe(const GrayImage& img, const ClaheParams& params,
                Execution exec = Execution::Parallel);

}  // namespace texturedge
