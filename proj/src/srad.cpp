#include <algorithm>
#include <cmath>
#include <vector>

#include "texturedge/enhance.hpp"
#include "texturedge/error.hpp"

namespace texturedge {

namespace {

constexpr double kEpsilon = 1e-6;

// Symmetric boundary: the row/column beyond the edge mirrors the edge itself.
inline int mirror(int i, int n) noexcept { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

double initial_q0(const std::vector<double>& intensity, int width, const std::optional<Rect>& region) {
  if (!region) return 1.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int y = region->y; y < region->y + region->height; ++y) {
    for (int x = region->x; x < region->x + region->width; ++x) {
      const double v = intensity[static_cast<std::size_t>(y) * width + x];
      sum += v;
      sum_sq += v * v;
    }
  }
  const double n = static_cast<double>(region->width) * region->height;
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return std::max(std::sqrt(var) / mean, kEpsilon);
}

void validate(const GrayImage& img, const SradParams& p) {
  if (!(p.time_step > 0.0 && p.time_step <= 0.25)) {
    throw Error(ErrorCode::InvalidTimeStep, "time_step must lie in (0, 0.25]");
  }
  if (p.iterations < 0) throw Error(ErrorCode::InvalidConfig, "srad iterations must be >= 0");
  if (!(p.q0_decay_rho >= 0.0)) throw Error(ErrorCode::InvalidConfig, "q0_decay_rho must be >= 0");
  if (p.homogeneous_region) {
    const auto& r = *p.homogeneous_region;
    if (r.width <= 0 || r.height <= 0 || r.x < 0 || r.y < 0 || r.x + r.width > img.width ||
        r.y + r.height > img.height) {
      throw Error(ErrorCode::InvalidConfig, "homogeneous_region outside image");
    }
  }
}

}  // namespace

GrayImage srad(const GrayImage& img, const SradParams& params, Execution exec) {
  validate(img, params);
  if (params.iterations == 0 || img.empty()) return img;

  const int w = img.width;
  const int h = img.height;
  const std::size_t n = img.size();
  std::vector<double> cur(n);
  std::vector<double> next(n);
  std::vector<double> coeff(n);
  for (std::size_t i = 0; i < n; ++i) cur[i] = img.data[i] / 255.0 + kEpsilon;

  const double q0_initial = initial_q0(cur, w, params.homogeneous_region);
  const bool parallel = exec == Execution::Parallel;

  for (int it = 0; it < params.iterations; ++it) {
    const double q0 = q0_initial * std::exp(-params.q0_decay_rho * it * params.time_step);
    const double q0sq = q0 * q0;

    // Diffusion coefficient from the instantaneous coefficient of variation.
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < h; ++y) {
      const double* row = &cur[static_cast<std::size_t>(y) * w];
      const double* up = &cur[static_cast<std::size_t>(mirror(y - 1, h)) * w];
      const double* down = &cur[static_cast<std::size_t>(mirror(y + 1, h)) * w];
      double* crow = &coeff[static_cast<std::size_t>(y) * w];
      for (int x = 0; x < w; ++x) {
        const double v = row[x];
        const double dn = up[x] - v;
        const double ds = down[x] - v;
        const double dw = row[mirror(x - 1, w)] - v;
        const double de = row[mirror(x + 1, w)] - v;
        const double g2 = (dn * dn + ds * ds + dw * dw + de * de) / (v * v);
        const double lap = (dn + ds + dw + de) / v;
        const double num = 0.5 * g2 - (lap * lap) / 16.0;
        const double den = (1.0 + 0.25 * lap) * (1.0 + 0.25 * lap);
        const double qsq = num / den;
        double c = 1.0 / (1.0 + (qsq - q0sq) / (q0sq * (1.0 + q0sq)));
        if (!std::isfinite(c)) c = 0.0;
        crow[x] = std::clamp(c, 0.0, 1.0);
      }
    }

    // Divergence of c * grad(I); south/east fluxes use the neighbour's coefficient.
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < h; ++y) {
      const std::size_t ys = static_cast<std::size_t>(y) * w;
      const std::size_t yd = static_cast<std::size_t>(mirror(y + 1, h)) * w;
      const double* row = &cur[ys];
      const double* up = &cur[static_cast<std::size_t>(mirror(y - 1, h)) * w];
      const double* down = &cur[yd];
      for (int x = 0; x < w; ++x) {
        const double v = row[x];
        const int xe = mirror(x + 1, w);
        const double dn = up[x] - v;
        const double ds = down[x] - v;
        const double dw = row[mirror(x - 1, w)] - v;
        const double de = row[xe] - v;
        const double c_here = coeff[ys + x];
        const double div = c_here * dn + coeff[yd + x] * ds + c_here * dw + coeff[ys + xe] * de;
        next[ys + x] = v + 0.25 * params.time_step * div;
      }
    }
    cur.swap(next);
  }

  GrayImage out(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::floor((cur[i] - kEpsilon) * 255.0 + 0.5);
    out.data[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

}  // namespace texturedge
