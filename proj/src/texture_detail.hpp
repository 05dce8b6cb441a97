#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "texturedge/texture.hpp"

namespace texturedge::detail {

inline double probability(std::uint32_t count, std::uint64_t pairs) noexcept {
  return static_cast<double>(count) / static_cast<double>(pairs);
}

// One cell's contribution. Every descriptor path accumulates these terms in
// row-major cell order so all kernels round identically.
inline double term(Descriptor kind, int i, int j, double p) noexcept {
  const double d = static_cast<double>(i - j);
  switch (kind) {
    case Descriptor::Contrast: return d * d * p;
    case Descriptor::Entropy: return -p * std::log2(p);
    case Descriptor::Asm: return p * p;
    case Descriptor::Idm: return p / (1.0 + d * d);
  }
  return 0.0;
}

// Cells with p == 0 contribute exactly nothing and are skipped, so a caller
// that visits only occupied cells (in the same order) gets the same bits.
template <class ProbabilityAt>
double evaluate(Descriptor kind, int levels, ProbabilityAt&& prob) {
  double acc = 0.0;
  for (int i = 0; i < levels; ++i) {
    for (int j = 0; j < levels; ++j) {
      const double p = prob(static_cast<std::size_t>(i) * levels + j);
      if (p == 0.0) continue;
      acc += term(kind, i, j, p);
    }
  }
  return acc;
}

// Symmetric (edge-duplicating) reflection: -1 -> 0, n -> n-1. Valid while
// the overshoot is at most n.
inline int reflect(int i, int n) noexcept {
  if (i < 0) return -i - 1;
  if (i >= n) return 2 * n - i - 1;
  return i;
}

}  // namespace texturedge::detail
