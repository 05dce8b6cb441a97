#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "texturedge/raster.hpp"

namespace texturedge {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Which metrics hit a zero denominator (and were therefore reported as 0).
struct UndefinedFlags {
  bool dice = false;
  bool precision = false;
  bool recall = false;
  bool specificity = false;
  bool f_measure = false;

  bool any() const noexcept { return dice || precision || recall || specificity || f_measure; }
  friend bool operator==(const UndefinedFlags&, const UndefinedFlags&) = default;
};

struct EvalReport {
  ConfusionCounts counts;
  double dice = 0.0;
  double precision = 0.0;
  double recall = 0.0;       // = sensitivity = TPR
  double specificity = 0.0;  // = 1 - FPR
  double fpr = 0.0;
  double f_measure = 0.0;
  UndefinedFlags undefined;
};

/// bit = (x-cx)^2 + (y-cy)^2 <= r^2.
BinaryMask circle_mask(int width, int height, int cx, int cy, int r);

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth);

/// Confusion restricted to pixels set in `region` (same dimensions).
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth, const BinaryMask& region);

/// Harmonic mean 2 / (1/precision + 1/recall). Zero if either input is zero.
double f_measure(double precision, double recall);

/// Dice 2tp/(2tp+fp+fn), precision, recall, specificity and F-measure from
/// one tally. The F-measure is evaluated in its count form, which equals the
/// harmonic mean of precision and recall and makes dice == f_measure exactly.
EvalReport metrics(const ConfusionCounts& c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) ... (1,1), fpr and tpr non-decreasing
  double az = 0.0;
};

/// Sweeps thresholds over the distinct scores (plus +/- infinity), calling
/// score >= t positive, and integrates the curve trapezoidally. Only pixels
/// set in `eval_region` take part (default: all).
RocCurve roc_az(const TextureMap& scores, const BinaryMask& truth,
                const std::optional<BinaryMask>& eval_region = std::nullopt);

/// Trapezoidal area under a polyline of ROC points.
double trapezoid_area(const std::vector<RocPoint>& points);

std::string format_roc_csv(const RocCurve& curve);

}  // namespace texturedge
