#include "texturedge/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "texturedge/error.hpp"

namespace texturedge {

BinaryMask circle_mask(int width, int height, int cx, int cy, int r) {
  if (r < 0) throw Error(ErrorCode::InvalidConfig, "circle radius must be >= 0");
  BinaryMask out(width, height);
  const long r2 = static_cast<long>(r) * r;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const long dx = x - cx;
      const long dy = y - cy;
      out.at(x, y) = dx * dx + dy * dy <= r2 ? 1 : 0;
    }
  }
  return out;
}

namespace {

void tally(ConfusionCounts& c, bool pred, bool truth) {
  if (pred && truth) ++c.tp;
  else if (pred) ++c.fp;
  else if (truth) ++c.fn;
  else ++c.tn;
}

}  // namespace

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth) {
  if (!pred.same_shape(truth)) throw Error(ErrorCode::DimensionMismatch, "prediction and truth sizes differ");
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) tally(c, pred.data[i] != 0, truth.data[i] != 0);
  return c;
}

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth, const BinaryMask& region) {
  if (!pred.same_shape(truth) || !pred.same_shape(region)) {
    throw Error(ErrorCode::DimensionMismatch, "prediction, truth and region sizes differ");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (region.data[i]) tally(c, pred.data[i] != 0, truth.data[i] != 0);
  }
  return c;
}

double f_measure(double precision, double recall) {
  if (precision == 0.0 || recall == 0.0) return 0.0;
  return 2.0 / (1.0 / precision + 1.0 / recall);
}

EvalReport metrics(const ConfusionCounts& c) {
  EvalReport r;
  r.counts = c;
  const auto ratio = [](std::uint64_t num, std::uint64_t den, bool& undefined) {
    undefined = den == 0;
    return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.precision = ratio(c.tp, c.tp + c.fp, r.undefined.precision);
  r.recall = ratio(c.tp, c.tp + c.fn, r.undefined.recall);
  bool fpr_undefined = false;
  r.fpr = ratio(c.fp, c.fp + c.tn, fpr_undefined);
  r.specificity = fpr_undefined ? 0.0 : 1.0 - r.fpr;
  r.undefined.specificity = fpr_undefined;
  r.dice = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, r.undefined.dice);
  // 2/(1/P + 1/R) with P = tp/(tp+fp), R = tp/(tp+fn) reduces to 2tp/(2tp+fp+fn).
  if (r.undefined.precision || r.undefined.recall || c.tp == 0) {
    r.f_measure = 0.0;
    r.undefined.f_measure = true;
  } else {
    r.f_measure = static_cast<double>(2 * c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
  }
  return r;
}

double trapezoid_area(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    area += (points[k].fpr - points[k - 1].fpr) * (points[k].tpr + points[k - 1].tpr) / 2.0;
  }
  return area;
}

RocCurve roc_az(const TextureMap& scores, const BinaryMask& truth, const std::optional<BinaryMask>& eval_region) {
  if (!scores.same_shape(truth) || (eval_region && !scores.same_shape(*eval_region))) {
    throw Error(ErrorCode::DimensionMismatch, "scores, truth and region sizes differ");
  }
  std::vector<std::pair<double, bool>> samples;
  samples.reserve(scores.size());
  std::uint64_t positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (eval_region && !eval_region->data[i]) continue;
    if (!std::isfinite(scores.data[i])) throw Error(ErrorCode::InvalidConfig, "non-finite score");
    const bool pos = truth.data[i] != 0;
    positives += pos ? 1 : 0;
    samples.emplace_back(scores.data[i], pos);
  }
  const std::uint64_t negatives = samples.size() - positives;
  if (positives == 0) throw Error(ErrorCode::NoPositives, "ground truth has no positive pixel");
  if (negatives == 0) throw Error(ErrorCode::NoNegatives, "ground truth has no negative pixel");

  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});  // threshold +inf
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  // Twice the area in units of (1/N)(1/P); exact in integers.
  std::uint64_t area2 = 0;
  std::size_t i = 0;
  while (i < samples.size()) {
    const double t = samples[i].first;
    const auto tp_prev = tp;
    const auto fp_prev = fp;
    for (; i < samples.size() && samples[i].first == t; ++i) {
      if (samples[i].second) ++tp;
      else ++fp;
    }
    area2 += (fp - fp_prev) * (tp + tp_prev);
    curve.points.push_back({static_cast<double>(fp) / negatives, static_cast<double>(tp) / positives});
  }
  // The -inf sentinel classifies everything positive: (1,1), already the last point.
  curve.az = static_cast<double>(area2) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
  return curve;
}

std::string format_roc_csv(const RocCurve& curve) {
  std::string text = "fpr,tpr\n";
  char buf[64];
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.fpr, p.tpr);
    text += buf;
  }
  return text;
}

}  // namespace texturedge
