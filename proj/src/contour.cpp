#include <array>

#include "texturedge/error.hpp"
#include "texturedge/segment.hpp"

namespace texturedge {

namespace {

// Clockwise on screen (y down), starting east.
constexpr std::array<Point, 8> kDirs = {Point{1, 0},  Point{1, 1},   Point{0, 1},  Point{-1, 1},
                                        Point{-1, 0}, Point{-1, -1}, Point{0, -1}, Point{1, -1}};
constexpr int kWest = 4;

int direction_of(int dx, int dy) {
  for (int d = 0; d < 8; ++d) {
    if (kDirs[d].x == dx && kDirs[d].y == dy) return d;
  }
  throw Error(ErrorCode::InvariantViolation, "backtrack pixel not 8-adjacent");
}

struct Step {
  Point next;
  int backtrack = 0;  // direction from `next` to the last background pixel examined
  bool found = false;
};

class Tracer {
 public:
  Tracer(const BinaryMask& mask, const std::vector<int>& labels, int label)
      : mask_(mask), labels_(labels), label_(label) {}

  bool inside(Point p) const {
    return mask_.contains(p.x, p.y) && labels_[mask_.index(p.x, p.y)] == label_;
  }

  // Sweeps the Moore neighbourhood of `cur` clockwise from the backtrack.
  Step step(Point cur, int backtrack) const {
    for (int k = 1; k <= 8; ++k) {
      const int d = (backtrack + k) % 8;
      const Point n{cur.x + kDirs[d].x, cur.y + kDirs[d].y};
      if (!inside(n)) continue;
      const auto& prev = kDirs[(d + 7) % 8];
      const Point bp{cur.x + prev.x, cur.y + prev.y};
      return {n, direction_of(bp.x - n.x, bp.y - n.y), true};
    }
    return {};
  }

  Contour trace(Point start) const {
    Contour contour;
    const auto first = step(start, kWest);
    if (!first.found) {
      contour.vertices = {start, {start.x + 1, start.y}, {start.x + 1, start.y + 1}, {start.x, start.y + 1}};
      return contour;
    }
    // Jacob's stopping rule: stop on re-entering the start pixel when the
    // next move would repeat the very first one.
    const std::size_t cap = 4 * mask_.size() + 8;
    Point cur = start;
    int back = kWest;
    while (contour.vertices.size() <= cap) {
      const auto s = step(cur, back);
      if (cur == start && !contour.vertices.empty() && s.next == first.next) return contour;
      contour.vertices.push_back(cur);
      cur = s.next;
      back = s.backtrack;
    }
    throw Error(ErrorCode::InvariantViolation, "contour trace did not close");
  }

 private:
  const BinaryMask& mask_;
  const std::vector<int>& labels_;
  int label_;
};

}  // namespace

std::vector<Contour> trace_contour(const BinaryMask& mask) {
  std::vector<int> labels;
  const int count = label_components(mask, labels);
  std::vector<Contour> contours;
  contours.reserve(static_cast<std::size_t>(count));
  int next_label = 1;
  // Labels are assigned in scan order, so the first pixel met with label L is
  // that component's topmost-leftmost pixel.
  for (int y = 0; y < mask.height && next_label <= count; ++y) {
    for (int x = 0; x < mask.width && next_label <= count; ++x) {
      if (labels[mask.index(x, y)] != next_label) continue;
      contours.push_back(Tracer(mask, labels, next_label).trace({x, y}));
      ++next_label;
    }
  }
  return contours;
}

}  // namespace texturedge
