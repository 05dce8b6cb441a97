#pragma once

#include <string>
#include <vector>

#include "texturedge/raster.hpp"

namespace texturedge {

/// Closed polygon of pixel positions; consecutive vertices are 8-adjacent.
struct Contour {
  std::vector<Point> vertices;

  friend bool operator==(const Contour&, const Contour&) = default;
};

/// Otsu threshold over a 256-bin histogram of the min-max normalised map,
/// returned in the map's own units. Bin k covers normalised values
/// [k/256, (k+1)/256); the returned threshold is the upper edge of the last
/// background bin, so `value >= t` selects the foreground class. Ties in
/// between-class variance go to the lower threshold.
double otsu_threshold(const TextureMap& map);

/// Value below which `percentile` percent of the map lies (nearest rank).
double percentile_threshold(const TextureMap& map, double percentile);

/// bit = value >= t.
BinaryMask binarize(const TextureMap& map, double t);

/// Disk structuring element: offsets with dx^2 + dy^2 <= r^2.
std::vector<Point> disk_offsets(int radius);

BinaryMask dilate(const BinaryMask& mask, int radius);
/// Pixels outside the raster count as set, so closing never eats the border.
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask close(const BinaryMask& mask, int radius);

/// Sets every unset pixel not 4-connected to the raster border through unset
/// pixels.
BinaryMask fill_holes(const BinaryMask& mask);

/// 8-connected component labels (0 = background, 1.. in raster-scan order of
/// first pixel). Returns the number of components.
int label_components(const BinaryMask& mask, std::vector<int>& labels);

/// Closing, optional hole filling, then keeps the 8-connected component whose
/// centroid is nearest `center` (ties: earliest component in scan order).
BinaryMask refine_mask(const BinaryMask& mask, Point center, int close_radius, bool fill);

/// Moore-neighbour tracing of each component's outer boundary, clockwise on
/// screen (y down), starting at the component's topmost-leftmost pixel.
/// A single-pixel component yields the four corners of that pixel.
std::vector<Contour> trace_contour(const BinaryMask& mask);

/// Set pixels with an unset 4-neighbour or on the raster edge.
BinaryMask mask_boundary(const BinaryMask& mask);

/// Copy of `image` with the mask boundary burned in at 255.
GrayImage overlay_boundary(const GrayImage& image, const BinaryMask& mask);

/// 0/255 raster for PGM output, and back (nonzero = set).
GrayImage mask_to_gray(const BinaryMask& mask);
BinaryMask gray_to_mask(const GrayImage& img);

/// One polygon per line: "x0,y0 x1,y1 ...".
std::string format_contours(const std::vector<Contour>& contours);

}  // namespace texturedge
