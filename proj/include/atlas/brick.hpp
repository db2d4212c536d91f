#pragma once

#include "atlas/symmetric_matrix.hpp"

#include <cstddef>
#include <vector>

namespace atlas {

// Axis-parallel rectangle [x1, x2] x [y1, y2] with positive side lengths.
struct Brick {
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
};

// Finite union of bricks with pairwise disjoint interiors.
struct BrickRegion {
  std::vector<Brick> bricks;
};

// Validates side positivity and pairwise interior disjointness.
BrickRegion make_brick_region(std::vector<Brick> bricks);

double brick_area(const BrickRegion& r);

// Minkowski sum: union of all pairwise brick sums, re-emitted as a region
// with disjoint interiors via coordinate compression.
BrickRegion brick_minkowski_sum(const BrickRegion& a, const BrickRegion& b);

struct BmReport {
  double area_a = 0, area_b = 0, area_sum = 0;
  double slack = 0;  // sqrt(area_sum) - sqrt(area_a) - sqrt(area_b)
  bool holds = false;
  bool equality = false;  // |slack| within tolerance
};

// sqrt(area(A+B)) >= sqrt(area(A)) + sqrt(area(B)).
BmReport bm_verify(const BrickRegion& a, const BrickRegion& b, double eps = kDefaultEps);

struct BmSplitNode {
  int depth = 0;
  std::size_t bricks_a = 0, bricks_b = 0;
  bool leaf = false;
  char axis = ' ';      // split axis at internal nodes
  double theta = 0;     // area fraction of the left/lower part
  BmReport ineq;
};

struct BmSplitTrace {
  std::vector<BmSplitNode> nodes;
  int max_depth = 0;
  bool all_hold = false;
};

// Replays the divide-and-conquer proof: split the region with more bricks
// along one of its internal brick boundaries, slide a parallel line through
// the other region to match the area fraction, recurse, and record the
// inequality at every node down to single-brick pairs.
BmSplitTrace bm_split_trace(const BrickRegion& a, const BrickRegion& b,
                            double eps = kDefaultEps);

}  // namespace atlas
