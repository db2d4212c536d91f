#include "atlas/brick.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace atlas {

namespace {

bool interiors_overlap(const Brick& a, const Brick& b) {
  return std::min(a.x2, b.x2) > std::max(a.x1, b.x1) &&
         std::min(a.y2, b.y2) > std::max(a.y1, b.y1);
}

// Union area of arbitrarily overlapping bricks by coordinate compression.
double union_area(const std::vector<Brick>& bricks) {
  std::vector<double> xs, ys;
  for (const Brick& b : bricks) {
    xs.push_back(b.x1);
    xs.push_back(b.x2);
    ys.push_back(b.y1);
    ys.push_back(b.y2);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double mx = (xs[i] + xs[i + 1]) / 2, my = (ys[j] + ys[j + 1]) / 2;
      for (const Brick& b : bricks)
        if (b.x1 < mx && mx < b.x2 && b.y1 < my && my < b.y2) {
          total += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
          break;
        }
    }
  return total;
}

// Splits a region by the line {axis coordinate = c}; returns the lower/left
// and upper/right parts (either may be empty).
std::pair<BrickRegion, BrickRegion> cut(const BrickRegion& r, char axis, double c) {
  BrickRegion lo, hi;
  for (const Brick& b : r.bricks) {
    const double b1 = (axis == 'x') ? b.x1 : b.y1;
    const double b2 = (axis == 'x') ? b.x2 : b.y2;
    if (b2 <= c) {
      lo.bricks.push_back(b);
    } else if (b1 >= c) {
      hi.bricks.push_back(b);
    } else {
      Brick left = b, right = b;
      if (axis == 'x') {
        left.x2 = c;
        right.x1 = c;
      } else {
        left.y2 = c;
        right.y1 = c;
      }
      lo.bricks.push_back(left);
      hi.bricks.push_back(right);
    }
  }
  return {std::move(lo), std::move(hi)};
}

struct SplitChoice {
  char axis = ' ';
  double c = 0;
  std::size_t worst = std::numeric_limits<std::size_t>::max();
};

// Internal brick boundary minimizing the larger side's brick count; both
// sides must receive positive area.
SplitChoice choose_split(const BrickRegion& r) {
  SplitChoice best;
  const std::size_t n = r.bricks.size();
  for (char axis : {'x', 'y'}) {
    std::vector<double> cands;
    for (const Brick& b : r.bricks) {
      cands.push_back((axis == 'x') ? b.x1 : b.y1);
      cands.push_back((axis == 'x') ? b.x2 : b.y2);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (double c : cands) {
      std::size_t left = 0, right = 0;
      for (const Brick& b : r.bricks) {
        const double b1 = (axis == 'x') ? b.x1 : b.y1;
        const double b2 = (axis == 'x') ? b.x2 : b.y2;
        if (b1 < c) ++left;
        if (b2 > c) ++right;
      }
      if (left == 0 || right == 0) continue;
      const std::size_t worst = std::max(left, right);
      if (worst < best.worst) best = {axis, c, worst};
    }
  }
  if (best.worst >= n)
    throw std::runtime_error("no brick boundary strictly separates the region");
  return best;
}

void trace_rec(const BrickRegion& a, const BrickRegion& b, int depth, double eps,
               BmSplitTrace& out) {
  if (depth > 64) throw std::runtime_error("split recursion exceeded depth cap");
  BmSplitNode node;
  node.depth = depth;
  node.bricks_a = a.bricks.size();
  node.bricks_b = b.bricks.size();
  node.ineq = bm_verify(a, b, eps);
  out.max_depth = std::max(out.max_depth, depth);
  if (a.bricks.size() == 1 && b.bricks.size() == 1) {
    node.leaf = true;
    out.nodes.push_back(node);
    return;
  }
  const bool split_a = a.bricks.size() >= b.bricks.size();
  const BrickRegion& s = split_a ? a : b;
  const BrickRegion& o = split_a ? b : a;
  const SplitChoice ch = choose_split(s);
  auto [s_lo, s_hi] = cut(s, ch.axis, ch.c);
  const double s_area = brick_area(s);
  const double theta = brick_area(s_lo) / s_area;

  // Slide a parallel line through the other region to the same area fraction.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Brick& br : o.bricks) {
    lo = std::min(lo, (ch.axis == 'x') ? br.x1 : br.y1);
    hi = std::max(hi, (ch.axis == 'x') ? br.x2 : br.y2);
  }
  const double target = theta * brick_area(o);
  for (int it = 0; it < 100; ++it) {
    const double mid = (lo + hi) / 2;
    if (brick_area(cut(o, ch.axis, mid).first) < target)
      lo = mid;
    else
      hi = mid;
  }
  auto [o_lo, o_hi] = cut(o, ch.axis, (lo + hi) / 2);
  if (o_lo.bricks.empty() || o_hi.bricks.empty())
    throw std::runtime_error("degenerate slide position in split recursion");

  node.axis = ch.axis;
  node.theta = theta;
  out.nodes.push_back(node);
  const BrickRegion& a_lo = split_a ? s_lo : o_lo;
  const BrickRegion& b_lo = split_a ? o_lo : s_lo;
  const BrickRegion& a_hi = split_a ? s_hi : o_hi;
  const BrickRegion& b_hi = split_a ? o_hi : s_hi;
  trace_rec(a_lo, b_lo, depth + 1, eps, out);
  trace_rec(a_hi, b_hi, depth + 1, eps, out);
}

}  // namespace

BrickRegion make_brick_region(std::vector<Brick> bricks) {
  if (bricks.empty()) throw std::invalid_argument("brick region is empty");
  for (const Brick& b : bricks)
    if (!(b.x1 < b.x2) || !(b.y1 < b.y2))
      throw std::invalid_argument("brick with nonpositive side length");
  for (std::size_t i = 0; i < bricks.size(); ++i)
    for (std::size_t j = i + 1; j < bricks.size(); ++j)
      if (interiors_overlap(bricks[i], bricks[j]))
        throw std::invalid_argument("bricks overlap in the interior");
  return {std::move(bricks)};
}

double brick_area(const BrickRegion& r) {
  if (r.bricks.empty()) throw std::invalid_argument("brick region is empty");
  return union_area(r.bricks);
}

BrickRegion brick_minkowski_sum(const BrickRegion& a, const BrickRegion& b) {
  if (a.bricks.empty() || b.bricks.empty())
    throw std::invalid_argument("brick region is empty");
  std::vector<Brick> raw;
  for (const Brick& p : a.bricks)
    for (const Brick& q : b.bricks)
      raw.push_back({p.x1 + q.x1, p.x2 + q.x2, p.y1 + q.y1, p.y2 + q.y2});
  // Re-emit as interior-disjoint bricks: covered cells of the compressed
  // grid, merged into maximal runs along x.
  std::vector<double> xs, ys;
  for (const Brick& r : raw) {
    xs.push_back(r.x1);
    xs.push_back(r.x2);
    ys.push_back(r.y1);
    ys.push_back(r.y2);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  BrickRegion out;
  for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
    std::size_t run_start = 0;
    bool in_run = false;
    for (std::size_t i = 0; i <= xs.size() - 1; ++i) {
      bool covered = false;
      if (i + 1 < xs.size()) {
        const double mx = (xs[i] + xs[i + 1]) / 2, my = (ys[j] + ys[j + 1]) / 2;
        for (const Brick& r : raw)
          if (r.x1 < mx && mx < r.x2 && r.y1 < my && my < r.y2) {
            covered = true;
            break;
          }
      }
      if (covered && !in_run) {
        run_start = i;
        in_run = true;
      } else if (!covered && in_run) {
        out.bricks.push_back({xs[run_start], xs[i], ys[j], ys[j + 1]});
        in_run = false;
      }
    }
  }
  return out;
}

BmReport bm_verify(const BrickRegion& a, const BrickRegion& b, double eps) {
  BmReport rep;
  rep.area_a = brick_area(a);
  rep.area_b = brick_area(b);
  rep.area_sum = brick_area(brick_minkowski_sum(a, b));
  rep.slack = std::sqrt(rep.area_sum) - std::sqrt(rep.area_a) - std::sqrt(rep.area_b);
  const double scale = std::max(1.0, std::sqrt(rep.area_sum));
  rep.holds = rep.slack >= -eps * scale;
  rep.equality = std::abs(rep.slack) <= eps * scale;
  return rep;
}

BmSplitTrace bm_split_trace(const BrickRegion& a, const BrickRegion& b, double eps) {
  if (a.bricks.empty() || b.bricks.empty())
    throw std::invalid_argument("brick region is empty");
  BmSplitTrace out;
  trace_rec(a, b, 0, eps, out);
  out.all_hold = true;
  for (const BmSplitNode& n : out.nodes) out.all_hold = out.all_hold && n.ineq.holds;
  return out;
}

}  // namespace atlas
