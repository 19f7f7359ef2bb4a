#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "twist/drawing.hpp"

namespace twist {

// Unrolled annulus: vertex i sits at P_i = (i, rho_i) and P_i' = (i - (n+1), rho_i).
// Edge (i,j), i<j, is the segment P_i P_j' (wrapped, crosses the seam x = 0)
// unless it is listed in `direct`, in which case it is P_i P_j.
struct StripScene {
  int n = 0;
  std::vector<mpq_class> radii;  // radii[i-1] = rho_i
  std::vector<Edge> direct;      // sorted
  bool wraps(VertexId i, VertexId j) const;
};

struct PointScene {
  std::vector<std::array<mpq_class, 2>> points;  // points[i-1] = position of vertex i
  int n() const { return static_cast<int>(points.size()); }
};

struct GeneratedStrip {
  StripScene scene;
  Drawing drawing;
  std::uint64_t seed = 0;
  int attempts = 1;
  bool fallback = false;  // canonical radii rejected, sampled radii used
};

// Seam-crossing predicate of a c-monotone drawing: true iff edge {a,b} crosses the ray.
using SeamPredicate = std::function<bool(VertexId, VertexId)>;

Drawing strip_to_drawing(const StripScene& s);
Drawing straight_line_drawing(const PointScene& p);

GeneratedStrip canonical_gt(int n);
GeneratedStrip random_gt(int n, std::uint64_t seed, int max_attempts = 500);

PointScene convex_points(int n);
Drawing convex_drawing(int n);
PointScene random_points(int n, std::uint64_t seed, int max_attempts = 500);

// Vertices are assigned to random bands; an edge wraps iff its endpoints share a band.
GeneratedStrip cmonotone_mixed(int n, std::uint64_t seed, int max_attempts = 500);
GeneratedStrip cmonotone_mixed(int n, const SeamPredicate& wrap, std::uint64_t seed, int max_attempts = 500);
SeamPredicate seam_predicate(const StripScene& s);

// Reference crossing sets: nested intervals (twisted) and interleaved (convex).
std::vector<EdgePair> twisted_rule_pairs(int n);
std::vector<EdgePair> convex_rule_pairs(int n);

// No crossing {i,j} x {k,l} with i<k<j<l.
bool satisfies_nesting_pattern(const Drawing& d);

// Where the vertical line x = s, for a small non-integer s, meets the wrapped
// edges, bottom to top. `segment` counts the crossings of `edge` with x > s.
struct SeamHit {
  EdgeId edge = -1;
  int segment = 0;
};
std::vector<SeamHit> strip_seam_hits(const StripScene& s);

}  // namespace twist
