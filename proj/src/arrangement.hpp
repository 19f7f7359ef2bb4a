#pragma once

#include <gmpxx.h>

#include <array>
#include <vector>

#include "twist/drawing.hpp"

namespace twist::detail {

// A straight segment per edge, from the image of edge.u to an image of
// edge.v, in scaled integer coordinates. With period > 0 the plane is the
// universal cover of a cylinder and every x-translate by k*period is checked.
struct SegmentInput {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::array<mpz_class, 4>> seg;  // px py qx qy
  mpz_class period = 0;
  bool want_params = false;
};

struct ArrangementResult {
  Drawing drawing;
  // Crossing parameters along each edge (0 at edge.u, 1 at edge.v), in the
  // order of the drawing's crossing sequences. Filled on request.
  std::vector<std::vector<mpq_class>> params;
};

// Throws InputError on any degeneracy: touching segments, a vertex image on
// a segment, overlapping collinear segments, adjacent edges crossing, a pair
// crossing twice, or three edges through one point.
ArrangementResult build_arrangement(const SegmentInput& in);

}  // namespace twist::detail
