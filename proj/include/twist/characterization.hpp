#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twist/drawing.hpp"
#include "twist/generators.hpp"
#include "twist/io.hpp"
#include "twist/map.hpp"

namespace twist {

// A curve drawn through the cells of a map. Step d leaves face(d) and enters face(twin d).
struct Curve {
  int start_cell = -1;
  std::vector<int> steps;
  int end_cell = -1;
};

// Throws InputError unless consecutive steps are adjacent and the ends match.
void check_curve(const CombinatorialMap& m, const Curve& c);
bool crosses_every_edge_once(const CombinatorialMap& m, const Curve& c);
Curve reversed(const CombinatorialMap& m, const Curve& c);
// Route of the curve as a new edge between new vertices n+1 (start) and n+2 (end).
Route curve_route(const CombinatorialMap& m, const Curve& c);

// The curve x = s of the strip model, from the bottom of the strip to the top.
Curve seam_curve(const CombinatorialMap& m, const StripScene& s);

struct AntipodalWitness {
  int c1 = -1, c2 = -1;
  VertexId v1 = 0, v2 = 0;
};

std::optional<AntipodalWitness> detect_antipodal(const CombinatorialMap& m);

// Loop around v1 starting and ending in c1, then a shortest dual walk to c2
// that never crosses an edge at v1. Throws InputError if the result does not
// cross every edge exactly once.
Curve build_once_crossing_curve(const CombinatorialMap& m, int c1, int c2, VertexId v1);

struct TopBottomTable {
  int n = 0;
  std::vector<signed char> label;  // (n+1)^2, +1 top, -1 bottom, 0 none
  std::vector<int> position;       // edge id -> index of its crossing along the curve
  bool top(VertexId w, VertexId u) const { return label[w * (n + 1) + u] > 0; }
  int at(VertexId w, VertexId u) const { return label[w * (n + 1) + u]; }
};

TopBottomTable classify_top_bottom(const CombinatorialMap& m, const Curve& c);
std::vector<VertexId> natural_order(const TopBottomTable& t);

enum class Side { Left, Right };

// Route running next to a path of darts (consecutive darts meet at a node) on
// one side, from the path's first node to its last.
Route glue_route(const CombinatorialMap& m, const std::vector<int>& path, Side side);

struct ExtensionStep {
  int i = 0;
  VertexId w = 0;
  int way_o = 1, way_z = 1;
  Edge pivot_o{}, pivot_z{};
  int crossings_o = 0, crossings_z = 0;
};

struct ExtensionResult {
  Drawing drawing;  // original vertices keep their ids
  VertexId o = 0, z = 0;
  std::vector<VertexId> order;
  std::vector<ExtensionStep> steps;
};

ExtensionResult extend_with_OZ(const CombinatorialMap& m, const Curve& c);

// labeling[v] = label of original vertex v (index 0 unused).
std::vector<VertexId> recover_gt_order(const ExtensionResult& ext);

struct GtCertificate {
  AntipodalWitness antipodal;
  Curve curve;
  TopBottomTable table;
  std::vector<VertexId> natural;
  ExtensionResult extension;
  std::vector<VertexId> labeling;
};

struct GtCheck {
  bool generalized_twisted = false;
  std::optional<AntipodalWitness> antipodal;
  std::optional<GtCertificate> certificate;
};

GtCheck is_weakly_generalized_twisted(const Drawing& d, bool certify = false);

Json curve_to_json(const CombinatorialMap& m, const Curve& c);
Json certificate_to_json(const CombinatorialMap& m, const GtCertificate& cert);

}  // namespace twist
