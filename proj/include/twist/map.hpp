#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "twist/drawing.hpp"

namespace twist {

struct Dart {
  int node = -1;     // origin
  int next = -1;     // ccw successor around the origin
  int prev = -1;
  EdgeId edge = -1;  // owning edge of the drawing
  int segment = 0;   // segment index along the edge, counted from edge.u
  bool forward = true;  // points from edge.u toward edge.v
  int face = -1;     // cell to the left
};

struct MapNode {
  VertexId vertex = 0;        // 0 for crossing nodes
  EdgeId e1 = -1, e2 = -1;    // owning edges of a crossing node, e1 < e2
  int dart = -1;              // some dart leaving the node
  bool is_crossing() const { return vertex == 0; }
};

struct Cell {
  std::vector<int> darts;          // boundary orbit
  std::vector<VertexId> vertices;  // original vertices on the boundary, sorted, unique
  bool vertex_incident() const { return !vertices.empty(); }
};

// Planarization of a drawing: vertex nodes 0..n-1 (vertex v is node v-1),
// then one degree-4 node per crossing. Darts 2s and 2s+1 are the two
// orientations of segment s; twin(d) = d ^ 1.
class CombinatorialMap {
 public:
  const Drawing& drawing() const { return *drawing_; }
  std::shared_ptr<const Drawing> drawing_ptr() const { return drawing_; }

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int dart_count() const { return static_cast<int>(darts_.size()); }
  int segment_count() const { return dart_count() / 2; }
  int face_count() const { return static_cast<int>(cells_.size()); }

  const Dart& dart(int d) const { return darts_[d]; }
  const MapNode& node(int v) const { return nodes_[v]; }
  const Cell& cell(int f) const { return cells_[f]; }
  static int twin(int d) { return d ^ 1; }
  int next(int d) const { return darts_[d].next; }
  int prev(int d) const { return darts_[d].prev; }
  int face(int d) const { return darts_[d].face; }
  int target(int d) const { return darts_[twin(d)].node; }
  // Next dart along the boundary of face(d).
  int face_next(int d) const { return darts_[twin(d)].prev; }

  int vertex_node(VertexId v) const { return v - 1; }
  int crossing_node(EdgeId a, EdgeId b) const;
  int segments_on(EdgeId e) const { return seg_count_[e]; }
  // Dart of segment k of edge e, pointing toward edge.v if forward.
  int segment_dart(EdgeId e, int k, bool forward) const { return 2 * (seg_base_[e] + k) + (forward ? 0 : 1); }
  // First dart leaving vertex v along edge {v,w}.
  int out_dart(VertexId v, VertexId w) const;
  // Darts along edge {a,b} walking from a to b.
  std::vector<int> edge_walk(VertexId a, VertexId b) const;
  // Darts leaving a node in ccw order, starting at node(x).dart.
  std::vector<int> darts_around(int node) const;

  int euler_characteristic() const { return node_count() - segment_count() + face_count(); }
  std::string dump() const;

 private:
  friend CombinatorialMap planarize(const Drawing& d);
  std::shared_ptr<const Drawing> drawing_;
  std::vector<MapNode> nodes_;
  std::vector<Dart> darts_;
  std::vector<Cell> cells_;
  std::vector<int> seg_base_, seg_count_;
  std::unordered_map<long long, int> crossing_nodes_;
};

// Requires a valid drawing (completeness not required). Throws InputError
// "non-spherical map" if the result is not a connected sphere embedding.
CombinatorialMap planarize(const Drawing& d);

struct CellPartition {
  std::vector<int> cls;  // cell -> class id, classes numbered by first occurrence
  int count = 0;
};

// Cells connected across segments whose owning edge is not a wall.
CellPartition dual_partition(const CombinatorialMap& m, const std::vector<EdgeId>& walls);

struct SideBipartition {
  std::array<VertexId, 3> triangle{};
  std::vector<int> cls;  // cell -> 0/1, cell 0 is in class 0
};

SideBipartition triangle_sides(const CombinatorialMap& m, VertexId a, VertexId b, VertexId c);

// Per cell, one bit per triangle (colex order of vertex triples) giving its side.
std::vector<std::vector<std::uint64_t>> triangle_side_vectors(const CombinatorialMap& m);

// Two vertex-incident cells on different sides of every triangle, smallest ids first.
std::optional<std::pair<int, int>> antipodal_vi_cells(const CombinatorialMap& m);

struct TriangleTripleWitness {
  std::array<std::array<VertexId, 3>, 3> triangles{};
  std::array<std::vector<int>, 3> sides;  // chosen cell sets
};

constexpr int kMaxTripleSearchN = 7;
std::optional<TriangleTripleWitness> interior_disjoint_triangle_triple(const CombinatorialMap& m);

// Triangular cells bounded by three distinct edges and no vertex.
std::vector<int> flippable_cells(const CombinatorialMap& m);
std::array<EdgeId, 3> cell_edges(const CombinatorialMap& m, int cell);
// The flippable cell bounded by exactly these edges, if any.
std::optional<int> find_flippable_cell(const CombinatorialMap& m, std::array<EdgeId, 3> edges);
Drawing flip(const CombinatorialMap& m, int cell);

// A new edge drawn as a walk through the dual. Crossing dart d means the
// walk passes from face(d) (left of d) to face(twin d).
struct RouteEnd {
  VertexId vertex = 0;  // existing vertex, or n+1 / n+2 for a new terminal vertex
  int corner = -1;      // existing vertex: dart leaving it; the edge enters face(corner) right after it ccw
  int cell = -1;        // new vertex: the cell containing it
};

struct Route {
  RouteEnd from, to;
  std::vector<int> crossed;
};

int route_start_cell(const CombinatorialMap& m, const RouteEnd& e);
// Throws InputError when the route is not locally consistent.
void check_route(const CombinatorialMap& m, const Route& r);
Drawing insert_edge(const CombinatorialMap& m, const Route& r);
CombinatorialMap insert_edge_along_route(const CombinatorialMap& m, const Route& r);

}  // namespace twist
