#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace twist {

using VertexId = int;  // 1-based
using EdgeId = int;    // index into Drawing::edges()

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  auto operator<=>(const Edge&) const = default;
  bool has(VertexId x) const { return u == x || v == x; }
  VertexId other(VertexId x) const { return x == u ? v : u; }
};

inline Edge make_edge(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
inline bool adjacent(Edge a, Edge b) { return a.has(b.u) || a.has(b.v); }

// sign = +1 iff `other` (oriented low -> high) passes from the right side to
// the left side of the owning edge (oriented low -> high).
struct CrossingRecord {
  EdgeId other = -1;
  int sign = 0;
  bool operator==(const CrossingRecord&) const = default;
};

using EdgePair = std::pair<Edge, Edge>;

// Combinatorial record of a drawing of a simple graph: ccw rotation at every
// vertex and the ordered, signed crossing sequence along every edge.
class Drawing {
 public:
  Drawing() = default;
  // Edges may come in any order and orientation; `crossings[i]` belongs to
  // `edges[i]` and its records index into `edges`. Storage is normalized to
  // sorted low->high edges; sequences of edges given high->low are reversed
  // and their signs adjusted.
  Drawing(int n, std::vector<Edge> edges, std::vector<std::vector<VertexId>> rotations,
          std::vector<std::vector<CrossingRecord>> crossings);

  int n() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;
  EdgeId edge_id(VertexId a, VertexId b) const;
  EdgeId edge_id(Edge e) const { return edge_id(e.u, e.v); }

  // Cyclic ccw neighbor order, normalized to start at the smallest neighbor.
  const std::vector<VertexId>& rotation(VertexId v) const { return rot_[v]; }
  const std::vector<CrossingRecord>& crossings(EdgeId e) const { return cross_[e]; }

  bool crosses(EdgeId e, EdgeId f) const;
  bool crosses(Edge a, Edge b) const;
  // Sign stored on e for its crossing with f, 0 if they do not cross.
  int crossing_sign(EdgeId e, EdgeId f) const;
  // Position of f in e's crossing sequence, -1 if absent.
  int crossing_index(EdgeId e, EdgeId f) const;
  int crossing_count() const;
  bool is_complete() const;
  std::vector<VertexId> neighbors(VertexId v) const { return rot_[v]; }

  bool operator==(const Drawing& o) const {
    return n_ == o.n_ && edges_ == o.edges_ && rot_ == o.rot_ && cross_ == o.cross_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<VertexId>> rot_;  // index 0 unused
  std::vector<std::vector<CrossingRecord>> cross_;
  std::vector<std::vector<std::pair<EdgeId, int>>> lookup_;  // sorted (other, position)
  std::vector<EdgeId> index_;                               // (n+1)^2 table, -1 if absent
};

std::vector<Edge> complete_edges(int n);

// Convenience for K_n: crossings indexed by the lexicographic edge order.
Drawing complete_drawing(int n, std::vector<std::vector<VertexId>> rotations,
                         std::vector<std::vector<CrossingRecord>> crossings);

struct ValidateOptions {
  bool require_complete = true;
};

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  std::string summary() const;
};

ValidationReport validate(const Drawing& d, ValidateOptions opts = {});
void require_valid(const Drawing& d, ValidateOptions opts = {});

// Sorted, each pair ordered (smaller edge first).
std::vector<EdgePair> crossing_pairs(const Drawing& d);

// Restriction to S, relabeled to 1..|S| in increasing original id order.
Drawing induced_subdrawing(const Drawing& d, const std::vector<VertexId>& S);

// perm[v] is the new id of vertex v (perm[0] ignored).
Drawing relabel(const Drawing& d, const std::vector<VertexId>& perm);

// Reflection of the drawing: all rotations and signs reversed.
Drawing mirror(const Drawing& d);

struct WeakIsoSignature {
  int n = 0;
  // One symbol per 4-subset of canonical labels in colex order:
  // 0 no crossing, 1 ab x cd, 2 ac x bd, 3 ad x bc (a<b<c<d).
  std::vector<std::uint8_t> code;
  std::vector<EdgePair> pairs;     // crossing pairs under the canonical labeling
  std::vector<VertexId> labeling;  // labeling[v] = canonical label of v
  bool operator==(const WeakIsoSignature& o) const { return n == o.n && code == o.code; }
  std::string str() const;
};

constexpr int kMaxCanonicalN = 9;

WeakIsoSignature canonical_signature(const Drawing& d);
WeakIsoSignature canonical_signature(int n, const std::vector<EdgePair>& pairs);

}  // namespace twist
