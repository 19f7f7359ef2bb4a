#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twist/drawing.hpp"
#include "twist/generators.hpp"
#include "twist/io.hpp"

namespace twist {

enum class PairReason { Adjacent, NotCrossing, VertexDisjoint };

struct PairProof {
  Edge a, b;
  PairReason reason;
};

struct PlanePathWitness {
  std::vector<VertexId> vertices;
  bool cycle = false;  // last vertex joined back to the first
  std::vector<PairProof> certificate;
  int length() const { return static_cast<int>(vertices.size()) - (cycle ? 0 : 1); }
  std::vector<Edge> edges() const;
};

struct MatchingWitness {
  std::vector<Edge> edges;
  std::vector<PairProof> certificate;
};

// Builds the certificate; throws InputError if the walk is not a plane path.
PlanePathWitness certify_plane_path(const Drawing& d, std::vector<VertexId> vertices, bool cycle = false);
MatchingWitness certify_matching(const Drawing& d, std::vector<Edge> edges);
// Independent re-check of a certificate against the drawing.
bool verify_plane_path(const Drawing& d, const PlanePathWitness& w);
bool verify_matching(const Drawing& d, const MatchingWitness& w);

std::vector<VertexId> zigzag_path(int n);

// order[k] is the vertex carrying label k+1.
Drawing relabel_by_order(const Drawing& d, const std::vector<VertexId>& order);
PlanePathWitness plane_ham_path_gt(const Drawing& d, const std::vector<VertexId>& order);
PlanePathWitness plane_ham_cycle_gt_odd(const Drawing& d, const std::vector<VertexId>& order);
constexpr int kMaxCycleSearchN = 12;
// Exhaustive backtracking search for a plane Hamiltonian cycle, n <= kMaxCycleSearchN.
std::optional<PlanePathWitness> search_plane_ham_cycle(const Drawing& d);

enum class ChainKind { Chain, Antichain };

struct ChainAntichainResult {
  ChainKind kind = ChainKind::Chain;
  std::vector<VertexId> vertices;  // increasing
  int s = 0, t = 0;
  int longest_chain = 0;
  std::string relation = "v_i <= v_j iff i == j or (i < j and v_i v_j crosses the seam)";
};

ChainAntichainResult dilworth_split(const Drawing& d, const SeamPredicate& seam, int s, int t);
PlanePathWitness cmonotone_plane_path(const Drawing& d, const SeamPredicate& seam);

enum class EdgeOrderKind { Lex, Shuffle, MaxCrossingFirst };

struct EdgeOrder {
  EdgeOrderKind kind = EdgeOrderKind::Lex;
  std::uint64_t seed = 0;
  std::string str() const;
};

std::vector<EdgeId> ordered_edges(const Drawing& d, const EdgeOrder& order);
MatchingWitness greedy_maximal_plane_matching(const Drawing& d, const EdgeOrder& order = {});
bool is_maximal_plane_matching(const Drawing& d, const std::vector<Edge>& m);

// Maximal plane edge set on `allowed` containing `required`. Asserts biconnectivity
// (|allowed| >= 3), the planar edge bound and simple face boundaries.
std::vector<Edge> maximal_plane_subdrawing(const Drawing& d, const std::vector<Edge>& required,
                                           const std::vector<VertexId>& allowed, const EdgeOrder& order = {});

// Faces of a plane edge set traced through the drawing's rotations; each face is
// its boundary walk as a vertex sequence.
std::vector<std::vector<VertexId>> plane_faces(const Drawing& d, const std::vector<Edge>& h);
bool is_biconnected(const std::vector<Edge>& h, const std::vector<VertexId>& vertices);

std::pair<Edge, Edge> attach_two_plane_edges(const Drawing& d, const std::vector<Edge>& h, VertexId v);

struct InequalityCheck {
  std::string name;
  double lhs = 0, rhs = 0;
  bool holds = false;
};

struct PipelineTrace {
  int n = 0;
  std::string edge_order;
  std::vector<Edge> matching;
  double bound = 0;  // sqrt(n/48)
  bool matching_sufficient = false;
  std::vector<Edge> h;
  int face = -1;
  std::vector<VertexId> face_boundary;
  int face_unmatched = 0;
  int face_size = 0;
  std::vector<std::pair<VertexId, std::pair<Edge, Edge>>> attachments;
  std::vector<std::pair<Edge, int>> bundles;  // endpoint pair, long-edge count
  Edge chosen{};
  std::vector<VertexId> u_vw;
  std::vector<VertexId> order;
  std::vector<Edge> result;
  std::vector<InequalityCheck> checks;
  Json to_json() const;
};

MatchingWitness disjoint_edges(const Drawing& d, PipelineTrace* trace = nullptr, const EdgeOrder& order = {});

enum class PathBranch { CMonotone, TreeDiameter };

struct PlanePathResult {
  PlanePathWitness path;
  PathBranch branch = PathBranch::TreeDiameter;
  int guaranteed = 0;
  VertexId v = 0, w = 0;
  int threshold = 0;
  std::vector<VertexId> u_vw;
};

PlanePathResult plane_path(const Drawing& d);

struct QuasiOrder {
  std::vector<VertexId> order;
  bool generalized_twisted = false;
};

// Requires the K_{2,|A|} between {b1,b2} and A to be plane.
QuasiOrder quasi_order_from_k2n(const Drawing& d, VertexId b1, VertexId b2, const std::vector<VertexId>& a);

}  // namespace twist
