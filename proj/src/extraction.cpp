#include "twist/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "twist/error.hpp"
#include "twist/map.hpp"

namespace twist {

namespace {

std::string edge_str(Edge e) { return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}"; }

int ceil_sqrt(int n) {
  int s = 0;
  while (s * s < n) ++s;
  return s;
}

std::vector<VertexId> iota_vertices(int n) {
  std::vector<VertexId> v(n);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

Json edges_json(const std::vector<Edge>& es) {
  Json j = Json::array();
  for (const auto& e : es) j.push_back(Json::array({e.u, e.v}));
  return j;
}

void check_order(const Drawing& d, const std::vector<VertexId>& order) {
  std::vector<VertexId> s = order;
  std::sort(s.begin(), s.end());
  if (s != iota_vertices(d.n())) throw InputError("order is not a permutation of the vertices");
}

}  // namespace

std::vector<Edge> PlanePathWitness::edges() const {
  std::vector<Edge> out;
  for (size_t i = 0; i + 1 < vertices.size(); ++i) out.push_back(make_edge(vertices[i], vertices[i + 1]));
  if (cycle && vertices.size() > 2) out.push_back(make_edge(vertices.back(), vertices.front()));
  return out;
}

PlanePathWitness certify_plane_path(const Drawing& d, std::vector<VertexId> vertices, bool cycle) {
  if (vertices.empty()) throw InputError("empty path");
  std::vector<VertexId> s = vertices;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InputError("path repeats a vertex");
  for (VertexId v : s)
    if (v < 1 || v > d.n()) throw InputError("path vertex out of range");
  PlanePathWitness w;
  w.vertices = std::move(vertices);
  w.cycle = cycle;
  const auto es = w.edges();
  for (const auto& e : es)
    if (!d.find_edge(e.u, e.v)) throw InputError("path uses a missing edge " + edge_str(e));
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = i + 1; j < es.size(); ++j) {
      if (adjacent(es[i], es[j])) {
        w.certificate.push_back({es[i], es[j], PairReason::Adjacent});
      } else if (d.crosses(es[i], es[j])) {
        throw InputError("path edges " + edge_str(es[i]) + " and " + edge_str(es[j]) + " cross");
      } else {
        w.certificate.push_back({es[i], es[j], PairReason::NotCrossing});
      }
    }
  return w;
}

MatchingWitness certify_matching(const Drawing& d, std::vector<Edge> edges) {
  MatchingWitness w;
  std::sort(edges.begin(), edges.end());
  w.edges = std::move(edges);
  for (size_t i = 0; i < w.edges.size(); ++i)
    for (size_t j = i + 1; j < w.edges.size(); ++j) {
      const Edge a = w.edges[i], b = w.edges[j];
      if (adjacent(a, b)) throw InputError("matching edges " + edge_str(a) + " and " + edge_str(b) + " share a vertex");
      if (d.crosses(a, b)) throw InputError("matching edges " + edge_str(a) + " and " + edge_str(b) + " cross");
      w.certificate.push_back({a, b, PairReason::NotCrossing});
    }
  return w;
}

bool verify_plane_path(const Drawing& d, const PlanePathWitness& w) {
  if (w.vertices.empty()) return false;
  std::set<VertexId> seen(w.vertices.begin(), w.vertices.end());
  if (seen.size() != w.vertices.size()) return false;
  const auto es = w.edges();
  for (const auto& e : es)
    if (e.u < 1 || e.v > d.n() || !d.find_edge(e.u, e.v)) return false;
  std::set<std::pair<Edge, Edge>> proved;
  for (const auto& p : w.certificate) {
    if (p.reason == PairReason::Adjacent && !adjacent(p.a, p.b)) return false;
    if (p.reason != PairReason::Adjacent && (adjacent(p.a, p.b) || d.crosses(p.a, p.b))) return false;
    proved.insert(std::minmax(p.a, p.b));
  }
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = i + 1; j < es.size(); ++j)
      if (!proved.count(std::minmax(es[i], es[j]))) return false;
  return true;
}

bool verify_matching(const Drawing& d, const MatchingWitness& w) {
  std::set<VertexId> used;
  for (const auto& e : w.edges) {
    if (e.u < 1 || e.v > d.n() || !d.find_edge(e.u, e.v)) return false;
    if (!used.insert(e.u).second || !used.insert(e.v).second) return false;
  }
  std::set<std::pair<Edge, Edge>> proved;
  for (const auto& p : w.certificate) {
    if (adjacent(p.a, p.b) || d.crosses(p.a, p.b)) return false;
    proved.insert(std::minmax(p.a, p.b));
  }
  for (size_t i = 0; i < w.edges.size(); ++i)
    for (size_t j = i + 1; j < w.edges.size(); ++j)
      if (!proved.count(std::minmax(w.edges[i], w.edges[j]))) return false;
  return true;
}

std::vector<VertexId> zigzag_path(int n) {
  if (n < 1) throw InputError("zig-zag path needs n >= 1");
  std::vector<VertexId> p;
  const int h = n / 2;
  if (n % 2 == 0) {
    for (int i = 1; i <= h; ++i) {
      p.push_back(i);
      p.push_back(h + i);
    }
  } else {
    for (int i = 1; i <= h; ++i) {
      p.push_back(i);
      p.push_back(h + 1 + i);
    }
    p.push_back(h + 1);
  }
  return p;
}

Drawing relabel_by_order(const Drawing& d, const std::vector<VertexId>& order) {
  check_order(d, order);
  std::vector<VertexId> perm(d.n() + 1, 0);
  for (size_t k = 0; k < order.size(); ++k) perm[order[k]] = static_cast<VertexId>(k + 1);
  return relabel(d, perm);
}

namespace {

std::vector<VertexId> gt_zigzag(const Drawing& d, const std::vector<VertexId>& order) {
  if (!satisfies_nesting_pattern(relabel_by_order(d, order)))
    throw InputError("labeling is not generalized twisted: a crossing has the interleaved index pattern");
  std::vector<VertexId> p;
  for (VertexId k : zigzag_path(d.n())) p.push_back(order[k - 1]);
  return p;
}

}  // namespace

PlanePathWitness plane_ham_path_gt(const Drawing& d, const std::vector<VertexId>& order) {
  auto p = gt_zigzag(d, order);
  try {
    return certify_plane_path(d, std::move(p));
  } catch (const InputError& e) {
    throw InputError(std::string("labeling is not generalized twisted: ") + e.what());
  }
}

PlanePathWitness plane_ham_cycle_gt_odd(const Drawing& d, const std::vector<VertexId>& order) {
  if (d.n() % 2 == 0) throw InputError("plane Hamiltonian cycle construction needs odd n");
  if (d.n() < 3) throw InputError("cycle needs n >= 3");
  auto p = gt_zigzag(d, order);
  try {
    return certify_plane_path(d, std::move(p), true);
  } catch (const InputError& e) {
    throw InputError(std::string("labeling is not generalized twisted: ") + e.what());
  }
}

std::optional<PlanePathWitness> search_plane_ham_cycle(const Drawing& d) {
  const int n = d.n();
  if (n < 3) throw InputError("cycle needs n >= 3");
  if (n > kMaxCycleSearchN) throw InputError("cycle search supports n <= " + std::to_string(kMaxCycleSearchN));
  if (!d.is_complete()) throw InputError("cycle search needs a complete drawing");
  std::vector<VertexId> path{1};
  std::vector<EdgeId> used;
  std::vector<char> on(n + 1, 0);
  on[1] = 1;
  auto free_of = [&](EdgeId e) {
    return std::none_of(used.begin(), used.end(), [&](EdgeId f) { return d.crosses(e, f); });
  };
  std::function<bool()> grow = [&]() -> bool {
    const VertexId last = path.back();
    if (static_cast<int>(path.size()) == n) return free_of(d.edge_id(last, 1));
    for (VertexId x = 2; x <= n; ++x) {
      if (on[x]) continue;
      // one direction per cycle
      if (static_cast<int>(path.size()) == n - 1 && path.size() > 1 && x < path[1]) continue;
      const EdgeId e = d.edge_id(last, x);
      if (!free_of(e)) continue;
      on[x] = 1;
      path.push_back(x);
      used.push_back(e);
      if (grow()) return true;
      used.pop_back();
      path.pop_back();
      on[x] = 0;
    }
    return false;
  };
  if (!grow()) return std::nullopt;
  return certify_plane_path(d, path, true);
}

ChainAntichainResult dilworth_split(const Drawing& d, const SeamPredicate& seam, int s, int t) {
  const int n = d.n();
  if (s < 1 || t < 1) throw InputError("s and t must be positive");
  if (static_cast<long long>(s - 1) * (t - 1) + 1 > n) throw InputError("need (s-1)(t-1)+1 <= n");
  std::vector<std::vector<char>> rel(n + 1, std::vector<char>(n + 1, 0));
  for (VertexId i = 1; i <= n; ++i)
    for (VertexId j = i + 1; j <= n; ++j) rel[i][j] = seam(i, j) ? 1 : 0;
  for (VertexId i = 1; i <= n; ++i)
    for (VertexId j = i + 1; j <= n; ++j)
      if (rel[i][j])
        for (VertexId k = j + 1; k <= n; ++k)
          if (rel[j][k] && !rel[i][k])
            throw InputError("seam relation not transitive: " + std::to_string(i) + "<" + std::to_string(j) + "<" +
                             std::to_string(k));
  std::vector<int> len(n + 1, 1), from(n + 1, 0);
  for (VertexId j = 1; j <= n; ++j)
    for (VertexId i = 1; i < j; ++i)
      if (rel[i][j] && len[i] + 1 > len[j]) {
        len[j] = len[i] + 1;
        from[j] = i;
      }
  ChainAntichainResult r;
  r.s = s;
  r.t = t;
  VertexId best = 1;
  for (VertexId j = 1; j <= n; ++j)
    if (len[j] > len[best]) best = j;
  r.longest_chain = len[best];
  if (len[best] >= s) {
    r.kind = ChainKind::Chain;
    for (VertexId x = best; x; x = from[x]) r.vertices.push_back(x);
    std::reverse(r.vertices.begin(), r.vertices.end());
    return r;
  }
  std::map<int, std::vector<VertexId>> levels;
  for (VertexId j = 1; j <= n; ++j) levels[len[j]].push_back(j);
  r.kind = ChainKind::Antichain;
  for (auto& [lvl, vs] : levels)
    if (vs.size() > r.vertices.size()) r.vertices = vs;
  check_invariant(static_cast<int>(r.vertices.size()) >= t, "Mirsky level smaller than t");
  return r;
}

PlanePathWitness cmonotone_plane_path(const Drawing& d, const SeamPredicate& seam) {
  const int n = d.n();
  const int s = ceil_sqrt(n);
  const auto split = dilworth_split(d, seam, s, s);
  std::vector<VertexId> p;
  if (split.kind == ChainKind::Chain) {
    for (VertexId k : zigzag_path(static_cast<int>(split.vertices.size()))) p.push_back(split.vertices[k - 1]);
  } else {
    p = split.vertices;
  }
  PlanePathWitness w;
  try {
    w = certify_plane_path(d, std::move(p));
  } catch (const InputError& e) {
    fail_invariant(std::string("plane path from the chain/antichain split is not plane: ") + e.what());
  }
  check_invariant(w.length() >= s - 1, "plane path shorter than ceil(sqrt n) - 1");
  return w;
}

std::string EdgeOrder::str() const {
  switch (kind) {
    case EdgeOrderKind::Lex:
      return "lex";
    case EdgeOrderKind::Shuffle:
      return "shuffle:" + std::to_string(seed);
    case EdgeOrderKind::MaxCrossingFirst:
      return "max-crossing-first";
  }
  return "lex";
}

std::vector<EdgeId> ordered_edges(const Drawing& d, const EdgeOrder& order) {
  std::vector<EdgeId> ids(d.edge_count());
  std::iota(ids.begin(), ids.end(), 0);
  if (order.kind == EdgeOrderKind::Shuffle) {
    std::mt19937_64 rng(order.seed);
    std::shuffle(ids.begin(), ids.end(), rng);
  } else if (order.kind == EdgeOrderKind::MaxCrossingFirst) {
    std::stable_sort(ids.begin(), ids.end(),
                     [&](EdgeId a, EdgeId b) { return d.crossings(a).size() > d.crossings(b).size(); });
  }
  return ids;
}

MatchingWitness greedy_maximal_plane_matching(const Drawing& d, const EdgeOrder& order) {
  std::vector<char> used(d.n() + 1, 0);
  std::vector<EdgeId> m;
  for (EdgeId e : ordered_edges(d, order)) {
    const Edge ed = d.edge(e);
    if (used[ed.u] || used[ed.v]) continue;
    if (std::any_of(m.begin(), m.end(), [&](EdgeId f) { return d.crosses(e, f); })) continue;
    m.push_back(e);
    used[ed.u] = used[ed.v] = 1;
  }
  std::vector<Edge> es;
  for (EdgeId e : m) es.push_back(d.edge(e));
  return certify_matching(d, es);
}

bool is_maximal_plane_matching(const Drawing& d, const std::vector<Edge>& m) {
  std::set<VertexId> used;
  for (const auto& e : m)
    if (!used.insert(e.u).second || !used.insert(e.v).second) return false;
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = i + 1; j < m.size(); ++j)
      if (d.crosses(m[i], m[j])) return false;
  for (const auto& e : d.edges()) {
    if (used.count(e.u) || used.count(e.v)) continue;
    if (std::none_of(m.begin(), m.end(), [&](const Edge& f) { return d.crosses(e, f); })) return false;
  }
  return true;
}

std::vector<std::vector<VertexId>> plane_faces(const Drawing& d, const std::vector<Edge>& h) {
  std::map<VertexId, std::vector<VertexId>> rot;
  std::set<Edge> hs(h.begin(), h.end());
  for (const auto& e : h) {
    rot[e.u];
    rot[e.v];
  }
  for (auto& [v, ring] : rot)
    for (VertexId w : d.rotation(v))
      if (hs.count(make_edge(v, w))) ring.push_back(w);
  std::set<std::pair<VertexId, VertexId>> done;
  std::vector<std::vector<VertexId>> faces;
  for (const auto& e : h)
    for (auto start : {std::make_pair(e.u, e.v), std::make_pair(e.v, e.u)}) {
      if (done.count(start)) continue;
      std::vector<VertexId> face;
      auto cur = start;
      while (done.insert(cur).second) {
        face.push_back(cur.first);
        const auto& ring = rot[cur.second];
        auto it = std::find(ring.begin(), ring.end(), cur.first);
        const VertexId nxt = it == ring.begin() ? ring.back() : *std::prev(it);
        cur = {cur.second, nxt};
      }
      faces.push_back(std::move(face));
    }
  return faces;
}

bool is_biconnected(const std::vector<Edge>& h, const std::vector<VertexId>& vertices) {
  if (vertices.size() < 2) return true;
  std::map<VertexId, std::vector<VertexId>> adj;
  for (VertexId v : vertices) adj[v];
  for (const auto& e : h) {
    if (!adj.count(e.u) || !adj.count(e.v)) return false;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::map<VertexId, int> disc, low;
  int timer = 0;
  bool articulation = false;
  // iterative DFS with low-link
  struct Frame {
    VertexId v, parent;
    size_t next;
  };
  const VertexId root = vertices.front();
  std::vector<Frame> st{{root, 0, 0}};
  disc[root] = low[root] = ++timer;
  int root_children = 0;
  while (!st.empty()) {
    Frame& f = st.back();
    if (f.next < adj[f.v].size()) {
      const VertexId w = adj[f.v][f.next++];
      if (w == f.parent) continue;
      if (disc.count(w)) {
        low[f.v] = std::min(low[f.v], disc[w]);
      } else {
        disc[w] = low[w] = ++timer;
        if (f.v == root) ++root_children;
        st.push_back({w, f.v, 0});
      }
    } else {
      const VertexId v = f.v, p = f.parent;
      st.pop_back();
      if (p) {
        low[p] = std::min(low[p], low[v]);
        if (p != root && low[v] >= disc[p]) articulation = true;
      }
    }
  }
  if (disc.size() != vertices.size()) return false;
  return !articulation && root_children <= 1;
}

std::vector<Edge> maximal_plane_subdrawing(const Drawing& d, const std::vector<Edge>& required,
                                           const std::vector<VertexId>& allowed, const EdgeOrder& order) {
  std::vector<char> in(d.n() + 1, 0);
  for (VertexId v : allowed) {
    if (v < 1 || v > d.n()) throw InputError("vertex out of range");
    in[v] = 1;
  }
  std::vector<Edge> h;
  std::set<Edge> hs;
  for (const auto& e : required) {
    const Edge x = make_edge(e.u, e.v);
    if (!in[x.u] || !in[x.v]) throw InputError("required edge " + edge_str(x) + " leaves the allowed vertices");
    if (!d.find_edge(x.u, x.v)) throw InputError("required edge " + edge_str(x) + " missing");
    for (const auto& y : h)
      if (d.crosses(x, y)) throw InputError("required edges " + edge_str(x) + " and " + edge_str(y) + " cross");
    if (hs.insert(x).second) h.push_back(x);
  }
  for (EdgeId e : ordered_edges(d, order)) {
    const Edge x = d.edge(e);
    if (!in[x.u] || !in[x.v] || hs.count(x)) continue;
    if (std::any_of(h.begin(), h.end(), [&](const Edge& y) { return d.crosses(x, y); })) continue;
    h.push_back(x);
    hs.insert(x);
  }
  std::sort(h.begin(), h.end());
  const int np = static_cast<int>(std::set<VertexId>(allowed.begin(), allowed.end()).size());
  bool complete = true;
  for (VertexId a : allowed)
    for (VertexId b : allowed)
      if (a != b && !d.find_edge(a, b)) complete = false;
  if (complete && np >= 3) {
    check_invariant(static_cast<int>(h.size()) <= 3 * np - 6, "plane subdrawing exceeds 3n-6 edges");
    std::vector<VertexId> vs(allowed.begin(), allowed.end());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    check_invariant(is_biconnected(h, vs), "maximal plane subdrawing is not biconnected");
    for (const auto& f : plane_faces(d, h)) {
      std::set<VertexId> s(f.begin(), f.end());
      check_invariant(s.size() == f.size(), "face boundary of the plane subdrawing is not a simple cycle");
    }
  }
  return h;
}

std::pair<Edge, Edge> attach_two_plane_edges(const Drawing& d, const std::vector<Edge>& h, VertexId v) {
  std::set<VertexId> hv;
  for (const auto& e : h) {
    hv.insert(e.u);
    hv.insert(e.v);
  }
  if (hv.size() < 2) throw InputError("attachment needs a subdrawing with at least two vertices");
  if (hv.count(v)) throw InputError("vertex already in the subdrawing");
  std::vector<Edge> found;
  for (VertexId a : hv) {
    const auto id = d.find_edge(v, a);
    if (!id) continue;
    const Edge x = d.edge(*id);
    if (std::any_of(h.begin(), h.end(), [&](const Edge& y) { return d.crosses(x, y); })) continue;
    found.push_back(x);
    if (found.size() == 2) return {found[0], found[1]};
  }
  fail_invariant("no two plane edges attach vertex " + std::to_string(v));
}

QuasiOrder quasi_order_from_k2n(const Drawing& d, VertexId b1, VertexId b2, const std::vector<VertexId>& a) {
  if (b1 == b2) throw InputError("b1 and b2 must differ");
  std::set<VertexId> as(a.begin(), a.end());
  if (as.size() != a.size() || as.count(b1) || as.count(b2)) throw InputError("A must be distinct from b1, b2");
  std::vector<Edge> k2n;
  for (VertexId x : a) {
    k2n.push_back(make_edge(b1, x));
    k2n.push_back(make_edge(b2, x));
  }
  for (size_t i = 0; i < k2n.size(); ++i)
    for (size_t j = i + 1; j < k2n.size(); ++j)
      if (d.crosses(k2n[i], k2n[j]))
        throw InputError("K_{2,n} not plane: " + edge_str(k2n[i]) + " crosses " + edge_str(k2n[j]));
  QuasiOrder q;
  const auto& ring = d.rotation(b1);
  auto it = std::find(ring.begin(), ring.end(), b2);
  if (it == ring.end()) throw InputError("b1 and b2 are not adjacent");
  const size_t start = static_cast<size_t>(it - ring.begin());
  for (size_t k = 1; k < ring.size(); ++k) {
    const VertexId x = ring[(start + k) % ring.size()];
    if (as.count(x)) q.order.push_back(x);
  }
  q.generalized_twisted = true;
  const Edge b = make_edge(b1, b2);
  for (size_t i = 0; i < a.size() && q.generalized_twisted; ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (!d.crosses(make_edge(a[i], a[j]), b)) {
        q.generalized_twisted = false;
        break;
      }
  return q;
}

namespace {

void record(PipelineTrace* t, std::vector<InequalityCheck>& checks, const std::string& name, double lhs, double rhs,
            bool holds) {
  checks.push_back({name, lhs, rhs, holds});
  if (t) t->checks = checks;
  if (!holds)
    fail_invariant("pipeline inequality failed: " + name + " (" + std::to_string(lhs) + " vs " + std::to_string(rhs) +
                   ")");
}

}  // namespace

MatchingWitness disjoint_edges(const Drawing& d, PipelineTrace* trace, const EdgeOrder& order) {
  const int n = d.n();
  if (n < 2) throw InputError("disjoint edges need n >= 2");
  PipelineTrace local;
  PipelineTrace& t = trace ? *trace : local;
  t = PipelineTrace{};
  t.n = n;
  t.edge_order = order.str();
  t.bound = std::sqrt(n / 48.0);
  const int target = static_cast<int>(std::floor(t.bound + 1e-12));
  std::vector<InequalityCheck> checks;
  const auto m = greedy_maximal_plane_matching(d, order);
  t.matching = m.edges;
  check_invariant(is_maximal_plane_matching(d, m.edges), "greedy matching is not maximal");
  if (static_cast<double>(m.edges.size()) >= t.bound) {
    t.matching_sufficient = true;
    t.result = m.edges;
    record(&t, checks, "|result| >= floor(sqrt(n/48))", static_cast<double>(m.edges.size()), target, true);
    return m;
  }
  std::vector<char> matched(n + 1, 0);
  std::vector<VertexId> mv;
  for (const auto& e : m.edges) {
    matched[e.u] = matched[e.v] = 1;
    mv.push_back(e.u);
    mv.push_back(e.v);
  }
  std::sort(mv.begin(), mv.end());
  t.h = maximal_plane_subdrawing(d, m.edges, mv);
  const int np = static_cast<int>(mv.size());
  if (np >= 3) {
    record(&t, checks, "|H| <= 3n'-6", static_cast<double>(t.h.size()), 3.0 * np - 6, static_cast<int>(t.h.size()) <= 3 * np - 6);
    record(&t, checks, "H biconnected", is_biconnected(t.h, mv) ? 1 : 0, 1, is_biconnected(t.h, mv));
  }
  const auto faces = plane_faces(d, t.h);
  const CombinatorialMap map = planarize(d);
  std::vector<EdgeId> walls;
  for (const auto& e : t.h) walls.push_back(d.edge_id(e));
  const auto part = dual_partition(map, walls);
  check_invariant(part.count == static_cast<int>(faces.size()), "face count of H disagrees with the dual partition");
  std::vector<int> face_of_class(part.count, -1);
  for (size_t f = 0; f < faces.size(); ++f) {
    const VertexId a = faces[f][0], b = faces[f].size() > 1 ? faces[f][1] : faces[f][0];
    const int cls = part.cls[map.face(map.out_dart(a, b))];
    face_of_class[cls] = static_cast<int>(f);
  }
  std::vector<std::vector<VertexId>> inside(faces.size());
  for (VertexId u = 1; u <= n; ++u) {
    if (matched[u]) continue;
    const auto around = map.darts_around(map.vertex_node(u));
    const int f = face_of_class[part.cls[map.face(around.front())]];
    check_invariant(f >= 0, "unmatched vertex in no face of H");
    inside[f].push_back(u);
  }
  int best = -1;
  for (size_t f = 0; f < faces.size(); ++f) {
    if (best < 0 || static_cast<long long>(inside[f].size()) * faces[best].size() >
                        static_cast<long long>(inside[best].size()) * faces[f].size())
      best = static_cast<int>(f);
  }
  t.face = best;
  t.face_boundary = faces[best];
  t.face_unmatched = static_cast<int>(inside[best].size());
  t.face_size = static_cast<int>(faces[best].size());
  const double ratio = std::sqrt(48.0 * n) / 12.0;
  record(&t, checks, "u(f) >= sqrt(48n)/12 |f|", t.face_unmatched, ratio * t.face_size,
         t.face_unmatched >= ratio * t.face_size);
  std::vector<Edge> hp;
  std::set<VertexId> boundary(faces[best].begin(), faces[best].end());
  for (size_t k = 0; k < faces[best].size(); ++k) {
    const Edge e = make_edge(faces[best][k], faces[best][(k + 1) % faces[best].size()]);
    if (std::find(hp.begin(), hp.end(), e) == hp.end()) hp.push_back(e);
  }
  std::map<Edge, std::vector<VertexId>> bundles;
  for (VertexId u : inside[best]) {
    const auto [e1, e2] = attach_two_plane_edges(d, hp, u);
    t.attachments.push_back({u, {e1, e2}});
    const VertexId a = e1.other(u), b = e2.other(u);
    check_invariant(boundary.count(a) && boundary.count(b), "attachment edge ends off the face boundary");
    hp.push_back(e1);
    hp.push_back(e2);
    bundles[make_edge(a, b)].push_back(u);
  }
  for (const auto& [e, us] : bundles) t.bundles.push_back({e, static_cast<int>(us.size())});
  const int fv = static_cast<int>(boundary.size());
  record(&t, checks, "|G'| <= 2|f|-3", static_cast<double>(bundles.size()), 2.0 * fv - 3,
         static_cast<int>(bundles.size()) <= 2 * fv - 3);
  check_invariant(!bundles.empty(), "no long edges in the chosen face");
  auto pick = bundles.begin();
  for (auto it = bundles.begin(); it != bundles.end(); ++it)
    if (it->second.size() > pick->second.size()) pick = it;
  t.chosen = pick->first;
  t.u_vw = pick->second;
  record(&t, checks, "bundle > sqrt(48n)/24", static_cast<double>(t.u_vw.size()), std::sqrt(48.0 * n) / 24.0,
         t.u_vw.size() > std::sqrt(48.0 * n) / 24.0);
  const auto q = quasi_order_from_k2n(d, t.chosen.u, t.chosen.v, t.u_vw);
  check_invariant(q.generalized_twisted, "an edge inside the bundle misses the edge vw");
  t.order = q.order;
  std::vector<VertexId> p;
  for (VertexId k : zigzag_path(static_cast<int>(q.order.size()))) p.push_back(q.order[k - 1]);
  PlanePathWitness path;
  try {
    path = certify_plane_path(d, p);
  } catch (const InputError& e) {
    fail_invariant(std::string("zig-zag path on the bundle is not plane: ") + e.what());
  }
  const auto pe = path.edges();
  std::vector<Edge> result;
  for (size_t k = 0; k < pe.size(); k += 2) result.push_back(pe[k]);
  t.result = result;
  record(&t, checks, "|result| >= floor(sqrt(n/48))", static_cast<double>(result.size()), target,
         static_cast<int>(result.size()) >= target);
  try {
    return certify_matching(d, result);
  } catch (const InputError& e) {
    fail_invariant(std::string("pipeline output not pairwise disjoint: ") + e.what());
  }
}

Json PipelineTrace::to_json() const {
  Json j;
  j["format"] = "sdkn-trace/1";
  j["n"] = n;
  j["edge_order"] = edge_order;
  j["matching"] = edges_json(matching);
  j["bound"] = bound;
  j["matching_sufficient"] = matching_sufficient;
  if (!matching_sufficient) {
    j["h"] = edges_json(h);
    j["face"] = Json{{"id", face}, {"boundary", face_boundary}, {"unmatched", face_unmatched}, {"size", face_size}};
    Json att = Json::array();
    for (const auto& [u, es] : attachments)
      att.push_back(Json{{"vertex", u}, {"edges", edges_json({es.first, es.second})}});
    j["long_edges"] = att;
    Json bj = Json::array();
    for (const auto& [e, c] : bundles) bj.push_back(Json{{"ends", Json::array({e.u, e.v})}, {"size", c}});
    j["bundles"] = bj;
    j["chosen"] = Json::array({chosen.u, chosen.v});
    j["u_vw"] = u_vw;
    j["order"] = order;
  }
  j["result"] = edges_json(result);
  Json cj = Json::array();
  for (const auto& c : checks) cj.push_back(Json{{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  j["checks"] = cj;
  return j;
}

PlanePathResult plane_path(const Drawing& d) {
  const int n = d.n();
  if (n < 2) throw InputError("plane path needs n >= 2");
  PlanePathResult r;
  r.v = 1;
  const double ln = std::log(static_cast<double>(n));
  r.threshold = static_cast<int>(std::ceil(ln * ln - 1e-12));
  std::vector<Edge> star;
  for (VertexId x = 2; x <= n; ++x) star.push_back(make_edge(1, x));
  const auto h = maximal_plane_subdrawing(d, star, iota_vertices(n));
  std::vector<std::set<VertexId>> adj(n + 1);
  for (const auto& e : h) {
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
  }
  VertexId w = 0;
  for (VertexId x = 2; x <= n; ++x)
    if (!w || adj[x].size() > adj[w].size()) w = x;
  std::vector<VertexId> common;
  if (w) {
    for (VertexId x : adj[w])
      if (x != r.v && adj[r.v].count(x)) common.push_back(x);
  }
  if (w && static_cast<int>(adj[w].size()) >= r.threshold && !common.empty()) {
    r.branch = PathBranch::CMonotone;
    r.w = w;
    r.u_vw = common;
    const auto q = quasi_order_from_k2n(d, r.v, w, common);
    std::vector<VertexId> sorted = common;
    std::sort(sorted.begin(), sorted.end());
    // D_U relabeled so that label k is q.order[k-1]
    const Drawing sub = induced_subdrawing(d, sorted);
    std::vector<VertexId> sub_order;
    for (VertexId x : q.order)
      sub_order.push_back(static_cast<VertexId>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin() + 1));
    const Drawing du = relabel_by_order(sub, sub_order);
    const Edge vw = make_edge(r.v, w);
    SeamPredicate seam = [&](VertexId a, VertexId b) {
      return d.crosses(make_edge(q.order[a - 1], q.order[b - 1]), vw);
    };
    PlanePathWitness local;
    try {
      local = cmonotone_plane_path(du, seam);
    } catch (const InputError& e) {
      fail_invariant(std::string("common neighbourhood is not c-monotone: ") + e.what());
    }
    std::vector<VertexId> p;
    for (VertexId x : local.vertices) p.push_back(q.order[x - 1]);
    r.path = certify_plane_path(d, p);
    r.guaranteed = ceil_sqrt(static_cast<int>(common.size())) - 1;
  } else {
    r.branch = PathBranch::TreeDiameter;
    std::vector<VertexId> parent(n + 1, 0);
    auto bfs = [&](VertexId src, bool tree_only, std::vector<VertexId>& par) {
      std::vector<int> dist(n + 1, -1);
      std::queue<VertexId> qu;
      qu.push(src);
      dist[src] = 0;
      VertexId last = src;
      while (!qu.empty()) {
        const VertexId x = qu.front();
        qu.pop();
        last = x;
        for (VertexId y : adj[x]) {
          if (y == r.v || dist[y] >= 0) continue;
          if (tree_only && parent[y] != x && parent[x] != y) continue;
          dist[y] = dist[x] + 1;
          par[y] = x;
          qu.push(y);
        }
      }
      const long reached = std::count_if(dist.begin(), dist.end(), [](int x) { return x >= 0; });
      return std::make_pair(last, static_cast<int>(reached));
    };
    const auto [_, reached] = bfs(2, false, parent);
    check_invariant(reached == n - 1, "H minus v is disconnected");
    std::vector<VertexId> p1(n + 1, 0), p2(n + 1, 0);
    const VertexId a = bfs(2, true, p1).first;
    const VertexId b = bfs(a, true, p2).first;
    std::vector<VertexId> p;
    for (VertexId x = b; x != a; x = p2[x]) p.push_back(x);
    p.push_back(a);
    r.path = certify_plane_path(d, p);
    r.guaranteed = r.path.length();
  }
  check_invariant(r.path.length() >= r.guaranteed, "plane path shorter than its guarantee");
  return r;
}

}  // namespace twist
