#include "twist/map.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "twist/error.hpp"

namespace twist {

namespace {

long long pair_key(EdgeId a, EdgeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b);
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

int CombinatorialMap::crossing_node(EdgeId a, EdgeId b) const {
  auto it = crossing_nodes_.find(pair_key(a, b));
  return it == crossing_nodes_.end() ? -1 : it->second;
}

int CombinatorialMap::out_dart(VertexId v, VertexId w) const {
  const Edge e = make_edge(v, w);
  const EdgeId id = drawing_->edge_id(e);
  return v == e.u ? segment_dart(id, 0, true) : segment_dart(id, seg_count_[id] - 1, false);
}

std::vector<int> CombinatorialMap::edge_walk(VertexId a, VertexId b) const {
  const Edge e = make_edge(a, b);
  const EdgeId id = drawing_->edge_id(e);
  std::vector<int> out;
  const int k = seg_count_[id];
  for (int i = 0; i < k; ++i) out.push_back(a == e.u ? segment_dart(id, i, true) : segment_dart(id, k - 1 - i, false));
  return out;
}

std::vector<int> CombinatorialMap::darts_around(int node) const {
  std::vector<int> out;
  const int start = nodes_[node].dart;
  if (start < 0) return out;
  int d = start;
  do {
    out.push_back(d);
    d = darts_[d].next;
  } while (d != start);
  return out;
}

std::string CombinatorialMap::dump() const {
  std::ostringstream os;
  os << "nodes " << node_count() << " segments " << segment_count() << " faces " << face_count() << "\n";
  for (int v = 0; v < node_count(); ++v) {
    const auto& nd = nodes_[v];
    os << "node " << v << " ";
    if (nd.is_crossing()) {
      const Edge a = drawing_->edge(nd.e1), b = drawing_->edge(nd.e2);
      os << "x " << a.u << "-" << a.v << "/" << b.u << "-" << b.v;
    } else {
      os << "v " << nd.vertex;
    }
    os << " :";
    for (int d : darts_around(v)) os << " " << d;
    os << "\n";
  }
  for (int d = 0; d < dart_count(); ++d) {
    const auto& x = darts_[d];
    const Edge e = drawing_->edge(x.edge);
    os << "dart " << d << " node " << x.node << " next " << x.next << " prev " << x.prev << " edge " << e.u << "-"
       << e.v << " seg " << x.segment << (x.forward ? " fwd" : " back") << " face " << x.face << "\n";
  }
  for (int f = 0; f < face_count(); ++f) {
    os << "face " << f << " :";
    for (int d : cells_[f].darts) os << " " << d;
    os << " | vertices";
    for (VertexId v : cells_[f].vertices) os << " " << v;
    os << "\n";
  }
  return os.str();
}

CombinatorialMap planarize(const Drawing& d) {
  require_valid(d, {.require_complete = false});
  CombinatorialMap m;
  m.drawing_ = std::make_shared<const Drawing>(d);
  const int n = d.n();
  m.nodes_.resize(n);
  for (int v = 1; v <= n; ++v) m.nodes_[v - 1].vertex = v;
  for (EdgeId e = 0; e < d.edge_count(); ++e)
    for (const auto& r : d.crossings(e))
      if (r.other > e) {
        m.crossing_nodes_[pair_key(e, r.other)] = static_cast<int>(m.nodes_.size());
        MapNode x;
        x.e1 = e;
        x.e2 = r.other;
        m.nodes_.push_back(x);
      }
  const int E = d.edge_count();
  m.seg_base_.resize(E);
  m.seg_count_.resize(E);
  int total = 0;
  for (EdgeId e = 0; e < E; ++e) {
    m.seg_base_[e] = total;
    m.seg_count_[e] = static_cast<int>(d.crossings(e).size()) + 1;
    total += m.seg_count_[e];
  }
  m.darts_.resize(2 * total);
  for (EdgeId e = 0; e < E; ++e) {
    const Edge ed = d.edge(e);
    std::vector<int> chain{m.vertex_node(ed.u)};
    for (const auto& r : d.crossings(e)) chain.push_back(m.crossing_node(e, r.other));
    chain.push_back(m.vertex_node(ed.v));
    for (int k = 0; k + 1 < static_cast<int>(chain.size()); ++k) {
      Dart& f = m.darts_[m.segment_dart(e, k, true)];
      Dart& b = m.darts_[m.segment_dart(e, k, false)];
      f.node = chain[k];
      b.node = chain[k + 1];
      f.edge = b.edge = e;
      f.segment = b.segment = k;
      f.forward = true;
      b.forward = false;
    }
  }
  auto link = [&](int node, const std::vector<int>& ring) {
    const int k = static_cast<int>(ring.size());
    for (int i = 0; i < k; ++i) {
      m.darts_[ring[i]].next = ring[(i + 1) % k];
      m.darts_[ring[(i + 1) % k]].prev = ring[i];
    }
    if (k) m.nodes_[node].dart = ring[0];
  };
  for (int v = 1; v <= n; ++v) {
    std::vector<int> ring;
    for (VertexId w : d.rotation(v)) ring.push_back(m.out_dart(v, w));
    link(m.vertex_node(v), ring);
  }
  for (int x = n; x < m.node_count(); ++x) {
    const EdgeId e = m.nodes_[x].e1, f = m.nodes_[x].e2;
    const int ie = d.crossing_index(e, f), jf = d.crossing_index(f, e);
    const int e_fwd = m.segment_dart(e, ie + 1, true), e_back = m.segment_dart(e, ie, false);
    const int f_fwd = m.segment_dart(f, jf + 1, true), f_back = m.segment_dart(f, jf, false);
    if (d.crossing_sign(e, f) > 0)
      link(x, {e_fwd, f_fwd, e_back, f_back});
    else
      link(x, {e_fwd, f_back, e_back, f_fwd});
  }
  for (int s = 0; s < m.dart_count(); ++s) {
    if (m.darts_[s].face >= 0) continue;
    Cell c;
    const int id = m.face_count();
    int x = s;
    do {
      m.darts_[x].face = id;
      c.darts.push_back(x);
      const auto& nd = m.nodes_[m.darts_[x].node];
      if (!nd.is_crossing()) c.vertices.push_back(nd.vertex);
      x = m.face_next(x);
    } while (x != s);
    std::sort(c.vertices.begin(), c.vertices.end());
    c.vertices.erase(std::unique(c.vertices.begin(), c.vertices.end()), c.vertices.end());
    m.cells_.push_back(std::move(c));
  }
  if (m.dart_count() == 0) {
    Cell c;
    for (int v = 1; v <= n; ++v) c.vertices.push_back(v);
    m.cells_.push_back(c);
  }
  UnionFind uf(m.node_count());
  for (int s = 0; s < m.dart_count(); s += 2) uf.unite(m.darts_[s].node, m.darts_[s + 1].node);
  bool connected = true;
  for (int v = 1; v < m.node_count(); ++v) connected = connected && uf.find(v) == uf.find(0);
  if (!connected || m.euler_characteristic() != 2)
    throw InputError("non-spherical map (V-E+F=" + std::to_string(m.euler_characteristic()) +
                     (connected ? "" : ", disconnected") + ")");
  return m;
}

CellPartition dual_partition(const CombinatorialMap& m, const std::vector<EdgeId>& walls) {
  std::vector<char> wall(m.drawing().edge_count(), 0);
  for (EdgeId e : walls) wall.at(e) = 1;
  UnionFind uf(m.face_count());
  for (int s = 0; s < m.dart_count(); s += 2)
    if (!wall[m.dart(s).edge]) uf.unite(m.face(s), m.face(s + 1));
  CellPartition p;
  p.cls.assign(m.face_count(), -1);
  std::vector<int> id(m.face_count(), -1);
  for (int f = 0; f < m.face_count(); ++f) {
    int r = uf.find(f);
    if (id[r] < 0) id[r] = p.count++;
    p.cls[f] = id[r];
  }
  return p;
}

SideBipartition triangle_sides(const CombinatorialMap& m, VertexId a, VertexId b, VertexId c) {
  const Drawing& d = m.drawing();
  if (a == b || b == c || a == c) throw InputError("degenerate triangle");
  auto ab = d.find_edge(a, b), bc = d.find_edge(b, c), ca = d.find_edge(c, a);
  if (!ab || !bc || !ca) throw InputError("triangle edge missing");
  auto p = dual_partition(m, {*ab, *bc, *ca});
  check_invariant(p.count == 2, "triangle does not split the sphere into two sides");
  SideBipartition s;
  s.triangle = {a, b, c};
  s.cls = std::move(p.cls);
  return s;
}

std::vector<std::vector<std::uint64_t>> triangle_side_vectors(const CombinatorialMap& m) {
  const int n = m.drawing().n();
  int T = 0;
  for (int c = 3; c <= n; ++c) T += (c - 1) * (c - 2) / 2;
  const int words = (T + 63) / 64;
  std::vector<std::vector<std::uint64_t>> bits(m.face_count(), std::vector<std::uint64_t>(words, 0));
  int t = 0;
  for (int c = 3; c <= n; ++c)
    for (int b = 2; b < c; ++b)
      for (int a = 1; a < b; ++a, ++t) {
        auto s = triangle_sides(m, a, b, c);
        for (int f = 0; f < m.face_count(); ++f)
          if (s.cls[f]) bits[f][t / 64] |= std::uint64_t(1) << (t % 64);
      }
  return bits;
}

std::optional<std::pair<int, int>> antipodal_vi_cells(const CombinatorialMap& m) {
  const int n = m.drawing().n();
  if (n < 3) return std::nullopt;
  int T = 0;
  for (int c = 3; c <= n; ++c) T += (c - 1) * (c - 2) / 2;
  auto bits = triangle_side_vectors(m);
  std::map<std::vector<std::uint64_t>, int> first;
  for (int f = 0; f < m.face_count(); ++f)
    if (m.cell(f).vertex_incident()) first.emplace(bits[f], f);
  for (int f = 0; f < m.face_count(); ++f) {
    if (!m.cell(f).vertex_incident()) continue;
    auto comp = bits[f];
    for (int t = 0; t < T; ++t) comp[t / 64] ^= std::uint64_t(1) << (t % 64);
    auto it = first.find(comp);
    if (it != first.end()) return std::make_pair(std::min(f, it->second), std::max(f, it->second));
  }
  return std::nullopt;
}

std::optional<TriangleTripleWitness> interior_disjoint_triangle_triple(const CombinatorialMap& m) {
  const int n = m.drawing().n();
  if (n > kMaxTripleSearchN)
    throw InputError("interior-disjoint triangle search limited to n <= " + std::to_string(kMaxTripleSearchN));
  struct Side {
    std::array<VertexId, 3> tri;
    int tri_index;
    std::vector<std::uint64_t> cells;
  };
  const int words = (m.face_count() + 63) / 64;
  std::vector<Side> sides;
  int t = 0;
  for (int c = 3; c <= n; ++c)
    for (int b = 2; b < c; ++b)
      for (int a = 1; a < b; ++a, ++t) {
        auto s = triangle_sides(m, a, b, c);
        for (int k = 0; k < 2; ++k) {
          Side x{{a, b, c}, t, std::vector<std::uint64_t>(words, 0)};
          for (int f = 0; f < m.face_count(); ++f)
            if (s.cls[f] == k) x.cells[f / 64] |= std::uint64_t(1) << (f % 64);
          sides.push_back(std::move(x));
        }
      }
  auto disjoint = [&](const Side& x, const Side& y) {
    if (x.tri_index == y.tri_index) return false;
    for (int w = 0; w < words; ++w)
      if (x.cells[w] & y.cells[w]) return false;
    return true;
  };
  const int S = static_cast<int>(sides.size());
  for (int i = 0; i < S; ++i)
    for (int j = i + 1; j < S; ++j) {
      if (!disjoint(sides[i], sides[j])) continue;
      for (int k = j + 1; k < S; ++k) {
        if (!disjoint(sides[i], sides[k]) || !disjoint(sides[j], sides[k])) continue;
        TriangleTripleWitness w;
        int idx[3] = {i, j, k};
        for (int q = 0; q < 3; ++q) {
          w.triangles[q] = sides[idx[q]].tri;
          for (int f = 0; f < m.face_count(); ++f)
            if (sides[idx[q]].cells[f / 64] >> (f % 64) & 1) w.sides[q].push_back(f);
        }
        return w;
      }
    }
  return std::nullopt;
}

std::array<EdgeId, 3> cell_edges(const CombinatorialMap& m, int cell) {
  const auto& ds = m.cell(cell).darts;
  if (ds.size() != 3) throw InputError("cell " + std::to_string(cell) + " is not triangular");
  std::array<EdgeId, 3> es{m.dart(ds[0]).edge, m.dart(ds[1]).edge, m.dart(ds[2]).edge};
  std::sort(es.begin(), es.end());
  return es;
}

std::vector<int> flippable_cells(const CombinatorialMap& m) {
  std::vector<int> out;
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& c = m.cell(f);
    if (c.darts.size() != 3 || c.vertex_incident()) continue;
    auto es = cell_edges(m, f);
    if (es[0] == es[1] || es[1] == es[2]) continue;
    out.push_back(f);
  }
  return out;
}

std::optional<int> find_flippable_cell(const CombinatorialMap& m, std::array<EdgeId, 3> edges) {
  std::sort(edges.begin(), edges.end());
  for (int f : flippable_cells(m))
    if (cell_edges(m, f) == edges) return f;
  return std::nullopt;
}

Drawing flip(const CombinatorialMap& m, int cell) {
  if (cell < 0 || cell >= m.face_count()) throw InputError("no cell " + std::to_string(cell));
  auto fl = flippable_cells(m);
  if (!std::binary_search(fl.begin(), fl.end(), cell))
    throw InputError("cell " + std::to_string(cell) + " is not flippable");
  const Drawing& d = m.drawing();
  auto es = cell_edges(m, cell);
  std::vector<std::vector<CrossingRecord>> cr(d.edge_count());
  for (EdgeId e = 0; e < d.edge_count(); ++e) cr[e] = d.crossings(e);
  for (int i = 0; i < 3; ++i) {
    const EdgeId e = es[i], f = es[(i + 1) % 3], g = es[(i + 2) % 3];
    int a = d.crossing_index(e, f), b = d.crossing_index(e, g);
    check_invariant(std::abs(a - b) == 1, "flip cell crossings are not consecutive");
    std::swap(cr[e][a], cr[e][b]);
  }
  std::vector<std::vector<VertexId>> rot(d.n());
  for (int v = 1; v <= d.n(); ++v) rot[v - 1] = d.rotation(v);
  return Drawing(d.n(), d.edges(), std::move(rot), std::move(cr));
}

int route_start_cell(const CombinatorialMap& m, const RouteEnd& e) {
  if (e.vertex >= 1 && e.vertex <= m.drawing().n()) {
    if (e.corner < 0 || e.corner >= m.dart_count() || m.node(m.dart(e.corner).node).vertex != e.vertex)
      throw InputError("route endpoint corner does not leave vertex " + std::to_string(e.vertex));
    return m.face(e.corner);
  }
  if (e.cell < 0 || e.cell >= m.face_count()) throw InputError("route endpoint cell out of range");
  return e.cell;
}

void check_route(const CombinatorialMap& m, const Route& r) {
  const int n = m.drawing().n();
  for (const RouteEnd* e : {&r.from, &r.to})
    if (e->vertex < 1 || e->vertex > n + 2) throw InputError("route endpoint vertex out of range");
  if (r.from.vertex == r.to.vertex) throw InputError("route endpoints coincide");
  int cur = route_start_cell(m, r.from);
  std::vector<int> seen;
  for (int d : r.crossed) {
    if (d < 0 || d >= m.dart_count()) throw InputError("route names unknown dart");
    if (m.face(d) != cur) throw InputError("route not locally consistent at dart " + std::to_string(d));
    seen.push_back(d / 2);
    cur = m.face(CombinatorialMap::twin(d));
  }
  if (cur != route_start_cell(m, r.to)) throw InputError("route does not end in its endpoint cell");
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw InputError("route crosses a segment twice");
  const VertexId lo = std::min(r.from.vertex, r.to.vertex), hi = std::max(r.from.vertex, r.to.vertex);
  if ((hi == n + 2 && lo != n + 1) || lo == n + 2) throw InputError("new vertices must be numbered n+1, n+2");
  if (m.drawing().find_edge(r.from.vertex, r.to.vertex)) throw InputError("edge already present");
}

Drawing insert_edge(const CombinatorialMap& m, const Route& r) {
  check_route(m, r);
  const Drawing& d = m.drawing();
  const int n = d.n();
  const VertexId a = r.from.vertex, b = r.to.vertex;
  const int n2 = std::max({n, a, b});
  const bool aligned = a < b;
  const EdgeId E = d.edge_count();
  std::vector<Edge> edges = d.edges();
  edges.push_back(make_edge(a, b));
  std::vector<std::vector<CrossingRecord>> cr(E + 1);
  // new crossings per crossed edge, keyed by segment index
  std::vector<std::vector<std::pair<int, CrossingRecord>>> added(E);
  std::vector<CrossingRecord> mine;
  for (int x : r.crossed) {
    const Dart& dt = m.dart(x);
    const int on_g = (dt.forward ? -1 : 1) * (aligned ? 1 : -1);
    added[dt.edge].push_back({dt.segment, {E, on_g}});
    mine.push_back({dt.edge, -on_g});
  }
  for (EdgeId g = 0; g < E; ++g) {
    auto& add = added[g];
    std::sort(add.begin(), add.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    const auto& old = d.crossings(g);
    size_t j = 0;
    for (int k = 0; k <= static_cast<int>(old.size()); ++k) {
      while (j < add.size() && add[j].first == k) cr[g].push_back(add[j++].second);
      if (k < static_cast<int>(old.size())) cr[g].push_back(old[k]);
    }
  }
  if (!aligned) std::reverse(mine.begin(), mine.end());
  cr[E] = mine;
  std::vector<std::vector<VertexId>> rot(n2);
  for (int v = 1; v <= n; ++v) rot[v - 1] = d.rotation(v);
  auto attach = [&](const RouteEnd& end, VertexId other) {
    if (end.vertex > n) {
      rot[end.vertex - 1].push_back(other);
      return;
    }
    auto& ring = rot[end.vertex - 1];
    const VertexId w = d.edge(m.dart(end.corner).edge).other(end.vertex);
    auto it = std::find(ring.begin(), ring.end(), w);
    ring.insert(it + 1, other);
  };
  attach(r.from, b);
  attach(r.to, a);
  return Drawing(n2, std::move(edges), std::move(rot), std::move(cr));
}

CombinatorialMap insert_edge_along_route(const CombinatorialMap& m, const Route& r) {
  return planarize(insert_edge(m, r));
}

}  // namespace twist
