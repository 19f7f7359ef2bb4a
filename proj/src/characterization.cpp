#include "twist/characterization.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

#include "twist/error.hpp"
#include "twist/extraction.hpp"

namespace twist {

namespace {

std::string edge_str(Edge e) { return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}"; }

// Darts along edge {a,b} from a up to and including the dart entering `node`.
std::vector<int> walk_to(const CombinatorialMap& m, VertexId a, VertexId b, int node) {
  std::vector<int> out;
  for (int d : m.edge_walk(a, b)) {
    out.push_back(d);
    if (m.target(d) == node) return out;
  }
  fail_invariant("edge " + edge_str(make_edge(a, b)) + " does not pass through node " + std::to_string(node));
}

// Darts along edge {a,b} toward b starting at `node`.
std::vector<int> walk_from(const CombinatorialMap& m, VertexId a, VertexId b, int node) {
  std::vector<int> out;
  bool on = false;
  for (int d : m.edge_walk(a, b)) {
    if (m.dart(d).node == node) on = true;
    if (on) out.push_back(d);
  }
  if (!on) fail_invariant("edge " + edge_str(make_edge(a, b)) + " does not pass through node " + std::to_string(node));
  return out;
}

// Crossing sequence of edge {w,u} read from w.
std::vector<EdgeId> crossings_from(const Drawing& d, VertexId w, VertexId u) {
  const EdgeId e = d.edge_id(w, u);
  std::vector<EdgeId> out;
  for (const auto& r : d.crossings(e)) out.push_back(r.other);
  if (w > u) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

void check_curve(const CombinatorialMap& m, const Curve& c) {
  if (c.start_cell < 0 || c.start_cell >= m.face_count() || c.end_cell < 0 || c.end_cell >= m.face_count())
    throw InputError("curve cell out of range");
  int cur = c.start_cell;
  for (size_t k = 0; k < c.steps.size(); ++k) {
    const int d = c.steps[k];
    if (d < 0 || d >= m.dart_count()) throw InputError("curve step " + std::to_string(k) + " names an unknown dart");
    if (m.face(d) != cur) throw InputError("curve step " + std::to_string(k) + " does not leave the current cell");
    cur = m.face(CombinatorialMap::twin(d));
  }
  if (cur != c.end_cell) throw InputError("curve does not end in its end cell");
}

bool crosses_every_edge_once(const CombinatorialMap& m, const Curve& c) {
  std::vector<int> hits(m.drawing().edge_count(), 0);
  for (int d : c.steps) ++hits[m.dart(d).edge];
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

Curve reversed(const CombinatorialMap&, const Curve& c) {
  Curve r{c.end_cell, {}, c.start_cell};
  for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) r.steps.push_back(CombinatorialMap::twin(*it));
  return r;
}

Route curve_route(const CombinatorialMap& m, const Curve& c) {
  const int n = m.drawing().n();
  Route r;
  r.from.vertex = n + 1;
  r.from.cell = c.start_cell;
  r.to.vertex = n + 2;
  r.to.cell = c.end_cell;
  r.crossed = c.steps;
  return r;
}

Curve seam_curve(const CombinatorialMap& m, const StripScene& s) {
  const Drawing& d = m.drawing();
  if (d.n() != s.n) throw InputError("scene and map disagree on n");
  Curve c;
  for (const auto& h : strip_seam_hits(s)) c.steps.push_back(m.segment_dart(h.edge, h.segment, true));
  if (c.steps.empty()) {
    // nothing wraps: the seam runs through the single cell left of vertex 1's first edge
    c.start_cell = c.end_cell = m.dart_count() ? m.face(0) : 0;
    return c;
  }
  c.start_cell = m.face(c.steps.front());
  c.end_cell = m.face(CombinatorialMap::twin(c.steps.back()));
  check_curve(m, c);
  return c;
}

std::optional<AntipodalWitness> detect_antipodal(const CombinatorialMap& m) {
  const int n = m.drawing().n();
  if (n < 3) throw InputError("antipodal cells need n >= 3");
  auto pair = antipodal_vi_cells(m);
  if (!pair) return std::nullopt;
  AntipodalWitness w;
  w.c1 = pair->first;
  w.c2 = pair->second;
  const auto& a = m.cell(w.c1).vertices;
  const auto& b = m.cell(w.c2).vertices;
  w.v1 = a.front();
  for (VertexId v : b)
    if (v != w.v1) {
      w.v2 = v;
      break;
    }
  if (w.v2 == 0) w.v2 = b.front();
  if (n >= 4) {
    std::vector<VertexId> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    check_invariant(common.empty(), "antipodal vi-cells share a boundary vertex");
  }
  return w;
}

Curve build_once_crossing_curve(const CombinatorialMap& m, int c1, int c2, VertexId v1) {
  const Drawing& d = m.drawing();
  if (c1 < 0 || c2 < 0 || c1 >= m.face_count() || c2 >= m.face_count()) throw InputError("cell out of range");
  if (v1 < 1 || v1 > d.n()) throw InputError("vertex out of range");
  Curve c{c1, {}, c2};
  const auto around = m.darts_around(m.vertex_node(v1));
  auto corner = std::find_if(around.begin(), around.end(), [&](int x) { return m.face(x) == c1; });
  if (corner == around.end()) throw InputError("vertex " + std::to_string(v1) + " is not on the start cell");
  int q = *corner;
  for (size_t k = 0; k < around.size(); ++k) {
    q = m.next(q);
    c.steps.push_back(CombinatorialMap::twin(q));
  }
  std::vector<int> via(m.face_count(), -2);
  std::deque<int> queue{c1};
  via[c1] = -1;
  while (!queue.empty() && via[c2] == -2) {
    const int f = queue.front();
    queue.pop_front();
    for (int x : m.cell(f).darts) {
      if (d.edge(m.dart(x).edge).has(v1)) continue;
      const int g = m.face(CombinatorialMap::twin(x));
      if (via[g] != -2) continue;
      via[g] = x;
      queue.push_back(g);
    }
  }
  if (via[c2] == -2) throw InputError("curve verification failed: end cell unreachable without crossing the star");
  std::vector<int> path;
  for (int f = c2; via[f] != -1; f = m.face(via[f])) path.push_back(via[f]);
  c.steps.insert(c.steps.end(), path.rbegin(), path.rend());
  check_curve(m, c);
  if (!crosses_every_edge_once(m, c)) throw InputError("curve verification failed: some edge is not crossed exactly once");
  return c;
}

TopBottomTable classify_top_bottom(const CombinatorialMap& m, const Curve& c) {
  const Drawing& d = m.drawing();
  const int n = d.n();
  check_curve(m, c);
  if (!crosses_every_edge_once(m, c)) throw InputError("curve does not cross every edge exactly once");
  TopBottomTable t;
  t.n = n;
  t.label.assign((n + 1) * (n + 1), 0);
  t.position.assign(d.edge_count(), -1);
  for (size_t k = 0; k < c.steps.size(); ++k) {
    const Dart& x = m.dart(c.steps[k]);
    const Edge e = d.edge(x.edge);
    t.position[x.edge] = static_cast<int>(k);
    // the curve passes from left to right of the dart, so (head, tail) is top
    const VertexId head = x.forward ? e.v : e.u;
    const VertexId tail = e.other(head);
    t.label[head * (n + 1) + tail] = 1;
    t.label[tail * (n + 1) + head] = -1;
  }
  const CombinatorialMap ext = insert_edge_along_route(m, curve_route(m, c));
  const Drawing& dx = ext.drawing();
  const VertexId o = n + 1, z = n + 2;
  const EdgeId oz = dx.edge_id(o, z);
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    const Edge ed = d.edge(e);
    const EdgeId ex = dx.edge_id(ed);
    const int node = ext.crossing_node(ex, oz);
    check_invariant(node >= 0, "inserted curve misses an edge");
    int toward_v = -1;
    for (int q : ext.darts_around(node))
      if (ext.dart(q).edge == ex && ext.dart(q).forward) toward_v = q;
    const Dart& nx = ext.dart(ext.next(toward_v));
    check_invariant(nx.edge == oz, "crossing node does not alternate");
    // ccw (u, Z, w, O) at the crossing makes (w, u) top
    const bool uv_top = nx.forward;
    const int expect = uv_top ? 1 : -1;
    if (t.at(ed.u, ed.v) != expect) fail_invariant("top/bottom label disagrees with the inserted curve on " + edge_str(ed));
  }
  for (VertexId w = 1; w <= n; ++w) {
    const auto& ring = d.rotation(w);
    const size_t k = ring.size();
    int changes = 0;
    for (size_t i = 0; i < k; ++i)
      if (t.top(w, ring[i]) != t.top(w, ring[(i + 1) % k])) ++changes;
    if (changes > 2) fail_invariant("top edges at vertex " + std::to_string(w) + " are not consecutive in the rotation");
    for (VertexId a : ring)
      for (VertexId b : ring) {
        if (a == b || !t.top(w, a) || !t.top(w, b)) continue;
        const int pa = t.position[d.edge_id(w, a)];
        if (pa >= t.position[d.edge_id(w, b)] || !d.find_edge(a, b)) continue;
        if (t.at(a, b) < 0 && t.position[d.edge_id(a, b)] >= pa)
          fail_invariant("bottom edge " + edge_str(make_edge(a, b)) + " crosses the curve after the star of " +
                         std::to_string(w));
      }
  }
  return t;
}

std::vector<VertexId> natural_order(const TopBottomTable& t) {
  const int n = t.n;
  std::vector<char> gone(n + 1, 0);
  std::vector<VertexId> order;
  for (int step = 0; step < n; ++step) {
    VertexId pick = 0;
    for (VertexId w = 1; w <= n && !pick; ++w) {
      if (gone[w]) continue;
      bool all = true;
      for (VertexId u = 1; u <= n && all; ++u)
        if (u != w && !gone[u] && !t.top(w, u)) all = false;
      if (all) pick = w;
    }
    if (!pick) throw InputError("no vertex with only top edges after " + std::to_string(step) + " steps");
    gone[pick] = 1;
    order.push_back(pick);
  }
  return order;
}

Route glue_route(const CombinatorialMap& m, const std::vector<int>& path, Side side) {
  if (path.empty()) throw InputError("empty reference path");
  for (size_t i = 0; i + 1 < path.size(); ++i)
    if (m.target(path[i]) != m.dart(path[i + 1]).node) throw InputError("reference path is not connected");
  const MapNode& a = m.node(m.dart(path.front()).node);
  const MapNode& b = m.node(m.target(path.back()));
  if (a.is_crossing() || b.is_crossing()) throw InputError("reference path must start and end at vertices");
  Route r;
  r.from.vertex = a.vertex;
  r.to.vertex = b.vertex;
  const bool left = side == Side::Left;
  r.from.corner = left ? path.front() : m.prev(path.front());
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const int in = CombinatorialMap::twin(path[i]);
    const int out = path[i + 1];
    if (left) {
      for (int q = m.prev(in); q != out; q = m.prev(q)) {
        if (q == in) throw InputError("reference path turns back on itself");
        r.crossed.push_back(q);
      }
    } else {
      for (int q = m.next(in); q != out; q = m.next(q)) {
        if (q == in) throw InputError("reference path turns back on itself");
        r.crossed.push_back(CombinatorialMap::twin(q));
      }
    }
  }
  const int beta = CombinatorialMap::twin(path.back());
  r.to.corner = left ? m.prev(beta) : beta;
  check_route(m, r);
  return r;
}

namespace {

struct Extender {
  const CombinatorialMap& base;
  const Curve& curve;
  int n;
  VertexId O, Z;
  TopBottomTable table;
  std::vector<VertexId> order;
  CombinatorialMap cur;
  ExtensionResult res;

  Extender(const CombinatorialMap& m, const Curve& c) : base(m), curve(c), n(m.drawing().n()), O(n + 1), Z(n + 2) {}

  [[noreturn]] void fail(int i, const std::string& what) const {
    std::string trace;
    for (const auto& s : res.steps)
      trace += " [step " + std::to_string(s.i) + " w=" + std::to_string(s.w) + " ways " + std::to_string(s.way_o) +
               "/" + std::to_string(s.way_z) + "]";
    fail_invariant("extension step " + std::to_string(i) + ": " + what + (trace.empty() ? "" : ";" + trace));
  }

  // Star edges of w sorted by their crossing position along the curve from O.
  std::pair<std::vector<VertexId>, std::vector<VertexId>> split_star(VertexId w) const {
    const Drawing& d = base.drawing();
    std::vector<VertexId> tops, bottoms;
    for (VertexId u = 1; u <= n; ++u) {
      if (u == w) continue;
      (table.top(w, u) ? tops : bottoms).push_back(u);
    }
    auto by_pos = [&](VertexId a, VertexId b) {
      return table.position[d.edge_id(w, a)] < table.position[d.edge_id(w, b)];
    };
    std::sort(tops.begin(), tops.end(), by_pos);
    std::sort(bottoms.begin(), bottoms.end(), by_pos);
    return {tops, bottoms};
  }

  // Which of the edges {O,prev} / {Z,prev} edge {w,u} meets first walking from w: 1 for O, 2 for Z.
  int first_hit(int i, VertexId w, VertexId u, VertexId prev) const {
    const Drawing& d = cur.drawing();
    const EdgeId eo = d.edge_id(O, prev), ez = d.edge_id(Z, prev);
    for (EdgeId x : crossings_from(d, w, u)) {
      if (x == eo) return 1;
      if (x == ez) return 2;
    }
    fail(i, "edge " + edge_str(make_edge(w, u)) + " crosses neither boundary curve of the previous region");
  }

  // Glue from `end` along edge {end,base_to} to its crossing with {w,u}, then along {u,w} to w.
  void add(int i, VertexId end, VertexId base_to, VertexId w, VertexId u, Side side, int& crossings) {
    const Drawing& d = cur.drawing();
    const int node = cur.crossing_node(d.edge_id(end, base_to), d.edge_id(w, u));
    if (node < 0) fail(i, "glue pivot missing on " + edge_str(make_edge(w, u)));
    std::vector<int> path = walk_to(cur, end, base_to, node);
    const auto tail = walk_from(cur, u, w, node);
    path.insert(path.end(), tail.begin(), tail.end());
    try {
      Route r = glue_route(cur, path, side);
      std::vector<EdgeId> owners;
      for (int x : r.crossed) owners.push_back(cur.dart(x).edge);
      std::sort(owners.begin(), owners.end());
      if (std::adjacent_find(owners.begin(), owners.end()) != owners.end())
        fail(i, "glued route meets an edge twice");
      crossings = static_cast<int>(r.crossed.size());
      cur = insert_edge_along_route(cur, r);
    } catch (const InputError& e) {
      fail(i, std::string("surgery failed: ") + e.what());
    }
  }

  void check_step(int i) const {
    const Drawing& d = cur.drawing();
    auto rep = validate(d, {.require_complete = false});
    if (!rep.ok()) fail(i, "drawing not simple: " + rep.summary());
    std::vector<VertexId> expect_o{Z}, expect_z{O};
    for (int k = 0; k < i; ++k) expect_o.push_back(order[k]);
    for (int k = i - 1; k >= 0; --k) expect_z.push_back(order[k]);
    auto cyclic_eq = [](std::vector<VertexId> a, const std::vector<VertexId>& b) {
      if (a.size() != b.size()) return false;
      auto it = std::find(a.begin(), a.end(), b.front());
      if (it == a.end()) return false;
      std::rotate(a.begin(), it, a.end());
      return a == b;
    };
    if (!cyclic_eq(d.rotation(O), expect_o)) fail(i, "rotation at O out of order");
    if (!cyclic_eq(d.rotation(Z), expect_z)) fail(i, "rotation at Z out of order");
    for (int a = 0; a < i; ++a)
      for (int b = 0; b < i; ++b)
        if (d.crosses(make_edge(O, order[a]), make_edge(Z, order[b]))) fail(i, "an O-edge crosses a Z-edge");
    const VertexId w = order[i - 1];
    const EdgeId ow = d.edge_id(O, w), zw = d.edge_id(Z, w);
    for (EdgeId e = 0; e < d.edge_count(); ++e) {
      const Edge ed = d.edge(e);
      if (ed.v > n) continue;
      if (d.crosses(e, ow) && d.crosses(e, zw)) fail(i, "edge " + edge_str(ed) + " crosses both new edges");
    }
    const auto sides = triangle_sides(cur, O, Z, w);
    const int inside = sides.cls[cur.face(cur.out_dart(O, Z))];
    for (int k = 0; k < n; ++k) {
      if (k == i - 1) continue;
      const VertexId x = order[k];
      const auto around = cur.darts_around(cur.vertex_node(x));
      if (around.empty()) continue;
      const bool in = sides.cls[cur.face(around.front())] == inside;
      if (in != (k < i - 1)) fail(i, "vertex " + std::to_string(x) + " on the wrong side of region OZw");
    }
  }

  ExtensionResult run() {
    const Drawing& d = base.drawing();
    check_curve(base, curve);
    if (!crosses_every_edge_once(base, curve)) throw InputError("curve does not cross every edge exactly once");
    res.o = O;
    res.z = Z;
    if (n == 1) {
      res.order = {1};
      res.drawing = complete_drawing(3, {{2, 3}, {1, 3}, {1, 2}}, {{}, {}, {}});
      res.steps.push_back({1, 1, 1, 1, {}, {}, 0, 0});
      return res;
    }
    table = classify_top_bottom(base, curve);
    order = natural_order(table);
    res.order = order;
    cur = insert_edge_along_route(base, curve_route(base, curve));
    for (int i = 1; i <= n; ++i) {
      const VertexId w = order[i - 1];
      const auto [tops, bottoms] = split_star(w);
      ExtensionStep st;
      st.i = i;
      st.w = w;
      if (i == 1) {
        st.way_o = st.way_z = 1;
      } else if (i == n) {
        st.way_o = st.way_z = 2;
      } else {
        st.way_o = first_hit(i, w, tops.front(), order[i - 2]) == 1 ? 1 : 2;
        st.way_z = first_hit(i, w, tops.back(), order[i - 2]) == 2 ? 1 : 2;
        if (st.way_o == 2 && st.way_z == 2) fail(i, "both new edges would need the second construction");
      }
      if ((i < n && tops.empty()) || (i > 1 && bottoms.empty())) fail(i, "star does not match the natural order");
      const VertexId prev = i == 1 ? Z : order[i - 2];
      const VertexId prev_z = i == 1 ? O : order[i - 2];
      // O w_i
      if (st.way_o == 1) {
        st.pivot_o = make_edge(w, tops.front());
        add(i, O, prev, w, tops.front(), Side::Left, st.crossings_o);
      } else {
        st.pivot_o = make_edge(w, bottoms.front());
        add(i, O, Z, w, bottoms.front(), Side::Right, st.crossings_o);
      }
      // Z w_i
      if (st.way_z == 1) {
        st.pivot_z = make_edge(w, tops.back());
        add(i, Z, prev_z, w, tops.back(), Side::Right, st.crossings_z);
      } else {
        st.pivot_z = make_edge(w, bottoms.back());
        add(i, Z, O, w, bottoms.back(), Side::Left, st.crossings_z);
      }
      res.steps.push_back(st);
      check_step(i);
    }
    res.drawing = cur.drawing();
    const Drawing& x = res.drawing;
    auto rep = validate(x);
    if (!rep.ok()) fail(n, "final drawing invalid: " + rep.summary());
    const EdgeId oz = x.edge_id(O, Z);
    if (x.crossings(oz).size() != static_cast<size_t>(d.edge_count())) fail(n, "OZ does not cross every original edge");
    if (!(induced_subdrawing(x, [&] {
            std::vector<VertexId> s(n);
            std::iota(s.begin(), s.end(), 1);
            return s;
          }()) == d))
      fail(n, "original drawing changed");
    return res;
  }
};

}  // namespace

ExtensionResult extend_with_OZ(const CombinatorialMap& m, const Curve& c) { return Extender(m, c).run(); }

std::vector<VertexId> recover_gt_order(const ExtensionResult& ext) {
  const Drawing& x = ext.drawing;
  const int n = x.n() - 2;
  std::vector<VertexId> a(n);
  std::iota(a.begin(), a.end(), 1);
  QuasiOrder q;
  try {
    q = quasi_order_from_k2n(x, ext.o, ext.z, a);
  } catch (const InputError& e) {
    throw InputError(std::string("extension is not a valid O/Z extension: ") + e.what());
  }
  if (!q.generalized_twisted) throw InputError("extension: OZ misses an original edge");
  std::vector<VertexId> labeling(n + 1, 0);
  for (int k = 0; k < n; ++k) labeling[q.order[k]] = k + 1;
  std::vector<VertexId> s(n);
  std::iota(s.begin(), s.end(), 1);
  const Drawing relabeled = relabel(induced_subdrawing(x, s), labeling);
  check_invariant(satisfies_nesting_pattern(relabeled), "recovered labeling violates the nesting pattern");
  return labeling;
}

GtCheck is_weakly_generalized_twisted(const Drawing& d, bool certify) {
  if (d.n() < 3) throw InputError("generalized twisted check needs n >= 3");
  require_valid(d);
  const CombinatorialMap m = planarize(d);
  GtCheck out;
  out.antipodal = detect_antipodal(m);
  out.generalized_twisted = out.antipodal.has_value();
  if (!certify || !out.generalized_twisted) return out;
  GtCertificate cert;
  cert.antipodal = *out.antipodal;
  try {
    cert.curve = build_once_crossing_curve(m, cert.antipodal.c1, cert.antipodal.c2, cert.antipodal.v1);
    cert.table = classify_top_bottom(m, cert.curve);
    cert.natural = natural_order(cert.table);
    cert.extension = extend_with_OZ(m, cert.curve);
    cert.labeling = recover_gt_order(cert.extension);
  } catch (const InputError& e) {
    fail_invariant(std::string("certificate chain broke on an antipodal drawing: ") + e.what());
  }
  out.certificate = std::move(cert);
  return out;
}

Json curve_to_json(const CombinatorialMap& m, const Curve& c) {
  Json j;
  j["start_cell"] = c.start_cell;
  j["end_cell"] = c.end_cell;
  Json steps = Json::array();
  for (int x : c.steps) {
    const Dart& dt = m.dart(x);
    const Edge e = m.drawing().edge(dt.edge);
    steps.push_back(Json{{"edge", Json::array({e.u, e.v})},
                         {"segment", dt.segment},
                         {"forward", dt.forward},
                         {"cell", m.face(CombinatorialMap::twin(x))}});
  }
  j["steps"] = steps;
  return j;
}

Json certificate_to_json(const CombinatorialMap& m, const GtCertificate& cert) {
  const int n = m.drawing().n();
  Json j;
  j["format"] = "sdkn-gt-certificate/1";
  j["n"] = n;
  j["antipodal"] = Json{{"cells", Json::array({cert.antipodal.c1, cert.antipodal.c2})},
                        {"v1", cert.antipodal.v1},
                        {"v2", cert.antipodal.v2}};
  j["curve"] = curve_to_json(m, cert.curve);
  Json tops = Json::array();
  for (VertexId w = 1; w <= n; ++w)
    for (VertexId u = 1; u <= n; ++u)
      if (u != w && cert.table.top(w, u)) tops.push_back(Json::array({w, u}));
  j["top_edges"] = tops;
  j["natural_order"] = cert.natural;
  Json steps = Json::array();
  for (const auto& s : cert.extension.steps)
    steps.push_back(Json{{"i", s.i}, {"w", s.w}, {"way_o", s.way_o}, {"way_z", s.way_z}});
  j["extension"] = Json{{"O", cert.extension.o}, {"Z", cert.extension.z}, {"steps", steps},
                        {"drawing", drawing_to_json(cert.extension.drawing)}};
  j["labeling"] = std::vector<VertexId>(cert.labeling.begin() + 1, cert.labeling.end());
  return j;
}

}  // namespace twist
