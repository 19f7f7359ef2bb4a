#include "twist/drawing.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "twist/error.hpp"

namespace twist {

namespace {

std::string edge_str(Edge e) {
  return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

void normalize_rotation(std::vector<VertexId>& r) {
  if (r.empty()) return;
  auto it = std::min_element(r.begin(), r.end());
  std::rotate(r.begin(), it, r.end());
}

}  // namespace

void fail_invariant(const std::string& what) { throw InvariantViolation(what); }

Drawing::Drawing(int n, std::vector<Edge> edges, std::vector<std::vector<VertexId>> rotations,
                 std::vector<std::vector<CrossingRecord>> crossings)
    : n_(n) {
  if (n < 0) throw InputError("negative vertex count");
  if (static_cast<int>(rotations.size()) != n)
    throw InputError("expected " + std::to_string(n) + " rotations, got " +
                     std::to_string(rotations.size()));
  if (crossings.size() != edges.size()) throw InputError("one crossing sequence per edge required");
  const int m = static_cast<int>(edges.size());
  std::vector<char> flipped(m, 0);
  std::vector<Edge> norm(m);
  for (int i = 0; i < m; ++i) {
    Edge e = edges[i];
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) throw InputError("edge endpoint out of range " + edge_str(e));
    if (e.u == e.v) throw InputError("loop edge " + edge_str(e));
    flipped[i] = e.u > e.v;
    norm[i] = make_edge(e.u, e.v);
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return norm[a] < norm[b]; });
  std::vector<EdgeId> new_id(m);
  for (int k = 0; k < m; ++k) {
    new_id[order[k]] = k;
    if (k > 0 && norm[order[k]] == norm[order[k - 1]])
      throw InputError("duplicate edge " + edge_str(norm[order[k]]));
  }
  edges_.resize(m);
  cross_.resize(m);
  for (int i = 0; i < m; ++i) {
    EdgeId id = new_id[i];
    edges_[id] = norm[i];
    auto seq = std::move(crossings[i]);
    if (flipped[i]) std::reverse(seq.begin(), seq.end());
    for (auto& r : seq) {
      if (r.other < 0 || r.other >= m) throw InputError("crossing references unknown edge on " + edge_str(norm[i]));
      int s = r.sign;
      if (flipped[i]) s = -s;
      if (flipped[r.other]) s = -s;
      r = CrossingRecord{new_id[r.other], s};
    }
    cross_[id] = std::move(seq);
  }
  rot_.assign(n + 1, {});
  for (int v = 1; v <= n; ++v) {
    rot_[v] = std::move(rotations[v - 1]);
    normalize_rotation(rot_[v]);
  }
  lookup_.resize(m);
  for (int e = 0; e < m; ++e) {
    auto& l = lookup_[e];
    for (int p = 0; p < static_cast<int>(cross_[e].size()); ++p) l.emplace_back(cross_[e][p].other, p);
    std::sort(l.begin(), l.end());
  }
  index_.assign(static_cast<size_t>(n + 1) * (n + 1), -1);
  for (int e = 0; e < m; ++e) {
    index_[edges_[e].u * (n + 1) + edges_[e].v] = e;
    index_[edges_[e].v * (n + 1) + edges_[e].u] = e;
  }
}

std::optional<EdgeId> Drawing::find_edge(VertexId a, VertexId b) const {
  if (a < 1 || b < 1 || a > n_ || b > n_) return std::nullopt;
  EdgeId e = index_[a * (n_ + 1) + b];
  if (e < 0) return std::nullopt;
  return e;
}

EdgeId Drawing::edge_id(VertexId a, VertexId b) const {
  auto e = find_edge(a, b);
  if (!e) throw InputError("no edge " + edge_str(make_edge(a, b)));
  return *e;
}

int Drawing::crossing_index(EdgeId e, EdgeId f) const {
  const auto& l = lookup_[e];
  auto it = std::lower_bound(l.begin(), l.end(), std::make_pair(f, -1));
  if (it == l.end() || it->first != f) return -1;
  return it->second;
}

bool Drawing::crosses(EdgeId e, EdgeId f) const { return crossing_index(e, f) >= 0; }

bool Drawing::crosses(Edge a, Edge b) const {
  auto e = find_edge(a.u, a.v);
  auto f = find_edge(b.u, b.v);
  return e && f && crosses(*e, *f);
}

int Drawing::crossing_sign(EdgeId e, EdgeId f) const {
  int p = crossing_index(e, f);
  return p < 0 ? 0 : cross_[e][p].sign;
}

int Drawing::crossing_count() const {
  size_t total = 0;
  for (const auto& s : cross_) total += s.size();
  return static_cast<int>(total / 2);
}

bool Drawing::is_complete() const {
  return edge_count() == n_ * (n_ - 1) / 2;
}

std::vector<Edge> complete_edges(int n) {
  std::vector<Edge> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) out.push_back({i, j});
  return out;
}

Drawing complete_drawing(int n, std::vector<std::vector<VertexId>> rotations,
                         std::vector<std::vector<CrossingRecord>> crossings) {
  return Drawing(n, complete_edges(n), std::move(rotations), std::move(crossings));
}

std::string ValidationReport::summary() const {
  std::string s;
  for (size_t i = 0; i < problems.size(); ++i) {
    if (i) s += "; ";
    s += problems[i];
  }
  return s;
}

ValidationReport validate(const Drawing& d, ValidateOptions opts) {
  ValidationReport rep;
  auto& P = rep.problems;
  const int n = d.n();
  if (opts.require_complete && !d.is_complete()) P.push_back("incomplete edge set");
  std::vector<std::vector<VertexId>> nbrs(n + 1);
  for (const auto& e : d.edges()) {
    nbrs[e.u].push_back(e.v);
    nbrs[e.v].push_back(e.u);
  }
  for (int v = 1; v <= n; ++v) {
    auto r = d.rotation(v);
    std::sort(r.begin(), r.end());
    std::sort(nbrs[v].begin(), nbrs[v].end());
    if (r != nbrs[v]) P.push_back("malformed rotation at vertex " + std::to_string(v));
  }
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    const Edge a = d.edge(e);
    std::vector<EdgeId> seen;
    for (const auto& r : d.crossings(e)) {
      const Edge b = d.edge(r.other);
      if (r.other == e) {
        P.push_back("edge " + edge_str(a) + " crosses itself");
        continue;
      }
      if (adjacent(a, b) && e < r.other) P.push_back("adjacent edges cross: " + edge_str(a) + " and " + edge_str(b));
      if (r.sign != 1 && r.sign != -1) P.push_back("invalid sign on " + edge_str(a) + " x " + edge_str(b));
      seen.push_back(r.other);
      int back = d.crossing_sign(r.other, e);
      if (back == 0) {
        P.push_back("asymmetric crossing: " + edge_str(a) + " lists " + edge_str(b));
      } else if (e < r.other && back != -r.sign && (r.sign == 1 || r.sign == -1)) {
        P.push_back("sign antisymmetry violated: " + edge_str(a) + " x " + edge_str(b));
      }
    }
    std::sort(seen.begin(), seen.end());
    for (size_t i = 1; i < seen.size(); ++i)
      if (seen[i] == seen[i - 1])
        P.push_back("double crossing: " + edge_str(a) + " and " + edge_str(d.edge(seen[i])));
  }
  return rep;
}

void require_valid(const Drawing& d, ValidateOptions opts) {
  auto rep = validate(d, opts);
  if (!rep.ok()) throw InputError("invalid drawing: " + rep.summary());
}

std::vector<EdgePair> crossing_pairs(const Drawing& d) {
  std::vector<EdgePair> out;
  for (EdgeId e = 0; e < d.edge_count(); ++e)
    for (const auto& r : d.crossings(e))
      if (r.other > e) out.emplace_back(d.edge(e), d.edge(r.other));
  std::sort(out.begin(), out.end());
  return out;
}

Drawing induced_subdrawing(const Drawing& d, const std::vector<VertexId>& S) {
  if (S.empty()) throw InputError("empty vertex subset");
  std::vector<VertexId> s = S;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InputError("repeated vertex in subset");
  if (s.front() < 1 || s.back() > d.n()) throw InputError("vertex subset out of range");
  std::vector<VertexId> nid(d.n() + 1, 0);
  for (size_t i = 0; i < s.size(); ++i) nid[s[i]] = static_cast<VertexId>(i + 1);
  std::vector<EdgeId> eid(d.edge_count(), -1);
  std::vector<Edge> edges;
  std::vector<EdgeId> kept;
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    Edge x = d.edge(e);
    if (nid[x.u] && nid[x.v]) {
      eid[e] = static_cast<EdgeId>(edges.size());
      edges.push_back({nid[x.u], nid[x.v]});
      kept.push_back(e);
    }
  }
  std::vector<std::vector<CrossingRecord>> cr(edges.size());
  for (size_t i = 0; i < kept.size(); ++i)
    for (const auto& r : d.crossings(kept[i]))
      if (eid[r.other] >= 0) cr[i].push_back({eid[r.other], r.sign});
  std::vector<std::vector<VertexId>> rot(s.size());
  for (size_t i = 0; i < s.size(); ++i)
    for (VertexId w : d.rotation(s[i]))
      if (nid[w]) rot[i].push_back(nid[w]);
  return Drawing(static_cast<int>(s.size()), std::move(edges), std::move(rot), std::move(cr));
}

Drawing relabel(const Drawing& d, const std::vector<VertexId>& perm) {
  const int n = d.n();
  if (static_cast<int>(perm.size()) != n + 1) throw InputError("permutation size mismatch");
  std::vector<char> hit(n + 1, 0);
  for (int v = 1; v <= n; ++v) {
    if (perm[v] < 1 || perm[v] > n || hit[perm[v]]) throw InputError("not a permutation");
    hit[perm[v]] = 1;
  }
  std::vector<Edge> edges;
  std::vector<std::vector<CrossingRecord>> cr;
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    edges.push_back({perm[d.edge(e).u], perm[d.edge(e).v]});
    cr.push_back(d.crossings(e));
  }
  std::vector<std::vector<VertexId>> rot(n);
  for (int v = 1; v <= n; ++v)
    for (VertexId w : d.rotation(v)) rot[perm[v] - 1].push_back(perm[w]);
  return Drawing(n, std::move(edges), std::move(rot), std::move(cr));
}

Drawing mirror(const Drawing& d) {
  std::vector<std::vector<VertexId>> rot(d.n());
  for (int v = 1; v <= d.n(); ++v) {
    rot[v - 1] = d.rotation(v);
    std::reverse(rot[v - 1].begin(), rot[v - 1].end());
  }
  std::vector<std::vector<CrossingRecord>> cr(d.edge_count());
  for (EdgeId e = 0; e < d.edge_count(); ++e)
    for (auto r : d.crossings(e)) cr[e].push_back({r.other, -r.sign});
  return Drawing(d.n(), d.edges(), std::move(rot), std::move(cr));
}

// ---- weak isomorphism ----

namespace {

class Canonicalizer {
 public:
  Canonicalizer(int n, const std::vector<EdgePair>& pairs) : n_(n), x_(static_cast<size_t>(n + 1) * (n + 1) * (n + 1) * (n + 1), 0) {
    inv_.assign(n + 1, 0);
    for (const auto& [a, b] : pairs) {
      set(a, b);
      set(b, a);
      for (VertexId v : {a.u, a.v, b.u, b.v}) ++inv_[v];
    }
  }

  WeakIsoSignature run() {
    label_.assign(n_ + 1, 0);
    used_.assign(n_ + 1, 0);
    cur_.clear();
    dfs(1);
    WeakIsoSignature sig;
    sig.n = n_;
    sig.code = best_;
    sig.labeling.assign(n_ + 1, 0);
    for (int k = 1; k <= n_; ++k) sig.labeling[best_label_[k]] = k;
    for (int a = 1; a <= n_; ++a)
      for (int b = a + 1; b <= n_; ++b)
        for (int c = a + 1; c <= n_; ++c)
          for (int e = c + 1; e <= n_; ++e) {
            if (c == b || e == b) continue;
            Edge p{a, b}, q{c, e};
            if (!(p < q)) continue;
            if (crossing(best_label_[a], best_label_[b], best_label_[c], best_label_[e]))
              sig.pairs.emplace_back(p, q);
          }
    std::sort(sig.pairs.begin(), sig.pairs.end());
    return sig;
  }

 private:
  size_t key(int a, int b, int c, int d) const {
    return ((static_cast<size_t>(a) * (n_ + 1) + b) * (n_ + 1) + c) * (n_ + 1) + d;
  }
  void set(Edge a, Edge b) {
    x_[key(a.u, a.v, b.u, b.v)] = 1;
    x_[key(a.v, a.u, b.u, b.v)] = 1;
    x_[key(a.u, a.v, b.v, b.u)] = 1;
    x_[key(a.v, a.u, b.v, b.u)] = 1;
  }
  bool crossing(int a, int b, int c, int d) const { return x_[key(a, b, c, d)] != 0; }

  std::uint8_t symbol(int a, int b, int c, int d) const {
    const int A = label_[a], B = label_[b], C = label_[c], D = label_[d];
    if (crossing(A, B, C, D)) return 1;
    if (crossing(A, C, B, D)) return 2;
    if (crossing(A, D, B, C)) return 3;
    return 0;
  }

  // label_[k] = original vertex receiving canonical label k.
  void dfs(int k) {
    if (k > n_) {
      if (!have_best_ || cur_ < best_) {
        best_ = cur_;
        best_label_ = label_;
        have_best_ = true;
      }
      return;
    }
    for (int v = 1; v <= n_; ++v) {
      if (used_[v]) continue;
      if (k > 1 && inv_[v] < inv_[label_[k - 1]]) continue;
      label_[k] = v;
      used_[v] = 1;
      const size_t start = cur_.size();
      for (int a = 1; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b)
          for (int c = b + 1; c < k; ++c) cur_.push_back(symbol(a, b, c, k));
      bool prune = have_best_ && std::lexicographical_compare(best_.begin(), best_.begin() + cur_.size(),
                                                              cur_.begin(), cur_.end());
      if (!prune) dfs(k + 1);
      cur_.resize(start);
      used_[v] = 0;
    }
  }

  int n_;
  std::vector<std::uint8_t> x_;
  std::vector<int> inv_;
  std::vector<int> label_;
  std::vector<char> used_;
  std::vector<std::uint8_t> cur_, best_;
  std::vector<int> best_label_;
  bool have_best_ = false;
};

}  // namespace

WeakIsoSignature canonical_signature(int n, const std::vector<EdgePair>& pairs) {
  if (n > kMaxCanonicalN)
    throw InputError("n=" + std::to_string(n) + " too large for exact canonicalization (max " +
                     std::to_string(kMaxCanonicalN) + ")");
  if (n < 1) throw InputError("empty drawing");
  return Canonicalizer(n, pairs).run();
}

WeakIsoSignature canonical_signature(const Drawing& d) {
  return canonical_signature(d.n(), crossing_pairs(d));
}

std::string WeakIsoSignature::str() const {
  std::string s = std::to_string(n) + ":";
  for (auto c : code) s += static_cast<char>('0' + c);
  return s;
}

}  // namespace twist
