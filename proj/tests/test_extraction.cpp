#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "twist/characterization.hpp"
#include "twist/error.hpp"
#include "twist/extraction.hpp"
#include "twist/generators.hpp"

using namespace twist;

namespace {

std::vector<VertexId> identity_order(int n) {
  std::vector<VertexId> o(n);
  for (int k = 0; k < n; ++k) o[k] = k + 1;
  return o;
}

// Independent plane-ness and simplicity check of a walk.
bool plane_walk(const Drawing& d, const std::vector<VertexId>& v, bool cycle) {
  const auto pairs = oracle::pairs_of(d);
  if (std::set<VertexId>(v.begin(), v.end()).size() != v.size()) return false;
  std::vector<Edge> es;
  for (size_t k = 0; k + 1 < v.size(); ++k) es.push_back(make_edge(v[k], v[k + 1]));
  if (cycle) es.push_back(make_edge(v.back(), v.front()));
  for (size_t a = 0; a < es.size(); ++a)
    for (size_t b = a + 1; b < es.size(); ++b)
      if (pairs.count(oracle::ordered(es[a], es[b]))) return false;
  return true;
}

bool plane_disjoint(const Drawing& d, const std::vector<Edge>& m) {
  const auto pairs = oracle::pairs_of(d);
  std::set<VertexId> seen;
  for (const auto& e : m)
    if (!seen.insert(e.u).second || !seen.insert(e.v).second) return false;
  for (size_t a = 0; a < m.size(); ++a)
    for (size_t b = a + 1; b < m.size(); ++b)
      if (pairs.count(oracle::ordered(m[a], m[b]))) return false;
  return true;
}

Drawing plane_k4() {
  PointScene p;
  p.points = {{mpq_class(0), mpq_class(0)}, {mpq_class(6), mpq_class(0)}, {mpq_class(0), mpq_class(6)},
              {mpq_class(1), mpq_class(1)}};
  return straight_line_drawing(p);
}

}  // namespace

TEST(Zigzag, Examples) {
  EXPECT_EQ(zigzag_path(5), (std::vector<VertexId>{1, 4, 2, 5, 3}));
  EXPECT_EQ(zigzag_path(6), (std::vector<VertexId>{1, 4, 2, 5, 3, 6}));
  EXPECT_EQ(zigzag_path(1), (std::vector<VertexId>{1}));
  EXPECT_EQ(zigzag_path(2), (std::vector<VertexId>{1, 2}));
  EXPECT_THROW(zigzag_path(0), InputError);
}

TEST(HamPath, CanonicalK5) {
  const auto w = plane_ham_path_gt(canonical_gt(5).drawing, identity_order(5));
  EXPECT_EQ(w.vertices, (std::vector<VertexId>{1, 4, 2, 5, 3}));
  EXPECT_EQ(w.length(), 4);
  EXPECT_TRUE(verify_plane_path(canonical_gt(5).drawing, w));
}

TEST(HamPath, TwistedInputs) {
  for (int n = 2; n <= 16; ++n) {
    const Drawing d = canonical_gt(n).drawing;
    const auto w = plane_ham_path_gt(d, identity_order(n));
    EXPECT_EQ(static_cast<int>(w.vertices.size()), n);
    EXPECT_TRUE(plane_walk(d, w.vertices, false)) << n;
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Drawing d = random_gt(12, seed).drawing;
    EXPECT_TRUE(plane_walk(d, plane_ham_path_gt(d, identity_order(12)).vertices, false));
  }
}

TEST(HamPath, ConvexLabelingRejected) {
  try {
    plane_ham_path_gt(convex_drawing(5), identity_order(5));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("not generalized twisted"), std::string::npos);
  }
  EXPECT_THROW(plane_ham_path_gt(canonical_gt(5).drawing, {1, 2, 3, 4, 4}), InputError);
}

TEST(HamCycle, OddTwisted) {
  EXPECT_EQ(plane_ham_cycle_gt_odd(canonical_gt(5).drawing, identity_order(5)).vertices,
            (std::vector<VertexId>{1, 4, 2, 5, 3}));
  for (int n = 3; n <= 15; n += 2) {
    const Drawing d = canonical_gt(n).drawing;
    const auto w = plane_ham_cycle_gt_odd(d, identity_order(n));
    EXPECT_TRUE(w.cycle);
    EXPECT_EQ(w.length(), n);
    EXPECT_TRUE(plane_walk(d, w.vertices, true)) << n;
    EXPECT_TRUE(verify_plane_path(d, w));
  }
  EXPECT_THROW(plane_ham_cycle_gt_odd(canonical_gt(6).drawing, identity_order(6)), InputError);
}

TEST(HamCycle, SearchAgreesWithOracle) {
  for (int n = 3; n <= 9; ++n) {
    const Drawing d = canonical_gt(n).drawing;
    const auto w = search_plane_ham_cycle(d);
    if (n % 2) ASSERT_TRUE(w) << n;
    if (w) {
      EXPECT_EQ(static_cast<int>(w->vertices.size()), n);
      EXPECT_TRUE(plane_walk(d, w->vertices, true));
    }
  }
  ASSERT_TRUE(search_plane_ham_cycle(convex_drawing(7)));
  EXPECT_THROW(search_plane_ham_cycle(canonical_gt(13).drawing), InputError);
}

TEST(Certificates, TamperedRejected) {
  const Drawing d = canonical_gt(7).drawing;
  auto w = plane_ham_path_gt(d, identity_order(7));
  ASSERT_TRUE(verify_plane_path(d, w));
  auto bad = w;
  std::swap(bad.vertices[0], bad.vertices[1]);
  EXPECT_FALSE(verify_plane_path(d, bad));
  bad = w;
  bad.certificate.pop_back();
  EXPECT_FALSE(verify_plane_path(d, bad));
  EXPECT_THROW(certify_plane_path(d, {5, 2, 3, 1, 4, 6, 7}), InputError);

  const auto m = greedy_maximal_plane_matching(d);
  ASSERT_TRUE(verify_matching(d, m));
  auto badm = m;
  badm.edges.push_back(badm.edges.front());
  EXPECT_FALSE(verify_matching(d, badm));
  EXPECT_THROW(certify_matching(d, {{1, 5}, {2, 3}}), InputError);
  EXPECT_THROW(certify_matching(d, {{1, 2}, {2, 3}}), InputError);
}

TEST(Dilworth, ChainAndAntichain) {
  const auto all = cmonotone_mixed(9, [](VertexId, VertexId) { return true; }, 1);
  const auto c = dilworth_split(all.drawing, seam_predicate(all.scene), 3, 3);
  EXPECT_EQ(c.kind, ChainKind::Chain);
  EXPECT_EQ(c.longest_chain, 9);
  EXPECT_GE(c.vertices.size(), 3u);

  const auto none = cmonotone_mixed(9, [](VertexId, VertexId) { return false; }, 1);
  const auto a = dilworth_split(none.drawing, seam_predicate(none.scene), 3, 3);
  EXPECT_EQ(a.kind, ChainKind::Antichain);
  EXPECT_EQ(a.longest_chain, 1);
  EXPECT_EQ(a.vertices.size(), 9u);
}

TEST(Dilworth, MixedSplitsAreValid) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = cmonotone_mixed(9, seed);
    const auto seam = seam_predicate(g.scene);
    const auto r = dilworth_split(g.drawing, seam, 3, 3);
    const auto& v = r.vertices;
    ASSERT_TRUE(std::is_sorted(v.begin(), v.end()));
    for (size_t i = 0; i < v.size(); ++i)
      for (size_t j = i + 1; j < v.size(); ++j) EXPECT_EQ(seam(v[i], v[j]), r.kind == ChainKind::Chain);
    EXPECT_GE(static_cast<int>(v.size()), 3);
  }
}

TEST(Dilworth, Errors) {
  const auto g = cmonotone_mixed(5, 1);
  EXPECT_THROW(dilworth_split(g.drawing, seam_predicate(g.scene), 3, 4), InputError);
  EXPECT_THROW(dilworth_split(g.drawing, seam_predicate(g.scene), 0, 2), InputError);
  const SeamPredicate bad = [](VertexId a, VertexId b) { return !(a == 1 && b == 3); };
  try {
    dilworth_split(g.drawing, bad, 2, 2);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("not transitive"), std::string::npos);
  }
}

TEST(CMonotonePath, SqrtLength) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 4 + static_cast<int>(seed % 13);
    const auto g = cmonotone_mixed(n, seed);
    const auto w = cmonotone_plane_path(g.drawing, seam_predicate(g.scene));
    EXPECT_GE(w.length(), static_cast<int>(std::ceil(std::sqrt(n))) - 1);
    EXPECT_TRUE(plane_walk(g.drawing, w.vertices, false));
  }
}

TEST(Matching, SmallCases) {
  EXPECT_EQ(greedy_maximal_plane_matching(plane_k4()).edges.size(), 2u);
  const Drawing k2 = canonical_gt(2).drawing;
  EXPECT_EQ(greedy_maximal_plane_matching(k2).edges, (std::vector<Edge>{{1, 2}}));
}

TEST(Matching, MaximalUnderEveryOrder) {
  for (const Drawing& d : {canonical_gt(6).drawing, convex_drawing(8), random_gt(11, 3).drawing}) {
    for (EdgeOrder o : {EdgeOrder{EdgeOrderKind::Lex, 0}, EdgeOrder{EdgeOrderKind::Shuffle, 7},
                        EdgeOrder{EdgeOrderKind::MaxCrossingFirst, 0}}) {
      const auto m = greedy_maximal_plane_matching(d, o);
      EXPECT_TRUE(plane_disjoint(d, m.edges));
      EXPECT_TRUE(is_maximal_plane_matching(d, m.edges));
      // no remaining edge can be added
      for (const auto& e : d.edges()) {
        auto more = m.edges;
        if (std::find(more.begin(), more.end(), e) != more.end()) continue;
        more.push_back(e);
        EXPECT_FALSE(plane_disjoint(d, more));
      }
    }
  }
  EXPECT_FALSE(is_maximal_plane_matching(canonical_gt(6).drawing, {{1, 2}}));
}

TEST(Matching, OrdersAreDeterministic) {
  const Drawing d = random_gt(10, 4).drawing;
  const EdgeOrder s{EdgeOrderKind::Shuffle, 99};
  EXPECT_EQ(ordered_edges(d, s), ordered_edges(d, s));
  const auto mc = ordered_edges(d, {EdgeOrderKind::MaxCrossingFirst, 0});
  for (size_t k = 0; k + 1 < mc.size(); ++k) EXPECT_GE(d.crossings(mc[k]).size(), d.crossings(mc[k + 1]).size());
}

TEST(PlaneSubdrawing, Examples) {
  EXPECT_EQ(maximal_plane_subdrawing(plane_k4(), {}, {1, 2, 3, 4}).size(), 6u);
  for (int n = 5; n <= 9; ++n) {
    const Drawing d = convex_drawing(n);
    std::vector<VertexId> all = identity_order(n);
    const auto h = maximal_plane_subdrawing(d, {}, all);
    EXPECT_LE(static_cast<int>(h.size()), 3 * n - 6);
    EXPECT_TRUE(is_biconnected(h, all));
    const auto pairs = oracle::pairs_of(d);
    for (size_t a = 0; a < h.size(); ++a)
      for (size_t b = a + 1; b < h.size(); ++b) EXPECT_FALSE(pairs.count(oracle::ordered(h[a], h[b])));
  }
  EXPECT_THROW(maximal_plane_subdrawing(canonical_gt(5).drawing, {{1, 4}, {2, 3}}, identity_order(5)), InputError);
}

TEST(PlaneSubdrawing, ContainsRequiredAndIsMaximal) {
  const Drawing d = random_gt(9, 6).drawing;
  std::vector<Edge> star;
  for (VertexId x = 2; x <= 9; ++x) star.push_back({1, x});
  const auto h = maximal_plane_subdrawing(d, star, identity_order(9));
  for (const auto& e : star) EXPECT_NE(std::find(h.begin(), h.end(), e), h.end());
  const auto pairs = oracle::pairs_of(d);
  for (const auto& e : d.edges()) {
    if (std::find(h.begin(), h.end(), e) != h.end()) continue;
    bool blocked = false;
    for (const auto& f : h) blocked = blocked || pairs.count(oracle::ordered(e, f));
    EXPECT_TRUE(blocked);
  }
}

TEST(PlaneSubdrawing, AttachInteriorVertex) {
  const auto p = random_points(10, 8);
  const Drawing d = straight_line_drawing(p);
  std::vector<VertexId> rest = identity_order(9);
  const auto h = maximal_plane_subdrawing(d, {}, rest);
  const auto [a, b] = attach_two_plane_edges(d, h, 10);
  EXPECT_TRUE(a.has(10) && b.has(10));
  EXPECT_FALSE(a == b);
  auto all = h;
  all.push_back(a);
  all.push_back(b);
  const auto pairs = oracle::pairs_of(d);
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j) EXPECT_FALSE(pairs.count(oracle::ordered(all[i], all[j])));
  EXPECT_THROW(attach_two_plane_edges(d, h, 1), InputError);
}

TEST(DisjointEdges, MatchingSufficient) {
  const Drawing d = canonical_gt(48).drawing;
  PipelineTrace t;
  const auto w = disjoint_edges(d, &t);
  EXPECT_GE(w.edges.size(), 1u);
  EXPECT_TRUE(plane_disjoint(d, w.edges));
  EXPECT_TRUE(t.matching_sufficient);
}

TEST(DisjointEdges, BundleBranch) {
  const Drawing d = canonical_gt(60).drawing;
  PipelineTrace t;
  const auto w = disjoint_edges(d, &t, {EdgeOrderKind::MaxCrossingFirst, 0});
  EXPECT_FALSE(t.matching_sufficient);
  EXPECT_GE(static_cast<double>(w.edges.size()), std::floor(std::sqrt(60.0 / 48)));
  EXPECT_TRUE(plane_disjoint(d, w.edges));
  EXPECT_TRUE(verify_matching(d, w));
  EXPECT_FALSE(t.checks.empty());
  for (const auto& c : t.checks) EXPECT_TRUE(c.holds) << c.name;
  const Json j = t.to_json();
  EXPECT_EQ(j.at("format"), "sdkn-trace/1");
}

TEST(DisjointEdges, OtherDrawings) {
  for (const Drawing& d : {convex_drawing(20), straight_line_drawing(random_points(25, 2)), random_gt(30, 5).drawing}) {
    const auto w = disjoint_edges(d);
    EXPECT_GE(static_cast<double>(w.edges.size()), std::floor(std::sqrt(d.n() / 48.0)));
    EXPECT_TRUE(plane_disjoint(d, w.edges));
  }
  EXPECT_THROW(disjoint_edges(canonical_gt(1).drawing), InputError);
}

TEST(PlanePath, TwistedUsesCMonotoneBranch) {
  for (int n : {8, 16, 30}) {
    const Drawing d = canonical_gt(n).drawing;
    const auto r = plane_path(d);
    EXPECT_EQ(r.branch, PathBranch::CMonotone) << n;
    EXPECT_GE(r.path.length(), r.guaranteed);
    EXPECT_TRUE(plane_walk(d, r.path.vertices, false));
  }
}

TEST(PlanePath, ConvexUsesTreeBranch) {
  for (int n = 8; n <= 14; n += 3) {
    const Drawing d = convex_drawing(n);
    const auto r = plane_path(d);
    EXPECT_EQ(r.branch, PathBranch::TreeDiameter) << n;
    EXPECT_GE(r.path.length(), r.guaranteed);
    EXPECT_TRUE(plane_walk(d, r.path.vertices, false));
  }
}

TEST(PlanePath, PlaneK4) {
  const auto r = plane_path(plane_k4());
  EXPECT_EQ(r.branch, PathBranch::CMonotone);
  EXPECT_TRUE(plane_walk(plane_k4(), r.path.vertices, false));
  EXPECT_THROW(plane_path(canonical_gt(1).drawing), InputError);
}

TEST(QuasiOrder, TwistedK12) {
  const Drawing d = canonical_gt(12).drawing;
  const auto m = planarize(d);
  const auto w = detect_antipodal(m);
  ASSERT_TRUE(w);
  const auto ext = extend_with_OZ(m, build_once_crossing_curve(m, w->c1, w->c2, w->v1));
  const auto q = quasi_order_from_k2n(ext.drawing, ext.o, ext.z, identity_order(12));
  EXPECT_TRUE(q.generalized_twisted);
  ASSERT_EQ(q.order.size(), 12u);
  std::vector<VertexId> lab(13, 0);
  for (int k = 0; k < 12; ++k) lab[q.order[k]] = k + 1;
  EXPECT_TRUE(oracle::nesting_pattern(oracle::pairs_of(d), lab));
}

TEST(QuasiOrder, Errors) {
  const Drawing d = canonical_gt(6).drawing;
  EXPECT_THROW(quasi_order_from_k2n(d, 1, 1, {2, 3}), InputError);
  EXPECT_THROW(quasi_order_from_k2n(d, 1, 2, {1, 3}), InputError);
}
