// Acceptance driver: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "twist/characterization.hpp"
#include "twist/error.hpp"
#include "twist/extraction.hpp"
#include "twist/generators.hpp"
#include "twist/io.hpp"
#include "twist/map.hpp"

using namespace twist;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void fail(const std::string& why) {
    if (pass) note << "first failure: " << why << "; ";
    pass = false;
  }
};

long binom(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<VertexId> iota_order(int n) {
  std::vector<VertexId> o(n);
  for (int k = 0; k < n; ++k) o[k] = k + 1;
  return o;
}

bool plane_walk(const Drawing& d, const std::vector<VertexId>& v, bool cycle) {
  if (std::set<VertexId>(v.begin(), v.end()).size() != v.size()) return false;
  std::vector<Edge> es;
  for (size_t k = 0; k + 1 < v.size(); ++k) es.push_back(make_edge(v[k], v[k + 1]));
  if (cycle && v.size() > 2) es.push_back(make_edge(v.back(), v.front()));
  for (size_t a = 0; a < es.size(); ++a)
    for (size_t b = a + 1; b < es.size(); ++b)
      if (d.crosses(es[a], es[b])) return false;
  return true;
}

bool plane_disjoint(const Drawing& d, const std::vector<Edge>& m) {
  std::set<VertexId> seen;
  for (const auto& e : m)
    if (!seen.insert(e.u).second || !seen.insert(e.v).second) return false;
  for (size_t a = 0; a < m.size(); ++a)
    for (size_t b = a + 1; b < m.size(); ++b)
      if (d.crosses(m[a], m[b])) return false;
  return true;
}

PointScene plane_k4_points() {
  PointScene p;
  p.points = {{mpq_class(0), mpq_class(0)}, {mpq_class(6), mpq_class(0)}, {mpq_class(0), mpq_class(6)},
              {mpq_class(1), mpq_class(1)}};
  return p;
}

// Crossing {a,c} x {b,d} for some a<b<c<d.
long interleaved_violations(const Drawing& d) {
  const int n = d.n();
  long bad = 0;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c)
        for (int e = c + 1; e <= n; ++e) bad += d.crosses(Edge{a, c}, Edge{b, e});
  return bad;
}

void criterion1(Outcome& o) {
  double worst = 0;
  for (int n = 3; n <= 12; ++n) {
    const auto t = Clock::now();
    const auto g = canonical_gt(n);
    const auto m = planarize(g.drawing);
    worst = std::max(worst, seconds_since(t));
    if (!validate(g.drawing).ok()) o.fail("invalid n=" + std::to_string(n));
    if (g.drawing.crossing_count() != binom(n, 4)) o.fail("crossing count n=" + std::to_string(n));
    if (oracle::pairs_of(g.drawing) != oracle::twisted_rule(n)) o.fail("crossing set n=" + std::to_string(n));
    if (m.euler_characteristic() != 2) o.fail("euler n=" + std::to_string(n));
    if (n == 5 && (m.node_count() != 10 || m.segment_count() != 20 || m.face_count() != 12)) o.fail("K_5 counts");
  }
  if (worst >= 5) o.fail("slow");
  o.note << "n=3..12, worst " << worst << " s";
}

void criterion2(Outcome& o) {
  int checked = 0;
  auto check_path = [&](const Drawing& d, const std::string& tag) {
    const auto w = plane_ham_path_gt(d, iota_order(d.n()));
    if (static_cast<int>(w.vertices.size()) != d.n() || !verify_plane_path(d, w) ||
        !plane_walk(d, w.vertices, false))
      o.fail("path " + tag);
    ++checked;
  };
  for (int n = 3; n <= 50; ++n) check_path(canonical_gt(n).drawing, "canonical n=" + std::to_string(n));
  for (int n : {6, 8, 10})
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
      check_path(random_gt(n, seed).drawing, "random n=" + std::to_string(n) + " seed " + std::to_string(seed));
  if (plane_ham_path_gt(canonical_gt(5).drawing, iota_order(5)).vertices != std::vector<VertexId>{1, 4, 2, 5, 3})
    o.fail("K_5 path");
  for (int n = 3; n <= 15; n += 2) {
    const Drawing d = canonical_gt(n).drawing;
    const auto w = plane_ham_cycle_gt_odd(d, iota_order(n));
    if (!w.cycle || static_cast<int>(w.vertices.size()) != n || !verify_plane_path(d, w) ||
        !plane_walk(d, w.vertices, true))
      o.fail("cycle n=" + std::to_string(n));
    ++checked;
  }
  o.note << checked << " paths and cycles verified";
}

void criterion3(Outcome& o) {
  long drawings = 0, bad = 0;
  for (int n = 3; n <= 12; ++n) {
    bad += interleaved_violations(canonical_gt(n).drawing);
    ++drawings;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      bad += interleaved_violations(random_gt(n, seed).drawing);
      ++drawings;
    }
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      bad += interleaved_violations(cmonotone_mixed(n, [](VertexId, VertexId) { return true; }, seed).drawing);
      ++drawings;
    }
  }
  if (bad) o.fail(std::to_string(bad) + " violations");
  o.note << drawings << " drawings, " << bad << " violations";
}

void criterion4(Outcome& o) {
  int yes = 0;
  double t9 = 0;
  auto expect = [&](const Drawing& d, bool want, const std::string& tag) {
    const auto t = Clock::now();
    const bool got = is_weakly_generalized_twisted(d).generalized_twisted;
    if (d.n() == 9) t9 = std::max(t9, seconds_since(t));
    if (got != want) o.fail(tag);
    yes += got;
  };
  for (int n = 3; n <= 9; ++n) {
    expect(canonical_gt(n).drawing, true, "canonical n=" + std::to_string(n));
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
      expect(random_gt(n, seed).drawing, true, "random n=" + std::to_string(n) + " seed " + std::to_string(seed));
  }
  expect(convex_drawing(4), true, "one-crossing K_4");
  expect(straight_line_drawing(plane_k4_points()), false, "plane K_4");
  for (int n = 5; n <= 8; ++n) expect(convex_drawing(n), false, "convex n=" + std::to_string(n));
  if (t9 >= 30) o.fail("slow at n=9");
  o.note << yes << " accepted, worst n=9 " << t9 << " s";
}

void criterion5(Outcome& o) {
  int instances = 0;
  double worst = 0;
  auto round_trip = [&](const Drawing& d, const std::string& tag) {
    const auto t = Clock::now();
    const auto r = is_weakly_generalized_twisted(d, true);
    worst = std::max(worst, seconds_since(t));
    ++instances;
    if (!r.certificate) return o.fail("no certificate " + tag);
    const auto m = planarize(d);
    const auto why = oracle::check_certificate(drawing_to_json(d), certificate_to_json(m, *r.certificate));
    if (!why.empty()) o.fail(tag + ": " + why);
  };
  for (int n = 4; n <= 8; ++n) round_trip(canonical_gt(n).drawing, "canonical n=" + std::to_string(n));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 4 + static_cast<int>(seed % 5);
    round_trip(random_gt(n, seed).drawing, "random seed " + std::to_string(seed));
  }
  if (worst >= 60) o.fail("slow");
  o.note << instances << " instances, worst " << worst << " s";
}

void criterion6(Outcome& o) {
  std::mt19937_64 rng(2024);
  int flips = 0;
  for (int walk = 0; walk < 100; ++walk) {
    Drawing d = canonical_gt(walk % 2 ? 7 : 6).drawing;
    const int len = std::uniform_int_distribution<int>(1, 20)(rng);
    for (int step = 0; step < len; ++step) {
      const auto m = planarize(d);
      const auto fl = flippable_cells(m);
      if (fl.empty()) break;
      const int f = fl[std::uniform_int_distribution<size_t>(0, fl.size() - 1)(rng)];
      const Drawing next = flip(m, f);
      const auto mn = planarize(next);
      const auto back = find_flippable_cell(mn, cell_edges(m, f));
      if (!back || !(flip(mn, *back) == d)) o.fail("double flip walk " + std::to_string(walk));
      if (!antipodal_vi_cells(mn)) o.fail("antipodal lost in walk " + std::to_string(walk));
      d = next;
      ++flips;
    }
  }
  o.note << "100 walks, " << flips << " flips";
}

void criterion7(Outcome& o) {
  int chains = 0, antichains = 0;
  double worst = 0;
  for (int n : {16, 49, 100}) {
    const int s = static_cast<int>(std::ceil(std::sqrt(n)));
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto t = Clock::now();
      const auto g = cmonotone_mixed(n, seed);
      const auto seam = seam_predicate(g.scene);
      const auto r = dilworth_split(g.drawing, seam, s, s);
      const std::string tag = "n=" + std::to_string(n) + " seed " + std::to_string(seed);
      const bool chain = r.kind == ChainKind::Chain;
      (chain ? chains : antichains)++;
      if (static_cast<int>(r.vertices.size()) < s) o.fail("short split " + tag);
      for (size_t i = 0; i < r.vertices.size(); ++i)
        for (size_t j = i + 1; j < r.vertices.size(); ++j)
          if (seam(r.vertices[i], r.vertices[j]) != chain) o.fail("seam relation " + tag);
      const auto w = cmonotone_plane_path(g.drawing, seam);
      if (w.length() < s - 1 || !plane_walk(g.drawing, w.vertices, false)) o.fail("path " + tag);
      worst = std::max(worst, seconds_since(t));
    }
  }
  o.note << chains << " chains, " << antichains << " antichains, worst " << worst << " s";
}

std::vector<std::pair<std::string, Drawing>> straight_line_corpus() {
  std::vector<std::pair<std::string, Drawing>> out;
  for (int n : {20, 40, 60}) {
    out.emplace_back("convex n=" + std::to_string(n), convex_drawing(n));
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
      out.emplace_back("points n=" + std::to_string(n) + " seed " + std::to_string(seed),
                       straight_line_drawing(random_points(n, seed)));
  }
  return out;
}

void criterion8(Outcome& o, const std::vector<std::pair<std::string, Drawing>>& corpus) {
  int runs = 0, bundle_runs = 0, checks = 0;
  double worst60 = 0;
  for (const auto& [tag, d] : corpus) {
    const auto t = Clock::now();
    PipelineTrace trace;
    const auto w = disjoint_edges(d, &trace);
    if (d.n() == 60) worst60 = std::max(worst60, seconds_since(t));
    ++runs;
    bundle_runs += !trace.matching_sufficient;
    const double need = std::max(1.0, std::floor(std::sqrt(d.n() / 48.0)));
    if (static_cast<double>(w.edges.size()) < need) o.fail("too few edges " + tag);
    if (!plane_disjoint(d, w.edges)) o.fail("not disjoint " + tag);
    for (const auto& c : trace.checks) {
      ++checks;
      if (!c.holds) o.fail(c.name + " " + tag);
    }
  }
  // a fixture that forces the face and bundle stage
  PipelineTrace trace;
  const Drawing gt = canonical_gt(60).drawing;
  const auto w = disjoint_edges(gt, &trace, {EdgeOrderKind::MaxCrossingFirst, 0});
  if (trace.matching_sufficient) o.fail("bundle fixture stayed in the matching stage");
  if (!plane_disjoint(gt, w.edges)) o.fail("bundle fixture not disjoint");
  for (const auto& c : trace.checks) {
    ++checks;
    if (!c.holds) o.fail(c.name + " bundle fixture");
  }
  if (worst60 >= 120) o.fail("slow at n=60");
  o.note << runs << " corpus runs (" << bundle_runs << " past the matching stage) + bundle fixture, " << checks
         << " inequality checks, worst n=60 " << worst60 << " s";
}

void criterion9(Outcome& o, const std::vector<std::pair<std::string, Drawing>>& corpus) {
  int tree = 0, cmono = 0;
  auto run = [&](const std::string& tag, const Drawing& d) {
    const auto r = plane_path(d);
    if (!verify_plane_path(d, r.path) || !plane_walk(d, r.path.vertices, false))
      o.fail("not plane " + tag);
    if (r.branch == PathBranch::TreeDiameter) {
      ++tree;
      if (r.guaranteed != r.path.length()) o.fail("tree guarantee " + tag);
    } else {
      ++cmono;
      const int want = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(r.u_vw.size())))) - 1;
      if (r.guaranteed != want || r.path.length() < want) o.fail("c-monotone guarantee " + tag);
    }
  };
  for (const auto& [tag, d] : corpus) run(tag, d);
  for (int n : {20, 40, 60}) run("canonical n=" + std::to_string(n), canonical_gt(n).drawing);
  if (!tree || !cmono) o.fail("a branch was never taken");
  o.note << tree << " tree-diameter, " << cmono << " c-monotone";
}

void criterion10(Outcome& o) {
  const auto rule = oracle::twisted_rule(5);
  const auto t5 = canonical_signature(5, std::vector<EdgePair>(rule.begin(), rule.end()));
  if (!(canonical_signature(canonical_gt(5).drawing) == t5)) o.fail("canonical K_5 differs from the rule");
  if (canonical_signature(convex_drawing(5)) == t5) o.fail("convex K_5 matches the rule");
  std::mt19937_64 rng(77);
  std::vector<Drawing> fixtures;
  for (int n = 4; n <= 8; ++n) {
    fixtures.push_back(canonical_gt(n).drawing);
    fixtures.push_back(convex_drawing(n));
    fixtures.push_back(random_gt(n, n).drawing);
    fixtures.push_back(straight_line_drawing(random_points(n, n)));
  }
  for (const auto& d : fixtures) {
    const auto s = canonical_signature(d);
    for (int k = 0; k < 100; ++k) {
      std::vector<VertexId> p(d.n() + 1);
      for (int v = 0; v <= d.n(); ++v) p[v] = v;
      std::shuffle(p.begin() + 1, p.end(), rng);
      if (!(canonical_signature(relabel(d, p)) == s)) o.fail("signature changed under relabeling");
    }
    const std::string text = dump_json(drawing_to_json(d));
    if (dump_json(drawing_to_json(drawing_from_json(parse_json(text)))) != text) o.fail("round trip");
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const std::string s = dump_json(strip_to_json(random_gt(7, seed).scene));
    if (dump_json(strip_to_json(strip_from_json(parse_json(s)))) != s) o.fail("strip round trip");
    const std::string p = dump_json(points_to_json(random_points(7, seed)));
    if (dump_json(points_to_json(points_from_json(parse_json(p)))) != p) o.fail("points round trip");
  }
  o.note << fixtures.size() << " fixtures x 100 relabelings";
}

void criterion11(Outcome& o) {
  const auto rule = oracle::twisted_rule(5);
  const auto t5 = canonical_signature(5, std::vector<EdgePair>(rule.begin(), rule.end()));
  std::set<std::vector<std::uint8_t>> classes;
  std::vector<Drawing> reps;
  for (std::uint64_t seed = 1; seed <= 2000; ++seed) {
    const Drawing d = random_gt(6, seed).drawing;
    if (classes.insert(canonical_signature(d).code).second) reps.push_back(d);
  }
  for (const auto& d : reps)
    for (int skip = 1; skip <= 6; ++skip) {
      std::vector<VertexId> s;
      for (int v = 1; v <= 6; ++v)
        if (v != skip) s.push_back(v);
      if (!(canonical_signature(induced_subdrawing(d, s)) == t5)) o.fail("five-vertex subdrawing differs from T_5");
    }
  o.note << "2000 samples, " << classes.size() << " weak isomorphism class(es) of gt K_6";
}

}  // namespace

int main() {
  bool all = true;
  std::vector<std::pair<std::string, Drawing>> corpus;
  const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria{
      {1, criterion1},
      {2, criterion2},
      {3, criterion3},
      {4, criterion4},
      {5, criterion5},
      {6, criterion6},
      {7, criterion7},
      {8, [&](Outcome& o) {
         corpus = straight_line_corpus();
         criterion8(o, corpus);
       }},
      {9, [&](Outcome& o) { criterion9(o, corpus); }},
      {10, criterion10},
      {11, criterion11},
  };
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    const auto t = Clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("criterion %2d: %s  %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.note.str().c_str(), seconds_since(t));
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
