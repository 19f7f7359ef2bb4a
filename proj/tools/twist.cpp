#include <CLI11.hpp>
#include <glob.h>

#include <algorithm>
#include <cstdlib>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "twist/characterization.hpp"
#include "twist/drawing.hpp"
#include "twist/error.hpp"
#include "twist/extraction.hpp"
#include "twist/generators.hpp"
#include "twist/io.hpp"
#include "twist/map.hpp"
#include "twist/svg.hpp"

using namespace twist;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kInvariant = 3 };

struct Input {
  Json json;
  std::string format;
  Drawing drawing;
  std::optional<StripScene> strip;
  std::optional<PointScene> points;
};

Input load(const std::string& text, const std::string& source) {
  Input in;
  in.json = parse_json(text, source);
  if (!in.json.is_object() || !in.json.contains("format") || !in.json["format"].is_string())
    throw InputError(source + ": missing \"format\"");
  in.format = in.json["format"].get<std::string>();
  if (in.format == "sdkn-strip/1") {
    in.strip = strip_from_json(in.json);
    in.drawing = strip_to_drawing(*in.strip);
  } else if (in.format == "sdkn-points/1") {
    in.points = points_from_json(in.json);
    in.drawing = straight_line_drawing(*in.points);
  } else if (in.format == "sdkn-gt-certificate/1") {
    if (!in.json.contains("extension") || !in.json["extension"].contains("drawing"))
      throw InputError(source + ": certificate without extension drawing");
    in.drawing = drawing_from_json(in.json["extension"]["drawing"]);
  } else {
    in.drawing = drawing_from_any(in.json);
  }
  return in;
}

Json edges_json(const std::vector<Edge>& es) {
  Json j = Json::array();
  for (const auto& e : es) j.push_back(Json::array({e.u, e.v}));
  return j;
}

Json path_json(const PlanePathWitness& w) {
  Json cert = Json::array();
  for (const auto& p : w.certificate)
    cert.push_back(Json{{"a", Json::array({p.a.u, p.a.v})},
                        {"b", Json::array({p.b.u, p.b.v})},
                        {"reason", p.reason == PairReason::Adjacent ? "adjacent" : "no-crossing"}});
  Json j;
  j["format"] = "sdkn-path/1";
  j["vertices"] = w.vertices;
  j["cycle"] = w.cycle;
  j["length"] = w.length();
  j["certificate"] = cert;
  return j;
}

// Identity labeling when it works, otherwise the one recovered from the certificate chain.
std::vector<VertexId> gt_order(const Drawing& d, bool cycle) {
  std::vector<VertexId> id(d.n());
  for (int i = 0; i < d.n(); ++i) id[i] = i + 1;
  if (satisfies_nesting_pattern(d)) {
    try {
      if (cycle && d.n() % 2 == 1 && d.n() >= 3) plane_ham_cycle_gt_odd(d, id);
      else plane_ham_path_gt(d, id);
      return id;
    } catch (const InputError&) {
    }
  }
  if (d.n() < 3) return id;
  const auto check = is_weakly_generalized_twisted(d, true);
  if (!check.generalized_twisted) throw InputError("drawing is not weakly isomorphic to a generalized twisted drawing");
  const auto& lab = check.certificate->labeling;
  std::vector<VertexId> order(d.n());
  for (VertexId v = 1; v <= d.n(); ++v) order[lab[v] - 1] = v;
  return order;
}

EdgeOrder parse_edge_order(const std::string& s) {
  if (s == "lex") return {EdgeOrderKind::Lex, 0};
  if (s == "max-crossing-first") return {EdgeOrderKind::MaxCrossingFirst, 0};
  if (s.rfind("shuffle:", 0) == 0) {
    try {
      return {EdgeOrderKind::Shuffle, std::stoull(s.substr(8))};
    } catch (const std::exception&) {
    }
  }
  throw InputError("unknown edge order \"" + s + "\"");
}

std::uint64_t default_seed() {
  const char* env = std::getenv("TWIST_SEED");
  if (!env || !*env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw InputError("TWIST_SEED is not an unsigned integer");
  }
}

struct Options {
  std::string kind;
  int n = 0;
  std::optional<std::uint64_t> seed;
  bool scene = false;
  bool cells = false, antipodal = false, triangles = false;
  bool certify = false;
  int s = 0, t = 0;
  bool trace = false;
  std::string order = "lex";
  int cell = -1;
  std::string a, b;
};

using Handler = std::string (*)(const Options&, const Input&);

std::string cmd_validate(const Options&, const Input& in) {
  const auto rep = validate(in.drawing);
  if (!rep.ok()) throw InputError("invalid drawing: " + rep.summary());
  return "valid\n";
}

std::string cmd_analyze(const Options& o, const Input& in) {
  const Drawing& d = in.drawing;
  const CombinatorialMap m = planarize(d);
  Json j;
  j["n"] = d.n();
  j["edges"] = d.edge_count();
  j["crossings"] = d.crossing_count();
  j["nodes"] = m.node_count();
  j["segments"] = m.segment_count();
  j["cells"] = m.face_count();
  j["euler"] = m.euler_characteristic();
  Json pairs = Json::array();
  for (const auto& [e, f] : crossing_pairs(d)) pairs.push_back(Json::array({Json::array({e.u, e.v}), Json::array({f.u, f.v})}));
  j["crossing_pairs"] = pairs;
  if (o.cells) {
    Json cs = Json::array();
    for (int f = 0; f < m.face_count(); ++f)
      cs.push_back(Json{{"id", f}, {"size", m.cell(f).darts.size()}, {"vertices", m.cell(f).vertices}});
    j["cell_list"] = cs;
    j["flippable"] = flippable_cells(m);
  }
  if (o.antipodal) {
    if (d.n() < 3) throw InputError("antipodal detection needs n >= 3");
    const auto w = detect_antipodal(m);
    if (w) j["antipodal"] = Json{{"cells", Json::array({w->c1, w->c2})}, {"v1", w->v1}, {"v2", w->v2}};
    else j["antipodal"] = nullptr;
  }
  if (o.triangles) {
    if (d.n() > kMaxTripleSearchN) throw InputError("triangle triple search supports n <= " + std::to_string(kMaxTripleSearchN));
    const auto w = interior_disjoint_triangle_triple(m);
    if (w) {
      Json ts = Json::array();
      for (const auto& t : w->triangles) ts.push_back(t);
      j["interior_disjoint_triangles"] = ts;
    } else {
      j["interior_disjoint_triangles"] = nullptr;
    }
  }
  return dump_json(j);
}

std::string cmd_check_gt(const Options& o, const Input& in) {
  if (in.drawing.n() < 3) throw InputError("check-gt needs n >= 3");
  const auto r = is_weakly_generalized_twisted(in.drawing, o.certify);
  if (!o.certify || !r.generalized_twisted) return r.generalized_twisted ? "true\n" : "false\n";
  const CombinatorialMap m = planarize(in.drawing);
  return dump_json(certificate_to_json(m, *r.certificate));
}

std::string cmd_ham_path(const Options&, const Input& in) {
  return dump_json(path_json(plane_ham_path_gt(in.drawing, gt_order(in.drawing, false))));
}

std::string cmd_ham_cycle(const Options&, const Input& in) {
  if (in.drawing.n() % 2 == 0) {
    const auto w = search_plane_ham_cycle(in.drawing);
    if (w) return dump_json(path_json(*w));
    return dump_json(Json{{"format", "sdkn-path/1"}, {"vertices", nullptr}, {"cycle", true}});
  }
  return dump_json(path_json(plane_ham_cycle_gt_odd(in.drawing, gt_order(in.drawing, true))));
}

std::string cmd_dilworth(const Options& o, const Input& in) {
  if (!in.strip) throw InputError("dilworth needs a strip scene (sdkn-strip/1) to read the seam");
  const auto r = dilworth_split(in.drawing, seam_predicate(*in.strip), o.s, o.t);
  Json j;
  j["kind"] = r.kind == ChainKind::Chain ? "chain" : "antichain";
  j["vertices"] = r.vertices;
  j["s"] = r.s;
  j["t"] = r.t;
  j["longest_chain"] = r.longest_chain;
  return dump_json(j);
}

std::string cmd_matching(const Options& o, const Input& in) {
  PipelineTrace trace;
  const auto m = disjoint_edges(in.drawing, &trace, parse_edge_order(o.order));
  if (o.trace) return dump_json(trace.to_json());
  Json j;
  j["format"] = "sdkn-matching/1";
  j["edges"] = edges_json(m.edges);
  return dump_json(j);
}

std::string cmd_plane_path(const Options&, const Input& in) {
  const auto r = plane_path(in.drawing);
  Json j = path_json(r.path);
  j["branch"] = r.branch == PathBranch::CMonotone ? "c-monotone" : "tree-diameter";
  j["guaranteed"] = r.guaranteed;
  j["v"] = r.v;
  if (r.branch == PathBranch::CMonotone) {
    j["w"] = r.w;
    j["u_vw"] = r.u_vw;
  }
  j["threshold"] = r.threshold;
  return dump_json(j);
}

Curve curve_for(const CombinatorialMap& m, const Input& in) {
  if (in.strip && in.strip->direct.empty()) return seam_curve(m, *in.strip);
  if (in.drawing.n() < 3) throw InputError("curve construction needs n >= 3 or a strip scene");
  const auto w = detect_antipodal(m);
  if (!w) throw InputError("no antipodal vi-cells");
  return build_once_crossing_curve(m, w->c1, w->c2, w->v1);
}

std::string cmd_curve(const Options&, const Input& in) {
  const CombinatorialMap m = planarize(in.drawing);
  const Curve c = curve_for(m, in);
  Json j = curve_to_json(m, c);
  const auto t = classify_top_bottom(m, c);
  j["natural_order"] = natural_order(t);
  return dump_json(j);
}

std::string cmd_extend(const Options&, const Input& in) {
  const CombinatorialMap m = planarize(in.drawing);
  const auto ext = extend_with_OZ(m, curve_for(m, in));
  return dump_json(drawing_to_json(ext.drawing));
}

std::string cmd_flip(const Options& o, const Input& in) {
  const CombinatorialMap m = planarize(in.drawing);
  if (o.cell < 0 || o.cell >= m.face_count()) throw InputError("cell id out of range");
  const auto fl = flippable_cells(m);
  if (std::find(fl.begin(), fl.end(), o.cell) == fl.end())
    throw InputError("cell " + std::to_string(o.cell) + " is not a flippable triangle");
  return dump_json(drawing_to_json(flip(m, o.cell)));
}

std::string cmd_export_svg(const Options& o, const Input& in) {
  if (in.strip) return svg_strip(*in.strip);
  if (in.points) return svg_points(*in.points);
  return svg_drawing(in.drawing, o.seed.value_or(1));
}

int report(const std::exception& e, int code) {
  std::cerr << "twist: " << e.what() << "\n";
  return code;
}

// Runs a handler on one input text; returns exit code and output.
std::pair<int, std::string> run_one(Handler h, const Options& o, const std::string& text, const std::string& source) {
  try {
    return {kOk, h(o, load(text, source))};
  } catch (const InputError& e) {
    return {kInput, std::string("error: ") + e.what()};
  } catch (const InvariantViolation& e) {
    return {kInvariant, std::string("invariant violation: ") + e.what()};
  }
}

int run_single(Handler h, const Options& o, const std::string& input, const std::string& output) {
  std::string text;
  try {
    text = read_text(input);
  } catch (const InputError& e) {
    return report(e, kInput);
  }
  auto [code, out] = run_one(h, o, text, input == "-" ? "<stdin>" : input);
  if (code != kOk) {
    std::cerr << "twist: " << out << "\n";
    return code;
  }
  try {
    write_text(output, out);
  } catch (const InputError& e) {
    return report(e, kInput);
  }
  return kOk;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<std::string> files;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0)
    for (size_t i = 0; i < g.gl_pathc; ++i) files.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  std::sort(files.begin(), files.end());
  return files;
}

// One JSON line per file, in sorted file order.
int run_batch(Handler h, const Options& o, const std::string& pattern, const std::string& output) {
  const auto files = expand_glob(pattern);
  if (files.empty()) {
    std::cerr << "twist: no files match " << pattern << "\n";
    return kInput;
  }
  const size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::pair<int, std::string>> results(files.size());
  for (size_t base = 0; base < files.size(); base += workers) {
    std::vector<std::future<std::pair<int, std::string>>> jobs;
    for (size_t i = base; i < std::min(files.size(), base + workers); ++i)
      jobs.push_back(std::async(std::launch::async, [&, i] {
        try {
          return run_one(h, o, read_text(files[i]), files[i]);
        } catch (const InputError& e) {
          return std::make_pair(static_cast<int>(kInput), std::string("error: ") + e.what());
        }
      }));
    for (size_t k = 0; k < jobs.size(); ++k) results[base + k] = jobs[k].get();
  }
  std::string out;
  int worst = kOk;
  for (size_t i = 0; i < files.size(); ++i) {
    Json line;
    line["file"] = files[i];
    line["exit"] = results[i].first;
    line["output"] = results[i].second;
    out += dump_json(line);
    worst = std::max(worst, results[i].first);
  }
  write_text(output, out);
  return worst;
}

std::string generate(const Options& o) {
  const std::uint64_t seed = o.seed ? *o.seed : default_seed();
  if (o.n < 1) throw InputError("--n must be >= 1");
  if (o.kind == "canonical-gt" || o.kind == "random-gt" || o.kind == "cmonotone-mixed") {
    const auto g = o.kind == "canonical-gt" ? canonical_gt(o.n)
                   : o.kind == "random-gt"  ? random_gt(o.n, seed)
                                            : cmonotone_mixed(o.n, seed);
    return dump_json(o.scene ? strip_to_json(g.scene) : drawing_to_json(g.drawing));
  }
  if (o.kind == "convex" || o.kind == "points-random") {
    const auto p = o.kind == "convex" ? convex_points(o.n) : random_points(o.n, seed);
    return dump_json(o.scene ? points_to_json(p) : drawing_to_json(straight_line_drawing(p)));
  }
  throw InputError("unknown kind \"" + o.kind + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twist: simple drawings of complete graphs"};
  app.require_subcommand(1);
  Options o;
  std::string input = "-", output = "-", pattern;

  auto io_opts = [&](CLI::App* sub) {
    sub->add_option("input", input, "input file, - for stdin");
    sub->add_option("-o,--output", output, "output file, - for stdout");
    sub->add_option("--glob", pattern, "process every matching file");
  };

  auto* gen = app.add_subcommand("gen", "generate a drawing");
  gen->add_option("--kind", o.kind, "canonical-gt|random-gt|convex|points-random|cmonotone-mixed")
      ->required()
      ->check(CLI::IsMember({"canonical-gt", "random-gt", "convex", "points-random", "cmonotone-mixed"}));
  gen->add_option("--n", o.n, "vertex count")->required();
  gen->add_option("--seed", o.seed, "seed (default TWIST_SEED or 0)");
  gen->add_flag("--scene", o.scene, "write the coordinate scene instead of the drawing");
  gen->add_option("-o,--output", output, "output file, - for stdout");

  std::vector<std::pair<CLI::App*, Handler>> subs;
  auto add = [&](const char* name, const char* help, Handler h) {
    auto* s = app.add_subcommand(name, help);
    io_opts(s);
    subs.push_back({s, h});
    return s;
  };
  add("validate", "check the simple-drawing axioms", cmd_validate);
  auto* analyze = add("analyze", "planarization statistics", cmd_analyze);
  analyze->add_flag("--cells", o.cells, "list cells");
  analyze->add_flag("--antipodal", o.antipodal, "search antipodal vi-cells");
  analyze->add_flag("--triangles", o.triangles, "search three interior-disjoint triangles");
  auto* check = add("check-gt", "weak isomorphism to a generalized twisted drawing", cmd_check_gt);
  check->add_flag("--certify", o.certify, "emit the certificate chain");
  add("ham-path", "plane Hamiltonian path of a generalized twisted drawing", cmd_ham_path);
  add("ham-cycle", "plane Hamiltonian cycle, odd n", cmd_ham_cycle);
  auto* dil = add("dilworth", "chain or antichain of the seam order", cmd_dilworth);
  dil->add_option("--s", o.s, "chain size")->required();
  dil->add_option("--t", o.t, "antichain size")->required();
  auto* match = add("matching", "pairwise disjoint edges", cmd_matching);
  match->add_flag("--trace", o.trace, "emit the pipeline trace");
  match->add_option("--order", o.order, "greedy edge order: lex|shuffle:SEED|max-crossing-first");
  add("plane-path", "long plane path", cmd_plane_path);
  add("curve", "curve crossing every edge once", cmd_curve);
  add("extend", "extend by O and Z", cmd_extend);
  auto* fl = add("flip", "triangle flip", cmd_flip);
  fl->add_option("--cell", o.cell, "flippable cell id")->required();
  auto* svg = add("export-svg", "render as SVG", cmd_export_svg);
  svg->add_option("--seed", o.seed, "layout seed");

  auto* iso = app.add_subcommand("iso", "weak isomorphism test");
  iso->add_option("-a", o.a, "first drawing")->required();
  iso->add_option("-b", o.b, "second drawing")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) {
      write_text(output, generate(o));
      return kOk;
    }
    if (iso->parsed()) {
      const Input a = load(read_text(o.a), o.a), b = load(read_text(o.b), o.b);
      if (a.drawing.n() > kMaxCanonicalN || b.drawing.n() > kMaxCanonicalN)
        throw InputError("weak isomorphism supports n <= " + std::to_string(kMaxCanonicalN));
      const bool same = canonical_signature(a.drawing) == canonical_signature(b.drawing);
      write_text(output, same ? "true\n" : "false\n");
      return kOk;
    }
  } catch (const InputError& e) {
    return report(e, kInput);
  } catch (const InvariantViolation& e) {
    return report(e, kInvariant);
  }
  for (const auto& [sub, h] : subs) {
    if (!sub->parsed()) continue;
    if (!pattern.empty()) {
      try {
        return run_batch(h, o, pattern, output);
      } catch (const InputError& e) {
        return report(e, kInput);
      }
    }
    return run_single(h, o, input, output);
  }
  return kUsage;
}
