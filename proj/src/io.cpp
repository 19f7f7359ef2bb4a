#include "twist/io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include "twist/error.hpp"

namespace twist {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw InputError(where + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field \"") + key + "\"");
  return *it;
}

long long as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<long long>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

void expect_format(const Json& j, const char* fmt) {
  const Json& f = field(j, "format", "$");
  if (!f.is_string() || f.get<std::string>() != fmt)
    bad("$.format", std::string("expected \"") + fmt + "\"");
}

}  // namespace

std::string read_text(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump() + "\n"; }

Json drawing_to_json(const Drawing& d) {
  Json j;
  j["format"] = "sdkn-drawing/1";
  j["n"] = d.n();
  Json rot = Json::array();
  for (int v = 1; v <= d.n(); ++v) rot.push_back(d.rotation(v));
  j["rotations"] = rot;
  Json edges = Json::array();
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    Json cr = Json::array();
    for (const auto& r : d.crossings(e)) {
      const Edge& o = d.edge(r.other);
      cr.push_back(Json{{"u", o.u}, {"v", o.v}, {"sign", r.sign}});
    }
    edges.push_back(Json{{"u", d.edge(e).u}, {"v", d.edge(e).v}, {"crossings", cr}});
  }
  j["edges"] = edges;
  return j;
}

Drawing drawing_from_json(const Json& j) {
  expect_format(j, "sdkn-drawing/1");
  const long long n = as_int(field(j, "n", "$"), "$.n");
  if (n < 1 || n > 4096) bad("$.n", "out of range");
  const Json& rj = as_array(field(j, "rotations", "$"), "$.rotations");
  if (static_cast<long long>(rj.size()) != n) bad("$.rotations", "expected " + std::to_string(n) + " entries");
  std::vector<std::vector<VertexId>> rot(n);
  for (size_t i = 0; i < rj.size(); ++i) {
    const std::string w = "$.rotations[" + std::to_string(i) + "]";
    for (size_t k = 0; k < as_array(rj[i], w).size(); ++k) {
      const std::string wk = w + "[" + std::to_string(k) + "]";
      const long long x = as_int(rj[i][k], wk);
      if (x < 1 || x > n) bad(wk, "vertex out of range");
      rot[i].push_back(static_cast<VertexId>(x));
    }
  }
  const Json& ej = as_array(field(j, "edges", "$"), "$.edges");
  std::vector<Edge> edges;
  std::map<Edge, EdgeId> index;
  for (size_t i = 0; i < ej.size(); ++i) {
    const std::string w = "$.edges[" + std::to_string(i) + "]";
    const long long u = as_int(field(ej[i], "u", w), w + ".u");
    const long long v = as_int(field(ej[i], "v", w), w + ".v");
    if (u < 1 || v > n || u >= v) bad(w, "edge must satisfy 1 <= u < v <= n");
    Edge e{static_cast<VertexId>(u), static_cast<VertexId>(v)};
    if (!index.emplace(e, static_cast<EdgeId>(edges.size())).second) bad(w, "duplicate edge");
    edges.push_back(e);
  }
  std::vector<std::vector<CrossingRecord>> cross(edges.size());
  for (size_t i = 0; i < ej.size(); ++i) {
    const std::string w = "$.edges[" + std::to_string(i) + "].crossings";
    const Json& cj = as_array(field(ej[i], "crossings", w), w);
    for (size_t k = 0; k < cj.size(); ++k) {
      const std::string wk = w + "[" + std::to_string(k) + "]";
      const long long u = as_int(field(cj[k], "u", wk), wk + ".u");
      const long long v = as_int(field(cj[k], "v", wk), wk + ".v");
      const long long s = as_int(field(cj[k], "sign", wk), wk + ".sign");
      if (s != 1 && s != -1) bad(wk + ".sign", "must be 1 or -1");
      auto it = index.find(make_edge(static_cast<VertexId>(u), static_cast<VertexId>(v)));
      if (it == index.end()) bad(wk, "references an edge that is not listed");
      cross[i].push_back({it->second, static_cast<int>(s)});
    }
  }
  Drawing d(static_cast<int>(n), edges, std::move(rot), std::move(cross));
  auto rep = validate(d);
  if (!rep.ok()) throw InputError("invalid drawing: " + rep.summary());
  return d;
}

Drawing read_drawing(const std::string& path) {
  return drawing_from_json(parse_json(read_text(path), path == "-" ? "<stdin>" : path));
}

void write_drawing(const Drawing& d, const std::string& path) { write_text(path, dump_json(drawing_to_json(d))); }

mpq_class parse_rational(const std::string& s) {
  auto digits = [](const std::string& t, bool sign_ok) {
    size_t i = (sign_ok && !t.empty() && t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  const std::string p = s.substr(0, slash);
  const std::string q = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits(p, true) || !digits(q, false)) throw InputError("malformed rational \"" + s + "\"");
  mpz_class den(q);
  if (den == 0) throw InputError("zero denominator in \"" + s + "\"");
  mpq_class r(mpz_class(p), den);
  r.canonicalize();
  return r;
}

std::string format_rational(const mpq_class& q) { return q.get_str(); }

Json strip_to_json(const StripScene& s) {
  Json j;
  j["format"] = "sdkn-strip/1";
  j["n"] = s.n;
  Json radii = Json::array();
  for (const auto& r : s.radii) radii.push_back(format_rational(r));
  j["radii"] = radii;
  if (!s.direct.empty()) {
    Json dj = Json::array();
    for (const auto& e : s.direct) dj.push_back(Json::array({e.u, e.v}));
    j["direct"] = dj;
  }
  return j;
}

StripScene strip_from_json(const Json& j) {
  expect_format(j, "sdkn-strip/1");
  StripScene s;
  const long long n = as_int(field(j, "n", "$"), "$.n");
  if (n < 1 || n > 4096) bad("$.n", "out of range");
  s.n = static_cast<int>(n);
  const Json& rj = as_array(field(j, "radii", "$"), "$.radii");
  if (static_cast<long long>(rj.size()) != n) bad("$.radii", "expected " + std::to_string(n) + " entries");
  for (size_t i = 0; i < rj.size(); ++i) {
    const std::string w = "$.radii[" + std::to_string(i) + "]";
    if (!rj[i].is_string()) bad(w, "expected a rational string");
    try {
      s.radii.push_back(parse_rational(rj[i].get<std::string>()));
    } catch (const InputError& e) {
      bad(w, e.what());
    }
  }
  if (j.contains("direct")) {
    const Json& dj = as_array(j["direct"], "$.direct");
    for (size_t i = 0; i < dj.size(); ++i) {
      const std::string w = "$.direct[" + std::to_string(i) + "]";
      if (!dj[i].is_array() || dj[i].size() != 2) bad(w, "expected a pair");
      const long long a = as_int(dj[i][0], w), b = as_int(dj[i][1], w);
      if (a < 1 || b < 1 || a > n || b > n || a == b) bad(w, "invalid edge");
      s.direct.push_back(make_edge(static_cast<VertexId>(a), static_cast<VertexId>(b)));
    }
    std::sort(s.direct.begin(), s.direct.end());
    if (std::adjacent_find(s.direct.begin(), s.direct.end()) != s.direct.end()) bad("$.direct", "duplicate edge");
  }
  return s;
}

Json points_to_json(const PointScene& p) {
  Json j;
  j["format"] = "sdkn-points/1";
  Json pts = Json::array();
  for (const auto& q : p.points) pts.push_back(Json::array({format_rational(q[0]), format_rational(q[1])}));
  j["points"] = pts;
  return j;
}

PointScene points_from_json(const Json& j) {
  expect_format(j, "sdkn-points/1");
  PointScene p;
  const Json& pj = as_array(field(j, "points", "$"), "$.points");
  if (pj.empty()) bad("$.points", "no points");
  for (size_t i = 0; i < pj.size(); ++i) {
    const std::string w = "$.points[" + std::to_string(i) + "]";
    if (!pj[i].is_array() || pj[i].size() != 2 || !pj[i][0].is_string() || !pj[i][1].is_string())
      bad(w, "expected [\"x\",\"y\"]");
    try {
      p.points.push_back({parse_rational(pj[i][0].get<std::string>()), parse_rational(pj[i][1].get<std::string>())});
    } catch (const InputError& e) {
      bad(w, e.what());
    }
  }
  return p;
}

Drawing drawing_from_any(const Json& j) {
  const Json& f = field(j, "format", "$");
  if (!f.is_string()) bad("$.format", "expected a string");
  const std::string fmt = f.get<std::string>();
  if (fmt == "sdkn-drawing/1") return drawing_from_json(j);
  if (fmt == "sdkn-strip/1") return strip_to_drawing(strip_from_json(j));
  if (fmt == "sdkn-points/1") return straight_line_drawing(points_from_json(j));
  bad("$.format", "unknown format \"" + fmt + "\"");
}

}  // namespace twist
