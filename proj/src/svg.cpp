#include "twist/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "twist/map.hpp"

namespace twist {

namespace {

struct Pt {
  double x = 0, y = 0;
};

class Canvas {
 public:
  Canvas(double x0, double y0, double x1, double y1) : x0_(x0), y0_(y0), x1_(x1), y1_(y1) {}

  void line(Pt a, Pt b, const char* color = "#333") {
    body_ << "<line x1=\"" << fx(a.x) << "\" y1=\"" << fy(a.y) << "\" x2=\"" << fx(b.x) << "\" y2=\"" << fy(b.y)
          << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
  }
  void polyline(const std::vector<Pt>& ps) {
    body_ << "<polyline fill=\"none\" stroke=\"#333\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < ps.size(); ++i) body_ << (i ? " " : "") << fx(ps[i].x) << "," << fy(ps[i].y);
    body_ << "\"/>\n";
  }
  void vertex(Pt p, int label, const char* fill = "#c0392b") {
    body_ << "<circle cx=\"" << fx(p.x) << "\" cy=\"" << fy(p.y) << "\" r=\"6\" fill=\"" << fill << "\"/>\n";
    body_ << "<text x=\"" << fx(p.x, 8) << "\" y=\"" << fy(p.y, -8) << "\" font-size=\"12\">" << label << "</text>\n";
  }
  void dashed(Pt a, Pt b) {
    body_ << "<line x1=\"" << fx(a.x) << "\" y1=\"" << fy(a.y) << "\" x2=\"" << fx(b.x) << "\" y2=\"" << fy(b.y)
          << "\" stroke=\"#2980b9\" stroke-dasharray=\"4,4\"/>\n";
  }
  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kSize + 2 * kPad << "\" height=\""
        << kSize + 2 * kPad << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  static constexpr double kSize = 600, kPad = 30;
  std::string fx(double x, double off = 0) const { return num(kPad + (x - x0_) / std::max(1e-9, x1_ - x0_) * kSize + off); }
  std::string fy(double y, double off = 0) const { return num(kPad + (y1_ - y) / std::max(1e-9, y1_ - y0_) * kSize + off); }
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
  double x0_, y0_, x1_, y1_;
  std::ostringstream body_;
};

}  // namespace

std::string svg_strip(const StripScene& s) {
  const int n = s.n;
  const double L = n + 1;
  double top = 0;
  for (const auto& r : s.radii) top = std::max(top, r.get_d());
  Canvas c(-L, 0, L, top * 1.1 + 1);
  c.dashed({0, 0}, {0, top * 1.1 + 1});
  for (VertexId i = 1; i <= n; ++i)
    for (VertexId j = i + 1; j <= n; ++j) {
      const Pt a{static_cast<double>(i), s.radii[i - 1].get_d()};
      const double rj = s.radii[j - 1].get_d();
      if (s.wraps(i, j)) {
        c.line(a, {j - L, rj});
        c.line({i - L, a.y}, {j - 2 * L, rj}, "#bbb");
      } else {
        c.line(a, {static_cast<double>(j), rj});
      }
    }
  for (VertexId i = 1; i <= n; ++i) {
    const double r = s.radii[i - 1].get_d();
    c.vertex({static_cast<double>(i), r}, i);
    c.vertex({i - L, r}, i, "#e6a19a");
  }
  return c.str();
}

std::string svg_points(const PointScene& p) {
  std::vector<Pt> ps;
  for (const auto& q : p.points) ps.push_back({q[0].get_d(), q[1].get_d()});
  double x0 = ps[0].x, x1 = ps[0].x, y0 = ps[0].y, y1 = ps[0].y;
  for (const auto& q : ps) {
    x0 = std::min(x0, q.x);
    x1 = std::max(x1, q.x);
    y0 = std::min(y0, q.y);
    y1 = std::max(y1, q.y);
  }
  Canvas c(x0, y0, x1, y1);
  for (size_t i = 0; i < ps.size(); ++i)
    for (size_t j = i + 1; j < ps.size(); ++j) c.line(ps[i], ps[j]);
  for (size_t i = 0; i < ps.size(); ++i) c.vertex(ps[i], static_cast<int>(i + 1));
  return c.str();
}

std::string svg_drawing(const Drawing& d, std::uint64_t seed) {
  const CombinatorialMap m = planarize(d);
  const int N = m.node_count();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Pt> pos(N);
  for (auto& p : pos) p = {u(rng), u(rng)};
  const double k = 1.0 / std::sqrt(static_cast<double>(N));
  double temp = 0.1;
  for (int it = 0; it < 300; ++it) {
    std::vector<Pt> disp(N);
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b) {
        const double dx = pos[a].x - pos[b].x, dy = pos[a].y - pos[b].y;
        const double dist = std::max(1e-6, std::hypot(dx, dy));
        const double f = k * k / dist;
        disp[a].x += dx / dist * f;
        disp[a].y += dy / dist * f;
        disp[b].x -= dx / dist * f;
        disp[b].y -= dy / dist * f;
      }
    for (int s = 0; s < m.segment_count(); ++s) {
      const int a = m.dart(2 * s).node, b = m.dart(2 * s + 1).node;
      const double dx = pos[a].x - pos[b].x, dy = pos[a].y - pos[b].y;
      const double dist = std::max(1e-6, std::hypot(dx, dy));
      const double f = dist * dist / k;
      disp[a].x -= dx / dist * f;
      disp[a].y -= dy / dist * f;
      disp[b].x += dx / dist * f;
      disp[b].y += dy / dist * f;
    }
    for (int a = 0; a < N; ++a) {
      const double len = std::max(1e-9, std::hypot(disp[a].x, disp[a].y));
      const double step = std::min(len, temp);
      pos[a].x += disp[a].x / len * step;
      pos[a].y += disp[a].y / len * step;
    }
    temp *= 0.985;
  }
  double x0 = pos[0].x, x1 = pos[0].x, y0 = pos[0].y, y1 = pos[0].y;
  for (const auto& p : pos) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  Canvas c(x0, y0, x1, y1);
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    std::vector<Pt> ps;
    const Edge ed = d.edge(e);
    for (int dt : m.edge_walk(ed.u, ed.v)) ps.push_back(pos[m.dart(dt).node]);
    ps.push_back(pos[m.vertex_node(ed.v)]);
    c.polyline(ps);
  }
  for (VertexId v = 1; v <= d.n(); ++v) c.vertex(pos[m.vertex_node(v)], v);
  return c.str();
}

}  // namespace twist
