#include "arrangement.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <type_traits>

#include "twist/error.hpp"

namespace twist::detail {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

int sg(i64 v) { return (v > 0) - (v < 0); }
int sg(i128 v) { return (v > 0) - (v < 0); }
int sg(const mpz_class& v) { return sgn(v); }

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~0ULL));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}
mpz_class to_mpz(const mpz_class& v) { return v; }

double to_double(i128 v) { return static_cast<double>(v); }
double to_double(const mpz_class& v) { return v.get_d(); }

template <class C>
C from_mpz(const mpz_class& v) {
  if constexpr (std::is_same_v<C, mpz_class>) {
    return v;
  } else {
    return static_cast<i64>(v.get_si());
  }
}

std::string edge_str(Edge e) { return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}"; }

enum class Hit { None, EndpointTouch, Degenerate, Proper };

// C holds coordinates, D 2x2 determinants, W products of two determinants.
template <class C, class D, class W>
class Engine {
 public:
  struct Seg {
    C px, py, qx, qy;
  };
  struct Event {
    D num, den;
    double approx;
    EdgeId other;
    int sign;
  };

  explicit Engine(const SegmentInput& in) : in_(in) {
    period_ = from_mpz<C>(in.period);
    for (const auto& s : in.seg)
      segs_.push_back({from_mpz<C>(s[0]), from_mpz<C>(s[1]), from_mpz<C>(s[2]), from_mpz<C>(s[3])});
  }

  ArrangementResult run() {
    const int m = static_cast<int>(segs_.size());
    std::vector<std::vector<Event>> ev(m);
    std::vector<C> xlo(m), xhi(m), ylo(m), yhi(m);
    for (int e = 0; e < m; ++e) {
      const Seg& s = segs_[e];
      xlo[e] = std::min(s.px, s.qx);
      xhi[e] = std::max(s.px, s.qx);
      ylo[e] = std::min(s.py, s.qy);
      yhi[e] = std::max(s.py, s.qy);
    }
    for (int e = 0; e < m; ++e) {
      for (int f = e + 1; f < m; ++f) {
        if (yhi[e] < ylo[f] || yhi[f] < ylo[e]) continue;
        const bool adj = adjacent(in_.edges[e], in_.edges[f]);
        int crossings = 0;
        auto visit = [&](const C& shift) {
          Seg g = segs_[f];
          g.px += shift;
          g.qx += shift;
          D num_e, num_f, den;
          int sign = 0;
          Hit h = classify(segs_[e], g, num_e, num_f, den, sign);
          switch (h) {
            case Hit::None:
              return;
            case Hit::EndpointTouch:
              if (!adj) degenerate("vertex image touches edge", e, f);
              return;
            case Hit::Degenerate:
              degenerate("degenerate intersection", e, f);
            case Hit::Proper:
              if (adj) degenerate("adjacent edges cross", e, f);
              if (++crossings > 1) degenerate("edges cross twice", e, f);
              ev[e].push_back({num_e, den, to_double(num_e) / to_double(den), f, sign});
              ev[f].push_back({num_f, den, to_double(num_f) / to_double(den), e, -sign});
              return;
          }
        };
        if (sg(period_) == 0) {
          if (xhi[e] < xlo[f] || xhi[f] < xlo[e]) continue;
          visit(C(0));
        } else {
          // shifts k*period with [xlo_f, xhi_f] + k*period meeting [xlo_e, xhi_e]
          C lo = xlo[e] - xhi[f];
          C hi = xhi[e] - xlo[f];
          C k = floor_div(lo, period_);
          if (k * period_ < lo) k += 1;
          for (; k * period_ <= hi; k += 1) visit(C(k * period_));
        }
      }
    }
    ArrangementResult res;
    std::vector<std::vector<CrossingRecord>> cr(m);
    if (in_.want_params) res.params.resize(m);
    for (int e = 0; e < m; ++e) {
      auto& v = ev[e];
      std::sort(v.begin(), v.end(), [](const Event& a, const Event& b) { return less(a, b); });
      for (size_t i = 0; i < v.size(); ++i) {
        if (i > 0 && !less(v[i - 1], v[i])) degenerate("three edges through one point", e, v[i].other);
        cr[e].push_back({v[i].other, v[i].sign});
        if (in_.want_params) {
          mpq_class t(to_mpz(v[i].num), to_mpz(v[i].den));
          t.canonicalize();
          res.params[e].push_back(t);
        }
      }
    }
    res.drawing = Drawing(in_.n, in_.edges, rotations(), std::move(cr));
    return res;
  }

 private:
  static C floor_div(const C& a, const C& b) {
    if constexpr (std::is_same_v<C, mpz_class>) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      return q;
    } else {
      C q = a / b;
      if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
      return q;
    }
  }

  static D cross(const C& ax, const C& ay, const C& bx, const C& by) { return D(D(ax) * D(by) - D(ay) * D(bx)); }

  // Parameters lie in (0,1); doubles decide unless they are too close to call.
  static bool less(const Event& a, const Event& b) {
    if (a.approx < b.approx - 1e-12) return true;
    if (b.approx < a.approx - 1e-12) return false;
    return W(a.num) * W(b.den) < W(b.num) * W(a.den);
  }

  static bool on_segment(const C& px, const C& py, const C& qx, const C& qy, const C& x, const C& y) {
    return std::min(px, qx) <= x && x <= std::max(px, qx) && std::min(py, qy) <= y && y <= std::max(py, qy);
  }

  static Hit classify(const Seg& a, const Seg& b, D& num_a, D& num_b, D& den, int& sign) {
    const C d1x = a.qx - a.px, d1y = a.qy - a.py;
    const C d2x = b.qx - b.px, d2y = b.qy - b.py;
    const int o1 = sg(cross(d1x, d1y, C(b.px - a.px), C(b.py - a.py)));
    const int o2 = sg(cross(d1x, d1y, C(b.qx - a.px), C(b.qy - a.py)));
    if (o1 * o2 > 0) return Hit::None;
    const int o3 = sg(cross(d2x, d2y, C(a.px - b.px), C(a.py - b.py)));
    const int o4 = sg(cross(d2x, d2y, C(a.qx - b.px), C(a.qy - b.py)));
    if (o3 * o4 > 0) return Hit::None;
    if (o1 == 0 && o2 == 0) {
      const bool use_x = sg(d1x) != 0;
      C a0 = use_x ? a.px : a.py, a1 = use_x ? a.qx : a.qy;
      C b0 = use_x ? b.px : b.py, b1 = use_x ? b.qx : b.qy;
      if (a1 < a0) std::swap(a0, a1);
      if (b1 < b0) std::swap(b0, b1);
      C lo = std::max(a0, b0), hi = std::min(a1, b1);
      if (lo > hi) return Hit::None;
      if (lo == hi) return Hit::EndpointTouch;
      return Hit::Degenerate;
    }
    if (o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0) {
      const bool touch = (o1 == 0 && on_segment(a.px, a.py, a.qx, a.qy, b.px, b.py)) ||
                         (o2 == 0 && on_segment(a.px, a.py, a.qx, a.qy, b.qx, b.qy)) ||
                         (o3 == 0 && on_segment(b.px, b.py, b.qx, b.qy, a.px, a.py)) ||
                         (o4 == 0 && on_segment(b.px, b.py, b.qx, b.qy, a.qx, a.qy));
      if (!touch) return Hit::None;
      const bool shared = (a.px == b.px && a.py == b.py) || (a.px == b.qx && a.py == b.qy) ||
                          (a.qx == b.px && a.qy == b.py) || (a.qx == b.qx && a.qy == b.qy);
      return shared ? Hit::EndpointTouch : Hit::Degenerate;
    }
    den = cross(d1x, d1y, d2x, d2y);
    const C rx = b.px - a.px, ry = b.py - a.py;
    num_a = cross(rx, ry, d2x, d2y);
    num_b = cross(rx, ry, d1x, d1y);
    sign = sg(den);
    if (sign < 0) {
      den = -den;
      num_a = -num_a;
      num_b = -num_b;
    }
    return Hit::Proper;
  }

  std::vector<std::vector<VertexId>> rotations() const {
    struct Dir {
      C x, y;
      VertexId to;
    };
    std::vector<std::vector<Dir>> at(in_.n + 1);
    for (size_t e = 0; e < segs_.size(); ++e) {
      const Seg& s = segs_[e];
      const Edge ed = in_.edges[e];
      at[ed.u].push_back({C(s.qx - s.px), C(s.qy - s.py), ed.v});
      at[ed.v].push_back({C(s.px - s.qx), C(s.py - s.qy), ed.u});
    }
    auto upper = [](const Dir& d) { return sg(d.y) > 0 || (sg(d.y) == 0 && sg(d.x) > 0); };
    std::vector<std::vector<VertexId>> rot(in_.n);
    for (int v = 1; v <= in_.n; ++v) {
      auto& ds = at[v];
      std::sort(ds.begin(), ds.end(), [&](const Dir& a, const Dir& b) {
        bool ua = upper(a), ub = upper(b);
        if (ua != ub) return ua;
        return sg(cross(a.x, a.y, b.x, b.y)) > 0;
      });
      for (size_t i = 0; i < ds.size(); ++i) {
        const Dir& a = ds[i];
        const Dir& b = ds[(i + 1) % ds.size()];
        if (ds.size() > 1 && sg(cross(a.x, a.y, b.x, b.y)) == 0 && sg(D(D(a.x) * D(b.x) + D(a.y) * D(b.y))) > 0)
          throw InputError("degenerate rotation: two edges leave vertex " + std::to_string(v) +
                           " in the same direction");
        rot[v - 1].push_back(a.to);
      }
    }
    return rot;
  }

  [[noreturn]] void degenerate(const std::string& what, int e, int f) const {
    throw InputError(what + ": " + edge_str(in_.edges[e]) + " and " + edge_str(in_.edges[f]));
  }

  const SegmentInput& in_;
  C period_;
  std::vector<Seg> segs_;
};

// Determinants are bounded by 8*X*Y and must fit in 63 bits.
bool fits_fast(const SegmentInput& in) {
  mpz_class X = 0, Y = 0;
  for (const auto& s : in.seg) {
    X = std::max<mpz_class>(X, std::max<mpz_class>(abs(s[0]), abs(s[2])));
    Y = std::max<mpz_class>(Y, std::max<mpz_class>(abs(s[1]), abs(s[3])));
  }
  X += 2 * abs(in.period) + 1;
  Y += 1;
  const mpz_class cap = mpz_class(1) << 59;
  return X < cap && Y < cap && X * Y < cap;
}

}  // namespace

ArrangementResult build_arrangement(const SegmentInput& in) {
  if (fits_fast(in)) return Engine<i64, i128, i128>(in).run();
  return Engine<mpz_class, mpz_class, mpz_class>(in).run();
}

}  // namespace twist::detail
