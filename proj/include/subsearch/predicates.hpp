#pragma once

// Exact geometric predicates on lattice points.
//
// Coordinates of an embedded point split as (x, y*s) with x, y in Q(a2)
// and s = sin(pi/n): sin(i*pi/n) = a_i*s and 2cos(i*pi/n) = a_{i+1} - a_{i-1}.
// Cross and dot products therefore reduce to signs of Q(a2) elements.
// A float filter handles the easy cases; the exact path runs on int64
// polynomial arithmetic and falls back to rationals past a magnitude
// guard.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>

#include "subsearch/field.hpp"
#include "subsearch/lattice.hpp"

namespace subsearch {

enum class SegRel { Disjoint, Equal, SharedEndpoint, CollinearOverlap, Crossing, Touching };

inline const char* seg_rel_name(SegRel r) {
  switch (r) {
    case SegRel::Disjoint: return "disjoint";
    case SegRel::Equal: return "equal";
    case SegRel::SharedEndpoint: return "shared_endpoint_only";
    case SegRel::CollinearOverlap: return "collinear_overlap";
    case SegRel::Crossing: return "crossing";
    case SegRel::Touching: return "touching";
  }
  return "?";
}

class GeomKernel {
 public:
  static constexpr int kMaxDeg = 6;                    // (13-1)/2
  static constexpr int64_t kGuard = int64_t(1) << 20;  // int64 path magnitude guard

  explicit GeomKernel(const NumberField& K) : K_(K), n_(K.n()), d_(K.degree()) {
    cos_.resize(n_ - 1);
    sin_.resize(n_ - 1);
    for (int i = 0; i <= n_ - 2; ++i) {
      cos_[i] = std::cos(i * M_PI / n_);
      sin_[i] = std::sin(i * M_PI / n_);
    }
    auto ivec = [&](const FieldElement& e) {
      std::array<int64_t, kMaxDeg> v{};
      for (int i = 0; i < d_; ++i) {
        if (!is_integer(e.coeff(i))) throw std::logic_error("length vector is not integral");
        v[i] = e.coeff(i).get_num().get_si();
      }
      return v;
    };
    // dx[i] = 2cos(i*pi/n), dy[i] = a_i, as integer vectors over 1..a2^(d-1)
    dx_.resize(n_ - 1);
    dy_.resize(n_ - 1);
    for (int i = 0; i <= n_ - 2; ++i) {
      FieldElement two_cos =
          (i == 0) ? K.one() * Rat(2) : K.length(i + 1) - K.length(i - 1);
      dx_[i] = ivec(two_cos);
      dy_[i] = ivec(K.length(i));
    }
    // 4 sin^2(pi/n) = 2 - a_3 + a_1
    four_s2_ = ivec(K.from_rational(2) - K.length(3) + K.length(1));
    qn_.fill(0);
    for (int i = 0; i < d_; ++i) qn_[i] = K.min_poly()[i].get_si();
  }

  const NumberField& field() const { return K_; }
  int n() const { return n_; }

  std::pair<double, double> embed(const LatticePoint& p) const {
    double x = 0, y = 0;
    for (int i = 0; i <= n_ - 2; ++i) {
      if (!p.c[i]) continue;
      x += p.c[i] * cos_[i];
      y += p.c[i] * sin_[i];
    }
    return {x, y};
  }

  /// Sign of the signed area of (p, q, r).
  int orientation_sign(const LatticePoint& p, const LatticePoint& q, const LatticePoint& r) const {
    LatticePoint u = q - p, v = r - p;
    // Float filter.
    auto [ux, uy] = embed(u);
    auto [vx, vy] = embed(v);
    double cross = ux * vy - uy * vx;
    double scale = (mag1(u) + 1.0) * (mag1(v) + 1.0);
    if (std::fabs(cross) > 1e-11 * scale) return cross > 0 ? 1 : -1;
    return cross_sign_exact(u, v);
  }

  /// Sign of the euclidean dot product of embedded u, v.
  int dot_sign(const LatticePoint& u, const LatticePoint& v) const {
    auto [ux, uy] = embed(u);
    auto [vx, vy] = embed(v);
    double dot = ux * vx + uy * vy;
    double scale = (mag1(u) + 1.0) * (mag1(v) + 1.0);
    if (std::fabs(dot) > 1e-11 * scale) return dot > 0 ? 1 : -1;
    return dot_sign_exact(u, v);
  }

  /// p on the closed segment [a, b]; exact.
  bool on_segment(const LatticePoint& p, const LatticePoint& a, const LatticePoint& b) const {
    if (orientation_sign(a, b, p) != 0) return false;
    return dot_sign(p - a, b - a) >= 0 && dot_sign(p - b, a - b) >= 0;
  }

  SegRel segment_relation(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c,
                          const LatticePoint& d) const {
    bool ac = a == c, ad = a == d, bc = b == c, bd = b == d;
    if ((ac && bd) || (ad && bc)) return SegRel::Equal;
    int o1 = orientation_sign(a, b, c);
    int o2 = orientation_sign(a, b, d);
    if (o1 == 0 && o2 == 0) {
      // Same line: compare 1D projections on the direction of ab.
      LatticePoint dir = b - a;
      LatticePoint lo = c, hi = d;
      if (dot_sign(d - c, dir) < 0) std::swap(lo, hi);
      int s1 = dot_sign(b - lo, dir);
      int s2 = dot_sign(hi - a, dir);
      if (s1 > 0 && s2 > 0) return SegRel::CollinearOverlap;
      if (s1 == 0 || s2 == 0) return SegRel::SharedEndpoint;
      return SegRel::Disjoint;
    }
    if (ac || ad || bc || bd) return SegRel::SharedEndpoint;
    int o3 = orientation_sign(c, d, a);
    int o4 = orientation_sign(c, d, b);
    if (o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0)
      return (o1 != o2 && o3 != o4) ? SegRel::Crossing : SegRel::Disjoint;
    // Exactly one collinear endpoint: a T-junction when it lies inside
    // the other segment, otherwise no contact at all.
    if (o1 == 0) return between(c, a, b) ? SegRel::Touching : SegRel::Disjoint;
    if (o2 == 0) return between(d, a, b) ? SegRel::Touching : SegRel::Disjoint;
    if (o3 == 0) return between(a, c, d) ? SegRel::Touching : SegRel::Disjoint;
    return between(b, c, d) ? SegRel::Touching : SegRel::Disjoint;
  }

  /// Open-interior intersection test for CCW triangles (separating axis).
  bool interiors_overlap(const std::array<LatticePoint, 3>& t1,
                         const std::array<LatticePoint, 3>& t2) const {
    return !separated(t1, t2) && !separated(t2, t1);
  }

  bool point_in_closed_triangle(const std::array<LatticePoint, 3>& t, const LatticePoint& p) const {
    for (int i = 0; i < 3; ++i)
      if (orientation_sign(t[i], t[(i + 1) % 3], p) < 0) return false;
    return true;
  }

 private:
  using Poly = std::array<int64_t, 2 * kMaxDeg - 1>;

  static double mag1(const LatticePoint& p) {
    double m = 0;
    for (auto x : p.c) m += std::fabs(static_cast<double>(x));
    return m;
  }

  bool within_guard(const LatticePoint& p) const {
    for (auto x : p.c)
      if (std::llabs(x) > kGuard) return false;
    return true;
  }

  // 2*x-coordinate and y-coordinate/s as integer field vectors.
  void coords64(const LatticePoint& p, Poly& x2, Poly& y) const {
    x2.fill(0);
    y.fill(0);
    for (int i = 0; i <= n_ - 2; ++i) {
      int64_t w = p.c[i];
      if (!w) continue;
      for (int j = 0; j < d_; ++j) {
        x2[j] += w * dx_[i][j];
        y[j] += w * dy_[i][j];
      }
    }
  }

  void mul_reduce(const Poly& a, const Poly& b, Poly& out) const {
    Poly prod{};
    for (int i = 0; i < d_; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < d_; ++j) {
        if (!b[j]) continue;
        prod[i + j] += a[i] * b[j];
      }
    }
    for (int i = 2 * d_ - 2; i >= d_; --i) {
      int64_t f = prod[i];
      if (!f) continue;
      prod[i] = 0;
      for (int j = 0; j < d_; ++j) prod[i - d_ + j] -= f * qn_[j];
    }
    out = prod;
  }

  int sign64(const Poly& e) const {
    bool zero = true;
    for (int i = 0; i < d_; ++i)
      if (e[i]) { zero = false; break; }
    if (zero) return 0;
    std::array<int64_t, kMaxDeg> c{};
    for (int i = 0; i < d_; ++i) c[i] = e[i];
    return K_.sign(K_.from_int_coeffs(std::span<const int64_t>(c.data(), d_)));
  }

  int cross_sign_exact(const LatticePoint& u, const LatticePoint& v) const {
    if (within_guard(u) && within_guard(v)) {
      Poly ux, uy, vx, vy, p1, p2;
      coords64(u, ux, uy);
      coords64(v, vx, vy);
      mul_reduce(ux, vy, p1);
      mul_reduce(vx, uy, p2);
      for (int i = 0; i < d_; ++i) p1[i] -= p2[i];
      return sign64(p1);
    }
    FieldElement e = x2_field(u) * y_field(v) - x2_field(v) * y_field(u);
    return K_.sign(e);
  }

  int dot_sign_exact(const LatticePoint& u, const LatticePoint& v) const {
    if (within_guard(u) && within_guard(v)) {
      Poly ux, uy, vx, vy, p1, p2, p3;
      coords64(u, ux, uy);
      coords64(v, vx, vy);
      mul_reduce(ux, vx, p1);
      mul_reduce(uy, vy, p2);
      Poly s2{};
      for (int i = 0; i < d_; ++i) s2[i] = four_s2_[i];
      mul_reduce(p2, s2, p3);
      for (int i = 0; i < d_; ++i) p1[i] += p3[i];
      return sign64(p1);
    }
    FieldElement four_s2 = K_.from_rational(2) - K_.length(3) + K_.length(1);
    FieldElement e = x2_field(u) * x2_field(v) + four_s2 * y_field(u) * y_field(v);
    return K_.sign(e);
  }

  FieldElement x2_field(const LatticePoint& p) const {
    FieldElement e = K_.zero();
    for (int i = 0; i <= n_ - 2; ++i) {
      if (!p.c[i]) continue;
      FieldElement two_cos = (i == 0) ? K_.one() * Rat(2) : K_.length(i + 1) - K_.length(i - 1);
      e = e + two_cos * Rat(static_cast<long>(p.c[i]));
    }
    return e;
  }

  FieldElement y_field(const LatticePoint& p) const {
    FieldElement e = K_.zero();
    for (int i = 1; i <= n_ - 2; ++i)
      if (p.c[i]) e = e + K_.length(i) * Rat(static_cast<long>(p.c[i]));
    return e;
  }

  /// p strictly between a and b, assuming p collinear with them and
  /// distinct from both.
  bool between(const LatticePoint& p, const LatticePoint& a, const LatticePoint& b) const {
    return dot_sign(p - a, b - a) > 0 && dot_sign(p - b, a - b) > 0;
  }

  bool separated(const std::array<LatticePoint, 3>& t1, const std::array<LatticePoint, 3>& t2) const {
    for (int i = 0; i < 3; ++i) {
      const LatticePoint& p = t1[i];
      const LatticePoint& q = t1[(i + 1) % 3];
      bool all_out = true;
      for (int j = 0; j < 3; ++j)
        if (orientation_sign(p, q, t2[j]) > 0) { all_out = false; break; }
      if (all_out) return true;
    }
    return false;
  }

  const NumberField& K_;
  int n_, d_;
  std::vector<double> cos_, sin_;
  std::vector<std::array<int64_t, kMaxDeg>> dx_, dy_;
  std::array<int64_t, kMaxDeg> four_s2_{};
  std::array<int64_t, kMaxDeg> qn_{};
};

}  // namespace subsearch
