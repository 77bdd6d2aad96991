#pragma once

// Integer lattice model of tile vertices.
//
// A point is an integer combination of the direction vectors
// u_i = (cos(i*pi/n), sin(i*pi/n)), i = 0..n-2. For prime n this
// representation is unique. Rotation by pi/n, reflection across the
// x-axis, and scaling by any integer combination of diagonal lengths
// all act as integer maps via the relations u_{i+n} = -u_i and
// u_{n-1} = sum_j (-1)^(n-2-j) u_j (the 2n-th cyclotomic relation).

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "subsearch/matrices.hpp"

namespace subsearch {

struct LatticePoint {
  std::vector<int64_t> c;

  LatticePoint() = default;
  explicit LatticePoint(int n) : c(static_cast<size_t>(n) - 1, 0) {}

  bool operator==(const LatticePoint& o) const { return c == o.c; }
  bool operator!=(const LatticePoint& o) const { return c != o.c; }
  bool operator<(const LatticePoint& o) const { return c < o.c; }

  LatticePoint operator+(const LatticePoint& o) const {
    LatticePoint r(*this);
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
    return r;
  }
  LatticePoint operator-(const LatticePoint& o) const {
    LatticePoint r(*this);
    for (size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
    return r;
  }
  LatticePoint operator-() const {
    LatticePoint r(*this);
    for (auto& x : r.c) x = -x;
    return r;
  }

  bool is_zero() const {
    for (auto x : c)
      if (x) return false;
    return true;
  }

  std::string str() const {
    std::string s = "(";
    for (size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s + ")";
  }
};

struct LatticePointHash {
  size_t operator()(const LatticePoint& p) const {
    size_t h = 1469598103934665603ull;
    for (auto x : p.c) {
      h ^= static_cast<size_t>(x);
      h *= 1099511628211ull;
    }
    return h;
  }
};

/// Accumulate w * u_i into p, reducing the direction index through
/// u_{i+n} = -u_i and expanding u_{n-1} by the cyclotomic relation.
inline void add_direction(LatticePoint& p, int n, int i, int64_t w) {
  if (w == 0) return;
  i %= 2 * n;
  if (i < 0) i += 2 * n;
  if (i >= n) {
    i -= n;
    w = -w;
  }
  if (i <= n - 2) {
    p.c[i] += w;
    return;
  }
  // i == n-1: u_{n-1} = sum_j (-1)^(n-2-j) u_j
  for (int j = 0; j <= n - 2; ++j) p.c[j] += ((n - 2 - j) % 2 == 0) ? w : -w;
}

/// Lattice representation of a_k * u_i, via
/// a_k u_i = sum_{j=0}^{k-1} u_{i-k+1+2j}.
inline LatticePoint scaled_direction(int n, int k, int i) {
  LatticePoint p(n);
  for (int j = 0; j < k; ++j) add_direction(p, n, i - k + 1 + 2 * j, 1);
  return p;
}

inline LatticePoint rotate1(int n, const LatticePoint& p) {
  LatticePoint r(n);
  for (int i = 0; i <= n - 2; ++i) add_direction(r, n, i + 1, p.c[i]);
  return r;
}

inline LatticePoint rotate(int n, const LatticePoint& p, int steps) {
  steps %= 2 * n;
  if (steps < 0) steps += 2 * n;
  LatticePoint r = p;
  if (steps >= n) {
    r = -r;
    steps -= n;
  }
  for (int s = 0; s < steps; ++s) r = rotate1(n, r);
  return r;
}

/// Reflection across the x-axis: u_i -> u_{2n-i}.
inline LatticePoint reflect(int n, const LatticePoint& p) {
  LatticePoint r(n);
  for (int i = 0; i <= n - 2; ++i) add_direction(r, n, (2 * n - i) % (2 * n), p.c[i]);
  return r;
}

/// x -> R_rot (F^flip x) + shift, rotation by rot*pi/n, F the x-axis
/// reflection applied before the rotation.
struct RigidMotion {
  int rot = 0;
  bool flip = false;
  LatticePoint shift;

  RigidMotion() = default;
  RigidMotion(int n) : shift(n) {}
  RigidMotion(int r, bool f, LatticePoint s) : rot(r), flip(f), shift(std::move(s)) {}

  bool operator==(const RigidMotion& o) const {
    return rot == o.rot && flip == o.flip && shift == o.shift;
  }
};

inline LatticePoint apply_linear(int n, const RigidMotion& g, const LatticePoint& p) {
  return rotate(n, g.flip ? reflect(n, p) : p, g.rot);
}

inline LatticePoint apply_motion(int n, const RigidMotion& g, const LatticePoint& p) {
  return apply_linear(n, g, p) + g.shift;
}

/// Direction index image under the linear part: delta -> rot + delta,
/// or rot - delta when flipped.
inline int motion_direction(int n, const RigidMotion& g, int delta) {
  int r = g.flip ? g.rot - delta : g.rot + delta;
  r %= 2 * n;
  return r < 0 ? r + 2 * n : r;
}

inline RigidMotion compose(int n, const RigidMotion& g, const RigidMotion& h) {
  RigidMotion r;
  r.rot = g.flip ? g.rot - h.rot : g.rot + h.rot;
  r.rot %= 2 * n;
  if (r.rot < 0) r.rot += 2 * n;
  r.flip = g.flip != h.flip;
  r.shift = apply_linear(n, g, h.shift) + g.shift;
  return r;
}

inline RigidMotion invert(int n, const RigidMotion& g) {
  RigidMotion r;
  r.flip = g.flip;
  r.rot = g.flip ? g.rot : -g.rot;
  r.rot %= 2 * n;
  if (r.rot < 0) r.rot += 2 * n;
  r.shift = -apply_linear(n, r, g.shift);
  return r;
}

/// Scaling by an inflation factor acts as an integer matrix; expanded
/// term by term through scaled_direction.
inline LatticePoint scale_by(int n, const InflationFactor& lambda, const LatticePoint& p) {
  LatticePoint r(n);
  for (size_t k = 0; k < lambda.coeffs.size(); ++k) {
    long ck = lambda.coeffs[k];
    if (ck == 0) continue;
    for (int i = 0; i <= n - 2; ++i) {
      if (p.c[i] == 0) continue;
      for (int j = 0; j < static_cast<int>(k) + 1; ++j)
        add_direction(r, n, i - static_cast<int>(k) + 2 * j, ck * p.c[i]);
    }
  }
  return r;
}

}  // namespace subsearch
