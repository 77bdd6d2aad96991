#pragma once

// Exact arithmetic in Q(a2), a2 = 2cos(pi/n) for odd prime n.
//
// Elements are rational coefficient vectors over the power basis
// 1, a2, ..., a2^(d-1) with d = (n-1)/2, reduced modulo the minimal
// polynomial q_n. The diagonal lengths a_k of the regular n-gon obey
// a_{k+1} = a2*a_k - a_{k-1}, and q_n is obtained from the coincidence
// of the two middle diagonals, a_{(n+1)/2} = a_{(n-1)/2}.
//
// Sign evaluation is exact: the zero test is the zero vector, and a
// nonzero sign is decided by interval evaluation at a rational bracket
// of the root, bisected until the interval excludes zero.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "subsearch/numeric.hpp"

namespace subsearch {

class NumberField;

class FieldElement {
 public:
  FieldElement() : field_(nullptr) {}
  FieldElement(const NumberField* field, std::vector<Rat> coeffs)
      : field_(field), c_(std::move(coeffs)) {}

  const NumberField& field() const { return *field_; }
  const std::vector<Rat>& coeffs() const { return c_; }
  const Rat& coeff(int i) const { return c_[i]; }
  int degree_bound() const { return static_cast<int>(c_.size()); }

  bool is_zero() const {
    for (const Rat& r : c_)
      if (r != 0) return false;
    return true;
  }

  bool operator==(const FieldElement& o) const { return c_ == o.c_; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement operator+(const FieldElement& o) const {
    FieldElement r(*this);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
  }
  FieldElement operator-(const FieldElement& o) const {
    FieldElement r(*this);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
  }
  FieldElement operator-() const {
    FieldElement r(*this);
    for (Rat& x : r.c_) x = -x;
    return r;
  }
  FieldElement operator*(const FieldElement& o) const;  // reduced mod q_n
  FieldElement operator*(const Rat& s) const {
    FieldElement r(*this);
    for (Rat& x : r.c_) x *= s;
    return r;
  }

  int sign() const;
  double value() const;

  bool is_integral() const {
    for (const Rat& r : c_)
      if (!is_integer(r)) return false;
    return true;
  }

  std::string str() const {
    std::string s;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      if (!first) s += " + ";
      s += c_[i].get_str();
      if (i >= 1) s += "*a2";
      if (i >= 2) s += "^" + std::to_string(i);
      first = false;
    }
    return first ? "0" : s;
  }

 private:
  const NumberField* field_;
  std::vector<Rat> c_;
};

inline bool is_odd_prime(long n) {
  if (n < 3 || n % 2 == 0) return false;
  for (long p = 3; p * p <= n; p += 2)
    if (n % p == 0) return false;
  return true;
}

/// The field Q(a2) together with the length table a_0..a_n.
/// Immutable after construction; elements keep a raw pointer to their
/// field, which therefore must outlive them (the field object is
/// neither copyable nor movable).
class NumberField {
 public:
  explicit NumberField(int n) : n_(n) {
    if (!is_odd_prime(n) || n < 5)
      throw std::invalid_argument("order of symmetry must be an odd prime >= 5, got " +
                                  std::to_string(n));
    d_ = (n - 1) / 2;
    build_min_poly();
    build_root_bracket();
    build_lengths();
  }

  NumberField(const NumberField&) = delete;
  NumberField& operator=(const NumberField&) = delete;

  int n() const { return n_; }
  int degree() const { return d_; }

  /// Coefficients of q_n, constant term first, monic of degree d.
  const std::vector<Int>& min_poly() const { return qn_; }

  /// Companion matrix of q_n.
  RatMatrix companion() const {
    RatMatrix a(d_, d_);
    for (int i = 1; i < d_; ++i) a.at(i, i - 1) = 1;
    for (int i = 0; i < d_; ++i) a.at(i, d_ - 1) = Rat(-qn_[i]);
    return a;
  }

  double root_approx() const { return root_d_; }

  FieldElement zero() const { return FieldElement(this, std::vector<Rat>(d_)); }
  FieldElement one() const { return from_rational(1); }
  FieldElement from_rational(const Rat& r) const {
    std::vector<Rat> c(d_);
    c[0] = r;
    return FieldElement(this, std::move(c));
  }
  FieldElement generator() const { return length(2); }  // a2 itself

  FieldElement from_int_coeffs(std::span<const int64_t> c) const {
    std::vector<Rat> v(d_);
    for (size_t i = 0; i < c.size() && i < static_cast<size_t>(d_); ++i) v[i] = Rat(static_cast<long>(c[i]));
    return FieldElement(this, std::move(v));
  }

  /// a_k for 0 <= k <= n; a_0 = 0, a_1 = 1, a_k = a_{n-k}.
  const FieldElement& length(int k) const {
    if (k < 0 || k > n_) throw std::out_of_range("length index out of range 0..n");
    return lengths_[k];
  }

  FieldElement mul(const FieldElement& x, const FieldElement& y) const {
    std::vector<Rat> prod(2 * d_ - 1);
    for (int i = 0; i < d_; ++i) {
      if (x.coeff(i) == 0) continue;
      for (int j = 0; j < d_; ++j) {
        if (y.coeff(j) == 0) continue;
        prod[i + j] += x.coeff(i) * y.coeff(j);
      }
    }
    reduce(prod);
    prod.resize(d_);
    return FieldElement(this, std::move(prod));
  }

  /// Reduce a coefficient vector of any length modulo the monic q_n.
  void reduce(std::vector<Rat>& c) const {
    for (int i = static_cast<int>(c.size()) - 1; i >= d_; --i) {
      if (c[i] == 0) continue;
      Rat f = c[i];
      c[i] = 0;
      for (int j = 0; j < d_; ++j) c[i - d_ + j] -= f * Rat(qn_[j]);
    }
    if (static_cast<int>(c.size()) < d_) c.resize(d_);
  }

  int sign(const FieldElement& e) const {
    if (e.is_zero()) return 0;

    // Float filter with a crude but conservative error bound.
    double v = 0, mag = 0, xp = 1;
    for (int i = 0; i < d_; ++i) {
      double ci = e.coeff(i).get_d();
      v += ci * xp;
      mag += std::fabs(ci) * xp;
      xp *= root_d_;
    }
    if (std::fabs(v) > mag * 1e-11 + 1e-280) return v > 0 ? 1 : -1;

    // Exact: interval Horner over a shrinking rational bracket.
    Rat lo = root_lo_, hi = root_hi_;
    for (int round = 0; round < 64; ++round) {
      auto [vlo, vhi] = interval_eval(e.coeffs(), lo, hi);
      if (vlo > 0) return 1;
      if (vhi < 0) return -1;
      bisect(lo, hi, 32);
    }
    throw std::logic_error("field sign: bracket refinement failed to separate a nonzero element");
  }

  double value(const FieldElement& e) const {
    double v = 0, xp = 1;
    for (int i = 0; i < d_; ++i) {
      v += e.coeff(i).get_d() * xp;
      xp *= root_d_;
    }
    return v;
  }

  /// Exact evaluation of q_n at a rational point.
  Rat eval_min_poly(const Rat& x) const {
    Rat v = 1;  // monic leading coefficient
    for (int i = d_ - 1; i >= 0; --i) v = v * x + Rat(qn_[i]);
    return v;
  }

 private:
  void build_min_poly() {
    // p_k = polynomial of a_k in x = a2, unreduced: p_{k+1} = x p_k - p_{k-1}.
    std::vector<std::vector<Int>> p(n_ + 2);
    p[0] = {};
    p[1] = {1};
    for (int k = 1; k <= n_; ++k) {
      std::vector<Int> next(p[k].size() + 1);
      for (size_t i = 0; i < p[k].size(); ++i) next[i + 1] = p[k][i];
      for (size_t i = 0; i < p[k - 1].size(); ++i) next[i] -= p[k - 1][i];
      p[k + 1] = std::move(next);
    }
    std::vector<Int> q = p[(n_ + 1) / 2];
    for (size_t i = 0; i < p[(n_ - 1) / 2].size(); ++i) q[i] -= p[(n_ - 1) / 2][i];
    while (!q.empty() && q.back() == 0) q.pop_back();
    if (static_cast<int>(q.size()) != d_ + 1 || q.back() != 1)
      throw std::logic_error("minimal polynomial: unexpected degree or leading coefficient");
    qn_ = std::move(q);
  }

  void build_root_bracket() {
    root_d_ = 2.0 * std::cos(M_PI / n_);
    // The nearest other root of q_n is 2cos(3pi/n), far beyond 1e-6.
    Rat lo(root_d_ - 1e-6), hi(root_d_ + 1e-6);
    lo.canonicalize();
    hi.canonicalize();
    sign_at_lo_ = sgn(eval_min_poly(lo));
    int shi = sgn(eval_min_poly(hi));
    if (sign_at_lo_ == 0 || shi == 0 || sign_at_lo_ == shi)
      throw std::logic_error("root bracket: failed to bracket 2cos(pi/n)");
    root_lo_ = lo;
    root_hi_ = hi;
    bisect(root_lo_, root_hi_, 80);
  }

  void build_lengths() {
    lengths_.reserve(n_ + 1);
    lengths_.push_back(zero());                    // a_0
    lengths_.push_back(one());                     // a_1
    std::vector<Rat> x(d_);
    if (d_ > 1) x[1] = 1;
    else x[0] = Rat(-qn_[0]);  // d = 1 cannot happen for n >= 5, kept for form
    FieldElement a2(this, x);
    lengths_.push_back(a2);                        // a_2
    for (int k = 2; k < n_; ++k)
      lengths_.push_back(mul(a2, lengths_[k]) - lengths_[k - 1]);
    if (!lengths_[n_].is_zero())
      throw std::logic_error("length table: a_n != 0, minimal polynomial is wrong");
    for (int k = 1; k < n_; ++k)
      if (lengths_[k] != lengths_[n_ - k])
        throw std::logic_error("length table: a_k != a_{n-k}");
  }

  static int sgn(const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

  void bisect(Rat& lo, Rat& hi, int steps) const {
    for (int s = 0; s < steps; ++s) {
      Rat mid = (lo + hi) / 2;
      if (sgn(eval_min_poly(mid)) == sign_at_lo_) lo = mid;
      else hi = mid;
    }
  }

  std::pair<Rat, Rat> interval_eval(const std::vector<Rat>& c, const Rat& lo, const Rat& hi) const {
    Rat vlo = 0, vhi = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
      Rat p1 = vlo * lo, p2 = vlo * hi, p3 = vhi * lo, p4 = vhi * hi;
      Rat mn = std::min(std::min(p1, p2), std::min(p3, p4));
      Rat mx = std::max(std::max(p1, p2), std::max(p3, p4));
      vlo = mn + c[i];
      vhi = mx + c[i];
    }
    return {vlo, vhi};
  }

  int n_, d_;
  std::vector<Int> qn_;
  std::vector<FieldElement> lengths_;
  Rat root_lo_, root_hi_;
  int sign_at_lo_ = 0;
  double root_d_ = 0;
};

inline FieldElement FieldElement::operator*(const FieldElement& o) const {
  return field_->mul(*this, o);
}

inline int FieldElement::sign() const { return field_->sign(*this); }
inline double FieldElement::value() const { return field_->value(*this); }

}  // namespace subsearch
