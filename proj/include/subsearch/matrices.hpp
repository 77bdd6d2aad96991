#pragma once

// Derived matrices over Q(a2): the length substitution matrix X, triangle
// area ratios, the tile substitution matrix M with its admissibility
// screen, and the PV/unit classification of inflation factors.

#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "subsearch/field.hpp"

namespace subsearch {

/// Angles (k1 <= k2 <= k3), k1+k2+k3 = n, of a triangle with angles k*pi/n.
struct AngleTriple {
  int k1 = 0, k2 = 0, k3 = 0;

  AngleTriple() = default;
  AngleTriple(int a, int b, int c) : k1(a), k2(b), k3(c) {
    if (k1 > k2) std::swap(k1, k2);
    if (k2 > k3) std::swap(k2, k3);
    if (k1 > k2) std::swap(k1, k2);
  }

  void validate(int n) const {
    if (k1 < 1 || k1 + k2 + k3 != n)
      throw std::invalid_argument("invalid angle triple (" + std::to_string(k1) + "," +
                                  std::to_string(k2) + "," + std::to_string(k3) + ") for n=" +
                                  std::to_string(n));
  }

  bool operator==(const AngleTriple& o) const { return k1 == o.k1 && k2 == o.k2 && k3 == o.k3; }
  bool operator<(const AngleTriple& o) const {
    return std::tie(k1, k2, k3) < std::tie(o.k1, o.k2, o.k3);
  }
  int operator[](int i) const { return i == 0 ? k1 : (i == 1 ? k2 : k3); }

  std::string str() const {
    return "T(" + std::to_string(k1) + "," + std::to_string(k2) + "," + std::to_string(k3) + ")";
  }
};

/// lambda = sum_k coeffs[k-1] * a_k, a non-negative integer combination
/// of the diagonal lengths a_1 .. a_{(n-1)/2}.
struct InflationFactor {
  std::vector<long> coeffs;

  explicit InflationFactor(std::vector<long> c) : coeffs(std::move(c)) {
    bool any = false;
    for (long x : coeffs) {
      if (x < 0) throw std::invalid_argument("inflation factor coefficients must be non-negative");
      if (x > 0) any = true;
    }
    if (!any) throw std::invalid_argument("inflation factor must have a positive coefficient");
  }

  FieldElement value(const NumberField& K) const {
    if (static_cast<int>(coeffs.size()) > K.degree())
      throw std::invalid_argument("inflation factor has more coefficients than edge lengths");
    FieldElement v = K.zero();
    for (size_t k = 0; k < coeffs.size(); ++k)
      if (coeffs[k] != 0) v = v + K.length(static_cast<int>(k) + 1) * Rat(coeffs[k]);
    return v;
  }

  std::string str() const {
    std::string s;
    for (size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] == 0) continue;
      if (!s.empty()) s += " + ";
      if (coeffs[k] != 1) s += std::to_string(coeffs[k]) + "*";
      s += "a" + std::to_string(k + 1);
    }
    return s.empty() ? "0" : s;
  }
};

/// Matrix of multiplication by b on the power basis 1, a2, ..., a2^(d-1);
/// this is p_b(A) for the companion matrix A of q_n.
inline RatMatrix mult_matrix(const NumberField& K, const FieldElement& b) {
  int d = K.degree();
  RatMatrix m(d, d);
  FieldElement col = b;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) m.at(i, j) = col.coeff(i);
    if (j + 1 < d) col = col * K.generator();
  }
  return m;
}

/// L_n: columns are the power-basis vectors of a_1 .. a_d. Upper
/// triangular with unit diagonal for prime n, hence invertible.
inline RatMatrix length_basis_matrix(const NumberField& K) {
  int d = K.degree();
  RatMatrix L(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) L.at(i, j) = K.length(j + 1).coeff(i);
  return L;
}

/// X = L^-1 p_lambda(A) L: column j expresses lambda*a_{j+1} in the
/// length basis a_1 .. a_d.
inline RatMatrix length_matrix(const NumberField& K, const InflationFactor& lambda) {
  RatMatrix L = length_basis_matrix(K);
  return L.inverse() * mult_matrix(K, lambda.value(K)) * L;
}

/// Area of T(k1,k2,k3) divided by the area of the narrow triangle
/// T(1,1,n-2). Narrow triangles recurse through the similar-triangle
/// identity; non-narrow ones reduce to two narrow areas.
inline FieldElement area_ratio(const NumberField& K, const AngleTriple& t) {
  t.validate(K.n());
  int n = K.n();
  if (t.k1 == 1) {
    if (t.k2 == 1) return K.one();
    int k = t.k2;
    return K.length(k) * K.length(k) - area_ratio(K, AngleTriple(1, k - 1, n - k));
  }
  int k = t.k1, l = t.k2;
  return K.length(k) * K.length(k) * area_ratio(K, AngleTriple(1, l, n - l - 1)) -
         K.length(l) * K.length(l) * area_ratio(K, AngleTriple(1, k - 1, n - k));
}

/// All isometry classes of triangles with angles k*pi/n, sorted.
inline std::vector<AngleTriple> all_triples(int n) {
  std::vector<AngleTriple> out;
  for (int a = 1; 3 * a <= n; ++a)
    for (int b = a; a + 2 * b <= n; ++b) out.emplace_back(a, b, n - a - b);
  return out;
}

/// The special prototile set: all triples with at least one edge of
/// maximum length, i.e. an angle of (n-1)/2 or (n+1)/2. There are
/// exactly (n-1)/2 of them.
inline std::vector<AngleTriple> special_set(int n) {
  std::vector<AngleTriple> out;
  int lo = (n - 1) / 2, hi = (n + 1) / 2;
  for (const AngleTriple& t : all_triples(n))
    if (t.k1 == lo || t.k2 == lo || t.k3 == lo || t.k1 == hi || t.k2 == hi || t.k3 == hi)
      out.push_back(t);
  return out;
}

/// M = B^-1 p_lambda(A)^2 B, with B the area-vector basis of the chosen
/// prototiles. Admissible when every entry is a non-negative integer;
/// otherwise the offending entries are reported and no search may start.
struct SubstitutionMatrix {
  bool basis_ok = false;
  bool admissible = false;
  RatMatrix raw;                                  // exact entries
  std::vector<std::vector<long>> m;               // integer form when admissible
  std::vector<std::tuple<int, int, Rat>> offenders;
  std::string error;

  std::vector<long> column(int j) const {
    std::vector<long> c(m.size());
    for (size_t i = 0; i < m.size(); ++i) c[i] = m[i][j];
    return c;
  }
};

inline SubstitutionMatrix substitution_matrix(const NumberField& K,
                                              const std::vector<AngleTriple>& prototiles,
                                              const InflationFactor& lambda) {
  SubstitutionMatrix out;
  int d = K.degree();
  int m = static_cast<int>(prototiles.size());
  if (m != d) {
    out.error = "prototile count " + std::to_string(m) + " does not match field degree " +
                std::to_string(d) + "; areas cannot form a basis";
    return out;
  }
  RatMatrix B(d, d);
  for (int j = 0; j < m; ++j) {
    FieldElement a = area_ratio(K, prototiles[j]);
    for (int i = 0; i < d; ++i) B.at(i, j) = a.coeff(i);
  }
  RatMatrix Binv;
  try {
    Binv = B.inverse();
  } catch (const std::domain_error&) {
    out.error = "areas are not a basis (B_PT singular)";
    return out;
  }
  out.basis_ok = true;
  FieldElement lam = lambda.value(K);
  out.raw = Binv * mult_matrix(K, lam * lam) * B;
  out.admissible = true;
  out.m.assign(m, std::vector<long>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Rat& e = out.raw.at(i, j);
      if (!is_integer(e) || e < 0) {
        out.admissible = false;
        out.offenders.emplace_back(i, j, e);
      } else {
        out.m[i][j] = static_cast<long>(e.get_num().get_si());
      }
    }
  if (!out.admissible) {
    out.m.clear();
    out.error = "substitution matrix has non-integer or negative entries";
  }
  return out;
}

/// Numeric conjugates of lambda plus the exact unit test. For prime n
/// the conjugates of a2 are 2cos(k*pi/n) for odd k, with k = 1 giving
/// lambda itself; PV means every other conjugate lies strictly inside
/// the unit circle.
struct FactorClassification {
  double value = 0;
  std::vector<double> conjugates;  // excluding the value itself
  bool pv = false;
  bool unit = false;
  Rat norm;
  double unit_circle_margin = 0;   // min over conjugates of | |c| - 1 |
};

inline FactorClassification classify_factor(const NumberField& K, const InflationFactor& lambda) {
  FactorClassification out;
  FieldElement lam = lambda.value(K);
  int n = K.n();
  for (int k = 1; k < n; k += 2) {
    double root = 2.0 * std::cos(k * M_PI / n);
    double v = 0, xp = 1;
    for (int i = 0; i < K.degree(); ++i) {
      v += lam.coeff(i).get_d() * xp;
      xp *= root;
    }
    if (k == 1) out.value = v;
    else out.conjugates.push_back(v);
  }
  out.pv = out.value > 1.0;
  out.unit_circle_margin = 1e300;
  for (double c : out.conjugates) {
    if (std::fabs(c) >= 1.0) out.pv = false;
    out.unit_circle_margin = std::min(out.unit_circle_margin, std::fabs(std::fabs(c) - 1.0));
  }
  out.norm = mult_matrix(K, lam).det();
  out.unit = (out.norm == 1 || out.norm == -1);
  return out;
}

}  // namespace subsearch
