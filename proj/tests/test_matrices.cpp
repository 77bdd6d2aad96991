#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "subsearch/matrices.hpp"

using namespace subsearch;

namespace {
std::vector<std::vector<long>> to_ints(const RatMatrix& m) {
  std::vector<std::vector<long>> out(m.rows(), std::vector<long>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      REQUIRE(is_integer(m.at(i, j)));
      out[i][j] = m.at(i, j).get_num().get_si();
    }
  return out;
}

// Independent numeric oracle for triangle areas: circumradius-normalized
// side lengths a_k = sin(k pi/n)/sin(pi/n), area = (1/2) a_k1 a_k2 sin(k3 pi/n).
double area_numeric(int n, const AngleTriple& t) {
  auto len = [&](int k) { return std::sin(k * M_PI / n) / std::sin(M_PI / n); };
  return 0.5 * len(t.k1) * len(t.k2) * std::sin(t.k3 * M_PI / n);
}
}  // namespace

TEST_CASE("length substitution matrix X") {
  NumberField K7(7);
  RatMatrix X = length_matrix(K7, InflationFactor({1, 1, 0}));
  CHECK(to_ints(X) == std::vector<std::vector<long>>({{1, 1, 0}, {1, 1, 1}, {0, 1, 2}}));

  NumberField K5(5);
  RatMatrix X5 = length_matrix(K5, InflationFactor({1, 1}));
  CHECK(to_ints(X5) == std::vector<std::vector<long>>({{1, 1}, {1, 2}}));

  // lambda = a_1 scales by 1
  CHECK(length_matrix(K7, InflationFactor({1})) == RatMatrix::identity(3));
}

TEST_CASE("L X = p_lambda(A) L exactly") {
  for (int n : {5, 7, 11}) {
    NumberField K(n);
    std::mt19937 rng(n);
    std::uniform_int_distribution<long> coeff(0, 3);
    for (int it = 0; it < 20; ++it) {
      std::vector<long> c(K.degree());
      long s = 0;
      for (auto& x : c) { x = coeff(rng); s += x; }
      if (s == 0) c[0] = 1;
      InflationFactor lam(c);
      RatMatrix L = length_basis_matrix(K);
      RatMatrix X = length_matrix(K, lam);
      CHECK(L * X == mult_matrix(K, lam.value(K)) * L);
    }
  }
}

TEST_CASE("area vectors") {
  NumberField K(7);
  CHECK(area_ratio(K, AngleTriple(1, 1, 5)) == K.one());
  CHECK(area_ratio(K, AngleTriple(1, 2, 4)) == K.length(3));  // a2^2 - 1
  FieldElement a223 = area_ratio(K, AngleTriple(2, 2, 3));
  CHECK(a223.coeffs() == std::vector<Rat>({-1, 1, 1}));  // a2^2 + a2 - 1
  CHECK_THROWS_AS(area_ratio(K, AngleTriple(1, 2, 3)), std::invalid_argument);
}

TEST_CASE("areas agree with the numeric oracle") {
  for (int n : {7, 11}) {
    NumberField K(n);
    double base = area_numeric(n, AngleTriple(1, 1, n - 2));
    for (const AngleTriple& t : all_triples(n)) {
      double expect = area_numeric(n, t) / base;
      CHECK(std::fabs(area_ratio(K, t).value() - expect) < 1e-9);
      CHECK(area_ratio(K, t).sign() == 1);
    }
  }
}

TEST_CASE("special prototile sets") {
  auto s7 = special_set(7);
  REQUIRE(s7.size() == 3);
  CHECK(s7[0] == AngleTriple(1, 2, 4));
  CHECK(s7[1] == AngleTriple(1, 3, 3));
  CHECK(s7[2] == AngleTriple(2, 2, 3));

  auto s5 = special_set(5);
  REQUIRE(s5.size() == 2);
  CHECK(s5[0] == AngleTriple(1, 1, 3));
  CHECK(s5[1] == AngleTriple(1, 2, 2));

  auto s11 = special_set(11);
  CHECK(s11.size() == 5);
  for (const AngleTriple& t : s11)
    CHECK((t.k1 == 5 || t.k2 == 5 || t.k3 == 5 || t.k1 == 6 || t.k2 == 6 || t.k3 == 6));
}

TEST_CASE("substitution matrix for the sevenfold special set") {
  NumberField K(7);
  auto M = substitution_matrix(K, special_set(7), InflationFactor({1, 1, 0}));
  REQUIRE(M.basis_ok);
  REQUIRE(M.admissible);
  CHECK(M.m == std::vector<std::vector<long>>({{3, 3, 5}, {1, 4, 3}, {2, 1, 3}}));
  CHECK(M.column(0) == std::vector<long>({3, 1, 2}));
}

TEST_CASE("substitution matrix for the fivefold special set") {
  NumberField K(5);
  InflationFactor lam({1, 1});
  auto M = substitution_matrix(K, special_set(5), lam);
  REQUIRE(M.admissible);
  CHECK(M.m == std::vector<std::vector<long>>({{2, 3}, {3, 5}}));
  // Oracle: trace = lambda^2 + conjugate(lambda^2) = 7, det = norm(lambda^2) = 1.
  CHECK(M.m[0][0] + M.m[1][1] == 7);
  CHECK(M.m[0][0] * M.m[1][1] - M.m[0][1] * M.m[1][0] == 1);
}

TEST_CASE("identity substitution for lambda = a_1") {
  NumberField K(7);
  auto M = substitution_matrix(K, special_set(7), InflationFactor({1, 0, 0}));
  REQUIRE(M.admissible);
  CHECK(M.m == std::vector<std::vector<long>>({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST_CASE("area conservation column by column") {
  for (int n : {5, 7}) {
    NumberField K(n);
    auto PT = special_set(n);
    std::vector<long> lc(K.degree(), 0);
    lc[0] = 1;
    lc[K.degree() - 1] = 1;
    InflationFactor lam(lc);
    auto M = substitution_matrix(K, PT, lam);
    REQUIRE(M.admissible);
    FieldElement lam2 = lam.value(K) * lam.value(K);
    for (size_t j = 0; j < PT.size(); ++j) {
      FieldElement lhs = lam2 * area_ratio(K, PT[j]);
      FieldElement rhs = K.zero();
      for (size_t i = 0; i < PT.size(); ++i)
        rhs = rhs + area_ratio(K, PT[i]) * Rat(M.m[i][j]);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("inadmissible combinations are reported with offenders") {
  NumberField K(7);
  std::vector<AngleTriple> PT = {AngleTriple(1, 1, 5), AngleTriple(1, 2, 4), AngleTriple(1, 3, 3)};
  auto M = substitution_matrix(K, PT, InflationFactor({1, 1, 0}));
  CHECK(M.basis_ok);
  CHECK_FALSE(M.admissible);
  CHECK_FALSE(M.offenders.empty());
  bool found = false;
  for (auto& [i, j, v] : M.offenders)
    if (i == 0 && j == 1 && v == -2) found = true;
  CHECK(found);

  auto bad = substitution_matrix(K, {AngleTriple(1, 2, 4)}, InflationFactor({1, 1, 0}));
  CHECK_FALSE(bad.basis_ok);
}

TEST_CASE("PV and unit classification matches the sevenfold factors") {
  NumberField K(7);
  auto c1 = classify_factor(K, InflationFactor({1, 1, 0}));  // 1 + a2
  CHECK(c1.unit);
  CHECK_FALSE(c1.pv);
  CHECK(c1.unit_circle_margin > 1e-6);

  auto c2 = classify_factor(K, InflationFactor({0, 1, 1}));  // a2 + a3
  CHECK(c2.unit);
  CHECK(c2.pv);
  CHECK(c2.unit_circle_margin > 1e-6);

  auto c3 = classify_factor(K, InflationFactor({1, 1, 1}));  // 1 + a2 + a3
  CHECK(c3.unit);
  CHECK(c3.pv);
  CHECK(c3.unit_circle_margin > 1e-6);

  auto c4 = classify_factor(K, InflationFactor({2, 1, 0}));  // 2 + a2: neither
  CHECK_FALSE(c4.unit);
  CHECK_FALSE(c4.pv);
  CHECK(c4.norm == 7);
}

TEST_CASE("inflation factor validation") {
  CHECK_THROWS_AS(InflationFactor({0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(InflationFactor({-1, 2}), std::invalid_argument);
  NumberField K(5);
  CHECK(std::fabs(InflationFactor({1, 1}).value(K).value() - 2.618034) < 1e-6);
}
