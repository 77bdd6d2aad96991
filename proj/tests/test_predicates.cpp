#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "subsearch/prototile.hpp"

using namespace subsearch;

namespace {
LatticePoint e(int n, int i) {
  LatticePoint p(n);
  p.c[i] = 1;
  return p;
}

LatticePoint random_point(int n, std::mt19937& rng, int lim = 5) {
  std::uniform_int_distribution<int> d(-lim, lim);
  LatticePoint p(n);
  for (auto& c : p.c) c = d(rng);
  return p;
}
}  // namespace

TEST_CASE("orientation sign basics") {
  NumberField K(7);
  GeomKernel g(K);
  LatticePoint o(7);
  CHECK(g.orientation_sign(o, e(7, 0), e(7, 1)) == 1);
  CHECK(g.orientation_sign(o, e(7, 0), e(7, 0) + e(7, 0)) == 0);
  CHECK(g.orientation_sign(o, e(7, 1), e(7, 0)) == -1);
}

TEST_CASE("orientation sign agrees with the float cross product") {
  for (int n : {5, 7, 11}) {
    NumberField K(n);
    GeomKernel g(K);
    std::mt19937 rng(n * 101);
    for (int it = 0; it < 3000; ++it) {
      LatticePoint p = random_point(n, rng), q = random_point(n, rng), r = random_point(n, rng);
      auto [px, py] = g.embed(p);
      auto [qx, qy] = g.embed(q);
      auto [rx, ry] = g.embed(r);
      double cross = (qx - px) * (ry - py) - (qy - py) * (rx - px);
      if (std::fabs(cross) > 1e-6) CHECK(g.orientation_sign(p, q, r) == (cross > 0 ? 1 : -1));
    }
  }
}

TEST_CASE("degenerate orientation cases are exact") {
  NumberField K(7);
  GeomKernel g(K);
  std::mt19937 rng(5);
  for (int it = 0; it < 200; ++it) {
    LatticePoint p = random_point(7, rng), q = random_point(7, rng);
    if (p == q) continue;
    // r on the line through p and q: r = p + 3(q - p)
    LatticePoint d = q - p;
    LatticePoint r = q + d + d;
    CHECK(g.orientation_sign(p, q, r) == 0);
  }
  // a_4-vector and a_3-vector along the same ray are collinear (a_4 = a_3 for n = 7)
  LatticePoint o(7);
  CHECK(g.orientation_sign(o, scaled_direction(7, 3, 2), scaled_direction(7, 4, 2)) == 0);
}

TEST_CASE("segment relations") {
  NumberField K(7);
  GeomKernel g(K);
  LatticePoint o(7);
  LatticePoint e0 = e(7, 0), e1 = e(7, 1), e2 = e(7, 2);
  LatticePoint two_e0 = e0 + e0, three_e0 = two_e0 + e0;

  CHECK(g.segment_relation(o, e0, o, e0) == SegRel::Equal);
  CHECK(g.segment_relation(o, e0, e0, o) == SegRel::Equal);
  CHECK(g.segment_relation(o, two_e0, e0, three_e0) == SegRel::CollinearOverlap);
  CHECK(g.segment_relation(o, e0, e0, e0 + e2) == SegRel::SharedEndpoint);
  CHECK(g.segment_relation(o, e0, e0, two_e0) == SegRel::SharedEndpoint);
  CHECK(g.segment_relation(o, e0, two_e0, three_e0) == SegRel::Disjoint);
  CHECK(g.segment_relation(o, e0, e1, e1 + e0) == SegRel::Disjoint);
  // proper crossing
  CHECK(g.segment_relation(-e1, e1, -e0 + e1 - e1, e0) == SegRel::Crossing);
  CHECK(g.segment_relation(-e1, e1, -e0, e0) == SegRel::Crossing);
  // T-junction: endpoint of one inside the other
  CHECK(g.segment_relation(o, two_e0, e0, e0 + e1) == SegRel::Touching);
  CHECK(g.segment_relation(e0, e0 + e1, o, two_e0) == SegRel::Touching);
  // collinear, contained
  CHECK(g.segment_relation(o, three_e0, e0, two_e0) == SegRel::CollinearOverlap);
}

TEST_CASE("triangle predicates") {
  NumberField K(7);
  GeomKernel g(K);
  Prototile P = canonical_prototile(g, AngleTriple(1, 2, 4));
  std::array<LatticePoint, 3> t1 = {P.verts[0], P.verts[1], P.verts[2]};
  CHECK(g.interiors_overlap(t1, t1));

  // Reflection across edge 0 (the segment v0-v1 on the x-axis) shares
  // exactly that edge; open interiors are disjoint.
  std::array<LatticePoint, 3> t2 = {reflect(7, P.verts[0]), reflect(7, P.verts[1]),
                                    reflect(7, P.verts[2])};
  std::swap(t2[0], t2[1]);  // restore CCW
  CHECK_FALSE(g.interiors_overlap(t1, t2));

  // Touching at a single vertex only.
  LatticePoint far = P.verts[2] + P.verts[2];
  std::array<LatticePoint, 3> t3 = {P.verts[2], far, far + e(7, 3)};
  CHECK_FALSE(g.interiors_overlap(t1, t3));

  CHECK(g.point_in_closed_triangle(t1, P.verts[0]));
  CHECK(g.point_in_closed_triangle(t1, P.verts[2]));
  CHECK_FALSE(g.point_in_closed_triangle(t1, -P.verts[2]));
}

TEST_CASE("canonical prototiles") {
  NumberField K7(7);
  GeomKernel g7(K7);
  Prototile p = canonical_prototile(g7, AngleTriple(1, 2, 4));
  auto [x1, y1] = g7.embed(p.verts[1]);
  CHECK(std::fabs(x1 - 2.24698) < 1e-5);
  CHECK(std::fabs(y1) < 1e-12);
  auto [x2, y2] = g7.embed(p.verts[2]);
  CHECK(std::fabs(x2 - 1.62349) < 1e-5);
  CHECK(std::fabs(y2 - 0.78183) < 1e-5);
  CHECK(p.edges[0].klass == 3);  // a_4 = a_3
  CHECK(p.edges[1].klass == 1);
  CHECK(p.edges[2].klass == 2);
  CHECK_FALSE(p.isosceles);

  Prototile iso = canonical_prototile(g7, AngleTriple(1, 3, 3));
  CHECK(iso.isosceles);
  CHECK(iso.apex == 0);  // the two a_3 edges meet at the angle-1 vertex
  CHECK(iso.edges_of_class(3).size() == 2);

  Prototile iso2 = canonical_prototile(g7, AngleTriple(2, 2, 3));
  CHECK(iso2.isosceles);
  CHECK(iso2.apex == 2);
  CHECK(iso2.edges_of_class(2).size() == 2);

  NumberField K5(5);
  GeomKernel g5(K5);
  Prototile q = canonical_prototile(g5, AngleTriple(1, 1, 3));
  CHECK(q.edges[0].klass == 2);  // base a_3 = a_2
  CHECK(q.edges[1].klass == 1);
  CHECK(q.edges[2].klass == 1);

  // side lengths match a_{k_i} numerically for every special prototile
  for (int n : {5, 7, 11}) {
    NumberField K(n);
    GeomKernel g(K);
    for (const AngleTriple& t : special_set(n)) {
      Prototile pt = canonical_prototile(g, t);
      for (int j = 0; j < 3; ++j) {
        auto [ex, ey] = g.embed(pt.verts[pt.edges[j].to] - pt.verts[pt.edges[j].from]);
        double want = K.length(pt.edges[j].klass).value();
        CHECK(std::fabs(ex * ex + ey * ey - want * want) < 1e-9);
      }
    }
  }
}

TEST_CASE("isosceles axis swaps the equal edges") {
  NumberField K(7);
  GeomKernel g(K);
  for (auto t : {AngleTriple(1, 3, 3), AngleTriple(2, 2, 3)}) {
    Prototile p = canonical_prototile(g, t);
    const RigidMotion& m = p.axis;
    CHECK(apply_motion(7, m, p.verts[p.apex]) == p.verts[p.apex]);
    int b = (p.apex + 1) % 3, c = (p.apex + 2) % 3;
    CHECK(apply_motion(7, m, p.verts[b]) == p.verts[c]);
    // involution
    CHECK(compose(7, m, m).rot == 0);
    CHECK_FALSE(compose(7, m, m).flip);
    CHECK(compose(7, m, m).shift.is_zero());
  }
}
