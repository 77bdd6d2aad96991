#pragma once

// Canonical prototile triangles in lattice coordinates.
//
// T(k1,k2,k3) is placed with the angle k1*pi/n at the origin, the
// a_{k3} edge along u_0, and the third vertex at a_{k2}*u_{k1}; this is
// the law-of-sines normalization where the side opposite angle k*pi/n
// has diagonal length a_k.

#include <array>
#include <vector>

#include "subsearch/predicates.hpp"

namespace subsearch {

inline int length_class(int n, int k) { return std::min(k, n - k); }

struct ProtoEdge {
  int from, to;   // vertex indices, CCW
  int dir;        // direction index of (verts[to] - verts[from]), 0..2n-1
  int klass;      // canonical length class 1..(n-1)/2
};

struct Prototile {
  AngleTriple angles;
  std::array<LatticePoint, 3> verts;
  std::array<ProtoEdge, 3> edges;                 // edge j: verts[j] -> verts[j+1]
  std::vector<std::vector<int>> class_edges;      // class k -> ascending edge indices
  bool isosceles = false;
  int apex = -1;                                  // vertex fixed by the symmetry axis
  RigidMotion axis;                               // the axial reflection, when isosceles

  /// Edge index lists for a given length class (possibly empty).
  const std::vector<int>& edges_of_class(int k) const { return class_edges[k]; }
};

inline Prototile canonical_prototile(const GeomKernel& g, const AngleTriple& t) {
  const int n = g.n();
  t.validate(n);
  Prototile p;
  p.angles = t;
  p.verts[0] = LatticePoint(n);
  p.verts[1] = scaled_direction(n, t.k3, 0);
  p.verts[2] = scaled_direction(n, t.k2, t.k1);

  const int dirs[3] = {0, (n - t.k2) % (2 * n), (n + t.k1) % (2 * n)};
  const int opp[3] = {t.k3, t.k1, t.k2};  // angle opposite edge j
  p.class_edges.assign((n - 1) / 2 + 1, {});
  for (int j = 0; j < 3; ++j) {
    p.edges[j] = ProtoEdge{j, (j + 1) % 3, dirs[j], length_class(n, opp[j])};
    p.class_edges[p.edges[j].klass].push_back(j);
  }

  if (g.orientation_sign(p.verts[0], p.verts[1], p.verts[2]) != 1)
    throw std::logic_error("canonical prototile is not counterclockwise");
  for (int j = 0; j < 3; ++j) {
    LatticePoint expect = scaled_direction(n, opp[j], p.edges[j].dir);
    if (p.verts[p.edges[j].to] - p.verts[p.edges[j].from] != expect)
      throw std::logic_error("prototile edge direction bookkeeping is wrong");
    auto [ex, ey] = g.embed(expect);
    double len = std::sqrt(ex * ex + ey * ey);
    double want = std::sin(opp[j] * M_PI / n) / std::sin(M_PI / n);
    if (std::fabs(len - want) > 1e-9)
      throw std::logic_error("prototile edge length check failed");
  }

  if (t.k1 == t.k2 || t.k2 == t.k3) {
    p.isosceles = true;
    p.apex = (t.k2 == t.k3) ? 0 : 2;
    int b = (p.apex + 1) % 3, c = (p.apex + 2) % 3;
    int d1 = p.edges[p.apex].dir;                       // apex -> b
    int d2 = (p.edges[c].dir + n) % (2 * n);            // apex -> c (edge c runs c -> apex)
    RigidMotion m((d1 + d2) % (2 * n), true, LatticePoint(n));
    m.shift = p.verts[p.apex] - apply_linear(n, m, p.verts[p.apex]);
    if (apply_motion(n, m, p.verts[b]) != p.verts[c] ||
        apply_motion(n, m, p.verts[c]) != p.verts[b] ||
        apply_motion(n, m, p.verts[p.apex]) != p.verts[p.apex])
      throw std::logic_error("isosceles axis reflection is wrong");
    p.axis = m;
  }
  return p;
}

/// Vertices of a placed copy.
inline std::array<LatticePoint, 3> placed_vertices(int n, const Prototile& p, const RigidMotion& g) {
  return {apply_motion(n, g, p.verts[0]), apply_motion(n, g, p.verts[1]),
          apply_motion(n, g, p.verts[2])};
}

}  // namespace subsearch
