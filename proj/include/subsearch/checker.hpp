#pragma once

// Independent patch verification. Rebuilds every tile from its motion
// and checks the claims directly with the exact predicates, sharing no
// state with the search bookkeeping: pairwise disjoint interiors,
// edge-to-edge contact only, tile census, and (for results) support
// exactly lambda*t0 with the exact area identity.

#include <unordered_map>

#include "subsearch/parallel.hpp"

namespace subsearch {

struct PatchCheck {
  bool ok = true;
  std::string failure;
  std::vector<long> census;

  void fail(const std::string& what) {
    if (ok) failure = what;
    ok = false;
  }
};

inline PatchCheck check_patch(const CampaignContext& C, const std::vector<PlacedTileLite>& tiles,
                              const SearchTask* support_of = nullptr) {
  const GeomKernel& g = *C.kernel;
  PatchCheck out;
  out.census.assign(C.num_protos(), 0);

  std::vector<TileGeometry> geo;
  geo.reserve(tiles.size());
  for (const auto& t : tiles) {
    if (t.proto < 0 || t.proto >= C.num_protos()) {
      out.fail("tile with invalid prototile index");
      return out;
    }
    out.census[t.proto]++;
    geo.push_back(tile_geometry(C, t.proto, t.motion()));
  }

  for (size_t i = 0; i < geo.size() && out.ok; ++i)
    for (size_t j = i + 1; j < geo.size() && out.ok; ++j) {
      if (g.interiors_overlap(geo[i].verts, geo[j].verts))
        out.fail("tiles " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      for (const TileEdge& a : geo[i].ccw)
        for (const TileEdge& b : geo[j].ccw) {
          SegRel r = g.segment_relation(a.from, a.to, b.from, b.to);
          if (r == SegRel::CollinearOverlap || r == SegRel::Crossing || r == SegRel::Touching)
            out.fail("edges of tiles " + std::to_string(i) + " and " + std::to_string(j) +
                     " are not edge-to-edge (" + seg_rel_name(r) + ")");
        }
    }

  if (support_of && out.ok) {
    for (size_t i = 0; i < geo.size(); ++i)
      for (const LatticePoint& v : geo[i].verts)
        if (!g.point_in_closed_triangle(support_of->corners, v))
          out.fail("tile " + std::to_string(i) + " leaves the inflated prototile");
    // Exact area identity: sum of tile areas = lambda^2 * area(t0).
    const NumberField& K = *C.field;
    FieldElement lam = C.lambda.value(K);
    FieldElement want = lam * lam * area_ratio(K, C.triples[support_of->t0]);
    FieldElement got = K.zero();
    for (int p = 0; p < C.num_protos(); ++p)
      got = got + area_ratio(K, C.triples[p]) * Rat(out.census[p]);
    if (got != want) out.fail("tile areas do not sum to the inflated area");
  }
  return out;
}

/// Re-derive the orientation relations of a patch from its geometry:
/// each geometric edge shared by two tiles relates the two canonical
/// edge variables. Returns the canonical partial assignment, or nothing
/// if the relations are contradictory.
inline std::optional<std::vector<std::pair<int, int>>> derive_orientation(
    const CampaignContext& C, const std::vector<PlacedTileLite>& tiles) {
  struct Owner {
    int var;
    LatticePoint fwd_origin;
  };
  std::unordered_map<std::string, Owner> seen;
  OrientationStore store(C.num_vars());
  for (const auto& t : tiles) {
    TileGeometry geo = tile_geometry(C, t.proto, t.motion());
    for (const TileEdge& e : geo.ccw) {
      LatticePoint lo = e.from, hi = e.to;
      if (hi < lo) std::swap(lo, hi);
      std::string key = lo.str() + "|" + hi.str();
      LatticePoint origin = geo.verts[e.canon];
      int var = C.var_of(t.proto, e.canon);
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen.emplace(key, Owner{var, origin});
      } else {
        bool opposite = !(origin == it->second.fwd_origin);
        if (!store.relate(var, it->second.var, opposite)) return std::nullopt;
      }
    }
  }
  return store.export_partition();
}

}  // namespace subsearch
