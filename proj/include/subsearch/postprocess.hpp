#pragma once

// From raw search results to substitution rules.
//
// Pipeline: canonicalize each result modulo the isosceles reflection
// redundancy, read off the edge breakdowns of the inflated sides,
// enumerate total orientation assignments, and group results into
// breakdown/orientation combinations. Every complete combination (one
// compatible result per prototile) defines edge-to-edge substitution
// rules; combinations sharing prototile orientations combine as
// multi-substitutions, and results within one combination combine as
// random substitutions.

#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "subsearch/checker.hpp"

namespace subsearch {

struct SubEdgeRef {
  int klass = 0;
  int var = 0;   // orientation variable of the owning tile edge
  int sgn = 0;   // +1 when the forward arrow points along the CCW side direction
};

struct CanonResult {
  int t0 = 0;
  std::vector<PlacedTileLite> tiles;  // canonical labeling, sorted
  std::vector<std::pair<int, int>> orientation;
  std::vector<int> starter_classes;   // which starters produced it (metadata)
  std::array<std::vector<SubEdgeRef>, 3> sides;  // CCW sub-edge sequences of lambda*t0
  std::string key;
};

namespace detail {

inline std::string tiles_key(const std::vector<PlacedTileLite>& tiles,
                             const std::vector<std::pair<int, int>>& orientation) {
  std::string s;
  for (const auto& t : tiles) s += t.str() + ";";
  s += "|";
  for (auto [r, sgn] : orientation) s += std::to_string(r) + (sgn > 0 ? "+" : "-");
  return s;
}

/// Reflect every instance of the given prototiles across their own
/// symmetry axes; the point sets are unchanged.
inline std::vector<PlacedTileLite> toggle_instances(const CampaignContext& C,
                                                    const std::vector<PlacedTileLite>& tiles,
                                                    const std::vector<bool>& toggle) {
  int n = C.n();
  std::vector<PlacedTileLite> out = tiles;
  for (auto& t : out) {
    if (!toggle[t.proto]) continue;
    RigidMotion m = compose(n, t.motion(), C.protos[t.proto].axis);
    t.rot = m.rot;
    t.flip = m.flip;
    t.shift = m.shift;
  }
  return out;
}

}  // namespace detail

/// Ordered sub-edge sequence along each side of lambda*t0. Hard fault
/// if the sub-edges fail to tile a side exactly (impossible for a valid
/// result).
inline std::array<std::vector<SubEdgeRef>, 3> extract_side_breakdowns(
    const CampaignContext& C, const SearchTask& T, const std::vector<PlacedTileLite>& tiles) {
  const GeomKernel& g = *C.kernel;
  std::array<std::vector<SubEdgeRef>, 3> out;
  struct Piece {
    LatticePoint lo, hi;
    SubEdgeRef ref;
  };
  for (int side = 0; side < 3; ++side) {
    const auto& S = T.sides[side];
    LatticePoint dirvec = S.to - S.from;
    std::vector<Piece> pieces;
    for (const auto& t : tiles) {
      TileGeometry geo = tile_geometry(C, t.proto, t.motion());
      for (const TileEdge& e : geo.ccw) {
        if (!g.on_segment(e.from, S.from, S.to) || !g.on_segment(e.to, S.from, S.to)) continue;
        Piece p;
        p.lo = e.from;
        p.hi = e.to;
        if (g.dot_sign(p.hi - p.lo, dirvec) < 0) std::swap(p.lo, p.hi);
        p.ref.klass = e.klass;
        p.ref.var = C.var_of(t.proto, e.canon);
        p.ref.sgn = (geo.verts[e.canon] == p.lo) ? 1 : -1;
        pieces.push_back(std::move(p));
      }
    }
    std::sort(pieces.begin(), pieces.end(), [&](const Piece& a, const Piece& b) {
      return g.dot_sign(a.lo - b.lo, dirvec) < 0;
    });
    LatticePoint cursor = S.from;
    for (const Piece& p : pieces) {
      if (!(p.lo == cursor))
        throw std::logic_error("side breakdown: sub-edges do not tile the side");
      out[side].push_back(p.ref);
      cursor = p.hi;
    }
    if (!(cursor == S.to)) throw std::logic_error("side breakdown: side not fully covered");
  }
  return out;
}

/// Canonical form modulo the isosceles reflection redundancy: over all
/// subsets of isosceles prototiles, reflect every instance and keep the
/// lexicographically least serialization. Orientation relations are
/// re-derived from the geometry of the winning variant.
inline CanonResult canonicalize(const CampaignContext& C, const SearchTask& T,
                                const RawResult& raw) {
  std::vector<int> iso;
  for (int p = 0; p < C.num_protos(); ++p)
    if (C.protos[p].isosceles) iso.push_back(p);

  CanonResult best;
  bool have = false;
  for (unsigned mask = 0; mask < (1u << iso.size()); ++mask) {
    std::vector<bool> toggle(C.num_protos(), false);
    for (size_t i = 0; i < iso.size(); ++i)
      if (mask & (1u << i)) toggle[iso[i]] = true;
    std::vector<PlacedTileLite> tiles = detail::toggle_instances(C, raw.tiles, toggle);
    std::sort(tiles.begin(), tiles.end());
    auto part = derive_orientation(C, tiles);
    if (!part)
      throw std::logic_error("canonicalize: reflected variant has contradictory orientations");
    std::string key = detail::tiles_key(tiles, *part);
    if (!have || key < best.key) {
      best.t0 = raw.t0;
      best.tiles = std::move(tiles);
      best.orientation = std::move(*part);
      best.key = std::move(key);
      have = true;
    }
  }
  best.starter_classes = {raw.starter_klass};
  best.sides = extract_side_breakdowns(C, T, best.tiles);
  return best;
}

/// Canonicalize and deduplicate a whole campaign output.
inline std::vector<std::vector<CanonResult>> canonicalize_all(const CampaignContext& C,
                                                              const std::vector<SearchTask>& tasks,
                                                              const CampaignOutcome& raw) {
  std::vector<std::vector<CanonResult>> out(C.num_protos());
  for (int t0 = 0; t0 < C.num_protos(); ++t0) {
    std::map<std::string, CanonResult> seen;
    for (const RawResult& r : raw.by_proto[t0]) {
      CanonResult c = canonicalize(C, tasks[t0], r);
      auto it = seen.find(c.key);
      if (it == seen.end()) {
        seen.emplace(c.key, std::move(c));
      } else {
        for (int k : c.starter_classes)
          if (std::find(it->second.starter_classes.begin(), it->second.starter_classes.end(), k) ==
              it->second.starter_classes.end())
            it->second.starter_classes.push_back(k);
      }
    }
    for (auto& [k, v] : seen) out[t0].push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orientation assignments and breakdown/orientation combinations.

/// Total assignment over all prototile edge variables, bit v set =
/// arrow reversed ("backward") on variable v.
using Assignment = uint32_t;

inline int assignment_val(Assignment a, int var) { return (a >> var) & 1 ? -1 : 1; }

inline bool consistent_with(const std::vector<std::pair<int, int>>& partition, Assignment a) {
  for (size_t v = 0; v < partition.size(); ++v) {
    auto [rep, sgn] = partition[v];
    if (assignment_val(a, static_cast<int>(v)) != sgn * assignment_val(a, rep)) return false;
  }
  return true;
}

/// (klass, polarity) sequence of one side under a total assignment,
/// read from the origin of the super-edge arrow.
using Breakdown = std::vector<std::pair<int, int>>;

inline Breakdown breakdown_under(const CampaignContext& C, const CanonResult& r, int side,
                                 Assignment a) {
  int super_var = C.var_of(r.t0, side);
  Breakdown b;
  for (const SubEdgeRef& s : r.sides[side])
    b.emplace_back(s.klass, s.sgn * assignment_val(a, s.var));
  if (assignment_val(a, super_var) < 0) {
    std::reverse(b.begin(), b.end());
    for (auto& [k, p] : b) p = -p;
  }
  return b;
}

inline std::string breakdown_str(const Breakdown& b) {
  std::string s;
  for (auto [k, p] : b) s += (p > 0 ? "+" : "-") + std::to_string(k);
  return s;
}

/// Per-(result, assignment) profile: the breakdown forced for each
/// length class the result's sides cover. Empty optional when the
/// result is inconsistent with the assignment or its own same-class
/// sides disagree (condition (3) violated internally).
inline std::optional<std::map<int, Breakdown>> result_profile(const CampaignContext& C,
                                                              const CanonResult& r, Assignment a) {
  if (!consistent_with(r.orientation, a)) return std::nullopt;
  std::map<int, Breakdown> prof;
  for (int side = 0; side < 3; ++side) {
    int klass = C.protos[r.t0].edges[side].klass;
    Breakdown b = breakdown_under(C, r, side, a);
    auto it = prof.find(klass);
    if (it == prof.end()) prof.emplace(klass, std::move(b));
    else if (it->second != b) return std::nullopt;
  }
  return prof;
}

/// A breakdown/orientation combination: a total assignment plus one
/// breakdown per length class. Results compatible with the same
/// combination combine as random substitutions.
struct Combo {
  Assignment alpha = 0;
  std::map<int, Breakdown> breakdowns;
  std::vector<std::vector<int>> members;  // per prototile: indices into canonical results
  bool complete = false;

  std::string key() const {
    std::string s = "a" + std::to_string(alpha) + "|";
    for (const auto& [k, b] : breakdowns) s += std::to_string(k) + ":" + breakdown_str(b) + ";";
    return s;
  }
};

/// All assignments consistent with at least one result per prototile,
/// expanded into complete breakdown/orientation combinations.
inline std::vector<Combo> enumerate_combos(const CampaignContext& C,
                                           const std::vector<std::vector<CanonResult>>& results) {
  int V = C.num_vars();
  int m = C.num_protos();
  std::vector<Combo> combos;
  // length classes that occur on any prototile edge
  std::set<int> classes;
  for (const Prototile& p : C.protos)
    for (const ProtoEdge& e : p.edges) classes.insert(e.klass);

  for (Assignment a = 0; a < (Assignment(1) << V); ++a) {
    // candidate breakdowns per class, from consistent result profiles
    std::map<int, std::set<Breakdown>> cands;
    std::vector<std::vector<std::pair<int, std::map<int, Breakdown>>>> profs(m);
    bool all_protos = true;
    for (int p = 0; p < m && all_protos; ++p) {
      for (size_t i = 0; i < results[p].size(); ++i) {
        auto prof = result_profile(C, results[p][i], a);
        if (!prof) continue;
        for (const auto& [k, b] : *prof) cands[k].insert(b);
        profs[p].emplace_back(static_cast<int>(i), std::move(*prof));
      }
      if (profs[p].empty()) all_protos = false;
    }
    if (!all_protos) continue;
    for (int k : classes)
      if (!cands.count(k)) cands[k] = {};  // class with no super-edge anywhere: stays empty

    // cartesian product over per-class candidates
    std::vector<int> klist(classes.begin(), classes.end());
    std::vector<std::vector<Breakdown>> choice;
    bool empty_class = false;
    for (int k : klist) {
      if (cands[k].empty()) { empty_class = true; break; }
      choice.emplace_back(cands[k].begin(), cands[k].end());
    }
    if (empty_class) continue;
    std::vector<size_t> idx(klist.size(), 0);
    for (;;) {
      Combo c;
      c.alpha = a;
      for (size_t i = 0; i < klist.size(); ++i) c.breakdowns[klist[i]] = choice[i][idx[i]];
      c.members.assign(m, {});
      c.complete = true;
      for (int p = 0; p < m; ++p) {
        for (auto& [ri, prof] : profs[p]) {
          bool fits = true;
          for (const auto& [k, b] : prof)
            if (c.breakdowns.at(k) != b) { fits = false; break; }
          if (fits) c.members[p].push_back(ri);
        }
        if (c.members[p].empty()) c.complete = false;
      }
      if (c.complete) combos.push_back(std::move(c));
      // next index tuple
      size_t pos = 0;
      while (pos < idx.size()) {
        if (++idx[pos] < choice[pos].size()) break;
        idx[pos] = 0;
        pos++;
      }
      if (pos == idx.size()) break;
    }
  }
  return combos;
}

/// Orientation classes: combos grouped by assignment. Combos in the
/// same class combine as multi-substitutions; two classes with
/// different assignments cannot be combined at all.
inline std::map<Assignment, std::vector<int>> group_by_orientation(const std::vector<Combo>& combos) {
  std::map<Assignment, std::vector<int>> out;
  for (size_t i = 0; i < combos.size(); ++i) out[combos[i].alpha].push_back(static_cast<int>(i));
  return out;
}

/// Identify an assignment with its global arrow reversal (reversing
/// every arrow preserves all three conditions), so classes are counted
/// once per twin pair.
inline Assignment fold_global_flip(Assignment a, int num_vars) {
  Assignment flipped = (~a) & ((Assignment(1) << num_vars) - 1);
  return std::min(a, flipped);
}

/// One rule: a combination plus a choice of one member result per
/// prototile.
struct RuleSet {
  Assignment alpha = 0;
  std::map<int, Breakdown> breakdowns;
  std::vector<int> choice;  // per prototile: index into canonical results
};

inline RuleSet representative_rule(const Combo& c) {
  RuleSet r;
  r.alpha = c.alpha;
  r.breakdowns = c.breakdowns;
  for (const auto& mem : c.members) r.choice.push_back(mem.front());
  return r;
}

// ---------------------------------------------------------------------------
// Applying a rule.

/// sigma on a patch of placed tiles: each tile tau(P)+v maps to
/// { tau(t) + lambda v : t in sigma(P) }.
inline std::vector<PlacedTileLite> apply_rule_once(const CampaignContext& C,
                                                   const std::vector<std::vector<CanonResult>>& results,
                                                   const RuleSet& rule,
                                                   const std::vector<PlacedTileLite>& patch) {
  int n = C.n();
  std::vector<PlacedTileLite> out;
  for (const PlacedTileLite& t : patch) {
    RigidMotion linear(t.rot, t.flip, LatticePoint(n));
    LatticePoint lshift = scale_by(n, C.lambda, t.shift);
    const CanonResult& r = results[t.proto][rule.choice[t.proto]];
    for (const PlacedTileLite& sub : r.tiles) {
      RigidMotion m = compose(n, linear, sub.motion());
      m.shift = m.shift + lshift;
      out.push_back({sub.proto, m.rot, m.flip, m.shift});
    }
  }
  return out;
}

struct ApplyReport {
  std::vector<PlacedTileLite> patch;
  PatchCheck check;
  std::vector<long> expected_census;
  bool census_ok = false;
  bool arrows_ok = false;  // matching arrows on every shared edge under alpha
};

inline std::vector<long> census_of(const CampaignContext& C,
                                   const std::vector<PlacedTileLite>& patch) {
  std::vector<long> c(C.num_protos(), 0);
  for (const auto& t : patch) c[t.proto]++;
  return c;
}

inline std::vector<long> matrix_power_column(const CampaignContext& C, int k,
                                             const std::vector<long>& v0) {
  std::vector<long> v = v0;
  for (int s = 0; s < k; ++s) {
    std::vector<long> w(v.size(), 0);
    for (size_t i = 0; i < v.size(); ++i)
      for (size_t j = 0; j < v.size(); ++j) w[i] += C.M.m[i][j] * v[j];
    v = std::move(w);
  }
  return v;
}

/// Apply sigma^k to a seed patch and verify the outcome with the
/// independent checker: edge-to-edge geometry, tile census against
/// M^k, and matching arrows on shared edges.
inline ApplyReport apply_and_verify(const CampaignContext& C,
                                    const std::vector<std::vector<CanonResult>>& results,
                                    const RuleSet& rule, std::vector<PlacedTileLite> seed, int k) {
  ApplyReport rep;
  rep.expected_census = census_of(C, seed);
  rep.patch = std::move(seed);
  for (int s = 0; s < k; ++s) rep.patch = apply_rule_once(C, results, rule, rep.patch);
  rep.expected_census = matrix_power_column(C, k, rep.expected_census);
  rep.check = check_patch(C, rep.patch);
  rep.census_ok = (census_of(C, rep.patch) == rep.expected_census);

  // arrow matching on shared edges under the rule's assignment
  rep.arrows_ok = true;
  std::unordered_map<std::string, LatticePoint> arrow;
  for (const auto& t : rep.patch) {
    TileGeometry geo = tile_geometry(C, t.proto, t.motion());
    for (const TileEdge& e : geo.ccw) {
      LatticePoint lo = e.from, hi = e.to;
      if (hi < lo) std::swap(lo, hi);
      std::string key = lo.str() + "|" + hi.str();
      int var = C.var_of(t.proto, e.canon);
      LatticePoint origin =
          assignment_val(rule.alpha, var) > 0 ? geo.verts[e.canon] : (e.from == geo.verts[e.canon] ? e.to : e.from);
      auto it = arrow.find(key);
      if (it == arrow.end()) arrow.emplace(key, origin);
      else if (!(it->second == origin)) rep.arrows_ok = false;
    }
  }
  return rep;
}

/// Observation (2) diagnostic: at every prototile vertex where two
/// edges meet at angle k*pi/n, even k means both arrows point toward
/// the vertex or both away; odd k means they disagree. Reported per
/// assignment, not asserted.
inline bool even_angle_polarity(const CampaignContext& C, Assignment a) {
  for (int p = 0; p < C.num_protos(); ++p) {
    const Prototile& P = C.protos[p];
    for (int v = 0; v < 3; ++v) {
      int e_out = v;                 // edge starting at vertex v
      int e_in = (v + 2) % 3;        // edge ending at vertex v
      bool out_toward = assignment_val(a, C.var_of(p, e_out)) < 0;
      bool in_toward = assignment_val(a, C.var_of(p, e_in)) > 0;
      int k = P.angles[v];
      if ((k % 2 == 0) != (out_toward == in_toward)) return false;
    }
  }
  return true;
}

}  // namespace subsearch
