#pragma once

// Backtracking search: fill an inflated prototile lambda*t0 with
// prototile copies, edge-to-edge, against a stack of open edges.
//
// Placement always happens against the last open edge. A placement
// triple (prototile, flip, second) determines the placed copy uniquely;
// backtracking reconstructs the triple from the popped tile, so no
// per-level cursor state is kept. Edge-orientation conditions (isometry
// equivariance and matching) are enforced during placement through the
// trailed constraint store.

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "subsearch/orientation.hpp"
#include "subsearch/prototile.hpp"

namespace subsearch {

struct Edge {
  LatticePoint a, b;        // the free side lies to the left of a -> b
  int klass = 0;            // length class: b - a = a_klass * u_dir
  int dir = 0;
  int owner_tile = -1;      // -1: starter edge (no orientation constraint)
  int owner_edge = 0;       // canonical edge index within the owner's prototile
  LatticePoint fwd_origin;  // arrow origin when the owner's variable is "forward"

  bool same_segment(const LatticePoint& p, const LatticePoint& q) const {
    return (a == p && b == q) || (a == q && b == p);
  }
};

/// One in-plane CCW boundary edge of a placed tile.
struct TileEdge {
  LatticePoint from, to;
  int canon = 0;  // canonical edge index (the orientation variable id modulo prototile)
  int dir = 0;    // direction index of to - from
  int klass = 0;
};

struct PlacedTile {
  int proto = 0;
  RigidMotion motion;
  bool flip = false, second = false;  // the placement triple
  std::array<LatticePoint, 3> verts;
  std::array<TileEdge, 3> ccw;
  int target_pos = 0;       // index into ccw of the edge placed against
  int pushed_open = 0;
  int closed_count = 0;
  size_t orient_mark = 0;
};

struct ClosedRec {
  Edge edge;
  int reopen_index;  // position in the open stack to restore to; -1 = closed by boundary
  int placed_by;
};

/// Immutable per-(PT, lambda) data shared by all searches and workers.
struct CampaignContext {
  std::unique_ptr<NumberField> field;
  std::unique_ptr<GeomKernel> kernel;
  std::vector<AngleTriple> triples;
  std::vector<Prototile> protos;
  InflationFactor lambda;
  RatMatrix X;
  SubstitutionMatrix M;
  bool orientation_enforced = true;
  int starter_side = 1;  // side of t0 carrying the starter; 1 = opposite vertex 0

  CampaignContext(int n, std::vector<AngleTriple> pts, InflationFactor lam)
      : field(std::make_unique<NumberField>(n)),
        kernel(std::make_unique<GeomKernel>(*field)),
        triples(std::move(pts)),
        lambda(std::move(lam)) {
    for (const AngleTriple& t : triples) protos.push_back(canonical_prototile(*kernel, t));
    X = length_matrix(*field, lambda);
    M = substitution_matrix(*field, triples, lambda);
  }

  int n() const { return field->n(); }
  int num_protos() const { return static_cast<int>(protos.size()); }
  int num_vars() const { return 3 * num_protos(); }
  int var_of(int proto, int canon) const { return 3 * proto + canon; }
};

/// Per-(t0) search geometry: the inflated triangle and its sides.
struct SearchTask {
  const CampaignContext* C = nullptr;
  int t0 = 0;
  std::array<LatticePoint, 3> corners;  // of lambda*t0, CCW
  struct Side {
    LatticePoint from, to;
    int dir = 0, klass = 0;
  };
  std::array<Side, 3> sides;
  std::vector<long> mult0;
  std::vector<int> starter_classes;
};

inline SearchTask make_task(const CampaignContext& C, int t0) {
  if (!C.M.admissible)
    throw std::invalid_argument("substitution matrix is not admissible; search must not start");
  SearchTask T;
  T.C = &C;
  T.t0 = t0;
  const Prototile& P = C.protos[t0];
  int n = C.n();
  for (int i = 0; i < 3; ++i) T.corners[i] = scale_by(n, C.lambda, P.verts[i]);
  for (int j = 0; j < 3; ++j)
    T.sides[j] = {T.corners[j], T.corners[(j + 1) % 3], P.edges[j].dir, P.edges[j].klass};
  T.mult0 = C.M.column(t0);
  // Starter lengths: the positive entries of the X column for the
  // class of the chosen side.
  int side_klass = P.edges[C.starter_side].klass;
  for (int k = 1; k <= C.field->degree(); ++k)
    if (C.X.at(k - 1, side_klass - 1) > 0) T.starter_classes.push_back(k);
  return T;
}

/// Starter: an open edge anchored at the CCW start corner of the chosen
/// side, free side facing the interior.
inline Edge make_starter(const SearchTask& T, int klass) {
  const auto& side = T.sides[T.C->starter_side];
  Edge e;
  e.a = side.from;
  e.b = side.from + scaled_direction(T.C->n(), klass, side.dir);
  e.klass = klass;
  e.dir = side.dir;
  e.owner_tile = -1;
  return e;
}

struct SearchState {
  const SearchTask* task = nullptr;
  int starter_klass = 0;
  std::vector<PlacedTile> patch;
  std::vector<Edge> open;
  std::vector<ClosedRec> closed;
  std::vector<long> mult;
  long remaining = 0;
  OrientationStore orient;
  int cursor = 0;

  std::string serialize() const {
    std::string s = "t0=" + std::to_string(task->t0) + ";st=" + std::to_string(starter_klass) +
                    ";cur=" + std::to_string(cursor) + ";mult=";
    for (long m : mult) s += std::to_string(m) + ",";
    s += ";patch=";
    for (const PlacedTile& t : patch)
      s += std::to_string(t.proto) + ":" + std::to_string(t.motion.rot) + ":" +
           (t.motion.flip ? "f" : "-") + ":" + t.motion.shift.str() + ";";
    s += ";open=";
    for (const Edge& e : open) s += e.a.str() + e.b.str() + std::to_string(e.klass) + ";";
    s += ";closed=";
    for (const ClosedRec& r : closed)
      s += r.edge.a.str() + r.edge.b.str() + std::to_string(r.reopen_index) + ";";
    s += ";orient=" + orient.serialize();
    return s;
  }
};

inline SearchState init_state(const SearchTask& T, int starter_klass) {
  SearchState st;
  st.task = &T;
  st.starter_klass = starter_klass;
  st.open.push_back(make_starter(T, starter_klass));
  st.mult = T.mult0;
  st.remaining = 0;
  for (long m : st.mult) st.remaining += m;
  st.orient = OrientationStore(T.C->num_vars());
  st.cursor = 0;
  return st;
}

inline int cursor_encode(int proto, bool flip, bool second) {
  return ((proto * 2 + (flip ? 1 : 0)) * 2) + (second ? 1 : 0);
}
inline void cursor_decode(int cur, int& proto, bool& flip, bool& second) {
  second = cur & 1;
  flip = (cur >> 1) & 1;
  proto = cur >> 2;
}

struct TileGeometry {
  std::array<LatticePoint, 3> verts;
  std::array<TileEdge, 3> ccw;  // in-plane CCW boundary, interior on the left
};

/// Vertices and directed boundary of a placed copy. Reflection reverses
/// the boundary traversal, so a flipped tile walks its canonical edges
/// in order 2, 1, 0, each reversed.
inline TileGeometry tile_geometry(const CampaignContext& C, int proto, const RigidMotion& g) {
  const Prototile& P = C.protos[proto];
  int n = C.n();
  TileGeometry t;
  t.verts = placed_vertices(n, P, g);
  if (!g.flip) {
    for (int pos = 0; pos < 3; ++pos) {
      const ProtoEdge& e = P.edges[pos];
      t.ccw[pos] =
          TileEdge{t.verts[e.from], t.verts[e.to], pos, motion_direction(n, g, e.dir), e.klass};
    }
  } else {
    for (int pos = 0; pos < 3; ++pos) {
      int canon = 2 - pos;
      const ProtoEdge& e = P.edges[canon];
      t.ccw[pos] = TileEdge{t.verts[e.to], t.verts[e.from], canon,
                            (motion_direction(n, g, e.dir) + n) % (2 * n), e.klass};
    }
  }
  return t;
}

/// Construct the unique copy of `proto` laid against the last open
/// edge on its free side, using the first (or second) prototile edge of
/// the matching length class, reflected iff flip. Returns nothing if
/// the prototile has no such edge.
inline std::optional<PlacedTile> place(const SearchState& st, int proto, bool flip, bool second) {
  const CampaignContext& C = *st.task->C;
  const Edge& target = st.open.back();
  const Prototile& P = C.protos[proto];
  const auto& cands = P.edges_of_class(target.klass);
  int which = second ? 1 : 0;
  if (static_cast<int>(cands.size()) <= which) return std::nullopt;
  int j = cands[which];
  const ProtoEdge& E = P.edges[j];
  int n = C.n();
  int two_n = 2 * n;

  PlacedTile t;
  t.proto = proto;
  t.flip = flip;
  t.second = second;
  RigidMotion g(n);
  if (!flip) {
    g.rot = ((target.dir - E.dir) % two_n + two_n) % two_n;
    g.flip = false;
    g.shift = target.a - apply_linear(n, RigidMotion(g.rot, false, LatticePoint(n)), P.verts[E.from]);
  } else {
    g.rot = ((target.dir + n + E.dir) % two_n + two_n) % two_n;
    g.flip = true;
    g.shift = target.b - apply_linear(n, RigidMotion(g.rot, true, LatticePoint(n)), P.verts[E.from]);
  }
  t.motion = g;
  TileGeometry geom = tile_geometry(C, proto, g);
  t.verts = geom.verts;
  t.ccw = geom.ccw;
  for (int pos = 0; pos < 3; ++pos)
    if (t.ccw[pos].from == target.a && t.ccw[pos].to == target.b) {
      t.target_pos = pos;
      return t;
    }
  throw std::logic_error("place: constructed tile does not sit on the target edge");
}

inline bool edge_on_boundary(const SearchState& st, const LatticePoint& p, const LatticePoint& q) {
  const GeomKernel& g = *st.task->C->kernel;
  for (const auto& s : st.task->sides)
    if (g.on_segment(p, s.from, s.to) && g.on_segment(q, s.from, s.to)) return true;
  return false;
}

inline int find_open_edge(const SearchState& st, const LatticePoint& p, const LatticePoint& q) {
  for (int i = static_cast<int>(st.open.size()) - 1; i >= 0; --i)
    if (st.open[i].same_segment(p, q)) return i;
  return -1;
}

/// Geometric and orientation legality of a placed candidate:
/// containment in lambda*t0, disjoint interiors, edge-to-edge contact
/// only, and joint satisfiability of the induced orientation relations
/// (applied tentatively, then rolled back).
inline bool compatible(SearchState& st, const PlacedTile& t) {
  const CampaignContext& C = *st.task->C;
  const GeomKernel& g = *C.kernel;

  for (const LatticePoint& v : t.verts)
    if (!g.point_in_closed_triangle(st.task->corners, v)) return false;

  for (const PlacedTile& other : st.patch)
    if (g.interiors_overlap(other.verts, t.verts)) return false;

  for (const TileEdge& e : t.ccw) {
    for (const Edge& f : st.open) {
      SegRel r = g.segment_relation(e.from, e.to, f.a, f.b);
      if (r == SegRel::CollinearOverlap || r == SegRel::Crossing || r == SegRel::Touching)
        return false;
    }
    for (const ClosedRec& c : st.closed) {
      SegRel r = g.segment_relation(e.from, e.to, c.edge.a, c.edge.b);
      if (r == SegRel::CollinearOverlap || r == SegRel::Crossing || r == SegRel::Touching)
        return false;
    }
  }

  if (C.orientation_enforced) {
    size_t m = st.orient.mark();
    bool ok = true;
    for (const TileEdge& e : t.ccw) {
      int idx = find_open_edge(st, e.from, e.to);
      if (idx < 0) continue;
      const Edge& f = st.open[idx];
      if (f.owner_tile < 0) continue;  // starter carries no constraint
      bool opposite = !(t.verts[e.canon] == f.fwd_origin);
      if (!st.orient.relate(C.var_of(t.proto, e.canon),
                            C.var_of(st.patch[f.owner_tile].proto, f.owner_edge), opposite)) {
        ok = false;
        break;
      }
    }
    st.orient.rollback(m);
    if (!ok) return false;
  }
  return true;
}

/// Push the tile: close the target edge plus any other coinciding open
/// edges, park boundary edges as closed, and push the remaining edges
/// open in CCW order starting after the closed edge.
inline void step_forward(SearchState& st, PlacedTile tile) {
  const CampaignContext& C = *st.task->C;
  int tile_idx = static_cast<int>(st.patch.size());
  tile.orient_mark = st.orient.mark();
  tile.pushed_open = 0;
  tile.closed_count = 0;

  auto apply_constraint = [&](const TileEdge& e, const Edge& f) {
    if (!C.orientation_enforced || f.owner_tile < 0) return;
    bool opposite = !(tile.verts[e.canon] == f.fwd_origin);
    if (!st.orient.relate(C.var_of(tile.proto, e.canon),
                          C.var_of(st.patch[f.owner_tile].proto, f.owner_edge), opposite))
      throw std::logic_error("step_forward: constraint failed after compatible() accepted");
  };

  Edge target = st.open.back();
  if (!target.same_segment(tile.ccw[tile.target_pos].from, tile.ccw[tile.target_pos].to))
    throw std::logic_error("step_forward: tile does not match the last open edge");
  st.open.pop_back();
  apply_constraint(tile.ccw[tile.target_pos], target);
  st.closed.push_back({target, static_cast<int>(st.open.size()), tile_idx});
  tile.closed_count++;

  for (int off = 1; off <= 2; ++off) {
    const TileEdge& e = tile.ccw[(tile.target_pos + off) % 3];
    int idx = find_open_edge(st, e.from, e.to);
    if (idx >= 0) {
      Edge f = st.open[idx];
      st.open.erase(st.open.begin() + idx);
      apply_constraint(e, f);
      st.closed.push_back({f, idx, tile_idx});
      tile.closed_count++;
    } else if (edge_on_boundary(st, e.from, e.to)) {
      Edge b;
      b.a = e.from;
      b.b = e.to;
      b.klass = e.klass;
      b.dir = e.dir;
      b.owner_tile = tile_idx;
      b.owner_edge = e.canon;
      b.fwd_origin = tile.verts[e.canon];
      st.closed.push_back({b, -1, tile_idx});
      tile.closed_count++;
    } else {
      Edge o;
      o.a = e.to;  // reversed: the free side is away from the tile
      o.b = e.from;
      o.klass = e.klass;
      o.dir = (e.dir + C.n()) % (2 * C.n());
      o.owner_tile = tile_idx;
      o.owner_edge = e.canon;
      o.fwd_origin = tile.verts[e.canon];
      st.open.push_back(o);
      tile.pushed_open++;
    }
  }

  st.mult[tile.proto]--;
  st.remaining--;
  st.patch.push_back(std::move(tile));
}

/// Exact inverse of step_forward. The popped tile's open edges are on
/// top of the open stack; its closed records are on top of the closed
/// stack and are reinserted at their recorded positions in reverse
/// order of closure.
inline PlacedTile step_back(SearchState& st) {
  if (st.patch.empty()) throw std::logic_error("step_back: empty patch");
  PlacedTile tile = std::move(st.patch.back());
  st.patch.pop_back();
  int tile_idx = static_cast<int>(st.patch.size());

  for (int i = 0; i < tile.pushed_open; ++i) {
    if (st.open.empty() || st.open.back().owner_tile != tile_idx)
      throw std::logic_error("step_back: open stack does not match the popped tile");
    st.open.pop_back();
  }
  for (int i = 0; i < tile.closed_count; ++i) {
    if (st.closed.empty() || st.closed.back().placed_by != tile_idx)
      throw std::logic_error("step_back: closed stack does not match the popped tile");
    ClosedRec rec = std::move(st.closed.back());
    st.closed.pop_back();
    if (rec.reopen_index >= 0)
      st.open.insert(st.open.begin() + rec.reopen_index, std::move(rec.edge));
  }
  st.orient.rollback(tile.orient_mark);
  st.mult[tile.proto]++;
  st.remaining++;
  return tile;
}

enum class SolveStatus { Completed, Aborted };

/// Shared campaign limits. max_* of 0 means unlimited.
struct CampaignControl {
  std::atomic<uint64_t> nodes{0};
  std::atomic<uint64_t> results{0};
  uint64_t max_nodes = 0;
  uint64_t max_results = 0;
  std::atomic<bool> abort{false};
  std::atomic<bool> node_limit_hit{false};
  std::atomic<bool> result_limit_hit{false};

  bool count_node() {
    uint64_t v = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (max_nodes && v > max_nodes) {
      node_limit_hit.store(true);
      abort.store(true);
      return false;
    }
    return !abort.load(std::memory_order_relaxed);
  }
  bool count_result() {
    uint64_t v = results.fetch_add(1, std::memory_order_relaxed) + 1;
    if (max_results && v > max_results) {
      result_limit_hit.store(true);
      abort.store(true);
      return false;
    }
    return true;
  }
};

struct SolveHooks {
  std::function<void(const SearchState&)> emit;
  std::function<void(SearchState&&)> snapshot;  // may be empty when no kill switch is used
  const std::atomic<bool>* kill = nullptr;
  CampaignControl* control = nullptr;
};

/// Exhaustive enumeration below the state's current node. Cursor order
/// is (prototile ascending, flip in {false,true}, second in
/// {false,true}). After the kill switch fires, each would-be recursion
/// is snapshotted onto the work pile instead of being explored.
inline SolveStatus solve(SearchState& st, const SolveHooks& h) {
  const size_t base = st.patch.size();
  const int cursor_end = 4 * st.task->C->num_protos();

  auto backtrack = [&](void) -> bool {
    if (st.patch.size() == base) return false;
    PlacedTile t = step_back(st);
    st.cursor = cursor_encode(t.proto, t.flip, t.second) + 1;
    return true;
  };

  bool fresh = true;
  while (true) {
    if (h.control && h.control->abort.load(std::memory_order_relaxed)) return SolveStatus::Aborted;
    if (fresh) {
      fresh = false;
      if (st.remaining == 0) {
        h.emit(st);
        if (h.control && !h.control->count_result()) return SolveStatus::Aborted;
        if (!backtrack()) return SolveStatus::Completed;
        continue;
      }
      if (st.open.empty()) {
        if (!backtrack()) return SolveStatus::Completed;
        continue;
      }
    }
    if (st.cursor >= cursor_end) {
      if (!backtrack()) return SolveStatus::Completed;
      continue;
    }
    int proto;
    bool flip, second;
    cursor_decode(st.cursor, proto, flip, second);
    if (st.mult[proto] > 0) {
      auto t = place(st, proto, flip, second);
      if (t && compatible(st, *t)) {
        if (h.control && !h.control->count_node()) return SolveStatus::Aborted;
        step_forward(st, std::move(*t));
        if (h.kill && h.kill->load(std::memory_order_relaxed) && h.snapshot) {
          SearchState snap = st;
          snap.cursor = 0;
          h.snapshot(std::move(snap));
          step_back(st);
          st.cursor++;
        } else {
          st.cursor = 0;
          fresh = true;
        }
        continue;
      }
    }
    st.cursor++;
  }
}

}  // namespace subsearch
