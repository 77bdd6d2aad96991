#pragma once

// Edge-orientation constraint store.
//
// One boolean variable per (prototile, edge) pair: "forward" means the
// arrow originates at the edge's CCW start vertex in the canonical
// prototile. Coinciding edges of placed tiles induce equal/opposite
// relations between variables; these are kept in a union-find over
// signed literals with an undo trail, so the search can apply
// constraints tentatively and roll back on backtrack.

#include <cstdint>
#include <string>
#include <vector>

namespace subsearch {

class OrientationStore {
 public:
  OrientationStore() = default;
  explicit OrientationStore(int num_vars) : nvars_(num_vars) {
    parent_.resize(2 * num_vars);
    size_.assign(2 * num_vars, 1);
    for (int i = 0; i < 2 * num_vars; ++i) parent_[i] = i;
  }

  int num_vars() const { return nvars_; }

  /// Relate var a and var b; opposite = true forces them to differ.
  /// Returns false on contradiction, in which case the store may hold a
  /// partial merge: roll back to a mark taken beforehand.
  bool relate(int a, int b, bool opposite) {
    unite(lit(a, false), lit(b, opposite));
    unite(lit(a, true), lit(b, !opposite));
    return find(lit(a, false)) != find(lit(a, true));
  }

  size_t mark() const { return trail_.size(); }

  void rollback(size_t m) {
    while (trail_.size() > m) {
      auto [child, into] = trail_.back();
      trail_.pop_back();
      parent_[child] = child;
      size_[into] -= size_[child];
    }
  }

  /// Canonical partial assignment: for each variable, the smallest
  /// variable it is tied to and the relative sign (+1 equal, -1
  /// opposite). Unconstrained variables map to themselves.
  std::vector<std::pair<int, int>> export_partition() const {
    std::vector<std::pair<int, int>> out(nvars_);
    for (int v = 0; v < nvars_; ++v) {
      int rv = find(lit(v, false));
      int rn = find(lit(v, true));
      out[v] = {v, 1};
      for (int u = 0; u < v; ++u) {
        int ru = find(lit(u, false));
        if (ru == rv) { out[v] = {u, 1}; break; }
        if (ru == rn) { out[v] = {u, -1}; break; }
      }
    }
    return out;
  }

  std::string serialize() const {
    std::string s;
    for (auto [r, sgn] : export_partition())
      s += std::to_string(r) + (sgn > 0 ? "+" : "-");
    return s;
  }

 private:
  static int lit(int var, bool negated) { return 2 * var + (negated ? 1 : 0); }

  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  void unite(int x, int y) {
    int rx = find(x), ry = find(y);
    if (rx == ry) return;
    if (size_[rx] > size_[ry]) std::swap(rx, ry);
    parent_[rx] = ry;
    size_[ry] += size_[rx];
    trail_.emplace_back(rx, ry);
  }

  int nvars_ = 0;
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<std::pair<int, int>> trail_;
};

}  // namespace subsearch
