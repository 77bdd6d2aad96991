#pragma once

// Campaign runner: one search per (prototile, admissible starter),
// executed by a pool of workers over a shared LIFO of search snapshots.
//
// Each running search carries a kill switch. When the pending pile gets
// too small, the switches of the running searches are triggered; a
// killed search stops climbing new branches and instead cuts each one
// off at the base and throws it on the pile, so idle workers always
// find work. The result multiset is unaffected by any of this.

#include <condition_variable>
#include <mutex>
#include <thread>

#include "subsearch/search.hpp"

namespace subsearch {

struct PlacedTileLite {
  int proto = 0;
  int rot = 0;
  bool flip = false;
  LatticePoint shift;

  RigidMotion motion() const { return RigidMotion(rot, flip, shift); }

  bool operator==(const PlacedTileLite& o) const {
    return proto == o.proto && rot == o.rot && flip == o.flip && shift == o.shift;
  }
  bool operator<(const PlacedTileLite& o) const {
    if (proto != o.proto) return proto < o.proto;
    if (rot != o.rot) return rot < o.rot;
    if (flip != o.flip) return flip < o.flip;
    return shift < o.shift;
  }

  std::string str() const {
    return std::to_string(proto) + ":" + std::to_string(rot) + ":" + (flip ? "f" : "-") + ":" +
           shift.str();
  }
};

struct RawResult {
  int t0 = 0;
  int starter_klass = 0;
  std::vector<PlacedTileLite> tiles;
  std::vector<std::pair<int, int>> orientation;  // canonical partial assignment

  std::string key() const {
    std::string s = std::to_string(t0) + "|" + std::to_string(starter_klass) + "|";
    for (const auto& t : tiles) s += t.str() + ";";
    s += "|";
    for (auto [r, sgn] : orientation) s += std::to_string(r) + (sgn > 0 ? "+" : "-");
    return s;
  }
};

inline RawResult raw_result_from_state(const SearchState& st) {
  RawResult r;
  r.t0 = st.task->t0;
  r.starter_klass = st.starter_klass;
  for (const PlacedTile& t : st.patch)
    r.tiles.push_back({t.proto, t.motion.rot, t.motion.flip, t.motion.shift});
  r.orientation = st.orient.export_partition();
  return r;
}

struct CampaignOutcome {
  std::vector<std::vector<RawResult>> by_proto;
  bool failed = false;
  std::string failure;
  bool node_limit_hit = false;
  bool result_limit_hit = false;
  uint64_t nodes = 0;
  uint64_t splits = 0;
  uint64_t searches_run = 0;
  uint64_t initial_searches = 0;

  bool truncated() const { return node_limit_hit || result_limit_hit; }

  /// Deterministic order regardless of worker scheduling.
  void canonical_sort() {
    for (auto& v : by_proto)
      std::sort(v.begin(), v.end(),
                [](const RawResult& a, const RawResult& b) { return a.key() < b.key(); });
  }
};

struct CampaignOptions {
  int workers = 1;
  int kill_threshold = -1;  // -1: default to the worker count; 0: never trigger
  uint64_t max_nodes = 0;
  uint64_t max_results = 0;
};

inline CampaignOutcome run_campaign(const CampaignContext& C, const std::vector<SearchTask>& tasks,
                                    const CampaignOptions& opt) {
  CampaignOutcome out;
  out.by_proto.resize(C.num_protos());

  CampaignControl ctl;
  ctl.max_nodes = opt.max_nodes;
  ctl.max_results = opt.max_results;
  int workers = std::max(1, opt.workers);
  int kill_threshold = opt.kill_threshold < 0 ? workers : opt.kill_threshold;

  std::mutex mu;
  std::condition_variable cv;
  std::vector<SearchState> pending;
  std::vector<std::shared_ptr<std::atomic<bool>>> switches;
  int active = 0;

  for (const SearchTask& t : tasks)
    for (int k : t.starter_classes) pending.push_back(init_state(t, k));
  out.initial_searches = pending.size();

  auto worker_fn = [&]() {
    std::unique_lock<std::mutex> lk(mu);
    for (;;) {
      cv.wait(lk, [&] {
        return (!pending.empty() && !ctl.abort.load(std::memory_order_relaxed)) || active == 0;
      });
      if (pending.empty() || ctl.abort.load(std::memory_order_relaxed)) {
        if (active == 0) return;
        continue;
      }
      SearchState st = std::move(pending.back());
      pending.pop_back();
      out.searches_run++;
      auto ks = std::make_shared<std::atomic<bool>>(false);
      switches.push_back(ks);
      active++;
      if (static_cast<int>(pending.size()) < kill_threshold && kill_threshold > 0)
        for (auto& s : switches) s->store(true);
      lk.unlock();

      try {
        SolveHooks h;
        h.emit = [&](const SearchState& s) {
          RawResult r = raw_result_from_state(s);
          std::lock_guard<std::mutex> g(mu);
          out.by_proto[r.t0].push_back(std::move(r));
        };
        h.snapshot = [&](SearchState&& s) {
          std::lock_guard<std::mutex> g(mu);
          pending.push_back(std::move(s));
          out.splits++;
          cv.notify_one();
        };
        h.kill = ks.get();
        h.control = &ctl;
        solve(st, h);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> g(mu);
        out.failed = true;
        if (out.failure.empty()) out.failure = e.what();
        ctl.abort.store(true);
      }

      lk.lock();
      active--;
      switches.erase(std::remove(switches.begin(), switches.end(), ks), switches.end());
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker_fn);
  for (auto& t : pool) t.join();

  out.nodes = ctl.nodes.load();
  out.node_limit_hit = ctl.node_limit_hit.load();
  out.result_limit_hit = ctl.result_limit_hit.load();
  out.canonical_sort();
  return out;
}

/// One task per prototile of the context.
inline std::vector<SearchTask> make_tasks(const CampaignContext& C) {
  std::vector<SearchTask> tasks;
  for (int t0 = 0; t0 < C.num_protos(); ++t0) tasks.push_back(make_task(C, t0));
  return tasks;
}

}  // namespace subsearch
