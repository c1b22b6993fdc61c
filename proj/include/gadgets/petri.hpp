// Vector addition systems over "dishes": forward reachability under volume
// caps, backward coverability, production, and bounded exact reachability.
#pragma once

#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gadgets/core.hpp"

namespace gadgets {

using Marking = std::vector<int64_t>;

struct Rule {
  Marking u;  // consumed
  Marking v;  // produced
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct PetriNet {
  std::vector<std::string> dishes;
  std::vector<Rule> rules;
};

inline int64_t volume(const Marking& m) {
  return std::accumulate(m.begin(), m.end(), int64_t{0});
}

inline std::vector<std::string> validate_net(const PetriNet& net) {
  std::vector<std::string> diags;
  for (size_t r = 0; r < net.rules.size(); ++r) {
    if (net.rules[r].u.size() != net.dishes.size() ||
        net.rules[r].v.size() != net.dishes.size())
      diags.push_back("rule " + std::to_string(r) +
                      ": vector length != dish count");
    for (int64_t x : net.rules[r].u)
      if (x < 0) diags.push_back("rule " + std::to_string(r) + ": negative u");
    for (int64_t x : net.rules[r].v)
      if (x < 0) diags.push_back("rule " + std::to_string(r) + ": negative v");
  }
  return diags;
}

inline bool rule_enabled(const Rule& r, const Marking& m) {
  for (size_t i = 0; i < m.size(); ++i)
    if (m[i] < r.u[i]) return false;
  return true;
}

// Pure; returns nullopt when the rule is not enabled.
inline std::optional<Marking> apply_rule(const Rule& r, const Marking& m) {
  if (!rule_enabled(r, m)) return std::nullopt;
  Marking out = m;
  for (size_t i = 0; i < m.size(); ++i) out[i] += r.v[i] - r.u[i];
  return out;
}

struct MarkingHash {
  size_t operator()(const Marking& m) const {
    size_t h = 0xcbf29ce484222325ull;
    for (int64_t v : m)
      h ^= (uint64_t)v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

using MarkingSet = std::unordered_set<Marking, MarkingHash>;

struct ForwardReach {
  MarkingSet markings;   // reachable without ever exceeding the volume cap
  bool complete = false; // closure finished within the state cap
  bool pruned = false;   // some successor exceeded the volume cap
};

// BFS closure; successors with volume above volume_cap are pruned, and the
// search aborts (complete=false) when more than state_cap markings appear.
inline ForwardReach forward_reach(const PetriNet& net, const Marking& start,
                                  int64_t volume_cap, size_t state_cap) {
  ForwardReach out;
  if (volume(start) > volume_cap) {
    out.pruned = true;
    out.complete = true;
    return out;
  }
  std::deque<Marking> frontier;
  out.markings.insert(start);
  frontier.push_back(start);
  while (!frontier.empty()) {
    Marking m = std::move(frontier.front());
    frontier.pop_front();
    for (const Rule& r : net.rules) {
      auto next = apply_rule(r, m);
      if (!next) continue;
      if (volume(*next) > volume_cap) {
        out.pruned = true;
        continue;
      }
      if (out.markings.insert(*next).second) {
        if (out.markings.size() > state_cap) return out;  // complete=false
        frontier.push_back(std::move(*next));
      }
    }
  }
  out.complete = true;
  return out;
}

inline bool covers(const Marking& a, const Marking& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

// Backward coverability: maintains a minimal basis of markings from which the
// target is coverable; terminates by well-quasi-ordering of markings.
inline bool coverable(const PetriNet& net, const Marking& start,
                      const Marking& target) {
  std::vector<Marking> basis{target};
  if (covers(start, target)) return true;
  std::deque<Marking> work{target};
  size_t n = start.size();
  while (!work.empty()) {
    Marking m = std::move(work.front());
    work.pop_front();
    for (const Rule& r : net.rules) {
      // Minimal predecessor marking from which firing r covers m.
      Marking p(n);
      for (size_t i = 0; i < n; ++i)
        p[i] = std::max<int64_t>(m[i] - r.v[i], 0) + r.u[i];
      bool dominated = false;
      for (const Marking& b : basis)
        if (covers(p, b)) {
          dominated = true;
          break;
        }
      if (dominated) continue;
      if (covers(start, p)) return true;
      std::erase_if(basis, [&](const Marking& b) { return covers(b, p); });
      work.push_back(p);
      basis.push_back(std::move(p));
    }
  }
  return false;
}

// Can the net ever produce at least one token in `dish`?
inline bool production(const PetriNet& net, const Marking& start, int dish) {
  Marking target(net.dishes.size(), 0);
  target[dish] = 1;
  return coverable(net, start, target);
}

struct ExactReachResult {
  bool found = false;
  bool complete = false;            // search space exhausted within caps
  std::vector<int> witness;         // rule indices, start to target
};

// Bounded exact reachability with a firing-sequence witness.
inline ExactReachResult reachable_exact(const PetriNet& net,
                                        const Marking& start,
                                        const Marking& target,
                                        int64_t volume_cap, size_t state_cap) {
  ExactReachResult out;
  if (volume(start) > volume_cap) {
    out.complete = true;
    return out;
  }
  std::unordered_map<Marking, std::pair<Marking, int>, MarkingHash> parent;
  std::deque<Marking> frontier;
  parent.emplace(start, std::make_pair(Marking{}, -1));
  frontier.push_back(start);
  bool pruned = false;
  auto emit = [&](Marking m) {
    std::vector<int> rules;
    while (true) {
      auto& [prev, rule] = parent.at(m);
      if (rule < 0) break;
      rules.push_back(rule);
      m = prev;
    }
    std::reverse(rules.begin(), rules.end());
    return rules;
  };
  if (start == target) {
    out.found = true;
    out.complete = true;
    return out;
  }
  while (!frontier.empty()) {
    Marking m = std::move(frontier.front());
    frontier.pop_front();
    for (size_t ri = 0; ri < net.rules.size(); ++ri) {
      auto next = apply_rule(net.rules[ri], m);
      if (!next) continue;
      if (volume(*next) > volume_cap) {
        pruned = true;
        continue;
      }
      if (parent.contains(*next)) continue;
      parent.emplace(*next, std::make_pair(m, (int)ri));
      if (*next == target) {
        out.found = true;
        out.complete = true;
        out.witness = emit(*next);
        return out;
      }
      if (parent.size() > state_cap) return out;  // complete=false
      frontier.push_back(std::move(*next));
    }
  }
  // Exhausted under the volume cap; only conclusive if nothing was pruned.
  out.complete = !pruned;
  return out;
}

// Reduces coverability of `target` to production: adds a fresh dish T and a
// rule (target -> target + T); the original net covers target from a start
// marking iff the extended net can produce T.
struct CoverageAsProduction {
  PetriNet net;
  int dish = -1;  // index of T
};

inline CoverageAsProduction coverage_to_production(const PetriNet& net,
                                                   const Marking& target) {
  CoverageAsProduction out;
  out.net = net;
  out.dish = (int)out.net.dishes.size();
  out.net.dishes.push_back("__covered");
  for (Rule& r : out.net.rules) {
    r.u.push_back(0);
    r.v.push_back(0);
  }
  Rule probe;
  probe.u = target;
  probe.u.push_back(0);
  probe.v = target;
  probe.v.push_back(1);
  out.net.rules.push_back(std::move(probe));
  return out;
}

// Extends a marking of `net` to the coverage_to_production net.
inline Marking extend_marking(const Marking& m) {
  Marking out = m;
  out.push_back(0);
  return out;
}

}  // namespace gadgets
