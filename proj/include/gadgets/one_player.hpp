// 1-player decision procedures: can a robot reach a class, and can the
// player drive the whole system to a target configuration.
#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gadgets/core.hpp"
#include "gadgets/petri.hpp"
#include "gadgets/translate.hpp"

namespace gadgets {

struct HasDestroyer : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact decision via the net translation and backward coverability.  Spawner
// classes are always reachable (spawn); destroyer classes are reachable iff
// some transition into them can ever fire, i.e. its inputs are coverable.
inline bool robot_reachability(const SystemOfGadgets& sys,
                               const Configuration& start,
                               ClassId target) {
  if (sys.classes.spawner_class[target]) return true;
  if (!sys.classes.destroyer_class[target] && start.robots[target] > 0)
    return true;
  GadgetsToPetri gp = gadgets_to_petri(sys);
  Marking m0 = config_to_marking(sys, gp.map, start);
  if (sys.classes.destroyer_class[target]) {
    for (size_t r = 0; r < gp.net.rules.size(); ++r) {
      auto [inst, tr] = gp.map.rule_source[r];
      const auto& t = sys.type_of(inst);
      if (sys.class_of(inst, t.transitions[tr].to) != target) continue;
      if (coverable(gp.net, m0, gp.net.rules[r].u)) return true;
    }
    return false;
  }
  return production(gp.net, m0, gp.map.robot_dish[target]);
}

struct ReconfigureResult {
  bool found = false;
  bool complete = true;  // false when a bounded search hit its caps
  std::vector<Move> witness;
};

namespace detail {
inline std::vector<Move> unwind(
    const std::unordered_map<Configuration, std::pair<Configuration, Move>,
                             ConfigurationHash>& parent,
    Configuration c, const Configuration& start) {
  std::vector<Move> moves;
  while (!(c == start)) {
    const auto& [prev, mv] = parent.at(c);
    moves.push_back(mv);
    c = prev;
  }
  std::reverse(moves.begin(), moves.end());
  return moves;
}
}  // namespace detail

// Without destroyers the robot total never decreases, so the search space
// below the target total is finite and the answer is exact.
inline ReconfigureResult reconfigure_no_destroyer(const SystemOfGadgets& sys,
                                                  const Configuration& start,
                                                  const Configuration& target) {
  for (ClassId k = 0; k < sys.classes.num_classes; ++k)
    if (sys.classes.destroyer_class[k])
      throw HasDestroyer("system has a destroyer class");
  int64_t target_total = 0, start_total = 0;
  for (ClassId k = 0; k < sys.classes.num_classes; ++k) {
    target_total += target.robots[k];
    start_total += start.robots[k];
  }
  ReconfigureResult out;
  if (start_total > target_total) return out;  // robots cannot disappear
  if (start == target) {
    out.found = true;
    return out;
  }
  std::unordered_map<Configuration, std::pair<Configuration, Move>,
                     ConfigurationHash>
      parent;
  std::deque<Configuration> frontier{start};
  std::unordered_set<Configuration, ConfigurationHash> seen{start};
  while (!frontier.empty()) {
    Configuration c = std::move(frontier.front());
    frontier.pop_front();
    for (const Move& m : legal_moves(sys, c)) {
      Configuration next = apply_move(sys, c, m);
      int64_t total = 0;
      for (int64_t r : next.robots) total += r;
      if (total > target_total) continue;
      if (!seen.insert(next).second) continue;
      parent.emplace(next, std::make_pair(c, m));
      if (next == target) {
        out.found = true;
        out.witness = detail::unwind(parent, next, start);
        return out;
      }
      frontier.push_back(std::move(next));
    }
  }
  return out;
}

// Bounded direct search in the general case (destroyers allowed).  Caps:
// robot_cap bounds robots at non-spawner classes, spawner_cap robots per
// spawner class, state_cap distinct configurations.
inline ReconfigureResult reconfigure_with_destroyer(
    const SystemOfGadgets& sys, const Configuration& start,
    const Configuration& target, const ReachCaps& caps) {
  ReconfigureResult out;
  auto within = [&](const Configuration& c) {
    int64_t total = 0;
    for (ClassId k = 0; k < sys.classes.num_classes; ++k) {
      if (sys.classes.spawner_class[k]) {
        if (c.robots[k] > caps.spawner_cap) return false;
      } else {
        total += c.robots[k];
      }
    }
    return total <= caps.robot_cap;
  };
  if (!within(start)) {
    out.complete = false;
    return out;
  }
  if (start == target) {
    out.found = true;
    return out;
  }
  std::unordered_map<Configuration, std::pair<Configuration, Move>,
                     ConfigurationHash>
      parent;
  std::deque<Configuration> frontier{start};
  std::unordered_set<Configuration, ConfigurationHash> seen{start};
  while (!frontier.empty()) {
    Configuration c = std::move(frontier.front());
    frontier.pop_front();
    for (const Move& m : legal_moves(sys, c)) {
      Configuration next = apply_move(sys, c, m);
      if (!within(next)) {
        out.complete = false;
        continue;
      }
      if (!seen.insert(next).second) continue;
      parent.emplace(next, std::make_pair(c, m));
      if (next == target) {
        out.found = true;
        out.witness = detail::unwind(parent, next, start);
        return out;
      }
      if (seen.size() > caps.state_cap) {
        out.complete = false;
        return out;
      }
      frontier.push_back(std::move(next));
    }
  }
  return out;
}

// Same question through the net translation: bounded exact reachability of
// the target marking.  Decides modulo spawner-class counts (the marking
// drops them), so callers compare against targets with no robots parked at
// spawner classes.
inline ReconfigureResult reconfigure_via_net(const SystemOfGadgets& sys,
                                             const Configuration& start,
                                             const Configuration& target,
                                             const ReachCaps& caps) {
  // Robots never rest at a destroyer class, so such targets are unreachable
  // (the marking would not see them and the search would find a false match).
  for (ClassId k = 0; k < sys.classes.num_classes; ++k)
    if (sys.classes.destroyer_class[k] && target.robots[k] > 0)
      return ReconfigureResult{.found = false, .complete = true};
  GadgetsToPetri gp = gadgets_to_petri(sys);
  Marking m0 = config_to_marking(sys, gp.map, start);
  Marking mt = config_to_marking(sys, gp.map, target);
  int64_t vol_cap = caps.robot_cap + (int64_t)sys.instances.size();
  ExactReachResult r =
      reachable_exact(gp.net, m0, mt, vol_cap, caps.state_cap);
  ReconfigureResult out;
  out.found = r.found;
  out.complete = r.complete;
  // Rules whose entrance is a spawner class consume no token; the gadget
  // witness needs an explicit spawn before each such traversal.
  Configuration cur = start;
  for (int rule : r.witness) {
    auto [inst, tr] = gp.map.rule_source[rule];
    ClassId from = sys.class_of(inst, sys.type_of(inst).transitions[tr].from);
    if (sys.classes.spawner_class[from] && cur.robots[from] < 1) {
      out.witness.push_back({Move::Kind::Spawn, -1, -1, from});
      cur = apply_move(sys, cur, out.witness.back());
    }
    out.witness.push_back({Move::Kind::Traverse, inst, tr, -1});
    cur = apply_move(sys, cur, out.witness.back());
  }
  return out;
}

// Replays a move witness; throws IllegalMove if it is not legal.
inline Configuration replay_moves(const SystemOfGadgets& sys,
                                  const Configuration& start,
                                  const std::vector<Move>& moves) {
  Configuration c = start;
  for (const Move& m : moves) c = apply_move(sys, c, m);
  return c;
}

}  // namespace gadgets
