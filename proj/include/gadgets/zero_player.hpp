// Deterministic 0-player simulation: robots move in spawn order, one gadget
// traversal per robot per round, spawners emit one robot at the end of each
// round.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gadgets/core.hpp"

namespace gadgets {

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CycleWithoutGadget : SimulationError {
  using SimulationError::SimulationError;
};

// Precomputed adjacency for a directed system.
struct DirectedIndex {
  std::vector<int> out_edge;               // node -> node or -1
  std::vector<std::pair<int, int>> owner;  // node -> (instance, loc) or (-1,-1)
  std::vector<char> entrance;              // node is a from-location
};

inline DirectedIndex build_directed_index(const SystemOfGadgets& sys) {
  DirectedIndex idx;
  idx.out_edge.assign(sys.num_nodes, -1);
  idx.owner.assign(sys.num_nodes, {-1, -1});
  idx.entrance.assign(sys.num_nodes, 0);
  for (auto [a, b] : sys.edges) {
    if (idx.out_edge[a] >= 0)
      throw SimulationError("node " + std::to_string(a) +
                            " has more than one outgoing edge");
    idx.out_edge[a] = b;
  }
  for (size_t i = 0; i < sys.instances.size(); ++i) {
    const auto& t = sys.type_of((int)i);
    for (size_t l = 0; l < t.locations.size(); ++l) {
      Node n = sys.instances[i].nodes[l];
      idx.owner[n] = {(int)i, (int)l};
      for (const auto& tr : t.transitions)
        if (tr.from == (int)l) idx.entrance[n] = 1;
    }
  }
  return idx;
}

inline std::vector<std::string> validate_directed(const SystemOfGadgets& sys) {
  std::vector<std::string> diags = validate_system(sys);
  if (!sys.directed) diags.push_back("system is not marked directed");
  for (const auto& t : sys.types)
    if (!is_deterministic(t))
      diags.push_back(t.name + ": nondeterministic gadget in a 0-player system");
  std::vector<int> outdeg(sys.num_nodes, 0), indeg(sys.num_nodes, 0);
  for (auto [a, b] : sys.edges) {
    ++outdeg[a];
    ++indeg[b];
  }
  std::vector<char> owned(sys.num_nodes, 0);
  for (const auto& gi : sys.instances)
    for (Node n : gi.nodes) owned[n] = 1;
  for (int n = 0; n < sys.num_nodes; ++n) {
    if (outdeg[n] > 1)
      diags.push_back("node " + std::to_string(n) +
                      " has more than one outgoing edge");
    // A gadget location is either a pure merge point (only incoming edges)
    // or the start of a wire (one outgoing edge, no incoming).
    if (owned[n] && outdeg[n] > 0 && indeg[n] > 0)
      diags.push_back("gadget location " + std::to_string(n) +
                      " has both incoming and outgoing edges");
  }
  return diags;
}

struct WorldState {
  std::vector<StateId> states;  // per instance
  std::vector<Node> robots;     // per robot, in spawn order
  int64_t round = 0;
};

inline WorldState initial_world(const SystemOfGadgets& sys) {
  WorldState w;
  for (const auto& inst : sys.instances) w.states.push_back(inst.initial_state);
  return w;
}

struct TraceEvent {
  int64_t round = 0;
  int robot = -1;
  std::vector<Node> path;  // nodes visited this turn, starting position first
  // Traversal performed, if any: (instance, transition index).
  std::optional<std::pair<int, int>> traversal;
  bool stuck = false;
  bool spawn = false;  // robot appeared at path.front() this round
};

struct Trace {
  std::vector<TraceEvent> events;
};

// Owns the scratch state so that stuck-robot turns cost O(1) and no turn
// allocates unless a trace is requested.
class Simulator {
 public:
  explicit Simulator(const SystemOfGadgets& sys)
      : sys_(sys), idx_(build_directed_index(sys)), world_(initial_world(sys)),
        stamp_(sys.num_nodes, 0) {}

  const WorldState& world() const { return world_; }
  WorldState& world() { return world_; }
  const DirectedIndex& index() const { return idx_; }

  // True once any robot has touched `watch` (start, pass-through, spawn).
  void set_watch(Node n) {
    watch_ = n;
    for (Node r : world_.robots)
      if (r == watch_) watch_hit_ = true;
  }
  bool watch_hit() const { return watch_hit_; }

  // One robot turn: walk free edges until a gadget is traversed or the robot
  // gets stuck.  A closed entrance means "wait here and retry next round".
  TraceEvent turn(int robot, bool want_path = false) {
    TraceEvent ev;
    ev.round = world_.round;
    ev.robot = robot;
    Node cur = world_.robots[robot];
    if (want_path) ev.path.push_back(cur);
    if (cur == watch_) watch_hit_ = true;
    ++epoch_;
    stamp_[cur] = epoch_;
    for (;;) {
      if (idx_.entrance[cur]) {
        auto [inst, loc] = idx_.owner[cur];
        const auto& t = sys_.type_of(inst);
        int found = -1;
        for (size_t k = 0; k < t.transitions.size(); ++k)
          if (t.transitions[k].state == world_.states[inst] &&
              t.transitions[k].from == loc) {
            found = (int)k;
            break;
          }
        if (found < 0) {
          ev.stuck = true;
          return ev;
        }
        const auto& tr = t.transitions[found];
        world_.states[inst] = tr.next;
        cur = sys_.node_of(inst, tr.to);
        world_.robots[robot] = cur;
        if (want_path) ev.path.push_back(cur);
        if (cur == watch_) watch_hit_ = true;
        ev.traversal = {inst, found};
        return ev;
      }
      Node nxt = idx_.out_edge[cur];
      if (nxt < 0) {
        ev.stuck = true;
        return ev;
      }
      if (stamp_[nxt] == epoch_)
        throw CycleWithoutGadget("robot " + std::to_string(robot) +
                                 " loops through free nodes in round " +
                                 std::to_string(world_.round));
      stamp_[nxt] = epoch_;
      cur = nxt;
      world_.robots[robot] = cur;
      if (want_path) ev.path.push_back(cur);
      if (cur == watch_) watch_hit_ = true;
    }
  }

  // One full round: each existing robot takes a turn in spawn order
  // (observing earlier robots' changes), then every spawner emits one robot.
  void round(Trace* trace = nullptr) {
    size_t existing = world_.robots.size();
    for (size_t r = 0; r < existing; ++r) {
      TraceEvent ev = turn((int)r, trace != nullptr);
      if (trace) trace->events.push_back(std::move(ev));
    }
    for (Node s : sys_.spawners) {
      world_.robots.push_back(s);
      if (s == watch_) watch_hit_ = true;
      if (trace) {
        TraceEvent ev;
        ev.round = world_.round;
        ev.robot = (int)world_.robots.size() - 1;
        ev.path.push_back(s);
        ev.spawn = true;
        trace->events.push_back(std::move(ev));
      }
    }
    world_.round += 1;
  }

 private:
  const SystemOfGadgets& sys_;
  DirectedIndex idx_;
  WorldState world_;
  std::vector<uint32_t> stamp_;
  uint32_t epoch_ = 0;
  Node watch_ = -1;
  bool watch_hit_ = false;
};

// Convenience wrappers over Simulator.
inline TraceEvent robot_turn(Simulator& sim, int robot) {
  return sim.turn(robot, true);
}
inline void step_round(Simulator& sim, Trace* trace = nullptr) {
  sim.round(trace);
}

struct ReachResult {
  bool reached = false;
  int64_t round = 0;  // first round by whose end a robot touched the target
};

// Runs up to max_rounds rounds; reports the first round by whose end some
// robot has touched the target node (passing through counts; spawning at the
// target counts).  Round 0 means a robot starts on the target.
inline ReachResult reach_within(const SystemOfGadgets& sys, Node target,
                                int64_t max_rounds,
                                WorldState* final_world = nullptr,
                                Trace* trace = nullptr) {
  Simulator sim(sys);
  sim.set_watch(target);
  auto finish = [&](ReachResult r) {
    if (final_world) *final_world = sim.world();
    return r;
  };
  if (sim.watch_hit()) return finish({true, 0});
  for (int64_t round = 1; round <= max_rounds; ++round) {
    sim.round(trace);
    if (sim.watch_hit()) return finish({true, round});
  }
  return finish({false, max_rounds});
}

}  // namespace gadgets
