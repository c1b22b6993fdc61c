// Core gadget model: gadget types, systems of gadgets, multi-robot
// configurations, legal moves, and the standard gadget library.
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <unordered_set>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gadgets {

using StateId = int;  // index into GadgetType::states
using LocId = int;    // index into GadgetType::locations
using Node = int;     // global location / free node id
using ClassId = int;  // connected component of the connection graph

struct IllegalMove : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Transition {
  StateId state;
  LocId from;
  LocId to;
  StateId next;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct GadgetType {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::string> locations;
  std::vector<Transition> transitions;
  // Optional declared tunnel partition (pairs of location ids).
  std::optional<std::vector<std::pair<LocId, LocId>>> tunnels;

  int state_index(const std::string& s) const {
    for (size_t i = 0; i < states.size(); ++i)
      if (states[i] == s) return static_cast<int>(i);
    throw std::out_of_range("unknown state: " + s + " in " + name);
  }
  int loc_index(const std::string& l) const {
    for (size_t i = 0; i < locations.size(); ++i)
      if (locations[i] == l) return static_cast<int>(i);
    throw std::out_of_range("unknown location: " + l + " in " + name);
  }
};

struct GadgetInstance {
  int type = -1;            // index into SystemOfGadgets::types
  StateId initial_state = 0;
  std::vector<Node> nodes;  // global node per type location
};

// Connected components of the connection graph.  Robots within a class are
// interchangeable, so configurations store one count per class.
struct ClassInfo {
  int num_classes = 0;
  std::vector<ClassId> node_class;       // per node
  std::vector<char> spawner_class;       // per class
  std::vector<char> destroyer_class;     // per class
};

struct SystemOfGadgets {
  std::vector<GadgetType> types;
  std::vector<GadgetInstance> instances;
  int num_nodes = 0;
  std::vector<std::pair<Node, Node>> edges;
  bool directed = false;  // directed connection graph (0-player model)
  std::vector<Node> spawners;    // ordered: spawn order in the 0-player model
  std::vector<Node> destroyers;
  std::vector<Node> win_locations;

  ClassInfo classes;  // filled by finalize()

  const GadgetType& type_of(int instance) const {
    return types[instances[instance].type];
  }
  Node node_of(int instance, LocId loc) const {
    return instances[instance].nodes[loc];
  }
  ClassId class_of_node(Node n) const { return classes.node_class[n]; }
  ClassId class_of(int instance, LocId loc) const {
    return classes.node_class[node_of(instance, loc)];
  }
};

// Computes connection-graph classes (edges treated as undirected) and the
// spawner/destroyer class markers.  Call after any structural change.
inline void finalize(SystemOfGadgets& sys) {
  std::vector<int> parent(sys.num_nodes);
  for (int i = 0; i < sys.num_nodes; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : sys.edges) parent[find(a)] = find(b);

  ClassInfo ci;
  ci.node_class.assign(sys.num_nodes, -1);
  for (int i = 0; i < sys.num_nodes; ++i) {
    int r = find(i);
    if (ci.node_class[r] < 0) ci.node_class[r] = ci.num_classes++;
    ci.node_class[i] = ci.node_class[r];
  }
  ci.spawner_class.assign(ci.num_classes, 0);
  ci.destroyer_class.assign(ci.num_classes, 0);
  for (Node n : sys.spawners) ci.spawner_class[ci.node_class[n]] = 1;
  for (Node n : sys.destroyers) ci.destroyer_class[ci.node_class[n]] = 1;
  sys.classes = std::move(ci);
}

struct Configuration {
  std::vector<StateId> states;   // per instance
  std::vector<int64_t> robots;   // per class
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ConfigurationHash {
  size_t operator()(const Configuration& c) const {
    size_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (StateId s : c.states) mix(static_cast<uint64_t>(s));
    for (int64_t r : c.robots) mix(static_cast<uint64_t>(r));
    return h;
  }
};

inline Configuration initial_configuration(const SystemOfGadgets& sys) {
  Configuration c;
  for (const auto& inst : sys.instances) c.states.push_back(inst.initial_state);
  c.robots.assign(sys.classes.num_classes, 0);
  return c;
}

struct Move {
  enum class Kind { Traverse, Spawn };
  Kind kind = Kind::Traverse;
  int instance = -1;     // Traverse
  int transition = -1;   // index into the type's transition list
  ClassId spawn_class = -1;  // Spawn
  friend bool operator==(const Move&, const Move&) = default;
};

inline std::vector<std::string> validate_system(const SystemOfGadgets& sys) {
  std::vector<std::string> diags;
  for (const auto& t : sys.types) {
    for (size_t k = 0; k < t.transitions.size(); ++k) {
      const auto& tr = t.transitions[k];
      if (tr.state < 0 || tr.state >= (int)t.states.size() ||
          tr.next < 0 || tr.next >= (int)t.states.size())
        diags.push_back(t.name + ": transition " + std::to_string(k) +
                        " references an undeclared state");
      if (tr.from < 0 || tr.from >= (int)t.locations.size() ||
          tr.to < 0 || tr.to >= (int)t.locations.size())
        diags.push_back(t.name + ": transition " + std::to_string(k) +
                        " references an undeclared location");
      for (size_t j = 0; j < k; ++j)
        if (t.transitions[j] == tr)
          diags.push_back(t.name + ": duplicate transition " +
                          std::to_string(k));
    }
    if (t.tunnels) {
      auto in_pair = [&](LocId a, LocId b) {
        for (auto [x, y] : *t.tunnels)
          if ((x == a && y == b) || (x == b && y == a)) return true;
        return false;
      };
      for (const auto& tr : t.transitions)
        if (!in_pair(tr.from, tr.to))
          diags.push_back(t.name + ": transition leaves its declared tunnel");
    }
  }
  std::vector<int> owner(sys.num_nodes, -1);
  for (size_t i = 0; i < sys.instances.size(); ++i) {
    const auto& inst = sys.instances[i];
    if (inst.type < 0 || inst.type >= (int)sys.types.size()) {
      diags.push_back("instance " + std::to_string(i) + ": bad type index");
      continue;
    }
    const auto& t = sys.types[inst.type];
    if (inst.initial_state < 0 || inst.initial_state >= (int)t.states.size())
      diags.push_back("instance " + std::to_string(i) + ": bad initial state");
    if (inst.nodes.size() != t.locations.size())
      diags.push_back("instance " + std::to_string(i) +
                      ": node count != location count");
    for (size_t l = 0; l < inst.nodes.size(); ++l) {
      Node n = inst.nodes[l];
      if (n < 0 || n >= sys.num_nodes) {
        diags.push_back("instance " + std::to_string(i) + ": node out of range");
        continue;
      }
      for (size_t l2 = 0; l2 < l; ++l2)
        if (inst.nodes[l2] == n)
          diags.push_back("instance " + std::to_string(i) +
                          ": duplicate global location " + std::to_string(n));
      if (owner[n] >= 0)
        diags.push_back("node " + std::to_string(n) +
                        " belongs to more than one instance");
      owner[n] = (int)i;
    }
  }
  for (auto [a, b] : sys.edges)
    if (a < 0 || a >= sys.num_nodes || b < 0 || b >= sys.num_nodes)
      diags.push_back("edge endpoint out of range");
  for (size_t c = 0; c < sys.classes.spawner_class.size(); ++c)
    if (sys.classes.spawner_class[c] && sys.classes.destroyer_class[c])
      diags.push_back("class " + std::to_string(c) +
                      " is both a spawner and a destroyer class");
  return diags;
}

// Max out-degree 1 in the transition graph on (state, location) pairs.
inline bool is_deterministic(const GadgetType& t) {
  for (size_t i = 0; i < t.transitions.size(); ++i)
    for (size_t j = i + 1; j < t.transitions.size(); ++j)
      if (t.transitions[i].state == t.transitions[j].state &&
          t.transitions[i].from == t.transitions[j].from)
        return false;
  return true;
}

// Every transition has its inverse.
inline bool is_reversible(const GadgetType& t) {
  for (const auto& tr : t.transitions) {
    Transition inv{tr.next, tr.to, tr.from, tr.state};
    if (std::find(t.transitions.begin(), t.transitions.end(), inv) ==
        t.transitions.end())
      return false;
  }
  return true;
}

// Smallest (lexicographic by location order) partition of locations into
// pairs such that every transition stays within its pair, if one exists.
inline std::optional<std::vector<std::pair<LocId, LocId>>> tunnel_partition(
    const GadgetType& t) {
  int n = (int)t.locations.size();
  if (n % 2 != 0) return std::nullopt;
  std::vector<LocId> mate(n, -1);
  for (const auto& tr : t.transitions) {
    if (tr.from == tr.to) return std::nullopt;
    LocId a = std::min(tr.from, tr.to), b = std::max(tr.from, tr.to);
    if (mate[a] >= 0 && mate[a] != b) return std::nullopt;
    if (mate[b] >= 0 && mate[b] != a) return std::nullopt;
    mate[a] = b;
    mate[b] = a;
  }
  // Remaining unconstrained locations pair up in ascending order.
  std::vector<LocId> free;
  for (LocId l = 0; l < n; ++l)
    if (mate[l] < 0) free.push_back(l);
  for (size_t i = 0; i + 1 < free.size(); i += 2) {
    mate[free[i]] = free[i + 1];
    mate[free[i + 1]] = free[i];
  }
  std::vector<std::pair<LocId, LocId>> pairs;
  for (LocId l = 0; l < n; ++l)
    if (mate[l] > l) pairs.emplace_back(l, mate[l]);
  return pairs;
}

// Acyclic state-transition graph; a self-loop transition counts as a cycle.
inline bool is_dag(const GadgetType& t) {
  int n = (int)t.states.size();
  std::vector<std::vector<int>> adj(n);
  std::vector<int> indeg(n, 0);
  for (const auto& tr : t.transitions) {
    if (tr.state == tr.next) return false;
    adj[tr.state].push_back(tr.next);
    ++indeg[tr.next];
  }
  std::vector<int> queue;
  for (int s = 0; s < n; ++s)
    if (indeg[s] == 0) queue.push_back(s);
  int removed = 0;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    ++removed;
    for (int w : adj[v])
      if (--indeg[w] == 0) queue.push_back(w);
  }
  return removed == n;
}

inline std::vector<Move> legal_moves(const SystemOfGadgets& sys,
                                     const Configuration& cfg) {
  std::vector<Move> moves;
  for (size_t i = 0; i < sys.instances.size(); ++i) {
    const auto& t = sys.type_of((int)i);
    for (size_t k = 0; k < t.transitions.size(); ++k) {
      const auto& tr = t.transitions[k];
      if (tr.state != cfg.states[i]) continue;
      if (cfg.robots[sys.class_of((int)i, tr.from)] < 1) continue;
      moves.push_back(
          {Move::Kind::Traverse, (int)i, (int)k, -1});
    }
  }
  std::vector<char> seen(sys.classes.num_classes, 0);
  for (Node n : sys.spawners) {
    ClassId c = sys.class_of_node(n);
    if (!seen[c]) {
      seen[c] = 1;
      moves.push_back({Move::Kind::Spawn, -1, -1, c});
    }
  }
  return moves;
}

// Pure: returns the successor configuration.  A robot arriving at a
// destroyer class is removed immediately.
inline Configuration apply_move(const SystemOfGadgets& sys,
                                const Configuration& cfg, const Move& m) {
  Configuration out = cfg;
  if (m.kind == Move::Kind::Spawn) {
    if (m.spawn_class < 0 || m.spawn_class >= sys.classes.num_classes ||
        !sys.classes.spawner_class[m.spawn_class])
      throw IllegalMove("spawn at a non-spawner class");
    out.robots[m.spawn_class] += 1;
    return out;
  }
  if (m.instance < 0 || m.instance >= (int)sys.instances.size())
    throw IllegalMove("traverse of unknown instance");
  const auto& t = sys.type_of(m.instance);
  if (m.transition < 0 || m.transition >= (int)t.transitions.size())
    throw IllegalMove("traverse of unknown transition");
  const auto& tr = t.transitions[m.transition];
  if (tr.state != cfg.states[m.instance])
    throw IllegalMove("transition closed in current state");
  ClassId from = sys.class_of(m.instance, tr.from);
  ClassId to = sys.class_of(m.instance, tr.to);
  if (cfg.robots[from] < 1) throw IllegalMove("no robot at the entrance class");
  out.robots[from] -= 1;
  if (!sys.classes.destroyer_class[to]) out.robots[to] += 1;
  out.states[m.instance] = tr.next;
  return out;
}

struct ReachCaps {
  int64_t robot_cap = 4;        // max robots at non-spawner classes, total
  int64_t spawner_cap = 1;      // max robots per spawner class
  size_t state_cap = 1 << 20;   // max distinct configurations
};

struct ConfigReachSet {
  std::unordered_set<Configuration, ConfigurationHash> configs;
  bool complete = false;  // closure finished within the state cap
};

// Exhaustive closure of the configuration space under legal moves, pruned by
// the caps.  Robots at destroyer classes never exist, robots at spawner
// classes are capped separately (one waiting robot per spawner class is
// enough to enable every departure).
inline ConfigReachSet brute_reach_set(const SystemOfGadgets& sys,
                                      const Configuration& start,
                                      const ReachCaps& caps) {
  ConfigReachSet out;
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
    out.complete = true;
    return out;
  }
  std::deque<Configuration> frontier;
  out.configs.insert(start);
  frontier.push_back(start);
  while (!frontier.empty()) {
    Configuration c = std::move(frontier.front());
    frontier.pop_front();
    for (const Move& m : legal_moves(sys, c)) {
      Configuration next = apply_move(sys, c, m);
      if (!within(next)) continue;
      if (out.configs.insert(next).second) {
        if (out.configs.size() > caps.state_cap) return out;
        frontier.push_back(std::move(next));
      }
    }
  }
  out.complete = true;
  return out;
}

// The gadget library used throughout: toggles, the locking 2-toggle, the
// symmetric self-closing door, and the four pieces of the counter-machine
// construction.
inline std::map<std::string, GadgetType> standard_library() {
  std::map<std::string, GadgetType> lib;
  auto add = [&lib](GadgetType t) { lib[t.name] = std::move(t); };

  {
    GadgetType t{"1-toggle", {"1", "2"}, {"A", "B"}, {}, {{{0, 1}}}};
    t.transitions = {{0, 0, 1, 1}, {1, 1, 0, 0}};
    add(t);
  }
  {
    GadgetType t{"2-tunnel-toggle", {"1", "2"}, {"A", "B", "C", "D"}, {},
                 {{{0, 1}, {2, 3}}}};
    t.transitions = {{0, 0, 1, 1}, {0, 2, 3, 1}, {1, 1, 0, 0}, {1, 3, 2, 0}};
    add(t);
  }
  {
    // Nonleaf state "2"; crossing a tunnel locks the other one.
    GadgetType t{"locking-2-toggle", {"1", "2", "3"}, {"A", "B", "C", "D"}, {},
                 {{{0, 1}, {2, 3}}}};
    t.transitions = {{1, 0, 1, 0}, {1, 2, 3, 2}, {0, 1, 0, 1}, {2, 3, 2, 1}};
    add(t);
  }
  {
    GadgetType t{"symmetric-self-closing-door", {"1", "2"},
                 {"A", "B", "C", "D"}, {}, {{{0, 1}, {2, 3}}}};
    t.transitions = {{0, 0, 1, 1}, {1, 2, 3, 0}};
    add(t);
  }
  {
    // Set-up switch: the first robot through takes the bottom path and the
    // switch stays up forever after.
    GadgetType t{"us-switch", {"up", "down"}, {"I", "O_up", "O_down"}, {}, {}};
    t.transitions = {{0, 0, 1, 0}, {1, 0, 2, 0}};
    add(t);
  }
  {
    // A tunnel that sets the state up, plus two set-down switches.
    GadgetType t{"updsds",
                 {"up", "down"},
                 {"T_in", "T_out", "S1_in", "S1_out_up", "S1_out_down",
                  "S2_in", "S2_out_up", "S2_out_down"},
                 {},
                 {}};
    t.transitions = {
        {0, 0, 1, 0},  // (up, T_in) -> (up, T_out)
        {1, 0, 1, 0},  // (down, T_in) -> (up, T_out)
        {0, 2, 3, 1},  // (up, S1_in) -> (down, S1_out_up)
        {1, 2, 4, 1},  // (down, S1_in) -> (down, S1_out_down)
        {0, 5, 6, 1},  // (up, S2_in) -> (down, S2_out_up)
        {1, 5, 7, 1},  // (down, S2_in) -> (down, S2_out_down)
    };
    add(t);
  }
  {
    // Path selector (3 paths) + lock branch (1 entrance, 3 exits).
    GadgetType t{"increment",
                 {"0", "1", "2", "3"},
                 {"sel_in_1", "sel_out_1", "sel_in_2", "sel_out_2", "sel_in_3",
                  "sel_out_3", "lock_in", "lock_out_1", "lock_out_2",
                  "lock_out_3"},
                 {},
                 {}};
    t.transitions = {
        {0, 0, 1, 1}, {0, 2, 3, 2}, {0, 4, 5, 3},  // selector
        {1, 6, 7, 0}, {2, 6, 8, 0}, {3, 6, 9, 0},  // lock branch
    };
    add(t);
  }
  {
    // Selector (decrement / jump-zero), processing branch, response branch.
    GadgetType t{"register",
                 {"O", "D", "J"},
                 {"dec_in", "dec_out", "jz_in", "jz_out", "proc_in",
                  "proc_top_out", "proc_sink_out", "resp_in", "resp_top_out",
                  "resp_bot_out"},
                 {},
                 {}};
    t.transitions = {
        {0, 0, 1, 1},  // (O, dec_in) -> (D, dec_out)
        {0, 2, 3, 2},  // (O, jz_in) -> (J, jz_out)
        {1, 4, 6, 0},  // (D, proc_in) -> (O, proc_sink_out)
        {2, 4, 5, 0},  // (J, proc_in) -> (O, proc_top_out)
        {2, 7, 9, 0},  // (J, resp_in) -> (O, resp_bot_out)
        {0, 7, 8, 0},  // (O, resp_in) -> (O, resp_top_out)
    };
    add(t);
  }
  return lib;
}

}  // namespace gadgets
