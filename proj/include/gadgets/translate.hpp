// Translations between systems of gadgets and dish/rule nets, in both
// directions, plus the bounded simulation checks used to validate them.
#pragma once

#include <string>
#include <vector>

#include "gadgets/core.hpp"
#include "gadgets/petri.hpp"

namespace gadgets {

struct NotAConfigurationMarking : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gadgets -> net.  One state dish per (instance, state); one robot dish per
// class that is neither spawner (source) nor destroyer (sink); one rule per
// (instance, transition).  Source transitions need no robot input, sink
// transitions produce no robot output, spawning needs nothing at all.
struct GadgetNetMap {
  std::vector<int> state_dish_base;  // per instance: dish of its state 0
  std::vector<int> robot_dish;       // per class: dish index or -1
  std::vector<std::pair<int, int>> rule_source;  // per rule: (instance, transition)

  int state_dish(int instance, StateId s) const {
    return state_dish_base[instance] + s;
  }
};

struct GadgetsToPetri {
  PetriNet net;
  GadgetNetMap map;
};

inline GadgetsToPetri gadgets_to_petri(const SystemOfGadgets& sys) {
  GadgetsToPetri out;
  PetriNet& net = out.net;
  GadgetNetMap& map = out.map;
  for (size_t i = 0; i < sys.instances.size(); ++i) {
    map.state_dish_base.push_back((int)net.dishes.size());
    const auto& t = sys.type_of((int)i);
    for (const auto& s : t.states)
      net.dishes.push_back("g" + std::to_string(i) + "." + s);
  }
  map.robot_dish.assign(sys.classes.num_classes, -1);
  for (ClassId k = 0; k < sys.classes.num_classes; ++k) {
    if (sys.classes.spawner_class[k] || sys.classes.destroyer_class[k])
      continue;
    map.robot_dish[k] = (int)net.dishes.size();
    net.dishes.push_back("c" + std::to_string(k));
  }
  size_t nd = net.dishes.size();
  for (size_t i = 0; i < sys.instances.size(); ++i) {
    const auto& t = sys.type_of((int)i);
    for (size_t k = 0; k < t.transitions.size(); ++k) {
      const auto& tr = t.transitions[k];
      // Robots never stand at a destroyer class, so a transition entered
      // from one can never fire; emitting it would let the net move freely.
      if (sys.classes.destroyer_class[sys.class_of((int)i, tr.from)]) continue;
      Rule r{Marking(nd, 0), Marking(nd, 0)};
      r.u[map.state_dish((int)i, tr.state)] += 1;
      r.v[map.state_dish((int)i, tr.next)] += 1;
      int from = map.robot_dish[sys.class_of((int)i, tr.from)];
      int to = map.robot_dish[sys.class_of((int)i, tr.to)];
      if (from >= 0) r.u[from] += 1;  // spawner entrances consume nothing
      if (to >= 0) r.v[to] += 1;      // destroyer exits produce nothing
      net.rules.push_back(std::move(r));
      map.rule_source.emplace_back((int)i, (int)k);
    }
    // Spawning at a spawner class is free; robots leaving it are modelled by
    // the transitions above needing no robot input, so no extra rule.
  }
  return out;
}

// Robots waiting at spawner classes are invisible to the net (spawning is
// free), so they are dropped here.
inline Marking config_to_marking(const SystemOfGadgets& sys,
                                 const GadgetNetMap& map,
                                 const Configuration& cfg) {
  size_t dishes = 0;
  for (size_t i = 0; i < sys.instances.size(); ++i)
    dishes += sys.type_of((int)i).states.size();
  for (int d : map.robot_dish)
    if (d >= 0) ++dishes;
  Marking m(dishes, 0);
  for (size_t i = 0; i < sys.instances.size(); ++i)
    m[map.state_dish((int)i, cfg.states[i])] = 1;
  for (ClassId k = 0; k < sys.classes.num_classes; ++k)
    if (map.robot_dish[k] >= 0) m[map.robot_dish[k]] = cfg.robots[k];
  return m;
}

// Inverse of config_to_marking; spawner-class counts come back as zero.
// Throws if some instance does not have exactly one state token.
inline Configuration marking_to_config(const SystemOfGadgets& sys,
                                       const GadgetNetMap& map,
                                       const Marking& m) {
  Configuration cfg;
  cfg.states.assign(sys.instances.size(), -1);
  cfg.robots.assign(sys.classes.num_classes, 0);
  for (size_t i = 0; i < sys.instances.size(); ++i) {
    const auto& t = sys.type_of((int)i);
    int64_t total = 0;
    for (size_t s = 0; s < t.states.size(); ++s) {
      int64_t tok = m[map.state_dish((int)i, (StateId)s)];
      total += tok;
      if (tok == 1) cfg.states[i] = (StateId)s;
    }
    if (total != 1)
      throw NotAConfigurationMarking("instance " + std::to_string(i) +
                                     " has " + std::to_string(total) +
                                     " state tokens");
  }
  for (ClassId k = 0; k < sys.classes.num_classes; ++k)
    if (map.robot_dish[k] >= 0) cfg.robots[k] = m[map.robot_dish[k]];
  return cfg;
}

// Net -> gadgets, built from symmetric self-closing doors and one control
// robot.  Each rule gets a door per consumed token (dish -> private
// intermediate) and a door per produced token (intermediate or spawner ->
// dish).  The control robot's round trip crosses every input door's control
// tunnel, then opens every output door, enforcing that a full firing moves
// exactly u tokens in and v tokens out.  Surplus inputs park in a holding
// class; surplus outputs are fed by a spawner.
struct NetGadgetMap {
  Node control_room = -1;
  Node spawner = -1;
  Node holding = -1;
  std::vector<Node> dish_node;            // per dish
  std::vector<std::vector<int>> in_door;  // per rule: input door instances
  std::vector<std::vector<int>> out_door; // per rule: output door instances
  std::vector<std::vector<Node>> intermediate;  // per rule: paired m_k nodes
};

struct PetriToGadgets {
  SystemOfGadgets system;
  Configuration start;
  NetGadgetMap map;
};

inline PetriToGadgets petri_to_gadgets(const PetriNet& net,
                                       const Marking& start) {
  PetriToGadgets out;
  SystemOfGadgets& sys = out.system;
  NetGadgetMap& map = out.map;
  sys.types = {standard_library().at("symmetric-self-closing-door")};
  const GadgetType& door = sys.types[0];
  const LocId A = 0, B = 1, C = 2, D = 3;

  auto fresh = [&sys] { return sys.num_nodes++; };
  auto wire = [&](Node a, Node b) { sys.edges.emplace_back(a, b); };
  auto add_door = [&] {
    GadgetInstance inst;
    inst.type = 0;
    inst.initial_state = 0;  // "1": entrance tunnel open, control tunnel shut
    for (int l = 0; l < 4; ++l) inst.nodes.push_back(fresh());
    sys.instances.push_back(std::move(inst));
    return (int)sys.instances.size() - 1;
  };

  map.control_room = fresh();
  map.spawner = fresh();
  map.holding = fresh();
  sys.spawners = {map.spawner};
  for (const auto& name : net.dishes) {
    (void)name;
    map.dish_node.push_back(fresh());
  }

  for (size_t ri = 0; ri < net.rules.size(); ++ri) {
    const Rule& rule = net.rules[ri];
    std::vector<int> inputs, outputs;  // dish index, one entry per token
    for (size_t d = 0; d < net.dishes.size(); ++d) {
      for (int64_t k = 0; k < rule.u[d]; ++k) inputs.push_back((int)d);
      for (int64_t k = 0; k < rule.v[d]; ++k) outputs.push_back((int)d);
    }
    size_t paired = std::min(inputs.size(), outputs.size());
    std::vector<int> ins, outs;
    std::vector<Node> mids;
    for (size_t k = 0; k < paired; ++k) mids.push_back(fresh());
    // Input doors: dish -> intermediate (or the holding class if surplus).
    for (size_t k = 0; k < inputs.size(); ++k) {
      int g = add_door();
      ins.push_back(g);
      wire(map.dish_node[inputs[k]], sys.node_of(g, A));
      wire(sys.node_of(g, B), k < paired ? mids[k] : map.holding);
    }
    // Output doors: intermediate (or the spawner if surplus) -> dish.
    for (size_t k = 0; k < outputs.size(); ++k) {
      int g = add_door();
      outs.push_back(g);
      wire(k < paired ? mids[k] : map.spawner, sys.node_of(g, C));
      wire(sys.node_of(g, D), map.dish_node[outputs[k]]);
    }
    // Control path: through every input door's control tunnel (C -> D, only
    // open once a token came in), then through every output door's entrance
    // tunnel (A -> B, opening it for the outgoing token), and back home.
    Node cur = map.control_room;
    for (int g : ins) {
      wire(cur, sys.node_of(g, C));
      cur = sys.node_of(g, D);
    }
    for (int g : outs) {
      wire(cur, sys.node_of(g, A));
      cur = sys.node_of(g, B);
    }
    if (cur != map.control_room) wire(cur, map.control_room);
    map.in_door.push_back(std::move(ins));
    map.out_door.push_back(std::move(outs));
    map.intermediate.push_back(std::move(mids));
  }
  finalize(sys);

  out.start = initial_configuration(sys);
  out.start.robots[sys.class_of_node(map.control_room)] = 1;
  for (size_t d = 0; d < net.dishes.size(); ++d)
    out.start.robots[sys.class_of_node(map.dish_node[d])] += start[d];
  return out;
}

// True when `cfg` projects onto a marking of the original net: the control
// robot is home, every door is fully closed (no token committed but not yet
// delivered), every intermediate is empty, and no robot waits at the
// spawner.  The holding class (spent surplus inputs) is ignored.
inline bool projects_to_marking(const SystemOfGadgets& sys,
                                const NetGadgetMap& map,
                                const Configuration& cfg) {
  if (cfg.robots[sys.class_of_node(map.control_room)] != 1) return false;
  if (cfg.robots[sys.class_of_node(map.spawner)] != 0) return false;
  for (StateId s : cfg.states)
    if (s != 0) return false;
  for (const auto& mids : map.intermediate)
    for (Node m : mids)
      if (cfg.robots[sys.class_of_node(m)] != 0) return false;
  return true;
}

// Token volume as the net sees it: robots in dishes and intermediates, plus
// one per open surplus door (a surplus input already spent into holding but
// not yet acknowledged by the control robot, or a surplus output the spawner
// owes).  With this measure, all volume changes happen during the control
// robot's pass, exactly mirroring an atomic rule firing.
inline int64_t embedded_volume(const SystemOfGadgets& sys,
                               const NetGadgetMap& map,
                               const Configuration& cfg) {
  int64_t vol = 0;
  std::vector<char> counted(sys.classes.num_classes, 0);
  for (Node dn : map.dish_node) {
    ClassId k = sys.class_of_node(dn);
    if (!counted[k]) {
      counted[k] = 1;
      vol += cfg.robots[k];
    }
  }
  for (const auto& mids : map.intermediate)
    for (Node m : mids) {
      ClassId k = sys.class_of_node(m);
      if (!counted[k]) {
        counted[k] = 1;
        vol += cfg.robots[k];
      }
    }
  for (size_t ri = 0; ri < map.in_door.size(); ++ri) {
    size_t paired = map.intermediate[ri].size();
    for (size_t k = paired; k < map.in_door[ri].size(); ++k)
      if (cfg.states[map.in_door[ri][k]] != 0) vol += 1;
    for (size_t k = paired; k < map.out_door[ri].size(); ++k)
      if (cfg.states[map.out_door[ri][k]] != 0) vol += 1;
  }
  return vol;
}

inline Marking project_to_marking(const SystemOfGadgets& sys,
                                  const NetGadgetMap& map,
                                  const Configuration& cfg) {
  Marking m(map.dish_node.size(), 0);
  for (size_t d = 0; d < map.dish_node.size(); ++d)
    m[d] = cfg.robots[sys.class_of_node(map.dish_node[d])];
  return m;
}

struct SimulationReport {
  bool ok = false;
  bool conclusive = false;  // both searches exhausted their bounded spaces
  std::string detail;
};

// Gadget reach set with robot counts at spawner classes pinned to one.
// Spawning is free and the marking ignores these counts, so any count is
// behaviourally equivalent to one: a robot is always available to leave, and
// arrivals vanish — exactly how the net treats spawner entrances and exits.
inline ConfigReachSet spawner_quotient_reach_set(const SystemOfGadgets& sys,
                                                 const Configuration& start,
                                                 const ReachCaps& caps) {
  auto norm = [&](Configuration c) {
    for (ClassId k = 0; k < sys.classes.num_classes; ++k)
      if (sys.classes.spawner_class[k]) c.robots[k] = 1;
    return c;
  };
  auto total = [&](const Configuration& c) {
    int64_t t = 0;
    for (ClassId k = 0; k < sys.classes.num_classes; ++k)
      if (!sys.classes.spawner_class[k]) t += c.robots[k];
    return t;
  };
  ConfigReachSet out;
  Configuration s0 = norm(start);
  if (total(s0) > caps.robot_cap) {
    out.complete = true;
    return out;
  }
  std::deque<Configuration> frontier;
  out.configs.insert(s0);
  frontier.push_back(s0);
  while (!frontier.empty()) {
    Configuration c = std::move(frontier.front());
    frontier.pop_front();
    for (const Move& m : legal_moves(sys, c)) {
      Configuration next = norm(apply_move(sys, c, m));
      if (total(next) > caps.robot_cap) continue;
      if (out.configs.insert(next).second) {
        if (out.configs.size() > caps.state_cap) return out;  // complete=false
        frontier.push_back(std::move(next));
      }
    }
  }
  out.complete = true;
  return out;
}

// Bounded check that gadgets_to_petri preserves behaviour exactly: the image
// of the gadget reach set under config_to_marking equals the net's forward
// reach set from the image of the start configuration.  Spawner-class robot
// counts are quotiented out on both sides.
inline SimulationReport verify_gadget_to_net(const SystemOfGadgets& sys,
                                             const Configuration& start,
                                             const ReachCaps& caps) {
  SimulationReport rep;
  GadgetsToPetri gp = gadgets_to_petri(sys);
  ConfigReachSet gs = spawner_quotient_reach_set(sys, start, caps);
  int64_t vol_cap = caps.robot_cap + (int64_t)sys.instances.size();
  ForwardReach fr =
      forward_reach(gp.net, config_to_marking(sys, gp.map, start), vol_cap,
                    caps.state_cap);
  rep.conclusive = gs.complete && fr.complete;
  MarkingSet image;
  for (const Configuration& c : gs.configs)
    image.insert(config_to_marking(sys, gp.map, c));
  if (image == fr.markings) {
    rep.ok = true;
    return rep;
  }
  for (const Marking& m : image)
    if (!fr.markings.contains(m)) {
      rep.detail = "gadget-side marking missing from the net reach set";
      return rep;
    }
  rep.detail = "net reaches a marking with no gadget-side counterpart";
  return rep;
}

// Reach set of a translated net, with the inert holding-class count
// quotiented out of the search keys and the volume cap applied to
// embedded_volume so that pruning matches the net's volume cap exactly.
inline ConfigReachSet embedded_reach_set(const PetriToGadgets& pg,
                                         int64_t volume_cap,
                                         size_t state_cap) {
  const SystemOfGadgets& sys = pg.system;
  ClassId hold = sys.class_of_node(pg.map.holding);
  auto norm = [&](Configuration c) {
    c.robots[hold] = 0;
    return c;
  };
  ConfigReachSet out;
  Configuration start = norm(pg.start);
  if (embedded_volume(sys, pg.map, start) > volume_cap) {
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
      Configuration next = norm(apply_move(sys, c, m));
      if (next.robots[sys.class_of_node(pg.map.spawner)] > 1) continue;
      if (embedded_volume(sys, pg.map, next) > volume_cap) continue;
      if (out.configs.insert(next).second) {
        if (out.configs.size() > state_cap) return out;  // complete=false
        frontier.push_back(std::move(next));
      }
    }
  }
  out.complete = true;
  return out;
}

// Bounded check that petri_to_gadgets preserves behaviour exactly: the dish
// counts of projectable gadget configurations equal the net reach set.
inline SimulationReport verify_net_to_gadget(const PetriNet& net,
                                             const Marking& start,
                                             int64_t volume_cap,
                                             size_t state_cap) {
  SimulationReport rep;
  PetriToGadgets pg = petri_to_gadgets(net, start);
  ForwardReach fr = forward_reach(net, start, volume_cap, state_cap);
  ConfigReachSet gs = embedded_reach_set(pg, volume_cap, state_cap);
  rep.conclusive = gs.complete && fr.complete;
  MarkingSet image;
  for (const Configuration& c : gs.configs) {
    if (!projects_to_marking(pg.system, pg.map, c)) continue;
    image.insert(project_to_marking(pg.system, pg.map, c));
  }
  if (image == fr.markings) {
    rep.ok = true;
    return rep;
  }
  for (const Marking& m : image)
    if (!fr.markings.contains(m)) {
      rep.detail = "gadget side reaches a dish vector the net cannot";
      return rep;
    }
  rep.detail = "net reaches a marking the gadget side cannot realize";
  return rep;
}

}  // namespace gadgets
