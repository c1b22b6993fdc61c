// JSON file formats (all carry "format": 1) and the line-oriented trace text
// form.  Systems reference gadget types by name and robots by node id.
#pragma once

#include <json.hpp>

#include <sstream>
#include <string>

#include "gadgets/core.hpp"
#include "gadgets/counter.hpp"
#include "gadgets/petri.hpp"
#include "gadgets/two_player.hpp"
#include "gadgets/zero_player.hpp"

namespace gadgets {

using nlohmann::json;

inline void check_format(const json& j, const char* what) {
  if (!j.is_object() || j.value("format", 0) != 1)
    throw ParseError(std::string(what) + ": expected an object with format 1");
}

// --- gadget types -----------------------------------------------------------

inline json type_to_json(const GadgetType& t) {
  json jt;
  jt["name"] = t.name;
  jt["states"] = t.states;
  jt["locations"] = t.locations;
  json trs = json::array();
  for (const auto& tr : t.transitions)
    trs.push_back({t.states[tr.state], t.locations[tr.from],
                   t.locations[tr.to], t.states[tr.next]});
  jt["transitions"] = trs;
  if (t.tunnels) {
    json tn = json::array();
    for (auto [a, b] : *t.tunnels)
      tn.push_back({t.locations[a], t.locations[b]});
    jt["tunnels"] = tn;
  }
  return jt;
}

inline GadgetType type_from_json(const json& jt) {
  GadgetType t;
  t.name = jt.at("name").get<std::string>();
  t.states = jt.at("states").get<std::vector<std::string>>();
  t.locations = jt.at("locations").get<std::vector<std::string>>();
  for (const auto& tr : jt.at("transitions")) {
    if (!tr.is_array() || tr.size() != 4)
      throw ParseError(t.name + ": transition must be [state,from,to,next]");
    t.transitions.push_back({t.state_index(tr[0].get<std::string>()),
                             t.loc_index(tr[1].get<std::string>()),
                             t.loc_index(tr[2].get<std::string>()),
                             t.state_index(tr[3].get<std::string>())});
  }
  if (jt.contains("tunnels")) {
    std::vector<std::pair<LocId, LocId>> tn;
    for (const auto& p : jt.at("tunnels"))
      tn.emplace_back(t.loc_index(p[0].get<std::string>()),
                      t.loc_index(p[1].get<std::string>()));
    t.tunnels = std::move(tn);
  }
  return t;
}

// --- systems ----------------------------------------------------------------

inline json system_to_json(const SystemOfGadgets& sys,
                           const Configuration* robots = nullptr) {
  json j;
  j["format"] = 1;
  json types = json::array();
  for (const auto& t : sys.types) types.push_back(type_to_json(t));
  j["types"] = types;
  json insts = json::array();
  for (const auto& gi : sys.instances) {
    json ji;
    ji["type"] = sys.types[gi.type].name;
    ji["state"] = sys.types[gi.type].states[gi.initial_state];
    ji["nodes"] = gi.nodes;
    insts.push_back(std::move(ji));
  }
  j["instances"] = insts;
  j["nodes"] = sys.num_nodes;
  json conns = json::array();
  for (auto [a, b] : sys.edges) conns.push_back({a, b});
  j["connections"] = conns;
  j["directed"] = sys.directed;
  j["spawners"] = sys.spawners;
  j["destroyers"] = sys.destroyers;
  j["wins"] = sys.win_locations;
  if (robots) {
    json r = json::array();
    for (int n = 0; n < sys.num_nodes; ++n) {
      ClassId k = sys.class_of_node(n);
      // Emit each class count once, on its smallest node.
      bool first = true;
      for (int m = 0; m < n; ++m)
        if (sys.class_of_node(m) == k) first = false;
      if (first && robots->robots[k] > 0)
        r.push_back({n, robots->robots[k]});
    }
    j["robots"] = r;
  }
  return j;
}

struct LoadedSystem {
  SystemOfGadgets system;
  Configuration start;  // instance states + "robots" counts
};

inline LoadedSystem system_from_json(const json& j) {
  check_format(j, "system");
  LoadedSystem out;
  SystemOfGadgets& sys = out.system;
  for (const auto& jt : j.at("types")) sys.types.push_back(type_from_json(jt));
  auto type_index = [&](const std::string& name) {
    for (size_t i = 0; i < sys.types.size(); ++i)
      if (sys.types[i].name == name) return (int)i;
    throw ParseError("unknown gadget type: " + name);
  };
  for (const auto& ji : j.at("instances")) {
    GadgetInstance gi;
    gi.type = type_index(ji.at("type").get<std::string>());
    gi.initial_state =
        sys.types[gi.type].state_index(ji.at("state").get<std::string>());
    gi.nodes = ji.at("nodes").get<std::vector<int>>();
    sys.instances.push_back(std::move(gi));
  }
  sys.num_nodes = j.value("nodes", 0);
  for (const auto& gi : sys.instances)
    for (Node n : gi.nodes) sys.num_nodes = std::max(sys.num_nodes, n + 1);
  for (const auto& e : j.at("connections")) {
    sys.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    sys.num_nodes = std::max({sys.num_nodes, e[0].get<int>() + 1,
                              e[1].get<int>() + 1});
  }
  sys.directed = j.value("directed", false);
  sys.spawners = j.value("spawners", std::vector<int>{});
  sys.destroyers = j.value("destroyers", std::vector<int>{});
  sys.win_locations = j.value("wins", std::vector<int>{});
  finalize(sys);
  out.start = initial_configuration(sys);
  if (j.contains("robots"))
    for (const auto& r : j.at("robots"))
      out.start.robots[sys.class_of_node(r[0].get<int>())] +=
          r[1].get<int64_t>();
  return out;
}

// Target configuration: instance states by name plus robot counts by node.
inline json config_to_json(const SystemOfGadgets& sys,
                           const Configuration& cfg) {
  json j;
  j["format"] = 1;
  json st = json::array();
  for (size_t i = 0; i < sys.instances.size(); ++i)
    st.push_back(sys.type_of((int)i).states[cfg.states[i]]);
  j["states"] = st;
  json r = json::array();
  for (int n = 0; n < sys.num_nodes; ++n) {
    ClassId k = sys.class_of_node(n);
    bool first = true;
    for (int m = 0; m < n; ++m)
      if (sys.class_of_node(m) == k) first = false;
    if (first && cfg.robots[k] > 0) r.push_back({n, cfg.robots[k]});
  }
  j["robots"] = r;
  return j;
}

inline Configuration config_from_json(const SystemOfGadgets& sys,
                                      const json& j) {
  check_format(j, "configuration");
  Configuration cfg;
  const auto& st = j.at("states");
  if (st.size() != sys.instances.size())
    throw ParseError("configuration: wrong number of instance states");
  for (size_t i = 0; i < sys.instances.size(); ++i)
    cfg.states.push_back(
        sys.type_of((int)i).state_index(st[i].get<std::string>()));
  cfg.robots.assign(sys.classes.num_classes, 0);
  for (const auto& r : j.at("robots"))
    cfg.robots[sys.class_of_node(r[0].get<int>())] += r[1].get<int64_t>();
  return cfg;
}

// --- nets -------------------------------------------------------------------

inline json net_to_json(const PetriNet& net, const Marking* start = nullptr) {
  json j;
  j["format"] = 1;
  j["dishes"] = net.dishes;
  json rules = json::array();
  for (const auto& r : net.rules) rules.push_back({{"u", r.u}, {"v", r.v}});
  j["rules"] = rules;
  if (start) j["start"] = *start;
  return j;
}

struct LoadedNet {
  PetriNet net;
  Marking start;
};

inline LoadedNet net_from_json(const json& j) {
  check_format(j, "net");
  LoadedNet out;
  out.net.dishes = j.at("dishes").get<std::vector<std::string>>();
  for (const auto& jr : j.at("rules")) {
    Rule r;
    r.u = jr.at("u").get<Marking>();
    r.v = jr.at("v").get<Marking>();
    out.net.rules.push_back(std::move(r));
  }
  out.start = j.value("start", Marking(out.net.dishes.size(), 0));
  auto diags = validate_net(out.net);
  if (!diags.empty()) throw ParseError("net: " + diags.front());
  if (out.start.size() != out.net.dishes.size())
    throw ParseError("net: start marking has the wrong length");
  return out;
}

inline json marking_to_json(const Marking& m) { return json(m); }

// --- flipping-game instances -----------------------------------------------

inline json g4_to_json(const G4Instance& inst) {
  json j;
  j["format"] = 1;
  json vars = json::array();
  for (const auto& v : inst.vars)
    vars.push_back({{"name", v.name}, {"owner", v.owner}, {"init", v.init}});
  j["vars"] = vars;
  json clauses = json::array();
  for (const auto& c : inst.clauses) {
    json jc = json::array();
    for (const auto& lit : c)
      jc.push_back((lit.negated ? "!" : "") + inst.vars[lit.var].name);
    clauses.push_back(std::move(jc));
  }
  j["clauses"] = clauses;
  return j;
}

inline G4Instance g4_from_json(const json& j) {
  check_format(j, "g4");
  G4Instance inst;
  for (const auto& jv : j.at("vars"))
    inst.vars.push_back({jv.at("name").get<std::string>(),
                         jv.at("owner").get<int>(),
                         jv.value("init", false)});
  auto var_index = [&](const std::string& name) {
    for (size_t i = 0; i < inst.vars.size(); ++i)
      if (inst.vars[i].name == name) return (int)i;
    throw ParseError("g4: unknown variable " + name);
  };
  for (const auto& jc : j.at("clauses")) {
    std::vector<G4Literal> clause;
    for (const auto& jl : jc) {
      std::string s = jl.get<std::string>();
      bool neg = !s.empty() && s[0] == '!';
      clause.push_back({var_index(neg ? s.substr(1) : s), neg});
    }
    inst.clauses.push_back(std::move(clause));
  }
  return inst;
}

// --- moves, witnesses, traces ------------------------------------------------

inline json moves_to_json(const SystemOfGadgets& sys,
                          const std::vector<Move>& moves) {
  json j;
  j["format"] = 1;
  j["kind"] = "witness";
  json ms = json::array();
  for (const Move& m : moves) {
    if (m.kind == Move::Kind::Spawn) {
      Node rep = -1;
      for (Node s : sys.spawners)
        if (sys.class_of_node(s) == m.spawn_class) {
          rep = s;
          break;
        }
      ms.push_back({{"type", "spawn"}, {"node", rep}});
    } else {
      ms.push_back({{"type", "traverse"},
                    {"instance", m.instance},
                    {"transition", m.transition}});
    }
  }
  j["moves"] = ms;
  return j;
}

inline std::vector<Move> moves_from_json(const SystemOfGadgets& sys,
                                         const json& j) {
  check_format(j, "witness");
  if (j.value("kind", "") != "witness")
    throw ParseError("witness: kind must be \"witness\"");
  std::vector<Move> moves;
  for (const auto& jm : j.at("moves")) {
    std::string type = jm.at("type").get<std::string>();
    if (type == "spawn") {
      moves.push_back({Move::Kind::Spawn, -1, -1,
                       sys.class_of_node(jm.at("node").get<int>())});
    } else if (type == "traverse") {
      moves.push_back({Move::Kind::Traverse, jm.at("instance").get<int>(),
                       jm.at("transition").get<int>(), -1});
    } else {
      throw ParseError("witness: unknown move type " + type);
    }
  }
  return moves;
}

inline uint64_t world_hash(const WorldState& w) {
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](uint64_t v) { h = (h ^ v) * 0x100000001b3ull; };
  for (StateId s : w.states) mix((uint64_t)s);
  for (Node n : w.robots) mix((uint64_t)n);
  mix((uint64_t)w.round);
  return h;
}

inline json trace_to_json(const Trace& trace, const WorldState& final_world) {
  json j;
  j["format"] = 1;
  j["kind"] = "trace";
  json evs = json::array();
  for (const auto& ev : trace.events) {
    json je;
    je["round"] = ev.round;
    je["robot"] = ev.robot;
    je["path"] = ev.path;
    if (ev.traversal)
      je["traversal"] = {ev.traversal->first, ev.traversal->second};
    if (ev.stuck) je["stuck"] = true;
    if (ev.spawn) je["spawn"] = true;
    evs.push_back(std::move(je));
  }
  j["events"] = evs;
  j["rounds"] = final_world.round;
  j["final"] = {{"states", final_world.states},
                {"robots", final_world.robots},
                {"hash", world_hash(final_world)}};
  return j;
}

// One event per line: round, robot, path, transition (or spawn/stuck flags).
inline std::string trace_to_text(const Trace& trace) {
  std::ostringstream out;
  for (const auto& ev : trace.events) {
    out << ev.round << " " << ev.robot << " ";
    for (size_t i = 0; i < ev.path.size(); ++i) {
      if (i) out << "->";
      out << ev.path[i];
    }
    if (ev.traversal)
      out << " traverse " << ev.traversal->first << ":"
          << ev.traversal->second;
    if (ev.spawn) out << " spawn";
    if (ev.stuck) out << " stuck";
    out << "\n";
  }
  return out.str();
}

}  // namespace gadgets
