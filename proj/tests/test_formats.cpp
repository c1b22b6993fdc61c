#include <catch2/catch_amalgamated.hpp>

#include "gadgets/formats.hpp"

using namespace gadgets;

namespace {

SystemOfGadgets sample_system() {
  auto lib = standard_library();
  SystemOfGadgets sys;
  sys.types = {lib.at("1-toggle"), lib.at("locking-2-toggle")};
  sys.instances = {GadgetInstance{.type = 0, .initial_state = 1, .nodes = {1, 2}},
                   GadgetInstance{.type = 1, .initial_state = 0, .nodes = {2, 3, 4, 5}}};
  sys.num_nodes = 7;
  sys.edges = {{0, 1}, {5, 6}};
  sys.spawners = {0};
  sys.destroyers = {6};
  sys.directed = false;
  finalize(sys);
  return sys;
}

}  // namespace

TEST_CASE("gadget type JSON round-trip") {
  for (const auto& [name, type] : standard_library()) {
    INFO(name);
    GadgetType back = type_from_json(type_to_json(type));
    CHECK(back.name == type.name);
    CHECK(back.states == type.states);
    CHECK(back.locations == type.locations);
    CHECK(back.transitions == type.transitions);
    CHECK(back.tunnels == type.tunnels);
  }
}

TEST_CASE("system JSON round-trip with robots") {
  auto sys = sample_system();
  Configuration start = initial_configuration(sys);
  start.robots[sys.class_of_node(1)] = 2;
  json j = system_to_json(sys, &start);
  CHECK(j.at("format") == 1);

  LoadedSystem loaded = system_from_json(j);
  const auto& s2 = loaded.system;
  CHECK(s2.num_nodes == sys.num_nodes);
  CHECK(s2.instances.size() == sys.instances.size());
  CHECK(s2.instances[0].initial_state == 1);
  CHECK(s2.edges == sys.edges);
  CHECK(s2.spawners == sys.spawners);
  CHECK(s2.destroyers == sys.destroyers);
  CHECK(loaded.start == start);
  // Serializing again yields the identical document.
  CHECK(system_to_json(s2, &loaded.start) == j);
}

TEST_CASE("configuration JSON round-trip") {
  auto sys = sample_system();
  Configuration cfg = initial_configuration(sys);
  cfg.states[1] = 2;
  cfg.robots[sys.class_of_node(3)] = 1;
  json j = config_to_json(sys, cfg);
  CHECK(config_from_json(sys, j) == cfg);
}

TEST_CASE("net JSON round-trip and validation") {
  PetriNet net;
  net.dishes = {"a", "b"};
  net.rules = {Rule{{1, 0}, {0, 2}}};
  Marking start{3, 0};
  json j = net_to_json(net, &start);
  LoadedNet loaded = net_from_json(j);
  CHECK(loaded.net.dishes == net.dishes);
  CHECK(loaded.net.rules == net.rules);
  CHECK(loaded.start == start);

  json bad = j;
  bad["rules"][0]["u"] = {1};  // arity mismatch
  CHECK_THROWS_AS(net_from_json(bad), ParseError);
  json nostart = j;
  nostart.erase("start");
  CHECK(net_from_json(nostart).start == Marking{0, 0});
}

TEST_CASE("flipping-game JSON round-trip with negation") {
  G4Instance inst;
  inst.vars = {{"x", 0, true}, {"y", 1, false}};
  inst.clauses = {{{0, false}, {1, true}}, {{1, false}}};
  json j = g4_to_json(inst);
  G4Instance back = g4_from_json(j);
  REQUIRE(back.vars.size() == 2);
  CHECK(back.vars[0].name == "x");
  CHECK(back.vars[0].owner == 0);
  CHECK(back.vars[0].init);
  REQUIRE(back.clauses.size() == 2);
  CHECK(back.clauses[0][1].var == 1);
  CHECK(back.clauses[0][1].negated);
  CHECK(g4_to_json(back) == j);
}

TEST_CASE("witness JSON round-trip") {
  auto sys = sample_system();
  std::vector<Move> moves = {{Move::Kind::Spawn, -1, -1, sys.class_of_node(0)},
                             {Move::Kind::Traverse, 0, 0, -1}};
  json j = moves_to_json(sys, moves);
  CHECK(j.at("kind") == "witness");
  auto back = moves_from_json(sys, j);
  REQUIRE(back.size() == 2);
  CHECK(back[0].kind == Move::Kind::Spawn);
  CHECK(back[0].spawn_class == moves[0].spawn_class);
  CHECK(back[1].kind == Move::Kind::Traverse);
  CHECK(back[1].instance == 0);
}

TEST_CASE("format field is checked") {
  json j;
  j["format"] = 2;
  CHECK_THROWS_AS(check_format(j, "system"), ParseError);
  json missing = json::object();
  CHECK_THROWS_AS(check_format(missing, "system"), ParseError);
}

TEST_CASE("trace serialization carries events and a final hash") {
  Trace trace;
  TraceEvent ev;
  ev.round = 0;
  ev.robot = 0;
  ev.path = {0, 1, 2};
  ev.traversal = {0, 1};
  trace.events.push_back(ev);
  TraceEvent sp;
  sp.round = 0;
  sp.robot = 1;
  sp.path = {0};
  sp.spawn = true;
  trace.events.push_back(sp);

  WorldState w;
  w.states = {1};
  w.robots = {2, 0};
  w.round = 1;
  json j = trace_to_json(trace, w);
  CHECK(j.at("kind") == "trace");
  CHECK(j.at("rounds") == 1);
  CHECK(j.at("events").size() == 2);
  CHECK(j.at("final").at("hash") == world_hash(w));

  std::string text = trace_to_text(trace);
  CHECK(text.find("0->1->2") != std::string::npos);
  CHECK(text.find("spawn") != std::string::npos);
}
