#include <catch2/catch_amalgamated.hpp>

#include "gadgets/translate.hpp"

using namespace gadgets;

namespace {

// One 1-toggle with a robot parked at its open entrance.
SystemOfGadgets toggle_system() {
  SystemOfGadgets sys;
  sys.types = {standard_library().at("1-toggle")};
  GadgetInstance inst;
  inst.type = 0;
  inst.initial_state = 0;
  inst.nodes = {0, 1};
  sys.instances.push_back(std::move(inst));
  sys.num_nodes = 2;
  finalize(sys);
  return sys;
}

}  // namespace

TEST_CASE("gadgets_to_petri shape for a lone 1-toggle") {
  auto sys = toggle_system();
  auto gp = gadgets_to_petri(sys);
  REQUIRE(validate_net(gp.net).empty());
  // Two state dishes plus one robot dish per location class.
  CHECK(gp.net.dishes.size() == 2 + (size_t)sys.classes.num_classes);
  CHECK(gp.net.rules.size() == 2);  // one per transition

  Configuration start = initial_configuration(sys);
  start.robots[sys.class_of_node(0)] = 1;
  Marking m = config_to_marking(sys, gp.map, start);
  CHECK(m[gp.map.state_dish(0, 0)] == 1);
  CHECK(m[gp.map.state_dish(0, 1)] == 0);
  CHECK(m[gp.map.robot_dish[sys.class_of_node(0)]] == 1);

  Configuration back = marking_to_config(sys, gp.map, m);
  CHECK(back == start);
}

TEST_CASE("marking_to_config rejects non-configuration markings") {
  auto sys = toggle_system();
  auto gp = gadgets_to_petri(sys);
  Marking m(gp.net.dishes.size(), 0);  // no state token at all
  CHECK_THROWS_AS(marking_to_config(sys, gp.map, m), NotAConfigurationMarking);
  m[gp.map.state_dish(0, 0)] = 1;
  m[gp.map.state_dish(0, 1)] = 1;  // two state tokens
  CHECK_THROWS_AS(marking_to_config(sys, gp.map, m), NotAConfigurationMarking);
}

TEST_CASE("gadget-to-net translation simulates exactly on small systems") {
  SECTION("lone 1-toggle with one robot") {
    auto sys = toggle_system();
    Configuration start = initial_configuration(sys);
    start.robots[sys.class_of_node(0)] = 1;
    auto rep = verify_gadget_to_net(sys, start, ReachCaps{});
    CHECK(rep.ok);
    CHECK(rep.conclusive);
  }
  SECTION("two locking 2-toggles sharing a node, two robots") {
    SystemOfGadgets sys;
    sys.types = {standard_library().at("locking-2-toggle")};
    GadgetInstance a{.type = 0, .initial_state = 1, .nodes = {0, 1, 2, 3}};
    GadgetInstance b{.type = 0, .initial_state = 1, .nodes = {3, 4, 5, 6}};
    sys.instances = {a, b};
    sys.num_nodes = 7;
    finalize(sys);
    Configuration start = initial_configuration(sys);
    start.robots[sys.class_of_node(0)] += 1;
    start.robots[sys.class_of_node(5)] += 1;
    auto rep = verify_gadget_to_net(sys, start, ReachCaps{});
    CHECK(rep.ok);
    CHECK(rep.conclusive);
  }
  SECTION("spawner feeding a destroyer through a toggle") {
    SystemOfGadgets sys;
    sys.types = {standard_library().at("1-toggle")};
    GadgetInstance inst{.type = 0, .initial_state = 0, .nodes = {1, 2}};
    sys.instances = {inst};
    sys.num_nodes = 4;
    sys.edges = {{0, 1}, {2, 3}};
    sys.spawners = {0};
    sys.destroyers = {3};
    finalize(sys);
    auto rep = verify_gadget_to_net(sys, initial_configuration(sys), ReachCaps{});
    CHECK(rep.ok);
    CHECK(rep.conclusive);
  }
}

TEST_CASE("petri_to_gadgets starting configuration projects back") {
  PetriNet net;
  net.dishes = {"a", "b"};
  net.rules = {Rule{{1, 0}, {0, 1}}};
  Marking start{2, 0};
  auto pg = petri_to_gadgets(net, start);
  REQUIRE(validate_system(pg.system).empty());
  CHECK(projects_to_marking(pg.system, pg.map, pg.start));
  CHECK(project_to_marking(pg.system, pg.map, pg.start) == start);
  CHECK(embedded_volume(pg.system, pg.map, pg.start) == 2);
}

TEST_CASE("net-to-gadget translation simulates exactly on small nets") {
  struct Case {
    PetriNet net;
    Marking start;
  };
  std::vector<Case> cases;
  // Token conversion.
  cases.push_back({{{"a", "b"}, {Rule{{1, 0}, {0, 1}}}}, {2, 0}});
  // Surplus input: 2a -> b (one input is surplus relative to one output).
  cases.push_back({{{"a", "b"}, {Rule{{2, 0}, {0, 1}}}}, {3, 0}});
  // Surplus output: a -> 2b.
  cases.push_back({{{"a", "b"}, {Rule{{1, 0}, {0, 2}}}}, {1, 0}});
  // Pure birth rule: nothing -> a.
  cases.push_back({{{"a"}, {Rule{{0}, {1}}}}, {0}});
  // Pure death rule: a -> nothing.
  cases.push_back({{{"a"}, {Rule{{1}, {0}}}}, {2}});
  // Two rules over two dishes.
  cases.push_back(
      {{{"a", "b"}, {Rule{{1, 0}, {0, 1}}, Rule{{0, 2}, {1, 0}}}}, {2, 0}});
  for (size_t i = 0; i < cases.size(); ++i) {
    INFO("case " << i);
    auto rep = verify_net_to_gadget(cases[i].net, cases[i].start, 4, 500000);
    CHECK(rep.ok);
    CHECK(rep.conclusive);
    if (!rep.ok) INFO(rep.detail);
  }
}
