#include <catch2/catch_amalgamated.hpp>

#include "gadgets/zero_player.hpp"

using namespace gadgets;

namespace {

struct Builder {
  SystemOfGadgets sys;
  Builder() { sys.directed = true; }
  Node node() { return sys.num_nodes++; }
  void edge(Node a, Node b) { sys.edges.emplace_back(a, b); }
  int instance(const GadgetType& t, StateId s0) {
    if (sys.types.empty() ||
        sys.types.back().name != t.name)
      sys.types.push_back(t);
    GadgetInstance gi;
    gi.type = (int)sys.types.size() - 1;
    gi.initial_state = s0;
    for (size_t l = 0; l < t.locations.size(); ++l) gi.nodes.push_back(node());
    sys.instances.push_back(std::move(gi));
    return (int)sys.instances.size() - 1;
  }
  SystemOfGadgets done() {
    finalize(sys);
    return sys;
  }
};

}  // namespace

TEST_CASE("spawner reaches its own node in round one") {
  Builder b;
  Node sp = b.node(), sink = b.node();
  b.edge(sp, sink);
  b.sys.spawners = {sp};
  auto sys = b.done();
  auto r = reach_within(sys, sp, 10);
  CHECK(r.reached);
  CHECK(r.round == 1);
  // The sink is only reached one round later, by the robot's first turn.
  auto r2 = reach_within(sys, sink, 10);
  CHECK(r2.reached);
  CHECK(r2.round == 2);
}

TEST_CASE("robot walks free edges until a gadget traversal") {
  auto lib = standard_library();
  Builder b;
  Node sp = b.node(), w1 = b.node(), w2 = b.node(), done = b.node();
  int tog = b.instance(lib.at("1-toggle"), 0);
  b.edge(sp, w1);
  b.edge(w1, w2);
  b.edge(w2, b.sys.node_of(tog, 0));
  b.edge(b.sys.node_of(tog, 1), done);
  b.sys.spawners = {sp};
  auto sys = b.done();
  REQUIRE(validate_directed(sys).empty());

  Simulator sim(sys);
  sim.round();  // robot appears at sp
  Trace trace;
  sim.round(&trace);  // walks sp->w1->w2->(A), traverses, stops at B
  // Two events: robot 0's traversal, plus the spawner emitting robot 1.
  REQUIRE(trace.events.size() == 2);
  const auto& ev = trace.events[0];
  CHECK(trace.events[1].spawn);
  REQUIRE(ev.traversal.has_value());
  CHECK(ev.traversal->first == tog);
  CHECK(ev.path.front() == sp);
  CHECK(ev.path.back() == sys.node_of(tog, 1));
  CHECK(sim.world().states[tog] == 1);

  // Next round the toggle's open transition is (1,B)->(0,A), so robot 0
  // traverses straight back to A before following any wire out of B.
  // Robot 1 (spawned last round) then walks up to A and flips it right back.
  sim.round();
  CHECK(sim.world().robots[0] == sys.node_of(tog, 0));
  CHECK(sim.world().robots[1] == sys.node_of(tog, 1));
  CHECK(sim.world().states[tog] == 1);
}

TEST_CASE("closed entrance means wait, not deadlock") {
  auto lib = standard_library();
  Builder b;
  Node sp = b.node();
  // The toggle starts in state 2, whose only open transition is B->A, so a
  // robot arriving at A waits there forever.
  int tog = b.instance(lib.at("1-toggle"), 1);
  b.edge(sp, b.sys.node_of(tog, 0));
  b.sys.spawners = {sp};
  auto sys = b.done();
  Simulator sim(sys);
  Trace trace;
  for (int i = 0; i < 5; ++i) sim.round(&trace);
  CHECK(sim.world().robots[0] == sys.node_of(tog, 0));
  CHECK(sim.world().states[tog] == 1);
  bool saw_stuck = false;
  for (const auto& ev : trace.events)
    if (ev.robot == 0 && ev.stuck) saw_stuck = true;
  CHECK(saw_stuck);
}

TEST_CASE("free-node cycle raises CycleWithoutGadget") {
  Builder b;
  Node sp = b.node(), a = b.node(), c = b.node();
  b.edge(sp, a);
  b.edge(a, c);
  b.edge(c, a);
  b.sys.spawners = {sp};
  auto sys = b.done();
  Simulator sim(sys);
  sim.round();
  CHECK_THROWS_AS(sim.round(), CycleWithoutGadget);
}

TEST_CASE("validate_directed flags bad degree") {
  Builder b;
  Node a = b.node(), c = b.node(), d = b.node();
  b.edge(a, c);
  b.edge(a, d);  // out-degree 2
  auto sys = b.done();
  CHECK_FALSE(validate_directed(sys).empty());
}

TEST_CASE("robots in spawn order observe earlier moves in the round") {
  auto lib = standard_library();
  Builder b;
  Node sp = b.node();
  int sw = b.instance(lib.at("us-switch"), 1);  // starts down
  b.edge(sp, b.sys.node_of(sw, 0));
  b.sys.spawners = {sp};
  auto sys = b.done();
  Simulator sim(sys);
  sim.round();
  sim.round();
  sim.round();
  // First robot exits down; all later robots exit up.
  CHECK(sim.world().robots[0] == sys.node_of(sw, 2));
  CHECK(sim.world().robots[1] == sys.node_of(sw, 1));
  CHECK(sim.world().states[sw] == 0);
}
