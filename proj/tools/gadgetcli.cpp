// Command-line front end: parse/emit the JSON formats and delegate to the
// library's decision procedures.  Exit codes: 0 = yes/pass, 1 = no/fail,
// 2 = inconclusive (budget or draw), 3 = input error.  Results go to stdout
// as JSON; human-readable summaries go to stderr.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "gadgets/boxes.hpp"
#include "gadgets/formats.hpp"
#include "gadgets/one_player.hpp"
#include "gadgets/translate.hpp"

using namespace gadgets;
using nlohmann::json;

namespace {

constexpr int kYes = 0, kNo = 1, kInconclusive = 2, kInputError = 3;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << j.dump(2) << "\n";
  }
}

void emit_result(const json& j) { std::cout << j.dump(2) << "\n"; }

int value_to_exit(GameValue v) {
  switch (v) {
    case GameValue::Win: return kYes;
    case GameValue::Lose: return kNo;
    default: return kInconclusive;  // draw: no winner under optimal play
  }
}

int cmd_check(const std::string& sys_path) {
  LoadedSystem ls = system_from_json(read_json(sys_path));
  auto diags = validate_system(ls.system);
  if (ls.system.directed) diags = validate_directed(ls.system);
  json out;
  out["format"] = 1;
  out["diagnostics"] = diags;
  json props = json::array();
  for (const auto& t : ls.system.types) {
    json p;
    p["type"] = t.name;
    p["deterministic"] = is_deterministic(t);
    p["reversible"] = is_reversible(t);
    p["dag"] = is_dag(t);
    auto part = tunnel_partition(t);
    p["tunnels"] = part.has_value();
    props.push_back(std::move(p));
  }
  out["properties"] = props;
  emit_result(out);
  std::cerr << (diags.empty() ? "system is valid" : "system is invalid") << "\n";
  for (const auto& d : diags) std::cerr << "  " << d << "\n";
  return diags.empty() ? kYes : kNo;
}

int cmd_sim0(const std::string& sys_path, int64_t rounds, int target,
             const std::string& trace_path, const std::string& text_path) {
  LoadedSystem ls = system_from_json(read_json(sys_path));
  auto diags = validate_directed(ls.system);
  if (!diags.empty()) throw ParseError("sim0: " + diags.front());
  bool want_trace = !trace_path.empty() || !text_path.empty();
  Trace trace;
  Simulator sim(ls.system);
  if (target >= 0) sim.set_watch(target);
  int64_t reached_round = -1;
  for (int64_t r = 0; r < rounds; ++r) {
    sim.round(want_trace ? &trace : nullptr);
    if (target >= 0 && sim.watch_hit() && reached_round < 0)
      reached_round = sim.world().round;
    if (target >= 0 && reached_round >= 0) break;
  }
  json out = trace_to_json(want_trace ? trace : Trace{}, sim.world());
  out["reached"] = reached_round >= 0;
  if (reached_round >= 0) out["reached_round"] = reached_round;
  emit_result(out);
  if (!trace_path.empty()) write_output(trace_to_json(trace, sim.world()), trace_path);
  if (!text_path.empty()) {
    std::ofstream t(text_path);
    t << trace_to_text(trace);
  }
  std::cerr << "simulated " << sim.world().round << " rounds, "
            << sim.world().robots.size() << " robots\n";
  if (target < 0) return kYes;
  return reached_round >= 0 ? kYes : kInconclusive;
}

int cmd_compile_counter(const std::string& prog_path, const std::string& out_path) {
  CounterProgram prog = parse_counter_program(read_text(prog_path));
  CompiledMachine cm = compile_counter(prog);
  cm.system.win_locations = {cm.win};
  json out = system_to_json(cm.system);
  out["win"] = cm.win;
  out["spawn"] = cm.spawn;
  write_output(out, out_path);
  std::cerr << "compiled " << prog.instructions.size() << " instructions into "
            << cm.system.instances.size() << " gadgets\n";
  return kYes;
}

int cmd_equiv_counter(const std::string& prog_path, int64_t steps) {
  CounterProgram prog = parse_counter_program(read_text(prog_path));
  EquivalenceReport rep = equivalence_check(prog, steps);
  json out;
  out["format"] = 1;
  out["agree"] = rep.agree;
  out["halted"] = rep.halted;
  out["reached_win"] = rep.reached_win;
  out["steps"] = rep.steps;
  out["rounds_used"] = rep.rounds_used;
  out["round_budget"] = rep.round_budget;
  emit_result(out);
  std::cerr << (rep.agree ? "agree" : "DISAGREE") << ": interpreter "
            << (rep.halted ? "halted" : "did not halt") << ", robot "
            << (rep.reached_win ? "reached" : "did not reach") << " the win location\n";
  return rep.agree ? kYes : kNo;
}

int cmd_solve1(const std::string& sys_path, int node) {
  LoadedSystem ls = system_from_json(read_json(sys_path));
  if (node < 0 || node >= ls.system.num_nodes)
    throw ParseError("solve1: node out of range");
  bool yes = robot_reachability(ls.system, ls.start, ls.system.class_of_node(node));
  json out;
  out["format"] = 1;
  out["reachable"] = yes;
  emit_result(out);
  std::cerr << "node " << node << (yes ? " is" : " is not") << " reachable\n";
  return yes ? kYes : kNo;
}

int cmd_reconfig(const std::string& sys_path, const std::string& target_path,
                 const std::string& witness_path, const ReachCaps& caps) {
  LoadedSystem ls = system_from_json(read_json(sys_path));
  Configuration target = config_from_json(ls.system, read_json(target_path));
  bool has_destroyer = false;
  for (ClassId k = 0; k < ls.system.classes.num_classes; ++k)
    if (ls.system.classes.destroyer_class[k]) has_destroyer = true;
  ReconfigureResult res =
      has_destroyer ? reconfigure_with_destroyer(ls.system, ls.start, target, caps)
                    : reconfigure_no_destroyer(ls.system, ls.start, target);
  json out;
  out["format"] = 1;
  out["found"] = res.found;
  out["complete"] = res.complete;
  out["moves"] = res.witness.size();
  emit_result(out);
  if (res.found && !witness_path.empty())
    write_output(moves_to_json(ls.system, res.witness), witness_path);
  std::cerr << (res.found ? "reconfiguration found"
                          : res.complete ? "no reconfiguration exists"
                                         : "not found within bounds")
            << "\n";
  if (res.found) return kYes;
  return res.complete ? kNo : kInconclusive;
}

int cmd_to_petri(const std::string& sys_path, const std::string& out_path) {
  LoadedSystem ls = system_from_json(read_json(sys_path));
  GadgetsToPetri gp = gadgets_to_petri(ls.system);
  Marking start = config_to_marking(ls.system, gp.map, ls.start);
  write_output(net_to_json(gp.net, &start), out_path);
  std::cerr << "net with " << gp.net.dishes.size() << " dishes, "
            << gp.net.rules.size() << " rules\n";
  return kYes;
}

int cmd_from_petri(const std::string& net_path, const std::string& out_path) {
  LoadedNet ln = net_from_json(read_json(net_path));
  PetriToGadgets pg = petri_to_gadgets(ln.net, ln.start);
  write_output(system_to_json(pg.system, &pg.start), out_path);
  std::cerr << "system with " << pg.system.instances.size() << " doors\n";
  return kYes;
}

int cmd_cover(const std::string& net_path, const Marking& target) {
  LoadedNet ln = net_from_json(read_json(net_path));
  if (target.size() != ln.net.dishes.size())
    throw ParseError("cover: target has the wrong number of dishes");
  bool yes = coverable(ln.net, ln.start, target);
  json out;
  out["format"] = 1;
  out["coverable"] = yes;
  emit_result(out);
  std::cerr << (yes ? "coverable" : "not coverable") << "\n";
  return yes ? kYes : kNo;
}

int cmd_produce(const std::string& net_path, const std::string& dish) {
  LoadedNet ln = net_from_json(read_json(net_path));
  int d = -1;
  for (size_t i = 0; i < ln.net.dishes.size(); ++i)
    if (ln.net.dishes[i] == dish) d = (int)i;
  if (d < 0) {
    try {
      d = std::stoi(dish);
    } catch (...) {
      throw ParseError("produce: unknown dish " + dish);
    }
    if (d < 0 || (size_t)d >= ln.net.dishes.size())
      throw ParseError("produce: dish index out of range");
  }
  bool yes = production(ln.net, ln.start, d);
  json out;
  out["format"] = 1;
  out["producible"] = yes;
  emit_result(out);
  std::cerr << "dish " << ln.net.dishes[d] << (yes ? " is" : " is not")
            << " producible\n";
  return yes ? kYes : kNo;
}

int cmd_reach_exact(const std::string& net_path, const Marking& target,
                    int64_t volume_cap, size_t state_cap) {
  LoadedNet ln = net_from_json(read_json(net_path));
  if (target.size() != ln.net.dishes.size())
    throw ParseError("reach-exact: target has the wrong number of dishes");
  ExactReachResult res =
      reachable_exact(ln.net, ln.start, target, volume_cap, state_cap);
  json out;
  out["format"] = 1;
  out["found"] = res.found;
  out["complete"] = res.complete;
  out["witness"] = res.witness;
  emit_result(out);
  std::cerr << (res.found ? "reachable"
                          : res.complete ? "not reachable" : "inconclusive")
            << "\n";
  if (res.found) return kYes;
  return res.complete ? kNo : kInconclusive;
}

int cmd_solve2(const std::string& sys_path, int node, int mover,
               size_t state_cap) {
  LoadedSystem ls = system_from_json(read_json(sys_path));
  if (node < 0 || node >= ls.system.num_nodes)
    throw ParseError("solve2: node out of range");
  GameState init;
  init.states = ls.start.states;
  init.robot = ls.system.class_of_node(node);
  init.last_instance = -1;
  init.mover = mover;
  SolveOptions opt;
  opt.state_cap = state_cap;
  for (Node w : ls.system.win_locations) {
    opt.win_classes[0].push_back(ls.system.class_of_node(w));
    opt.win_classes[1].push_back(ls.system.class_of_node(w));
  }
  json out;
  out["format"] = 1;
  try {
    GameValue v = solve(ls.system, init, opt);
    out["value"] = to_string(v);
    emit_result(out);
    std::cerr << "value for the player to move: " << to_string(v) << "\n";
    return value_to_exit(v);
  } catch (const StateSpaceBudgetExceeded& e) {
    out["value"] = "unknown";
    out["error"] = e.what();
    emit_result(out);
    std::cerr << e.what() << "\n";
    return kInconclusive;
  }
}

int cmd_g4(const std::string& g4_path, bool via_gadgets,
           const std::string& system_out) {
  G4Instance inst = g4_from_json(read_json(g4_path));
  json out;
  out["format"] = 1;
  GameValue v;
  if (via_gadgets) {
    G4Translation tr = g4_to_gadgets(inst);
    if (!system_out.empty()) {
      Configuration cfg;
      cfg.states = tr.initial.states;
      cfg.robots.assign(tr.system.classes.num_classes, 0);
      cfg.robots[tr.initial.robot] = 1;
      write_output(system_to_json(tr.system, &cfg), system_out);
    }
    v = solve(tr.system, tr.initial);
  } else {
    if (!system_out.empty()) {
      G4Translation tr = g4_to_gadgets(inst);
      Configuration cfg;
      cfg.states = tr.initial.states;
      cfg.robots.assign(tr.system.classes.num_classes, 0);
      cfg.robots[tr.initial.robot] = 1;
      write_output(system_to_json(tr.system, &cfg), system_out);
    }
    v = g4_solve(inst);
  }
  out["value"] = to_string(v);
  emit_result(out);
  std::cerr << "value for player 0: " << to_string(v) << "\n";
  return value_to_exit(v);
}

int cmd_verify_box(const std::string& type_name, const std::string& sim,
                   int expect_len, bool odd) {
  auto lib = standard_library();
  GadgetType type;
  if (lib.count(type_name)) {
    type = lib.at(type_name);
  } else {
    type = type_from_json(read_json(type_name));
  }
  BoxedSubsystem box;
  GadgetType target;
  BoxOptions opt;
  opt.expected_crossing_len = expect_len;
  opt.require_odd = odd;
  if (sim == "identity") {
    box = identity_box(type);
    target = type;
    if (expect_len < 0) opt.expected_crossing_len = 1;
    opt.require_forced = false;
  } else {
    auto cert = find_tunnel_certificate(type);
    if (!cert) {
      std::cerr << "no tunnel certificate: the gadget is not a deterministic "
                   "reversible interacting k-tunnel gadget\n";
      return kNo;
    }
    if (sim == "tunnel") {
      box = build_directed_tunnel_sim(type, *cert);
      target = lib.at("1-toggle");
      if (expect_len < 0) opt.expected_crossing_len = 2;
    } else if (sim == "l2t") {
      box = build_l2t_sim(type, *cert);
      target = lib.at("locking-2-toggle");
      if (expect_len < 0) opt.expected_crossing_len = 9;
    } else {
      throw ParseError("verify-box: unknown simulation " + sim);
    }
  }
  BoxReport rep = verify_box(box, target, opt);
  json out;
  out["format"] = 1;
  out["passed"] = rep.passed;
  out["violations"] = rep.violations;
  emit_result(out);
  std::cerr << (rep.passed ? "box verified" : "box FAILED") << "\n";
  for (const auto& v : rep.violations) std::cerr << "  " << v << "\n";
  return rep.passed ? kYes : kNo;
}

int cmd_replay(const std::string& sys_path, const std::string& moves_path,
               const std::string& expect_path) {
  LoadedSystem ls = system_from_json(read_json(sys_path));
  json j = read_json(moves_path);
  std::string kind = j.value("kind", "");
  json out;
  out["format"] = 1;
  if (kind == "trace") {
    // Re-run the deterministic simulation and compare the final world hash.
    int64_t rounds = j.at("rounds").get<int64_t>();
    Simulator sim(ls.system);
    for (int64_t r = 0; r < rounds; ++r) sim.round();
    uint64_t h = world_hash(sim.world());
    uint64_t want = j.at("final").at("hash").get<uint64_t>();
    out["hash"] = h;
    out["match"] = (h == want);
    emit_result(out);
    std::cerr << (h == want ? "trace replays to the same final state"
                            : "trace hash MISMATCH")
              << "\n";
    return h == want ? kYes : kNo;
  }
  std::vector<Move> moves = moves_from_json(ls.system, j);
  try {
    Configuration final_cfg = replay_moves(ls.system, ls.start, moves);
    out["final"] = config_to_json(ls.system, final_cfg);
    if (!expect_path.empty()) {
      Configuration want = config_from_json(ls.system, read_json(expect_path));
      bool match = (final_cfg == want);
      out["match"] = match;
      emit_result(out);
      std::cerr << (match ? "witness replays to the expected configuration"
                          : "final configuration MISMATCH")
                << "\n";
      return match ? kYes : kNo;
    }
    emit_result(out);
    std::cerr << "witness replays legally (" << moves.size() << " moves)\n";
    return kYes;
  } catch (const IllegalMove& e) {
    out["error"] = e.what();
    emit_result(out);
    std::cerr << "illegal move: " << e.what() << "\n";
    return kNo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision procedures for systems of gadgets"};
  app.require_subcommand(1);

  std::string sys_path, net_path, prog_path, g4_path, target_path, out_path;
  std::string witness_path, trace_path, text_path, expect_path, dish, sim_kind;
  std::string type_name;
  Marking target_marking;
  int64_t rounds = 1000, steps = 100000, volume_cap = 16;
  size_t state_cap = 1 << 20;
  int target_node = -1, mover = 0, expect_len = -1;
  bool odd = false, via_gadgets = false;
  ReachCaps caps;

  auto* check = app.add_subcommand("check", "validate a system and report its properties");
  check->add_option("system", sys_path)->required();

  auto* sim0 = app.add_subcommand("sim0", "run the 0-player round simulation");
  sim0->add_option("system", sys_path)->required();
  sim0->add_option("--rounds", rounds, "round budget");
  sim0->add_option("--target", target_node, "stop when a robot touches this node");
  sim0->add_option("--trace", trace_path, "write the JSON trace here");
  sim0->add_option("--trace-text", text_path, "write the line-oriented trace here");

  auto* cc = app.add_subcommand("compile-counter", "compile a counter program to a system");
  cc->add_option("program", prog_path)->required();
  cc->add_option("-o,--output", out_path, "output file (default: stdout)");

  auto* ec = app.add_subcommand("equiv-counter", "compare interpreter and compiled system");
  ec->add_option("program", prog_path)->required();
  ec->add_option("--steps", steps, "interpreter step budget");

  auto* s1 = app.add_subcommand("solve1", "1-player robot reachability of a node's class");
  s1->add_option("system", sys_path)->required();
  s1->add_option("--node", target_node)->required();

  auto* rc = app.add_subcommand("reconfig", "targeted reconfiguration to a configuration");
  rc->add_option("system", sys_path)->required();
  rc->add_option("--target", target_path, "target configuration file")->required();
  rc->add_option("--witness", witness_path, "write the move witness here");
  rc->add_option("--robot-cap", caps.robot_cap);
  rc->add_option("--spawner-cap", caps.spawner_cap);
  rc->add_option("--state-cap", caps.state_cap);

  auto* tp = app.add_subcommand("to-petri", "translate a system to a dish/rule net");
  tp->add_option("system", sys_path)->required();
  tp->add_option("-o,--output", out_path);

  auto* fp = app.add_subcommand("from-petri", "translate a net to a system of doors");
  fp->add_option("net", net_path)->required();
  fp->add_option("-o,--output", out_path);

  auto* cv = app.add_subcommand("cover", "backward coverability of a target marking");
  cv->add_option("net", net_path)->required();
  cv->add_option("--target", target_marking, "target marking")->required();

  auto* pr = app.add_subcommand("produce", "can the net ever put a token in a dish");
  pr->add_option("net", net_path)->required();
  pr->add_option("--dish", dish, "dish name or index")->required();

  auto* re = app.add_subcommand("reach-exact", "bounded exact reachability of a marking");
  re->add_option("net", net_path)->required();
  re->add_option("--target", target_marking)->required();
  re->add_option("--volume-cap", volume_cap);
  re->add_option("--state-cap", state_cap);

  auto* s2 = app.add_subcommand("solve2", "2-player game value under the ko rule");
  s2->add_option("system", sys_path)->required();
  s2->add_option("--node", target_node, "robot start node")->required();
  s2->add_option("--mover", mover, "player to move first (0 or 1)");
  s2->add_option("--state-cap", state_cap);

  auto* g4 = app.add_subcommand("g4", "solve a variable-flipping game instance");
  g4->add_option("instance", g4_path)->required();
  g4->add_flag("--via-gadgets", via_gadgets, "solve the translated gadget game instead");
  g4->add_option("--system", out_path, "also write the translated system here");

  auto* vb = app.add_subcommand("verify-box", "build and verify a boxed simulation");
  vb->add_option("type", type_name, "library gadget name or type JSON file")->required();
  vb->add_option("--sim", sim_kind, "identity, tunnel, or l2t")->required();
  vb->add_option("--expect-len", expect_len, "required crossing length");
  vb->add_flag("--odd", odd, "require odd crossing lengths");

  auto* rp = app.add_subcommand("replay", "replay a witness or trace against a system");
  rp->add_option("system", sys_path)->required();
  rp->add_option("moves", witness_path, "witness or trace file")->required();
  rp->add_option("--expect", expect_path, "expected final configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(sys_path);
    if (sim0->parsed()) return cmd_sim0(sys_path, rounds, target_node, trace_path, text_path);
    if (cc->parsed()) return cmd_compile_counter(prog_path, out_path);
    if (ec->parsed()) return cmd_equiv_counter(prog_path, steps);
    if (s1->parsed()) return cmd_solve1(sys_path, target_node);
    if (rc->parsed()) return cmd_reconfig(sys_path, target_path, witness_path, caps);
    if (tp->parsed()) return cmd_to_petri(sys_path, out_path);
    if (fp->parsed()) return cmd_from_petri(net_path, out_path);
    if (cv->parsed()) return cmd_cover(net_path, target_marking);
    if (pr->parsed()) return cmd_produce(net_path, dish);
    if (re->parsed()) return cmd_reach_exact(net_path, target_marking, volume_cap, state_cap);
    if (s2->parsed()) return cmd_solve2(sys_path, target_node, mover, state_cap);
    if (g4->parsed()) return cmd_g4(g4_path, via_gadgets, out_path);
    if (vb->parsed()) return cmd_verify_box(type_name, sim_kind, expect_len, odd);
    if (rp->parsed()) return cmd_replay(sys_path, witness_path, expect_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
