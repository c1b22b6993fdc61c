// 3-counter machines: text format, interpreter, and the compiler that turns a
// program into a 0-player system of gadgets whose win location is reached iff
// the program halts.
#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "gadgets/core.hpp"
#include "gadgets/zero_player.hpp"

namespace gadgets {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeRegister : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OpCode { Inc, Dec, Jz, Halt };

struct Instruction {
  OpCode op = OpCode::Halt;
  int reg = 0;     // 1..3 for Inc/Dec/Jz
  int target = 0;  // 1-based instruction index, Jz only
};

struct CounterProgram {
  std::vector<Instruction> instructions;
};

// Text format, one instruction per line, 1-based indices:
//   i: INC r | i: DEC r | i: JZ r z | i: HALT
// Blank lines and lines starting with '#' are ignored.
inline CounterProgram parse_counter_program(const std::string& text) {
  CounterProgram prog;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    int idx;
    char colon;
    std::string op;
    if (!(ls >> idx >> colon >> op) || colon != ':')
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'i: OP ...'");
    if (idx != (int)prog.instructions.size() + 1)
      throw ParseError("line " + std::to_string(lineno) +
                       ": instruction index out of order");
    Instruction ins;
    if (op == "INC" || op == "DEC") {
      ins.op = op == "INC" ? OpCode::Inc : OpCode::Dec;
      if (!(ls >> ins.reg))
        throw ParseError("line " + std::to_string(lineno) +
                         ": missing register");
    } else if (op == "JZ") {
      ins.op = OpCode::Jz;
      if (!(ls >> ins.reg >> ins.target))
        throw ParseError("line " + std::to_string(lineno) +
                         ": JZ needs a register and a target");
    } else if (op == "HALT") {
      ins.op = OpCode::Halt;
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown opcode " +
                       op);
    }
    std::string rest;
    if (ls >> rest)
      throw ParseError("line " + std::to_string(lineno) + ": trailing tokens");
    prog.instructions.push_back(ins);
  }
  return prog;
}

inline std::string emit_counter_program(const CounterProgram& prog) {
  std::ostringstream out;
  for (size_t i = 0; i < prog.instructions.size(); ++i) {
    const auto& ins = prog.instructions[i];
    out << (i + 1) << ": ";
    switch (ins.op) {
      case OpCode::Inc: out << "INC " << ins.reg; break;
      case OpCode::Dec: out << "DEC " << ins.reg; break;
      case OpCode::Jz: out << "JZ " << ins.reg << " " << ins.target; break;
      case OpCode::Halt: out << "HALT"; break;
    }
    out << "\n";
  }
  return out.str();
}

inline std::vector<std::string> validate_program(const CounterProgram& prog) {
  std::vector<std::string> diags;
  if (prog.instructions.empty()) diags.push_back("empty program");
  for (size_t i = 0; i < prog.instructions.size(); ++i) {
    const auto& ins = prog.instructions[i];
    if (ins.op != OpCode::Halt && (ins.reg < 1 || ins.reg > 3))
      diags.push_back("instruction " + std::to_string(i + 1) +
                      ": register out of range");
    if (ins.op == OpCode::Jz &&
        (ins.target < 1 || ins.target > (int)prog.instructions.size()))
      diags.push_back("instruction " + std::to_string(i + 1) +
                      ": jump target out of range");
  }
  return diags;
}

struct MachineState {
  int pc = 1;  // 1-based; pc past the end means the machine idles forever
  std::array<int64_t, 3> regs{0, 0, 0};
  bool halted = false;
};

struct InterpretResult {
  bool halted = false;
  int64_t steps = 0;  // instructions executed (including the final HALT)
  MachineState state;
};

// Runs up to max_steps instructions.  DEC of a zero register throws
// NegativeRegister.  Running off the end of the program idles forever.
inline InterpretResult interpret(const CounterProgram& prog,
                                 int64_t max_steps) {
  InterpretResult r;
  MachineState& m = r.state;
  int n = (int)prog.instructions.size();
  while (r.steps < max_steps) {
    if (m.pc < 1 || m.pc > n) return r;  // idle: never halts
    const Instruction& ins = prog.instructions[m.pc - 1];
    ++r.steps;
    switch (ins.op) {
      case OpCode::Inc:
        m.regs[ins.reg - 1] += 1;
        m.pc += 1;
        break;
      case OpCode::Dec:
        if (m.regs[ins.reg - 1] == 0)
          throw NegativeRegister("DEC of zero register at pc " +
                                 std::to_string(m.pc));
        m.regs[ins.reg - 1] -= 1;
        m.pc += 1;
        break;
      case OpCode::Jz:
        m.pc = m.regs[ins.reg - 1] == 0 ? ins.target : m.pc + 1;
        break;
      case OpCode::Halt:
        m.halted = true;
        r.halted = true;
        return r;
    }
  }
  return r;
}

// Compiled form: a directed system with one spawner; a robot reaches `win`
// iff the program halts.
struct CompiledMachine {
  SystemOfGadgets system;
  Node win = -1;
  Node spawn = -1;
  Node dead = -1;
  int us_instance = -1;             // the set-up switch routing the executor
  int increment_instance = -1;
  std::array<int, 3> register_instance{-1, -1, -1};
  std::vector<int> instruction_instance;  // updsds per instruction
};

// Layout: a spawner feeds a set-up switch whose first (down) exit starts the
// executor robot at instruction 1; every later robot is routed up to the
// increment gadget's lock entrance where it waits to become a counter token.
// Each instruction is an updsds gadget: its tunnel marks it active and leads
// to the operation (increment selector, register decrement/jump-zero entrance,
// or the win node for HALT); its first switch chain advances the program
// counter and its second switch chain performs jumps.
inline CompiledMachine compile_counter(const CounterProgram& prog) {
  auto diags = validate_program(prog);
  if (!diags.empty()) throw ParseError("invalid program: " + diags.front());
  CompiledMachine cm;
  SystemOfGadgets& sys = cm.system;
  sys.directed = true;
  auto lib = standard_library();
  sys.types = {lib.at("us-switch"), lib.at("increment"), lib.at("register"),
               lib.at("updsds")};
  const int kUs = 0, kInc = 1, kReg = 2, kUpdsds = 3;

  auto fresh = [&sys] { return sys.num_nodes++; };
  auto add_instance = [&](int type, StateId s0) {
    GadgetInstance inst;
    inst.type = type;
    inst.initial_state = s0;
    for (size_t l = 0; l < sys.types[type].locations.size(); ++l)
      inst.nodes.push_back(fresh());
    sys.instances.push_back(std::move(inst));
    return (int)sys.instances.size() - 1;
  };
  auto at = [&](int inst, const std::string& loc) {
    return sys.node_of(inst, sys.type_of(inst).loc_index(loc));
  };
  auto wire = [&](Node a, Node b) { sys.edges.emplace_back(a, b); };

  cm.spawn = fresh();
  cm.win = fresh();
  cm.dead = fresh();
  sys.spawners = {cm.spawn};
  sys.win_locations = {cm.win};

  const auto& us_t = sys.types[kUs];
  cm.us_instance = add_instance(kUs, us_t.state_index("down"));
  cm.increment_instance = add_instance(kInc, 0 /* "0" */);
  const auto& reg_t = sys.types[kReg];
  for (int r = 0; r < 3; ++r)
    cm.register_instance[r] = add_instance(kReg, reg_t.state_index("O"));
  const auto& ud_t = sys.types[kUpdsds];
  int n = (int)prog.instructions.size();
  for (int i = 0; i < n; ++i)
    cm.instruction_instance.push_back(
        add_instance(kUpdsds, ud_t.state_index("down")));

  int US = cm.us_instance, INC = cm.increment_instance;
  auto REG = cm.register_instance;
  const auto& PC = cm.instruction_instance;
  Node pass_head = at(PC[0], "S1_in");
  Node jump_head = at(PC[0], "S2_in");

  wire(cm.spawn, at(US, "I"));
  wire(at(US, "O_down"), at(PC[0], "T_in"));  // the executor robot
  wire(at(US, "O_up"), at(INC, "lock_in"));   // every later robot

  for (int r = 0; r < 3; ++r) {
    std::string rs = std::to_string(r + 1);
    wire(at(INC, "sel_out_" + rs), pass_head);
    wire(at(INC, "lock_out_" + rs), at(REG[r], "proc_in"));
    wire(at(REG[r], "dec_out"), pass_head);
    wire(at(REG[r], "jz_out"), at(REG[r], "resp_in"));
    wire(at(REG[r], "proc_top_out"), at(REG[r], "proc_in"));
    wire(at(REG[r], "proc_sink_out"), cm.dead);
    wire(at(REG[r], "resp_top_out"), pass_head);
    wire(at(REG[r], "resp_bot_out"), jump_head);
  }

  for (int i = 0; i < n; ++i) {
    const Instruction& ins = prog.instructions[i];
    std::string rs = std::to_string(ins.reg);
    switch (ins.op) {
      case OpCode::Inc:
        wire(at(PC[i], "T_out"), at(INC, "sel_in_" + rs));
        break;
      case OpCode::Dec:
        wire(at(PC[i], "T_out"), at(REG[ins.reg - 1], "dec_in"));
        break;
      case OpCode::Jz:
        wire(at(PC[i], "T_out"), at(REG[ins.reg - 1], "jz_in"));
        break;
      case OpCode::Halt:
        wire(at(PC[i], "T_out"), cm.win);
        break;
    }
    Node next_tunnel = i + 1 < n ? at(PC[i + 1], "T_in") : cm.dead;
    Node next_pass = i + 1 < n ? at(PC[i + 1], "S1_in") : cm.dead;
    Node next_jump = i + 1 < n ? at(PC[i + 1], "S2_in") : cm.dead;
    wire(at(PC[i], "S1_out_up"), next_tunnel);
    wire(at(PC[i], "S1_out_down"), next_pass);
    wire(at(PC[i], "S2_out_up"),
         ins.op == OpCode::Jz ? at(PC[ins.target - 1], "T_in") : cm.dead);
    wire(at(PC[i], "S2_out_down"), next_jump);
  }

  finalize(sys);
  return cm;
}

// Round budget sufficient for `steps` machine steps of an n-instruction
// program: each step costs at most a constant plus one pass over the
// instruction chain, plus a constant warm-up.
inline int64_t round_budget(int64_t steps, int64_t program_length) {
  constexpr int64_t kRoundsPerStep = 3;
  return kRoundsPerStep * (steps + 4) * (program_length + 4);
}

struct EquivalenceReport {
  bool agree = false;
  bool halted = false;          // interpreter verdict within the step budget
  bool reached_win = false;     // simulation verdict within the round budget
  int64_t steps = 0;            // interpreter steps used
  int64_t rounds_used = 0;      // simulation rounds used (or budget if not)
  int64_t round_budget = 0;
};

// Runs interpreter and compiled simulation side by side: within calibrated
// budgets, the robot reaches the win location iff the program halts.
inline EquivalenceReport equivalence_check(const CounterProgram& prog,
                                           int64_t step_budget) {
  EquivalenceReport rep;
  InterpretResult ir = interpret(prog, step_budget);
  rep.halted = ir.halted;
  rep.steps = ir.steps;
  int64_t sim_steps = ir.halted ? ir.steps : step_budget;
  rep.round_budget = round_budget(sim_steps, (int64_t)prog.instructions.size());
  CompiledMachine cm = compile_counter(prog);
  ReachResult rr = reach_within(cm.system, cm.win, rep.round_budget);
  rep.reached_win = rr.reached;
  rep.rounds_used = rr.round;
  rep.agree = rep.halted == rep.reached_win;
  return rep;
}

}  // namespace gadgets
