// 2-player game on a system of gadgets with the no-immediate-undo rule (a
// player may not traverse the gadget instance the opponent just used), a
// retrograde WIN/LOSE/DRAW solver, and the DNF flipping game it simulates.
#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "gadgets/core.hpp"

namespace gadgets {

struct StateSpaceBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GameValue { Win, Lose, Draw };

inline const char* to_string(GameValue v) {
  switch (v) {
    case GameValue::Win: return "WIN";
    case GameValue::Lose: return "LOSE";
    case GameValue::Draw: return "DRAW";
  }
  return "?";
}

// One shared robot; `last_instance` is the gadget the previous move used.
struct GameState {
  std::vector<StateId> states;
  ClassId robot = -1;
  int last_instance = -1;
  int mover = 0;  // 0 or 1
  friend bool operator==(const GameState&, const GameState&) = default;
};

struct GameStateHash {
  size_t operator()(const GameState& s) const {
    size_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (StateId x : s.states) mix((uint64_t)x);
    mix((uint64_t)s.robot);
    mix((uint64_t)(s.last_instance + 1));
    mix((uint64_t)s.mover);
    return h;
  }
};

struct GameMove {
  int instance = -1;
  int transition = -1;
};

inline std::vector<GameMove> game_moves(const SystemOfGadgets& sys,
                                        const GameState& s) {
  std::vector<GameMove> moves;
  for (size_t i = 0; i < sys.instances.size(); ++i) {
    if ((int)i == s.last_instance) continue;  // opponent just used it
    const auto& t = sys.type_of((int)i);
    for (size_t k = 0; k < t.transitions.size(); ++k) {
      const auto& tr = t.transitions[k];
      if (tr.state != s.states[i]) continue;
      if (sys.class_of((int)i, tr.from) != s.robot) continue;
      moves.push_back({(int)i, (int)k});
    }
  }
  return moves;
}

inline GameState game_apply(const SystemOfGadgets& sys, const GameState& s,
                            const GameMove& m) {
  GameState out = s;
  const auto& tr = sys.type_of(m.instance).transitions[m.transition];
  out.states[m.instance] = tr.next;
  out.robot = sys.class_of(m.instance, tr.to);
  out.last_instance = m.instance;
  out.mover = 1 - s.mover;
  return out;
}

struct SolveOptions {
  size_t state_cap = 5'000'000;
  // Per player: moving the robot into one of these classes wins immediately.
  std::array<std::vector<ClassId>, 2> win_classes;
};

// Value for the player to move in `initial`.  A player with no legal move
// loses; infinite play is a draw.  Retrograde fixed point over the reachable
// game graph.
inline GameValue solve(const SystemOfGadgets& sys, const GameState& initial,
                       const SolveOptions& opt = {}) {
  std::unordered_map<GameState, int, GameStateHash> ids;
  std::vector<GameState> states;
  std::vector<std::vector<int>> preds;
  std::vector<int> succ_left;
  std::vector<int8_t> label;  // 0 unknown, 1 win, 2 lose
  std::deque<int> resolved;

  auto intern = [&](const GameState& s) {
    auto [it, fresh] = ids.emplace(s, (int)states.size());
    if (fresh) {
      states.push_back(s);
      preds.emplace_back();
      succ_left.push_back(-1);
      label.push_back(0);
      if (states.size() > opt.state_cap)
        throw StateSpaceBudgetExceeded("game graph exceeds " +
                                       std::to_string(opt.state_cap) +
                                       " states");
    }
    return it->second;
  };

  int root = intern(initial);
  std::deque<int> frontier{root};
  std::vector<char> expanded;
  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    if ((size_t)id < expanded.size() && expanded[id]) continue;
    if ((size_t)id >= expanded.size()) expanded.resize(states.size(), 0);
    if (expanded[id]) continue;
    expanded[id] = 1;
    GameState s = states[id];
    auto moves = game_moves(sys, s);
    if (moves.empty()) {
      label[id] = 2;  // stuck: the mover loses
      resolved.push_back(id);
      continue;
    }
    const auto& wins = opt.win_classes[s.mover];
    bool won = false;
    std::vector<int> succs;
    for (const GameMove& m : moves) {
      GameState next = game_apply(sys, s, m);
      if (std::find(wins.begin(), wins.end(), next.robot) != wins.end()) {
        won = true;
        break;
      }
      succs.push_back(intern(next));
    }
    if (won) {
      label[id] = 1;
      resolved.push_back(id);
      continue;
    }
    succ_left[id] = (int)succs.size();
    for (int t : succs) {
      preds[t].push_back(id);
      frontier.push_back(t);
    }
  }
  expanded.resize(states.size(), 0);

  while (!resolved.empty()) {
    int id = resolved.front();
    resolved.pop_front();
    for (int p : preds[id]) {
      if (label[p]) continue;
      if (label[id] == 2) {
        label[p] = 1;  // some move leads to a lost opponent state
        resolved.push_back(p);
      } else if (--succ_left[p] == 0) {
        label[p] = 2;  // every move leads to a winning opponent state
        resolved.push_back(p);
      }
    }
  }
  switch (label[root]) {
    case 1: return GameValue::Win;
    case 2: return GameValue::Lose;
    default: return GameValue::Draw;
  }
}

// ---------------------------------------------------------------------------
// The DNF flipping game: players own variables, take turns flipping one of
// their own variables or passing, and a player wins the moment the formula
// (a disjunction of conjunctive clauses) is satisfied after their move.

struct G4Literal {
  int var = 0;          // index into G4Instance::vars
  bool negated = false;
};

struct G4Var {
  std::string name;
  int owner = 0;  // 0 or 1
  bool init = false;
};

struct G4Instance {
  std::vector<G4Var> vars;
  std::vector<std::vector<G4Literal>> clauses;
};

inline std::vector<std::string> validate_g4(const G4Instance& inst) {
  std::vector<std::string> diags;
  for (const auto& v : inst.vars)
    if (v.owner != 0 && v.owner != 1)
      diags.push_back("variable " + v.name + ": owner must be 0 or 1");
  for (size_t c = 0; c < inst.clauses.size(); ++c) {
    if (inst.clauses[c].empty())
      diags.push_back("clause " + std::to_string(c) + " is empty");
    for (const auto& lit : inst.clauses[c])
      if (lit.var < 0 || lit.var >= (int)inst.vars.size())
        diags.push_back("clause " + std::to_string(c) +
                        ": unknown variable index");
  }
  return diags;
}

inline bool g4_satisfied(const G4Instance& inst, uint64_t assignment) {
  for (const auto& clause : inst.clauses) {
    bool all = true;
    for (const auto& lit : clause) {
      bool val = (assignment >> lit.var) & 1;
      if (lit.negated) val = !val;
      if (!val) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

inline uint64_t g4_initial_assignment(const G4Instance& inst) {
  uint64_t a = 0;
  for (size_t v = 0; v < inst.vars.size(); ++v)
    if (inst.vars[v].init) a |= uint64_t{1} << v;
  return a;
}

// Retrograde solve of the flipping game itself; value for player 0 moving
// first.  Rejects instances that are already satisfied.
inline GameValue g4_solve(const G4Instance& inst) {
  auto diags = validate_g4(inst);
  if (!diags.empty()) throw InvalidInstance(diags.front());
  if (inst.vars.size() > 20) throw InvalidInstance("too many variables");
  uint64_t init = g4_initial_assignment(inst);
  if (g4_satisfied(inst, init))
    throw InvalidInstance("formula already satisfied at the start");
  size_t n = inst.vars.size();
  size_t total = (size_t{1} << n) * 2;  // (assignment, mover)
  auto key = [&](uint64_t a, int mover) { return (size_t)(a * 2 + mover); };
  // Successors: flips that do not immediately win, plus pass.
  std::vector<int8_t> label(total, 0);
  std::vector<int> succ_left(total, 0);
  std::vector<std::vector<size_t>> preds(total);
  std::deque<size_t> resolved;
  for (uint64_t a = 0; a < (uint64_t{1} << n); ++a) {
    if (g4_satisfied(inst, a)) continue;  // unreachable except transiently
    for (int mover = 0; mover < 2; ++mover) {
      size_t id = key(a, mover);
      bool wins = false;
      std::vector<size_t> succs;
      for (size_t v = 0; v < n; ++v) {
        if (inst.vars[v].owner != mover) continue;
        uint64_t b = a ^ (uint64_t{1} << v);
        if (g4_satisfied(inst, b)) {
          wins = true;
          break;
        }
        succs.push_back(key(b, 1 - mover));
      }
      if (wins) {
        label[id] = 1;
        resolved.push_back(id);
        continue;
      }
      succs.push_back(key(a, 1 - mover));  // pass
      succ_left[id] = (int)succs.size();
      for (size_t t : succs) preds[t].push_back(id);
    }
  }
  while (!resolved.empty()) {
    size_t id = resolved.front();
    resolved.pop_front();
    for (size_t p : preds[id]) {
      if (label[p]) continue;
      if (label[id] == 2) {
        label[p] = 1;
        resolved.push_back(p);
      } else if (--succ_left[p] == 0) {
        label[p] = 2;
        resolved.push_back(p);
      }
    }
  }
  switch (label[key(init, 0)]) {
    case 1: return GameValue::Win;
    case 2: return GameValue::Lose;
    default: return GameValue::Draw;
  }
}

// ---------------------------------------------------------------------------
// Translation of the flipping game to a 2-player gadget game built from
// locking 2-toggles and 1-toggles.
//
// Each player gets a binary tree of locking-2-toggle pairs ("descend left"
// or "descend right") whose leaves are flipping loops, one per owned
// variable plus one pass loop.  A loop traverses two gadgets per literal
// occurrence of its variable (a clause gadget and a pacing dummy), so one
// circuit flips every occurrence and returns the robot with the turn parity
// intact.  A shared check room reachable from every loop leads through each
// clause's literal tunnels to a dead end; completing a clause path strands
// the opponent.  Ko on the gadget pair at each tree node limits every turn
// to exactly one loop circuit (or a pass), and a single alternator toggle
// hands the robot between the two trees.

struct G4Translation {
  SystemOfGadgets system;
  GameState initial;
  Node check_room = -1;
  Node finish = -1;
  std::array<Node, 2> root{-1, -1};
  std::vector<Node> loop_entry;  // per variable (by index), then pass loops
};

inline G4Translation g4_to_gadgets(const G4Instance& inst) {
  auto diags = validate_g4(inst);
  if (!diags.empty()) throw InvalidInstance(diags.front());
  uint64_t init = g4_initial_assignment(inst);
  if (g4_satisfied(inst, init))
    throw InvalidInstance("formula already satisfied at the start");

  G4Translation out;
  SystemOfGadgets& sys = out.system;
  auto lib = standard_library();
  sys.types = {lib.at("locking-2-toggle"), lib.at("1-toggle")};
  const int kL2T = 0, kT1 = 1;
  // locking-2-toggle: states 1/2/3 are ids 0/1/2; tunnels (A,B) and (C,D).
  const StateId kLeaf1 = 0, kNonleaf = 1;
  const LocId A = 0, B = 1, C = 2, D = 3;

  auto fresh = [&sys] { return sys.num_nodes++; };
  auto wire = [&](Node a, Node b) { sys.edges.emplace_back(a, b); };
  auto add = [&](int type, StateId s0) {
    GadgetInstance gi;
    gi.type = type;
    gi.initial_state = s0;
    for (size_t l = 0; l < sys.types[type].locations.size(); ++l)
      gi.nodes.push_back(fresh());
    sys.instances.push_back(std::move(gi));
    return (int)sys.instances.size() - 1;
  };
  auto loc = [&](int g, LocId l) { return sys.node_of(g, l); };

  out.check_room = fresh();
  out.finish = fresh();
  out.loop_entry.assign(inst.vars.size() + 2, -1);

  // Clause gadgets: one locking 2-toggle per literal occurrence.  Tunnel
  // (A,B) sits in the owner's flipping loop; tunnel (C,D) sits in the
  // clause path.  Nonleaf state <=> the literal is currently true.
  struct Occurrence {
    int gadget;
    G4Literal lit;
  };
  std::vector<std::vector<Occurrence>> clause_occs(inst.clauses.size());
  std::vector<std::vector<int>> var_occs(inst.vars.size());
  for (size_t c = 0; c < inst.clauses.size(); ++c)
    for (const auto& lit : inst.clauses[c]) {
      bool val = ((init >> lit.var) & 1) != 0;
      bool lit_true = lit.negated ? !val : val;
      int g = add(kL2T, lit_true ? kNonleaf : kLeaf1);
      clause_occs[c].push_back({g, lit});
      var_occs[lit.var].push_back(g);
    }

  // Flipping loop for one leaf.  `occs` are that variable's clause gadgets;
  // a dummy gadget after each occurrence keeps the circuit even.  A loop
  // with no occurrences (pass, or an unused variable) is two 1-toggles.
  auto build_loop = [&](const std::vector<int>& occs,
                        const std::vector<char>& negs, bool value) {
    Node entry = fresh();
    std::vector<Node> ring;  // n_0 = entry, n_1, ..., n_{2m-1}
    size_t m = occs.size();
    if (m == 0) {
      Node n1 = fresh();
      int g0 = add(kT1, 0), g1 = add(kT1, 0);
      wire(entry, loc(g0, A));
      wire(loc(g0, B), n1);
      wire(n1, loc(g1, A));
      wire(loc(g1, B), entry);
      return entry;
    }
    ring.push_back(entry);
    for (size_t k = 1; k < 2 * m; ++k) ring.push_back(fresh());
    for (size_t k = 0; k < 2 * m; ++k) {
      size_t o = k / 2;
      bool dummy = (k % 2) == 1;
      bool lit_true = negs[o] ? !value : value;
      int g = dummy ? add(kL2T, lit_true ? kNonleaf : kLeaf1) : occs[o];
      Node up = ring[k];                      // upstream along the rotation
      Node down = ring[(k + 1) % (2 * m)];
      // A literal that is currently true is in the nonleaf state, whose open
      // loop transition is A->B; attach so that open always points along the
      // current rotation (positive literals: A upstream; negated: B
      // upstream).
      if (!negs[o]) {
        wire(up, loc(g, A));
        wire(loc(g, B), down);
      } else {
        wire(up, loc(g, B));
        wire(loc(g, A), down);
      }
    }
    return entry;
  };

  // Per-leaf check path: entry -(1t)- mid -(1t)- check room.
  auto attach_check_path = [&](Node entry) {
    Node mid = fresh();
    int a = add(kT1, 0), b = add(kT1, 0);
    wire(entry, loc(a, A));
    wire(loc(a, B), mid);
    wire(mid, loc(b, A));
    wire(loc(b, B), out.check_room);
  };

  // Binary tree of locking-2-toggle pairs over a player's leaves.  Each
  // internal node starts both child edges with the same pair (P then Q), so
  // ko on P blocks re-descending either branch right after an ascent.
  auto build_tree = [&](const std::vector<Node>& leaves) {
    auto rec = [&](size_t lo, size_t hi, auto&& self) -> Node {
      if (hi - lo == 1) return leaves[lo];
      size_t midp = (lo + hi) / 2;
      Node left = self(lo, midp, self);
      Node right = self(midp, hi, self);
      Node n = fresh();
      int P = add(kL2T, kNonleaf), Q = add(kL2T, kNonleaf);
      Node midl = fresh(), midr = fresh();
      wire(n, loc(P, A));        // left: P tunnel 1, then Q tunnel 1
      wire(loc(P, B), midl);
      wire(midl, loc(Q, A));
      wire(loc(Q, B), left);
      wire(n, loc(P, C));        // right: P tunnel 2, then Q tunnel 2
      wire(loc(P, D), midr);
      wire(midr, loc(Q, C));
      wire(loc(Q, D), right);
      return n;
    };
    return rec(0, leaves.size(), rec);
  };

  for (int player = 0; player < 2; ++player) {
    std::vector<Node> leaves;
    for (size_t v = 0; v < inst.vars.size(); ++v) {
      if (inst.vars[v].owner != player) continue;
      std::vector<char> negs;
      std::vector<int> occs;
      for (size_t c = 0; c < inst.clauses.size(); ++c)
        for (const auto& oc : clause_occs[c])
          if (oc.lit.var == (int)v) {
            occs.push_back(oc.gadget);
            negs.push_back(oc.lit.negated);
          }
      Node entry = build_loop(occs, negs, ((init >> v) & 1) != 0);
      out.loop_entry[v] = entry;
      attach_check_path(entry);
      leaves.push_back(entry);
    }
    // Pass loop, always present.
    Node pass = build_loop({}, {}, false);
    out.loop_entry[inst.vars.size() + player] = pass;
    attach_check_path(pass);
    leaves.push_back(pass);
    out.root[player] = build_tree(leaves);
  }

  // Alternator between the two roots, initially open towards player 1.
  {
    int alt = add(kT1, 0);
    wire(out.root[0], loc(alt, A));
    wire(loc(alt, B), out.root[1]);
  }

  // Clause paths: check room -(occurrence C->D, then a 1-toggle)* -> shared
  // pre-finish node -(finish 1-toggle)-> dead end.
  Node pre_finish = fresh();
  for (size_t c = 0; c < inst.clauses.size(); ++c) {
    Node cur = out.check_room;
    for (size_t j = 0; j < clause_occs[c].size(); ++j) {
      int g = clause_occs[c][j].gadget;
      wire(cur, loc(g, C));
      int t = add(kT1, 0);
      wire(loc(g, D), loc(t, A));
      if (j + 1 < clause_occs[c].size()) {
        cur = fresh();
        wire(loc(t, B), cur);
      } else {
        wire(loc(t, B), pre_finish);
      }
    }
  }
  {
    int fin = add(kT1, 0);
    wire(pre_finish, loc(fin, A));
    wire(loc(fin, B), out.finish);
  }

  finalize(sys);
  out.initial.states.clear();
  for (const auto& gi : sys.instances)
    out.initial.states.push_back(gi.initial_state);
  out.initial.robot = sys.class_of_node(out.root[0]);
  out.initial.last_instance = -1;
  out.initial.mover = 0;
  return out;
}

}  // namespace gadgets
