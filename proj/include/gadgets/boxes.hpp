// Boxed subsystems: wiring several copies of one reversible 2-tunnel gadget
// into a box that behaves, port for port, like a simpler gadget, plus the
// behavioural verifier for such boxes under the no-immediate-undo rule.
#pragma once

#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "gadgets/core.hpp"
#include "gadgets/two_player.hpp"

namespace gadgets {

struct CertificateMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Witness that a gadget type contains the structure every interacting
// k-tunnel reversible deterministic gadget must have: a state s2 from which
// tunnel t leads back to s1 and tunnel t' leads on to s3, with t' closed in
// s1 (crossing t back "locks" t').
struct TunnelCertificate {
  StateId s1 = -1, s2 = -1, s3 = -1;
  LocId t_in = -1, t_out = -1;     // (s1, t_in) -> (s2, t_out)
  LocId tp_in = -1, tp_out = -1;   // (s2, tp_in) -> (s3, tp_out)
};

inline bool has_transition(const GadgetType& t, StateId s, LocId a, LocId b,
                           StateId n) {
  return std::find(t.transitions.begin(), t.transitions.end(),
                   Transition{s, a, b, n}) != t.transitions.end();
}

inline std::optional<TunnelCertificate> find_tunnel_certificate(
    const GadgetType& t) {
  if (!is_deterministic(t) || !is_reversible(t)) return std::nullopt;
  auto part = tunnel_partition(t);
  if (!part) return std::nullopt;
  auto closed_in = [&](StateId s, LocId a, LocId b) {
    for (const auto& tr : t.transitions)
      if (tr.state == s && (tr.from == a || tr.from == b)) return false;
    return true;
  };
  for (const auto& tr1 : t.transitions)
    for (const auto& tr2 : t.transitions) {
      if (tr1.next != tr2.state) continue;  // s2 = tr1.next
      TunnelCertificate c;
      c.s1 = tr1.state;
      c.s2 = tr1.next;
      c.s3 = tr2.next;
      if (c.s1 == c.s2 || c.s2 == c.s3 || c.s1 == c.s3) continue;
      c.t_in = tr1.from;
      c.t_out = tr1.to;
      c.tp_in = tr2.from;
      c.tp_out = tr2.to;
      // The two tunnels must be distinct tunnels of the partition.
      if (c.t_in == c.tp_in || c.t_in == c.tp_out || c.t_out == c.tp_in ||
          c.t_out == c.tp_out)
        continue;
      if (!closed_in(c.s1, c.tp_in, c.tp_out)) continue;
      if (!closed_in(c.s3, c.t_in, c.t_out)) continue;
      return c;
    }
  return std::nullopt;
}

// A subsystem with designated port nodes and, per state of the simulated
// gadget, the internal states realizing it.
struct BoxedSubsystem {
  SystemOfGadgets system;
  std::vector<Node> ports;  // indexed like the target type's locations
  std::vector<std::vector<StateId>> abstract_states;  // per target state
};

// The gadget itself as a (trivial) box: every crossing has length one.
inline BoxedSubsystem identity_box(const GadgetType& t) {
  BoxedSubsystem box;
  box.system.types = {t};
  GadgetInstance gi;
  gi.type = 0;
  gi.initial_state = 0;
  for (size_t l = 0; l < t.locations.size(); ++l)
    gi.nodes.push_back(box.system.num_nodes++);
  box.system.instances = {gi};
  box.ports = gi.nodes;
  for (size_t s = 0; s < t.states.size(); ++s)
    box.abstract_states.push_back({(StateId)s});
  finalize(box.system);
  return box;
}

namespace detail {
struct BoxBuilder {
  SystemOfGadgets sys;
  Node fresh() { return sys.num_nodes++; }
  void wire(Node a, Node b) { sys.edges.emplace_back(a, b); }
  int add(const GadgetType& t, StateId s0) {
    if (sys.types.empty()) sys.types.push_back(t);
    GadgetInstance gi;
    gi.type = 0;
    gi.initial_state = s0;
    for (size_t l = 0; l < t.locations.size(); ++l) gi.nodes.push_back(fresh());
    sys.instances.push_back(std::move(gi));
    return (int)sys.instances.size() - 1;
  }
  Node loc(int g, LocId l) { return sys.instances[g].nodes[l]; }
};
}  // namespace detail

// Two copies in series simulate a directed length-2 tunnel that behaves like
// a 1-toggle: crossing P->Q is exactly two traversals, and the reverse
// crossing restores everything.
inline BoxedSubsystem build_directed_tunnel_sim(const GadgetType& t,
                                                const TunnelCertificate& c) {
  detail::BoxBuilder b;
  int g1 = b.add(t, c.s1);
  int g2 = b.add(t, c.s2);
  Node p = b.fresh(), q = b.fresh();
  b.wire(p, b.loc(g1, c.t_in));
  b.wire(b.loc(g1, c.t_out), b.loc(g2, c.tp_in));
  b.wire(b.loc(g2, c.tp_out), q);
  BoxedSubsystem box;
  box.system = std::move(b.sys);
  finalize(box.system);
  box.ports = {p, q};
  box.abstract_states = {{c.s1, c.s2}, {c.s2, c.s3}};
  return box;
}

// Three copies plus six directed tunnels simulate a locking 2-toggle; every
// crossing of the simulated tunnel costs exactly nine traversals, and entries
// blocked in the simulated gadget stall after an even number.
inline BoxedSubsystem build_l2t_sim(const GadgetType& t,
                                    const TunnelCertificate& c) {
  detail::BoxBuilder b;
  int L = b.add(t, c.s2), Cg = b.add(t, c.s2), R = b.add(t, c.s2);
  // Inline directed tunnels (copy pairs); state "fresh" = (s1, s2) passable
  // left-to-right, "used" = (s2, s3) passable right-to-left.
  struct DSim {
    int g1, g2;
    Node p, q;
  };
  auto dsim = [&](StateId st1, StateId st2) {
    DSim d;
    d.g1 = b.add(t, st1);
    d.g2 = b.add(t, st2);
    d.p = b.fresh();
    d.q = b.fresh();
    b.wire(d.p, b.loc(d.g1, c.t_in));
    b.wire(b.loc(d.g1, c.t_out), b.loc(d.g2, c.tp_in));
    b.wire(b.loc(d.g2, c.tp_out), d.q);
    return d;
  };
  DSim ta = dsim(c.s1, c.s2), tb = dsim(c.s1, c.s2), tc = dsim(c.s1, c.s2);
  DSim ba = dsim(c.s1, c.s2), bb = dsim(c.s1, c.s2), bc = dsim(c.s1, c.s2);
  Node TR = b.fresh(), TL = b.fresh(), BL = b.fresh(), BR = b.fresh();
  // Top path (simulated tunnel A<->B): TR -ta- R.t -tb- C.t -tc- L.t - TL.
  b.wire(TR, ta.p);
  b.wire(ta.q, b.loc(R, c.t_out));
  b.wire(b.loc(R, c.t_in), tb.p);
  b.wire(tb.q, b.loc(Cg, c.t_out));
  b.wire(b.loc(Cg, c.t_in), tc.p);
  b.wire(tc.q, b.loc(L, c.t_out));
  b.wire(b.loc(L, c.t_in), TL);
  // Bottom path (simulated tunnel C<->D): BL - L.t' -ba- C.t' -bb- R.t' -bc- BR.
  b.wire(BL, b.loc(L, c.tp_in));
  b.wire(b.loc(L, c.tp_out), ba.p);
  b.wire(ba.q, b.loc(Cg, c.tp_in));
  b.wire(b.loc(Cg, c.tp_out), bb.p);
  b.wire(bb.q, b.loc(R, c.tp_in));
  b.wire(b.loc(R, c.tp_out), bc.p);
  b.wire(bc.q, BR);

  BoxedSubsystem box;
  box.system = std::move(b.sys);
  finalize(box.system);
  box.ports = {TR, TL, BL, BR};  // simulated locations A, B, C, D
  // Instance order: L, C, R, then ta.g1, ta.g2, tb..., tc..., ba..., bb...,
  // bc...  (15 instances).
  auto states = [&](StateId lcr, bool top_used, bool bottom_used) {
    std::vector<StateId> v(15, -1);
    v[0] = v[1] = v[2] = lcr;
    StateId f1 = c.s1, f2 = c.s2, u1 = c.s2, u2 = c.s3;
    for (int i = 0; i < 3; ++i) {
      v[3 + 2 * i] = top_used ? u1 : f1;
      v[4 + 2 * i] = top_used ? u2 : f2;
      v[9 + 2 * i] = bottom_used ? u1 : f1;
      v[10 + 2 * i] = bottom_used ? u2 : f2;
    }
    return v;
  };
  box.abstract_states = {states(c.s1, true, false),   // simulated state 1
                         states(c.s2, false, false),  // simulated state 2
                         states(c.s3, false, true)};  // simulated state 3
  return box;
}

struct BoxOptions {
  int expected_crossing_len = -1;  // -1: no constraint
  bool require_odd = false;        // crossings must take an odd move count
  bool require_forced = true;      // intermediate positions have one move
  size_t state_cap = 1 << 22;
};

struct BoxReport {
  bool passed = true;
  std::vector<std::string> violations;
};

// Checks, purely behaviourally, that the box simulates `target`:
//  - for every open target transition, a crossing from the entry port exists,
//    ends at the right port in the right internal states, meets the length
//    constraints, is forced at intermediate positions, and leaves the crosser
//    with no follow-up move (the exit is ko-blocked);
//  - for every closed (state, port) entry, all ko-respecting play inside the
//    box stalls after an even number of traversals, never reaches another
//    port, and returns to the entry port only with the entry state restored.
inline BoxReport verify_box(const BoxedSubsystem& box, const GadgetType& target,
                            const BoxOptions& opt = {}) {
  BoxReport rep;
  const SystemOfGadgets& sys = box.system;
  auto fail = [&rep](std::string msg) {
    rep.passed = false;
    rep.violations.push_back(std::move(msg));
  };
  if (box.ports.size() != target.locations.size()) {
    fail("box has " + std::to_string(box.ports.size()) + " ports but the target has " +
         std::to_string(target.locations.size()) + " locations");
    return rep;
  }
  if (box.abstract_states.size() != target.states.size()) {
    fail("box realizes " + std::to_string(box.abstract_states.size()) +
         " abstract states but the target has " + std::to_string(target.states.size()));
    return rep;
  }
  for (const auto& a : box.abstract_states)
    if (a.size() != sys.instances.size()) {
      fail("abstract state does not assign a state to every instance");
      return rep;
    }
  std::vector<ClassId> port_class;
  for (Node p : box.ports) port_class.push_back(sys.class_of_node(p));

  struct Pos {
    std::vector<StateId> states;
    ClassId at = -1;
    int last = -1;
    bool operator==(const Pos&) const = default;
  };
  struct PosHash {
    size_t operator()(const Pos& p) const {
      size_t h = 0xcbf29ce484222325ull;
      auto mix = [&h](uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      };
      for (StateId s : p.states) mix((uint64_t)s);
      mix((uint64_t)p.at);
      mix((uint64_t)(p.last + 1));
      return h;
    }
  };
  auto moves_of = [&](const Pos& p) {
    std::vector<GameMove> out;
    for (size_t i = 0; i < sys.instances.size(); ++i) {
      if ((int)i == p.last) continue;
      const auto& t = sys.type_of((int)i);
      for (size_t k = 0; k < t.transitions.size(); ++k)
        if (t.transitions[k].state == p.states[i] &&
            sys.class_of((int)i, t.transitions[k].from) == p.at)
          out.push_back({(int)i, (int)k});
    }
    return out;
  };
  auto apply = [&](const Pos& p, const GameMove& m) {
    Pos q = p;
    const auto& tr = sys.type_of(m.instance).transitions[m.transition];
    q.states[m.instance] = tr.next;
    q.at = sys.class_of(m.instance, tr.to);
    q.last = m.instance;
    return q;
  };
  auto port_at = [&](ClassId c) {
    for (size_t i = 0; i < port_class.size(); ++i)
      if (port_class[i] == c) return (int)i;
    return -1;
  };

  for (size_t sigma = 0; sigma < target.states.size(); ++sigma) {
    const auto& internal = box.abstract_states[sigma];
    for (size_t l = 0; l < target.locations.size(); ++l) {
      const Transition* open = nullptr;
      for (const auto& tr : target.transitions)
        if (tr.state == (StateId)sigma && tr.from == (LocId)l) open = &tr;
      std::string where = target.states[sigma] + "/" + target.locations[l];
      Pos start{internal, port_class[l], -1};

      if (open) {
        // BFS to the first port hit on any play.
        std::unordered_set<Pos, PosHash> seen{start};
        std::deque<std::pair<Pos, int>> frontier{{start, 0}};
        std::optional<std::pair<Pos, int>> goal;
        bool bad_exit = false;
        while (!frontier.empty() && !goal) {
          auto [p, len] = frontier.front();
          frontier.pop_front();
          for (const GameMove& m : moves_of(p)) {
            Pos q = apply(p, m);
            int hit = port_at(q.at);
            if (hit >= 0) {
              if (hit != open->to ||
                  q.states != box.abstract_states[open->next]) {
                bad_exit = true;
                fail(where + ": play exits at the wrong port or state");
                continue;
              }
              goal = {q, len + 1};
              break;
            }
            if (seen.insert(q).second) {
              if (seen.size() > opt.state_cap) {
                fail(where + ": state cap exceeded");
                return rep;
              }
              frontier.emplace_back(std::move(q), len + 1);
            }
          }
        }
        if (!goal) {
          if (!bad_exit) fail(where + ": open transition has no crossing");
          continue;
        }
        auto [gp, glen] = *goal;
        if (opt.expected_crossing_len >= 0 &&
            glen != opt.expected_crossing_len)
          fail(where + ": crossing length " + std::to_string(glen) +
               " != " + std::to_string(opt.expected_crossing_len));
        if (opt.require_odd && glen % 2 == 0)
          fail(where + ": crossing length " + std::to_string(glen) +
               " is even");
        if (!moves_of(gp).empty())
          fail(where + ": crosser still has a move at the exit port");
        if (opt.require_forced) {
          // Re-walk: from the start, the crossing must be the only line of
          // play at every intermediate position.
          Pos p = start;
          for (int step = 0; step < glen; ++step) {
            auto ms = moves_of(p);
            if (step > 0 && ms.size() != 1) {
              fail(where + ": intermediate position has " +
                   std::to_string(ms.size()) + " moves");
              break;
            }
            if (ms.empty()) break;
            // Follow the move that stays on the shortest crossing.
            bool advanced = false;
            for (const GameMove& m : ms) {
              Pos q = apply(p, m);
              if (step + 1 == glen) {
                if (q == gp) {
                  p = q;
                  advanced = true;
                  break;
                }
              } else if (port_at(q.at) < 0) {
                p = q;
                advanced = true;
                break;
              }
            }
            if (!advanced) break;
          }
        }
      } else {
        // Closed entry: exhaustively explore ko-respecting play.
        struct Item {
          Pos pos;
          int parity;
        };
        std::unordered_set<Pos, PosHash> seen_even, seen_odd;
        std::deque<Item> frontier{{start, 0}};
        seen_even.insert(start);
        while (!frontier.empty()) {
          auto [p, parity] = frontier.front();
          frontier.pop_front();
          auto ms = moves_of(p);
          if (ms.empty()) {
            if (parity % 2 != 0)
              fail(where + ": play stalls after an odd number of traversals");
            continue;
          }
          for (const GameMove& m : ms) {
            Pos q = apply(p, m);
            int hit = port_at(q.at);
            if (hit >= 0 && hit != (int)l) {
              fail(where + ": closed entry escapes to another port");
              continue;
            }
            if (hit == (int)l) {
              if (q.states != internal)
                fail(where + ": returns to the entry with altered state");
              if ((parity + 1) % 2 != 0)
                fail(where + ": returns to the entry after an odd count");
              continue;  // back outside the box; stop exploring this line
            }
            auto& seen = (parity + 1) % 2 == 0 ? seen_even : seen_odd;
            if (seen.insert(q).second) {
              if (seen_even.size() + seen_odd.size() > opt.state_cap) {
                fail(where + ": state cap exceeded");
                return rep;
              }
              frontier.push_back({std::move(q), parity + 1});
            }
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace gadgets
