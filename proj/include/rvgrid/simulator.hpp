#pragma once

// Asynchronous adversarial execution of two agent cursors on the shared grid.
//
// Sequential-mover semantics: the adversary advances one agent at a time, the
// other stands still, and a meeting is declared exactly when the mover's
// swept segment contains the stationary agent's position. Three advancement
// mechanisms produce identical observable results:
//   unit/micro  - move-by-move with exact sweep checks,
//   frozen ff   - per-decision descent that skips closed sub-walks whose
//                 ball cannot contain the stationary opponent,
//   joint paths - for strictly alternating schedules, whole identical
//                 descriptors are skipped while the move streams coincide
//                 (impossible to meet at distance >= 2), and disjoint
//                 sub-walk covers allow batched alternation.
// Reports are bit-identical with fast-forwarding on or off.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rvgrid/agent.hpp"
#include "rvgrid/bigint.hpp"
#include "rvgrid/grid.hpp"
#include "rvgrid/labels.hpp"
#include "rvgrid/patterns.hpp"

namespace rvgrid {

// ---------------------------------------------------------------------------
// Scenario and report

enum class StrategyKind : std::uint8_t {
    RoundRobin,
    Random,
    FreezeA,
    FreezeB,
    GreedyAvoid,
    MirrorProgress
};

inline const char* name_of(StrategyKind k) {
    switch (k) {
        case StrategyKind::RoundRobin: return "round_robin";
        case StrategyKind::Random: return "random";
        case StrategyKind::FreezeA: return "freeze_a";
        case StrategyKind::FreezeB: return "freeze_b";
        case StrategyKind::GreedyAvoid: return "greedy_avoid";
        case StrategyKind::MirrorProgress: return "mirror_progress";
    }
    return "?";
}

inline std::optional<StrategyKind> strategy_from_name(const std::string& s) {
    for (StrategyKind k : {StrategyKind::RoundRobin, StrategyKind::Random, StrategyKind::FreezeA,
                           StrategyKind::FreezeB, StrategyKind::GreedyAvoid,
                           StrategyKind::MirrorProgress})
        if (s == name_of(k)) return k;
    return std::nullopt;
}

struct Scenario {
    std::uint64_t label_a = 0;
    std::uint64_t label_b = 1;
    std::int64_t dx = 1, dy = 0;  // B starts at A's start plus this offset
    StrategyKind strategy = StrategyKind::RoundRobin;
    std::uint64_t seed = 0;
    std::uint64_t freeze_descriptors = 3;  // freeze_* strategies
    std::optional<Count> budget;           // max total edge traversals
    std::uint64_t stop_bound = 0;          // halt once either completes Assumption(d)

    std::uint64_t initial_distance() const {
        return static_cast<std::uint64_t>(dx >= 0 ? dx : -dx) +
               static_cast<std::uint64_t>(dy >= 0 ? dy : -dy);
    }
    void validate() const {
        if (label_a == label_b) throw std::invalid_argument("scenario: labels must be distinct");
        if (initial_distance() == 0)
            throw std::invalid_argument("scenario: starting nodes must be distinct");
    }
};

// Smallest power of two >= max(D, first differing transformed bit).
inline std::uint64_t good_assumption(const Scenario& sc) {
    const std::size_t lp = first_diff_index(transform(sc.label_a), transform(sc.label_b));
    std::uint64_t need = std::max<std::uint64_t>(sc.initial_distance(), lp);
    std::uint64_t d = 1;
    while (d < need) d *= 2;
    return d;
}

enum class StopReason : std::uint8_t { Meeting, StopBound, Budget, EngineLimit };

inline const char* name_of(StopReason r) {
    switch (r) {
        case StopReason::Meeting: return "meeting";
        case StopReason::StopBound: return "stop_bound";
        case StopReason::Budget: return "budget";
        case StopReason::EngineLimit: return "engine_limit";
    }
    return "?";
}

struct MeetingReport {
    bool met = false;
    Position location;  // valid when met
    Count traversals_a, traversals_b;
    std::string context_a, context_b;
    StopReason stop_reason = StopReason::Budget;

    friend bool operator==(const MeetingReport& a, const MeetingReport& b) {
        if (a.met != b.met || a.stop_reason != b.stop_reason) return false;
        if (a.traversals_a != b.traversals_a || a.traversals_b != b.traversals_b) return false;
        if (a.context_a != b.context_a || a.context_b != b.context_b) return false;
        if (a.met && !(a.location == b.location)) return false;
        return true;
    }
};

struct TraceRecord {
    std::uint64_t step = 0;
    char agent = 'A';          // 'A', 'B', or '=' for joint spans
    std::string context;
    std::string pos_before, pos_after;
    std::string trav_a, trav_b;
};
using TraceSink = std::function<void(const TraceRecord&)>;

struct RunOptions {
    bool fast_forward = true;
    std::uint64_t unit_step_limit = 0;  // 0 = unlimited; guards non-terminating schedules
    bool mirror_roles = false;          // strategy sees the agents swapped
    TraceSink trace;
};

// ---------------------------------------------------------------------------
// Engine internals

namespace engine {

struct AgentState {
    AgentProgram program;
    RouteCursor cursor;
    // partial progress on the edge the cursor is about to traverse
    std::optional<std::pair<Direction, Rational>> partial;
    Count trav_base;
    std::uint64_t trav_delta = 0;

    explicit AgentState(std::uint64_t label, Node start)
        : program(label, start), cursor(RouteCursor::rv(program)) {}

    Node node() const {
        const Offset o = cursor.offset();
        return program.start.offset_by(o.x, o.y);
    }
    // allocation-free point for the common node-positioned case
    FrozenPoint node_point() const {
        const Node n = node();
        return FrozenPoint{n.x, n.y, true};
    }
    Position position() const {
        if (!partial) return Position::at_node(node());
        return Position::on_edge(node(), partial->first, partial->second);
    }
    FrozenPoint point() const {
        const Position p = position();
        FrozenPoint fp{p.node.x, p.node.y, true};
        if (p.edge) {
            fp.at_node = false;
            fp.edge_dir = p.edge->dir;
            fp.fraction = p.edge->fraction;
        }
        return fp;
    }
    Count traversals() const { return trav_base + Count(trav_delta); }
    void add_trav(std::uint64_t k) {
        if (trav_delta > (~std::uint64_t{0}) - k) fold();
        trav_delta += k;
    }
    void add_trav_big(const Count& c) {
        fold();
        trav_base += c;
    }
    void fold() {
        if (trav_delta) {
            trav_base += Count(trav_delta);
            trav_delta = 0;
        }
    }
    std::string context() const {
        return cursor.provenance().to_string() + " +" + cursor.intra_offset().to_string();
    }
};

struct StopState {
    bool stopped = false;
    StopReason reason = StopReason::Budget;
    bool met = false;
    Position location;
};

inline std::uint64_t clamp_u64(const Count& c) { return c.to_u64_clamped(); }

}  // namespace engine

// ---------------------------------------------------------------------------
// The simulator

class Simulator {
public:
    Simulator(Scenario sc, RunOptions opt = {}) : sc_(std::move(sc)), opt_(std::move(opt)) {
        sc_.validate();
        a_ = std::make_unique<engine::AgentState>(sc_.label_a, Node{0, 0});
        b_ = std::make_unique<engine::AgentState>(sc_.label_b, Node{sc_.dx, sc_.dy});
    }

    MeetingReport run() {
        switch (sc_.strategy) {
            case StrategyKind::RoundRobin: run_lockstep(/*greedy=*/false); break;
            case StrategyKind::GreedyAvoid: run_lockstep(/*greedy=*/true); break;
            case StrategyKind::Random: run_random(); break;
            case StrategyKind::FreezeA: run_freeze(/*frozen_is_a=*/true); break;
            case StrategyKind::FreezeB: run_freeze(/*frozen_is_a=*/false); break;
            case StrategyKind::MirrorProgress: run_mirror(); break;
        }
        return report();
    }

    // Decision-level interface: drive agents directly instead of through a
    // named strategy. Agent 0 is always scenario agent a.
    bool stopped() const { return stop_.stopped; }
    MeetingReport snapshot() { return report(); }
    Position position_of(int idx) const { return (idx == 0 ? *a_ : *b_).position(); }

    void advance(int idx, Count whole_edges) {
        if (stop_.stopped) return;
        engine::AgentState& mover = idx == 0 ? *a_ : *b_;
        engine::AgentState& other = idx == 0 ? *b_ : *a_;
        advance_frozen(mover, other, std::move(whole_edges));
        check_global_stops();
    }

    void advance_to_fraction(int idx, const Rational& q) {
        if (stop_.stopped) return;
        engine::AgentState& mover = idx == 0 ? *a_ : *b_;
        engine::AgentState& other = idx == 0 ? *b_ : *a_;
        fractional_advance(mover, other, q);
        check_global_stops();
    }

private:
    // --- report assembly ----------------------------------------------------

    MeetingReport report() {
        MeetingReport r;
        r.met = stop_.met;
        if (stop_.met) r.location = stop_.location;
        r.traversals_a = a_->traversals();
        r.traversals_b = b_->traversals();
        r.context_a = a_->context();
        r.context_b = b_->context();
        r.stop_reason = stop_.reason;
        return r;
    }

    Count total_traversals() const { return a_->traversals() + b_->traversals(); }

    bool budget_exhausted() const {
        return sc_.budget && total_traversals() >= *sc_.budget;
    }
    Count budget_left() const { return *sc_.budget - total_traversals(); }

    bool check_global_stops() {
        if (stop_.stopped) return true;
        if (sc_.stop_bound &&
            (a_->cursor.completed_assumption() >= sc_.stop_bound ||
             b_->cursor.completed_assumption() >= sc_.stop_bound)) {
            stop_ = {true, StopReason::StopBound};
            return true;
        }
        if (budget_exhausted()) {
            stop_ = {true, StopReason::Budget};
            return true;
        }
        return false;
    }

    bool spend_unit_limit(std::uint64_t k = 1) {
        if (!opt_.unit_step_limit) return false;
        if (units_used_ + k >= opt_.unit_step_limit) {
            stop_ = {true, StopReason::EngineLimit};
            return true;
        }
        units_used_ += k;
        return false;
    }

    void declare_meeting(const Position& where) {
        stop_ = {true, StopReason::Meeting, true, where};
    }

    void emit_trace(char agent, const engine::AgentState& st, const std::string& before,
                    const std::string& after) {
        if (!opt_.trace) return;
        TraceRecord rec;
        rec.step = trace_step_++;
        rec.agent = agent;
        rec.context = st.cursor.exhausted() ? "-" : st.cursor.provenance().to_string();
        rec.pos_before = before;
        rec.pos_after = after;
        rec.trav_a = a_->traversals().to_string();
        rec.trav_b = b_->traversals().to_string();
        opt_.trace(rec);
    }

    // --- single-agent advancement -------------------------------------------

    // One whole-edge move of `mover` against the stationary `opp`, with exact
    // sweep detection. The mover must not be mid-edge.
    void micro_unit(engine::AgentState& mover, const engine::AgentState& opp) {
        const Node p = mover.node();
        const Direction d = mover.cursor.peek();
        if (!opp.partial) {
            const FrozenPoint op = opp.node_point();
            if (op.y == p.y || op.x == p.x) {  // cheap reject off both axes
                if (auto hit = sweep_straight(p.x, p.y, d, 1, op)) {
                    if (hit->final_edge_completed) {
                        mover.cursor.next();
                        mover.add_trav(1);
                    }
                    declare_meeting(opp.position());
                    return;
                }
            }
        } else {
            const FrozenPoint op = opp.point();
            if (auto hit = sweep_straight(p.x, p.y, d, 1, op)) {
                if (hit->final_edge_completed) {
                    mover.cursor.next();
                    mover.add_trav(1);
                }
                declare_meeting(opp.position());
                return;
            }
        }
        mover.cursor.next();
        mover.add_trav(1);
    }

    // Completes the mover's partially traversed edge (sweeping the rest).
    void finish_partial(engine::AgentState& mover, const engine::AgentState& opp) {
        const auto [dir, from] = *mover.partial;
        const Position oppp = opp.position();
        // opponent strictly inside the same edge, beyond our progress?
        const Position rest_start = Position::on_edge(mover.node(), dir, from);
        if (oppp.edge && rest_start.edge && oppp.node == rest_start.node &&
            oppp.edge->dir == rest_start.edge->dir) {
            // same canonical edge; meet if the opponent lies ahead of us
            const bool mover_canonical = (dir == Direction::N || dir == Direction::E);
            const Rational& of = oppp.edge->fraction;
            const Rational& mf = rest_start.edge->fraction;
            const bool ahead = mover_canonical ? (mf < of) : (of < mf);
            if (ahead) {
                mover.partial.reset();  // met strictly inside the edge
                declare_meeting(oppp);
                return;
            }
        }
        mover.partial.reset();
        const Node target = mover.node().moved(dir);
        mover.cursor.next();
        mover.add_trav(1);
        if (oppp == Position::at_node(target)) declare_meeting(oppp);
    }

    // Advance the mover to fraction q of its current edge (q in (0,1]).
    void fractional_advance(engine::AgentState& mover, const engine::AgentState& opp,
                            const Rational& q) {
        const Direction dir = mover.partial ? mover.partial->first : mover.cursor.peek();
        const Rational from = mover.partial ? mover.partial->second : Rational(0, 1);
        if (!(from < q)) throw std::invalid_argument("fractional advance must increase progress");
        const Position oppp = opp.position();
        const Node base = mover.node();
        // meeting strictly inside the swept sub-segment (from, q]?
        const Position probe = Position::on_edge(base, dir, q);
        if (oppp.edge) {
            // canonical identity of the mover's edge
            const Position span_pt = Position::on_edge(base, dir, Rational(1, 2));
            if (span_pt.edge && oppp.node == span_pt.node &&
                oppp.edge->dir == span_pt.edge->dir) {
                const bool canon = (dir == Direction::N || dir == Direction::E);
                const Rational of_mover = canon ? oppp.edge->fraction
                                                : oppp.edge->fraction.complement();
                if (from < of_mover && (of_mover < q || of_mover == q)) {
                    declare_meeting(oppp);
                    return;
                }
            }
        }
        if (q == Rational(1, 1)) {
            mover.partial.reset();
            const Node target = base.moved(dir);
            mover.cursor.next();
            mover.add_trav(1);
            if (oppp == Position::at_node(target)) declare_meeting(oppp);
            return;
        }
        mover.partial = {dir, q};
        (void)probe;
    }

    // Advance `mover` by up to `edges` whole edges against the frozen `opp`;
    // fast-forward or micro depending on options. Stops at meetings, budget,
    // stop bound, and the global unit limit.
    void advance_frozen(engine::AgentState& mover, engine::AgentState& opp, Count edges) {
        if (stop_.stopped) return;
        if (sc_.budget) {
            const Count left = budget_left();
            if (edges > left) edges = left;
        }
        if (edges.is_zero()) {
            check_global_stops();
            return;
        }
        if (mover.partial) {
            finish_partial(mover, opp);
            if (stop_.stopped) return;
            edges -= Count(1);
            if (check_global_stops()) return;
            if (edges.is_zero()) return;
        }
        if (opt_.fast_forward) {
            const Node ms = mover.program.start;
            FrozenPoint op = opp.point();
            op.x -= ms.x;
            op.y -= ms.y;
            MoveBudget mb = MoveBudget::of(edges);
            MoveAccum acc;
            const auto out = mover.cursor.ff_advance(op, mb, acc, sc_.stop_bound);
            mover.add_trav_big(acc.take());
            if (out.met) {
                declare_meeting(opp.position());
                return;
            }
            check_global_stops();
            return;
        }
        // micro path
        std::uint64_t chunk;
        while (!stop_.stopped && !edges.is_zero()) {
            chunk = edges.to_u64_clamped();
            for (std::uint64_t t = 0; t < chunk; ++t) {
                if (spend_unit_limit()) return;
                micro_unit(mover, opp);
                if (stop_.stopped) return;
                if (sc_.stop_bound && mover.cursor.completed_assumption() >= sc_.stop_bound) {
                    stop_ = {true, StopReason::StopBound};
                    return;
                }
            }
            edges -= Count(chunk);
        }
        check_global_stops();
    }

    // --- strategies ----------------------------------------------------------

    engine::AgentState& agent(int idx) {
        const bool flip = opt_.mirror_roles;
        return (idx == 0) != flip ? *a_ : *b_;
    }

    void run_random() {
        std::uint64_t t = 0;
        while (!check_global_stops()) {
            if (spend_unit_limit()) return;
            const std::uint64_t h = hash64(sc_.seed * 0x9e3779b97f4a7c15ULL + t);
            ++t;
            engine::AgentState& mover = agent(h & 1);
            engine::AgentState& other = agent(1 - (h & 1));
            const Count rem = mover.cursor.descriptor_remaining();
            const std::uint64_t cap = std::max<std::uint64_t>(1, engine::clamp_u64(rem));
            const std::uint64_t k = 1 + (h >> 1) % cap;
            const std::string before = mover.position().to_string();
            advance_frozen(mover, other, Count(k));
            emit_trace((h & 1) != opt_.mirror_roles ? 'B' : 'A', mover, before,
                       mover.position().to_string());
        }
    }

    void run_freeze(bool frozen_is_a) {
        engine::AgentState& frozen = frozen_is_a ? agent(0) : agent(1);
        engine::AgentState& active = frozen_is_a ? agent(1) : agent(0);
        while (!check_global_stops() && active.cursor.completed_descriptors() <
                                            Count(sc_.freeze_descriptors)) {
            if (spend_unit_limit()) return;
            const std::string before = active.position().to_string();
            advance_frozen(active, frozen, active.cursor.descriptor_remaining());
            emit_trace(&active == a_.get() ? 'A' : 'B', active, before,
                       active.position().to_string());
        }
        // after the freeze expires: strict alternation by whole edges
        int turn = 0;
        while (!check_global_stops()) {
            if (spend_unit_limit()) return;
            engine::AgentState& mover = agent(turn);
            engine::AgentState& other = agent(1 - turn);
            advance_frozen(mover, other, Count(1));
            turn = 1 - turn;
        }
    }

    void run_mirror() {
        while (!check_global_stops()) {
            if (spend_unit_limit()) return;
            // keep completed-descriptor counts level; ties go to the first agent
            engine::AgentState& lead =
                agent(agent(0).cursor.completed_descriptors() <=
                              agent(1).cursor.completed_descriptors()
                          ? 0
                          : 1);
            engine::AgentState& other = (&lead == a_.get()) ? *b_ : *a_;
            const std::string before = lead.position().to_string();
            advance_frozen(lead, other, lead.cursor.descriptor_remaining());
            emit_trace(&lead == a_.get() ? 'A' : 'B', lead, before, lead.position().to_string());
        }
    }

    // --- strictly alternating schedules (round robin, greedy avoid) ----------

    bool would_meet(const engine::AgentState& mover, const engine::AgentState& opp) const {
        const Node p = mover.node();
        if (!opp.partial) {
            const FrozenPoint op = opp.node_point();
            if (op.y != p.y && op.x != p.x) return false;
            return sweep_straight(p.x, p.y, mover.cursor.peek(), 1, op).has_value();
        }
        return sweep_straight(p.x, p.y, mover.cursor.peek(), 1, opp.point()).has_value();
    }

    void run_lockstep(bool greedy) {
        int turn = 0;  // round robin turn: 0 = first agent
        while (!check_global_stops()) {
            if (opt_.fast_forward && !a_->partial && !b_->partial) {
                if (greedy) {
                    if (try_greedy_catch_up()) continue;
                }
                if ((greedy || turn == 0) && try_identical_skip(greedy)) continue;
                if ((greedy || turn == 0) && try_cover_batch()) continue;
            }
            if (spend_unit_limit()) return;
            if (greedy) {
                greedy_unit();
            } else {
                engine::AgentState& mover = agent(turn);
                engine::AgentState& other = agent(1 - turn);
                const std::string before = opt_.trace ? mover.position().to_string() : "";
                micro_unit(mover, other);
                if (opt_.trace)
                    emit_trace(&mover == a_.get() ? 'A' : 'B', mover, before,
                               mover.position().to_string());
                turn = 1 - turn;
            }
            if (stop_.stopped) return;
            if (sc_.stop_bound && (a_->cursor.completed_assumption() >= sc_.stop_bound ||
                                   b_->cursor.completed_assumption() >= sc_.stop_bound)) {
                stop_ = {true, StopReason::StopBound};
                return;
            }
        }
    }

    void greedy_unit() {
        engine::AgentState& first = agent(0);
        engine::AgentState& second = agent(1);
        const bool meet_first = would_meet(first, second);
        const bool meet_second = would_meet(second, first);
        engine::AgentState* mover;
        if (!meet_first && !meet_second)
            mover = first.traversals() <= second.traversals() ? &first : &second;
        else if (!meet_first)
            mover = &first;
        else if (!meet_second)
            mover = &second;
        else
            mover = &first;  // cornered: the tie-break agent walks into the meeting
        engine::AgentState& other = (mover == a_.get()) ? *b_ : *a_;
        micro_unit(*mover, other);
    }

    // Greedy equalization: the laggard advances alone while the leader is
    // stationary; it never takes a move that would meet (the rule would divert
    // to the leader), so we find the first would-meet point exactly and stop
    // just before it, then let the leader make one unit move.
    bool try_greedy_catch_up() {
        engine::AgentState& first = agent(0);
        engine::AgentState& second = agent(1);
        const Count ta = first.traversals(), tb = second.traversals();
        if (ta == tb) return false;
        engine::AgentState& lag = ta < tb ? first : second;
        engine::AgentState& lead = ta < tb ? second : first;
        Count gap = ta < tb ? tb - ta : ta - tb;
        if (sc_.budget) {
            const Count left = budget_left();
            if (gap > left) gap = left;
        }
        if (gap.is_zero()) {
            check_global_stops();
            return true;
        }
        // probe on a copy to find the first would-meet point
        RouteCursor probe = lag.cursor;
        FrozenPoint op = lead.point();
        op.x -= lag.program.start.x;
        op.y -= lag.program.start.y;
        MoveBudget mb = MoveBudget::of(gap);
        MoveAccum acc;
        const auto out = probe.ff_advance(op, mb, acc, sc_.stop_bound);
        Count safe = acc.take();
        if (out.met) {
            // the meeting move itself is diverted; commit what precedes it
            if (out.final_edge_completed) safe -= Count(1);
            const Count advanced = lag.cursor.advance_by(safe);
            lag.add_trav_big(advanced);
            // laggard is cornered: the leader moves one edge instead
            if (spend_unit_limit()) return true;
            if (!would_meet(lead, lag)) {
                micro_unit(lead, lag);
            } else if (!would_meet(lag, lead)) {
                micro_unit(lag, lead);
            } else {
                micro_unit(agent(0), agent(1));  // both cornered: tie-break agent meets
            }
            return true;
        }
        lag.cursor = std::move(probe);
        lag.add_trav_big(safe);
        check_global_stops();
        return true;
    }

    // While both cursors stand at descriptor boundaries of identical upcoming
    // descriptors, alternating schedules cannot produce a meeting over the
    // identical move streams: at distance >= 2 no single edge closes the gap,
    // and at distance 1 the avoiders reorder around the one unsafe move (only
    // one agent's move can be unsafe, and moving the other restores safety).
    // Whole descriptors are therefore consumed pairwise. Round robin walks
    // blindly, so it keeps the distance >= 2 requirement.
    bool try_identical_skip(bool greedy) {
        if (sc_.initial_distance() < 2 && !greedy) return false;
        const bool exact_cuts = sc_.initial_distance() >= 2;
        bool did = false;
        while (!stop_.stopped) {
            if (!a_->cursor.at_descriptor_boundary() || !b_->cursor.at_descriptor_boundary())
                break;
            if (a_->traversals() != b_->traversals()) break;
            if (!(a_->cursor.current_descriptor() == b_->cursor.current_descriptor())) break;
            const Count c = a_->cursor.current_cost();
            // budget cut inside the pair: under exact alternation the first
            // agent gets the extra edge; at distance 1 the avoider's reorders
            // make the split order-sensitive, so fall back to unit stepping
            if (sc_.budget) {
                const Count left = budget_left();
                if (left < c + c) {
                    if (!exact_cuts) break;
                    auto [qa, ra] = divmod_by_u64(left, 2);
                    Count ka = qa + ra;  // ceil(left/2)
                    Count kb = qa;
                    a_->add_trav_big(a_->cursor.advance_by(ka));
                    b_->add_trav_big(b_->cursor.advance_by(kb));
                    stop_ = {true, StopReason::Budget};
                    return true;
                }
            }
            // stop-bound cut: the first agent finishes the phase one move
            // before the second catches up
            const bool completes_phase =
                sc_.stop_bound && a_->cursor.index_in_phase() + 1 ==
                                      assumption_entries_size(a_->cursor) &&
                a_->cursor.phase() >= sc_.stop_bound;
            if (completes_phase) {
                if (!exact_cuts) break;
                a_->add_trav_big(a_->cursor.skip_descriptor().first);
                b_->add_trav_big(b_->cursor.advance_by(c - Count(1)));
                stop_ = {true, StopReason::StopBound};
                return true;
            }
            a_->add_trav_big(a_->cursor.skip_descriptor().first);
            b_->add_trav_big(b_->cursor.skip_descriptor().first);
            if (opt_.trace) emit_trace('=', *a_, "(identical descriptor pair)",
                                       a_->position().to_string());
            did = true;
        }
        return did;
    }

    static std::size_t assumption_entries_size(const RouteCursor& c) {
        return assumption_entries_count(c.program().label, c.phase());
    }
    static std::size_t assumption_entries_count(std::uint64_t label, std::uint64_t d) {
        return detail::assumption_calls(label, d).size();
    }

    // Batched alternation inside ball-disjoint sub-walk covers.
    bool try_cover_batch() {
        CoverSet ca, cb;
        a_->cursor.covers(ca);
        b_->cursor.covers(cb);
        if (ca.n == 0 || cb.n == 0) return false;
        const Node sa = a_->program.start, sb = b_->program.start;
        std::uint64_t best = 0;
        for (int i = 0; i < ca.n; ++i)
            for (int j = 0; j < cb.n; ++j) {
                const Cover& x = ca.items[i];
                const Cover& y = cb.items[j];
                const Node ox = sa.offset_by(x.ox, x.oy);
                const Node oy = sb.offset_by(y.ox, y.oy);
                if (covers_disjoint(l1_distance(ox, oy), x, y))
                    best = std::max(best, std::min(x.remaining, y.remaining));
            }
        if (best == 0) return false;
        if (sc_.stop_bound) {
            // a batch that completes the first agent's phase must hold back
            // that last move: alternation stops before the second agent's
            // matching step
            const RouteCursor& c = a_->cursor;
            if (c.phase() >= sc_.stop_bound &&
                c.index_in_phase() + 1 == assumption_entries_size(c)) {
                const Count rem = c.descriptor_remaining();
                if (Count(best) >= rem) {
                    const std::uint64_t capped = engine::clamp_u64(rem - Count(1));
                    best = capped;
                    if (best == 0) return false;
                }
            }
        }
        if (sc_.budget) {
            const Count left = budget_left();
            if (Count(best) * Count(2) > left) {
                auto [q, r] = divmod_by_u64(left, 2);
                const std::uint64_t kb = engine::clamp_u64(q);
                const std::uint64_t ka = engine::clamp_u64(q + r);
                if (ka == 0) {
                    stop_ = {true, StopReason::Budget};
                    return true;
                }
                a_->add_trav_big(a_->cursor.advance_by(Count(ka)));
                b_->add_trav_big(b_->cursor.advance_by(Count(kb)));
                stop_ = {true, StopReason::Budget};
                return true;
            }
        }
        a_->cursor.advance_within_u64(best);
        b_->cursor.advance_within_u64(best);
        a_->add_trav(best);
        b_->add_trav(best);
        if (opt_.trace) emit_trace('=', *a_, "(joint batch)", a_->position().to_string());
        return true;
    }

    static std::uint64_t hash64(std::uint64_t v) {
        v ^= v >> 33;
        v *= 0xff51afd7ed558ccdULL;
        v ^= v >> 33;
        v *= 0xc4ceb9fe1a85ec53ULL;
        v ^= v >> 33;
        return v;
    }

    Scenario sc_;
    RunOptions opt_;
    std::unique_ptr<engine::AgentState> a_, b_;
    engine::StopState stop_;
    std::uint64_t units_used_ = 0;
    std::uint64_t trace_step_ = 0;
};

inline MeetingReport run(const Scenario& sc, const RunOptions& opt = {}) {
    Simulator sim(sc, opt);
    return sim.run();
}

// ---------------------------------------------------------------------------
// Exhaustive interleaving exploration at whole-edge granularity
//
// Both routes are finite closed walks; every sequential interleaving is
// explored over the (tA, tB) progress grid with joint-state deduplication.
// A meeting blocks further expansion of its schedule; terminals record which
// route finished first.

struct ExploreOutcome {
    std::uint64_t states = 0;
    bool meeting_reachable = false;
    bool a_done_without_meeting = false;  // A finished, B unfinished, overlap happened
    bool b_done_without_meeting = false;  // B finished first (or simultaneously) without meeting
    bool vacuous_no_overlap = false;      // one route completed before the other started
};

inline ExploreOutcome exhaustive_explore(const std::vector<PatternDescriptor>& route_a,
                                         const std::vector<PatternDescriptor>& route_b,
                                         Offset offset_b, bool a_moves_first,
                                         std::uint64_t max_states = std::uint64_t{1} << 25) {
    auto positions = [](const std::vector<PatternDescriptor>& descs, Node start) {
        std::vector<Node> out{start};
        for (const auto& d : descs) {
            PatternRoute r(d);
            while (!r.done()) out.push_back(out.back().moved(r.next()));
        }
        return out;
    };
    const std::vector<Node> pa = positions(route_a, {0, 0});
    const std::vector<Node> pb = positions(route_b, {offset_b.x, offset_b.y});
    const std::uint64_t la = pa.size() - 1, lb = pb.size() - 1;
    if ((la + 1) * (lb + 1) > max_states)
        throw std::invalid_argument("exhaustive_explore: state space exceeds the guard");

    ExploreOutcome out;
    std::vector<std::uint8_t> row(lb + 1, 0), next(lb + 1, 0);
    // seed: the designated first mover has made exactly one move
    if (a_moves_first) {
        if (pa[1] == pb[0])
            out.meeting_reachable = true;
        else
            next[0] = 1;  // state (1,0), installed when the ta=1 row begins
    } else {
        if (pb[1] == pa[0])
            out.meeting_reachable = true;
        else
            row[1] = 1;  // state (0,1)
    }

    for (std::uint64_t ta = 0; ta <= la; ++ta) {
        for (std::uint64_t tb = 0; tb <= lb; ++tb) {
            if (!row[tb]) continue;
            ++out.states;
            const bool a_done = (ta == la), b_done = (tb == lb);
            if (a_done || b_done) {
                const bool overlap = a_moves_first ? (tb >= 1) : (ta >= 1);
                if (b_done)
                    out.b_done_without_meeting = true;  // includes simultaneous finish
                else if (!overlap)
                    out.vacuous_no_overlap = true;
                else
                    out.a_done_without_meeting = true;
                continue;  // terminals do not expand
            }
            // B moves: (ta, tb) -> (ta, tb+1)
            if (pb[tb + 1] == pa[ta])
                out.meeting_reachable = true;
            else
                row[tb + 1] = 1;
            // A moves: (ta, tb) -> (ta+1, tb)
            if (pa[ta + 1] == pb[tb])
                out.meeting_reachable = true;
            else
                next[tb] = 1;
        }
        if (ta < la) {
            std::swap(row, next);
            std::fill(next.begin(), next.end(), 0);
        }
    }
    return out;
}

}  // namespace rvgrid
