#pragma once

// The full rendezvous program of one agent as a resumable route cursor: the
// doubling loop over Assumption phases, each phase interpreted procedurally
// into its ordered basic-pattern calls (Harvest with its PushPattern prefix,
// then the bit-processing steps with their synchronization RepeatSeeds).
//
// Every basic pattern is a closed walk from the agent's start node, so the
// cursor sits exactly on the start node at every descriptor boundary.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rvgrid/bigint.hpp"
#include "rvgrid/decomposition.hpp"
#include "rvgrid/grid.hpp"
#include "rvgrid/labels.hpp"
#include "rvgrid/patterns.hpp"

namespace rvgrid {

struct Provenance {
    std::uint64_t phase_d = 0;
    enum class Part : std::uint8_t {
        HarvestPush,
        HarvestCloudberry,
        HarvestSync,
        Step,
        StepSync
    } part = Part::HarvestCloudberry;
    std::uint64_t push_i = 0;  // PushPattern parameter, for HarvestPush
    std::uint64_t bit_i = 0;   // bit index, for Step / StepSync
    std::uint64_t step_j = 0;  // step index, for Step / StepSync

    friend bool operator==(const Provenance&, const Provenance&) = default;

    std::string to_string() const {
        const std::string head = "d=" + std::to_string(phase_d);
        switch (part) {
            case Part::HarvestPush: return head + " harvest:push(" + std::to_string(push_i) + ")";
            case Part::HarvestCloudberry: return head + " harvest:cloudberry";
            case Part::HarvestSync: return head + " harvest:sync";
            case Part::Step:
                return head + " step(i=" + std::to_string(bit_i) + ",j=" + std::to_string(step_j) +
                       ")";
            case Part::StepSync:
                return head + " sync(i=" + std::to_string(bit_i) + ",j=" + std::to_string(step_j) +
                       ")";
        }
        return head;
    }
};

struct PhaseEntry {
    PatternDescriptor desc;
    Provenance prov;
    Count pattern_cost;  // cached cost(desc)
};

struct AgentProgram {
    std::uint64_t label = 0;
    TransformedLabel transformed = transform(0);
    Node start;

    AgentProgram(std::uint64_t label_, Node start_)
        : label(label_), transformed(transform(label_)), start(start_) {}
};

namespace detail {

// Basic calls issued by Procedure Assumption(d), in execution order. This is
// the procedural interpreter the route cursor runs; the decomposition module
// computes the same sequence from the definition and the two are checked
// against each other in the tests.
inline const std::vector<PatternDescriptor>& assumption_calls(std::uint64_t label,
                                                              std::uint64_t d) {
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, std::uint64_t>,
                    std::unique_ptr<std::vector<PatternDescriptor>>>
        memo;
    std::lock_guard lock(mu);
    const TransformedLabel tl = transform(label);
    // bottom-up over the powers of two, so the PushPattern replays are ready
    for (std::uint64_t v = 1; v <= d; v *= 2) {
        const auto key = std::make_pair(label, v);
        if (memo.count(key)) continue;
        auto out = std::make_unique<std::vector<PatternDescriptor>>();
        // Harvest(v): PushPattern(i, v) for powers of two i < v ...
        for (std::uint64_t i = 1; i < v; i *= 2) {
            for (const PatternDescriptor& p : *memo.at({label, i})) {
                if (p.type == PatternType::RepeatSeed)
                    out->push_back(PatternDescriptor::berry(p.x, v));
                else
                    out->push_back(PatternDescriptor::repeat_seed(v + p.x + 2 * p.y,
                                                                  cloudberry_cost(p.x, p.y, p.y)));
            }
        }
        // ...then the harvest Cloudberry and its synchronization RepeatSeed
        const std::uint64_t rho_v = rho(v).to_u64();
        out->push_back(PatternDescriptor::cloudberry(rho_v, v, v, 0));
        out->push_back(PatternDescriptor::repeat_seed(radius_r(v).to_u64(),
                                                      cloudberry_cost(rho_v, v, v)));
        // bit-processing steps
        std::uint64_t radius = radius_r(v).to_u64();
        for (std::uint64_t i = 1; i <= v; ++i)
            for (std::uint64_t j = 0; j <= 2 * v * (v + 1); ++j) {
                if (tl.bit_at(i) == 0)
                    out->push_back(PatternDescriptor::berry(radius, v));
                else
                    out->push_back(PatternDescriptor::cloudberry(radius, v, v, j));
                const std::uint64_t branch_radius = radius;
                radius += 3 * v;
                out->push_back(
                    PatternDescriptor::repeat_seed(radius, cloudberry_cost(branch_radius, v, v)));
            }
        memo.emplace(key, std::move(out));
    }
    return *memo.at({label, d});
}

}  // namespace detail

// Descriptor list of one Assumption phase, annotated with provenance.
inline std::vector<PhaseEntry> assumption_entries(std::uint64_t label, std::uint64_t d) {
    std::vector<PhaseEntry> out;
    const std::uint64_t steps = 2 * d * (d + 1) + 1;
    // provenance is reconstructed from the position in the flat call list
    std::size_t pos = 0;
    const auto& calls = detail::assumption_calls(label, d);
    for (std::uint64_t i = 1; i < d; i *= 2) {
        const std::size_t inner = detail::assumption_calls(label, i).size();
        for (std::size_t t = 0; t < inner; ++t, ++pos)
            out.push_back({calls[pos], {d, Provenance::Part::HarvestPush, i, 0, 0}, cost(calls[pos])});
    }
    out.push_back({calls[pos], {d, Provenance::Part::HarvestCloudberry, 0, 0, 0}, cost(calls[pos])});
    ++pos;
    out.push_back({calls[pos], {d, Provenance::Part::HarvestSync, 0, 0, 0}, cost(calls[pos])});
    ++pos;
    for (std::uint64_t i = 1; i <= d; ++i)
        for (std::uint64_t j = 0; j < steps; ++j) {
            out.push_back({calls[pos], {d, Provenance::Part::Step, 0, i, j}, cost(calls[pos])});
            ++pos;
            out.push_back({calls[pos], {d, Provenance::Part::StepSync, 0, i, j}, cost(calls[pos])});
            ++pos;
        }
    if (pos != calls.size()) throw std::logic_error("assumption_entries: provenance mismatch");
    return out;
}

// Resumable route cursor. In full-program mode the descriptor stream is
// unbounded (d doubles forever); in single-procedure mode it ends with the
// given entry list.
class RouteCursor {
public:
    struct Checkpoint {
        std::uint64_t phase_d = 1;
        std::size_t index = 0;
        Count intra;
    };

    static RouteCursor rv(const AgentProgram& program) {
        RouteCursor c(program, /*full=*/true, 1);
        c.load_phase();
        return c;
    }
    static RouteCursor assumption(const AgentProgram& program, std::uint64_t d) {
        RouteCursor c(program, /*full=*/false, d);
        c.entries_ = assumption_entries(program.label, d);
        c.enter_descriptor();
        return c;
    }
    static RouteCursor harvest(const AgentProgram& program, std::uint64_t d) {
        RouteCursor c(program, /*full=*/false, d);
        auto all = assumption_entries(program.label, d);
        for (auto& e : all)
            if (e.prov.part == Provenance::Part::HarvestPush ||
                e.prov.part == Provenance::Part::HarvestCloudberry ||
                e.prov.part == Provenance::Part::HarvestSync)
                c.entries_.push_back(std::move(e));
        c.enter_descriptor();
        return c;
    }
    static RouteCursor push_pattern(const AgentProgram& program, std::uint64_t i, std::uint64_t d) {
        RouteCursor c(program, /*full=*/false, d);
        auto all = assumption_entries(program.label, d);
        for (auto& e : all)
            if (e.prov.part == Provenance::Part::HarvestPush && e.prov.push_i == i)
                c.entries_.push_back(std::move(e));
        c.enter_descriptor();
        return c;
    }

    const AgentProgram& program() const { return program_; }
    const Node& start() const { return program_.start; }
    bool exhausted() const { return exhausted_; }  // single-procedure mode only

    std::uint64_t phase() const { return phase_d_; }
    std::size_t index_in_phase() const { return index_; }
    const PatternDescriptor& current_descriptor() const { return entries_[index_].desc; }
    const Provenance& provenance() const { return entries_[index_].prov; }
    const Count& current_cost() const { return entries_[index_].pattern_cost; }

    bool at_descriptor_boundary() const { return !exhausted_ && intra_is_zero(); }
    Count intra_offset() const { return intra_base_ + Count(intra_delta_); }
    Count descriptor_remaining() const { return exhausted_ ? Count(0) : walker_.remaining_total(); }

    // Highest d whose Assumption(d) has been fully completed (0 if none).
    std::uint64_t completed_assumption() const { return completed_assumption_; }
    const Count& completed_descriptors() const { return completed_descriptors_; }

    Offset offset() const { return exhausted_ ? Offset{} : walker_.offset(); }
    Position position() const {
        const Offset o = offset();
        return Position::at_node(program_.start.offset_by(o.x, o.y));
    }

    Direction peek() const { return walker_.peek(); }
    Direction next() {
        const Direction d = walker_.next();
        ++intra_delta_;
        if (walker_.done()) finish_descriptor();
        return d;
    }

    Count advance_by(Count k) {
        Count adv(0);
        while (!exhausted_ && !k.is_zero()) {
            if (at_descriptor_boundary() && k >= entries_[index_].pattern_cost) {
                const Count c = entries_[index_].pattern_cost;
                adv += c;
                k -= c;
                finish_descriptor();
                continue;
            }
            const Count a = walker_.advance_by(k);
            intra_base_ += a;
            adv += a;
            k -= a;
            if (walker_.done()) finish_descriptor();
            if (a.is_zero()) break;
        }
        return adv;
    }

    // Skip the whole current descriptor (requires a descriptor boundary).
    // Returns its cost and the phase that completed, if any.
    std::pair<Count, std::uint64_t> skip_descriptor() {
        const Count c = entries_[index_].pattern_cost;
        const std::uint64_t fin = finish_descriptor();
        return {c, fin};
    }

    struct FfOutcome {
        bool met = false;
        bool final_edge_completed = true;
        std::uint64_t phase_completed = 0;  // set when an Assumption finished during the call
    };

    // Advance against a frozen opponent (position relative to the start node)
    // until meeting, budget exhaustion, or completion of Assumption(halt_d).
    FfOutcome ff_advance(const FrozenPoint& opp, MoveBudget& budget, MoveAccum& moves,
                         std::uint64_t halt_d = 0) {
        FfOutcome out;
        while (!exhausted_ && !budget.exhausted()) {
            if (at_descriptor_boundary()) {
                const PatternDescriptor& desc = entries_[index_].desc;
                if (!opp.within(0, 0, bounding_radius(desc))) {
                    const Count& c = entries_[index_].pattern_cost;
                    if (budget.covers(c)) {
                        moves.add(c);
                        budget.spend(c);
                        const std::uint64_t fin = finish_descriptor();
                        if (halt_d && fin && fin >= halt_d) {
                            out.phase_completed = fin;
                            return out;
                        }
                        continue;
                    }
                    const Count allowed = budget.left;
                    const Count a = advance_by(allowed);
                    moves.add(a);
                    budget.spend(a);
                    return out;
                }
            }
            const FfResult r = walker_.ff_advance(opp, budget, moves);
            sync_intra();
            if (r.met) {
                out.met = true;
                out.final_edge_completed = r.final_edge_completed;
                if (walker_.done()) {
                    const std::uint64_t fin = finish_descriptor();
                    if (halt_d && fin && fin >= halt_d) out.phase_completed = fin;
                }
                return out;
            }
            if (!walker_.done()) return out;  // budget cut
            const std::uint64_t fin = finish_descriptor();
            if (halt_d && fin && fin >= halt_d) {
                out.phase_completed = fin;
                return out;
            }
        }
        return out;
    }

    void covers(CoverSet& out) const {
        if (exhausted_) return;
        walker_.covers(out);
    }

    // Batched advancement that must stay inside the current descriptor (the
    // caller guarantees k is bounded by a cover's remaining moves).
    void advance_within_u64(std::uint64_t k) {
        const std::uint64_t a = walker_.advance_u64(k);
        intra_delta_ += a;
        if (walker_.done()) {
            sync_intra();
            finish_descriptor();
        }
    }

    Checkpoint checkpoint() const { return {phase_d_, index_, intra_offset()}; }

    static RouteCursor restore(const AgentProgram& program, const Checkpoint& cp) {
        RouteCursor c = rv(program);
        while (c.phase_d_ < cp.phase_d) {
            c.entries_.clear();
            c.phase_d_ *= 2;
            c.load_phase();
        }
        c.index_ = cp.index;
        c.enter_descriptor();
        c.walker_.advance_by(cp.intra);
        c.intra_base_ = cp.intra;
        c.intra_delta_ = 0;
        if (c.walker_.done()) c.finish_descriptor();
        return c;
    }

private:
    RouteCursor(const AgentProgram& program, bool full, std::uint64_t d)
        : program_(program), full_(full), phase_d_(d) {}

    bool intra_is_zero() const { return intra_delta_ == 0 && intra_base_.is_zero(); }

    void sync_intra() {
        // walker advanced by an untracked amount: recompute from cost - remaining
        intra_base_ = entries_[index_].pattern_cost - walker_.remaining_total();
        intra_delta_ = 0;
    }

    void load_phase() {
        entries_ = assumption_entries(program_.label, phase_d_);
        index_ = 0;
        enter_descriptor();
    }

    void enter_descriptor() {
        if (index_ >= entries_.size()) {
            roll_phase();
            return;
        }
        walker_ = PatternRoute(entries_[index_].desc);
        intra_base_ = Count(0);
        intra_delta_ = 0;
        if (walker_.done()) throw std::logic_error("empty descriptor in program stream");
    }

    // Moves to the next descriptor; returns the phase parameter when the
    // current phase just completed, and 0 otherwise.
    std::uint64_t finish_descriptor() {
        completed_descriptors_ += Count(1);
        ++index_;
        if (index_ >= entries_.size()) {
            const std::uint64_t finished = phase_d_;
            completed_assumption_ = std::max(completed_assumption_, phase_d_);
            roll_phase();
            return finished;
        }
        enter_descriptor();
        return 0;
    }

    void roll_phase() {
        if (!full_) {
            exhausted_ = true;
            entries_.clear();
            entries_.push_back({});  // keep accessors harmless
            index_ = 0;
            return;
        }
        phase_d_ *= 2;
        load_phase();
    }

    AgentProgram program_;
    bool full_ = true;
    bool exhausted_ = false;
    std::uint64_t phase_d_ = 1;
    std::vector<PhaseEntry> entries_;
    std::size_t index_ = 0;
    PatternRoute walker_;
    Count intra_base_;
    std::uint64_t intra_delta_ = 0;
    Count completed_descriptors_;
    std::uint64_t completed_assumption_ = 0;
};

inline RouteCursor rv_route(const AgentProgram& program) { return RouteCursor::rv(program); }
inline RouteCursor assumption_route(std::uint64_t label, std::uint64_t d, Node start = {0, 0}) {
    return RouteCursor::assumption(AgentProgram(label, start), d);
}
inline RouteCursor harvest_route(std::uint64_t label, std::uint64_t d, Node start = {0, 0}) {
    return RouteCursor::harvest(AgentProgram(label, start), d);
}
inline RouteCursor pushpattern_route(std::uint64_t label, std::uint64_t i, std::uint64_t d,
                                     Node start = {0, 0}) {
    return RouteCursor::push_pattern(AgentProgram(label, start), i, d);
}

}  // namespace rvgrid
