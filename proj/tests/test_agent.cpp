#include <doctest.h>

#include "rvgrid/agent.hpp"
#include "rvgrid/decomposition.hpp"

using namespace rvgrid;

namespace {

// Concatenated routes of a descriptor sequence, streamed lazily.
class ConcatRoute {
public:
    explicit ConcatRoute(std::vector<PatternDescriptor> descs) : descs_(std::move(descs)) {
        settle();
    }
    bool done() const { return idx_ == descs_.size(); }
    Direction next() {
        const Direction d = cur_.next();
        if (cur_.done()) {
            ++idx_;
            settle();
        }
        return d;
    }

private:
    void settle() {
        while (idx_ < descs_.size()) {
            cur_ = PatternRoute(descs_[idx_]);
            if (!cur_.done()) return;
            ++idx_;
        }
    }
    std::vector<PatternDescriptor> descs_;
    std::size_t idx_ = 0;
    PatternRoute cur_;
};

}  // namespace

TEST_CASE("assumption route realizes its decomposition descriptor for descriptor") {
    for (std::uint64_t label : {0ULL, 1ULL, 2ULL})
        for (std::uint64_t d : {1ULL, 2ULL}) {
            CAPTURE(label);
            CAPTURE(d);
            const auto symbolic = bd(ProcedureCall::assumption(d), transform(label));
            const auto entries = assumption_entries(label, d);
            REQUIRE(entries.size() == symbolic.size());
            Count total_symbolic(0), total_entries(0);
            for (std::size_t t = 0; t < entries.size(); ++t) {
                REQUIRE(entries[t].desc == symbolic[t]);
                total_symbolic += cost(symbolic[t]);
                total_entries += entries[t].pattern_cost;
            }
            REQUIRE(total_entries == total_symbolic);

            // move-for-move agreement on a long prefix; full-length equality
            // follows from the descriptor equality plus the per-pattern route
            // checks in the pattern tests
            ConcatRoute concat(symbolic);
            RouteCursor route = assumption_route(label, d);
            for (std::size_t t = 0; t < 2000000 && !concat.done(); ++t)
                REQUIRE(route.next() == concat.next());
        }
}

TEST_CASE("harvest route of the first phase") {
    RouteCursor h = harvest_route(0, 1);
    // no PushPattern at d = 1: the first descriptor is the harvest Cloudberry
    CHECK(h.provenance().part == Provenance::Part::HarvestCloudberry);
    CHECK(h.current_descriptor() == PatternDescriptor::cloudberry(1, 1, 1, 0));
    const Count len = h.advance_by(Count::from_decimal("1000000000"));
    CHECK(len == Count(763204));
    CHECK(h.exhausted());
}

TEST_CASE("push pattern route first descriptor") {
    for (std::uint64_t label : {0ULL, 7ULL}) {
        RouteCursor pp = pushpattern_route(label, 1, 2);
        CHECK(pp.current_descriptor() == PatternDescriptor::repeat_seed(5, Count(4516)));
        CHECK(pp.provenance().part == Provenance::Part::HarvestPush);
        CHECK(pp.provenance().push_i == 1);
    }
}

TEST_CASE("rv route starts with the first harvest cloudberry") {
    AgentProgram prog(0, {0, 0});
    RouteCursor rv = rv_route(prog);
    CHECK(rv.phase() == 1);
    CHECK(rv.provenance().part == Provenance::Part::HarvestCloudberry);
    CHECK(rv.current_descriptor() == PatternDescriptor::cloudberry(1, 1, 1, 0));
    // the first visited ball node is the start itself, so the route opens with
    // a full Seed(1)
    const auto expected = materialize(seed_route(1));
    for (Direction d : expected) CHECK(rv.next() == d);
}

TEST_CASE("streams of labels 0 and 1 agree exactly until the first branch") {
    AgentProgram a(0, {0, 0}), b(1, {0, 0});
    RouteCursor ra = rv_route(a), rb = rv_route(b);
    // harvest is label independent at d = 1; both reach the branch together
    const Count harvest_len(763204);
    Count seen(0);
    while (seen < harvest_len) {
        REQUIRE(ra.next() == rb.next());
        seen += Count(1);
    }
    CHECK(ra.at_descriptor_boundary());
    CHECK(rb.at_descriptor_boundary());
    CHECK(ra.provenance().part == Provenance::Part::Step);
    CHECK(ra.provenance().bit_i == 1);
    CHECK(ra.provenance().step_j == 0);
    CHECK(ra.current_descriptor() == PatternDescriptor::berry(4, 1));
    CHECK(rb.current_descriptor() == PatternDescriptor::cloudberry(4, 1, 1, 0));
    // the routes diverge within a few moves of the branch
    bool diverged = false;
    for (int t = 0; t < 32 && !diverged; ++t) diverged = (ra.next() != rb.next());
    CHECK(diverged);
}

TEST_CASE("synchronization counts per phase") {
    for (std::uint64_t d : {1ULL, 2ULL}) {
        const auto entries = assumption_entries(3, d);
        std::uint64_t syncs = 0;
        for (const auto& e : entries)
            if (e.prov.part == Provenance::Part::HarvestSync ||
                e.prov.part == Provenance::Part::StepSync)
                ++syncs;
        CHECK(syncs == d * (2 * d * (d + 1) + 1) + 1);
    }
}

TEST_CASE("advance_by crosses descriptor and phase boundaries exactly") {
    AgentProgram prog(0, {0, 0});
    RouteCursor fast = rv_route(prog);
    RouteCursor slow = rv_route(prog);
    // advance one cursor in a few large leaps, the other move by move
    const std::uint64_t target = 9000;  // crosses the first Cloudberry boundary at 4516
    fast.advance_by(Count(target));
    for (std::uint64_t t = 0; t < target; ++t) slow.next();
    CHECK(fast.offset() == slow.offset());
    CHECK(fast.index_in_phase() == slow.index_in_phase());
    CHECK(fast.intra_offset() == slow.intra_offset());
    for (int t = 0; t < 1000; ++t) REQUIRE(fast.next() == slow.next());
}

TEST_CASE("checkpoint and restore resume the identical stream") {
    AgentProgram prog(6, {2, -3});
    RouteCursor orig = rv_route(prog);
    orig.advance_by(Count(770000));  // inside phase 1, past the harvest
    for (int t = 0; t < 137; ++t) orig.next();

    const auto cp = orig.checkpoint();
    RouteCursor copy = RouteCursor::restore(prog, cp);
    CHECK(copy.offset() == orig.offset());
    CHECK(copy.phase() == orig.phase());
    CHECK(copy.index_in_phase() == orig.index_in_phase());
    for (int t = 0; t < 5000; ++t) REQUIRE(copy.next() == orig.next());
}

TEST_CASE("descriptor boundaries sit on the start node") {
    AgentProgram prog(1, {5, 5});
    RouteCursor rv = rv_route(prog);
    int boundaries = 0;
    while (boundaries < 4) {
        if (rv.at_descriptor_boundary()) {
            CHECK(rv.offset() == Offset{0, 0});
            CHECK(rv.position() == Position::at_node({5, 5}));
            ++boundaries;
            rv.skip_descriptor();
        } else {
            rv.next();
        }
    }
}

TEST_CASE("cursor fast-forward skips far descriptors whole") {
    AgentProgram prog(0, {0, 0});
    RouteCursor rv = rv_route(prog);
    // opponent far outside every phase-1 pattern ball: the whole phase is
    // consumed arithmetically; halt at the end of Assumption(1)
    const FrozenPoint opp{1000000, 1000000, true};
    MoveBudget budget = MoveBudget::unlimited();
    MoveAccum acc;
    const auto out = rv.ff_advance(opp, budget, acc, /*halt_d=*/1);
    CHECK_FALSE(out.met);
    CHECK(out.phase_completed == 1);
    CHECK(rv.phase() == 2);
    CHECK(rv.completed_assumption() == 1);
    CHECK(acc.take() == assumption_cost(transform(0), 1));
}
