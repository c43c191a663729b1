#pragma once

// Named property suites over the pattern, decomposition and simulator layers.
// The command-line `verify` subcommand and the acceptance runner both execute
// these; each check is exact (integer or sequence equality, no tolerances).

#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rvgrid/agent.hpp"
#include "rvgrid/decomposition.hpp"
#include "rvgrid/grid.hpp"
#include "rvgrid/labels.hpp"
#include "rvgrid/patterns.hpp"
#include "rvgrid/simulator.hpp"

namespace rvgrid::checks {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline void add(std::vector<CheckResult>& out, const std::string& name, bool ok,
                const std::string& detail = "") {
    out.push_back({name, ok, detail});
}

inline MoveSequence route_of(const PatternDescriptor& d) {
    return materialize(PatternRoute(d));
}

inline MoveSequence first_period_of(const PatternDescriptor& d) {
    PatternRoute r(d);
    MoveSequence out;
    while (!r.done() && !r.in_second_period()) out.push_back(r.next());
    return out;
}

inline std::vector<PatternDescriptor> desk_descriptors(std::uint64_t max_radius) {
    std::vector<PatternDescriptor> out;
    for (std::uint64_t x = 1; x <= max_radius; ++x) out.push_back(PatternDescriptor::seed(x));
    for (std::uint64_t x = 1; x <= max_radius; ++x)
        for (std::uint64_t n = 1; n <= 2; ++n)
            out.push_back(PatternDescriptor::repeat_seed(x, Count(n)));
    for (std::uint64_t x = 0; x <= max_radius; ++x)
        for (std::uint64_t y = 0; x + y <= max_radius; ++y)
            if (x + y > 0) out.push_back(PatternDescriptor::berry(x, y));
    for (std::uint64_t x = 0; x <= max_radius; ++x)
        for (std::uint64_t y = 0; x + y <= max_radius; ++y)
            for (std::uint64_t z = 0; x + y + z <= max_radius; ++z)
                for (std::uint64_t h : {0ULL, 2ULL})
                    if (x + y + z > 0) out.push_back(PatternDescriptor::cloudberry(x, y, z, h));
    return out;
}

}  // namespace detail

// Coverage of the ball by Seed, prefix orderings, closure/backtrack structure,
// and bounding radii.
inline std::vector<CheckResult> patterns_suite() {
    using namespace detail;
    std::vector<CheckResult> out;

    // ball coverage: visited nodes and traversed edges for x = 1..6
    for (std::uint64_t x = 1; x <= 6; ++x) {
        const auto moves = route_of(PatternDescriptor::seed(x));
        std::set<std::pair<std::int64_t, std::int64_t>> nodes;
        std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> edges;
        Node pos{0, 0};
        nodes.insert({0, 0});
        for (Direction m : moves) {
            const Node nxt = pos.moved(m);
            auto a = std::make_pair(pos.x, pos.y), b = std::make_pair(nxt.x, nxt.y);
            if (b < a) std::swap(a, b);
            edges.insert({a.first, a.second, b.first, b.second});
            nodes.insert({nxt.x, nxt.y});
            pos = nxt;
        }
        bool ok = pos == Node{0, 0};
        std::uint64_t expect_nodes = 0, expect_edges = 0;
        const std::int64_t xi = static_cast<std::int64_t>(x);
        for (std::int64_t px = -xi; px <= xi && ok; ++px)
            for (std::int64_t py = -xi; py <= xi && ok; ++py) {
                if (l1_distance({0, 0}, {px, py}) > x) continue;
                ++expect_nodes;
                ok = ok && nodes.count({px, py}) > 0;
                if (l1_distance({0, 0}, {px + 1, py}) <= x) {
                    ++expect_edges;
                    ok = ok && edges.count({px, py, px + 1, py}) > 0;
                }
                if (l1_distance({0, 0}, {px, py + 1}) <= x) {
                    ++expect_edges;
                    ok = ok && edges.count({px, py, px, py + 1}) > 0;
                }
            }
        ok = ok && nodes.size() == expect_nodes && edges.size() == expect_edges;
        add(out, "ball coverage of Seed(" + std::to_string(x) + ")", ok);
    }

    // first periods are literal prefixes: Seed up to 6, Berry spans up to 4
    {
        const auto big = first_period_of(PatternDescriptor::seed(6));
        bool ok = true;
        for (std::uint64_t x = 0; x <= 6; ++x) {
            const auto small = first_period_of(PatternDescriptor::seed(x));
            ok = ok && small.size() <= big.size() &&
                 std::equal(small.begin(), small.end(), big.begin());
        }
        add(out, "Seed first periods form a prefix chain (x <= 6)", ok);
    }
    {
        const auto big = first_period_of(PatternDescriptor::berry(2, 2));
        bool ok = true;
        for (std::uint64_t x = 0; x <= 4; ++x)
            for (std::uint64_t y = 0; x + y <= 4; ++y) {
                const auto small = first_period_of(PatternDescriptor::berry(x, y));
                ok = ok && small.size() <= big.size() &&
                     std::equal(small.begin(), small.end(), big.begin());
            }
        add(out, "Berry first periods form a prefix chain (x+y <= 4)", ok);
    }

    // closure and second-period backtrack for the three two-period patterns
    {
        bool ok = true;
        for (const auto& d : desk_descriptors(4)) {
            if (d.type == PatternType::RepeatSeed) continue;
            PatternRoute r(d);
            MoveSequence first, second;
            while (!r.done() && !r.in_second_period()) first.push_back(r.next());
            while (!r.done()) second.push_back(r.next());
            ok = ok && second == backtrack(first);
            Node pos{0, 0};
            for (Direction m : first) pos = pos.moved(m);
            for (Direction m : second) pos = pos.moved(m);
            ok = ok && pos == Node{0, 0};
        }
        add(out, "second period backtracks the first; routes are closed (radius <= 4)", ok);
    }

    // bounding radius equals the enumerated maximum
    {
        bool ok = true;
        for (const auto& d : desk_descriptors(5)) {
            Node pos{0, 0};
            std::uint64_t seen = 0;
            for (Direction m : route_of(d)) {
                pos = pos.moved(m);
                seen = std::max(seen, l1_distance({0, 0}, pos));
            }
            ok = ok && seen == bounding_radius(d);
        }
        add(out, "bounding radius equals enumerated maximum (radius <= 5)", ok);
    }

    // first-visit ordering starts at the origin and enumerates the ball
    {
        bool ok = true;
        for (std::uint64_t z = 0; z <= 5; ++z) {
            const auto ord = *first_visit_order(z);
            ok = ok && ord.size() == ball_size_u64(z) && ord[0] == Offset{0, 0};
            std::set<std::pair<std::int64_t, std::int64_t>> distinct;
            for (const auto& o : ord) {
                ok = ok && static_cast<std::uint64_t>((o.x >= 0 ? o.x : -o.x) +
                                                      (o.y >= 0 ? o.y : -o.y)) <= z;
                distinct.insert({o.x, o.y});
            }
            ok = ok && distinct.size() == ord.size();
        }
        add(out, "first-visit order enumerates the ball exactly", ok);
    }

    return out;
}

// Exact cost identities against full route enumeration.
inline std::vector<CheckResult> costs_suite() {
    using namespace detail;
    std::vector<CheckResult> out;
    {
        bool ok = true;
        std::string fail;
        for (const auto& d : desk_descriptors(5)) {
            const Count enumerated(route_of(d).size());
            if (!(cost(d) == enumerated)) {
                ok = false;
                fail = d.to_string();
                break;
            }
        }
        add(out, "cost equals enumerated route length (radius <= 5)", ok, fail);
    }
    {
        bool ok = true;
        for (std::uint64_t x = 0; x <= 50; ++x) {
            ok = ok && cost(PatternDescriptor::seed(x)) == Count(8 * x * x + 10 * x);
            ok = ok && route_of(PatternDescriptor::seed(x)).size() == 8 * x * x + 10 * x;
        }
        add(out, "Seed cost closed form 8x^2+10x up to x = 50", ok);
    }
    add(out, "Berry(1,1) costs 432",
        cost(PatternDescriptor::berry(1, 1)) == Count(432) &&
            route_of(PatternDescriptor::berry(1, 1)).size() == 432);
    {
        bool ok = true;
        for (std::uint64_t h = 0; h <= 4; ++h) {
            ok = ok && cost(PatternDescriptor::cloudberry(1, 1, 1, h)) == Count(4516);
            ok = ok && route_of(PatternDescriptor::cloudberry(1, 1, 1, h)).size() == 4516;
        }
        add(out, "Cloudberry(1,1,1,h) costs 4516 for h = 0..4", ok);
    }
    return out;
}

// Decomposition counts, parameter bounds, label alignment, and agreement with
// the procedural route cursors.
inline std::vector<CheckResult> decomposition_suite() {
    using namespace detail;
    std::vector<CheckResult> out;

    add(out, "L2(1) = 2", l2_count(1) == Count(2));
    {
        bool ok = true;
        for (std::uint64_t d : {1ULL, 2ULL, 4ULL, 8ULL}) {
            const auto label = transform(1);
            ok = ok && Count(bd(ProcedureCall::assumption(d), label).size()) == l1_count(d);
            ok = ok && Count(bd(ProcedureCall::harvest(d), label).size()) == l2_count(d);
        }
        add(out, "decomposition sizes match L1/L2 for d in {1,2,4,8}", ok);
    }
    {
        bool ok = true;
        for (std::uint64_t d : {1ULL, 2ULL, 4ULL}) {
            Count max_seen(0);
            for (const auto& p : bd(ProcedureCall::assumption(d), transform(1)))
                max_seen = std::max(max_seen, Count(p.x));
            ok = ok && max_seen == max_first_param(d);
            ok = ok && max_first_param(d) == rho(2 * d) - Count(3) * Count(d);
        }
        add(out, "max first parameter equals rho(2d) - 3d for d in {1,2,4}", ok);
    }
    {
        bool ok = true;
        for (std::uint64_t d : {1ULL, 2ULL, 4ULL})
            for (const auto& p : bd(ProcedureCall::assumption(d), transform(2))) {
                if (p.type == PatternType::Berry) ok = ok && p.y == d;
                if (p.type == PatternType::Cloudberry) ok = ok && p.y == d && p.z == d;
            }
        add(out, "coverage parameters inside a phase are pinned to d", ok);
    }
    {
        bool ok = true;
        for (auto [la, lb] : {std::pair<std::uint64_t, std::uint64_t>{0, 1}, {2, 5}, {3, 4}})
            for (std::uint64_t d : {1ULL, 2ULL, 4ULL}) {
                const auto a = bd(ProcedureCall::assumption(d), transform(la));
                const auto b = bd(ProcedureCall::assumption(d), transform(lb));
                ok = ok && a.size() == b.size();
                for (std::size_t t = 0; ok && t < a.size(); ++t) {
                    ok = a[t].x == b[t].x;
                    if (a[t].type != b[t].type)
                        ok = ok && a[t].type != PatternType::RepeatSeed &&
                             b[t].type != PatternType::RepeatSeed;
                }
            }
        add(out, "decompositions align across labels except at bit branches", ok);
    }
    {
        bool ok = true;
        for (auto [i, d] : {std::pair<std::uint64_t, std::uint64_t>{1, 2}, {2, 4}, {4, 8}}) {
            const auto a = bd(ProcedureCall::push_pattern(i, d), transform(0));
            const auto b = bd(ProcedureCall::push_pattern(i, d), transform(5));
            ok = ok && a == b;
            const Count bound = max_first_param(i) + Count(3) * Count(d);
            for (const auto& p : a) ok = ok && Count(p.x) <= bound;
        }
        add(out, "push replay is label independent with first parameters <= x + 3d", ok);
    }
    // perfectness: the procedural route realizes the decomposition
    {
        bool ok = true;
        for (std::uint64_t label : {0ULL, 1ULL, 2ULL})
            for (std::uint64_t d : {1ULL, 2ULL}) {
                const auto symbolic = bd(ProcedureCall::assumption(d), transform(label));
                const auto entries = assumption_entries(label, d);
                ok = ok && entries.size() == symbolic.size();
                Count sum_a(0), sum_b(0);
                for (std::size_t t = 0; ok && t < entries.size(); ++t) {
                    ok = entries[t].desc == symbolic[t];
                    sum_a += entries[t].pattern_cost;
                    sum_b += cost(symbolic[t]);
                }
                ok = ok && sum_a == sum_b;
                // spot-check the concatenated moves
                RouteCursor route = assumption_route(label, d);
                std::size_t idx = 0;
                PatternRoute cur(symbolic[0]);
                for (std::uint64_t t = 0; ok && t < 100000; ++t) {
                    while (cur.done() && idx + 1 < symbolic.size()) cur = PatternRoute(symbolic[++idx]);
                    if (cur.done()) break;
                    ok = route.next() == cur.next();
                }
            }
        add(out, "assumption routes realize their decompositions exactly (d in {1,2})", ok);
    }
    return out;
}

// Push and rendezvous properties checked by exhaustive schedule exploration at
// whole-edge granularity.
inline std::vector<CheckResult> push_suite(bool include_large = true) {
    using namespace detail;
    std::vector<CheckResult> out;
    struct PushCase {
        std::string name;
        std::vector<PatternDescriptor> pusher;  // route A
        std::vector<PatternDescriptor> pushed;  // route B, concurrently precedes A
        Offset offset;
        bool rendezvous_kind;  // true: neither side may finish without meeting
        bool large = false;
    };
    std::vector<PushCase> cases;
    cases.push_back({"same-origin Seed(1) before Seed(2): meet by first completion",
                     {PatternDescriptor::seed(2)},
                     {PatternDescriptor::seed(1)},
                     {0, 0},
                     true});
    cases.push_back({"same-origin Seed(2) before Seed(2): meet by first completion",
                     {PatternDescriptor::seed(2)},
                     {PatternDescriptor::seed(2)},
                     {0, 0},
                     true});
    cases.push_back({"same-origin Berry(1,1) before Berry(1,1): meet by first completion",
                     {PatternDescriptor::berry(1, 1)},
                     {PatternDescriptor::berry(1, 1)},
                     {0, 0},
                     true});
    cases.push_back({"same-origin Berry(1,0) before Berry(1,1): meet by first completion",
                     {PatternDescriptor::berry(1, 1)},
                     {PatternDescriptor::berry(1, 0)},
                     {0, 0},
                     true});
    cases.push_back({"RepeatSeed(3,432) pushes Berry(1,1) at distance 1",
                     {PatternDescriptor::repeat_seed(3, Count(432))},
                     {PatternDescriptor::berry(1, 1)},
                     {1, 0},
                     false});
    cases.push_back({"RepeatSeed(4,432) pushes Berry(1,1) at distance 2",
                     {PatternDescriptor::repeat_seed(4, Count(432))},
                     {PatternDescriptor::berry(1, 1)},
                     {1, 1},
                     false});
    cases.push_back({"RepeatSeed(3,536) pushes Cloudberry(0,1,1,0) at distance 1",
                     {PatternDescriptor::repeat_seed(3, Count(536))},
                     {PatternDescriptor::cloudberry(0, 1, 1, 0)},
                     {0, 1},
                     false});
    cases.push_back({"Berry(1,1) pushes RepeatSeed(1,3) at distance 1",
                     {PatternDescriptor::berry(1, 1)},
                     {PatternDescriptor::repeat_seed(1, Count(3))},
                     {1, 0},
                     false});
    cases.push_back({"Berry(2,2) pushes RepeatSeed(2,5) at distance 2",
                     {PatternDescriptor::berry(2, 2)},
                     {PatternDescriptor::repeat_seed(2, Count(5))},
                     {2, 0},
                     false});
    cases.push_back({"Cloudberry(1,1,1,0) pushes [RepeatSeed(1,1); Berry(1,1)] at distance 1",
                     {PatternDescriptor::cloudberry(1, 1, 1, 0)},
                     {PatternDescriptor::repeat_seed(1, Count(1)), PatternDescriptor::berry(1, 1)},
                     {1, 0},
                     false});
    cases.push_back({"RepeatSeed(4,4516) pushes Cloudberry(1,1,1,0) at distance 1",
                     {PatternDescriptor::repeat_seed(4, Count(4516))},
                     {PatternDescriptor::cloudberry(1, 1, 1, 0)},
                     {1, 0},
                     false,
                     /*large=*/true});

    for (const auto& c : cases) {
        if (c.large && !include_large) continue;
        const auto res = exhaustive_explore(c.pusher, c.pushed, c.offset,
                                            /*a_moves_first=*/false,
                                            std::uint64_t{1} << 33);
        bool ok = !res.a_done_without_meeting;
        if (c.rendezvous_kind) ok = ok && !res.b_done_without_meeting;
        std::ostringstream det;
        det << res.states << " joint states";
        add(out, c.name, ok, det.str());
    }
    return out;
}

inline bool all_passed(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs)
        if (!r.passed) return false;
    return true;
}

}  // namespace rvgrid::checks
