#pragma once

// Test-only reference implementations. Routes are produced by materializing
// the pattern definitions literally with nested loops and explicit backtrack
// lists; nothing here shares code with the lazy walkers it checks.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "rvgrid/grid.hpp"
#include "rvgrid/labels.hpp"

namespace naive {

using rvgrid::Direction;
using rvgrid::MoveSequence;
using rvgrid::Node;

inline void append(MoveSequence& out, const MoveSequence& part) {
    out.insert(out.end(), part.begin(), part.end());
}

inline MoveSequence seed_first_period(std::uint64_t x) {
    MoveSequence out;
    for (std::uint64_t i = 1; i <= x; ++i) {
        out.push_back(Direction::N);
        for (std::uint64_t t = 0; t < i; ++t) {
            out.push_back(Direction::S);
            out.push_back(Direction::E);
        }
        for (std::uint64_t t = 0; t < i; ++t) {
            out.push_back(Direction::W);
            out.push_back(Direction::S);
        }
        for (std::uint64_t t = 0; t < i; ++t) {
            out.push_back(Direction::N);
            out.push_back(Direction::W);
        }
        for (std::uint64_t t = 0; t < i; ++t) {
            out.push_back(Direction::E);
            out.push_back(Direction::N);
        }
    }
    return out;
}

inline MoveSequence seed(std::uint64_t x) {
    MoveSequence out = seed_first_period(x);
    append(out, rvgrid::backtrack(out));
    return out;
}

inline MoveSequence berry_first_period(std::uint64_t x, std::uint64_t y) {
    MoveSequence out;
    const Node u{0, 0};
    for (std::uint64_t i = 1; i <= x + y; ++i)
        for (std::uint64_t j = 0; j <= i; ++j)
            for (std::uint64_t k = 0; k <= j; ++k)
                for (const Node& v : rvgrid::ring_clockwise(u, k)) {
                    append(out, rvgrid::canonical_path(u, v));
                    append(out, seed(i - j));
                    append(out, rvgrid::canonical_path(v, u));
                }
    return out;
}

inline MoveSequence berry(std::uint64_t x, std::uint64_t y) {
    MoveSequence out = berry_first_period(x, y);
    append(out, rvgrid::backtrack(out));
    return out;
}

inline std::vector<Node> first_visit_order(std::uint64_t z) {
    std::vector<Node> order;
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    Node pos{0, 0};
    order.push_back(pos);
    seen.insert({0, 0});
    for (Direction d : seed(z)) {
        pos = pos.moved(d);
        if (seen.insert({pos.x, pos.y}).second) order.push_back(pos);
    }
    return order;
}

inline MoveSequence cloudberry_first_period(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                                            std::uint64_t h) {
    MoveSequence out;
    const Node u{0, 0};
    const auto order = first_visit_order(z);
    const std::uint64_t count = order.size();
    for (std::uint64_t i = 0; i < count; ++i) {
        const Node v = order[(h + i) % count];
        append(out, rvgrid::canonical_path(u, v));
        append(out, seed(x));
        append(out, berry(x, y));
        append(out, rvgrid::canonical_path(v, u));
    }
    return out;
}

inline MoveSequence cloudberry(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                               std::uint64_t h) {
    MoveSequence out = cloudberry_first_period(x, y, z, h);
    append(out, rvgrid::backtrack(out));
    return out;
}

// All shortest u->v paths, for checking the canonical-path tie-break rule.
inline void all_shortest_paths(Node u, const Node& v, MoveSequence& prefix,
                               std::vector<MoveSequence>& out) {
    if (u == v) {
        out.push_back(prefix);
        return;
    }
    auto try_dir = [&](Direction d, bool cond) {
        if (!cond) return;
        prefix.push_back(d);
        all_shortest_paths(u.moved(d), v, prefix, out);
        prefix.pop_back();
    };
    try_dir(Direction::N, v.y > u.y);
    try_dir(Direction::S, v.y < u.y);
    try_dir(Direction::E, v.x > u.x);
    try_dir(Direction::W, v.x < u.x);
}

// The unique shortest path traversing every edge on the northern side of the
// bounding rectangle of {u, v}.
inline MoveSequence northern_shortest_path(const Node& u, const Node& v) {
    std::vector<MoveSequence> paths;
    MoveSequence prefix;
    all_shortest_paths(u, v, prefix, paths);
    const std::int64_t top = std::max(u.y, v.y);
    const std::int64_t xlo = std::min(u.x, v.x), xhi = std::max(u.x, v.x);
    std::vector<MoveSequence> winners;
    for (const auto& p : paths) {
        std::set<std::int64_t> covered;  // west x of horizontal top-row edges
        Node pos = u;
        for (Direction d : p) {
            const Node nxt = pos.moved(d);
            if (pos.y == top && nxt.y == top)
                covered.insert(std::min(pos.x, nxt.x));
            pos = nxt;
        }
        bool all = true;
        for (std::int64_t xx = xlo; xx < xhi; ++xx)
            if (!covered.count(xx)) {
                all = false;
                break;
            }
        if (all) winners.push_back(p);
    }
    if (winners.size() != 1) throw std::logic_error("northern path not unique");
    return winners.front();
}

// Brute-force first differing transformed-label bit (1-based), with 0-padding.
inline std::size_t first_diff_brute(std::uint64_t a, std::uint64_t b) {
    const auto ta = rvgrid::transform(a), tb = rvgrid::transform(b);
    for (std::size_t i = 1;; ++i)
        if (ta.bit_at(i) != tb.bit_at(i)) return i;
}

}  // namespace naive
