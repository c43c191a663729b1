#pragma once

// Lattice geometry of the oriented infinite grid: nodes, cardinal moves,
// canonical shortest paths, ring orderings and exact agent positions
// (including points inside edges).

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvgrid/bigint.hpp"

namespace rvgrid {

enum class Direction : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };

inline constexpr std::array<Direction, 4> all_directions{Direction::N, Direction::E,
                                                         Direction::S, Direction::W};

inline constexpr Direction inverse(Direction d) {
    switch (d) {
        case Direction::N: return Direction::S;
        case Direction::E: return Direction::W;
        case Direction::S: return Direction::N;
        case Direction::W: return Direction::E;
    }
    return Direction::N;
}

inline constexpr char to_char(Direction d) {
    switch (d) {
        case Direction::N: return 'N';
        case Direction::E: return 'E';
        case Direction::S: return 'S';
        case Direction::W: return 'W';
    }
    return '?';
}

inline constexpr std::int64_t dx_of(Direction d) {
    return d == Direction::E ? 1 : d == Direction::W ? -1 : 0;
}
inline constexpr std::int64_t dy_of(Direction d) {
    return d == Direction::N ? 1 : d == Direction::S ? -1 : 0;
}

namespace detail {
inline std::int64_t checked_step(std::int64_t v, std::int64_t delta) {
    if ((delta > 0 && v > INT64_MAX - delta) || (delta < 0 && v < INT64_MIN - delta))
        throw std::overflow_error("grid coordinate overflow");
    return v + delta;
}
}  // namespace detail

// East-positive x, north-positive y.
struct Node {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Node&, const Node&) = default;
    friend auto operator<=>(const Node&, const Node&) = default;

    Node moved(Direction d) const {
        return Node{detail::checked_step(x, dx_of(d)), detail::checked_step(y, dy_of(d))};
    }
    Node offset_by(std::int64_t dx, std::int64_t dy) const {
        return Node{detail::checked_step(x, dx), detail::checked_step(y, dy)};
    }
    std::string to_string() const {
        return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
    }
};

inline std::uint64_t l1_distance(const Node& a, const Node& b) {
    auto adiff = [](std::int64_t p, std::int64_t q) {
        return p >= q ? static_cast<std::uint64_t>(p - q) : static_cast<std::uint64_t>(q - p);
    };
    return adiff(a.x, b.x) + adiff(a.y, b.y);
}

// Number of nodes at L1 distance at most r: 2r(r+1)+1.
inline Count ball_size(std::uint64_t r) {
    return Count(2) * Count(r) * Count(r + 1) + Count(1);
}
inline std::uint64_t ball_size_u64(std::uint64_t r) { return 2 * r * (r + 1) + 1; }

using MoveSequence = std::vector<Direction>;

// Reversed order with inverted directions; following s then backtrack(s)
// retraverses the same edges back to the start.
inline MoveSequence backtrack(const MoveSequence& s) {
    MoveSequence r;
    r.reserve(s.size());
    for (auto it = s.rbegin(); it != s.rend(); ++it) r.push_back(inverse(*it));
    return r;
}

// Canonical shortest path: the horizontal run lies on the northern row of the
// bounding rectangle. Northbound moves come first when the target is higher,
// horizontal moves come first when the target is lower.
inline MoveSequence canonical_path(const Node& u, const Node& v) {
    MoveSequence out;
    const std::int64_t dx = v.x - u.x;
    const std::int64_t dy = v.y - u.y;
    const Direction horiz = dx >= 0 ? Direction::E : Direction::W;
    const std::uint64_t nh = dx >= 0 ? static_cast<std::uint64_t>(dx)
                                     : static_cast<std::uint64_t>(-dx);
    if (dy > 0) {
        out.insert(out.end(), static_cast<std::size_t>(dy), Direction::N);
        out.insert(out.end(), nh, horiz);
    } else {
        out.insert(out.end(), nh, horiz);
        out.insert(out.end(), static_cast<std::size_t>(-dy), Direction::S);
    }
    return out;
}

// All nodes at L1 distance exactly k from u, starting due North and turning
// clockwise (toward East first). 4k nodes for k >= 1.
inline std::vector<Node> ring_clockwise(const Node& u, std::uint64_t k) {
    if (k == 0) return {u};
    std::vector<Node> out;
    out.reserve(4 * k);
    const std::int64_t ik = static_cast<std::int64_t>(k);
    for (std::int64_t i = 0; i < ik; ++i) out.push_back(u.offset_by(i, ik - i));
    for (std::int64_t i = 0; i < ik; ++i) out.push_back(u.offset_by(ik - i, -i));
    for (std::int64_t i = 0; i < ik; ++i) out.push_back(u.offset_by(-i, -(ik - i)));
    for (std::int64_t i = 0; i < ik; ++i) out.push_back(u.offset_by(-(ik - i), i));
    return out;
}

// Exact location of an agent: a node, or a point strictly inside an edge.
// Canonical on-edge form keeps the origin at the endpoint such that the edge
// runs North or East, so equality is plain member equality.
struct Position {
    Node node;
    // Engaged only when strictly inside an edge.
    struct OnEdge {
        Direction dir;  // N or E after normalization
        Rational fraction;  // in (0,1)
        friend bool operator==(const OnEdge& a, const OnEdge& b) {
            return a.dir == b.dir && a.fraction == b.fraction;
        }
    };
    std::optional<OnEdge> edge;

    static Position at_node(Node n) { return Position{n, std::nullopt}; }

    static Position on_edge(Node origin, Direction dir, Rational fraction) {
        if (fraction.is_zero()) return at_node(origin);
        if (fraction.is_one()) return at_node(origin.moved(dir));
        if (Rational(1, 1) < fraction)
            throw std::domain_error("Position: fraction beyond edge");
        if (dir == Direction::S || dir == Direction::W)
            return Position{origin.moved(dir), Position::OnEdge{inverse(dir), fraction.complement()}};
        return Position{origin, Position::OnEdge{dir, std::move(fraction)}};
    }

    bool at_a_node() const { return !edge.has_value(); }

    friend bool operator==(const Position& a, const Position& b) {
        return a.node == b.node && a.edge == b.edge;
    }

    std::string to_string() const {
        if (!edge) return node.to_string();
        std::string s = node.to_string();
        s += '+';
        s += to_char(edge->dir);
        s += '*';
        s += edge->fraction.to_string();
        return s;
    }
};

}  // namespace rvgrid
