#pragma once

// The four basic movement patterns as pull-based lazy route generators, plus
// their exact edge-traversal costs and bounding radii.
//
// Route lengths in full runs exceed 10^10 moves, so routes are never
// materialized: each walker is a resumable state machine that can emit one
// move at a time, skip whole closed sub-walks arithmetically, and report the
// ball covering its current sub-walk.
//
// Structure exploited throughout: every pattern is a first period followed by
// its backtrack, every full pattern route is therefore its own backtrack, and
// every pattern starts and ends at its origin.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rvgrid/bigint.hpp"
#include "rvgrid/grid.hpp"

namespace rvgrid {

// ---------------------------------------------------------------------------
// Descriptors

enum class PatternType : std::uint8_t { Seed, RepeatSeed, Berry, Cloudberry };

inline const char* name_of(PatternType t) {
    switch (t) {
        case PatternType::Seed: return "Seed";
        case PatternType::RepeatSeed: return "RepeatSeed";
        case PatternType::Berry: return "Berry";
        case PatternType::Cloudberry: return "Cloudberry";
    }
    return "?";
}

struct PatternDescriptor {
    PatternType type = PatternType::Seed;
    std::uint64_t x = 0, y = 0, z = 0, h = 0;
    Count n;  // RepeatSeed repetition count

    static PatternDescriptor seed(std::uint64_t x) { return {PatternType::Seed, x, 0, 0, 0, Count(0)}; }
    static PatternDescriptor repeat_seed(std::uint64_t x, Count n) {
        return {PatternType::RepeatSeed, x, 0, 0, 0, std::move(n)};
    }
    static PatternDescriptor berry(std::uint64_t x, std::uint64_t y) {
        return {PatternType::Berry, x, y, 0, 0, Count(0)};
    }
    static PatternDescriptor cloudberry(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                                        std::uint64_t h) {
        return {PatternType::Cloudberry, x, y, z, h, Count(0)};
    }

    friend bool operator==(const PatternDescriptor&, const PatternDescriptor&) = default;

    std::string to_string() const {
        switch (type) {
            case PatternType::Seed: return "Seed(" + std::to_string(x) + ")";
            case PatternType::RepeatSeed:
                return "RepeatSeed(" + std::to_string(x) + "," + n.to_string() + ")";
            case PatternType::Berry:
                return "Berry(" + std::to_string(x) + "," + std::to_string(y) + ")";
            case PatternType::Cloudberry:
                return "Cloudberry(" + std::to_string(x) + "," + std::to_string(y) + "," +
                       std::to_string(z) + "," + std::to_string(h) + ")";
        }
        return "?";
    }
};

// Maximal L1 distance from the start node the pattern ever attains.
inline std::uint64_t bounding_radius(const PatternDescriptor& p) {
    switch (p.type) {
        case PatternType::Seed:
        case PatternType::RepeatSeed: return p.x;
        case PatternType::Berry: return p.x + p.y;
        case PatternType::Cloudberry: return p.x + p.y + p.z;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Exact costs
//
// cost(Seed(x))         = 8x^2 + 10x
// Berry first period    F(X) = sum_{i=1..X} G(i), where X = x + y and
//   G(i) = sum_{j=0..i} [ A(j) + B(j) * cost(Seed(i-j)) ]
//   A(j) = total path length to and from ring nodes = 8 * sum_{k<=j} k^2
//   B(j) = nodes at distance <= j = 2j(j+1)+1
// cost(Berry) = 2 F(X). G is maintained incrementally with running sums so
// extending the table costs O(1) big-int operations per span.

inline Count seed_cost(std::uint64_t x) {
    return Count(8) * Count(x) * Count(x) + Count(10) * Count(x);
}
inline std::uint64_t seed_cost_u64(std::uint64_t x) { return 8 * x * x + 10 * x; }
inline std::uint64_t seed_first_period_u64(std::uint64_t x) { return 4 * x * x + 5 * x; }

class CostBook {
public:
    static CostBook& instance() {
        static CostBook book;
        return book;
    }

    // First-period cost of Berry with span X.
    Count berry_first_period(std::uint64_t span) {
        std::lock_guard lock(mu_);
        extend(span);
        return f_[span];
    }
    // Cost of the whole span-i iteration of Berry's first period.
    Count berry_iteration(std::uint64_t i) {
        std::lock_guard lock(mu_);
        extend(i);
        return f_[i] - f_[i - 1];
    }

private:
    void extend(std::uint64_t upto) {
        while (f_.size() <= upto) {
            const std::uint64_t i = f_.size();  // next span
            a_run_ += Count(8) * Count(i) * Count(i);  // A(i)
            // G(i) = G(i-1) + A(i) + (16i+2) U(i-1) - 16 V(i-1)
            Count gi = g_ + a_run_ + Count(16 * i + 2) * u_run_;
            gi -= Count(16) * v_run_;
            g_ = std::move(gi);
            const Count bi = ball_size(i);
            u_run_ += bi;
            v_run_ += Count(i) * bi;
            f_.push_back(f_.back() + g_);
        }
    }

    CostBook() {
        f_.push_back(Count(0));  // F(0) = 0
        u_run_ = Count(1);       // U(0) = B(0)
    }

    std::mutex mu_;
    std::vector<Count> f_;
    Count g_, a_run_, u_run_, v_run_;
};

inline Count berry_cost(std::uint64_t x, std::uint64_t y) {
    return Count(2) * CostBook::instance().berry_first_period(x + y);
}

// Independent of h: the start offset permutes the visit order only.
inline Count cloudberry_cost(std::uint64_t x, std::uint64_t y, std::uint64_t z) {
    Count dist_sum(0);
    for (std::uint64_t k = 1; k <= z; ++k) dist_sum += Count(4) * Count(k) * Count(k);
    Count per_node = seed_cost(x) + berry_cost(x, y);
    return Count(2) * (Count(2) * dist_sum + ball_size(z) * per_node);
}

inline Count cost(const PatternDescriptor& p) {
    switch (p.type) {
        case PatternType::Seed: return seed_cost(p.x);
        case PatternType::RepeatSeed: return p.n * seed_cost(p.x);
        case PatternType::Berry: return berry_cost(p.x, p.y);
        case PatternType::Cloudberry: return cloudberry_cost(p.x, p.y, p.z);
    }
    return Count(0);
}

// ---------------------------------------------------------------------------
// Seed phase geometry

struct Offset {
    std::int64_t x = 0, y = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

namespace detail {

// Direction of move m (0-based) within forward phase i of Seed:
// N (SE)^i (WS)^i (NW)^i (EN)^i.
inline Direction seed_phase_dir(std::uint64_t i, std::uint64_t m) {
    if (m == 0) return Direction::N;
    if (m <= 2 * i) return ((m - 1) & 1) ? Direction::E : Direction::S;
    if (m <= 4 * i) return ((m - (2 * i + 1)) & 1) ? Direction::S : Direction::W;
    if (m <= 6 * i) return ((m - (4 * i + 1)) & 1) ? Direction::W : Direction::N;
    return ((m - (6 * i + 1)) & 1) ? Direction::N : Direction::E;
}

// Offset after m moves of forward phase i (m in [0, 8i+1]); the phase starts
// at (0, i-1) and ends at (0, i).
inline Offset seed_phase_pos(std::uint64_t i, std::uint64_t m) {
    const std::int64_t ii = static_cast<std::int64_t>(i);
    if (m == 0) return {0, ii - 1};
    if (m == 1) return {0, ii};
    if (m <= 2 * i + 1) {
        const std::int64_t t = static_cast<std::int64_t>(m - 2);
        return {(t + 1) / 2, ii - (t + 2) / 2};
    }
    if (m <= 4 * i + 1) {
        const std::int64_t t = static_cast<std::int64_t>(m - (2 * i + 2));
        return {ii - (t + 2) / 2, -((t + 1) / 2)};
    }
    if (m <= 6 * i + 1) {
        const std::int64_t t = static_cast<std::int64_t>(m - (4 * i + 2));
        return {-((t + 1) / 2), -ii + (t + 2) / 2};
    }
    const std::int64_t t = static_cast<std::int64_t>(m - (6 * i + 2));
    return {-ii + (t + 2) / 2, (t + 1) / 2};
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > (~std::uint64_t{0}) / b) return ~std::uint64_t{0};
    return a * b;
}
inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > (~std::uint64_t{0}) - b ? ~std::uint64_t{0} : a + b;
}

}  // namespace detail

// Offsets of all nodes at distance <= z from the origin, ordered by first
// visit along Seed(z); the origin comes first.
inline std::shared_ptr<const std::vector<Offset>> first_visit_order(std::uint64_t z) {
    static std::mutex mu;
    static std::vector<std::shared_ptr<const std::vector<Offset>>> cache;
    std::lock_guard lock(mu);
    if (cache.size() > z && cache[z]) return cache[z];

    auto order = std::make_shared<std::vector<Offset>>();
    order->push_back({0, 0});
    if (z > 0) {
        const std::int64_t side = 2 * static_cast<std::int64_t>(z) + 1;
        std::vector<std::uint8_t> seen(static_cast<std::size_t>(side * side), 0);
        auto at = [&](std::int64_t x, std::int64_t y) -> std::uint8_t& {
            return seen[static_cast<std::size_t>((x + static_cast<std::int64_t>(z)) * side +
                                                 (y + static_cast<std::int64_t>(z)))];
        };
        at(0, 0) = 1;
        // the first period already visits everything; the backtrack only revisits
        for (std::uint64_t i = 1; i <= z; ++i)
            for (std::uint64_t m = 1; m <= 8 * i + 1; ++m) {
                Offset p = detail::seed_phase_pos(i, m);
                if (!at(p.x, p.y)) {
                    at(p.x, p.y) = 1;
                    order->push_back(p);
                }
            }
        if (order->size() != ball_size_u64(z))
            throw std::logic_error("first_visit_order: coverage mismatch");
    }
    if (cache.size() <= z) cache.resize(z + 1);
    cache[z] = order;
    return order;
}

// ---------------------------------------------------------------------------
// Frozen-opponent machinery shared by the walkers

// Opponent location relative to a walker's own origin. The fraction, when
// present, is measured along the canonical (N/E) edge direction.
struct FrozenPoint {
    std::int64_t x = 0, y = 0;  // node, or canonical edge origin
    bool at_node = true;
    Direction edge_dir = Direction::N;
    Rational fraction;

    FrozenPoint shifted(std::int64_t dx, std::int64_t dy) const {
        FrozenPoint p = *this;
        p.x -= dx;
        p.y -= dy;
        return p;
    }
    std::uint64_t node_distance(std::int64_t cx, std::int64_t cy) const {
        auto ad = [](std::int64_t a, std::int64_t b) {
            return a >= b ? static_cast<std::uint64_t>(a - b) : static_cast<std::uint64_t>(b - a);
        };
        return ad(x, cx) + ad(y, cy);
    }
    // floor of the exact L1 distance from (cx,cy); for an on-edge point the
    // true distance lies strictly inside (floor, floor+1).
    std::uint64_t floor_distance(std::int64_t cx, std::int64_t cy) const {
        if (at_node) return node_distance(cx, cy);
        const std::int64_t ox = x + (edge_dir == Direction::E ? 1 : 0);
        const std::int64_t oy = y + (edge_dir == Direction::N ? 1 : 0);
        const std::uint64_t d0 = node_distance(cx, cy);
        const std::uint64_t d1 = FrozenPoint{ox, oy, true}.node_distance(cx, cy);
        return std::min(d0, d1);
    }
    // True iff the exact distance from (cx,cy) is <= r.
    bool within(std::int64_t cx, std::int64_t cy, std::uint64_t r) const {
        if (at_node) return node_distance(cx, cy) <= r;
        return floor_distance(cx, cy) < r;
    }
};

struct SweepHit {
    std::uint64_t steps = 0;           // 1-based move count into the run
    bool final_edge_completed = true;  // false when met strictly inside an edge
};

// First meeting, if any, while walking `len` edges from (sx,sy) in direction
// d against a frozen opponent.
inline std::optional<SweepHit> sweep_straight(std::int64_t sx, std::int64_t sy, Direction d,
                                              std::uint64_t len, const FrozenPoint& opp) {
    if (len == 0) return std::nullopt;
    const std::int64_t ddx = dx_of(d), ddy = dy_of(d);
    const std::int64_t rx = opp.x - sx, ry = opp.y - sy;
    if (opp.at_node) {
        if (ddx != 0) {
            if (ry != 0) return std::nullopt;
            const std::int64_t t = rx * ddx;
            if (t >= 1 && static_cast<std::uint64_t>(t) <= len)
                return SweepHit{static_cast<std::uint64_t>(t), true};
            return std::nullopt;
        }
        if (rx != 0) return std::nullopt;
        const std::int64_t t = ry * ddy;
        if (t >= 1 && static_cast<std::uint64_t>(t) <= len)
            return SweepHit{static_cast<std::uint64_t>(t), true};
        return std::nullopt;
    }
    // Opponent strictly inside an edge; the run meets it only by traversing
    // that exact edge, in either direction.
    const bool run_horizontal = (ddx != 0);
    const bool edge_horizontal = (opp.edge_dir == Direction::E);
    if (run_horizontal != edge_horizontal) return std::nullopt;
    if (run_horizontal ? (ry != 0) : (rx != 0)) return std::nullopt;
    const std::int64_t along = run_horizontal ? rx : ry;
    std::int64_t t;
    if ((run_horizontal && ddx > 0) || (!run_horizontal && ddy > 0))
        t = along + 1;  // move t covers canonical interval [along, along+1]
    else
        t = -along;
    if (t >= 1 && static_cast<std::uint64_t>(t) <= len)
        return SweepHit{static_cast<std::uint64_t>(t), false};
    return std::nullopt;
}

// Accumulates traversal counts without big-integer work per move.
class MoveAccum {
public:
    void add(std::uint64_t k) {
        if (pending_ > (~std::uint64_t{0}) - k) fold();
        pending_ += k;
    }
    void add(const Count& c) {
        fold();
        total_ += c;
    }
    Count take() {
        fold();
        Count r = std::move(total_);
        total_ = Count(0);
        return r;
    }

private:
    void fold() {
        if (pending_) {
            total_ += Count(pending_);
            pending_ = 0;
        }
    }
    Count total_;
    std::uint64_t pending_ = 0;
};

// Remaining move allowance for one advancement call.
struct MoveBudget {
    bool limited = false;
    Count left;

    static MoveBudget unlimited() { return MoveBudget{}; }
    static MoveBudget of(Count c) { return MoveBudget{true, std::move(c)}; }

    bool exhausted() const { return limited && left.is_zero(); }
    bool covers(const Count& c) const { return !limited || left >= c; }
    bool covers_u64(std::uint64_t c) const { return !limited || left >= Count(c); }
    void spend(const Count& c) {
        if (limited) left -= c;
    }
    void spend_u64(std::uint64_t c) {
        if (limited) left -= Count(c);
    }
    std::uint64_t clamp_u64(std::uint64_t want) const {
        if (!limited) return want;
        return left >= Count(want) ? want : left.to_u64_clamped();
    }
};

struct FfResult {
    bool met = false;
    bool final_edge_completed = true;  // meaningful only when met
};

// Annulus cover of a walker's current closed sub-walk, for joint batching:
// every point visited within the next `remaining` moves lies at distance in
// [r_lo, r_hi] of the center. `remaining` is a safe lower bound on the moves
// that stay inside the annulus.
struct Cover {
    std::int64_t ox = 0, oy = 0;  // center, relative to the walker's origin
    std::uint64_t r_lo = 0;
    std::uint64_t r_hi = 0;
    std::uint64_t remaining = 0;
};

// Two annuli with center distance d share no point iff they are separated
// outward or one sits inside the other's hole.
inline bool covers_disjoint(std::uint64_t d, const Cover& a, const Cover& b) {
    if (d > a.r_hi + b.r_hi) return true;
    if (a.r_lo > 0 && a.r_lo > d + b.r_hi) return true;
    if (b.r_lo > 0 && b.r_lo > d + a.r_hi) return true;
    return false;
}

// Fixed-capacity cover list; cover queries sit on the hot batching path.
struct CoverSet {
    Cover items[4];
    int n = 0;
    void add(std::int64_t ox, std::int64_t oy, std::uint64_t r_lo, std::uint64_t r_hi,
             std::uint64_t remaining) {
        if (n < 4 && remaining > 0) items[n++] = {ox, oy, r_lo, r_hi, remaining};
    }
};

// Big / small division helper: quotient and remainder of value / divisor.
inline std::pair<Count, Count> divmod_by_u64(const Count& value, std::uint64_t divisor) {
    if (divisor == 0) throw std::domain_error("divmod_by_u64: zero divisor");
    if (value.fits_u64()) {
        const std::uint64_t v = value.to_u64();
        return {Count(v / divisor), Count(v % divisor)};
    }
    Count q(0), cur(0);
    std::vector<bool> bits;
    Count tmp = value;
    while (!tmp.is_zero()) bits.push_back(tmp.divmod_small(2) != 0);
    const Count div(divisor);
    for (std::size_t idx = bits.size(); idx-- > 0;) {
        cur = cur * Count(2) + Count(bits[idx] ? 1 : 0);
        q = q * Count(2);
        if (cur >= div) {
            cur -= div;
            q += Count(1);
        }
    }
    return {q, cur};
}

// ---------------------------------------------------------------------------
// Seed walker

class SeedWalker {
public:
    SeedWalker() = default;
    explicit SeedWalker(std::uint64_t x) : x_(x) { finished_ = (x == 0); }

    bool done() const { return finished_; }
    std::uint64_t param() const { return x_; }
    bool in_second_period() const { return backward_; }
    Offset offset() const { return off_; }
    bool fresh() const { return !finished_ && !backward_ && phase_ == 1 && pos_ == 0; }

    Direction peek() const {
        return backward_ ? inverse(detail::seed_phase_dir(phase_, 8 * phase_ - pos_))
                         : detail::seed_phase_dir(phase_, pos_);
    }

    Direction next() {
        const Direction d = peek();
        off_.x += dx_of(d);
        off_.y += dy_of(d);
        if (++pos_ == 8 * phase_ + 1) roll_phase();
        return d;
    }

    std::uint64_t remaining_in_phase() const { return finished_ ? 0 : 8 * phase_ + 1 - pos_; }
    std::uint64_t phase_radius() const { return phase_; }

    std::uint64_t remaining_total_u64() const {
        if (finished_) return 0;
        std::uint64_t rem = remaining_in_phase();
        if (!backward_) {
            // phases phase_+1 .. x of this period, then the whole backtrack
            rem += phases_length(phase_ + 1, x_) + seed_first_period_u64(x_);
        } else {
            rem += phases_length(1, phase_ - 1);
        }
        return rem;
    }

    std::uint64_t skip_phase() {
        const std::uint64_t k = remaining_in_phase();
        off_ = backward_ ? Offset{0, static_cast<std::int64_t>(phase_) - 1}
                         : Offset{0, static_cast<std::int64_t>(phase_)};
        roll_phase();
        return k;
    }

    void advance_in_phase(std::uint64_t k) {
        pos_ += k;
        if (pos_ == 8 * phase_ + 1) {
            off_ = backward_ ? Offset{0, static_cast<std::int64_t>(phase_) - 1}
                             : Offset{0, static_cast<std::int64_t>(phase_)};
            roll_phase();
        } else {
            off_ = backward_ ? detail::seed_phase_pos(phase_, 8 * phase_ + 1 - pos_)
                             : detail::seed_phase_pos(phase_, pos_);
        }
    }

    std::uint64_t advance_by(std::uint64_t k) {
        std::uint64_t adv = 0;
        while (!finished_ && adv < k) {
            const std::uint64_t step = std::min<std::uint64_t>(remaining_in_phase(), k - adv);
            advance_in_phase(step);
            adv += step;
        }
        return adv;
    }

    FfResult ff_advance(const FrozenPoint& opp, MoveBudget& budget, MoveAccum& moves) {
        while (!finished_ && !budget.exhausted()) {
            const std::uint64_t i = phase_;
            const std::uint64_t rem = remaining_in_phase();
            // the phase path stays within distance [i-1, i] of the seed origin
            const bool touches = opp.at_node ? (opp.node_distance(0, 0) + 1 == i ||
                                                opp.node_distance(0, 0) == i)
                                             : (opp.floor_distance(0, 0) + 1 == i);
            if (!touches && budget.covers_u64(rem)) {
                skip_phase();
                budget.spend_u64(rem);
                moves.add(rem);
                continue;
            }
            std::uint64_t allowed = budget.clamp_u64(rem);
            while (allowed > 0) {
                if (auto hit = sweep_straight(off_.x, off_.y, peek(), 1, opp)) {
                    if (hit->final_edge_completed) {
                        next();
                        moves.add(1);
                        budget.spend_u64(1);
                    }
                    return {true, hit->final_edge_completed};
                }
                next();
                moves.add(1);
                budget.spend_u64(1);
                --allowed;
            }
            if (budget.exhausted()) return {};
        }
        return {};
    }

    void covers(std::int64_t base_x, std::int64_t base_y, CoverSet& out) const {
        if (finished_) return;
        out.add(base_x, base_y, 0, x_, remaining_total_u64());
        // the current phase walks the annulus between rings phase-1 and phase;
        // the rest of the containing half-period stays at or beyond it
        out.add(base_x, base_y, phase_ - 1, phase_, remaining_in_phase());
        if (!backward_)
            out.add(base_x, base_y, phase_ - 1, x_,
                    remaining_in_phase() + phases_length(phase_ + 1, x_));
        else
            out.add(base_x, base_y, 0, phase_, remaining_in_phase() + phases_length(1, phase_ - 1));
    }

private:
    static std::uint64_t phases_length(std::uint64_t from, std::uint64_t to) {
        if (from > to) return 0;
        // sum of 8i+1 for i in [from, to]
        const std::uint64_t cnt = to - from + 1;
        return 8 * ((from + to) * cnt / 2) + cnt;
    }

    void roll_phase() {
        pos_ = 0;
        if (!backward_) {
            if (phase_ == x_)
                backward_ = true;  // second period starts at the outermost phase
            else
                ++phase_;
        } else {
            if (phase_ == 1)
                finished_ = true;
            else
                --phase_;
        }
    }

    std::uint64_t x_ = 0;
    std::uint64_t phase_ = 1;
    std::uint64_t pos_ = 0;
    bool backward_ = false;
    bool finished_ = true;
    Offset off_{};
};

// ---------------------------------------------------------------------------
// Canonical-path walker (at most two straight legs)

class PathWalker {
public:
    PathWalker() = default;
    // Walks canonical_path from (0,0) to (tx,ty); offsets are relative to the
    // walker's own start.
    PathWalker(std::int64_t tx, std::int64_t ty) {
        const Direction horiz = tx >= 0 ? Direction::E : Direction::W;
        const std::uint64_t nh = static_cast<std::uint64_t>(tx >= 0 ? tx : -tx);
        if (ty > 0) {
            legs_[0] = {Direction::N, static_cast<std::uint64_t>(ty)};
            legs_[1] = {horiz, nh};
        } else {
            legs_[0] = {horiz, nh};
            legs_[1] = {Direction::S, static_cast<std::uint64_t>(-ty)};
        }
        settle();
    }

    bool done() const { return leg_ == 2; }
    Offset offset() const { return off_; }
    std::uint64_t remaining() const {
        if (done()) return 0;
        std::uint64_t r = legs_[leg_].len - pos_;
        if (leg_ == 0) r += legs_[1].len;
        return r;
    }

    Direction peek() const { return legs_[leg_].dir; }

    Direction next() {
        const Direction d = legs_[leg_].dir;
        off_.x += dx_of(d);
        off_.y += dy_of(d);
        if (++pos_ == legs_[leg_].len) {
            ++leg_;
            pos_ = 0;
            settle();
        }
        return d;
    }

    std::uint64_t advance_by(std::uint64_t k) {
        std::uint64_t adv = 0;
        while (!done() && adv < k) {
            const std::uint64_t rem = legs_[leg_].len - pos_;
            const std::uint64_t step = std::min<std::uint64_t>(rem, k - adv);
            off_.x += dx_of(legs_[leg_].dir) * static_cast<std::int64_t>(step);
            off_.y += dy_of(legs_[leg_].dir) * static_cast<std::int64_t>(step);
            pos_ += step;
            adv += step;
            if (pos_ == legs_[leg_].len) {
                ++leg_;
                pos_ = 0;
                settle();
            }
        }
        return adv;
    }

    FfResult ff_advance(const FrozenPoint& opp, MoveBudget& budget, MoveAccum& moves) {
        while (!done() && !budget.exhausted()) {
            const std::uint64_t rem = legs_[leg_].len - pos_;
            const std::uint64_t allowed = budget.clamp_u64(rem);
            if (auto hit = sweep_straight(off_.x, off_.y, legs_[leg_].dir, allowed, opp)) {
                const std::uint64_t commit =
                    hit->final_edge_completed ? hit->steps : hit->steps - 1;
                advance_by(commit);
                moves.add(commit);
                budget.spend_u64(commit);
                return {true, hit->final_edge_completed};
            }
            advance_by(allowed);
            moves.add(allowed);
            budget.spend_u64(allowed);
            if (allowed < rem) return {};  // budget cut mid-leg
        }
        return {};
    }

private:
    void settle() {
        while (leg_ < 2 && legs_[leg_].len == 0) ++leg_;
    }
    struct Leg {
        Direction dir = Direction::N;
        std::uint64_t len = 0;
    };
    Leg legs_[2]{};
    int leg_ = 0;
    std::uint64_t pos_ = 0;
    Offset off_{};
};

// ---------------------------------------------------------------------------
// RepeatSeed walker

class RepeatSeedWalker {
public:
    RepeatSeedWalker() = default;
    RepeatSeedWalker(std::uint64_t x, Count n) : x_(x), total_(std::move(n)) {
        finished_ = total_.is_zero() || x_ == 0;
        if (!finished_) cur_ = SeedWalker(x_);
    }

    bool done() const { return finished_; }
    std::uint64_t param() const { return x_; }
    Offset offset() const { return finished_ ? Offset{} : cur_.offset(); }
    bool fresh() const { return !finished_ && done_.is_zero() && cur_.fresh(); }

    Direction peek() const { return cur_.peek(); }
    Direction next() {
        const Direction d = cur_.next();
        if (cur_.done()) roll_period();
        return d;
    }

    Count remaining_total() const {
        if (finished_) return Count(0);
        return (total_ - done_ - Count(1)) * seed_cost(x_) + Count(cur_.remaining_total_u64());
    }
    std::uint64_t remaining_total_sat() const {
        if (finished_) return 0;
        const Count whole = total_ - done_ - Count(1);
        return detail::sat_add(detail::sat_mul(whole.to_u64_clamped(), seed_cost_u64(x_)),
                               cur_.remaining_total_u64());
    }

    // Cheap path used by joint batching; loops whole periods only as needed.
    std::uint64_t advance_u64(std::uint64_t k) {
        std::uint64_t adv = 0;
        while (!finished_ && adv < k) {
            const std::uint64_t room = cur_.remaining_total_u64();
            const std::uint64_t step = std::min<std::uint64_t>(room, k - adv);
            cur_.advance_by(step);
            adv += step;
            if (cur_.done()) roll_period();
        }
        return adv;
    }

    Count advance_by(Count k) {
        Count adv(0);
        while (!finished_ && !k.is_zero()) {
            if (cur_.fresh()) {
                const std::uint64_t period = seed_cost_u64(x_);
                auto [q, rem] = divmod_by_u64(k, period);
                (void)rem;
                const Count whole_left = total_ - done_;
                const Count skip = q < whole_left ? q : whole_left;
                if (!skip.is_zero()) {
                    done_ += skip;
                    const Count skipped = skip * Count(period);
                    adv += skipped;
                    k -= skipped;
                    if (done_ == total_) {
                        finished_ = true;
                        break;
                    }
                    continue;
                }
            }
            const std::uint64_t room = cur_.remaining_total_u64();
            const std::uint64_t chunk = (k >= Count(room)) ? room : k.to_u64();
            if (chunk == 0) break;
            cur_.advance_by(chunk);
            adv += Count(chunk);
            k -= Count(chunk);
            if (cur_.done()) roll_period();
        }
        return adv;
    }

    FfResult ff_advance(const FrozenPoint& opp, MoveBudget& budget, MoveAccum& moves) {
        while (!finished_ && !budget.exhausted()) {
            if (!opp.within(0, 0, x_)) {
                // opponent outside the covered ball, nothing left can meet
                const Count rem = remaining_total();
                if (budget.covers(rem)) {
                    moves.add(rem);
                    budget.spend(rem);
                    finished_ = true;
                    return {};
                }
                const Count allowed = budget.left;
                const Count a = advance_by(allowed);
                moves.add(a);
                budget.spend(a);
                return {};
            }
            const bool certifying = cur_.fresh();
            const FfResult r = cur_.ff_advance(opp, budget, moves);
            if (r.met) {
                if (cur_.done()) roll_period();
                return r;
            }
            if (!cur_.done()) return {};  // budget cut
            roll_period();
            if (finished_) return {};
            if (certifying) {
                // A whole period ran without a meeting against a frozen point;
                // the remaining periods are identical walks, skip them.
                const Count whole = (total_ - done_) * seed_cost(x_);
                if (budget.covers(whole)) {
                    moves.add(whole);
                    budget.spend(whole);
                    done_ = total_;
                    finished_ = true;
                    return {};
                }
                const Count allowed = budget.left;
                const Count a = advance_by(allowed);
                moves.add(a);
                budget.spend(a);
                return {};
            }
        }
        return {};
    }

    void covers(std::int64_t base_x, std::int64_t base_y, CoverSet& out) const {
        if (finished_) return;
        // current period only: cheap and already a closed sub-walk
        out.add(base_x, base_y, 0, x_, cur_.remaining_total_u64());
        out.add(base_x, base_y, cur_.phase_radius() - 1, cur_.phase_radius(),
                cur_.remaining_in_phase());
    }

private:
    void roll_period() {
        done_ += Count(1);
        if (done_ == total_)
            finished_ = true;
        else
            cur_ = SeedWalker(x_);
    }

    std::uint64_t x_ = 0;
    Count total_;
    Count done_;
    SeedWalker cur_;
    bool finished_ = true;
};

// ---------------------------------------------------------------------------
// Berry walker
//
// First period: for i in 1..span, j in 0..i, k in 0..j, each node v at
// distance k ordered clockwise from North: path to v, full Seed(i-j) from v,
// path back. Second period: the same blocks in reverse enumeration order
// (each block backtracks to itself because full Seed routes are palindromic
// and the two path legs swap).

class BerryWalker {
public:
    BerryWalker() = default;
    BerryWalker(std::uint64_t x, std::uint64_t y) : x_(x), y_(y), span_(x + y) {
        finished_ = span_ == 0;
        if (!finished_) begin_iteration();
    }

    bool done() const { return finished_; }
    std::uint64_t span() const { return span_; }
    bool in_second_period() const { return backward_; }
    Offset offset() const { return off_; }
    bool fresh() const { return !finished_ && !backward_ && i_ == 1 && at_iteration_start(); }

    bool at_iteration_start() const {
        if (finished_ || block_emitted_ != 0) return false;
        return backward_ ? (j_ == i_ && k_ == j_ && r_ + 1 == ring_count(k_))
                         : (j_ == 0 && k_ == 0 && r_ == 0);
    }
    bool at_block_start() const { return !finished_ && block_emitted_ == 0; }

    Direction peek() const {
        switch (stage_) {
            case Stage::Go:
            case Stage::Return: return path_.peek();
            case Stage::Sub: return sub_.peek();
        }
        return Direction::N;
    }

    Direction next() {
        Direction d{};
        if (stage_ == Stage::Sub) {
            d = sub_.next();
            off_ = {v_.x + sub_.offset().x, v_.y + sub_.offset().y};
            ++block_emitted_;
            if (sub_.done()) advance_stage();
        } else {
            d = path_.next();
            off_ = {path_start_.x + path_.offset().x, path_start_.y + path_.offset().y};
            ++block_emitted_;
            if (path_.done()) advance_stage();
        }
        return d;
    }

    Count remaining_total() const {
        if (finished_) return Count(0);
        auto& book = CostBook::instance();
        Count rem = Count(remaining_in_block());
        rem += remaining_blocks_cost();
        if (!backward_) {
            for (std::uint64_t i = i_ + 1; i <= span_; ++i) rem += book.berry_iteration(i);
            rem += book.berry_first_period(span_);
        } else {
            for (std::uint64_t i = 1; i < i_; ++i) rem += book.berry_iteration(i);
        }
        return rem;
    }

    Count advance_by(Count k) {
        Count adv(0);
        while (!finished_ && !k.is_zero()) {
            if (at_iteration_start()) {
                const Count gi = CostBook::instance().berry_iteration(i_);
                if (k >= gi) {
                    skip_iteration();
                    adv += gi;
                    k -= gi;
                    continue;
                }
            }
            if (at_block_start()) {
                const Count bc = Count(remaining_in_block());
                if (k >= bc) {
                    skip_block();
                    adv += bc;
                    k -= bc;
                    continue;
                }
            }
            const std::uint64_t a = advance_u64(k.to_u64_clamped());
            if (a == 0) break;
            adv += Count(a);
            k -= Count(a);
        }
        return adv;
    }

    // Cheap path used by joint batching; stays inside the current sub-walks.
    std::uint64_t advance_u64(std::uint64_t k) { return advance_small(k); }

    FfResult ff_advance(const FrozenPoint& opp, MoveBudget& budget, MoveAccum& moves) {
        while (!finished_ && !budget.exhausted()) {
            if (at_iteration_start() && !opp.within(0, 0, i_)) {
                const Count gi = CostBook::instance().berry_iteration(i_);
                if (budget.covers(gi)) {
                    skip_iteration();
                    moves.add(gi);
                    budget.spend(gi);
                    continue;
                }
                const Count allowed = budget.left;
                const Count a = advance_by(allowed);
                moves.add(a);
                budget.spend(a);
                return {};
            }
            switch (stage_) {
                case Stage::Go:
                case Stage::Return: {
                    const FfResult r =
                        path_.ff_advance(opp.shifted(path_start_.x, path_start_.y), budget, moves);
                    off_ = {path_start_.x + path_.offset().x, path_start_.y + path_.offset().y};
                    block_emitted_ = 1;  // anything emitted marks the block dirty
                    if (r.met) {
                        if (path_.done()) advance_stage();
                        return r;
                    }
                    if (!path_.done()) return {};
                    advance_stage();
                    break;
                }
                case Stage::Sub: {
                    const std::uint64_t s = i_ - j_;
                    const FrozenPoint rel = opp.shifted(v_.x, v_.y);
                    if (sub_.fresh() && !rel.within(0, 0, s)) {
                        const std::uint64_t c = seed_cost_u64(s);
                        if (budget.covers_u64(c)) {
                            moves.add(c);
                            budget.spend_u64(c);
                            sub_ = SeedWalker();  // closed walk, ends back at v
                            block_emitted_ = 1;
                            advance_stage();
                            break;
                        }
                    }
                    const FfResult r = sub_.ff_advance(rel, budget, moves);
                    off_ = {v_.x + sub_.offset().x, v_.y + sub_.offset().y};
                    block_emitted_ = 1;
                    if (r.met) {
                        if (sub_.done()) advance_stage();
                        return r;
                    }
                    if (!sub_.done()) return {};
                    advance_stage();
                    break;
                }
            }
        }
        return {};
    }

    void covers(std::int64_t base_x, std::int64_t base_y, CoverSet& out) const {
        if (finished_) return;
        // whole current block: path legs within ball(u, k), sub-seed within
        // ball(v, i-j), so everything fits in ball(u, k + (i-j))
        out.add(base_x, base_y, 0, k_ + (i_ - j_), remaining_in_block());
        switch (stage_) {
            case Stage::Go:
            case Stage::Return: out.add(base_x, base_y, 0, k_, path_.remaining()); break;
            case Stage::Sub: sub_.covers(base_x + v_.x, base_y + v_.y, out); break;
        }
    }

private:
    enum class Stage : std::uint8_t { Go, Sub, Return };

    static std::uint64_t ring_count(std::uint64_t k) { return k == 0 ? 1 : 4 * k; }

    static Offset ring_node(std::uint64_t k, std::uint64_t r) {
        if (k == 0) return {0, 0};
        const std::int64_t kk = static_cast<std::int64_t>(k);
        const std::uint64_t q = r / k;
        const std::int64_t s = static_cast<std::int64_t>(r % k);
        switch (q) {
            case 0: return {s, kk - s};
            case 1: return {kk - s, -s};
            case 2: return {-s, -(kk - s)};
            default: return {-(kk - s), s};
        }
    }

    void begin_iteration() {
        if (!backward_) {
            j_ = 0;
            k_ = 0;
            r_ = 0;
        } else {
            j_ = i_;
            k_ = j_;
            r_ = ring_count(k_) - 1;
        }
        begin_block();
    }

    // Enters the block (i_, j_, k_, r_); skips stages with no moves, and rolls
    // to the next block when the whole block is empty (k == 0 and i == j).
    void begin_block() {
        v_ = ring_node(k_, r_);
        block_emitted_ = 0;
        if (k_ > 0) {
            stage_ = Stage::Go;
            path_ = PathWalker(v_.x, v_.y);
            path_start_ = {0, 0};
            return;
        }
        if (i_ > j_) {
            stage_ = Stage::Sub;
            sub_ = SeedWalker(i_ - j_);
            return;
        }
        next_block();
    }

    void advance_stage() {
        switch (stage_) {
            case Stage::Go:
                if (i_ > j_) {
                    stage_ = Stage::Sub;
                    sub_ = SeedWalker(i_ - j_);
                    return;
                }
                [[fallthrough]];
            case Stage::Sub:
                if (k_ > 0) {
                    stage_ = Stage::Return;
                    path_ = PathWalker(-v_.x, -v_.y);
                    path_start_ = v_;
                    return;
                }
                [[fallthrough]];
            case Stage::Return: next_block(); return;
        }
    }

    void next_block() {
        off_ = {0, 0};
        if (!backward_) {
            if (++r_ < ring_count(k_)) return begin_block();
            r_ = 0;
            if (++k_ <= j_) return begin_block();
            k_ = 0;
            if (++j_ <= i_) return begin_block();
            if (++i_ <= span_) return begin_iteration();
            backward_ = true;
            i_ = span_;
            begin_iteration();
        } else {
            if (r_ > 0) {
                --r_;
                return begin_block();
            }
            if (k_ > 0) {
                --k_;
                r_ = ring_count(k_) - 1;
                return begin_block();
            }
            if (j_ > 0) {
                --j_;
                k_ = j_;
                r_ = ring_count(k_) - 1;
                return begin_block();
            }
            if (i_ > 1) {
                --i_;
                return begin_iteration();
            }
            finished_ = true;
        }
    }

    // Moves left in the current block.
    std::uint64_t remaining_in_block() const {
        if (finished_) return 0;
        switch (stage_) {
            case Stage::Go: return path_.remaining() + seed_cost_u64(i_ - j_) + k_;
            case Stage::Sub: return sub_.remaining_total_u64() + k_;
            case Stage::Return: return path_.remaining();
        }
        return 0;
    }

    // Cost of the whole blocks that follow the current one in this iteration.
    Count remaining_blocks_cost() const {
        Count rem(0);
        std::uint64_t j = j_, k = k_, r = r_;
        auto add_block = [&](std::uint64_t jj, std::uint64_t kk) {
            rem += Count(2 * kk) + seed_cost(i_ - jj);
        };
        if (!backward_) {
            ++r;
            for (;;) {
                if (r >= ring_count(k)) {
                    r = 0;
                    if (++k > j) {
                        k = 0;
                        if (++j > i_) break;
                    }
                    continue;
                }
                add_block(j, k);
                ++r;
            }
        } else {
            for (;;) {
                if (r == 0) {
                    if (k > 0) {
                        --k;
                        r = ring_count(k);
                    } else if (j > 0) {
                        --j;
                        k = j;
                        r = ring_count(k);
                    } else {
                        break;
                    }
                    continue;
                }
                --r;
                add_block(j, k);
            }
        }
        return rem;
    }

    void skip_iteration() {
        // valid only at an iteration start; iterations are closed at the origin
        if (!backward_) {
            if (i_ < span_) {
                ++i_;
                begin_iteration();
            } else {
                backward_ = true;
                begin_iteration();
            }
        } else {
            if (i_ > 1) {
                --i_;
                begin_iteration();
            } else {
                finished_ = true;
            }
        }
        off_ = {0, 0};
    }

    void skip_block() { next_block(); }

    std::uint64_t advance_small(std::uint64_t k) {
        std::uint64_t adv = 0;
        while (!finished_ && adv < k) {
            if (stage_ == Stage::Sub) {
                const std::uint64_t a = sub_.advance_by(k - adv);
                off_ = {v_.x + sub_.offset().x, v_.y + sub_.offset().y};
                block_emitted_ += a;
                adv += a;
                if (sub_.done()) advance_stage();
            } else {
                const std::uint64_t a = path_.advance_by(k - adv);
                off_ = {path_start_.x + path_.offset().x, path_start_.y + path_.offset().y};
                block_emitted_ += a;
                adv += a;
                if (path_.done()) advance_stage();
            }
        }
        return adv;
    }

    std::uint64_t x_ = 0, y_ = 0, span_ = 0;
    std::uint64_t i_ = 1, j_ = 0, k_ = 0, r_ = 0;
    Stage stage_ = Stage::Go;
    PathWalker path_;
    SeedWalker sub_;
    Offset v_{};
    Offset off_{};
    Offset path_start_{};
    std::uint64_t block_emitted_ = 0;
    bool backward_ = false;
    bool finished_ = true;
};

// ---------------------------------------------------------------------------
// Cloudberry walker

class CloudberryWalker {
public:
    CloudberryWalker() = default;
    CloudberryWalker(std::uint64_t x, std::uint64_t y, std::uint64_t z, std::uint64_t h)
        : x_(x), y_(y), z_(z) {
        order_ = first_visit_order(z);
        count_ = ball_size_u64(z);
        h_ = h % count_;
        finished_ = (x_ == 0 && y_ == 0 && z_ == 0);
        if (!finished_) begin_block();
    }

    bool done() const { return finished_; }
    bool in_second_period() const { return backward_; }
    Offset offset() const { return off_; }
    bool fresh() const { return !finished_ && !backward_ && idx_ == 0 && block_emitted_ == 0; }
    bool at_block_start() const { return !finished_ && block_emitted_ == 0; }

    Direction peek() const {
        switch (stage_) {
            case Stage::Go:
            case Stage::Return: return path_.peek();
            case Stage::SubSeed: return seed_.peek();
            case Stage::SubBerry: return berry_.peek();
        }
        return Direction::N;
    }

    Direction next() {
        Direction d{};
        switch (stage_) {
            case Stage::Go:
            case Stage::Return:
                d = path_.next();
                off_ = {path_start_.x + path_.offset().x, path_start_.y + path_.offset().y};
                ++block_emitted_;
                if (path_.done()) advance_stage();
                return d;
            case Stage::SubSeed:
                d = seed_.next();
                off_ = {v_.x + seed_.offset().x, v_.y + seed_.offset().y};
                ++block_emitted_;
                if (seed_.done()) advance_stage();
                return d;
            case Stage::SubBerry:
                d = berry_.next();
                off_ = {v_.x + berry_.offset().x, v_.y + berry_.offset().y};
                ++block_emitted_;
                if (berry_.done()) advance_stage();
                return d;
        }
        return d;
    }

    Count remaining_total() const {
        if (finished_) return Count(0);
        Count rem = remaining_in_block();
        const Count per = seed_cost(x_) + berry_cost(x_, y_);
        if (!backward_) {
            for (std::uint64_t t = idx_ + 1; t < count_; ++t)
                rem += per + Count(2 * node_dist(t));
            rem += first_period_cost();
        } else {
            for (std::uint64_t t = 0; t < idx_; ++t) rem += per + Count(2 * node_dist(t));
        }
        return rem;
    }

    Count advance_by(Count k) {
        Count adv(0);
        while (!finished_ && !k.is_zero()) {
            if (at_block_start()) {
                const Count bc = remaining_in_block();
                if (k >= bc) {
                    next_block();
                    adv += bc;
                    k -= bc;
                    continue;
                }
            }
            const std::uint64_t a = advance_small(k.to_u64_clamped());
            if (a == 0) break;
            adv += Count(a);
            k -= Count(a);
        }
        return adv;
    }

    // Cheap path used by joint batching; stays inside the current sub-walks.
    std::uint64_t advance_u64(std::uint64_t k) { return advance_small(k); }

    FfResult ff_advance(const FrozenPoint& opp, MoveBudget& budget, MoveAccum& moves) {
        while (!finished_ && !budget.exhausted()) {
            if (at_block_start()) {
                const std::uint64_t sub_reach = x_ + y_ > x_ ? x_ + y_ : x_;
                const bool touch = opp.within(v_.x, v_.y, sub_reach) ||
                                   opp.within(0, 0, node_dist(idx_));
                if (!touch) {
                    const Count bc = remaining_in_block();
                    if (budget.covers(bc)) {
                        next_block();
                        moves.add(bc);
                        budget.spend(bc);
                        continue;
                    }
                    const Count allowed = budget.left;
                    const Count a = advance_by(allowed);
                    moves.add(a);
                    budget.spend(a);
                    return {};
                }
            }
            switch (stage_) {
                case Stage::Go:
                case Stage::Return: {
                    const FfResult r =
                        path_.ff_advance(opp.shifted(path_start_.x, path_start_.y), budget, moves);
                    off_ = {path_start_.x + path_.offset().x, path_start_.y + path_.offset().y};
                    block_emitted_ = 1;
                    if (r.met) {
                        if (path_.done()) advance_stage();
                        return r;
                    }
                    if (!path_.done()) return {};
                    advance_stage();
                    break;
                }
                case Stage::SubSeed: {
                    const FrozenPoint rel = opp.shifted(v_.x, v_.y);
                    if (seed_.fresh() && !rel.within(0, 0, x_)) {
                        const std::uint64_t c = seed_cost_u64(x_);
                        if (budget.covers_u64(c)) {
                            moves.add(c);
                            budget.spend_u64(c);
                            seed_ = SeedWalker();
                            block_emitted_ = 1;
                            advance_stage();
                            break;
                        }
                    }
                    const FfResult r = seed_.ff_advance(rel, budget, moves);
                    off_ = {v_.x + seed_.offset().x, v_.y + seed_.offset().y};
                    block_emitted_ = 1;
                    if (r.met) {
                        if (seed_.done()) advance_stage();
                        return r;
                    }
                    if (!seed_.done()) return {};
                    advance_stage();
                    break;
                }
                case Stage::SubBerry: {
                    const FrozenPoint rel = opp.shifted(v_.x, v_.y);
                    if (berry_.fresh() && !rel.within(0, 0, x_ + y_)) {
                        const Count c = berry_cost(x_, y_);
                        if (budget.covers(c)) {
                            moves.add(c);
                            budget.spend(c);
                            berry_ = BerryWalker();
                            block_emitted_ = 1;
                            advance_stage();
                            break;
                        }
                    }
                    const FfResult r = berry_.ff_advance(rel, budget, moves);
                    off_ = {v_.x + berry_.offset().x, v_.y + berry_.offset().y};
                    block_emitted_ = 1;
                    if (r.met) {
                        if (berry_.done()) advance_stage();
                        return r;
                    }
                    if (!berry_.done()) return {};
                    advance_stage();
                    break;
                }
            }
        }
        return {};
    }

    void covers(std::int64_t base_x, std::int64_t base_y, CoverSet& out) const {
        if (finished_) return;
        switch (stage_) {
            case Stage::Go:
            case Stage::Return: out.add(base_x, base_y, 0, z_, path_.remaining()); break;
            case Stage::SubSeed: seed_.covers(base_x + v_.x, base_y + v_.y, out); break;
            case Stage::SubBerry: berry_.covers(base_x + v_.x, base_y + v_.y, out); break;
        }
    }

private:
    enum class Stage : std::uint8_t { Go, SubSeed, SubBerry, Return };

    std::uint64_t node_dist(std::uint64_t t) const {
        const Offset& o = (*order_)[(h_ + t) % count_];
        return static_cast<std::uint64_t>((o.x >= 0 ? o.x : -o.x) + (o.y >= 0 ? o.y : -o.y));
    }

    Count first_period_cost() const {
        Count dist_sum(0);
        for (std::uint64_t k = 1; k <= z_; ++k) dist_sum += Count(4) * Count(k) * Count(k);
        return Count(2) * dist_sum + ball_size(z_) * (seed_cost(x_) + berry_cost(x_, y_));
    }

    Count remaining_in_block() const {
        if (finished_) return Count(0);
        const std::uint64_t d = node_dist(idx_);
        Count rem(0);
        switch (stage_) {
            case Stage::Go:
                rem = Count(path_.remaining() + d) + seed_cost(x_) + berry_cost(x_, y_);
                break;
            case Stage::SubSeed:
                rem = Count(seed_.remaining_total_u64() + d);
                if (!backward_) rem += berry_cost(x_, y_);
                break;
            case Stage::SubBerry:
                rem = berry_.remaining_total() + Count(d);
                if (backward_) rem += seed_cost(x_);
                break;
            case Stage::Return: rem = Count(path_.remaining()); break;
        }
        return rem;
    }

    void begin_block() {
        v_ = (*order_)[(h_ + idx_) % count_];
        block_emitted_ = 0;
        if (node_dist(idx_) > 0) {
            stage_ = Stage::Go;
            path_ = PathWalker(v_.x, v_.y);
            path_start_ = {0, 0};
            return;
        }
        enter_first_sub();
    }

    void enter_first_sub() {
        if (!backward_) {
            if (x_ > 0) {
                stage_ = Stage::SubSeed;
                seed_ = SeedWalker(x_);
                return;
            }
            if (x_ + y_ > 0) {
                stage_ = Stage::SubBerry;
                berry_ = BerryWalker(x_, y_);
                return;
            }
        } else {
            if (x_ + y_ > 0) {
                stage_ = Stage::SubBerry;
                berry_ = BerryWalker(x_, y_);
                return;
            }
            if (x_ > 0) {
                stage_ = Stage::SubSeed;
                seed_ = SeedWalker(x_);
                return;
            }
        }
        maybe_return_leg();
    }

    void maybe_return_leg() {
        if (node_dist(idx_) > 0) {
            stage_ = Stage::Return;
            path_ = PathWalker(-v_.x, -v_.y);
            path_start_ = v_;
            return;
        }
        next_block();
    }

    void advance_stage() {
        if (!backward_) {
            switch (stage_) {
                case Stage::Go: return enter_first_sub();
                case Stage::SubSeed:
                    if (x_ + y_ > 0) {
                        stage_ = Stage::SubBerry;
                        berry_ = BerryWalker(x_, y_);
                        return;
                    }
                    return maybe_return_leg();
                case Stage::SubBerry: return maybe_return_leg();
                case Stage::Return: return next_block();
            }
        } else {
            switch (stage_) {
                case Stage::Go: return enter_first_sub();
                case Stage::SubBerry:
                    if (x_ > 0) {
                        stage_ = Stage::SubSeed;
                        seed_ = SeedWalker(x_);
                        return;
                    }
                    return maybe_return_leg();
                case Stage::SubSeed: return maybe_return_leg();
                case Stage::Return: return next_block();
            }
        }
    }

    void next_block() {
        off_ = {0, 0};
        if (!backward_) {
            if (idx_ + 1 < count_) {
                ++idx_;
                begin_block();
            } else {
                backward_ = true;
                begin_block();  // reversed order re-walks from the last block
            }
        } else {
            if (idx_ > 0) {
                --idx_;
                begin_block();
            } else {
                finished_ = true;
            }
        }
    }

    std::uint64_t advance_small(std::uint64_t k) {
        std::uint64_t adv = 0;
        while (!finished_ && adv < k) {
            switch (stage_) {
                case Stage::Go:
                case Stage::Return: {
                    const std::uint64_t a = path_.advance_by(k - adv);
                    off_ = {path_start_.x + path_.offset().x, path_start_.y + path_.offset().y};
                    block_emitted_ += a;
                    adv += a;
                    if (path_.done()) advance_stage();
                    break;
                }
                case Stage::SubSeed: {
                    const std::uint64_t a = seed_.advance_by(k - adv);
                    off_ = {v_.x + seed_.offset().x, v_.y + seed_.offset().y};
                    block_emitted_ += a;
                    adv += a;
                    if (seed_.done()) advance_stage();
                    break;
                }
                case Stage::SubBerry: {
                    const std::uint64_t au = berry_.advance_u64(k - adv);
                    off_ = {v_.x + berry_.offset().x, v_.y + berry_.offset().y};
                    block_emitted_ += au;
                    adv += au;
                    if (berry_.done()) advance_stage();
                    break;
                }
            }
        }
        return adv;
    }

    std::uint64_t x_ = 0, y_ = 0, z_ = 0, h_ = 0;
    std::shared_ptr<const std::vector<Offset>> order_;
    std::uint64_t count_ = 1;
    std::uint64_t idx_ = 0;
    Stage stage_ = Stage::Go;
    PathWalker path_;
    SeedWalker seed_;
    BerryWalker berry_;
    Offset v_{};
    Offset off_{};
    Offset path_start_{};
    std::uint64_t block_emitted_ = 0;
    bool backward_ = false;
    bool finished_ = true;
};

// ---------------------------------------------------------------------------
// Unified pattern route

class PatternRoute {
public:
    PatternRoute() = default;
    explicit PatternRoute(PatternDescriptor d) : desc_(std::move(d)) {
        switch (desc_.type) {
            case PatternType::Seed: w_ = SeedWalker(desc_.x); break;
            case PatternType::RepeatSeed: w_ = RepeatSeedWalker(desc_.x, desc_.n); break;
            case PatternType::Berry: w_ = BerryWalker(desc_.x, desc_.y); break;
            case PatternType::Cloudberry:
                w_ = CloudberryWalker(desc_.x, desc_.y, desc_.z, desc_.h);
                break;
        }
    }

    const PatternDescriptor& descriptor() const { return desc_; }
    bool done() const {
        return std::visit([](const auto& w) { return w.done(); }, w_);
    }
    Direction peek() const {
        return std::visit([](const auto& w) { return w.peek(); }, w_);
    }
    Direction next() {
        return std::visit([](auto& w) { return w.next(); }, w_);
    }
    Offset offset() const {
        return std::visit([](const auto& w) { return w.offset(); }, w_);
    }
    bool in_second_period() const {
        if (auto* s = std::get_if<SeedWalker>(&w_)) return s->in_second_period();
        if (auto* b = std::get_if<BerryWalker>(&w_)) return b->in_second_period();
        if (auto* c = std::get_if<CloudberryWalker>(&w_)) return c->in_second_period();
        return false;
    }
    Count remaining_total() const {
        if (auto* s = std::get_if<SeedWalker>(&w_)) return Count(s->remaining_total_u64());
        if (auto* r = std::get_if<RepeatSeedWalker>(&w_)) return r->remaining_total();
        if (auto* b = std::get_if<BerryWalker>(&w_)) return b->remaining_total();
        return std::get<CloudberryWalker>(w_).remaining_total();
    }
    Count advance_by(Count k) {
        if (auto* s = std::get_if<SeedWalker>(&w_))
            return Count(s->advance_by(Count(k).to_u64_clamped()));
        if (auto* r = std::get_if<RepeatSeedWalker>(&w_)) return r->advance_by(std::move(k));
        if (auto* b = std::get_if<BerryWalker>(&w_)) return b->advance_by(std::move(k));
        return std::get<CloudberryWalker>(w_).advance_by(std::move(k));
    }
    FfResult ff_advance(const FrozenPoint& opp, MoveBudget& budget, MoveAccum& moves) {
        return std::visit([&](auto& w) { return w.ff_advance(opp, budget, moves); }, w_);
    }
    void covers(CoverSet& out) const {
        std::visit([&](const auto& w) { w.covers(0, 0, out); }, w_);
    }
    std::uint64_t advance_u64(std::uint64_t k) {
        if (auto* s = std::get_if<SeedWalker>(&w_)) return s->advance_by(k);
        if (auto* r = std::get_if<RepeatSeedWalker>(&w_)) return r->advance_u64(k);
        if (auto* b = std::get_if<BerryWalker>(&w_)) return b->advance_u64(k);
        return std::get<CloudberryWalker>(w_).advance_u64(k);
    }

private:
    PatternDescriptor desc_;
    std::variant<SeedWalker, RepeatSeedWalker, BerryWalker, CloudberryWalker> w_;
};

inline PatternRoute seed_route(std::uint64_t x) { return PatternRoute(PatternDescriptor::seed(x)); }
inline PatternRoute repeat_seed_route(std::uint64_t x, Count n) {
    return PatternRoute(PatternDescriptor::repeat_seed(x, std::move(n)));
}
inline PatternRoute berry_route(std::uint64_t x, std::uint64_t y) {
    return PatternRoute(PatternDescriptor::berry(x, y));
}
inline PatternRoute cloudberry_route(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                                     std::uint64_t h) {
    return PatternRoute(PatternDescriptor::cloudberry(x, y, z, h));
}

// Materializes up to `limit` moves (whole route when limit is 0).
inline MoveSequence materialize(PatternRoute route, std::size_t limit = 0) {
    MoveSequence out;
    while (!route.done() && (limit == 0 || out.size() < limit)) out.push_back(route.next());
    return out;
}

}  // namespace rvgrid
