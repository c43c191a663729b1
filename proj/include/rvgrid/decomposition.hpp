#pragma once

// Radius sequences and the symbolic basic decomposition of the three
// procedures. The decomposition of a procedure call is the ordered sequence
// of basic pattern calls (RepeatSeed / Berry / Cloudberry) it issues; it is
// perfect: those calls account for every edge traversal of the procedure.

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "rvgrid/bigint.hpp"
#include "rvgrid/labels.hpp"
#include "rvgrid/patterns.hpp"

namespace rvgrid {

inline bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

// rho(1) = 1; rho(i) = r(i/2) + (3i/2) ((i/2)(i(i/2+1)+1)+1) for powers of two
// i >= 2; r(i) = rho(i) + 3i.
inline Count rho(std::uint64_t i) {
    if (!is_power_of_two(i)) throw std::invalid_argument("rho: argument must be a power of two");
    static std::mutex mu;
    static std::map<std::uint64_t, Count> memo{{1, Count(1)}};
    std::lock_guard lock(mu);
    auto it = memo.find(i);
    if (it != memo.end()) return it->second;
    std::vector<std::uint64_t> missing;
    for (std::uint64_t v = i; !memo.count(v); v /= 2) missing.push_back(v);
    for (auto vi = missing.rbegin(); vi != missing.rend(); ++vi) {
        const std::uint64_t v = *vi, half = v / 2;
        const Count r_half = memo.at(half) + Count(3) * Count(half);
        const Count inner = Count(half) * (Count(v) * Count(half + 1) + Count(1)) + Count(1);
        memo.emplace(v, r_half + Count(3) * Count(half) * inner);
    }
    return memo.at(i);
}

inline Count radius_r(std::uint64_t i) { return rho(i) + Count(3) * Count(i); }

// Number of basic patterns in the decomposition of Harvest(i):
// L2(1) = 2; L2(i) = 2 L2(i/2) + i (i (i/2 + 1) + 1).
inline Count l2_count(std::uint64_t i) {
    if (!is_power_of_two(i)) throw std::invalid_argument("l2_count: power of two required");
    if (i == 1) return Count(2);
    return Count(2) * l2_count(i / 2) + Count(i) * (Count(i) * Count(i / 2 + 1) + Count(1));
}

// Number of basic patterns in the decomposition of Assumption(i):
// L1(i) = L2(i) + 2i (2i (i + 1) + 1).
inline Count l1_count(std::uint64_t i) {
    if (!is_power_of_two(i)) throw std::invalid_argument("l1_count: power of two required");
    return l2_count(i) + Count(2) * Count(i) * (Count(2) * Count(i) * Count(i + 1) + Count(1));
}

// Maximum first parameter over the decomposition of Assumption(d); the bound
// rho(2d) - 3d is attained by the last synchronization RepeatSeed.
inline Count max_first_param(std::uint64_t d) {
    if (!is_power_of_two(d)) throw std::invalid_argument("max_first_param: power of two required");
    return rho(2 * d) - Count(3) * Count(d);
}

// A procedure call whose decomposition can be enumerated.
struct ProcedureCall {
    enum class Kind : std::uint8_t { Assumption, Harvest, PushPattern } kind;
    std::uint64_t i = 0;  // PushPattern first parameter
    std::uint64_t d = 0;

    static ProcedureCall assumption(std::uint64_t d) { return {Kind::Assumption, 0, d}; }
    static ProcedureCall harvest(std::uint64_t d) { return {Kind::Harvest, 0, d}; }
    static ProcedureCall push_pattern(std::uint64_t i, std::uint64_t d) {
        return {Kind::PushPattern, i, d};
    }
};

namespace detail {

inline std::uint64_t count_to_param(const Count& c) {
    if (!c.fits_u64()) throw std::overflow_error("pattern parameter exceeds 64 bits");
    return c.to_u64();
}

inline void bd_assumption(const TransformedLabel& label, std::uint64_t d,
                          std::vector<PatternDescriptor>& out);

// PushPattern(i, d) re-plays the decomposition of Assumption(i), answering
// RepeatSeed with Berry and the two coverage patterns with a RepeatSeed whose
// repetition count dominates either branch. Both bit branches map to the same
// image, so the result does not depend on the label.
inline void bd_push_pattern(const TransformedLabel& label, std::uint64_t i, std::uint64_t d,
                            std::vector<PatternDescriptor>& out) {
    std::vector<PatternDescriptor> inner;
    bd_assumption(label, i, inner);
    for (const PatternDescriptor& p : inner) {
        if (p.type == PatternType::RepeatSeed) {
            out.push_back(PatternDescriptor::berry(p.x, d));
        } else {
            out.push_back(PatternDescriptor::repeat_seed(d + p.x + 2 * p.y,
                                                         cloudberry_cost(p.x, p.y, p.y)));
        }
    }
}

inline void bd_harvest(const TransformedLabel& label, std::uint64_t d,
                       std::vector<PatternDescriptor>& out) {
    for (std::uint64_t i = 1; i < d; i *= 2) bd_push_pattern(label, i, d, out);
    const std::uint64_t rho_d = count_to_param(rho(d));
    out.push_back(PatternDescriptor::cloudberry(rho_d, d, d, 0));
    out.push_back(
        PatternDescriptor::repeat_seed(count_to_param(radius_r(d)), cloudberry_cost(rho_d, d, d)));
}

inline void bd_assumption(const TransformedLabel& label, std::uint64_t d,
                          std::vector<PatternDescriptor>& out) {
    bd_harvest(label, d, out);
    std::uint64_t radius = count_to_param(radius_r(d));
    for (std::uint64_t i = 1; i <= d; ++i)
        for (std::uint64_t j = 0; j <= 2 * d * (d + 1); ++j) {
            if (label.bit_at(i) == 0)
                out.push_back(PatternDescriptor::berry(radius, d));
            else
                out.push_back(PatternDescriptor::cloudberry(radius, d, d, j));
            const std::uint64_t branch_radius = radius;
            radius += 3 * d;
            out.push_back(
                PatternDescriptor::repeat_seed(radius, cloudberry_cost(branch_radius, d, d)));
        }
}

}  // namespace detail

// Ordered basic-pattern sequence of a procedure call for an agent with the
// given transformed label.
inline std::vector<PatternDescriptor> bd(const ProcedureCall& call, const TransformedLabel& label) {
    if (!is_power_of_two(call.d)) throw std::invalid_argument("bd: d must be a power of two");
    std::vector<PatternDescriptor> out;
    switch (call.kind) {
        case ProcedureCall::Kind::Assumption: detail::bd_assumption(label, call.d, out); break;
        case ProcedureCall::Kind::Harvest: detail::bd_harvest(label, call.d, out); break;
        case ProcedureCall::Kind::PushPattern:
            if (!is_power_of_two(call.i) || call.i >= call.d)
                throw std::invalid_argument("bd: PushPattern needs powers of two with i < d");
            detail::bd_push_pattern(label, call.i, call.d, out);
            break;
    }
    return out;
}

// Total edge traversals of Assumption(d): the decomposition is perfect, so
// this is the sum of its basic-pattern costs.
inline Count assumption_cost(const TransformedLabel& label, std::uint64_t d) {
    Count total(0);
    for (const PatternDescriptor& p : bd(ProcedureCall::assumption(d), label)) total += cost(p);
    return total;
}

}  // namespace rvgrid
