#include <doctest.h>

#include "rvgrid/decomposition.hpp"

using namespace rvgrid;

TEST_CASE("radius sequences") {
    CHECK(rho(1) == Count(1));
    CHECK(radius_r(1) == Count(4));
    CHECK(rho(2) == Count(22));
    CHECK(radius_r(2) == Count(28));
    // identity used in the synchronization analysis: r(1) + 15 = rho(2) - 3
    CHECK(radius_r(1) + Count(15) == rho(2) - Count(3));
    CHECK_THROWS(rho(3));
    CHECK_THROWS(rho(0));
}

TEST_CASE("pattern counts") {
    CHECK(l2_count(1) == Count(2));
    CHECK(l1_count(1) == Count(12));
    CHECK(l2_count(2) == Count(14));
    CHECK(l1_count(2) == Count(66));
    for (std::uint64_t d : {1ULL, 2ULL, 4ULL, 8ULL}) {
        CAPTURE(d);
        const auto label = transform(0);
        CHECK(Count(bd(ProcedureCall::assumption(d), label).size()) == l1_count(d));
        CHECK(Count(bd(ProcedureCall::harvest(d), label).size()) == l2_count(d));
    }
}

TEST_CASE("decomposition of the first phase") {
    const auto seq = bd(ProcedureCall::assumption(1), transform(0));
    REQUIRE(seq.size() == 12);
    CHECK(seq[0] == PatternDescriptor::cloudberry(1, 1, 1, 0));
    CHECK(seq[1] == PatternDescriptor::repeat_seed(4, Count(4516)));
    // label 0 processes bit 1 = 0: five Berry steps with growing radii
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(seq[2 + 2 * j] == PatternDescriptor::berry(4 + 3 * j, 1));
        CHECK(seq[3 + 2 * j].type == PatternType::RepeatSeed);
        CHECK(seq[3 + 2 * j].x == 7 + 3 * j);
        CHECK(seq[3 + 2 * j].n == cloudberry_cost(4 + 3 * j, 1, 1));
    }

    const auto seq1 = bd(ProcedureCall::assumption(1), transform(1));
    REQUIRE(seq1.size() == 12);
    // label 1 processes bit 1 = 1: Cloudberry branches with h = j
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(seq1[2 + 2 * j] ==
              PatternDescriptor::cloudberry(4 + 3 * j, 1, 1, j));
        CHECK(seq1[3 + 2 * j] == seq[3 + 2 * j]);  // synchronization steps agree
    }
}

TEST_CASE("push pattern image is label independent") {
    for (auto [i, d] : {std::pair<std::uint64_t, std::uint64_t>{1, 2}, {1, 4}, {2, 4}, {4, 8}}) {
        CAPTURE(i);
        CAPTURE(d);
        const auto a = bd(ProcedureCall::push_pattern(i, d), transform(0));
        const auto b = bd(ProcedureCall::push_pattern(i, d), transform(5));
        const auto c = bd(ProcedureCall::push_pattern(i, d), transform(1));
        REQUIRE(a == b);
        REQUIRE(a == c);
        // images contain no Cloudberry
        for (const auto& p : a) CHECK(p.type != PatternType::Cloudberry);
    }
    CHECK(bd(ProcedureCall::push_pattern(1, 2), transform(0)).front() ==
          PatternDescriptor::repeat_seed(5, Count(4516)));
}

TEST_CASE("parameter alignment across labels") {
    for (std::uint64_t d : {1ULL, 2ULL, 4ULL}) {
        const auto a = bd(ProcedureCall::assumption(d), transform(2));
        const auto b = bd(ProcedureCall::assumption(d), transform(5));
        REQUIRE(a.size() == b.size());
        for (std::size_t t = 0; t < a.size(); ++t) {
            CHECK(a[t].x == b[t].x);
            if (a[t].type != b[t].type) {
                // branch divergence: one side Berry, other Cloudberry, same x
                const bool swap_ok =
                    (a[t].type == PatternType::Berry && b[t].type == PatternType::Cloudberry) ||
                    (a[t].type == PatternType::Cloudberry && b[t].type == PatternType::Berry);
                CHECK(swap_ok);
            }
        }
    }
}

TEST_CASE("berry and cloudberry parameters inside a phase are pinned to d") {
    for (std::uint64_t d : {1ULL, 2ULL, 4ULL}) {
        for (const auto& p : bd(ProcedureCall::assumption(d), transform(3))) {
            if (p.type == PatternType::Berry) CHECK(p.y == d);
            if (p.type == PatternType::Cloudberry) {
                CHECK(p.y == d);
                CHECK(p.z == d);
            }
        }
    }
}

TEST_CASE("max first parameter equals rho(2d) - 3d") {
    for (std::uint64_t d : {1ULL, 2ULL, 4ULL}) {
        CAPTURE(d);
        Count max_seen(0);
        for (const auto& p : bd(ProcedureCall::assumption(d), transform(1)))
            max_seen = std::max(max_seen, Count(p.x));
        CHECK(max_seen == max_first_param(d));
    }
    CHECK(max_first_param(1) == Count(19));
    CHECK(max_first_param(2) == rho(4) - Count(6));
    CHECK(max_first_param(4) == rho(8) - Count(12));
}

TEST_CASE("push pattern first parameters bounded by x + 3d") {
    for (auto [d1, d2] : {std::pair<std::uint64_t, std::uint64_t>{1, 2}, {1, 4}, {2, 4}, {2, 8}}) {
        const Count bound = max_first_param(d1) + Count(3) * Count(d2);
        for (const auto& p : bd(ProcedureCall::push_pattern(d1, d2), transform(0)))
            CHECK(Count(p.x) <= bound);
    }
}
