#include <doctest.h>

#include <unordered_set>

#include "naive_routes.hpp"
#include "rvgrid/labels.hpp"

using namespace rvgrid;

TEST_CASE("transform fixed values") {
    CHECK(transform(0).to_string() == "0001");
    CHECK(transform(1).to_string() == "1101");
    CHECK(transform(2).to_string() == "110001");
    CHECK(transform(3).to_string() == "111101");
    CHECK(transform(5).to_string() == "11001101");
}

TEST_CASE("transform shape") {
    for (std::uint64_t v : {0ULL, 1ULL, 7ULL, 8ULL, 1023ULL, 123456ULL}) {
        const auto t = transform(v);
        CHECK(t.length() % 2 == 0);
        CHECK(t.length() >= 4);
        CHECK(t.bit_at(t.length() - 1) == 0);
        CHECK(t.bit_at(t.length()) == 1);
        for (std::size_t i = 1; i + 3 <= t.length(); i += 2) CHECK(t.bit_at(i) == t.bit_at(i + 1));
    }
}

TEST_CASE("bit access pads with zeros") {
    const auto t = transform(1);
    CHECK(t.bit_at(1) == 1);
    CHECK(t.bit_at(4) == 1);
    CHECK(t.bit_at(9) == 0);
    CHECK(t.bit_at(100) == 0);
    CHECK_THROWS(t.bit_at(0));
}

TEST_CASE("first differing bit") {
    CHECK(first_diff_index(transform(0), transform(1)) == 1);
    CHECK(first_diff_index(transform(1), transform(3)) == 3);
    CHECK(first_diff_index(transform(2), transform(5)) == naive::first_diff_brute(2, 5));
    CHECK(first_diff_index(transform(2), transform(5)) == 5);
    CHECK(first_diff_index(transform(1), transform(2)) == 4);
    CHECK_THROWS(first_diff_index(transform(9), transform(9)));
}

TEST_CASE("no transformed label is a prefix of another, diff index bounded") {
    for (std::uint64_t a = 0; a <= 1000; ++a) {
        const auto ta = transform(a);
        for (std::uint64_t b = a + 1; b <= 1000; ++b) {
            const auto tb = transform(b);
            const std::size_t j = first_diff_index(ta, tb);
            const std::size_t shorter = std::min(ta.length(), tb.length());
            // a differing position within the shorter label means no prefix relation
            REQUIRE(j <= shorter);
            REQUIRE(j == naive::first_diff_brute(a, b));
            // j <= 2l + 2 with l the length of the shorter binary representation
            REQUIRE(j <= shorter);  // shorter == 2l + 2 by construction
        }
    }
}

TEST_CASE("transform is injective") {
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t v = 0; v <= 1000000; ++v) {
        const auto t = transform(v);
        // pack: length (6 bits) | bits, length <= 42 for labels <= 10^6
        std::uint64_t key = t.length();
        for (std::size_t i = 1; i <= t.length(); ++i) key = (key << 1) | t.bit_at(i);
        REQUIRE(seen.insert(key).second);
    }
}
