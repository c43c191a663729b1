#pragma once

// Label transformation and bit access. Doubling every bit of the binary
// representation and appending 01 guarantees that two distinct labels are
// never prefixes of each other, so a first differing bit position always
// exists once missing bits read as 0.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvgrid {

class TransformedLabel {
public:
    explicit TransformedLabel(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

    std::size_t length() const { return bits_.size(); }

    // 1-indexed from the most significant bit; indices past the end read 0.
    std::uint8_t bit_at(std::size_t i) const {
        if (i == 0) throw std::out_of_range("bit index is 1-based");
        return i <= bits_.size() ? bits_[i - 1] : 0;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(bits_.size());
        for (auto b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    friend bool operator==(const TransformedLabel&, const TransformedLabel&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

// (b0 b1 ... b(n-1)) -> (b0 b0 b1 b1 ... b(n-1) b(n-1) 0 1); label 0 has
// binary representation "0".
inline TransformedLabel transform(std::uint64_t label) {
    std::vector<std::uint8_t> binary;
    if (label == 0) {
        binary.push_back(0);
    } else {
        for (std::uint64_t v = label; v != 0; v >>= 1)
            binary.push_back(static_cast<std::uint8_t>(v & 1));
        std::reverse(binary.begin(), binary.end());
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(binary.size() * 2 + 2);
    for (auto b : binary) {
        bits.push_back(b);
        bits.push_back(b);
    }
    bits.push_back(0);
    bits.push_back(1);
    return TransformedLabel(std::move(bits));
}

// Smallest 1-based index where the padded bit sequences differ. Distinct
// labels always differ within max(length) positions.
inline std::size_t first_diff_index(const TransformedLabel& a, const TransformedLabel& b) {
    const std::size_t limit = std::max(a.length(), b.length());
    for (std::size_t i = 1; i <= limit; ++i)
        if (a.bit_at(i) != b.bit_at(i)) return i;
    throw std::invalid_argument("first_diff_index: equal transformed labels (duplicate labels)");
}

}  // namespace rvgrid
