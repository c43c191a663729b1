#pragma once

// Unbounded non-negative integers and exact rationals.
//
// Traversal counts, repetition counts and pattern costs overflow 64 bits
// already for moderate phase parameters, so every externally visible count
// in this library is a `Count`. The representation is base 2^32 limbs,
// little-endian, with schoolbook multiplication; operands in practice stay
// under a dozen limbs.

#include <algorithm>
#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rvgrid {

class Count {
public:
    Count() = default;
    Count(std::uint64_t v) {
        if (v != 0) {
            limbs_.push_back(static_cast<std::uint32_t>(v));
            if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
        }
    }

    static Count from_decimal(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("Count: empty decimal string");
        Count r;
        for (char c : s) {
            if (c < '0' || c > '9') throw std::invalid_argument("Count: bad digit");
            r.mul_small(10);
            r.add_small(static_cast<std::uint32_t>(c - '0'));
        }
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }

    bool fits_u64() const { return limbs_.size() <= 2; }
    std::uint64_t to_u64() const {
        if (!fits_u64()) throw std::overflow_error("Count: does not fit in 64 bits");
        std::uint64_t v = 0;
        if (limbs_.size() > 1) v = static_cast<std::uint64_t>(limbs_[1]) << 32;
        if (!limbs_.empty()) v |= limbs_[0];
        return v;
    }
    // Saturating conversion, for sizing skips and batches.
    std::uint64_t to_u64_clamped() const {
        return fits_u64() ? to_u64() : ~std::uint64_t{0};
    }

    friend bool operator==(const Count& a, const Count& b) { return a.limbs_ == b.limbs_; }
    friend std::strong_ordering operator<=>(const Count& a, const Count& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() <=> b.limbs_.size();
        for (std::size_t i = a.limbs_.size(); i-- > 0;)
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
        return std::strong_ordering::equal;
    }

    Count& operator+=(const Count& o) {
        limbs_.resize(std::max(limbs_.size(), o.limbs_.size()), 0);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0u);
            limbs_[i] = static_cast<std::uint32_t>(s);
            carry = s >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
        return *this;
    }

    // Requires *this >= o.
    Count& operator-=(const Count& o) {
        if (*this < o) throw std::underflow_error("Count: negative result");
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::int64_t d = static_cast<std::int64_t>(limbs_[i]) - borrow -
                             (i < o.limbs_.size() ? o.limbs_[i] : 0u);
            borrow = d < 0;
            if (d < 0) d += (std::int64_t{1} << 32);
            limbs_[i] = static_cast<std::uint32_t>(d);
        }
        trim();
        return *this;
    }

    friend Count operator+(Count a, const Count& b) { a += b; return a; }
    friend Count operator-(Count a, const Count& b) { a -= b; return a; }

    friend Count operator*(const Count& a, const Count& b) {
        if (a.is_zero() || b.is_zero()) return Count{};
        Count r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
                std::uint64_t cur = r.limbs_[i + j] +
                                    static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            r.limbs_[i + b.limbs_.size()] += static_cast<std::uint32_t>(carry);
        }
        r.trim();
        return r;
    }
    Count& operator*=(const Count& o) { *this = *this * o; return *this; }

    // Division and remainder by a small divisor; enough for printing and
    // for index reductions, full big division is never needed here.
    std::uint32_t divmod_small(std::uint32_t divisor) {
        if (divisor == 0) throw std::domain_error("Count: division by zero");
        std::uint64_t rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | limbs_[i];
            limbs_[i] = static_cast<std::uint32_t>(cur / divisor);
            rem = cur % divisor;
        }
        trim();
        return static_cast<std::uint32_t>(rem);
    }
    std::uint32_t mod_small(std::uint32_t divisor) const {
        if (divisor == 0) throw std::domain_error("Count: division by zero");
        std::uint64_t rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;)
            rem = ((rem << 32) | limbs_[i]) % divisor;
        return static_cast<std::uint32_t>(rem);
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        Count tmp = *this;
        std::string out;
        while (!tmp.is_zero()) {
            std::uint32_t chunk = tmp.divmod_small(1000000000u);
            std::string part = std::to_string(chunk);
            if (!tmp.is_zero()) part.insert(0, 9 - part.size(), '0');
            out.insert(0, part);
        }
        return out;
    }

    friend Count gcd(Count a, Count b) {
        // Binary gcd; subtraction-based, no general division required.
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        unsigned shift = 0;
        while (a.is_even() && b.is_even()) { a.halve(); b.halve(); ++shift; }
        while (a.is_even()) a.halve();
        while (!b.is_zero()) {
            while (b.is_even()) b.halve();
            if (a > b) std::swap(a, b);
            b -= a;
        }
        for (unsigned i = 0; i < shift; ++i) a.double_();
        return a;
    }

private:
    void trim() { while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back(); }
    void mul_small(std::uint32_t m) {
        std::uint64_t carry = 0;
        for (auto& l : limbs_) {
            std::uint64_t cur = static_cast<std::uint64_t>(l) * m + carry;
            l = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
        trim();
    }
    void add_small(std::uint32_t v) {
        std::uint64_t carry = v;
        for (std::size_t i = 0; carry && i < limbs_.size(); ++i) {
            std::uint64_t s = carry + limbs_[i];
            limbs_[i] = static_cast<std::uint32_t>(s);
            carry = s >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    }
    bool is_even() const { return limbs_.empty() || (limbs_[0] & 1u) == 0; }
    void halve() {
        std::uint32_t carry = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            std::uint32_t next = limbs_[i] & 1u;
            limbs_[i] = (limbs_[i] >> 1) | (carry << 31);
            carry = next;
        }
        trim();
    }
    void double_() { mul_small(2); }

    std::vector<std::uint32_t> limbs_;  // little-endian base 2^32, no leading zeros
};

inline Count operator*(Count a, std::uint64_t b) { return a * Count(b); }

// Exact non-negative rational. Kept in lowest terms so that string output is
// canonical; comparisons cross-multiply, so exactness never depends on
// normalization.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(Count num, Count den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        reduce();
    }
    Rational(std::uint64_t num, std::uint64_t den) : Rational(Count(num), Count(den)) {}

    const Count& num() const { return num_; }
    const Count& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return (a.num_ * b.den_) <=> (b.num_ * a.den_);
    }

    // 1 - f, used when flipping an on-edge location to the opposite endpoint.
    Rational complement() const {
        if (num_ > den_) throw std::domain_error("Rational: complement of value > 1");
        return Rational(den_ - num_, den_);
    }

    std::string to_string() const { return num_.to_string() + "/" + den_.to_string(); }

    static Rational parse(std::string_view s) {
        auto slash = s.find('/');
        if (slash == std::string_view::npos)
            return Rational(Count::from_decimal(s), Count(1));
        return Rational(Count::from_decimal(s.substr(0, slash)),
                        Count::from_decimal(s.substr(slash + 1)));
    }

private:
    void reduce() {
        if (num_.is_zero()) { den_ = Count(1); return; }
        Count g = gcd(num_, den_);
        if (g > Count(1)) {
            // Division by a general Count is avoided everywhere else; here the
            // gcd fits practical sizes, so repeated small division is fine.
            num_ = divide_exact(num_, g);
            den_ = divide_exact(den_, g);
        }
    }
    // Exact division helper via schoolbook long division on 32-bit chunks of
    // the divisor is overkill; binary long division keeps it simple.
    static Count divide_exact(const Count& value, const Count& by) {
        // binary long division
        Count quotient(0), remainder(0);
        std::string bits = to_bits(value);
        for (char bit : bits) {
            remainder = remainder * 2 + Count(bit == '1' ? 1 : 0);
            quotient = quotient * 2;
            if (remainder >= by) { remainder -= by; quotient += Count(1); }
        }
        return quotient;
    }
    static std::string to_bits(Count v) {
        if (v.is_zero()) return "0";
        std::string bits;
        while (!v.is_zero()) bits.push_back('0' + static_cast<char>(v.divmod_small(2)));
        std::reverse(bits.begin(), bits.end());
        return bits;
    }

    Count num_;
    Count den_;
};

}  // namespace rvgrid
