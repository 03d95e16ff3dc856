#pragma once

// Unsigned big integer, sized for automorphism-group orders: multiplication,
// small-divisor arithmetic and decimal printing. Not a general bignum.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdeg {

class BigUint {
public:
    BigUint() = default;

    BigUint(std::uint64_t v) {
        while (v != 0) {
            limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
            v >>= 32;
        }
    }

    static BigUint power(std::uint64_t base, std::uint64_t exp) {
        BigUint r{1};
        BigUint b{base};
        while (exp != 0) {
            if (exp & 1) r *= b;
            b *= b;
            exp >>= 1;
        }
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }

    bool operator==(const BigUint& o) const { return limbs_ == o.limbs_; }
    bool operator!=(const BigUint& o) const { return limbs_ != o.limbs_; }

    bool operator<(const BigUint& o) const {
        if (limbs_.size() != o.limbs_.size()) return limbs_.size() < o.limbs_.size();
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i];
        }
        return false;
    }
    bool operator<=(const BigUint& o) const { return !(o < *this); }
    bool operator>(const BigUint& o) const { return o < *this; }
    bool operator>=(const BigUint& o) const { return !(*this < o); }

    BigUint& operator*=(const BigUint& rhs) {
        if (is_zero() || rhs.is_zero()) {
            limbs_.clear();
            return *this;
        }
        std::vector<std::uint32_t> out(limbs_.size() + rhs.limbs_.size(), 0);
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < rhs.limbs_.size(); ++j) {
                std::uint64_t cur = out[i + j] +
                    static_cast<std::uint64_t>(limbs_[i]) * rhs.limbs_[j] + carry;
                out[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffu);
                carry = cur >> 32;
            }
            std::size_t k = i + rhs.limbs_.size();
            while (carry != 0) {
                std::uint64_t cur = out[k] + carry;
                out[k] = static_cast<std::uint32_t>(cur & 0xffffffffu);
                carry = cur >> 32;
                ++k;
            }
        }
        limbs_ = std::move(out);
        trim();
        return *this;
    }

    BigUint operator*(const BigUint& rhs) const {
        BigUint r = *this;
        r *= rhs;
        return r;
    }

    // Subtracts one in place; *this must be nonzero.
    BigUint& decrement() {
        if (is_zero()) throw std::underflow_error("BigUint::decrement of zero");
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            if (limbs_[i] != 0) {
                --limbs_[i];
                break;
            }
            limbs_[i] = 0xffffffffu;
        }
        trim();
        return *this;
    }

    std::uint64_t mod_u64(std::uint64_t m) const {
        if (m == 0) throw std::domain_error("BigUint::mod_u64 by zero");
        unsigned __int128 r = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            r = ((r << 32) | limbs_[i]) % m;
        }
        return static_cast<std::uint64_t>(r);
    }

    // In-place division by a small divisor, returns the remainder.
    std::uint64_t div_u64(std::uint64_t d) {
        if (d == 0) throw std::domain_error("BigUint::div_u64 by zero");
        unsigned __int128 rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            unsigned __int128 cur = (rem << 32) | limbs_[i];
            limbs_[i] = static_cast<std::uint32_t>(cur / d);
            rem = cur % d;
        }
        trim();
        return static_cast<std::uint64_t>(rem);
    }

    bool fits_u64() const { return limbs_.size() <= 2; }

    std::uint64_t to_u64() const {
        if (!fits_u64()) throw std::overflow_error("BigUint does not fit in 64 bits");
        std::uint64_t v = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
        return v;
    }

    std::string str() const {
        if (is_zero()) return "0";
        BigUint tmp = *this;
        std::string out;
        while (!tmp.is_zero()) {
            std::uint64_t chunk = tmp.div_u64(1000000000ull);
            std::string part = std::to_string(chunk);
            if (!tmp.is_zero()) part.insert(0, 9 - part.size(), '0');
            out.insert(0, part);
        }
        return out;
    }

private:
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }

    std::vector<std::uint32_t> limbs_;  // little endian, base 2^32
};

// Largest e with p^e dividing n.
inline unsigned big_p_valuation(BigUint n, std::uint64_t p) {
    if (p < 2) throw std::domain_error("big_p_valuation: p must be >= 2");
    unsigned e = 0;
    while (!n.is_zero()) {
        BigUint q = n;
        if (q.div_u64(p) != 0) break;
        n = q;
        ++e;
    }
    return e;
}

// gcd of a small integer with a big one.
inline std::uint64_t gcd_with_big(std::uint64_t a, const BigUint& b) {
    if (a == 0) throw std::domain_error("gcd_with_big: a must be positive");
    std::uint64_t r = b.mod_u64(a);
    while (r != 0) {
        std::uint64_t t = a % r;
        a = r;
        r = t;
    }
    return a;
}

}  // namespace rdeg
