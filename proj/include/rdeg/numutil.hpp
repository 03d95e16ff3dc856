#pragma once

// Elementary number theory over 64-bit integers: primality, factorization,
// totient, multiplicative orders, p-adic valuations.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rdeg {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    if (mod == 0) throw std::domain_error("powmod: zero modulus");
    if (mod == 1) return 0;
    std::uint64_t r = 1;
    base %= mod;
    while (exp != 0) {
        if (exp & 1) r = mulmod_u64(r, base, mod);
        base = mulmod_u64(base, base, mod);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    if (n == 0) throw std::domain_error("factorize(0)");
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::vector<std::uint64_t> divisors_of(std::uint64_t n) {
    auto fac = factorize(n);
    std::vector<std::uint64_t> divs{1};
    for (auto [p, e] : fac) {
        std::size_t sz = divs.size();
        std::uint64_t pe = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pe *= p;
            for (std::size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pe);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

inline std::uint64_t euler_phi(std::uint64_t m) {
    if (m == 0) throw std::domain_error("euler_phi(0)");
    std::uint64_t r = m;
    for (auto [p, e] : factorize(m)) {
        r -= r / p;
    }
    return r;
}

// Least k >= 1 with a^k = 1 (mod m); requires gcd(a, m) = 1.
inline std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
    if (m == 0) throw std::domain_error("multiplicative_order: zero modulus");
    if (m == 1) return 1;
    a %= m;
    if (std::gcd(a, m) != 1) throw std::domain_error("multiplicative_order: not a unit");
    std::uint64_t e = euler_phi(m);
    for (auto [q, qe] : factorize(e)) {
        for (unsigned i = 0; i < qe; ++i) {
            if (powmod_u64(a, e / q, m) == 1) {
                e /= q;
            } else {
                break;
            }
        }
    }
    return e;
}

// Largest e with p^e | n (n >= 1, p prime).
inline unsigned p_valuation(std::uint64_t p, std::uint64_t n) {
    if (n == 0) throw std::domain_error("p_valuation of zero");
    if (!is_prime_u64(p)) throw std::domain_error("p_valuation: p is not prime");
    unsigned e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a / std::gcd(a, b) * b;
}

}  // namespace rdeg
