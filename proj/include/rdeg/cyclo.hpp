#pragma once

// Residue degrees of rational primes in cyclotomic fields and their subfields
// via multiplicative orders, plus empirical splitting densities over sieved
// primes. All classification is exact integer arithmetic; floating point only
// enters in the final observed/predicted ratios.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "rdeg/numutil.hpp"

namespace rdeg {

struct RamifiedPrimeError : std::domain_error {
    explicit RamifiedPrimeError(const std::string& msg) : std::domain_error(msg) {}
};

/// Full cyclotomic field of conductor m, or the plus part for prime ell,
/// with an optional cyclic subfield of degree f.
struct CyclotomicContext {
    std::uint64_t modulus = 1;
    bool plus_part = false;
    std::uint64_t subfield_degree = 1;

    CyclotomicContext(std::uint64_t m, bool plus, std::uint64_t f)
        : modulus(m), plus_part(plus), subfield_degree(f) {
        if (plus_part && !is_prime_u64(m))
            throw std::invalid_argument("plus part supported for prime conductors only");
        if (galois_order() % f != 0)
            throw std::invalid_argument("subfield degree must divide the Galois order");
    }

    std::uint64_t galois_order() const {
        return plus_part ? (modulus - 1) / 2 : euler_phi(modulus);
    }
};

// Residue degree of p in the full cyclotomic field of conductor m.
inline std::uint64_t residue_degree_cyclotomic(std::uint64_t p, std::uint64_t m) {
    if (m < 1) throw std::invalid_argument("conductor must be >= 1");
    if (m > 1 && m % p == 0)
        throw RamifiedPrimeError("prime " + std::to_string(p) + " ramifies at conductor " +
                                 std::to_string(m));
    return multiplicative_order(p, m);
}

// Residue degree of p in the plus part: order of p in (Z/ell)*/{+-1}.
inline std::uint64_t residue_degree_plus_part(std::uint64_t p, std::uint64_t ell) {
    if (!is_prime_u64(ell) || ell < 3) throw std::invalid_argument("needs an odd prime");
    if (p % ell == 0) throw RamifiedPrimeError("prime divides the conductor");
    std::uint64_t n = (ell - 1) / 2;
    for (std::uint64_t k : divisors_of(n)) {
        std::uint64_t v = powmod_u64(p, k, ell);
        if (v == 1 || v == ell - 1) return k;
    }
    throw std::logic_error("plus-part order not found");
}

// Residue degree of p in the degree-f cyclic subfield of conductor ell.
inline std::uint64_t residue_degree_subfield(std::uint64_t p, std::uint64_t ell, std::uint64_t f) {
    if (!is_prime_u64(ell)) throw std::invalid_argument("needs a prime conductor");
    if ((ell - 1) % f != 0) throw std::invalid_argument("subfield degree must divide ell - 1");
    if (p % ell == 0) throw RamifiedPrimeError("prime divides the conductor");
    std::uint64_t d = multiplicative_order(p, ell);
    return d / std::gcd(d, (ell - 1) / f);
}

// Segmented sieve; calls fn(p) for every prime p <= limit in order.
template <typename Fn>
void segmented_sieve(std::uint64_t limit, Fn&& fn) {
    if (limit < 2) return;
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    while (root * root > limit + 1) --root;
    std::vector<char> base(root + 1, 1);
    std::vector<std::uint64_t> base_primes;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!base[i]) continue;
        base_primes.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) base[j] = 0;
    }
    for (std::uint64_t p : base_primes) fn(p);

    constexpr std::uint64_t kSegment = 1 << 16;
    std::vector<char> seg;
    for (std::uint64_t low = root + 1; low <= limit; low += kSegment) {
        std::uint64_t high = std::min(limit, low + kSegment - 1);
        seg.assign(high - low + 1, 1);
        for (std::uint64_t p : base_primes) {
            std::uint64_t start = (low + p - 1) / p * p;
            for (std::uint64_t j = start; j <= high; j += p) seg[j - low] = 0;
        }
        for (std::uint64_t i = low; i <= high; ++i) {
            if (seg[i - low]) fn(i);
        }
    }
}

/// Per-degree prime counts below a bound; the ramified prime is excluded from
/// the total, so the per-degree fractions sum to one exactly.
struct DensityHistogram {
    std::uint64_t total = 0;
    std::map<std::uint64_t, std::uint64_t> counts;
};

inline DensityHistogram classify_primes(std::uint64_t ell, bool plus_part, std::uint64_t bound) {
    if (!is_prime_u64(ell) || ell < 3) throw std::invalid_argument("needs an odd prime");
    DensityHistogram hist;
    segmented_sieve(bound, [&](std::uint64_t p) {
        if (p == ell) return;
        std::uint64_t f = plus_part ? residue_degree_plus_part(p, ell)
                                    : residue_degree_cyclotomic(p, ell);
        ++hist.counts[f];
        ++hist.total;
    });
    return hist;
}

struct DensityRow {
    std::uint64_t ell = 0;
    bool plus_part = false;
    std::uint64_t f = 0;
    std::uint64_t count = 0;
    std::uint64_t total = 0;
    double observed = 0.0;
    double predicted = 0.0;
    double sigma_distance = 0.0;
};

/**
 * Observed fraction of primes below `bound` with residue degree f, against
 * the prediction phi(f)/n for a cyclic Galois group of order n, with the
 * distance reported in binomial standard deviations.
 */
inline DensityRow empirical_density(std::uint64_t ell, bool plus_part, std::uint64_t f,
                                    std::uint64_t bound) {
    if (bound < 1000) throw std::invalid_argument("prime bound must be at least 1000");
    std::uint64_t n = plus_part ? (ell - 1) / 2 : ell - 1;
    if (n % f != 0) throw std::invalid_argument("residue degree must divide the Galois order");
    DensityHistogram hist = classify_primes(ell, plus_part, bound);
    DensityRow row;
    row.ell = ell;
    row.plus_part = plus_part;
    row.f = f;
    row.total = hist.total;
    row.count = hist.counts.count(f) ? hist.counts.at(f) : 0;
    row.observed = static_cast<double>(row.count) / static_cast<double>(row.total);
    row.predicted = static_cast<double>(euler_phi(f)) / static_cast<double>(n);
    double sigma = std::sqrt(row.predicted * (1.0 - row.predicted) /
                             static_cast<double>(row.total));
    row.sigma_distance = sigma == 0.0 ? 0.0 : std::abs(row.observed - row.predicted) / sigma;
    return row;
}

}  // namespace rdeg
