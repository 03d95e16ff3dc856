#pragma once

// Automorphism groups of finite abelian groups: the exact order formula over
// primary components, a streaming brute-force enumerator used as its oracle,
// order spectra, and the universal kernel attached to a cyclic degree.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdeg/abelian.hpp"
#include "rdeg/bigint.hpp"
#include "rdeg/numutil.hpp"

namespace rdeg {

struct TooLargeError : std::runtime_error {
    explicit TooLargeError(const std::string& msg) : std::runtime_error(msg) {}
};

// |Aut(H)| for the abelian p-group with the given ascending exponent list.
inline BigUint aut_order_p_group(std::uint64_t p, std::vector<unsigned> exponents) {
    if (!is_prime_u64(p)) throw std::invalid_argument("aut_order_p_group: p is not prime");
    if (exponents.empty()) throw std::invalid_argument("aut_order_p_group: empty exponent list");
    std::sort(exponents.begin(), exponents.end());
    const std::size_t t = exponents.size();
    std::vector<std::size_t> d(t), c(t);
    for (std::size_t i = 0; i < t; ++i) {
        std::size_t lo = i, hi = i;
        while (lo > 0 && exponents[lo - 1] == exponents[i]) --lo;
        while (hi + 1 < t && exponents[hi + 1] == exponents[i]) ++hi;
        c[i] = lo + 1;  // 1-based
        d[i] = hi + 1;
    }
    BigUint result{1};
    for (std::size_t i = 1; i <= t; ++i) {
        // p^(d_i) - p^(i-1) = p^(i-1) * (p^(d_i-i+1) - 1)
        BigUint term = BigUint::power(p, d[i - 1] - (i - 1));
        term.decrement();
        result *= BigUint::power(p, i - 1) * term;
    }
    for (std::size_t i = 1; i <= t; ++i) {
        result *= BigUint::power(p, static_cast<std::uint64_t>(exponents[i - 1]) * (t - d[i - 1]));
    }
    for (std::size_t i = 1; i <= t; ++i) {
        result *= BigUint::power(p, static_cast<std::uint64_t>(exponents[i - 1] - 1) * (t - c[i - 1] + 1));
    }
    return result;
}

inline BigUint aut_order(const FiniteAbelianGroup& g) {
    BigUint result{1};
    for (const auto& [p, exps] : g.primary_decomposition()) {
        result *= aut_order_p_group(p, exps);
    }
    return result;
}

// Cyclic factor orders of Aut(Z/nZ) for odd n: one q^(e-1)(q-1) per prime power.
inline std::vector<std::int64_t> aut_cyclic_structure(std::uint64_t n) {
    if (n % 2 == 0) throw std::invalid_argument("aut_cyclic_structure: even modulus unsupported");
    std::vector<std::int64_t> out;
    for (auto [q, e] : factorize(n)) {
        std::int64_t f = static_cast<std::int64_t>(q - 1);
        for (unsigned i = 1; i < e; ++i) f *= static_cast<std::int64_t>(q);
        out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Exponent of Aut(Z/mZ) for any m >= 1.
inline std::uint64_t aut_exponent_of_cyclic(std::uint64_t m) {
    std::uint64_t e = 1;
    for (auto [q, k] : factorize(m)) {
        std::uint64_t part;
        if (q == 2) {
            part = k <= 1 ? 1 : (k == 2 ? 2 : (std::uint64_t(1) << (k - 2)));
        } else {
            part = q - 1;
            for (unsigned i = 1; i < k; ++i) part *= q;
        }
        e = lcm_u64(e, part);
    }
    return e;
}

// Number of order-2 elements of Aut(Z/nZ) for odd n with r prime factors: 2^r - 1.
inline std::uint64_t count_order2_aut_cyclic(std::uint64_t n) {
    if (n % 2 == 0) throw std::invalid_argument("count_order2_aut_cyclic: even modulus unsupported");
    if (n == 1) return 0;
    unsigned r = static_cast<unsigned>(factorize(n).size());
    return (std::uint64_t(1) << r) - 1;
}

/// An automorphism as a permutation of element indices plus generator images.
struct Automorphism {
    std::vector<std::uint32_t> perm;
    std::vector<std::uint32_t> gen_images;  // image index per parent generator

    std::uint32_t apply(std::uint32_t idx) const { return perm[idx]; }

    bool is_identity() const {
        for (std::uint32_t i = 0; i < perm.size(); ++i)
            if (perm[i] != i) return false;
        return true;
    }

    // (this after other): x -> this(other(x)).
    Automorphism compose(const Automorphism& other) const {
        Automorphism r;
        r.perm.resize(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) r.perm[i] = perm[other.perm[i]];
        r.gen_images.resize(gen_images.size());
        for (std::size_t i = 0; i < gen_images.size(); ++i) r.gen_images[i] = perm[other.gen_images[i]];
        return r;
    }

    std::uint64_t order() const {
        std::vector<bool> seen(perm.size(), false);
        std::uint64_t ord = 1;
        for (std::uint32_t i = 0; i < perm.size(); ++i) {
            if (seen[i]) continue;
            std::uint64_t len = 0;
            std::uint32_t j = i;
            while (!seen[j]) {
                seen[j] = true;
                j = perm[j];
                ++len;
            }
            ord = lcm_u64(ord, len);
        }
        return ord;
    }
};

inline Automorphism identity_automorphism(const FiniteAbelianGroup& g) {
    Automorphism a;
    a.perm.resize(g.order());
    for (std::uint32_t i = 0; i < a.perm.size(); ++i) a.perm[i] = i;
    a.gen_images.resize(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i) {
        GroupElement e(g.rank(), 0);
        e[i] = 1;
        a.gen_images[i] = static_cast<std::uint32_t>(g.index_of(e));
    }
    return a;
}

// Builds the full permutation from generator images by an odometer walk over
// the domain. Each odometer carry adds the affected generator image once more
// (its full multiple vanishes), so the image needs coordinate adds only.
inline void build_automorphism_into(const FiniteAbelianGroup& g,
                                    const std::vector<std::uint32_t>& gen_images,
                                    Automorphism& a) {
    const std::uint64_t n = g.order();
    const std::size_t t = g.rank();
    a.gen_images = gen_images;
    a.perm.assign(n, 0);
    if (t == 0) return;
    std::vector<std::uint32_t> factors(t), strides(t, 1);
    for (std::size_t i = 0; i < t; ++i)
        factors[i] = static_cast<std::uint32_t>(g.invariant_factors()[i]);
    for (std::size_t i = t; i-- > 1;) strides[i - 1] = strides[i] * factors[i];

    std::vector<std::vector<std::uint32_t>> img_coords(t, std::vector<std::uint32_t>(t));
    for (std::size_t i = 0; i < t; ++i) {
        std::uint64_t rest = gen_images[i];
        for (std::size_t k = 0; k < t; ++k) {
            img_coords[i][k] = static_cast<std::uint32_t>(rest / strides[k]);
            rest %= strides[k];
        }
    }
    std::vector<std::uint32_t> digits(t, 0), image(t, 0);
    auto add_gen = [&](std::size_t i) {
        for (std::size_t k = 0; k < t; ++k) {
            image[k] += img_coords[i][k];
            if (image[k] >= factors[k]) image[k] -= factors[k];
        }
    };
    for (std::uint64_t idx = 1; idx < n; ++idx) {
        std::size_t pos = t;
        while (pos-- > 0) {
            add_gen(pos);  // carries add the image once more as well
            if (++digits[pos] < factors[pos]) break;
            digits[pos] = 0;
        }
        std::uint64_t out = 0;
        for (std::size_t k = 0; k < t; ++k) out += static_cast<std::uint64_t>(image[k]) * strides[k];
        a.perm[idx] = static_cast<std::uint32_t>(out);
    }
}

inline Automorphism build_automorphism(const FiniteAbelianGroup& g,
                                       const std::vector<std::uint32_t>& gen_images) {
    Automorphism a;
    build_automorphism_into(g, gen_images, a);
    return a;
}

namespace detail {

// DFS over injective generator-image tuples; abelian structure makes the
// span-growth check (first multiple of the candidate landing in the span
// must be the generator's full order) an exact injectivity test. Index
// addition goes through a precomputed coordinate table to stay division-free.
template <typename Fn>
std::uint64_t for_each_automorphism_images(const FiniteAbelianGroup& g, Fn&& fn) {
    const std::uint64_t n = g.order();
    const std::size_t t = g.rank();
    if (t == 0) {
        std::vector<std::uint32_t> none;
        fn(none);
        return 1;
    }
    if (!g.enumerable())
        throw TooLargeError("automorphism enumeration needs an enumerable group");

    std::vector<std::uint32_t> factors(t), strides(t, 1);
    for (std::size_t i = 0; i < t; ++i)
        factors[i] = static_cast<std::uint32_t>(g.invariant_factors()[i]);
    for (std::size_t i = t; i-- > 1;) strides[i - 1] = strides[i] * factors[i];

    std::vector<std::uint32_t> coords(n * t, 0);
    for (std::uint64_t idx = 1; idx < n; ++idx) {
        const std::uint32_t* prev = &coords[(idx - 1) * t];
        std::uint32_t* cur = &coords[idx * t];
        std::uint8_t carry = 1;
        for (std::size_t k = t; k-- > 0;) {
            std::uint32_t v = prev[k] + carry;
            carry = v == factors[k];
            cur[k] = carry ? 0 : v;
        }
    }
    auto add_idx = [&](std::uint32_t a, std::uint32_t b) {
        const std::uint32_t* ca = &coords[static_cast<std::size_t>(a) * t];
        const std::uint32_t* cb = &coords[static_cast<std::size_t>(b) * t];
        std::uint64_t out = 0;
        for (std::size_t k = 0; k < t; ++k) {
            std::uint32_t s = ca[k] + cb[k];
            if (s >= factors[k]) s -= factors[k];
            out += static_cast<std::uint64_t>(s) * strides[k];
        }
        return static_cast<std::uint32_t>(out);
    };

    std::map<std::uint32_t, std::vector<std::uint32_t>> torsion;
    for (std::uint32_t f : factors) {
        if (torsion.count(f)) continue;
        std::vector<std::uint32_t> lst;
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            bool killed = true;
            for (std::size_t k = 0; k < t && killed; ++k) {
                killed = static_cast<std::uint64_t>(coords[idx * t + k]) * f % factors[k] == 0;
            }
            if (killed) lst.push_back(static_cast<std::uint32_t>(idx));
        }
        torsion[f] = std::move(lst);
    }

    std::vector<std::uint8_t> inspan(n, 0);
    std::vector<std::uint32_t> span{0};
    inspan[0] = 1;
    std::vector<std::uint32_t> images(t);
    std::uint64_t count = 0;

    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == t) {
            fn(images);
            ++count;
            return;
        }
        const std::uint32_t ni = factors[depth];
        for (std::uint32_t y : torsion[ni]) {
            std::uint32_t z = y;
            std::uint32_t j = 1;
            while (!inspan[z]) {
                z = add_idx(z, y);
                ++j;
            }
            if (j != ni) continue;
            images[depth] = y;
            const std::size_t snapshot = span.size();
            std::uint32_t shift = y;
            for (std::uint32_t step = 1; step < ni; ++step) {
                for (std::size_t s = 0; s < snapshot; ++s) {
                    std::uint32_t e = add_idx(span[s], shift);
                    inspan[e] = 1;
                    span.push_back(e);
                }
                shift = add_idx(shift, y);
            }
            self(self, depth + 1);
            while (span.size() > snapshot) {
                inspan[span.back()] = 0;
                span.pop_back();
            }
        }
    };
    rec(rec, 0);
    return count;
}

}  // namespace detail

// Streaming sweep; the callback sees each automorphism exactly once, as a
// const reference into a reused scratch buffer (copy to keep).
template <typename Fn>
std::uint64_t for_each_automorphism(const FiniteAbelianGroup& g, Fn&& fn) {
    Automorphism scratch;
    return detail::for_each_automorphism_images(
        g, [&](const std::vector<std::uint32_t>& images) {
            build_automorphism_into(g, images, scratch);
            fn(static_cast<const Automorphism&>(scratch));
        });
}

// Brute-force count, the oracle for the closed-form order.
inline std::uint64_t count_automorphisms(const FiniteAbelianGroup& g) {
    return detail::for_each_automorphism_images(g, [](const std::vector<std::uint32_t>&) {});
}

inline std::vector<Automorphism> enumerate_automorphisms(const FiniteAbelianGroup& g,
                                                         std::uint64_t ceiling = 1000000) {
    BigUint predicted = aut_order(g);
    if (predicted > BigUint{ceiling}) {
        throw TooLargeError("predicted automorphism count " + predicted.str() +
                            " exceeds ceiling " + std::to_string(ceiling));
    }
    std::vector<Automorphism> out;
    out.reserve(predicted.fits_u64() ? predicted.to_u64() : 0);
    for_each_automorphism(g, [&](Automorphism a) { out.push_back(std::move(a)); });
    return out;
}

// Set of element orders of Aut(A). Cyclic A has abelian Aut, so the spectrum
// is exactly the divisor set of its exponent; otherwise enumerate.
inline std::set<std::uint64_t> aut_order_spectrum(const FiniteAbelianGroup& a,
                                                  std::uint64_t ceiling = 1000000) {
    std::set<std::uint64_t> spectrum;
    if (a.is_cyclic()) {
        for (std::uint64_t d : divisors_of(aut_exponent_of_cyclic(a.order()))) spectrum.insert(d);
        return spectrum;
    }
    BigUint predicted = aut_order(a);
    if (predicted > BigUint{ceiling}) {
        throw TooLargeError("automorphism spectrum of a group with " + predicted.str() +
                            " automorphisms exceeds ceiling " + std::to_string(ceiling));
    }
    for_each_automorphism(a, [&](const Automorphism& x) { spectrum.insert(x.order()); });
    return spectrum;
}

/**
 * Largest f dividing n such that the order-f element of the cyclic group of
 * order n is killed by every homomorphism into Aut(A): n / lcm of the
 * automorphism orders dividing n.
 */
inline std::uint64_t universal_kernel_order(std::uint64_t n, const FiniteAbelianGroup& a,
                                            std::uint64_t ceiling = 1000000) {
    if (n == 0) throw std::domain_error("universal_kernel_order: n must be >= 1");
    std::uint64_t l = 1;
    for (std::uint64_t d : aut_order_spectrum(a, ceiling)) {
        if (n % d == 0) l = lcm_u64(l, d);
    }
    return n / l;
}

/// Class-group data as ingested: the exact group when known, else the order.
struct ClassData {
    std::optional<FiniteAbelianGroup> group;
    std::uint64_t h = 1;

    static ClassData from_group(FiniteAbelianGroup g) {
        ClassData c;
        c.h = g.order();
        c.group = std::move(g);
        return c;
    }
    static ClassData from_order(std::uint64_t h) {
        ClassData c;
        c.h = h;
        return c;
    }
    bool exact() const { return group.has_value(); }
};

/**
 * Automorphism bookkeeping over class-group data. With only the order known,
 * every abelian group of that order is carried and each query quantifies over
 * all of them (the worst case for the certification criteria).
 */
class AutProfile {
public:
    explicit AutProfile(const ClassData& data) : h_(data.h), exact_(data.exact()) {
        if (data.exact()) {
            shapes_.push_back(*data.group);
        } else {
            shapes_ = abelian_groups_of_order(data.h);
        }
        for (const auto& s : shapes_) aut_orders_.push_back(aut_order(s));
        spectra_.resize(shapes_.size());
    }

    std::uint64_t h() const { return h_; }
    bool exact() const { return exact_; }
    const std::vector<FiniteAbelianGroup>& shapes() const { return shapes_; }
    const std::vector<BigUint>& aut_orders() const { return aut_orders_; }

    bool aut_order_coprime(std::uint64_t f) const {
        for (const auto& o : aut_orders_) {
            if (gcd_with_big(f, o) != 1) return false;
        }
        return true;
    }

    unsigned aut_p_valuation_max(std::uint64_t p) const {
        unsigned e = 0;
        for (const auto& o : aut_orders_) e = std::max(e, big_p_valuation(o, p));
        return e;
    }

    std::uint64_t universal_kernel_min(std::uint64_t n, std::uint64_t ceiling = 1000000) const {
        std::uint64_t best = n;
        for (std::size_t i = 0; i < shapes_.size(); ++i) {
            std::uint64_t l = 1;
            for (std::uint64_t d : spectrum(i, ceiling)) {
                if (n % d == 0) l = lcm_u64(l, d);
            }
            best = std::min(best, n / l);
        }
        return best;
    }

    std::string aut_orders_str() const {
        std::ostringstream os;
        os << "{";
        for (std::size_t i = 0; i < aut_orders_.size(); ++i) {
            if (i) os << ",";
            os << aut_orders_[i].str();
        }
        os << "}";
        return os.str();
    }

private:
    const std::set<std::uint64_t>& spectrum(std::size_t i, std::uint64_t ceiling) const {
        if (!spectra_[i]) spectra_[i] = aut_order_spectrum(shapes_[i], ceiling);
        return *spectra_[i];
    }

    std::uint64_t h_;
    bool exact_;
    std::vector<FiniteAbelianGroup> shapes_;
    std::vector<BigUint> aut_orders_;
    mutable std::vector<std::optional<std::set<std::uint64_t>>> spectra_;
};

/// Order of Aut with an optional enumerated witness list.
struct AutDescriptor {
    FiniteAbelianGroup group;
    BigUint order;
    std::optional<std::vector<Automorphism>> maps;
};

inline AutDescriptor make_aut_descriptor(const FiniteAbelianGroup& g, bool enumerate,
                                         std::uint64_t ceiling = 1000000) {
    AutDescriptor d{g, aut_order(g), std::nullopt};
    if (enumerate) d.maps = enumerate_automorphisms(g, ceiling);
    return d;
}

}  // namespace rdeg
