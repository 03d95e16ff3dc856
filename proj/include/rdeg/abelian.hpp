#pragma once

// Exact arithmetic in finite abelian groups given by invariant factors:
// construction and normalization, element orders, generated subgroups,
// cyclic subgroup inventories and coset transversals.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdeg/numutil.hpp"
#include "rdeg/smith.hpp"

namespace rdeg {

using GroupElement = std::vector<std::int64_t>;

/**
 * A finite abelian group in invariant-factor form n_1 | n_2 | ... | n_t,
 * each factor >= 2. The empty factor list is the trivial group (order 1).
 *
 * Any list of cyclic orders is accepted by from_cyclic_orders and normalized
 * to the invariant chain by merging primary components. Values are immutable
 * after construction and all operations here are pure.
 */
class FiniteAbelianGroup {
public:
    // Threshold below which subgroups are materialized as element sets.
    static constexpr std::uint64_t kMaterializeLimit = 10000;

    FiniteAbelianGroup() : order_(1) {}

    static FiniteAbelianGroup from_cyclic_orders(const std::vector<std::int64_t>& orders) {
        std::map<std::uint64_t, std::vector<unsigned>> primary;
        for (std::int64_t m : orders) {
            if (m < 2) throw std::invalid_argument("cyclic order must be >= 2");
            for (auto [p, e] : factorize(static_cast<std::uint64_t>(m))) {
                primary[p].push_back(e);
            }
        }
        return from_primary(primary);
    }

    static FiniteAbelianGroup from_primary(std::map<std::uint64_t, std::vector<unsigned>> primary) {
        std::size_t t = 0;
        for (auto& [p, exps] : primary) {
            std::sort(exps.begin(), exps.end());
            t = std::max(t, exps.size());
        }
        std::vector<std::int64_t> factors(t, 1);
        for (auto& [p, exps] : primary) {
            // Pad with zero exponents on the small side so the largest prime
            // powers line up in the last invariant factor.
            std::size_t offset = t - exps.size();
            for (std::size_t i = 0; i < exps.size(); ++i) {
                std::int64_t pe = 1;
                for (unsigned j = 0; j < exps[i]; ++j) pe *= static_cast<std::int64_t>(p);
                factors[offset + i] *= pe;
            }
        }
        FiniteAbelianGroup g;
        g.factors_ = std::move(factors);
        g.init();
        return g;
    }

    static FiniteAbelianGroup cyclic(std::int64_t n) {
        if (n == 1) return FiniteAbelianGroup{};
        return from_cyclic_orders({n});
    }

    static FiniteAbelianGroup trivial() { return FiniteAbelianGroup{}; }

    const std::vector<std::int64_t>& invariant_factors() const { return factors_; }
    std::uint64_t order() const { return order_; }
    std::size_t rank() const { return factors_.size(); }
    bool is_trivial() const { return factors_.empty(); }
    bool is_cyclic() const { return factors_.size() <= 1; }
    std::int64_t exponent() const { return factors_.empty() ? 1 : factors_.back(); }
    bool enumerable() const { return order_ <= kMaterializeLimit; }

    bool operator==(const FiniteAbelianGroup& o) const { return factors_ == o.factors_; }
    bool operator!=(const FiniteAbelianGroup& o) const { return factors_ != o.factors_; }

    GroupElement identity() const { return GroupElement(factors_.size(), 0); }

    GroupElement reduce(GroupElement x) const {
        check_arity(x);
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            x[i] %= factors_[i];
            if (x[i] < 0) x[i] += factors_[i];
        }
        return x;
    }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        check_arity(a);
        check_arity(b);
        GroupElement r(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i) r[i] = (a[i] + b[i]) % factors_[i];
        return r;
    }

    GroupElement negate(const GroupElement& a) const {
        check_arity(a);
        GroupElement r(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i) r[i] = (factors_[i] - a[i]) % factors_[i];
        return r;
    }

    GroupElement scale(std::int64_t k, const GroupElement& a) const {
        check_arity(a);
        GroupElement r(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            std::int64_t v = (k % factors_[i]) * (a[i] % factors_[i]) % factors_[i];
            if (v < 0) v += factors_[i];
            r[i] = v;
        }
        return r;
    }

    bool is_identity(const GroupElement& a) const {
        check_arity(a);
        for (auto v : a)
            if (v != 0) return false;
        return true;
    }

    // Least k >= 1 with k*x = 0: lcm over coordinates of n_i / gcd(n_i, x_i).
    std::int64_t element_order(const GroupElement& x) const {
        check_arity(x);
        std::int64_t ord = 1;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            std::int64_t d = factors_[i] / std::gcd(factors_[i], x[i]);
            ord = std::lcm(ord, d);
        }
        return ord;
    }

    std::uint64_t index_of(const GroupElement& x) const {
        check_arity(x);
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            idx = idx * static_cast<std::uint64_t>(factors_[i]) + static_cast<std::uint64_t>(x[i]);
        }
        return idx;
    }

    GroupElement element_at(std::uint64_t idx) const {
        GroupElement x(factors_.size());
        for (std::size_t i = factors_.size(); i-- > 0;) {
            x[i] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(factors_[i]));
            idx /= static_cast<std::uint64_t>(factors_[i]);
        }
        return x;
    }

    // Index arithmetic avoids materializing coordinate vectors in hot loops.
    std::uint64_t index_add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t r = 0;
        for (std::size_t i = factors_.size(); i-- > 0;) {
            auto f = static_cast<std::uint64_t>(factors_[i]);
            std::uint64_t s = (a % f + b % f) % f;
            r += s * strides_[i];
            a /= f;
            b /= f;
        }
        return r;
    }

    std::vector<GroupElement> generators() const {
        std::vector<GroupElement> g;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            GroupElement e(factors_.size(), 0);
            e[i] = 1;
            g.push_back(std::move(e));
        }
        return g;
    }

    // Prime -> ascending list of exponents of the primary cyclic components.
    std::map<std::uint64_t, std::vector<unsigned>> primary_decomposition() const {
        std::map<std::uint64_t, std::vector<unsigned>> out;
        for (std::int64_t f : factors_) {
            for (auto [p, e] : factorize(static_cast<std::uint64_t>(f))) out[p].push_back(e);
        }
        for (auto& [p, exps] : out) std::sort(exps.begin(), exps.end());
        return out;
    }

    std::string str() const {
        if (factors_.empty()) return "1";
        std::ostringstream os;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i) os << ",";
            os << factors_[i];
        }
        return os.str();
    }

private:
    void init() {
        order_ = 1;
        for (std::int64_t f : factors_) {
            if (order_ > (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(f))
                throw std::overflow_error("group order exceeds supported range");
            order_ *= static_cast<std::uint64_t>(f);
        }
        strides_.assign(factors_.size(), 1);
        for (std::size_t i = factors_.size(); i-- > 1;) {
            strides_[i - 1] = strides_[i] * static_cast<std::uint64_t>(factors_[i]);
        }
    }

    void check_arity(const GroupElement& x) const {
        if (x.size() != factors_.size())
            throw std::invalid_argument("element arity does not match group rank");
    }

    std::vector<std::int64_t> factors_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t order_ = 1;
};

inline FiniteAbelianGroup recombine_primary(const std::map<std::uint64_t, std::vector<unsigned>>& primary) {
    auto copy = primary;
    return FiniteAbelianGroup::from_primary(std::move(copy));
}

// All abelian groups of order n, via exponent partitions per prime.
inline std::vector<FiniteAbelianGroup> abelian_groups_of_order(std::uint64_t n) {
    if (n == 0) throw std::domain_error("abelian_groups_of_order(0)");
    if (n == 1) return {FiniteAbelianGroup::trivial()};
    std::vector<std::vector<std::vector<unsigned>>> per_prime_partitions;
    std::vector<std::uint64_t> primes;
    for (auto [p, e] : factorize(n)) {
        std::vector<std::vector<unsigned>> parts;
        std::vector<unsigned> cur;
        // Ascending partitions of e.
        auto rec = [&](auto&& self, unsigned remaining, unsigned minpart) -> void {
            if (remaining == 0) {
                parts.push_back(cur);
                return;
            }
            for (unsigned k = minpart; k <= remaining; ++k) {
                cur.push_back(k);
                self(self, remaining - k, k);
                cur.pop_back();
            }
        };
        rec(rec, e, 1);
        per_prime_partitions.push_back(std::move(parts));
        primes.push_back(p);
    }
    std::vector<FiniteAbelianGroup> out;
    std::vector<std::size_t> pick(primes.size(), 0);
    for (;;) {
        std::map<std::uint64_t, std::vector<unsigned>> primary;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            primary[primes[i]] = per_prime_partitions[i][pick[i]];
        }
        out.push_back(FiniteAbelianGroup::from_primary(std::move(primary)));
        std::size_t i = 0;
        while (i < pick.size()) {
            if (++pick[i] < per_prime_partitions[i].size()) break;
            pick[i] = 0;
            ++i;
        }
        if (i == pick.size()) break;
    }
    return out;
}

/**
 * A subgroup given by generators. For parents of order <= kMaterializeLimit
 * the member set is kept as sorted element indices; larger subgroups carry
 * only the generators and their invariant factors.
 */
class Subgroup {
public:
    Subgroup(FiniteAbelianGroup parent,
             std::vector<GroupElement> generators,
             std::vector<std::int64_t> invariant_factors,
             std::uint64_t order,
             std::optional<std::vector<std::uint64_t>> members)
        : parent_(std::move(parent)),
          generators_(std::move(generators)),
          invariant_factors_(std::move(invariant_factors)),
          order_(order),
          members_(std::move(members)) {}

    const FiniteAbelianGroup& parent() const { return parent_; }
    const std::vector<GroupElement>& generators() const { return generators_; }
    const std::vector<std::int64_t>& invariant_factors() const { return invariant_factors_; }
    std::uint64_t order() const { return order_; }
    bool is_full() const { return order_ == parent_.order(); }
    bool is_trivial() const { return order_ == 1; }
    bool materialized() const { return members_.has_value(); }

    const std::vector<std::uint64_t>& member_indices() const {
        if (!members_) throw std::logic_error("subgroup is not materialized");
        return *members_;
    }

    std::vector<GroupElement> members() const {
        std::vector<GroupElement> out;
        out.reserve(member_indices().size());
        for (auto idx : member_indices()) out.push_back(parent_.element_at(idx));
        return out;
    }

    bool contains(const GroupElement& x) const {
        auto idx = parent_.index_of(parent_.reduce(x));
        const auto& m = member_indices();
        return std::binary_search(m.begin(), m.end(), idx);
    }

    bool same_members(const Subgroup& o) const {
        return member_indices() == o.member_indices();
    }

private:
    FiniteAbelianGroup parent_;
    std::vector<GroupElement> generators_;
    std::vector<std::int64_t> invariant_factors_;
    std::uint64_t order_;
    std::optional<std::vector<std::uint64_t>> members_;
};

namespace detail {

// Invariant factors of the subgroup generated by `gens`, computed from the
// integer kernel of the presentation map Z^k -> G.
inline std::vector<std::int64_t> subgroup_factors_by_presentation(
    const FiniteAbelianGroup& g, const std::vector<GroupElement>& gens) {
    if (gens.empty()) return {};
    const std::size_t k = gens.size();
    const std::size_t t = g.rank();
    // Rows: coordinates of relations; the map sends c in Z^(k+t) to
    // sum c_j gen_j + sum c_(k+i) n_i e_i in Z^t.
    IntMatrix w(t, std::vector<long long>(k + t, 0));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < t; ++i) w[i][j] = gens[j][i];
    }
    for (std::size_t i = 0; i < t; ++i) w[i][k + i] = g.invariant_factors()[i];
    IntMatrix kernel = integer_kernel_basis(w);
    IntMatrix rel;
    for (const auto& row : kernel) {
        rel.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k));
    }
    auto diag = smith_diagonal(rel);
    std::vector<std::int64_t> factors;
    for (long long d : diag) {
        if (d < 0) d = -d;
        if (d == 0) throw std::logic_error("subgroup presentation has infinite quotient");
        if (d > 1) factors.push_back(d);
    }
    std::sort(factors.begin(), factors.end());
    return factors;
}

}  // namespace detail

// Smallest subgroup of g containing elems.
inline Subgroup subgroup_generated(const FiniteAbelianGroup& g, const std::vector<GroupElement>& elems) {
    std::vector<GroupElement> gens;
    gens.reserve(elems.size());
    for (const auto& e : elems) {
        auto r = g.reduce(e);
        if (!g.is_identity(r)) gens.push_back(std::move(r));
    }
    std::vector<std::int64_t> factors = detail::subgroup_factors_by_presentation(g, gens);
    std::uint64_t order = 1;
    for (auto f : factors) order *= static_cast<std::uint64_t>(f);

    std::optional<std::vector<std::uint64_t>> members;
    if (g.enumerable()) {
        std::vector<bool> seen(g.order(), false);
        std::vector<std::uint64_t> closure{0};
        seen[0] = true;
        std::vector<std::uint64_t> gen_idx;
        for (const auto& e : gens) gen_idx.push_back(g.index_of(e));
        for (std::size_t head = 0; head < closure.size(); ++head) {
            for (auto gi : gen_idx) {
                std::uint64_t nxt = g.index_add(closure[head], gi);
                if (!seen[nxt]) {
                    seen[nxt] = true;
                    closure.push_back(nxt);
                }
            }
        }
        std::sort(closure.begin(), closure.end());
        if (closure.size() != order)
            throw std::logic_error("subgroup order mismatch between closure and presentation");
        members = std::move(closure);
    }
    return Subgroup(g, std::move(gens), std::move(factors), order, std::move(members));
}

inline Subgroup trivial_subgroup(const FiniteAbelianGroup& g) {
    return subgroup_generated(g, {});
}

inline Subgroup full_subgroup(const FiniteAbelianGroup& g) {
    return subgroup_generated(g, g.generators());
}

// The complete duplicate-free list of cyclic subgroups of order f.
inline std::vector<Subgroup> cyclic_subgroups_of_order(const FiniteAbelianGroup& g, std::int64_t f) {
    if (f < 1) throw std::domain_error("subgroup order must be >= 1");
    if (f == 1) return {trivial_subgroup(g)};
    if (g.is_cyclic()) {
        std::int64_t n = g.is_trivial() ? 1 : g.invariant_factors()[0];
        if (n % f != 0) return {};
        GroupElement gen{n / f};
        return {subgroup_generated(g, {gen})};
    }
    if (!g.enumerable())
        throw std::domain_error("cyclic subgroup inventory needs an enumerable group");
    std::vector<Subgroup> out;
    std::vector<std::vector<std::uint64_t>> seen_member_sets;
    for (std::uint64_t idx = 0; idx < g.order(); ++idx) {
        GroupElement x = g.element_at(idx);
        if (g.element_order(x) != f) continue;
        Subgroup h = subgroup_generated(g, {x});
        if (std::find(seen_member_sets.begin(), seen_member_sets.end(), h.member_indices()) ==
            seen_member_sets.end()) {
            seen_member_sets.push_back(h.member_indices());
            out.push_back(std::move(h));
        }
    }
    return out;
}

/**
 * Transversal of G/H with |G|/|H| elements, one per coset.
 *
 * When |H| and |G|/|H| are coprime the unique complement subgroup (the
 * s-torsion, s = |G|/|H|) exists and is returned as the transversal.
 * Otherwise each coset is represented by its lexicographically least
 * coordinate vector.
 */
inline std::vector<GroupElement> coset_representatives(const FiniteAbelianGroup& g, const Subgroup& h) {
    if (h.order() == 0 || g.order() % h.order() != 0)
        throw std::invalid_argument("subgroup order does not divide group order");
    const std::uint64_t r = h.order();
    const std::uint64_t s = g.order() / r;
    if (std::gcd(r, s) == 1) {
        // Every order-r subgroup is the full r-torsion here, so the s-torsion
        // is a complement meeting each coset exactly once.
        std::vector<GroupElement> reps;
        if (!g.enumerable()) throw std::domain_error("coset transversal needs an enumerable group");
        for (std::uint64_t idx = 0; idx < g.order(); ++idx) {
            GroupElement x = g.element_at(idx);
            if (g.is_identity(g.scale(static_cast<std::int64_t>(s), x))) reps.push_back(std::move(x));
        }
        if (reps.size() != s) throw std::logic_error("complement subgroup has unexpected order");
        return reps;
    }
    if (!g.enumerable()) throw std::domain_error("coset transversal needs an enumerable group");
    std::vector<bool> covered(g.order(), false);
    std::vector<GroupElement> reps;
    for (std::uint64_t idx = 0; idx < g.order(); ++idx) {
        if (covered[idx]) continue;
        reps.push_back(g.element_at(idx));
        for (auto m : h.member_indices()) covered[g.index_add(idx, m)] = true;
    }
    if (reps.size() != s) throw std::logic_error("transversal has unexpected size");
    return reps;
}

// Parses "2,6" style cyclic-order literals; whitespace tolerated.
inline std::vector<std::int64_t> parse_cyclic_orders(const std::string& text) {
    std::vector<std::int64_t> out;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ',')) {
        std::size_t a = token.find_first_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty group factor");
        std::size_t b = token.find_last_not_of(" \t");
        out.push_back(std::stoll(token.substr(a, b - a + 1)));
    }
    if (out.empty()) throw std::invalid_argument("empty group literal");
    return out;
}

}  // namespace rdeg
