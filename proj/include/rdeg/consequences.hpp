#pragma once

// Group-ring annihilators and the derived statements: the transversal sum
// theta_f, its simulated annihilation check, the cyclic-class-group
// impossibility result, torsion rank and exponent bounds, and the
// never-cyclic statement for the class-field top.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "rdeg/abelian.hpp"
#include "rdeg/aut.hpp"
#include "rdeg/criteria.hpp"
#include "rdeg/galois_sim.hpp"

namespace rdeg {

/// Integer combination of elements of a fixed finite abelian group.
class GroupRingElement {
public:
    explicit GroupRingElement(FiniteAbelianGroup group) : group_(std::move(group)) {}

    const FiniteAbelianGroup& group() const { return group_; }

    void add_term(const GroupElement& g, std::int64_t coeff) {
        if (coeff == 0) return;
        std::uint64_t idx = group_.index_of(group_.reduce(g));
        auto it = coeff_.find(idx);
        if (it == coeff_.end()) {
            coeff_[idx] = coeff;
        } else {
            it->second += coeff;
            if (it->second == 0) coeff_.erase(it);
        }
    }

    std::int64_t coefficient(const GroupElement& g) const {
        auto it = coeff_.find(group_.index_of(group_.reduce(g)));
        return it == coeff_.end() ? 0 : it->second;
    }

    const std::map<std::uint64_t, std::int64_t>& terms() const { return coeff_; }

    std::vector<GroupElement> support() const {
        std::vector<GroupElement> out;
        for (const auto& [idx, c] : coeff_) out.push_back(group_.element_at(idx));
        return out;
    }

    std::size_t support_size() const { return coeff_.size(); }

    static GroupRingElement identity_element(const FiniteAbelianGroup& g) {
        GroupRingElement e(g);
        e.add_term(g.identity(), 1);
        return e;
    }

    GroupRingElement operator+(const GroupRingElement& o) const {
        require_same_group(o);
        GroupRingElement r(group_);
        r.coeff_ = coeff_;
        for (const auto& [idx, c] : o.coeff_) {
            r.coeff_[idx] += c;
            if (r.coeff_[idx] == 0) r.coeff_.erase(idx);
        }
        return r;
    }

    // Convolution product over the group operation.
    GroupRingElement operator*(const GroupRingElement& o) const {
        require_same_group(o);
        GroupRingElement r(group_);
        for (const auto& [i, ci] : coeff_) {
            for (const auto& [j, cj] : o.coeff_) {
                std::uint64_t k = group_.index_add(i, j);
                r.coeff_[k] += ci * cj;
            }
        }
        for (auto it = r.coeff_.begin(); it != r.coeff_.end();) {
            it = it->second == 0 ? r.coeff_.erase(it) : std::next(it);
        }
        return r;
    }

private:
    void require_same_group(const GroupRingElement& o) const {
        if (!(group_ == o.group_)) throw std::invalid_argument("group-ring elements over different groups");
    }

    FiniteAbelianGroup group_;
    std::map<std::uint64_t, std::int64_t> coeff_;
};

/**
 * theta_f: the sum over the canonical transversal of G/H_f, where H_f is the
 * intersection of all cyclic subgroups of order f. For cyclic G with
 * gcd(f, |G|/f) = 1 the support is exactly the order-(|G|/f) subgroup.
 */
inline GroupRingElement theta_f(const FiniteAbelianGroup& g, std::int64_t f) {
    auto cyclic_subs = cyclic_subgroups_of_order(g, f);
    if (cyclic_subs.empty())
        throw std::domain_error("no cyclic subgroup of order " + std::to_string(f));
    std::vector<std::uint64_t> intersection = cyclic_subs.front().member_indices();
    for (std::size_t i = 1; i < cyclic_subs.size(); ++i) {
        const auto& other = cyclic_subs[i].member_indices();
        std::vector<std::uint64_t> next;
        std::set_intersection(intersection.begin(), intersection.end(), other.begin(), other.end(),
                              std::back_inserter(next));
        intersection = std::move(next);
    }
    std::vector<GroupElement> elems;
    for (auto idx : intersection) elems.push_back(g.element_at(idx));
    Subgroup hf = subgroup_generated(g, elems);
    GroupRingElement theta(g);
    for (const auto& rep : coset_representatives(g, hf)) theta.add_term(rep, 1);
    return theta;
}

// Sum of coeff(sigma) * psi(sigma)(a) over the support.
inline GroupElement apply_group_ring(const GroupRingElement& theta, const ActionHom& psi,
                                     const GroupElement& a) {
    if (!(theta.group() == psi.galois()))
        throw std::invalid_argument("group-ring element and action have different Galois groups");
    const auto& cl = psi.cl();
    GroupElement acc = cl.identity();
    for (const auto& [gidx, coeff] : theta.terms()) {
        GroupElement image = cl.element_at(
            psi.at_index(gidx).apply(static_cast<std::uint32_t>(cl.index_of(cl.reduce(a)))));
        acc = cl.add(acc, cl.scale(coeff, image));
    }
    return acc;
}

// True iff theta_f kills the degree-f class subgroup under every valid action.
inline bool verify_annihilation_sim(const FiniteAbelianGroup& a, const FiniteAbelianGroup& g,
                                    std::int64_t f, std::uint64_t ceiling = 1000000) {
    GroupRingElement theta = theta_f(g, f);
    bool ok = true;
    for_each_action(a, g, true, [&](const ActionHom& h) {
        if (!ok) return;
        SplitExtension e(h);
        Subgroup classes = degree_f_class_subgroup(e, f);
        for (auto idx : classes.member_indices()) {
            if (!a.is_identity(apply_group_ring(theta, h, a.element_at(idx)))) {
                ok = false;
                return;
            }
        }
    }, ceiling);
    return ok;
}

/// Outcome of one of the derived statements, with its hypothesis transcript.
struct BoundReport {
    std::string tag;
    std::vector<HypothesisLine> transcript;
    std::string conclusion;
    bool conclusive = false;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["statement"] = tag;
        j["conclusive"] = conclusive;
        j["conclusion"] = conclusion;
        j["hypotheses"] = nlohmann::json::array();
        for (const auto& line : transcript) {
            j["hypotheses"].push_back({{"condition", line.condition},
                                       {"witness", line.witness},
                                       {"ok", line.ok}});
        }
        return j;
    }
};

namespace detail {

inline void finish_report(BoundReport& r, std::string conclusion_if_ok,
                          std::string conclusion_if_not = "no conclusion") {
    r.conclusive = std::all_of(r.transcript.begin(), r.transcript.end(),
                               [](const HypothesisLine& l) { return l.ok; });
    r.conclusion = r.conclusive ? std::move(conclusion_if_ok) : std::move(conclusion_if_not);
}

}  // namespace detail

/**
 * No cyclic extension of degree n over the rationals has a cyclic class group
 * of order m, whenever gcd(n, m) = gcd(n, phi(m)) = 1.
 */
inline BoundReport a1_impossible(std::uint64_t n, std::uint64_t m) {
    if (n < 2 || m < 2) throw std::invalid_argument("both arguments must exceed 1");
    BoundReport r;
    r.tag = "A1";
    r.transcript.push_back(detail::gcd_line("n and m are coprime", n, m));
    r.transcript.push_back(detail::gcd_line("n and phi(m) are coprime", n, euler_phi(m)));
    detail::finish_report(r,
                          "no cyclic extension of degree " + std::to_string(n) +
                              " has a cyclic class group of order " + std::to_string(m));
    return r;
}

/**
 * Torsion rank bound: for ell prime to n = prod q_i^{e_i}, if ell divides the
 * class number then the ell-torsion has rank at least
 * min_i ord(ell mod q_i).
 */
inline BoundReport ell_torsion_rank_bound(const std::vector<std::pair<std::uint64_t, unsigned>>& n_factorization,
                                          std::uint64_t ell) {
    if (!is_prime_u64(ell)) throw std::invalid_argument("torsion bound needs a prime");
    if (n_factorization.empty()) throw std::invalid_argument("empty degree factorization");
    BoundReport r;
    r.tag = "A11";
    std::uint64_t s = 0;
    bool first = true;
    std::ostringstream witness;
    for (auto [q, e] : n_factorization) {
        if (!is_prime_u64(q)) throw std::invalid_argument("degree factorization must list primes");
        if (q == ell) throw std::domain_error("unsupported: ell divides n");
        std::uint64_t si = multiplicative_order(ell, q);
        if (!first) witness << ", ";
        witness << "ord(" << ell << " mod " << q << ") = " << si;
        s = first ? si : std::min(s, si);
        first = false;
    }
    r.transcript.push_back({"ell is prime to n and the orders are defined", witness.str(), true});
    r.conclusive = true;
    r.conclusion = "if " + std::to_string(ell) +
                   " divides the class number, the " + std::to_string(ell) +
                   "-torsion contains a subgroup of rank " + std::to_string(s);
    return r;
}

inline BoundReport ell_torsion_rank_bound(std::uint64_t n, std::uint64_t ell) {
    std::vector<std::pair<std::uint64_t, unsigned>> fac = factorize(n);
    return ell_torsion_rank_bound(fac, ell);
}

/**
 * Exponent bound for the degree-f subfield of the ell-th cyclotomic field:
 * with the listed coprimality hypotheses the exponent is at most (ell-1)/f.
 */
inline BoundReport subfield_exponent_bound(std::uint64_t ell, std::uint64_t f, const ClassData& data) {
    if (!is_prime_u64(ell) || ell < 3) throw std::invalid_argument("needs an odd prime");
    BoundReport r;
    r.tag = "A3";
    std::uint64_t n = ell - 1;
    r.transcript.push_back({"f divides ell - 1",
                            std::to_string(f) + " | " + std::to_string(n),
                            f >= 1 && n % f == 0});
    if (!r.transcript.back().ok) {
        detail::finish_report(r, "");
        return r;
    }
    if (data.h == 1) {
        r.transcript.push_back({"class number is 1", "h = 1", true});
        detail::finish_report(r, "exponent of the degree-" + std::to_string(f) +
                                     " subfield class group is at most " + std::to_string(n / f) +
                                     " (vacuous: trivial class group)");
        return r;
    }
    AutProfile profile(data);
    r.transcript.push_back(detail::gcd_line("f and (ell-1)/f are coprime", f, n / f));
    r.transcript.push_back(detail::gcd_line("ell - 1 and h are coprime", n, data.h));
    r.transcript.push_back({"f is coprime to |Aut(Cl)|",
                            "f = " + std::to_string(f) + ", |Aut| over shapes " +
                                profile.aut_orders_str(),
                            profile.aut_order_coprime(f)});
    detail::finish_report(r, "exponent of the degree-" + std::to_string(f) +
                                 " subfield class group is at most " + std::to_string(n / f));
    return r;
}

/**
 * Degree-6 exponent bound: gcd(h, 6) = 1 and 3 not dividing |Aut(Cl)| force
 * the cubic subfield's class group to be an elementary abelian 2-group.
 */
inline BoundReport degree6_exponent_bound(std::uint64_t h, const BigUint& aut_order_value) {
    BoundReport r;
    r.tag = "A2";
    r.transcript.push_back(detail::gcd_line("h and 6 are coprime", h, 6));
    r.transcript.push_back({"3 does not divide |Aut(Cl)|",
                            "|Aut| = " + aut_order_value.str(),
                            gcd_with_big(3, aut_order_value) == 1});
    detail::finish_report(r, "the cubic subfield class group is (Z/2)^s for some s >= 0");
    return r;
}

/**
 * The top of the class-field tower is never cyclic over the rationals once
 * h > 1. Cross-checked in the simulator: no valid action on any class-group
 * shape of order h produces a cyclic extension.
 */
inline BoundReport hilbert_never_cyclic(std::uint64_t n, std::uint64_t h,
                                        std::uint64_t sim_bound = 400) {
    BoundReport r;
    r.tag = "A4";
    r.transcript.push_back({"class number exceeds 1", "h = " + std::to_string(h), h > 1});
    if (h <= 1) {
        r.conclusive = false;
        r.conclusion = "vacuous: trivial class group";
        return r;
    }
    if (n * h <= sim_bound) {
        // A cyclic extension is abelian, and a split extension is abelian only
        // under the trivial action, so that is the one candidate per shape.
        // Where Aut is enumerable the full valid-action sweep is run as well.
        std::uint64_t candidates = 0, cyclic_models = 0, swept = 0;
        auto g = FiniteAbelianGroup::cyclic(static_cast<std::int64_t>(n));
        auto scan_cyclic = [](const SplitExtension& e) {
            for (std::uint64_t i = 0; i < e.order(); ++i) {
                if (e.element_order(e.at(i)) == e.order()) return true;
            }
            return false;
        };
        for (const auto& a : abelian_groups_of_order(h)) {
            ActionHom trivial = ActionHom::trivial(a, g);
            if (trivial.satisfies_norm_constraint()) {
                ++candidates;
                if (scan_cyclic(SplitExtension(trivial))) ++cyclic_models;
            }
            try {
                for (const auto& psi : valid_actions(a, g)) {
                    ++swept;
                    if (scan_cyclic(SplitExtension(psi))) ++cyclic_models;
                }
            } catch (const TooLargeError&) {
                // Shape too large for the full sweep; the trivial-action check
                // above already covers the abelian candidates.
            }
        }
        r.transcript.push_back({"no valid split model of order n*h is cyclic",
                                std::to_string(candidates) + " abelian candidate(s), " +
                                    std::to_string(swept) + " action(s) swept, " +
                                    std::to_string(cyclic_models) + " cyclic",
                                cyclic_models == 0});
    } else {
        r.transcript.push_back({"simulation cross-check",
                                "skipped: n*h exceeds the simulation bound " +
                                    std::to_string(sim_bound),
                                true});
    }
    detail::finish_report(r, "the class-field top of a field with h = " + std::to_string(h) +
                                 " is never cyclic over the rationals");
    return r;
}

/**
 * Plus-part structure: a 2-power plus class number with odd (ell-1)/2, odd
 * minus class number and the coprimality of (ell-1)/2 with phi(h-) force an
 * elementary abelian 2-group.
 */
inline BoundReport real_plus_part_structure(std::uint64_t ell, std::uint64_t h_plus,
                                            std::uint64_t h_minus) {
    if (!is_prime_u64(ell) || ell < 3) throw std::invalid_argument("needs an odd prime");
    BoundReport r;
    r.tag = "PlusPart";
    bool pow2 = h_plus >= 1 && (h_plus & (h_plus - 1)) == 0;
    r.transcript.push_back({"plus class number is a power of 2",
                            "h+ = " + std::to_string(h_plus), pow2});
    r.transcript.push_back({"(ell-1)/2 is odd",
                            "(ell-1)/2 = " + std::to_string((ell - 1) / 2),
                            ((ell - 1) / 2) % 2 == 1});
    r.transcript.push_back({"minus class number is odd",
                            "h- = " + std::to_string(h_minus), h_minus % 2 == 1});
    r.transcript.push_back(
        detail::gcd_line("(ell-1)/2 and phi(h-) are coprime", (ell - 1) / 2, euler_phi(h_minus)));
    if (h_plus == 1) {
        detail::finish_report(r, "vacuous: plus part is trivial");
        return r;
    }
    detail::finish_report(r, "the plus-part class group is (Z/2)^s for some s >= 1");
    return r;
}

}  // namespace rdeg
