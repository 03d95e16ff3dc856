#pragma once

// Finite split-extension model of a Hilbert-class-field Galois group: a class
// group A acted on by an abelian Galois group G. Residue degrees come from
// element orders on the G side, ideal classes from the A-part of Frobenius
// powers. An action is "valid" when the full group-ring norm annihilates A,
// which is what being a class field over a base with trivial class group
// forces at degree one.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdeg/abelian.hpp"
#include "rdeg/aut.hpp"

namespace rdeg {

/// Homomorphism from an abelian Galois group into Aut(A), one automorphism
/// per Galois generator. The per-element table is built on construction.
class ActionHom {
public:
    ActionHom(FiniteAbelianGroup galois, FiniteAbelianGroup cl, std::vector<Automorphism> images)
        : galois_(std::move(galois)), cl_(std::move(cl)), images_(std::move(images)) {
        if (images_.size() != galois_.rank())
            throw std::invalid_argument("action needs one automorphism per Galois generator");
        for (std::size_t i = 0; i < images_.size(); ++i) {
            if (images_[i].perm.size() != cl_.order())
                throw std::invalid_argument("automorphism acts on the wrong group");
            std::uint64_t ord = images_[i].order();
            if (static_cast<std::uint64_t>(galois_.invariant_factors()[i]) % ord != 0)
                throw std::invalid_argument("generator image order does not divide generator order");
        }
        for (std::size_t i = 0; i < images_.size(); ++i) {
            for (std::size_t j = i + 1; j < images_.size(); ++j) {
                if (images_[i].compose(images_[j]).perm != images_[j].compose(images_[i]).perm)
                    throw std::invalid_argument("generator images do not commute");
            }
        }
        build_table();
    }

    static ActionHom trivial(const FiniteAbelianGroup& cl, const FiniteAbelianGroup& galois) {
        std::vector<Automorphism> images(galois.rank(), identity_automorphism(cl));
        return ActionHom(galois, cl, images);
    }

    // Images already known to commute with orders dividing the generator
    // orders (enumeration produces exactly those); skips revalidation.
    static ActionHom from_validated(FiniteAbelianGroup galois, FiniteAbelianGroup cl,
                                    std::vector<Automorphism> images) {
        ActionHom h;
        h.galois_ = std::move(galois);
        h.cl_ = std::move(cl);
        h.images_ = std::move(images);
        h.build_table();
        return h;
    }

    const FiniteAbelianGroup& galois() const { return galois_; }
    const FiniteAbelianGroup& cl() const { return cl_; }
    const std::vector<Automorphism>& generator_images() const { return images_; }

    const Automorphism& at_index(std::uint64_t gidx) const { return table_[gidx]; }
    const Automorphism& at(const GroupElement& g) const {
        return table_[galois_.index_of(galois_.reduce(g))];
    }

    GroupElement act(const GroupElement& g, const GroupElement& a) const {
        return cl_.element_at(at(g).apply(static_cast<std::uint32_t>(cl_.index_of(cl_.reduce(a)))));
    }

    // The norm endomorphism sum over all of G must vanish on A.
    bool satisfies_norm_constraint() const {
        for (std::size_t k = 0; k < cl_.rank(); ++k) {
            GroupElement gen(cl_.rank(), 0);
            gen[k] = 1;
            GroupElement acc = cl_.identity();
            std::uint32_t gen_idx = static_cast<std::uint32_t>(cl_.index_of(gen));
            for (std::uint64_t gidx = 0; gidx < galois_.order(); ++gidx) {
                acc = cl_.add(acc, cl_.element_at(table_[gidx].apply(gen_idx)));
            }
            if (!cl_.is_identity(acc)) return false;
        }
        return true;
    }

    std::string describe() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < images_.size(); ++i) {
            if (i) os << ";";
            os << "g" << (i + 1) << "->(";
            for (std::size_t k = 0; k < images_[i].gen_images.size(); ++k) {
                if (k) os << "|";
                GroupElement e = cl_.element_at(images_[i].gen_images[k]);
                for (std::size_t c = 0; c < e.size(); ++c) {
                    if (c) os << ",";
                    os << e[c];
                }
            }
            os << ")";
        }
        if (images_.empty()) os << "(trivial Galois group)";
        return os.str();
    }

private:
    ActionHom() = default;

    void build_table() {
        if (!galois_.enumerable())
            throw std::domain_error("action table needs an enumerable Galois group");
        const std::uint64_t n = galois_.order();
        table_.clear();
        table_.reserve(n);
        table_.push_back(identity_automorphism(cl_));
        if (n == 1) return;
        const std::size_t t = galois_.rank();
        std::vector<std::uint64_t> strides(t, 1);
        for (std::size_t i = t; i-- > 1;)
            strides[i - 1] = strides[i] * static_cast<std::uint64_t>(galois_.invariant_factors()[i]);
        for (std::uint64_t idx = 1; idx < n; ++idx) {
            std::uint64_t rest = idx;
            for (std::size_t i = 0; i < t; ++i) {
                std::uint64_t digit = rest / strides[i];
                if (digit > 0) {
                    table_.push_back(images_[i].compose(table_[idx - strides[i]]));
                    break;
                }
                rest %= strides[i];
            }
        }
    }

    FiniteAbelianGroup galois_;
    FiniteAbelianGroup cl_;
    std::vector<Automorphism> images_;
    std::vector<Automorphism> table_;
};

/// Element of the split extension A x| G.
struct SdpElement {
    GroupElement a;
    GroupElement g;
    bool operator==(const SdpElement& o) const { return a == o.a && g == o.g; }
};

/**
 * The split extension built from an action: pairs (a, g) with
 * (a1, g1)(a2, g2) = (a1 + psi(g1)(a2), g1 g2).
 */
class SplitExtension {
public:
    explicit SplitExtension(ActionHom action, bool spot_validate = false)
        : action_(std::move(action)) {
        if (spot_validate) validate_axioms();
    }

    const ActionHom& action() const { return action_; }
    const FiniteAbelianGroup& cl() const { return action_.cl(); }
    const FiniteAbelianGroup& galois() const { return action_.galois(); }
    std::uint64_t order() const { return cl().order() * galois().order(); }

    SdpElement identity() const { return {cl().identity(), galois().identity()}; }

    SdpElement at(std::uint64_t idx) const {
        return {cl().element_at(idx / galois().order()), galois().element_at(idx % galois().order())};
    }

    std::uint64_t index_of(const SdpElement& x) const {
        return cl().index_of(x.a) * galois().order() + galois().index_of(x.g);
    }

    SdpElement multiply(const SdpElement& x, const SdpElement& y) const {
        return {cl().add(x.a, action_.act(x.g, y.a)), galois().add(x.g, y.g)};
    }

    SdpElement inverse(const SdpElement& x) const {
        GroupElement ginv = galois().negate(x.g);
        return {action_.act(ginv, cl().negate(x.a)), ginv};
    }

    SdpElement power(SdpElement x, std::uint64_t k) const {
        SdpElement r = identity();
        while (k != 0) {
            if (k & 1) r = multiply(r, x);
            x = multiply(x, x);
            k >>= 1;
        }
        return r;
    }

    // Index arithmetic: the identity has index 0; no temporaries.
    std::uint64_t multiply_index(std::uint64_t x, std::uint64_t y) const {
        const std::uint64_t ng = galois().order();
        std::uint64_t a1 = x / ng, g1 = x % ng;
        std::uint64_t a2 = y / ng, g2 = y % ng;
        std::uint64_t a = cl().index_add(a1, action_.at_index(g1).perm[a2]);
        return a * ng + galois().index_add(g1, g2);
    }

    std::uint64_t element_order_index(std::uint64_t x) const {
        std::uint64_t cur = x;
        std::uint64_t ord = 1;
        while (cur != 0) {
            cur = multiply_index(cur, x);
            ++ord;
            if (ord > order()) throw std::logic_error("element order exceeded group order");
        }
        return ord;
    }

    std::uint64_t element_order(const SdpElement& x) const {
        return element_order_index(index_of({cl().reduce(x.a), galois().reduce(x.g)}));
    }

private:
    void validate_axioms() const {
        const std::uint64_t n = order();
        std::uint64_t step = n <= 20 ? 1 : n / 17 + 1;
        for (std::uint64_t i = 0; i < n; i += step) {
            SdpElement x = at(i);
            if (!(multiply(x, identity()) == x) || !(multiply(identity(), x) == x))
                throw std::logic_error("identity axiom failed");
            SdpElement xi = inverse(x);
            if (!(multiply(x, xi) == identity()))
                throw std::logic_error("inverse axiom failed");
            for (std::uint64_t j = 0; j < n; j += step) {
                for (std::uint64_t k = 0; k < n; k += step) {
                    SdpElement y = at(j), z = at(k);
                    if (!(multiply(multiply(x, y), z) == multiply(x, multiply(y, z))))
                        throw std::logic_error("associativity failed");
                }
            }
        }
    }

    ActionHom action_;
};

inline SplitExtension semidirect_product(const FiniteAbelianGroup& a, const FiniteAbelianGroup& g,
                                         const ActionHom& action) {
    if (action.cl() != a || action.galois() != g)
        throw std::invalid_argument("action does not match the requested factors");
    return SplitExtension(action, true);
}

/// Residue degree and ideal class attached to a Frobenius element.
struct FrobeniusClass {
    std::int64_t residue_degree;
    GroupElement ideal_class;
};

// Degree is the order of the G-part; the class is the A-part of tau^degree.
inline FrobeniusClass frobenius_class(const SplitExtension& e, const SdpElement& tau) {
    std::int64_t degree = e.galois().element_order(tau.g);
    SdpElement p = e.power(tau, static_cast<std::uint64_t>(degree));
    if (!e.galois().is_identity(p.g)) throw std::logic_error("Frobenius power left the kernel");
    return {degree, p.a};
}

/**
 * Subgroup of A generated by the ideal classes of all elements whose G-part
 * has order f, closed under the conjugation action of G on A.
 */
inline Subgroup degree_f_class_subgroup(const SplitExtension& e, std::int64_t f) {
    if (f < 1) throw std::domain_error("residue degree must be >= 1");
    const auto& a = e.cl();
    const auto& g = e.galois();
    // The class of (x, tau) is linear in x, so the classes realized over one
    // tau form the image of the endomorphism  x -> sum_j psi(tau^j)(x); its
    // generator images generate that image subgroup.
    std::set<std::uint64_t> gens;
    for (std::uint64_t gidx = 0; gidx < g.order(); ++gidx) {
        if (g.element_order(g.element_at(gidx)) != f) continue;
        GroupElement tau = g.element_at(gidx);
        for (std::size_t k = 0; k < a.rank(); ++k) {
            GroupElement gen(a.rank(), 0);
            gen[k] = 1;
            FrobeniusClass fc = frobenius_class(e, {gen, tau});
            gens.insert(a.index_of(fc.ideal_class));
        }
    }
    // Conjugation closure; for abelian Galois groups this fixes the set.
    for (;;) {
        std::set<std::uint64_t> extra;
        for (std::uint64_t cidx : gens) {
            for (std::uint64_t gidx = 0; gidx < g.order(); ++gidx) {
                std::uint64_t img = e.action().at_index(gidx).apply(static_cast<std::uint32_t>(cidx));
                if (!gens.count(img)) extra.insert(img);
            }
        }
        if (extra.empty()) break;
        gens.insert(extra.begin(), extra.end());
    }
    std::vector<GroupElement> gen_elems;
    for (std::uint64_t idx : gens) gen_elems.push_back(a.element_at(idx));
    return subgroup_generated(a, gen_elems);
}

namespace detail {

// Streams every commuting generator-image tuple for homomorphisms
// G -> Aut(A), as pointers into the enumerated automorphism list. The
// heavier ActionHom carrier is layered on top.
template <typename Fn>
std::uint64_t for_each_action_tuple(const FiniteAbelianGroup& a, const FiniteAbelianGroup& g,
                                    std::uint64_t ceiling, Fn&& fn) {
    const std::size_t t = g.rank();
    std::uint64_t count = 0;
    if (t == 0) {
        std::vector<const Automorphism*> none;
        fn(none);
        return 1;
    }
    auto all = enumerate_automorphisms(a, ceiling);
    // Only automorphisms whose order divides some generator order can appear.
    std::vector<Automorphism> auts;
    std::vector<std::uint64_t> orders;
    for (auto& x : all) {
        std::uint64_t ord = x.order();
        bool usable = false;
        for (std::size_t i = 0; i < t && !usable; ++i) {
            if (static_cast<std::uint64_t>(g.invariant_factors()[i]) % ord == 0) usable = true;
        }
        if (usable) {
            auts.push_back(std::move(x));
            orders.push_back(ord);
        }
    }
    all.clear();

    std::vector<std::vector<std::uint32_t>> slot_candidates(t);
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < auts.size(); ++j) {
            if (static_cast<std::uint64_t>(g.invariant_factors()[i]) % orders[j] == 0)
                slot_candidates[i].push_back(static_cast<std::uint32_t>(j));
        }
    }

    // Pairwise commuting bitmap over the candidate pool, checked elementwise
    // without temporaries; the search then probes bits instead of composing.
    // A single-generator domain needs no commuting constraints at all.
    const std::size_t pool = auts.size();
    const std::size_t words = (pool + 63) / 64;
    std::vector<std::uint64_t> commute;
    if (t >= 2) {
        commute.assign(pool * words, 0);
        auto commutes_at = [&](std::size_t i, std::size_t j) {
            const auto& pi = auts[i].perm;
            const auto& pj = auts[j].perm;
            for (std::size_t x = 0; x < pi.size(); ++x) {
                if (pi[pj[x]] != pj[pi[x]]) return false;
            }
            return true;
        };
        for (std::size_t i = 0; i < pool; ++i) {
            commute[i * words + i / 64] |= std::uint64_t(1) << (i % 64);
            for (std::size_t j = i + 1; j < pool; ++j) {
                if (commutes_at(i, j)) {
                    commute[i * words + j / 64] |= std::uint64_t(1) << (j % 64);
                    commute[j * words + i / 64] |= std::uint64_t(1) << (i % 64);
                }
            }
        }
    }

    std::vector<std::uint32_t> chosen(t);
    std::vector<const Automorphism*> tuple(t);
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == t) {
            for (std::size_t i = 0; i < t; ++i) tuple[i] = &auts[chosen[i]];
            fn(static_cast<const std::vector<const Automorphism*>&>(tuple));
            ++count;
            return;
        }
        for (std::uint32_t j : slot_candidates[depth]) {
            bool ok = true;
            for (std::size_t i = 0; i < depth && ok; ++i) {
                ok = (commute[chosen[i] * words + j / 64] >> (j % 64)) & 1;
            }
            if (!ok) continue;
            chosen[depth] = j;
            self(self, depth + 1);
        }
    };
    rec(rec, 0);
    return count;
}

// Streams every homomorphism G -> Aut(A); with require_norm only the actions
// whose norm endomorphism vanishes reach the callback.
template <typename Fn>
std::uint64_t for_each_action_impl(const FiniteAbelianGroup& a, const FiniteAbelianGroup& g,
                                   bool require_norm, std::uint64_t ceiling, Fn&& fn) {
    std::uint64_t count = 0;
    for_each_action_tuple(a, g, ceiling, [&](const std::vector<const Automorphism*>& tuple) {
        std::vector<Automorphism> images;
        images.reserve(tuple.size());
        for (const Automorphism* x : tuple) images.push_back(*x);
        ActionHom h = ActionHom::from_validated(g, a, std::move(images));
        if (!require_norm || h.satisfies_norm_constraint()) {
            fn(std::move(h));
            ++count;
        }
    });
    return count;
}

}  // namespace detail

template <typename Fn>
std::uint64_t for_each_action(const FiniteAbelianGroup& a, const FiniteAbelianGroup& g,
                              bool require_norm, Fn&& fn, std::uint64_t ceiling = 1000000) {
    return detail::for_each_action_impl(a, g, require_norm, ceiling, std::forward<Fn>(fn));
}

// All well-defined actions, valid or not.
inline std::vector<ActionHom> all_actions(const FiniteAbelianGroup& a, const FiniteAbelianGroup& g,
                                          std::uint64_t ceiling = 1000000) {
    std::vector<ActionHom> out;
    for_each_action(a, g, false, [&](const ActionHom& h) { out.push_back(h); }, ceiling);
    return out;
}

// Actions satisfying the norm constraint; may be empty.
inline std::vector<ActionHom> valid_actions(const FiniteAbelianGroup& a, const FiniteAbelianGroup& g,
                                            std::uint64_t ceiling = 1000000) {
    std::vector<ActionHom> out;
    for_each_action(a, g, true, [&](const ActionHom& h) { out.push_back(h); }, ceiling);
    return out;
}

// True iff the degree-f classes generate all of A under every valid action.
inline bool verify_R_membership_sim(const FiniteAbelianGroup& a, const FiniteAbelianGroup& g,
                                    std::int64_t f, std::uint64_t ceiling = 1000000) {
    bool ok = true;
    for_each_action(a, g, true, [&](const ActionHom& h) {
        if (!ok) return;
        SplitExtension e(h);
        if (!degree_f_class_subgroup(e, f).is_full()) ok = false;
    }, ceiling);
    return ok;
}

inline bool verify_R_membership_sim(const std::vector<ActionHom>& actions, std::int64_t f) {
    for (const auto& h : actions) {
        SplitExtension e(h);
        if (!degree_f_class_subgroup(e, f).is_full()) return false;
    }
    return true;
}

/**
 * One streaming pass over Aut(A) for a batch of cyclic degrees. For every n
 * in `degrees` the callback receives each norm-valid action (n, psi) exactly
 * once; the returned map carries the universal-kernel order per degree.
 * Nothing is stored, so degree batches with millions of valid actions are
 * fine.
 */
template <typename Fn>
std::map<std::uint64_t, std::uint64_t> scan_cyclic_actions_stream(
    const FiniteAbelianGroup& a, const std::vector<std::uint64_t>& degrees, std::uint64_t ceiling,
    Fn&& fn) {
    BigUint predicted = aut_order(a);
    if (predicted > BigUint{ceiling})
        throw TooLargeError("action scan over " + predicted.str() + " automorphisms exceeds ceiling " +
                            std::to_string(ceiling));
    const std::uint64_t m = a.order();
    const std::size_t t = a.rank();
    std::map<std::uint64_t, std::uint64_t> lcm_orders;
    std::uint64_t max_degree = 0;
    for (auto n : degrees) {
        lcm_orders[n] = 1;
        max_degree = std::max(max_degree, n);
    }

    std::vector<std::uint32_t> factors(t), strides(t, 1);
    for (std::size_t i = 0; i < t; ++i)
        factors[i] = static_cast<std::uint32_t>(a.invariant_factors()[i]);
    for (std::size_t i = t; i-- > 1;) strides[i - 1] = strides[i] * factors[i];
    std::vector<std::uint32_t> coords(m * t, 0);
    for (std::uint64_t idx = 1; idx < m; ++idx) {
        const std::uint32_t* prev = &coords[(idx - 1) * t];
        std::uint32_t* cur = &coords[idx * t];
        std::uint8_t carry = 1;
        for (std::size_t k = t; k-- > 0;) {
            std::uint32_t v = prev[k] + carry;
            carry = v == factors[k];
            cur[k] = carry ? 0 : v;
        }
    }

    std::vector<std::uint32_t> stamp(m, 0);
    std::uint32_t epoch = 0;
    std::vector<std::uint32_t> partial(t * t), walker(t);

    for_each_automorphism(a, [&](const Automorphism& alpha) {
        // Order from cycle lengths; bail once it cannot divide any degree.
        ++epoch;
        std::uint64_t d = 1;
        for (std::uint32_t i = 0; i < m && d <= max_degree; ++i) {
            if (stamp[i] == epoch) continue;
            std::uint64_t len = 0;
            std::uint32_t j = i;
            while (stamp[j] != epoch) {
                stamp[j] = epoch;
                j = alpha.perm[j];
                ++len;
            }
            d = lcm_u64(d, len);
        }
        if (d > max_degree) return;
        bool relevant = false;
        for (auto n : degrees) {
            if (n % d == 0) {
                relevant = true;
                lcm_orders[n] = lcm_u64(lcm_orders[n], d);
            }
        }
        if (!relevant) return;

        // S_d(e_k) = sum_{j<d} alpha^j(e_k), accumulated coordinatewise.
        std::fill(partial.begin(), partial.end(), 0);
        for (std::size_t k = 0; k < t; ++k) walker[k] = strides[k];  // index of e_k
        for (std::uint64_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < t; ++k) {
                const std::uint32_t* c = &coords[static_cast<std::size_t>(walker[k]) * t];
                for (std::size_t i = 0; i < t; ++i) {
                    std::uint32_t s = partial[k * t + i] + c[i];
                    partial[k * t + i] = s >= factors[i] ? s - factors[i] : s;
                }
                walker[k] = alpha.perm[walker[k]];
            }
        }
        for (auto n : degrees) {
            if (n % d != 0) continue;
            std::uint64_t q = n / d;
            bool zero = true;
            for (std::size_t k = 0; k < t && zero; ++k) {
                for (std::size_t i = 0; i < t && zero; ++i) {
                    if (static_cast<std::uint64_t>(partial[k * t + i]) * q % factors[i] != 0)
                        zero = false;
                }
            }
            if (zero) {
                fn(n, ActionHom::from_validated(FiniteAbelianGroup::cyclic(static_cast<std::int64_t>(n)),
                                                a, std::vector<Automorphism>{alpha}));
            }
        }
    });

    std::map<std::uint64_t, std::uint64_t> kernel_order;
    for (auto n : degrees) kernel_order[n] = n / lcm_orders[n];
    return kernel_order;
}

/// Collecting variant of the streaming scan, for small batches.
struct CyclicActionScan {
    std::map<std::uint64_t, std::vector<ActionHom>> valid;
    std::map<std::uint64_t, std::uint64_t> kernel_order;
};

inline CyclicActionScan scan_cyclic_actions(const FiniteAbelianGroup& a,
                                            const std::vector<std::uint64_t>& degrees,
                                            std::uint64_t ceiling = 1000000) {
    CyclicActionScan scan;
    for (auto n : degrees) scan.valid[n] = {};
    scan.kernel_order = scan_cyclic_actions_stream(
        a, degrees, ceiling,
        [&](std::uint64_t n, ActionHom h) { scan.valid[n].push_back(std::move(h)); });
    return scan;
}

/// Finite group as a validated multiplication table.
class CayleyGroup {
public:
    explicit CayleyGroup(std::vector<std::vector<std::uint32_t>> table) : mul_(std::move(table)) {
        const std::size_t m = mul_.size();
        if (m == 0) throw std::invalid_argument("empty multiplication table");
        for (const auto& row : mul_) {
            if (row.size() != m) throw std::invalid_argument("multiplication table is not square");
            for (auto v : row)
                if (v >= m) throw std::invalid_argument("table entry out of range");
        }
        bool found = false;
        for (std::uint32_t e = 0; e < m; ++e) {
            bool ok = true;
            for (std::uint32_t x = 0; x < m && ok; ++x) ok = mul_[e][x] == x && mul_[x][e] == x;
            if (ok) {
                id_ = e;
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("table has no identity");
        inv_.resize(m);
        for (std::uint32_t x = 0; x < m; ++x) {
            bool has = false;
            for (std::uint32_t y = 0; y < m; ++y) {
                if (mul_[x][y] == id_ && mul_[y][x] == id_) {
                    inv_[x] = y;
                    has = true;
                    break;
                }
            }
            if (!has) throw std::invalid_argument("table element has no inverse");
        }
        // Full associativity up to a size cap, sampled above it.
        std::size_t step = m <= 300 ? 1 : m / 97 + 1;
        for (std::size_t x = 0; x < m; x += step)
            for (std::size_t y = 0; y < m; y += step)
                for (std::size_t z = 0; z < m; z += step)
                    if (mul_[mul_[x][y]][z] != mul_[x][mul_[y][z]])
                        throw std::invalid_argument("table is not associative");
    }

    static CayleyGroup from_abelian(const FiniteAbelianGroup& g) {
        if (!g.enumerable()) throw std::domain_error("group too large for a Cayley table");
        std::vector<std::vector<std::uint32_t>> t(g.order(), std::vector<std::uint32_t>(g.order()));
        for (std::uint64_t i = 0; i < g.order(); ++i)
            for (std::uint64_t j = 0; j < g.order(); ++j)
                t[i][j] = static_cast<std::uint32_t>(g.index_add(i, j));
        return CayleyGroup(std::move(t));
    }

    static CayleyGroup from_split_extension(const SplitExtension& e) {
        std::uint64_t n = e.order();
        if (n > FiniteAbelianGroup::kMaterializeLimit)
            throw std::domain_error("extension too large for a Cayley table");
        std::vector<std::vector<std::uint32_t>> t(n, std::vector<std::uint32_t>(n));
        for (std::uint64_t i = 0; i < n; ++i)
            for (std::uint64_t j = 0; j < n; ++j)
                t[i][j] = static_cast<std::uint32_t>(e.index_of(e.multiply(e.at(i), e.at(j))));
        return CayleyGroup(std::move(t));
    }

    std::size_t size() const { return mul_.size(); }
    std::uint32_t identity() const { return id_; }
    std::uint32_t mul(std::uint32_t x, std::uint32_t y) const { return mul_[x][y]; }
    std::uint32_t inverse(std::uint32_t x) const { return inv_[x]; }

    std::uint64_t order_of(std::uint32_t x) const {
        std::uint64_t ord = 1;
        std::uint32_t cur = x;
        while (cur != id_) {
            cur = mul_[cur][x];
            ++ord;
        }
        return ord;
    }

    std::vector<std::uint32_t> conjugacy_class(std::uint32_t x) const {
        std::set<std::uint32_t> cls;
        for (std::uint32_t s = 0; s < mul_.size(); ++s) cls.insert(mul_[mul_[s][x]][inv_[s]]);
        return {cls.begin(), cls.end()};
    }

private:
    std::vector<std::vector<std::uint32_t>> mul_;
    std::vector<std::uint32_t> inv_;
    std::uint32_t id_ = 0;
};

/// g = g'' * g' * h with g'' from a transversal of H1 in H, g' from a
/// transversal of H2 in H1, h in H2.
struct NestedCosetEntry {
    std::uint32_t g, g_prime, g_double_prime, h;
};

struct NestedCosetDecomposition {
    std::vector<std::uint32_t> t1;  // transversal of H2 in H1
    std::vector<std::uint32_t> t2;  // transversal of H1 in H
    std::vector<NestedCosetEntry> entries;
};

namespace detail {

inline bool is_subgroup_of(const CayleyGroup& h, const std::vector<std::uint32_t>& members) {
    std::set<std::uint32_t> s(members.begin(), members.end());
    if (!s.count(h.identity())) return false;
    for (auto x : members)
        for (auto y : members)
            if (!s.count(h.mul(x, y))) return false;
    return true;
}

}  // namespace detail

inline NestedCosetDecomposition nested_coset_decompose(const CayleyGroup& h,
                                                       const std::vector<std::uint32_t>& h1,
                                                       const std::vector<std::uint32_t>& h2,
                                                       const std::vector<std::uint32_t>& t) {
    std::set<std::uint32_t> s1(h1.begin(), h1.end()), s2(h2.begin(), h2.end());
    if (!detail::is_subgroup_of(h, h1) || !detail::is_subgroup_of(h, h2))
        throw std::invalid_argument("invalid chain: member lists are not subgroups");
    for (auto x : h2)
        if (!s1.count(x)) throw std::invalid_argument("invalid chain: H2 is not contained in H1");
    if (h1.size() % h2.size() != 0 || h.size() % h1.size() != 0)
        throw std::invalid_argument("invalid chain: orders do not divide");

    // T must meet each left coset of H2 exactly once.
    if (t.size() * h2.size() != h.size()) throw std::invalid_argument("transversal has wrong size");
    std::vector<bool> covered(h.size(), false);
    for (auto z : t) {
        for (auto x : h2) {
            std::uint32_t e = h.mul(z, x);
            if (covered[e]) throw std::invalid_argument("transversal meets a coset twice");
            covered[e] = true;
        }
    }

    NestedCosetDecomposition out;
    for (auto z : t)
        if (s1.count(z)) out.t1.push_back(z);

    auto h1_coset_key = [&](std::uint32_t g) {
        std::uint32_t best = h.mul(g, h1[0]);
        for (auto x : h1) best = std::min(best, h.mul(g, x));
        return best;
    };
    std::set<std::uint32_t> seen;
    for (auto z : t) {
        std::uint32_t key = h1_coset_key(z);
        if (!seen.count(key)) {
            seen.insert(key);
            out.t2.push_back(z);
        }
    }

    for (auto g : t) {
        std::uint32_t key = h1_coset_key(g);
        std::uint32_t gpp = h.identity();
        bool found = false;
        for (auto z : out.t2) {
            if (h1_coset_key(z) == key) {
                gpp = z;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("missing H1 coset representative");
        std::uint32_t x = h.mul(h.inverse(gpp), g);
        if (!s1.count(x)) throw std::logic_error("factor left H1");
        std::uint32_t gp = h.identity();
        found = false;
        for (auto z : out.t1) {
            std::uint32_t y = h.mul(h.inverse(z), x);
            if (s2.count(y)) {
                gp = z;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("missing H2 coset representative");
        std::uint32_t hh = h.mul(h.inverse(gp), x);
        NestedCosetEntry entry{g, gp, gpp, hh};
        if (h.mul(h.mul(gpp, gp), hh) != g) throw std::logic_error("decomposition does not recompose");
        out.entries.push_back(entry);
    }
    return out;
}

/// Exact rational, reduced, for density statements.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        std::int64_t g = std::gcd(n, d);
        if (g == 0) return {0, 1};
        n /= g;
        d /= g;
        if (d < 0) {
            n = -n;
            d = -d;
        }
        return {n, d};
    }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    Rational operator+(const Rational& o) const {
        return make(num * o.den + o.num * den, den * o.den);
    }
};

inline Rational cebotarev_density(const CayleyGroup& g, std::uint32_t x) {
    return Rational::make(static_cast<std::int64_t>(g.conjugacy_class(x).size()),
                          static_cast<std::int64_t>(g.size()));
}

inline Rational cebotarev_density(const SplitExtension& e, const SdpElement& tau) {
    std::set<std::uint64_t> cls;
    for (std::uint64_t i = 0; i < e.order(); ++i) {
        SdpElement s = e.at(i);
        cls.insert(e.index_of(e.multiply(e.multiply(s, tau), e.inverse(s))));
    }
    return Rational::make(static_cast<std::int64_t>(cls.size()), static_cast<std::int64_t>(e.order()));
}

}  // namespace rdeg
