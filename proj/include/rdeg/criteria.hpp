#pragma once

// Certification engine: each sufficient criterion for "the class group is
// generated by classes of residue-degree-f primes" becomes a checker that
// validates its hypotheses against ingested class data and emits an auditable
// certificate. Rejections never claim non-membership; they only record that
// this criterion does not apply.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "rdeg/abelian.hpp"
#include "rdeg/aut.hpp"
#include "rdeg/galois_sim.hpp"

namespace rdeg {

enum class GaloisShape { Cyclic, Abelian, Elementary2, PrimePower };

inline std::string shape_name(GaloisShape s) {
    switch (s) {
        case GaloisShape::Cyclic: return "cyclic";
        case GaloisShape::Abelian: return "abelian";
        case GaloisShape::Elementary2: return "elem2";
        case GaloisShape::PrimePower: return "ppow";
    }
    return "?";
}

/// A field as the certification engine sees it: a Galois-group shape over the
/// rationals plus whatever is known about the class group.
struct FieldDescriptor {
    std::string label;
    std::uint64_t degree = 1;
    GaloisShape shape = GaloisShape::Cyclic;
    std::vector<std::int64_t> galois_factors;  // Abelian shape
    std::uint64_t elem2_rank = 0;              // Elementary2 shape
    std::uint64_t ppow_q = 0, ppow_t = 0;      // PrimePower shape
    ClassData class_data;

    static FieldDescriptor cyclic(std::string label, std::uint64_t n, ClassData data) {
        FieldDescriptor f;
        f.label = std::move(label);
        f.degree = n;
        f.shape = GaloisShape::Cyclic;
        f.class_data = std::move(data);
        return f;
    }

    static FieldDescriptor abelian(std::string label, std::vector<std::int64_t> factors, ClassData data) {
        FieldDescriptor f;
        f.label = std::move(label);
        f.shape = GaloisShape::Abelian;
        f.galois_factors = std::move(factors);
        f.degree = FiniteAbelianGroup::from_cyclic_orders(f.galois_factors).order();
        f.class_data = std::move(data);
        return f;
    }

    static FieldDescriptor elementary2(std::string label, std::uint64_t t1, ClassData data) {
        FieldDescriptor f;
        f.label = std::move(label);
        f.shape = GaloisShape::Elementary2;
        f.elem2_rank = t1;
        f.degree = std::uint64_t(1) << t1;
        f.class_data = std::move(data);
        return f;
    }

    static FieldDescriptor prime_power(std::string label, std::uint64_t q, std::uint64_t t, ClassData data) {
        FieldDescriptor f;
        f.label = std::move(label);
        f.shape = GaloisShape::PrimePower;
        f.ppow_q = q;
        f.ppow_t = t;
        f.degree = 1;
        for (std::uint64_t i = 0; i < t; ++i) f.degree *= q;
        f.class_data = std::move(data);
        return f;
    }

    FiniteAbelianGroup galois_group() const {
        switch (shape) {
            case GaloisShape::Cyclic:
                return FiniteAbelianGroup::cyclic(static_cast<std::int64_t>(degree));
            case GaloisShape::Abelian:
                return FiniteAbelianGroup::from_cyclic_orders(galois_factors);
            case GaloisShape::Elementary2:
                return FiniteAbelianGroup::from_cyclic_orders(
                    std::vector<std::int64_t>(elem2_rank, 2));
            case GaloisShape::PrimePower:
                throw std::domain_error("prime-power shape does not fix a group");
        }
        throw std::logic_error("unknown shape");
    }

    std::uint64_t h() const { return class_data.h; }
};

struct HypothesisLine {
    std::string condition;
    std::string witness;
    bool ok = false;
};

/// Machine-checkable record that the residue degrees in `certified` generate
/// the class group, naming the criterion and every verified hypothesis.
struct RCertificate {
    std::string field_label;
    std::uint64_t degree = 0;
    std::uint64_t h = 0;
    std::uint64_t f = 0;
    std::string criterion;
    std::vector<HypothesisLine> transcript;
    std::vector<std::uint64_t> certified;      // divisor-closed, includes 1
    std::vector<std::int64_t> subgroup_shape;  // partial shape bound, when emitted
    bool accepted = false;

    std::vector<std::uint64_t> certified_nontrivial() const {
        std::vector<std::uint64_t> out;
        for (auto v : certified)
            if (v > 1) out.push_back(v);
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["field"] = field_label;
        j["n"] = degree;
        j["h"] = h;
        j["f"] = f;
        j["criterion"] = criterion;
        j["accepted"] = accepted;
        j["hypotheses"] = nlohmann::json::array();
        for (const auto& line : transcript) {
            j["hypotheses"].push_back({{"condition", line.condition},
                                       {"witness", line.witness},
                                       {"ok", line.ok}});
        }
        if (accepted) j["certified"] = certified_nontrivial();
        if (!subgroup_shape.empty()) j["subgroup_shape"] = subgroup_shape;
        return j;
    }
};

namespace detail {

inline HypothesisLine gcd_line(const std::string& what, std::uint64_t a, std::uint64_t b) {
    std::uint64_t g = std::gcd(a, b);
    return {what, "gcd(" + std::to_string(a) + ", " + std::to_string(b) + ") = " + std::to_string(g),
            g == 1};
}

inline RCertificate start_certificate(const FieldDescriptor& field, std::uint64_t f,
                                      std::string criterion) {
    RCertificate c;
    c.field_label = field.label;
    c.degree = field.degree;
    c.h = field.h();
    c.f = f;
    c.criterion = std::move(criterion);
    return c;
}

inline void finish(RCertificate& c) {
    c.accepted = std::all_of(c.transcript.begin(), c.transcript.end(),
                             [](const HypothesisLine& l) { return l.ok; });
}

inline void require_cyclic(const FieldDescriptor& field) {
    if (field.shape != GaloisShape::Cyclic)
        throw std::invalid_argument("criterion needs a cyclic extension");
}

}  // namespace detail

/**
 * Kernel criterion: with gcd(n, h) = 1, any f dividing the universal kernel
 * order puts every divisor of f into the generated-by-degree-f set. With only
 * h known the kernel order is minimized over all groups of order h.
 */
inline RCertificate check_main(const FieldDescriptor& field, std::uint64_t f,
                               const AutProfile& profile, std::uint64_t ceiling = 1000000) {
    detail::require_cyclic(field);
    const std::uint64_t n = field.degree;
    RCertificate c = detail::start_certificate(field, f, "Main");

    c.transcript.push_back({"f divides n",
                            std::to_string(f) + " | " + std::to_string(n),
                            f >= 1 && n % f == 0});
    c.transcript.push_back(detail::gcd_line("degree and class number are coprime", n, field.h()));
    if (c.transcript.back().ok && c.transcript.front().ok) {
        std::uint64_t uko = profile.universal_kernel_min(n, ceiling);
        c.transcript.push_back({"f divides the universal kernel order",
                                std::to_string(f) + " | " + std::to_string(uko) +
                                    " (|Aut| over shapes " + profile.aut_orders_str() + ")",
                                uko % f == 0});
    } else {
        c.transcript.push_back({"f divides the universal kernel order", "not evaluated", false});
    }
    detail::finish(c);
    if (c.accepted) c.certified = divisors_of(f);
    return c;
}

inline RCertificate check_main(const FieldDescriptor& field, std::uint64_t f,
                               std::uint64_t ceiling = 1000000) {
    return check_main(field, f, AutProfile(field.class_data), ceiling);
}

/**
 * Coprimality criterion: f | n, gcd(n, h) = 1 and gcd(f, |Aut(Cl)|) = 1
 * certify every divisor of f. The weaker, directly checkable form of the
 * kernel criterion.
 */
inline RCertificate check_cmain(const FieldDescriptor& field, std::uint64_t f,
                                const AutProfile& profile) {
    detail::require_cyclic(field);
    const std::uint64_t n = field.degree;
    RCertificate c = detail::start_certificate(field, f, "CMain");

    c.transcript.push_back({"f divides n",
                            std::to_string(f) + " | " + std::to_string(n),
                            f >= 1 && n % f == 0});
    c.transcript.push_back(detail::gcd_line("degree and class number are coprime", n, field.h()));
    c.transcript.push_back({"f is coprime to |Aut(Cl)| for every shape of order h",
                            "f = " + std::to_string(f) + ", |Aut| over shapes " +
                                profile.aut_orders_str(),
                            profile.aut_order_coprime(f)});
    detail::finish(c);
    if (c.accepted) c.certified = divisors_of(f);
    return c;
}

inline RCertificate check_cmain(const FieldDescriptor& field, std::uint64_t f) {
    return check_cmain(field, f, AutProfile(field.class_data));
}

/**
 * Valuation criterion at a prime p | n: with e1 = v_p(n) and e2 = v_p(|Aut|),
 * e1 > e2 certifies p^0 .. p^(e1-e2).
 */
inline RCertificate check_pvaluation(const FieldDescriptor& field, std::uint64_t p,
                                     const AutProfile& profile) {
    detail::require_cyclic(field);
    const std::uint64_t n = field.degree;
    if (!is_prime_u64(p)) throw std::invalid_argument("valuation criterion needs a prime");
    if (n % p != 0) throw std::invalid_argument("prime does not divide the degree");
    RCertificate c = detail::start_certificate(field, p, "PValuation");

    c.transcript.push_back(detail::gcd_line("degree and class number are coprime", n, field.h()));
    unsigned e1 = p_valuation(p, n);
    unsigned e2 = profile.aut_p_valuation_max(p);
    c.transcript.push_back({"v_p(n) exceeds v_p(|Aut(Cl)|)",
                            "p = " + std::to_string(p) + ", e1 = " + std::to_string(e1) +
                                ", e2 = " + std::to_string(e2) + " (|Aut| over shapes " +
                                profile.aut_orders_str() + ")",
                            e1 > e2});
    detail::finish(c);
    if (c.accepted) {
        std::uint64_t power = 1;
        for (unsigned i = 0; i <= e1 - e2; ++i) {
            c.certified.push_back(power);
            power *= p;
        }
        c.f = c.certified.back();
    }
    return c;
}

inline RCertificate check_pvaluation(const FieldDescriptor& field, std::uint64_t p) {
    return check_pvaluation(field, p, AutProfile(field.class_data));
}

namespace detail {

// Invariant factors with the q-part of each removed.
inline std::vector<std::int64_t> strip_prime_part(const std::vector<std::int64_t>& factors,
                                                  std::uint64_t q) {
    std::vector<std::int64_t> out;
    for (std::int64_t ni : factors) {
        std::int64_t v = ni;
        while (v % static_cast<std::int64_t>(q) == 0) v /= static_cast<std::int64_t>(q);
        if (v > 1) out.push_back(v);
    }
    return out;
}

}  // namespace detail

/**
 * Shape criterion: when n/f is a prime q and the order-f element lies in the
 * universal kernel, the degree-f classes generate a subgroup containing one
 * of shape n_i / q^(v_q(n_i)). Needs the exact class group.
 */
inline RCertificate check_gmain(const FieldDescriptor& field, std::uint64_t f,
                                std::uint64_t ceiling = 1000000) {
    detail::require_cyclic(field);
    if (!field.class_data.exact())
        throw std::invalid_argument("shape criterion needs the exact class group");
    const std::uint64_t n = field.degree;
    const FiniteAbelianGroup& cl = *field.class_data.group;
    RCertificate c = detail::start_certificate(field, f, "GMain");

    bool divides = f >= 1 && n % f == 0 && f < n;
    c.transcript.push_back({"f is a proper divisor of n",
                            std::to_string(f) + " | " + std::to_string(n), divides});
    std::uint64_t q = divides ? n / f : 0;
    c.transcript.push_back({"n/f is prime",
                            divides ? "n/f = " + std::to_string(q) : "not evaluated",
                            divides && is_prime_u64(q)});
    if (c.transcript.back().ok) {
        c.transcript.push_back(detail::gcd_line("q and f are coprime", q, f));
        std::uint64_t nt = cl.is_trivial() ? 1 : static_cast<std::uint64_t>(cl.invariant_factors().back());
        c.transcript.push_back(detail::gcd_line("f is coprime to the largest invariant factor", f, nt));
        std::uint64_t uko = universal_kernel_order(n, cl, ceiling);
        c.transcript.push_back({"f divides the universal kernel order",
                                std::to_string(f) + " | " + std::to_string(uko), uko % f == 0});
    }
    detail::finish(c);
    if (c.accepted) {
        c.subgroup_shape = detail::strip_prime_part(cl.invariant_factors(), q);
        c.certified = {};  // shape bound only, not a generation claim
    }
    return c;
}

/**
 * Odd prime-power degree criterion: Galois of degree q^t with t > 1,
 * q odd, q coprime to h and to |Aut(Cl)| certifies q.
 */
inline RCertificate check_t41(const FieldDescriptor& field, std::uint64_t q) {
    RCertificate c = detail::start_certificate(field, q, "T41");
    bool shape_ok = field.shape == GaloisShape::PrimePower && field.ppow_q == q &&
                    field.ppow_t > 1 && q % 2 == 1 && is_prime_u64(q);
    c.transcript.push_back({"Galois of degree q^t with t > 1, q an odd prime",
                            "q = " + std::to_string(q) + ", t = " + std::to_string(field.ppow_t),
                            shape_ok});
    if (shape_ok) {
        AutProfile profile(field.class_data);
        c.transcript.push_back(detail::gcd_line("q and h are coprime", q, field.h()));
        c.transcript.push_back({"q does not divide |Aut(Cl)| for any shape of order h",
                                "|Aut| over shapes " + profile.aut_orders_str(),
                                profile.aut_order_coprime(q)});
    }
    detail::finish(c);
    if (c.accepted) c.certified = {1, q};
    return c;
}

/**
 * Elementary 2-group criterion: degree 2^t1 with t1 >= 2, cyclic class group
 * of odd order with t2 distinct prime factors, t1 > t2 certifies 2.
 */
inline RCertificate check_t45(const FieldDescriptor& field) {
    RCertificate c = detail::start_certificate(field, 2, "T45");
    bool shape_ok = field.shape == GaloisShape::Elementary2 && field.elem2_rank >= 2;
    c.transcript.push_back({"Galois group is an elementary 2-group of rank >= 2",
                            "t1 = " + std::to_string(field.elem2_rank), shape_ok});
    const std::uint64_t h = field.h();
    bool cyclic_known;
    std::string cyclic_witness;
    if (field.class_data.exact()) {
        cyclic_known = field.class_data.group->is_cyclic();
        cyclic_witness = "exact class group (" + field.class_data.group->str() + ")";
    } else {
        // A squarefree order forces the cyclic shape.
        bool squarefree = true;
        for (auto [p, e] : factorize(h))
            if (e > 1) squarefree = false;
        cyclic_known = squarefree;
        cyclic_witness = squarefree ? "h = " + std::to_string(h) + " is squarefree"
                                    : "shape of order " + std::to_string(h) + " unknown";
    }
    c.transcript.push_back({"class group is cyclic", cyclic_witness, cyclic_known});
    c.transcript.push_back({"class number is odd", "h = " + std::to_string(h), h % 2 == 1});
    std::size_t t2 = h == 1 ? 0 : factorize(h).size();
    c.transcript.push_back({"t1 exceeds the number of primes dividing h",
                            "t1 = " + std::to_string(field.elem2_rank) + ", t2 = " + std::to_string(t2),
                            field.elem2_rank > t2});
    detail::finish(c);
    if (c.accepted) c.certified = {1, 2};
    return c;
}

/**
 * Counting criterion for 2-power-degree abelian extensions: certifies 2 when
 * for every candidate class group either the count of 2-power-order
 * automorphisms falls short of |G| (pigeonhole), or an exhaustive sweep shows
 * every homomorphism's kernel contains an involution.
 */
inline RCertificate check_two_power_counting(const FiniteAbelianGroup& galois,
                                             const std::vector<FiniteAbelianGroup>& class_candidates,
                                             std::uint64_t ceiling = 1000000) {
    FieldDescriptor pseudo;
    pseudo.label = "degree-" + std::to_string(galois.order()) + " abelian";
    pseudo.degree = galois.order();
    pseudo.shape = GaloisShape::Abelian;
    RCertificate c = detail::start_certificate(pseudo, 2, "TwoPowerCounting");

    bool two_group = (galois.order() & (galois.order() - 1)) == 0 && galois.order() >= 2;
    c.transcript.push_back({"every Galois element has 2-power order",
                            "|G| = " + std::to_string(galois.order()), two_group});
    if (two_group) {
        for (const auto& a : class_candidates) {
            std::uint64_t two_power_count = 0;
            for_each_automorphism(a, [&](const Automorphism& alpha) {
                std::uint64_t d = alpha.order();
                if (d >= 2 && (d & (d - 1)) == 0) ++two_power_count;
            });
            std::string label = "candidate class group (" + a.str() + ")";
            if (two_power_count + 1 < galois.order()) {
                c.transcript.push_back(
                    {label + ": 2-power-order automorphisms fall short of |G|",
                     std::to_string(two_power_count) + " + 1 < " + std::to_string(galois.order()),
                     true});
                continue;
            }
            // Pigeonhole is inconclusive; sweep every homomorphism and demand
            // an involution inside each kernel.
            std::uint64_t homs = 0;
            bool all_have = true;
            for_each_action(a, galois, false, [&](const ActionHom& hom) {
                ++homs;
                if (!all_have) return;
                bool found = false;
                for (std::uint64_t gi = 0; gi < galois.order() && !found; ++gi) {
                    if (galois.element_order(galois.element_at(gi)) == 2 &&
                        hom.at_index(gi).is_identity())
                        found = true;
                }
                if (!found) all_have = false;
            }, ceiling);
            c.transcript.push_back({label + ": every homomorphism kernel contains an involution",
                                    std::to_string(homs) + " homomorphisms swept", all_have});
        }
    }
    detail::finish(c);
    if (c.accepted) c.certified = {1, 2};
    return c;
}

struct RSetOptions {
    bool use_cmain = true;
    bool use_pvaluation = true;
};

struct RSetResult {
    std::set<std::uint64_t> r;  // nontrivial certified degrees
    std::vector<RCertificate> certificates;
};

/**
 * Certified degrees for the real cyclotomic field of an odd prime ell
 * (degree (ell-1)/2 over the rationals), from the coprimality criterion over
 * all divisors and optionally the valuation criterion over all primes of n.
 */
inline RSetResult r_set_real_cyclotomic(std::uint64_t ell, const ClassData& data,
                                        RSetOptions options = {}) {
    if (!is_prime_u64(ell) || ell < 3)
        throw std::invalid_argument("real cyclotomic context needs an odd prime");
    const std::uint64_t n = (ell - 1) / 2;
    FieldDescriptor field =
        FieldDescriptor::cyclic("Q(zeta_" + std::to_string(ell) + ")+", n, data);
    AutProfile profile(data);
    RSetResult out;
    if (options.use_cmain) {
        for (std::uint64_t f : divisors_of(n)) {
            if (f == 1) continue;
            RCertificate c = check_cmain(field, f, profile);
            if (c.accepted) {
                for (auto v : c.certified_nontrivial()) out.r.insert(v);
                out.certificates.push_back(std::move(c));
            }
        }
    }
    if (options.use_pvaluation) {
        for (auto [p, e] : factorize(n)) {
            RCertificate c = check_pvaluation(field, p, profile);
            if (c.accepted) {
                for (auto v : c.certified_nontrivial()) out.r.insert(v);
                out.certificates.push_back(std::move(c));
            }
        }
    }
    return out;
}

/**
 * Certified degrees for generation of the ell-torsion: divisors of the
 * universal kernel order computed against the ell-Sylow subgroup (minimized
 * over shapes when only h is known).
 */
inline RCertificate r_ell_torsion_set(const FieldDescriptor& field, std::uint64_t ell,
                                      std::uint64_t ceiling = 1000000) {
    detail::require_cyclic(field);
    if (!is_prime_u64(ell)) throw std::invalid_argument("torsion criterion needs a prime");
    const std::uint64_t n = field.degree;
    if (n % ell == 0) throw std::domain_error("torsion criterion unsupported when ell divides n");
    RCertificate c = detail::start_certificate(field, 0, "Torsion");
    c.transcript.push_back({"ell does not divide n",
                            "ell = " + std::to_string(ell) + ", n = " + std::to_string(n), true});

    unsigned v = p_valuation(ell, field.h());
    std::vector<FiniteAbelianGroup> sylows;
    if (field.class_data.exact()) {
        auto pd = field.class_data.group->primary_decomposition();
        std::map<std::uint64_t, std::vector<unsigned>> part;
        if (pd.count(ell)) part[ell] = pd[ell];
        sylows.push_back(FiniteAbelianGroup::from_primary(std::move(part)));
    } else {
        std::uint64_t sylow_order = 1;
        for (unsigned i = 0; i < v; ++i) sylow_order *= ell;
        sylows = abelian_groups_of_order(sylow_order);
    }
    std::uint64_t uko = n;
    for (const auto& s : sylows) uko = std::min(uko, universal_kernel_order(n, s, ceiling));
    c.transcript.push_back({"a nontrivial degree lies in the universal kernel for Aut(ell-Sylow)",
                            "f_max = " + std::to_string(uko) + " over " +
                                std::to_string(sylows.size()) + " Sylow shape(s)",
                            uko > 1});
    c.f = uko;
    detail::finish(c);
    if (c.accepted) c.certified = divisors_of(uko);
    return c;
}

}  // namespace rdeg
