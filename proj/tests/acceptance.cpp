// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
//   1  automorphism-order formula == brute-force enumeration (p-groups <= 64)
//   2  involution count in Aut(Z/n) == direct root count (odd n <= 1000)
//   3  identity-action element orders are lcms, all pairs |A||G| <= 400
//   4  published table rows byte-exact + worked examples certified
//   5  certified degrees survive the exhaustive split-extension sweep
//   6  transversal sums annihilate the degree-f classes in the same sweep
//   7  impossibility verdicts match empty valid-action sets (n*m <= 400)
//   8  splitting densities within 3 sigma of phi(f)/n at 10^6
//   9  ingested h(Q(zeta_23)) = 3 certifies the degree-11 exponent bound

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rdeg/abelian.hpp"
#include "rdeg/aut.hpp"
#include "rdeg/consequences.hpp"
#include "rdeg/criteria.hpp"
#include "rdeg/cyclo.hpp"
#include "rdeg/galois_sim.hpp"
#include "rdeg/table.hpp"

using namespace rdeg;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& outcome, double seconds) {
    std::ostringstream line;
    line << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name;
    if (!outcome.detail.empty()) line << " (" << outcome.detail << ")";
    line.precision(1);
    line << " [" << std::fixed << seconds << " s]";
    std::cout << line.str() << std::endl;
    if (!outcome.pass) ++failures;
}

template <typename Fn>
void run(int id, const std::string& name, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = fn();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    report(id, name, outcome, std::chrono::duration<double>(t1 - t0).count());
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion_aut_formula() {
    std::uint64_t checked = 0;
    for (std::uint64_t n = 2; n <= 64; ++n) {
        if (factorize(n).size() != 1) continue;  // p-groups only
        for (const auto& g : abelian_groups_of_order(n)) {
            BigUint predicted = aut_order(g);
            if (predicted > BigUint{1000000}) continue;
            std::uint64_t counted = count_automorphisms(g);
            if (BigUint{counted} != predicted) {
                return {false, "mismatch at group " + g.str() + ": formula " + predicted.str() +
                                   ", enumerated " + std::to_string(counted)};
            }
            ++checked;
        }
    }
    return {checked > 0, std::to_string(checked) + " p-groups, exact equality"};
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion_involution_count() {
    for (std::uint64_t n = 1; n <= 999; n += 2) {
        std::uint64_t brute = 0;
        for (std::uint64_t x = 0; x < n; ++x) {
            if (x != 1 % n && x * x % n == 1 % n) ++brute;
        }
        if (count_order2_aut_cyclic(n) != brute) {
            return {false, "mismatch at n = " + std::to_string(n)};
        }
    }
    return {true, "500 odd moduli, exact equality"};
}

// ---------------------------------------------------------------- criterion 3

// Dense addition table of a small group, for division-free index walks.
std::vector<std::uint32_t> dense_add_table(const FiniteAbelianGroup& g) {
    const std::uint64_t n = g.order();
    std::vector<std::uint32_t> table(n * n);
    for (std::uint64_t x = 0; x < n; ++x)
        for (std::uint64_t y = 0; y < n; ++y)
            table[x * n + y] = static_cast<std::uint32_t>(g.index_add(x, y));
    return table;
}

Outcome criterion_lcm_orders() {
    std::uint64_t pairs = 0, actions = 0, elements = 0, skipped = 0, cross_checked = 0;
    for (std::uint64_t na = 1; na <= 200; ++na) {
        for (const auto& a : abelian_groups_of_order(na)) {
            if (aut_order(a) > BigUint{1000000}) {
                // Beyond the library's action-enumeration ceiling; the
                // operations under test refuse such class groups by contract.
                ++skipped;
                continue;
            }
            std::vector<std::uint32_t> add_a = dense_add_table(a);
            std::vector<std::uint64_t> a_order(na);
            for (std::uint64_t i = 0; i < na; ++i)
                a_order[i] = static_cast<std::uint64_t>(a.element_order(a.element_at(i)));

            for (std::uint64_t ng = 1; na * ng <= 400; ++ng) {
                for (const auto& g : abelian_groups_of_order(ng)) {
                    ++pairs;
                    std::vector<std::uint32_t> add_g = dense_add_table(g);
                    std::vector<std::uint64_t> g_order(ng);
                    for (std::uint64_t i = 0; i < ng; ++i)
                        g_order[i] = static_cast<std::uint64_t>(g.element_order(g.element_at(i)));
                    const std::size_t t = g.rank();
                    std::vector<std::uint64_t> strides(t, 1);
                    for (std::size_t i = t; i-- > 1;)
                        strides[i - 1] =
                            strides[i] * static_cast<std::uint64_t>(g.invariant_factors()[i]);

                    // psi(x) for every x in G, one flat row per index, rebuilt
                    // in place per action via the stride recursion.
                    std::vector<std::uint32_t> psi(ng * na);
                    for (std::uint64_t x = 0; x < na; ++x) psi[x] = static_cast<std::uint32_t>(x);

                    bool ok = true;
                    std::string failure;
                    std::uint64_t tuple_no = 0;
                    detail::for_each_action_tuple(
                        a, g, 1000000, [&](const std::vector<const Automorphism*>& tuple) {
                            if (!ok) return;
                            ++actions;
                            for (std::uint64_t idx = 1; idx < ng; ++idx) {
                                std::uint64_t rest = idx;
                                for (std::size_t i = 0; i < t; ++i) {
                                    std::uint64_t digit = rest / strides[i];
                                    if (digit > 0) {
                                        const auto& img = tuple[i]->perm;
                                        const std::uint32_t* prev = &psi[(idx - strides[i]) * na];
                                        std::uint32_t* row = &psi[idx * na];
                                        for (std::uint64_t x = 0; x < na; ++x) row[x] = img[prev[x]];
                                        break;
                                    }
                                    rest %= strides[i];
                                }
                            }
                            for (std::uint64_t gi = 0; gi < ng && ok; ++gi) {
                                const std::uint32_t* row = &psi[gi * na];
                                bool identity = true;
                                for (std::uint64_t x = 0; x < na && identity; ++x)
                                    identity = row[x] == x;
                                if (!identity) continue;
                                for (std::uint64_t ai = 0; ai < na; ++ai) {
                                    // Order by direct multiplication in the
                                    // extension law (a1 + psi(g1)(a2), g1 g2).
                                    std::uint64_t ca = ai, cg = gi, order = 1;
                                    while (ca != 0 || cg != 0) {
                                        ca = add_a[ca * na + psi[cg * na + ai]];
                                        cg = add_g[cg * ng + gi];
                                        ++order;
                                    }
                                    ++elements;
                                    if (order != lcm_u64(a_order[ai], g_order[gi])) {
                                        ok = false;
                                        failure = "A=" + a.str() + " G=" + g.str();
                                        break;
                                    }
                                }
                            }
                            // A deterministic sample of actions re-runs
                            // through the library's split-extension path.
                            if (ok && tuple_no++ % 397 == 0) {
                                std::vector<Automorphism> images;
                                for (const Automorphism* x : tuple) images.push_back(*x);
                                SplitExtension e(ActionHom::from_validated(g, a, std::move(images)));
                                for (std::uint64_t gi = 0; gi < ng && ok; ++gi) {
                                    if (!e.action().at_index(gi).is_identity()) continue;
                                    for (std::uint64_t ai = 0; ai < na; ++ai) {
                                        ++cross_checked;
                                        if (e.element_order_index(ai * ng + gi) !=
                                            lcm_u64(a_order[ai], g_order[gi])) {
                                            ok = false;
                                            failure = "library route at A=" + a.str() +
                                                      " G=" + g.str();
                                            break;
                                        }
                                    }
                                }
                            }
                        });
                    if (!ok) return {false, "order mismatch at " + failure};
                }
            }
        }
    }
    return {true, std::to_string(pairs) + " pairs, " + std::to_string(actions) + " actions, " +
                      std::to_string(elements) + " elements exact (" +
                      std::to_string(cross_checked) + " re-run through the library path); " +
                      std::to_string(skipped) + " class group(s) beyond the enumeration ceiling"};
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion_table(const std::string& data_dir, const std::string& golden_path) {
    auto rows = reproduce_table(load_records(data_dir + "/plus_class_numbers.csv"));
    std::string rendered = render_table_tsv(rows);
    std::ifstream golden(golden_path);
    if (!golden) return {false, "cannot open " + golden_path};
    std::stringstream buffer;
    buffer << golden.rdbuf();
    if (buffer.str() != rendered) {
        return {false, "table TSV differs from the reference rendering"};
    }
    if (rows.size() != 27) return {false, "expected 27 rows"};

    auto examples = load_example_records(data_dir + "/examples.csv");
    if (examples.size() != 11) return {false, "expected 11 worked examples"};
    auto report = run_examples(examples);
    std::size_t supersets = 0;
    for (const auto& o : report.outcomes) {
        if (!o.asserted_certified) {
            return {false, "example at modulus " + std::to_string(o.modulus) +
                               " missed its published degrees"};
        }
        if (!o.exact) ++supersets;
        if (o.modulus == 163 && o.certified != std::vector<std::uint64_t>{3, 9, 27})
            return {false, "conductor 163 must certify exactly {3, 9, 27}"};
        if (o.modulus == 96 && o.certified != std::vector<std::uint64_t>{2})
            return {false, "conductor 96 must certify exactly {2}"};
    }
    return {true, "27 rows byte-exact; 11 examples certified (" + std::to_string(supersets) +
                      " with certified supersets, reported not failed)"};
}

// ------------------------------------------------------- criteria 5 and 6

struct SweepResult {
    std::uint64_t pairs = 0;
    std::uint64_t certified_degrees = 0;
    std::uint64_t actions = 0;
    std::uint64_t generation_checks = 0;
    std::uint64_t annihilation_checks = 0;
    std::uint64_t library_checks = 0;
    std::string generation_failure;
    std::string annihilation_failure;
    std::string kernel_mismatch;
};

SweepResult soundness_sweep() {
    constexpr std::uint64_t kCeiling = 20000000;  // admits every |A| <= 40
    SweepResult res;
    for (std::uint64_t na = 1; na <= 40; ++na) {
        for (const auto& a : abelian_groups_of_order(na)) {
            std::vector<std::uint64_t> degrees;
            for (std::uint64_t n = 2; n <= 30; ++n) {
                if (std::gcd(n, na) == 1) degrees.push_back(n);
            }
            if (degrees.empty()) continue;

            // Certified degrees per n, from every cyclic-shape criterion.
            AutProfile profile(ClassData::from_group(a));
            std::map<std::uint64_t, std::vector<std::uint64_t>> certified;
            // Support of theta_f as Galois indices (all coefficients are 1),
            // and the order-f elements of Z/n, both per (n, f).
            std::map<std::uint64_t, std::map<std::uint64_t, std::vector<std::uint32_t>>> theta_support;
            std::map<std::uint64_t, std::map<std::uint64_t, std::vector<std::uint32_t>>> order_f_elems;
            std::map<std::uint64_t, std::map<std::uint64_t, GroupRingElement>> thetas;
            for (auto n : degrees) {
                FieldDescriptor field = FieldDescriptor::cyclic("sweep", n, ClassData::from_group(a));
                std::set<std::uint64_t> certs;
                for (std::uint64_t f : divisors_of(n)) {
                    RCertificate cm = check_main(field, f, profile, kCeiling);
                    if (cm.accepted) certs.insert(cm.certified.begin(), cm.certified.end());
                    RCertificate cc = check_cmain(field, f, profile);
                    if (cc.accepted) certs.insert(cc.certified.begin(), cc.certified.end());
                }
                for (auto [p, e] : factorize(n)) {
                    RCertificate cp = check_pvaluation(field, p, profile);
                    if (cp.accepted) certs.insert(cp.certified.begin(), cp.certified.end());
                }
                if (certs.empty()) continue;
                auto galois = FiniteAbelianGroup::cyclic(static_cast<std::int64_t>(n));
                for (auto f : certs) {
                    GroupRingElement theta = theta_f(galois, static_cast<std::int64_t>(f));
                    std::vector<std::uint32_t> support;
                    for (const auto& [gidx, coeff] : theta.terms())
                        support.push_back(static_cast<std::uint32_t>(gidx));
                    theta_support[n][f] = std::move(support);
                    thetas[n].emplace(f, std::move(theta));
                    std::vector<std::uint32_t> elems;
                    for (std::uint64_t v = 0; v < n; ++v) {
                        if (galois.element_order({static_cast<std::int64_t>(v)}) ==
                            static_cast<std::int64_t>(f))
                            elems.push_back(static_cast<std::uint32_t>(v));
                    }
                    order_f_elems[n][f] = std::move(elems);
                }
                certified[n].assign(certs.begin(), certs.end());
                res.certified_degrees += certs.size();
            }
            ++res.pairs;

            std::vector<std::uint32_t> add_a = dense_add_table(a);
            const std::size_t rank_a = a.rank();
            std::vector<std::uint32_t> gen_idx(rank_a);
            for (std::size_t k = 0; k < rank_a; ++k) {
                GroupElement e(rank_a, 0);
                e[k] = 1;
                gen_idx[k] = static_cast<std::uint32_t>(a.index_of(e));
            }
            std::vector<std::uint8_t> class_mask(na), closure_mask(na);
            std::vector<std::uint32_t> class_list, closure_list;
            std::map<std::uint64_t, std::uint64_t> action_ordinal;

            auto kernel_order = scan_cyclic_actions_stream(
                a, degrees, kCeiling, [&](std::uint64_t n, ActionHom h) {
                    auto it = certified.find(n);
                    if (it == certified.end()) return;
                    if (!res.generation_failure.empty() || !res.annihilation_failure.empty()) return;
                    ++res.actions;
                    for (std::uint64_t f : it->second) {
                        // Classes of degree-f elements: the class of (x, g) is
                        // linear in x, so the images of the generators span
                        // everything one g contributes.
                        std::fill(class_mask.begin(), class_mask.end(), 0);
                        class_list.clear();
                        for (std::uint32_t g : order_f_elems.at(n).at(f)) {
                            for (std::size_t k = 0; k < rank_a; ++k) {
                                std::uint32_t ca = 0;
                                std::uint64_t cg = 0;
                                for (std::uint64_t j = 0; j < f; ++j) {
                                    ca = add_a[static_cast<std::size_t>(ca) * na +
                                               h.at_index(cg).perm[gen_idx[k]]];
                                    cg = (cg + g) % n;
                                }
                                if (!class_mask[ca]) {
                                    class_mask[ca] = 1;
                                    class_list.push_back(ca);
                                }
                            }
                        }
                        // Conjugation closure over the Galois action.
                        for (std::size_t head = 0; head < class_list.size(); ++head) {
                            for (std::uint64_t v = 0; v < n; ++v) {
                                std::uint32_t img = h.at_index(v).perm[class_list[head]];
                                if (!class_mask[img]) {
                                    class_mask[img] = 1;
                                    class_list.push_back(img);
                                }
                            }
                        }
                        // Generated subgroup by breadth-first closure.
                        std::fill(closure_mask.begin(), closure_mask.end(), 0);
                        closure_list.assign(1, 0);
                        closure_mask[0] = 1;
                        for (std::size_t head = 0; head < closure_list.size(); ++head) {
                            for (std::uint32_t c : class_list) {
                                std::uint32_t nxt =
                                    add_a[static_cast<std::size_t>(closure_list[head]) * na + c];
                                if (!closure_mask[nxt]) {
                                    closure_mask[nxt] = 1;
                                    closure_list.push_back(nxt);
                                }
                            }
                        }
                        ++res.generation_checks;
                        if (closure_list.size() != na) {
                            res.generation_failure = "A=" + a.str() + " n=" + std::to_string(n) +
                                                     " f=" + std::to_string(f);
                            return;
                        }
                        // theta_f applied to the subgroup generators; the
                        // application is additive, so generators settle it.
                        for (std::uint32_t c : class_list) {
                            std::uint32_t acc = 0;
                            for (std::uint32_t s : theta_support.at(n).at(f)) {
                                acc = add_a[static_cast<std::size_t>(acc) * na + h.at_index(s).perm[c]];
                            }
                            ++res.annihilation_checks;
                            if (acc != 0) {
                                res.annihilation_failure = "A=" + a.str() + " n=" + std::to_string(n) +
                                                           " f=" + std::to_string(f);
                                return;
                            }
                        }
                    }
                    // Deterministic subsample re-checked through the full
                    // library route (always for the first actions per degree).
                    std::uint64_t ordinal = action_ordinal[n]++;
                    if (ordinal < 50 || ordinal % 997 == 0) {
                        SplitExtension e(std::move(h));
                        for (std::uint64_t f : it->second) {
                            Subgroup classes = degree_f_class_subgroup(e, static_cast<std::int64_t>(f));
                            ++res.library_checks;
                            if (!classes.is_full()) {
                                res.generation_failure = "library route at A=" + a.str() +
                                                         " n=" + std::to_string(n) +
                                                         " f=" + std::to_string(f);
                                return;
                            }
                            const GroupRingElement& theta = thetas.at(n).at(f);
                            for (const auto& member : classes.generators()) {
                                if (!a.is_identity(apply_group_ring(theta, e.action(), member))) {
                                    res.annihilation_failure = "library route at A=" + a.str() +
                                                               " n=" + std::to_string(n) +
                                                               " f=" + std::to_string(f);
                                    return;
                                }
                            }
                        }
                    }
                });

            // The streamed kernel orders must agree with the profile route.
            for (auto n : degrees) {
                if (kernel_order.at(n) != profile.universal_kernel_min(n, kCeiling)) {
                    res.kernel_mismatch = "A=" + a.str() + " n=" + std::to_string(n);
                }
            }
            if (!res.generation_failure.empty() || !res.annihilation_failure.empty()) return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion_impossibility() {
    std::uint64_t conclusive = 0;
    for (std::uint64_t n = 2; 2 * n <= 400; ++n) {
        for (std::uint64_t m = 2; n * m <= 400; ++m) {
            if (!a1_impossible(n, m).conclusive) continue;
            ++conclusive;
            auto acts = valid_actions(FiniteAbelianGroup::cyclic(static_cast<std::int64_t>(m)),
                                      FiniteAbelianGroup::cyclic(static_cast<std::int64_t>(n)));
            if (!acts.empty()) {
                return {false, "valid action exists at n = " + std::to_string(n) +
                                   ", m = " + std::to_string(m)};
            }
        }
    }
    return {true, std::to_string(conclusive) + " impossible pairs, all with empty action sets"};
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion_densities() {
    struct Case {
        std::uint64_t ell;
        bool plus;
        std::uint64_t f;
    };
    const std::vector<Case> cases{{7, false, 1}, {7, false, 2}, {7, false, 3}, {7, false, 6},
                                  {163, true, 3}};
    constexpr std::uint64_t kBound = 1000000;
    double worst = 0.0;
    for (const auto& c : cases) {
        DensityRow row = empirical_density(c.ell, c.plus, c.f, kBound);
        worst = std::max(worst, row.sigma_distance);
        if (row.sigma_distance > 3.0) {
            return {false, "density at ell = " + std::to_string(c.ell) + ", f = " +
                               std::to_string(c.f) + " off by " + std::to_string(row.sigma_distance) +
                               " sigma"};
        }
    }
    for (std::uint64_t ell : {7ull, 163ull}) {
        bool plus = ell == 163;
        DensityHistogram hist = classify_primes(ell, plus, kBound);
        std::uint64_t sum = 0;
        for (auto [f, c] : hist.counts) sum += c;
        if (sum != hist.total) return {false, "fractions do not sum to one"};
    }
    std::ostringstream os;
    os.precision(2);
    os << "5 cases within 3 sigma (worst " << std::fixed << worst << "), fractions total 1";
    return {true, os.str()};
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion_subfield_bound(const std::string& data_dir) {
    auto records = load_records(data_dir + "/cyclotomic_class_numbers.csv");
    const FieldRecord* rec23 = nullptr;
    for (const auto& r : records) {
        if (r.ell == 23) rec23 = &r;
    }
    if (!rec23) return {false, "no ingested record for conductor 23"};
    if (rec23->source.empty()) return {false, "record lacks a source attribution"};
    BoundReport report = subfield_exponent_bound(23, 11, ClassData::from_order(rec23->h));
    if (!report.conclusive) return {false, "bound not certified"};
    if (report.conclusion.find("at most 2") == std::string::npos)
        return {false, "unexpected conclusion: " + report.conclusion};
    if (report.transcript.size() < 4) return {false, "transcript incomplete"};
    for (const auto& line : report.transcript) {
        if (!line.ok) return {false, "transcript line failed: " + line.condition};
    }
    return {true, "exponent <= 2 certified with " + std::to_string(report.transcript.size()) +
                      " verified hypotheses"};
}

}  // namespace

int main(int argc, char** argv) {
    std::string data_dir = "data";
    std::string golden_path = "tests/golden/table_expected.tsv";
    for (int i = 1; i + 1 < argc; i += 2) {
        std::string flag = argv[i];
        if (flag == "--data") data_dir = argv[i + 1];
        if (flag == "--golden") golden_path = argv[i + 1];
    }

    run(1, "automorphism-order formula matches the enumeration oracle", criterion_aut_formula);
    run(2, "involution counts in cyclic automorphism groups", criterion_involution_count);
    run(3, "identity-action element orders are lcms", criterion_lcm_orders);
    run(4, "published table rows and worked examples reproduce",
        [&] { return criterion_table(data_dir, golden_path); });

    SweepResult sweep;
    run(5, "certified degrees generate under every valid action", [&] {
        sweep = soundness_sweep();
        if (!sweep.generation_failure.empty())
            return Outcome{false, "generation failed at " + sweep.generation_failure};
        if (!sweep.kernel_mismatch.empty())
            return Outcome{false, "kernel-order routes disagree at " + sweep.kernel_mismatch};
        return Outcome{true, std::to_string(sweep.pairs) + " class groups, " +
                                 std::to_string(sweep.certified_degrees) + " certified degrees, " +
                                 std::to_string(sweep.generation_checks) +
                                 " generation checks over " + std::to_string(sweep.actions) +
                                 " valid actions (" + std::to_string(sweep.library_checks) +
                                 " re-run through the library path), zero violations"};
    });
    run(6, "transversal sums annihilate the degree-f classes", [&] {
        if (!sweep.annihilation_failure.empty())
            return Outcome{false, "annihilation failed at " + sweep.annihilation_failure};
        if (sweep.annihilation_checks == 0) return Outcome{false, "no annihilation checks ran"};
        return Outcome{true, std::to_string(sweep.annihilation_checks) +
                                 " annihilation checks in the same sweep, zero violations"};
    });

    run(7, "impossibility verdicts leave no valid actions", criterion_impossibility);
    run(8, "splitting densities within 3 sigma", criterion_densities);
    run(9, "ingested class datum certifies the exponent bound",
        [&] { return criterion_subfield_bound(data_dir); });

    if (failures == 0) {
        std::cout << "all criteria passed" << std::endl;
        return 0;
    }
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
}
