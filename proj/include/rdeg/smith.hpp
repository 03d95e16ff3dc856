#pragma once

// Smith normal form over the integers with unimodular transforms,
// plus the integer kernel computation built on top of it.

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace rdeg {

using IntMatrix = std::vector<std::vector<long long>>;

struct SmithNormalForm {
    IntMatrix s;  // diagonal, s[i][i] >= 0, s[i][i] | s[i+1][i+1]
    IntMatrix u;  // rows x rows, unimodular
    IntMatrix v;  // cols x cols, unimodular; u * a * v = s
};

namespace detail {

inline IntMatrix identity_matrix(std::size_t n) {
    IntMatrix m(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline void swap_rows(IntMatrix& a, std::size_t i, std::size_t j) {
    if (i != j) std::swap(a[i], a[j]);
}

inline void swap_cols(IntMatrix& a, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : a) std::swap(row[i], row[j]);
}

inline void add_row(IntMatrix& a, std::size_t dst, std::size_t src, long long k) {
    for (std::size_t c = 0; c < a[dst].size(); ++c) a[dst][c] += k * a[src][c];
}

inline void add_col(IntMatrix& a, std::size_t dst, std::size_t src, long long k) {
    for (auto& row : a) row[dst] += k * row[src];
}

inline void negate_row(IntMatrix& a, std::size_t i) {
    for (auto& x : a[i]) x = -x;
}

}  // namespace detail

inline SmithNormalForm smith_normal_form(IntMatrix a) {
    using namespace detail;
    const std::size_t m = a.size();
    const std::size_t n = m == 0 ? 0 : a[0].size();
    SmithNormalForm out{IntMatrix{}, identity_matrix(m), identity_matrix(n)};
    const std::size_t steps = std::min(m, n);

    for (std::size_t t = 0; t < steps; ++t) {
        for (;;) {
            // Locate the smallest nonzero entry in the trailing block.
            std::size_t pi = t, pj = t;
            long long best = 0;
            for (std::size_t i = t; i < m; ++i) {
                for (std::size_t j = t; j < n; ++j) {
                    long long v = std::llabs(a[i][j]);
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (best == 0) break;  // trailing block is zero
            swap_rows(a, t, pi);
            swap_rows(out.u, t, pi);
            swap_cols(a, t, pj);
            swap_cols(out.v, t, pj);

            bool reduced = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a[i][t] != 0) {
                    long long k = a[i][t] / a[t][t];
                    add_row(a, i, t, -k);
                    add_row(out.u, i, t, -k);
                    if (a[i][t] != 0) reduced = false;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a[t][j] != 0) {
                    long long k = a[t][j] / a[t][t];
                    add_col(a, j, t, -k);
                    add_col(out.v, j, t, -k);
                    if (a[t][j] != 0) reduced = false;
                }
            }
            if (!reduced) continue;

            if (a[t][t] < 0) {
                negate_row(a, t);
                negate_row(out.u, t);
            }
            // Enforce divisibility into the remaining block.
            bool divides_all = true;
            for (std::size_t i = t + 1; i < m && divides_all; ++i) {
                for (std::size_t j = t + 1; j < n; ++j) {
                    if (a[i][j] % a[t][t] != 0) {
                        add_row(a, t, i, 1);
                        add_row(out.u, t, i, 1);
                        divides_all = false;
                        break;
                    }
                }
            }
            if (divides_all) break;
        }
        if (a[t][t] < 0) {
            negate_row(a, t);
            negate_row(out.u, t);
        }
    }
    out.s = std::move(a);
    return out;
}

inline std::vector<long long> smith_diagonal(const IntMatrix& a) {
    SmithNormalForm f = smith_normal_form(a);
    std::size_t k = std::min(f.s.size(), f.s.empty() ? 0 : f.s[0].size());
    std::vector<long long> d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = f.s[i][i];
    return d;
}

// Basis of { x : a * x = 0 } as rows of the returned matrix.
inline IntMatrix integer_kernel_basis(const IntMatrix& a) {
    const std::size_t n = a.empty() ? 0 : a[0].size();
    if (a.empty()) return detail::identity_matrix(n);
    SmithNormalForm f = smith_normal_form(a);
    const std::size_t rows = f.s.size();
    IntMatrix basis;
    for (std::size_t j = 0; j < n; ++j) {
        bool zero_col = j >= rows || f.s[j][j] == 0;
        if (!zero_col) continue;
        std::vector<long long> vec(n);
        for (std::size_t i = 0; i < n; ++i) vec[i] = f.v[i][j];
        basis.push_back(std::move(vec));
    }
    return basis;
}

}  // namespace rdeg
