#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "jacstab/numeric.hpp"

namespace jacstab {

using IntMatrix = std::vector<std::vector<Int>>;

inline IntMatrix identity_matrix(std::size_t n) {
    IntMatrix id(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    return id;
}

// Bareiss fraction-free elimination; exact integer determinant.
inline Int determinant(IntMatrix a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

// Smith normal form D = U * A * V with U, V unimodular. Only the left
// transform U is kept: it is what cokernel coordinates need.
struct SmithForm {
    std::vector<Int> diagonal;  // non-negative, d[i] | d[i+1]
    IntMatrix left;             // U, rows x rows
};

inline SmithForm smith_normal_form(IntMatrix a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    IntMatrix u = identity_matrix(rows);

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        std::swap(u[i], u[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t c = 0; c < cols; ++c) a[dst][c] += f * a[src][c];
        for (std::size_t c = 0; c < rows; ++c) u[dst][c] += f * u[src][c];
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t r = 0; r < rows; ++r) a[r][dst] += f * a[r][src];
    };

    const std::size_t t = rows < cols ? rows : cols;
    for (std::size_t k = 0; k < t; ++k) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        std::size_t pr = k, pc = k;
        Int best = 0;
        for (std::size_t i = k; i < rows; ++i)
            for (std::size_t j = k; j < cols; ++j) {
                if (a[i][j] == 0) continue;
                Int v = abs(a[i][j]);
                if (best == 0 || v < best) {
                    best = v;
                    pr = i;
                    pc = j;
                }
            }
        if (best == 0) break;
        if (pr != k) swap_rows(k, pr);
        if (pc != k) swap_cols(k, pc);

        bool clean = false;
        while (!clean) {
            for (std::size_t i = k + 1; i < rows; ++i)
                if (a[i][k] != 0) add_row(i, k, -(a[i][k] / a[k][k]));
            for (std::size_t j = k + 1; j < cols; ++j)
                if (a[k][j] != 0) add_col(j, k, -(a[k][j] / a[k][k]));
            clean = true;
            // A nonzero remainder left behind means it is smaller than the
            // pivot: move it up and run the elimination again.
            for (std::size_t i = k + 1; i < rows && clean; ++i)
                if (a[i][k] != 0) {
                    swap_rows(k, i);
                    clean = false;
                }
            for (std::size_t j = k + 1; j < cols && clean; ++j)
                if (a[k][j] != 0) {
                    swap_cols(k, j);
                    clean = false;
                }
        }
    }

    // Enforce the divisibility chain d[k] | d[k+1]; each pair fix replaces
    // (d_k, d_l) by (gcd, lcm), so this stabilises quickly.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k + 1 < t; ++k) {
            if (a[k][k] == 0) continue;
            for (std::size_t l = k + 1; l < t; ++l) {
                if (a[l][l] == 0 || a[l][l] % a[k][k] == 0) continue;
                changed = true;
                add_col(k, l, 1);
                // Euclid on the 2x2 block via tracked row/column ops.
                while (a[l][k] != 0) {
                    if (a[k][k] == 0) {
                        swap_rows(k, l);
                        continue;
                    }
                    Int q = a[l][k] / a[k][k];
                    if (q != 0) {
                        add_row(l, k, -q);
                    } else {
                        swap_rows(k, l);
                    }
                }
                if (a[k][l] != 0) add_col(l, k, -(a[k][l] / a[k][k]));
            }
        }
    }

    SmithForm out;
    out.diagonal.resize(t);
    for (std::size_t k = 0; k < t; ++k) out.diagonal[k] = abs(a[k][k]);
    out.left = std::move(u);
    return out;
}

// Exact solve of A x = b via fraction-free elimination; nullopt if A is
// singular (A square).
inline std::optional<std::vector<Rat>> solve_linear(IntMatrix a, std::vector<Int> b) {
    const std::size_t n = a.size();
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = Rat(a[i][j]);
        m[i][n] = Rat(b[i]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m[piv][k] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[k], m[piv]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m[i][k] == 0) continue;
            Rat f = m[i][k] / m[k][k];
            for (std::size_t j = k; j <= n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
    return x;
}

}  // namespace jacstab
