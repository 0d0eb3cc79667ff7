#pragma once

#include "qcb/error.hpp"
#include "qcb/rational.hpp"

#include <vector>

namespace qcb {

using IMat = std::vector<std::vector<Int>>;

inline IMat identity_imat(std::size_t n) {
    IMat I(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

/// Smith normal form: U * A * V = D with U, V unimodular and D diagonal
/// with nonnegative d_1 | d_2 | ...
struct SmithResult {
    IMat U, D, V;
    std::vector<Int> invariant_factors; // nonzero diagonal entries
};

inline SmithResult smith_normal_form(IMat A) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    SmithResult R;
    R.U = identity_imat(rows);
    R.V = identity_imat(cols);

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(A[i], A[j]);
        std::swap(R.U[i], R.U[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < rows; ++r) std::swap(A[r][i], A[r][j]);
        for (std::size_t r = 0; r < cols; ++r) std::swap(R.V[r][i], R.V[r][j]);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Int& k) {
        for (std::size_t c = 0; c < cols; ++c) A[dst][c] += k * A[src][c];
        for (std::size_t c = 0; c < rows; ++c) R.U[dst][c] += k * R.U[src][c];
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Int& k) {
        for (std::size_t r = 0; r < rows; ++r) A[r][dst] += k * A[r][src];
        for (std::size_t r = 0; r < cols; ++r) R.V[r][dst] += k * R.V[r][src];
    };
    auto negate_row = [&](std::size_t i) {
        for (auto& x : A[i]) x = -x;
        for (auto& x : R.U[i]) x = -x;
    };

    auto diagonalize = [&]() {
        std::size_t t = 0;
        while (t < rows && t < cols) {
            std::size_t pi = t, pj = t;
            bool found = false;
            for (std::size_t i = t; i < rows && !found; ++i)
                for (std::size_t j = t; j < cols && !found; ++j)
                    if (A[i][j] != 0) {
                        pi = i;
                        pj = j;
                        found = true;
                    }
            if (!found) break;
            swap_rows(t, pi);
            swap_cols(t, pj);
            bool clean = false;
            while (!clean) {
                clean = true;
                for (std::size_t i = t + 1; i < rows; ++i) {
                    if (A[i][t] == 0) continue;
                    Int q = A[i][t] / A[t][t];
                    add_row(i, t, -q);
                    if (A[i][t] != 0) {
                        swap_rows(t, i);
                        clean = false;
                    }
                }
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (A[t][j] == 0) continue;
                    Int q = A[t][j] / A[t][t];
                    add_col(j, t, -q);
                    if (A[t][j] != 0) {
                        swap_cols(t, j);
                        clean = false;
                    }
                }
            }
            if (A[t][t] < 0) negate_row(t);
            ++t;
        }
        return t;
    };

    std::size_t t = diagonalize();
    // Enforce the divisibility chain: fold an offending pair into one
    // column and re-reduce; each pass strictly decreases d_i.
    bool chain_ok = false;
    while (!chain_ok) {
        chain_ok = true;
        for (std::size_t i = 0; t > 0 && i + 1 < t && chain_ok; ++i)
            for (std::size_t j = i + 1; j < t && chain_ok; ++j)
                if (A[j][j] % A[i][i] != 0) {
                    add_col(i, j, 1);
                    t = diagonalize();
                    chain_ok = false;
                }
    }

    R.D = A;
    for (std::size_t i = 0; i < t; ++i)
        if (A[i][i] != 0) R.invariant_factors.push_back(A[i][i]);
    return R;
}

} // namespace qcb
