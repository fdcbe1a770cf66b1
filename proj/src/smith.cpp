#include "dihlab/smith.hpp"

#include <stdexcept>

namespace dihlab {

MatZ mat_identity(size_t n) {
    MatZ m(n, std::vector<Integer>(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

MatZ mat_mul(const MatZ& a, const MatZ& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    if (!a.empty() && a[0].size() != k) throw std::invalid_argument("mat_mul: shape mismatch");
    MatZ r(n, std::vector<Integer>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

std::vector<Integer> mat_apply(const MatZ& m, const std::vector<Integer>& v) {
    std::vector<Integer> r(m.size(), 0);
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
    return r;
}

namespace {

void col_swap(MatZ& a, size_t i, size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
}

void col_addmul(MatZ& a, size_t dst, size_t src, const Integer& c) {
    for (auto& row : a) row[dst] += c * row[src];
}

void col_neg(MatZ& a, size_t j) {
    for (auto& row : a) row[j] = -row[j];
}

}  // namespace

MatZ hermite_basis(const MatZ& gens) {
    size_t k = gens.size();
    MatZ full = gens;
    size_t m = full.empty() ? 0 : full[0].size();
    if (m < k) throw std::invalid_argument("hermite_basis: rank deficient");
    // process rows bottom-up: clear row i among the active columns [0, e) to a
    // single pivot, freeze it at column e-1
    size_t e = m;
    for (size_t ii = k; ii-- > 0;) {
        for (;;) {
            size_t pivot = e;
            for (size_t j = 0; j < e; ++j)
                if (full[ii][j] != 0 && (pivot == e || abs(full[ii][j]) < abs(full[ii][pivot])))
                    pivot = j;
            if (pivot == e) throw std::invalid_argument("hermite_basis: rank deficient");
            if (pivot != e - 1) col_swap(full, pivot, e - 1);
            bool clean = true;
            for (size_t j = 0; j + 1 < e; ++j) {
                if (full[ii][j] == 0) continue;
                Integer q = full[ii][j] / full[ii][e - 1];
                col_addmul(full, j, e - 1, -q);
                if (full[ii][j] != 0) clean = false;
            }
            if (clean) break;
        }
        if (full[ii][e - 1] < 0) col_neg(full, e - 1);
        --e;
    }
    MatZ a(k, std::vector<Integer>(k, 0));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) a[i][j] = full[i][e + j];
    for (size_t i = 0; i < k; ++i)
        if (a[i][i] == 0) throw std::invalid_argument("hermite_basis: rank deficient");
    // canonical reduction of the entries right of each pivot; bottom-up so a
    // reduction never disturbs rows already handled below it
    for (size_t ii = k; ii-- > 0;)
        for (size_t j = ii + 1; j < k; ++j) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a[ii][j].get_mpz_t(), a[ii][ii].get_mpz_t());
            if (q != 0) col_addmul(a, j, ii, -q);
        }
    MatZ h(k, std::vector<Integer>(k, 0));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) h[i][j] = a[i][j];
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < i; ++j)
            if (h[i][j] != 0) throw std::logic_error("hermite_basis: not triangular");
    return h;
}

bool hermite_solve(const MatZ& h, const std::vector<Integer>& v, std::vector<Integer>& x) {
    size_t k = h.size();
    x.assign(k, 0);
    std::vector<Integer> r = v;
    for (size_t ii = k; ii-- > 0;) {
        if (r[ii] % h[ii][ii] != 0) return false;
        x[ii] = r[ii] / h[ii][ii];
        for (size_t t = 0; t <= ii; ++t) r[t] -= x[ii] * h[t][ii];
    }
    for (const auto& t : r)
        if (t != 0) return false;
    return true;
}

MatZ kernel_basis(const MatZ& a) {
    size_t rows = a.size();
    size_t m = a.empty() ? 0 : a[0].size();
    // stack identity below and column-reduce the top block to echelon form
    MatZ w(rows + m, std::vector<Integer>(m, 0));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < m; ++j) w[i][j] = a[i][j];
    for (size_t j = 0; j < m; ++j) w[rows + j][j] = 1;

    size_t lead = 0;
    for (size_t i = 0; i < rows && lead < m; ++i) {
        for (;;) {
            size_t pivot = m;
            for (size_t j = lead; j < m; ++j)
                if (w[i][j] != 0 && (pivot == m || abs(w[i][j]) < abs(w[i][pivot]))) pivot = j;
            if (pivot == m) break;
            if (pivot != lead) col_swap(w, lead, pivot);
            bool clean = true;
            for (size_t j = lead + 1; j < m; ++j) {
                if (w[i][j] == 0) continue;
                Integer q = w[i][j] / w[i][lead];
                col_addmul(w, j, lead, -q);
                if (w[i][j] != 0) clean = false;
            }
            if (clean) {
                ++lead;
                break;
            }
        }
    }
    // columns from `lead` on have zero top block: their bottom parts span the kernel
    MatZ out(m, std::vector<Integer>(m - lead, 0));
    for (size_t j = lead; j < m; ++j) {
        for (size_t i = 0; i < rows; ++i)
            if (w[i][j] != 0) throw std::logic_error("kernel_basis: reduction failed");
        for (size_t i = 0; i < m; ++i) out[i][j - lead] = w[rows + i][j];
    }
    return out;
}

SmithDecomposition smith_normal_form(const MatZ& a) {
    size_t n = a.size();
    size_t m = a.empty() ? 0 : a[0].size();
    SmithDecomposition s;
    MatZ d = a;
    s.u = mat_identity(n);
    s.u_inv = mat_identity(n);
    s.v = mat_identity(m);
    s.v_inv = mat_identity(m);

    auto row_addmul = [&](size_t dst, size_t src, const Integer& c) {
        for (size_t j = 0; j < m; ++j) d[dst][j] += c * d[src][j];
        for (size_t j = 0; j < n; ++j) s.u[dst][j] += c * s.u[src][j];
        for (size_t i = 0; i < n; ++i) s.u_inv[i][src] -= c * s.u_inv[i][dst];
    };
    auto row_swap = [&](size_t i, size_t j) {
        std::swap(d[i], d[j]);
        std::swap(s.u[i], s.u[j]);
        for (size_t t = 0; t < n; ++t) std::swap(s.u_inv[t][i], s.u_inv[t][j]);
    };
    auto row_neg = [&](size_t i) {
        for (auto& x : d[i]) x = -x;
        for (auto& x : s.u[i]) x = -x;
        for (size_t t = 0; t < n; ++t) s.u_inv[t][i] = -s.u_inv[t][i];
    };
    auto cadd = [&](size_t dst, size_t src, const Integer& c) {
        col_addmul(d, dst, src, c);
        col_addmul(s.v, dst, src, c);
        for (size_t j = 0; j < m; ++j) s.v_inv[src][j] -= c * s.v_inv[dst][j];
    };
    auto cswap = [&](size_t i, size_t j) {
        col_swap(d, i, j);
        col_swap(s.v, i, j);
        std::swap(s.v_inv[i], s.v_inv[j]);
    };

    size_t t = 0;
    size_t steps = std::min(n, m);
    while (t < steps) {
        // locate a pivot
        size_t pi = n, pj = m;
        for (size_t i = t; i < n; ++i)
            for (size_t j = t; j < m; ++j)
                if (d[i][j] != 0 && (pi == n || abs(d[i][j]) < abs(d[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == n) break;  // all zero
        if (pi != t) row_swap(pi, t);
        if (pj != t) cswap(pj, t);
        bool dirty = false;
        for (size_t i = t + 1; i < n; ++i) {
            if (d[i][t] == 0) continue;
            Integer q = d[i][t] / d[t][t];
            if (q != 0) row_addmul(i, t, -q);
            if (d[i][t] != 0) dirty = true;
        }
        for (size_t j = t + 1; j < m; ++j) {
            if (d[t][j] == 0) continue;
            Integer q = d[t][j] / d[t][t];
            if (q != 0) cadd(j, t, -q);
            if (d[t][j] != 0) dirty = true;
        }
        if (dirty) continue;
        // divisibility: fold any non-divisible entry into this pivot's row
        bool folded = false;
        for (size_t i = t + 1; i < n && !folded; ++i)
            for (size_t j = t + 1; j < m && !folded; ++j)
                if (d[i][j] % d[t][t] != 0) {
                    row_addmul(t, i, 1);
                    folded = true;
                }
        if (folded) continue;
        if (d[t][t] < 0) row_neg(t);
        ++t;
    }
    s.diag.assign(steps, 0);
    for (size_t i = 0; i < steps; ++i) s.diag[i] = d[i][i];
    return s;
}

}  // namespace dihlab
