#pragma once

#include <vector>

#include "dihlab/integer.hpp"

namespace dihlab {

// Integer matrices, row-major; columns are lattice generators.
using MatZ = std::vector<std::vector<Integer>>;

MatZ mat_identity(size_t n);
MatZ mat_mul(const MatZ& a, const MatZ& b);
std::vector<Integer> mat_apply(const MatZ& m, const std::vector<Integer>& v);

// Canonical column-Hermite basis of the column span, which must have full
// rank k = number of rows: upper triangular, positive diagonal, and
// 0 <= h[i][j] < h[i][i] for j > i.  Lattice equality is basis equality.
MatZ hermite_basis(const MatZ& gens);

// Solve H x = v for a Hermite basis H; false when v is outside the lattice.
bool hermite_solve(const MatZ& h, const std::vector<Integer>& v, std::vector<Integer>& x);

// Basis of the integer kernel {x : A x = 0}.
MatZ kernel_basis(const MatZ& a);

struct SmithDecomposition {
    std::vector<Integer> diag;  // d1 | d2 | ... (non-negative)
    MatZ u, u_inv;              // u * a * v = diag, with u, v unimodular
    MatZ v, v_inv;
};

SmithDecomposition smith_normal_form(const MatZ& a);

}  // namespace dihlab
