#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "isoprym/rng.hpp"
#include "isoprym/types.hpp"

namespace isoprym {

/// Exact integer matrices. Dimensions stay tiny (<= ~20) so int64 with an
/// overflow guard is enough; every routine here is deterministic.
using ZMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using ZVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

ZMat zid(int n);
/// Standard symplectic Gram matrix: (a_i, b_j) = +delta_ij.
ZMat jmat(int g);

/// Column Hermite form: A * U = H with U unimodular, pivots left-packed.
struct ColHnf {
    ZMat H, U;
    int rank = 0;
};
ColHnf col_hnf(const ZMat& A);

/// Columns span ker(A) over Z; the lattice returned is saturated.
ZMat int_kernel(const ZMat& A);

/// One integer solution of A x = b, if any.
std::optional<ZVec> int_solve(const ZMat& A, const ZVec& b);
/// Columnwise integer solve of A X = B.
std::optional<ZMat> int_solve_matrix(const ZMat& A, const ZMat& B);

std::int64_t int_det(ZMat A);
/// Inverse of a matrix with det = +-1.
ZMat unimodular_inverse(const ZMat& U);

/// Smith normal form: U A V = D (diagonal, divisibility chain).
struct Snf {
    ZMat U, V, D;
};
Snf smith_normal_form(ZMat A);

/// Reduce an antisymmetric Gram matrix to hyperbolic blocks: returns combos
/// (columns) of the input generators forming pairs (a_1..a_r, b_1..b_r) with
/// (a_i, b_j) = d_i delta_ij, plus a basis of the radical.
struct SymplecticReduction {
    ZMat basis;                      // n x 2r, columns a_1..a_r, b_1..b_r
    std::vector<std::int64_t> divisors;
    ZMat radical;                    // n x (n - 2r)
};
SymplecticReduction symplectic_reduce(const ZMat& gram);

/// Random element of Sp(2g, Z) as a word in elementary generators (tests).
ZMat random_symplectic(int g, Rng& rng, int word_len = 14);

} // namespace isoprym
