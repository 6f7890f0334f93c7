#include "isoprym/intlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace isoprym {

namespace {

constexpr std::int64_t kOverflowGuard = std::int64_t(1) << 44;

void check_magnitude(const ZMat& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            require(std::llabs(m(i, j)) < kOverflowGuard, "IntegerOverflow",
                    "entry growth beyond guard in exact linear algebra");
}

} // namespace

ZMat zid(int n) { return ZMat::Identity(n, n); }

ZMat jmat(int g) {
    ZMat j = ZMat::Zero(2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
        j(i, g + i) = 1;
        j(g + i, i) = -1;
    }
    return j;
}

ColHnf col_hnf(const ZMat& A) {
    const int rows = int(A.rows()), cols = int(A.cols());
    ColHnf out;
    out.H = A;
    out.U = zid(cols);
    int pivot_col = 0;
    for (int r = 0; r < rows && pivot_col < cols; ++r) {
        // Reduce row r over columns >= pivot_col to a single gcd entry.
        while (true) {
            int best = -1;
            for (int c = pivot_col; c < cols; ++c)
                if (out.H(r, c) != 0 &&
                    (best < 0 || std::llabs(out.H(r, c)) < std::llabs(out.H(r, best))))
                    best = c;
            if (best < 0) break;
            bool done = true;
            for (int c = pivot_col; c < cols; ++c) {
                if (c == best || out.H(r, c) == 0) continue;
                std::int64_t q = out.H(r, c) / out.H(r, best);
                out.H.col(c) -= q * out.H.col(best);
                out.U.col(c) -= q * out.U.col(best);
                if (out.H(r, c) != 0) done = false;
            }
            if (done) {
                out.H.col(best).swap(out.H.col(pivot_col));
                out.U.col(best).swap(out.U.col(pivot_col));
                if (out.H(r, pivot_col) < 0) {
                    out.H.col(pivot_col) *= -1;
                    out.U.col(pivot_col) *= -1;
                }
                // Normalize earlier pivot columns against this one (keeps
                // entries small; classical HNF step).
                ++pivot_col;
                break;
            }
        }
        check_magnitude(out.H);
    }
    out.rank = pivot_col;
    return out;
}

ZMat int_kernel(const ZMat& A) {
    ColHnf h = col_hnf(A);
    const int cols = int(A.cols());
    ZMat k(cols, cols - h.rank);
    for (int c = h.rank; c < cols; ++c) k.col(c - h.rank) = h.U.col(c);
    return k;
}

std::optional<ZVec> int_solve(const ZMat& A, const ZVec& b) {
    auto X = int_solve_matrix(A, b);
    if (!X) return std::nullopt;
    return ZVec(X->col(0));
}

std::optional<ZMat> int_solve_matrix(const ZMat& A, const ZMat& B) {
    ColHnf h = col_hnf(A);
    const int rows = int(A.rows());
    ZMat Y = ZMat::Zero(int(A.cols()), int(B.cols()));
    for (int rhs = 0; rhs < B.cols(); ++rhs) {
        ZVec r = B.col(rhs);
        int c = 0;
        for (int row = 0; row < rows; ++row) {
            if (c < h.rank && h.H(row, c) != 0) {
                std::int64_t v = r(row);
                if (v % h.H(row, c) != 0) return std::nullopt;
                std::int64_t q = v / h.H(row, c);
                r -= q * h.H.col(c);
                Y(c, rhs) = q;
                ++c;
            } else if (r(row) != 0) {
                return std::nullopt;
            }
        }
        if (r.cwiseAbs().maxCoeff() != 0) return std::nullopt;
    }
    return ZMat(h.U * Y);
}

std::int64_t int_det(ZMat A) {
    require(A.rows() == A.cols(), "InvalidShape", "det of non-square matrix");
    const int n = int(A.rows());
    // Bareiss fraction-free elimination.
    std::int64_t prev = 1, sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (A(k, k) == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (A(i, k) != 0) { swap = i; break; }
            if (swap < 0) return 0;
            A.row(k).swap(A.row(swap));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                __int128 num = __int128(A(i, j)) * A(k, k) - __int128(A(i, k)) * A(k, j);
                __int128 q = num / prev;
                require(q < kOverflowGuard && q > -kOverflowGuard, "IntegerOverflow",
                        "Bareiss growth");
                A(i, j) = std::int64_t(q);
            }
        prev = A(k, k);
        if (prev == 0) return 0;
    }
    return sign * A(n - 1, n - 1);
}

ZMat unimodular_inverse(const ZMat& U) {
    std::int64_t d = int_det(U);
    require(d == 1 || d == -1, "NotUnimodular", "inverse of non-unimodular matrix");
    auto X = int_solve_matrix(U, zid(int(U.rows())));
    require(X.has_value(), "NotUnimodular", "unimodular solve failed");
    return *X;
}

Snf smith_normal_form(ZMat A) {
    const int rows = int(A.rows()), cols = int(A.cols());
    ZMat U = zid(rows), V = zid(cols);
    int t = 0;
    while (t < std::min(rows, cols)) {
        // Find the minimal nonzero entry in the remaining block.
        int pr = -1, pc = -1;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j)
                if (A(i, j) != 0 &&
                    (pr < 0 || std::llabs(A(i, j)) < std::llabs(A(pr, pc)))) {
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        A.row(t).swap(A.row(pr));
        U.row(t).swap(U.row(pr));
        A.col(t).swap(A.col(pc));
        V.col(t).swap(V.col(pc));
        bool clean = true;
        for (int i = t + 1; i < rows; ++i) {
            std::int64_t q = A(i, t) / A(t, t);
            if (q != 0) {
                A.row(i) -= q * A.row(t);
                U.row(i) -= q * U.row(t);
            }
            if (A(i, t) != 0) clean = false;
        }
        for (int j = t + 1; j < cols; ++j) {
            std::int64_t q = A(t, j) / A(t, t);
            if (q != 0) {
                A.col(j) -= q * A.col(t);
                V.col(j) -= q * V.col(t);
            }
            if (A(t, j) != 0) clean = false;
        }
        if (!clean) continue;
        // Divisibility sweep: fold any non-divisible entry into the pivot.
        bool redo = false;
        for (int i = t + 1; i < rows && !redo; ++i)
            for (int j = t + 1; j < cols && !redo; ++j)
                if (A(i, j) % A(t, t) != 0) {
                    A.row(t) += A.row(i);
                    U.row(t) += U.row(i);
                    redo = true;
                }
        if (redo) continue;
        if (A(t, t) < 0) {
            A.row(t) *= -1;
            U.row(t) *= -1;
        }
        check_magnitude(A);
        ++t;
    }
    return {U, V, A};
}

SymplecticReduction symplectic_reduce(const ZMat& gram) {
    const int n = int(gram.rows());
    require(gram.cols() == n, "InvalidShape", "Gram must be square");
    ZMat M = gram;             // current Gram in the working basis
    ZMat B = zid(n);           // columns: working basis combos of generators
    std::vector<int> live(std::size_t(n));
    std::iota(live.begin(), live.end(), 0);
    SymplecticReduction out;
    std::vector<int> pair_a, pair_b;

    // Column update c += t * x, mirrored into the Gram matrix.
    auto add_col = [&](int c, std::int64_t t, int x) {
        if (t == 0) return;
        B.col(c) += t * B.col(x);
        M.col(c) += t * M.col(x);
        M.row(c) += t * M.row(x);
    };

    while (true) {
        int pi = -1, pj = -1;
        for (int a : live)
            for (int b : live)
                if (a < b && M(a, b) != 0 &&
                    (pi < 0 || std::llabs(M(a, b)) < std::llabs(M(pi, pj)))) {
                    pi = a;
                    pj = b;
                }
        if (pi < 0) break;
        std::int64_t d = M(pi, pj);

        // Euclid step: if d does not divide some pairing against the pivot
        // pair, produce a strictly smaller remainder entry and rescan.
        bool progress = false;
        for (int c : live) {
            if (c == pi || c == pj) continue;
            if (M(pi, c) % d != 0) {
                add_col(c, -(M(pi, c) / d), pj); // (pi, c) -> remainder
                progress = true;
                break;
            }
            if (M(pj, c) % d != 0) {
                add_col(c, M(pj, c) / d, pi);    // (pj, c) -> remainder
                progress = true;
                break;
            }
        }
        if (progress) continue;

        if (d < 0) {
            std::swap(pi, pj);
            d = -d;
        }
        // Clear all other pairings against the pivot pair (exact division).
        for (int c : live) {
            if (c == pi || c == pj) continue;
            std::int64_t qi = M(pi, c) / d;
            std::int64_t qj = M(pj, c) / d;
            add_col(c, qj, pi);
            add_col(c, -qi, pj);
            require(M(pi, c) == 0 && M(pj, c) == 0, "ReductionBug",
                    "pivot clearing failed");
        }
        check_magnitude(B);
        pair_a.push_back(pi);
        pair_b.push_back(pj);
        live.erase(std::remove(live.begin(), live.end(), pi), live.end());
        live.erase(std::remove(live.begin(), live.end(), pj), live.end());
        out.divisors.push_back(d);
    }

    const int r = int(pair_a.size());
    out.basis = ZMat(n, 2 * r);
    for (int k = 0; k < r; ++k) {
        out.basis.col(k) = B.col(pair_a[std::size_t(k)]);
        out.basis.col(r + k) = B.col(pair_b[std::size_t(k)]);
    }
    out.radical = ZMat(n, int(live.size()));
    for (int k = 0; k < int(live.size()); ++k)
        out.radical.col(k) = B.col(live[std::size_t(k)]);
    return out;
}

ZMat random_symplectic(int g, Rng& rng, int word_len) {
    const int n = 2 * g;
    ZMat G = zid(n);
    for (int w = 0; w < word_len; ++w) {
        ZMat E = zid(n);
        int kind = int(rng.below(3));
        if (kind == 0) {
            // a_i <-> pairwise swap with its dual twist: (a,b) -> (b,-a)
            int i = int(rng.below(std::uint64_t(g)));
            E(i, i) = 0;
            E(g + i, g + i) = 0;
            E(i, g + i) = 1;
            E(g + i, i) = -1;
        } else if (kind == 1) {
            // shear b_i += c * a_i
            int i = int(rng.below(std::uint64_t(g)));
            E(i, g + i) = rng.integer(-2, 2);
        } else if (g >= 2) {
            // mixing transvection: a_i += a_j, b_j -= b_i
            int i = int(rng.below(std::uint64_t(g)));
            int j = int(rng.below(std::uint64_t(g)));
            if (i != j) {
                E(i, j) = 1;
                E(g + j, g + i) = -1;
            }
        }
        G = G * E;
    }
    ZMat J = jmat(g);
    require((G.transpose() * J * G - J).cwiseAbs().maxCoeff() == 0, "ReductionBug",
            "random symplectic generator invalid");
    return G;
}

} // namespace isoprym
