#pragma once

#include <optional>
#include <vector>

#include "isoprym/intlinalg.hpp"
#include "isoprym/types.hpp"

namespace isoprym {

/// Index bookkeeping of the adapted basis. Indices are 0-based throughout;
/// the paired block is {0..g_sigma-1} <-> {h..h+g_sigma-1} and the
/// sigma-fixed (middle) block is {g_sigma..h-1}.
struct PermutationData {
    int g = 0, g_sigma = 0, n = 0, h = 0;
    std::vector<int> s; // involution action index permutation, sigma(a_j) = -a_{s(j)}
    std::vector<int> t; // conjugation index permutation, trivial when eps_sep = 0
    int k = 0;          // number of real ovals
    int eps_sep = 1;    // 1 = separating, 0 = non-separating
    int m = 0;          // number of 2-cycles of t (separating case)
    // Non-separating case: correction[j] = 1 where tau(b_j) = -b_j + a_j.
    std::vector<int> correction;
    int r0 = 0, r1 = 0; // oval counts among paired / middle a-cycles

    bool t_is_identity() const;
};

ZMat perm_matrix(const std::vector<int>& p);
/// Canonical holomorphic-involution action diag(-P_s, -P_s).
ZMat sigma_canonical(int g_sigma, int h);
/// Canonical antiholomorphic action diag(P_t, -P_t) (separating).
ZMat tau_canonical_sep(const std::vector<int>& t);
/// Canonical antiholomorphic action [[I, diag(corr)], [0, -I]] (non-separating).
ZMat tau_canonical_nonsep(const std::vector<int>& correction);

/// The permutation s = (0,h)(1,h+1)...(g_sigma-1,h+g_sigma-1).
std::vector<int> make_sigma_perm(int g_sigma, int h);

struct AdaptResult {
    ZMat G; // symplectic basis change (columns = new basis in old coordinates)
    PermutationData perms;
};

/// Given the integer actions S (symplectic involution) and T (antisymplectic
/// involution, commuting with S) on a standard symplectic basis, find a
/// symplectic change of basis taking both to their canonical patterns.
/// k_oracle is the oval count from the real-locus scan; it selects and
/// cross-checks the target pattern. Throws Failure("BasisSearchFailed") when
/// no adaptation is found within the search budget.
AdaptResult adapt_involutions(const ZMat& S, const ZMat& T, int g_sigma, int n,
                              int k_oracle);

/// Stage one only: conjugate S to sigma_canonical. Exposed for tests.
ZMat adapt_sigma_only(const ZMat& S, int g_sigma, int h);

} // namespace isoprym
