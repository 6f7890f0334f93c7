#pragma once

#include <vector>

#include <Eigen/Dense>

#include "isoprym/types.hpp"

namespace isoprym {

/// Dense polynomial / truncated power series with ascending coefficients.
using Coeffs = std::vector<cplx>;

cplx poly_eval(const Coeffs& p, cplx x);
cplx poly_eval_derivative(const Coeffs& p, cplx x);
Coeffs poly_derivative(const Coeffs& p);
Coeffs poly_mul(const Coeffs& a, const Coeffs& b);
/// Taylor coefficients of p(x0 + t).
Coeffs poly_shift(const Coeffs& p, cplx x0);

/// All roots of p via the companion matrix, polished by Newton steps and
/// sorted by (Re, Im) so output order is deterministic.
std::vector<cplx> poly_roots(const Coeffs& p);

/// Smallest pairwise distance between the given points.
double min_pairwise_distance(const std::vector<cplx>& pts);

// Truncated series arithmetic; every result has exactly `n` coefficients.
Coeffs series_trunc(Coeffs a, std::size_t n);
Coeffs series_mul(const Coeffs& a, const Coeffs& b, std::size_t n);
Coeffs series_inv(const Coeffs& a, std::size_t n);   // requires a[0] != 0
/// sqrt with the branch fixed by `sqrt0` (must satisfy sqrt0^2 = a[0]).
Coeffs series_sqrt(const Coeffs& a, cplx sqrt0, std::size_t n);
/// Termwise antiderivative, constant term zero.
Coeffs series_integrate(const Coeffs& a, std::size_t n);

} // namespace isoprym
