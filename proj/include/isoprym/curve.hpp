#pragma once

#include <string>
#include <vector>

#include "isoprym/poly.hpp"
#include "isoprym/types.hpp"

namespace isoprym {

/// Even hyperelliptic curve y^2 = f(x^2) with f monic squarefree, f(0) != 0,
/// deg f >= 3. Carries the holomorphic involution (x,y) -> (-x,y) and, when f
/// has real coefficients, the real structure (x,y) -> (conj x, conj y).
struct CurveSpec {
    Coeffs f;          // ascending coefficients of f in u = x^2, monic
    std::string label;

    int degree() const { return int(f.size()) - 1; }          // d
    int genus() const { return degree() - 1; }                // g = d - 1
    int quotient_genus() const { return (degree() - 1) / 2; } // genus of y^2 = f(u)
    bool has_real_coefficients(double tol = 1e-12) const;

    /// y^2 = p(x) with p(x) = f(x^2), ascending, degree 2d.
    Coeffs curve_poly() const;
    cplx f_eval(cplx u) const { return poly_eval(f, u); }
    cplx p_eval(cplx x) const { return poly_eval(f, x * x); }
    /// Coefficient-size scale for relative on-curve tests at the given x.
    double residual_scale(cplx x) const;
};

/// Validates the spec invariants; throws on violation.
CurveSpec make_curve(Coeffs f, std::string label, double root_sep_tol = 1e-8);

struct CurvePoint {
    cplx x{0.0, 0.0};
    cplx y{0.0, 0.0};
    int inf_sheet = 0; // 0: finite; +1/-1: point over x = infinity, y ~ sheet * x^d

    bool at_infinity() const { return inf_sheet != 0; }
    static CurvePoint infinity(int sheet) { return {0.0, 0.0, sheet}; }
};

bool point_on_curve(const CurveSpec& c, const CurvePoint& p, double tol = 1e-10);
/// Distance on the curve combining chordal x-distance and normalized sheet data.
double point_distance(const CurveSpec& c, const CurvePoint& a, const CurvePoint& b);

int genus(const CurveSpec& c);
CurvePoint apply_sigma(const CurveSpec& c, const CurvePoint& p);
CurvePoint apply_tau(const CurveSpec& c, const CurvePoint& p);
CurvePoint apply_sigma_tau(const CurveSpec& c, const CurvePoint& p);
CurvePoint apply_hyperelliptic(const CurveSpec& c, const CurvePoint& p); // (x,y)->(x,-y)

struct BranchData {
    std::vector<cplx> branch_points_x;   // 2d roots of p, deterministic order
    std::vector<CurvePoint> sigma_fixed; // the Q_i, |.| = 2n
    int n = 0;
};
BranchData sigma_fixed_points(const CurveSpec& c);

/// sigma-invariant base point (0, principal sqrt of f(0)).
CurvePoint base_point(const CurveSpec& c);

/// Truncated chart t -> (x(t), y(t)). At infinity t = 1/x; at an ordinary
/// point t = x - x0.
struct ChartData {
    CurvePoint center;
    Coeffs x_series;
    Coeffs y_series;
    double radius = 0.0; // convergence-safe parameter radius
};
ChartData local_expansion(const CurveSpec& c, const CurvePoint& p, int order);

} // namespace isoprym
