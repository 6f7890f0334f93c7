#pragma once

#include <vector>

#include <Eigen/Dense>

#include "isoprym/poly.hpp"
#include "isoprym/types.hpp"

namespace isoprym {

/// A hyperelliptic model y^2 = p(x) together with its branch points. The main
/// curve uses p(x) = f(x^2); the quotient curve uses f itself.
struct HyperModel {
    Coeffs p;
    Coeffs dp;
    std::vector<cplx> branch;
    double scale = 1.0;     // typical branch-point magnitude
    double clearance = 0.1; // default loop/routing clearance

    static HyperModel from_poly(const Coeffs& p);
    cplx eval(cplx x) const { return poly_eval(p, x); }
    cplx deval(cplx x) const { return poly_eval(dp, x); }
    double dist_to_branch(cplx x) const;
    int nearest_branch(cplx x) const;
};

/// Piecewise-linear path in the x-plane.
using Path = std::vector<cplx>;

Path reversed(const Path& p);
Path negated(const Path& p);     // x -> -x
Path conjugated(const Path& p);  // x -> conj x
void append_path(Path& dst, const Path& more);
double path_length(const Path& p);

/// Analytic continuation of y along a segment; throws on tracking ambiguity.
cplx continue_y(const HyperModel& m, cplx x_from, cplx y_from, cplx x_to,
                int depth = 0);
/// Continuation along a whole polyline.
cplx continue_y_path(const HyperModel& m, const Path& path, cplx y_seed);

/// Straight path from a to b with detours around branch-point disks.
/// `lateral` bows the path sideways (used to keep realized cycles disjoint).
Path route(const HyperModel& m, cplx a, cplx b, double clear_radius,
           double lateral = 0.0);

/// Closed counterclockwise loop around exactly the two given branch points
/// (a thickened corridor with circular caps). jitter > 0 perturbs the radius
/// and corridor so distinct copies intersect transversally.
Path pair_loop(const HyperModel& m, cplx w1, cplx w2, int jitter = 0);

/// Circle of radius r around c, counterclockwise, closed.
Path circle_path(cplx c, double r, int segments = 28, double phase = 0.0);

/// Closed path with y values at each vertex, refined for sheet-safe
/// interpolation. x.front() == x.back() and y.front() == y.back().
struct SampledCycle {
    Path x;
    std::vector<cplx> y;
};
SampledCycle sample_cycle(const HyperModel& m, const Path& loop, cplx y_seed);

/// Signed intersection number of two sampled cycles on the surface.
int intersection_number(const HyperModel& m, const SampledCycle& a,
                        const SampledCycle& b);

/// Winding number of a closed polyline around z0.
int winding_number(const Path& p, cplx z0);

/// Differentials sum_j C(i,j) x^j dx / y; one row per form.
struct FormSet {
    Eigen::MatrixXcd C;
    int count() const { return int(C.rows()); }
};
FormSet monomial_forms(int count); // rows x^0 .. x^{count-1}, dx/y implied

struct PathIntegral {
    Eigen::VectorXcd values;
    cplx y_end;
};
/// Adaptive Gauss-Legendre along the polyline with sheet tracking. Endpoints
/// may sit exactly on a branch point; those panels use a square-root
/// substitution.
PathIntegral integrate_forms(const HyperModel& m, const Path& path, cplx y_seed,
                             const FormSet& forms, double tol);

} // namespace isoprym
