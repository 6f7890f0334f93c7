#include "isoprym/curve.hpp"

#include <algorithm>
#include <cmath>

namespace isoprym {

bool CurveSpec::has_real_coefficients(double tol) const {
    for (const auto& c : f)
        if (std::abs(c.imag()) > tol) return false;
    return true;
}

Coeffs CurveSpec::curve_poly() const {
    Coeffs p(std::size_t(2 * degree() + 1), cplx(0.0));
    for (std::size_t k = 0; k < f.size(); ++k) p[2 * k] = f[k];
    return p;
}

double CurveSpec::residual_scale(cplx x) const {
    double ax = std::max(1.0, std::abs(x));
    double pow2 = 1.0, scale = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        scale += std::abs(f[k]) * pow2;
        pow2 *= ax * ax;
    }
    return std::max(scale, 1.0);
}

CurveSpec make_curve(Coeffs f, std::string label, double root_sep_tol) {
    require(f.size() >= 4, "InvalidCurve", "deg f >= 3 required (quotient genus >= 1)");
    require(std::abs(f.back() - cplx(1.0)) < 1e-12, "InvalidCurve", "f must be monic");
    require(std::abs(f.front()) > 1e-12, "DegenerateBranching",
            "f(0) = 0: x = 0 would collide with a fixed point of the involution");
    auto roots = poly_roots(f);
    double sep = min_pairwise_distance(roots);
    require(sep > root_sep_tol, "InvalidCurve", "f is not squarefree (root separation " +
                                                    std::to_string(sep) + ")");
    CurveSpec c;
    c.f = std::move(f);
    c.label = std::move(label);
    return c;
}

bool point_on_curve(const CurveSpec& c, const CurvePoint& p, double tol) {
    if (p.at_infinity()) return p.inf_sheet == 1 || p.inf_sheet == -1;
    double res = std::abs(p.y * p.y - c.p_eval(p.x));
    return res < tol * c.residual_scale(p.x);
}

double point_distance(const CurveSpec& c, const CurvePoint& a, const CurvePoint& b) {
    const int d = c.degree();
    auto xcoord = [&](const CurvePoint& p) {
        return p.at_infinity() ? cplx(0.0) : p.x;
    };
    auto wa = xcoord(a), wb = xcoord(b);
    double da, db;
    if (a.at_infinity() && b.at_infinity())
        return a.inf_sheet == b.inf_sheet ? 0.0 : 2.0;
    auto chordal_inf = [](cplx x) { return 2.0 / std::sqrt(1.0 + std::norm(x)); };
    auto ynorm = [&](const CurvePoint& p) {
        if (p.at_infinity()) return cplx(double(p.inf_sheet), 0.0);
        return p.y / std::pow(std::sqrt(1.0 + std::norm(p.x)), double(d));
    };
    if (a.at_infinity() != b.at_infinity()) {
        const CurvePoint& fin = a.at_infinity() ? b : a;
        da = chordal_inf(xcoord(fin));
        db = std::abs(ynorm(a) - ynorm(b));
        return da + db;
    }
    da = 2.0 * std::abs(wa - wb) /
         std::sqrt((1.0 + std::norm(wa)) * (1.0 + std::norm(wb)));
    db = std::abs(ynorm(a) - ynorm(b));
    return da + db;
}

int genus(const CurveSpec& c) { return c.genus(); }

CurvePoint apply_sigma(const CurveSpec& c, const CurvePoint& p) {
    if (p.at_infinity()) {
        int sheet = (c.degree() % 2 == 0) ? p.inf_sheet : -p.inf_sheet;
        return CurvePoint::infinity(sheet);
    }
    return {-p.x, p.y, 0};
}

CurvePoint apply_tau(const CurveSpec& c, const CurvePoint& p) {
    require(c.has_real_coefficients(), "RealStructureUnavailable",
            "curve coefficients are not real");
    if (p.at_infinity()) return p;
    return {std::conj(p.x), std::conj(p.y), 0};
}

CurvePoint apply_sigma_tau(const CurveSpec& c, const CurvePoint& p) {
    return apply_sigma(c, apply_tau(c, p));
}

CurvePoint apply_hyperelliptic(const CurveSpec&, const CurvePoint& p) {
    if (p.at_infinity()) return CurvePoint::infinity(-p.inf_sheet);
    return {p.x, -p.y, 0};
}

BranchData sigma_fixed_points(const CurveSpec& c) {
    BranchData out;
    auto uroots = poly_roots(c.f);
    for (const auto& u : uroots) {
        cplx w = std::sqrt(u);
        out.branch_points_x.push_back(w);
        out.branch_points_x.push_back(-w);
    }
    std::sort(out.branch_points_x.begin(), out.branch_points_x.end(),
              [](cplx a, cplx b) {
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
              });
    cplx y0 = std::sqrt(c.f_eval(0.0));
    out.sigma_fixed.push_back({0.0, y0, 0});
    out.sigma_fixed.push_back({0.0, -y0, 0});
    if (c.degree() % 2 == 0) {
        out.sigma_fixed.push_back(CurvePoint::infinity(+1));
        out.sigma_fixed.push_back(CurvePoint::infinity(-1));
    }
    out.n = int(out.sigma_fixed.size()) / 2;
    // Riemann-Hurwitz bookkeeping for the double covering.
    require(c.genus() == 2 * c.quotient_genus() + out.n - 1, "InvalidCurve",
            "genus bookkeeping failed");
    return out;
}

CurvePoint base_point(const CurveSpec& c) {
    return {0.0, std::sqrt(c.f_eval(0.0)), 0};
}

ChartData local_expansion(const CurveSpec& c, const CurvePoint& p, int order) {
    require(order >= 1, "InvalidArgument", "chart order must be positive");
    const std::size_t nn = std::size_t(order) + 1;
    ChartData out;
    out.center = p;
    auto roots = poly_roots(c.f);
    const int d = c.degree();
    if (p.at_infinity()) {
        // x = 1/t, y = sheet * t^{-d} sqrt(prod(1 - u_i t^2)); we store the
        // regular factor series of y * t^d.
        Coeffs prod{cplx(1.0)};
        for (const auto& u : roots) {
            Coeffs fac(nn, cplx(0.0));
            fac[0] = 1.0;
            if (nn > 2) fac[2] = -u;
            prod = series_mul(prod, fac, nn);
        }
        out.y_series = series_sqrt(prod, cplx(1.0), nn);
        if (p.inf_sheet < 0)
            for (auto& v : out.y_series) v = -v;
        out.x_series.assign(nn, cplx(0.0)); // placeholder: x = 1/t handled by callers
        double rmin = 0.0;
        for (const auto& u : roots) rmin = std::max(rmin, std::abs(std::sqrt(u)));
        out.radius = 0.5 / rmin; // |t| < 1/max|branch|, halved for safety
        return out;
    }
    // Finite point: reject branch points.
    for (const auto& u : roots) {
        cplx w = std::sqrt(u);
        double dist = std::min(std::abs(p.x - w), std::abs(p.x + w));
        require(dist > 1e-9 * (1.0 + std::abs(p.x)), "UnsupportedChart",
                "no series chart at a finite branch point");
    }
    require(point_on_curve(c, p), "InvalidArgument", "chart center not on the curve");
    Coeffs pshift = poly_shift(c.curve_poly(), p.x); // p(x0 + t)
    pshift = series_trunc(std::move(pshift), nn);
    out.y_series = series_sqrt(pshift, p.y, nn);
    out.x_series.assign(nn, cplx(0.0));
    out.x_series[0] = p.x;
    if (nn > 1) out.x_series[1] = 1.0;
    double dmin = 1e300;
    for (const auto& u : roots) {
        cplx w = std::sqrt(u);
        dmin = std::min({dmin, std::abs(p.x - w), std::abs(p.x + w)});
    }
    out.radius = 0.5 * dmin;
    return out;
}

} // namespace isoprym
