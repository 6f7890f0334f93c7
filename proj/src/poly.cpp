#include "isoprym/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isoprym {

cplx poly_eval(const Coeffs& p, cplx x) {
    cplx acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

cplx poly_eval_derivative(const Coeffs& p, cplx x) {
    cplx acc = 0.0;
    for (std::size_t k = p.size(); k-- > 1;)
        acc = acc * x + double(k) * p[k];
    return acc;
}

Coeffs poly_derivative(const Coeffs& p) {
    if (p.size() <= 1) return {cplx(0.0)};
    Coeffs d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = double(k) * p[k];
    return d;
}

Coeffs poly_mul(const Coeffs& a, const Coeffs& b) {
    Coeffs c(a.size() + b.size() - 1, cplx(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Coeffs poly_shift(const Coeffs& p, cplx x0) {
    // Repeated synthetic division by (x - x0): remainders are the Taylor
    // coefficients of p at x0.
    Coeffs q = p, out;
    out.reserve(p.size());
    while (!q.empty()) {
        Coeffs quot(q.size() - 1);
        cplx carry = 0.0;
        for (std::size_t i = q.size(); i-- > 0;) {
            cplx value = q[i] + carry * x0;
            if (i == 0) {
                out.push_back(value);
            } else {
                quot[i - 1] = value;
                carry = value;
            }
        }
        q = std::move(quot);
    }
    out.resize(p.size(), cplx(0.0));
    return out;
}

std::vector<cplx> poly_roots(const Coeffs& p) {
    int n = int(p.size()) - 1;
    while (n > 0 && std::abs(p[std::size_t(n)]) == 0.0) --n;
    require(n >= 1, "InvalidPolynomial", "constant polynomial has no roots");
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p[std::size_t(i)] / p[std::size_t(n)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> roots(std::size_t(n));
    for (int i = 0; i < n; ++i) roots[std::size_t(i)] = es.eigenvalues()(i);
    // Newton polish; companion eigenvalues are good seeds.
    for (auto& r : roots) {
        for (int it = 0; it < 12; ++it) {
            cplx f = poly_eval(p, r), df = poly_eval_derivative(p, r);
            if (std::abs(df) == 0.0) break;
            cplx step = f / df;
            r -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(r))) break;
        }
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

double min_pairwise_distance(const std::vector<cplx>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::min(best, std::abs(pts[i] - pts[j]));
    return best;
}

Coeffs series_trunc(Coeffs a, std::size_t n) {
    a.resize(n, cplx(0.0));
    return a;
}

Coeffs series_mul(const Coeffs& a, const Coeffs& b, std::size_t n) {
    Coeffs c(n, cplx(0.0));
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        if (a[i] == cplx(0.0)) continue;
        for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

Coeffs series_inv(const Coeffs& a, std::size_t n) {
    require(!a.empty() && std::abs(a[0]) > 0.0, "SeriesNotInvertible", "zero constant term");
    Coeffs r(n, cplx(0.0));
    r[0] = 1.0 / a[0];
    for (std::size_t k = 1; k < n; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * r[k - j];
        r[k] = -s / a[0];
    }
    return r;
}

Coeffs series_sqrt(const Coeffs& a, cplx sqrt0, std::size_t n) {
    require(!a.empty() && std::abs(a[0]) > 0.0, "SeriesSqrtAtZero", "zero constant term");
    Coeffs r(n, cplx(0.0));
    r[0] = sqrt0;
    for (std::size_t k = 1; k < n; ++k) {
        cplx s = (k < a.size()) ? a[k] : cplx(0.0);
        for (std::size_t j = 1; j < k; ++j) s -= r[j] * r[k - j];
        r[k] = s / (2.0 * r[0]);
    }
    return r;
}

Coeffs series_integrate(const Coeffs& a, std::size_t n) {
    Coeffs r(n, cplx(0.0));
    for (std::size_t k = 0; k + 1 < n && k < a.size(); ++k) r[k + 1] = a[k] / double(k + 1);
    return r;
}

} // namespace isoprym
