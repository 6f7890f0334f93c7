#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace isoprym {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;

/// Error with a stable machine-readable code alongside the human message.
/// Codes are the contract tests assert on (e.g. "ZeroCountMismatch").
class Failure : public std::runtime_error {
public:
    Failure(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw Failure(code, msg);
}

inline void require(bool cond, const std::string& code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

/// Numerical knobs shared across the pipeline. Defaults follow the
/// verification thresholds used throughout the test suite.
struct Tolerances {
    double quad_abs = 1e-10;      // absolute quadrature target per path
    double verify = 1e-6;         // lemma-style residual threshold
    double theta_tail = 1e-12;    // theta truncation tail target
    double int_round = 0.01;      // max residual when rounding periods to integers
    double point_on_curve = 1e-10;
};

} // namespace isoprym
