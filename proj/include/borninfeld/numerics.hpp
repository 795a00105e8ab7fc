#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace borninfeld::numerics {

/// Outcome of an adaptive quadrature. `error_estimate` is a conservative
/// bound on |value - true integral| for integrands within the documented
/// class (smooth, or with an endpoint singularity no worse than x^(-1/2)).
struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

/// Thrown when the node budget is exhausted before the requested tolerance
/// is met. Carries the best estimate so callers can decide what to do with
/// a partially converged value instead of silently using a wrong one.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadratureResult& best_estimate() const { return best_; }

private:
    QuadratureResult best_;
};

/// Gamma function for x > 0 (Lanczos g=7). Relative error <= 1e-13 on
/// [0.1, 10]; the negative axis is intentionally unsupported.
double gamma_fn(double x);

/// Euler Beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), a,b > 0.
/// Computed from the symmetric product, so beta_fn(a,b) == beta_fn(b,a)
/// bit for bit.
double beta_fn(double a, double b);

/// Adaptive tanh-sinh (double exponential) quadrature of f over [a, b].
/// b may be +infinity, in which case the integral is split at a finite cut
/// and the tail mapped through x -> 1/t (f must decay at least as x^-2).
/// Endpoint singularities up to (x-a)^(-1/2) are absorbed by the rule;
/// `singular_at_a` marks that f may not be evaluable arbitrarily close to a
/// (abscissas that round onto the endpoint are skipped either way).
/// Throws QuadratureError if the level budget is exhausted above `tol`.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12, bool singular_at_a = false);

/// Brent-style bracketed root finding: inverse-quadratic/secant steps with a
/// bisection fallback. Requires f(lo) and f(hi) of opposite sign (the
/// bracket may be given in either orientation). Returns x with bracket
/// width <= tol (plus a machine-precision floor).
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-12);

struct MinimumResult {
    double argmin = 0.0;
    double minimum = 0.0;
    bool at_boundary = false;  // argmin landed on lo or hi (f not interior-unimodal)
};

/// Brent minimization (golden section + parabolic interpolation) of a
/// unimodal f on [lo, hi] to tolerance tol on the argmin.
MinimumResult find_minimum(const std::function<double(double)>& f, double lo, double hi,
                           double tol = 1e-8);

/// Chebyshev interpolant on [lo, hi] with a certified error bound.
/// max_abs_error is measured on a >= 10x oversampled off-grid set during the
/// fit and inflated by a safety factor; evaluation outside the domain is a
/// contract violation and throws.
class Interpolant1D {
public:
    Interpolant1D() = default;
    Interpolant1D(double lo, double hi, std::vector<double> chebyshev_coefficients,
                  double max_abs_error);

    double operator()(double x) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double max_abs_error() const { return max_abs_error_; }
    const std::vector<double>& coefficients() const { return coefficients_; }

private:
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<double> coefficients_;
    double max_abs_error_ = 0.0;
};

class InterpolationError : public std::runtime_error {
public:
    InterpolationError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_(achieved_error) {}
    double achieved_error() const { return achieved_; }

private:
    double achieved_;
};

/// Fit a Chebyshev interpolant of f on [lo, hi], doubling the node count
/// until the off-grid verified error is <= target_error. Throws
/// InterpolationError (carrying the achieved error) once max_degree is
/// exceeded. f must be smooth on the closed interval.
Interpolant1D fit_interpolant(const std::function<double(double)>& f, double lo, double hi,
                              double target_error, int max_degree = 512);

}  // namespace borninfeld::numerics
