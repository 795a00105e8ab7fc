#include "borninfeld/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace borninfeld::numerics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2.0;

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("gamma_fn: argument must be positive");
    }
    // Lanczos approximation, g = 7, 9 coefficients (~15 significant digits).
    static const double g = 7.0;
    static const double coeff[9] = {
        0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
        771.32342877765313,     -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

    // Shift small arguments up with the recurrence; keeps the kernel on x >= 0.5
    // where the coefficient set is rated.
    if (x < 0.5) {
        return gamma_fn(x + 1.0) / x;
    }
    const double z = x - 1.0;
    double a = coeff[0];
    for (int i = 1; i < 9; ++i) {
        a += coeff[i] / (z + i);
    }
    const double t = z + g + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double beta_fn(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("beta_fn: arguments must be positive");
    }
    return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b);
}

namespace {

// One tanh-sinh pass over a finite interval [a, b]. Abscissas are generated
// pairwise from the endpoint offsets r = 1 - tanh((pi/2) sinh t), computed in
// the cancellation-free form 2/(1 + e^{2s}), so integrable endpoint
// singularities stay representable. Points whose offset underflows to zero
// are skipped; their weights underflow even faster.
class TanhSinh {
public:
    TanhSinh(const std::function<double(double)>& f, double a, double b)
        : f_(f), a_(a), b_(b), half_(0.5 * (b - a)) {}

    QuadratureResult run(double tol, int max_level = 14) {
        double h = 1.0;
        double sum = eval_pair(0.0);  // t = 0 contributes a single point
        for (double t = h; t <= kTMax; t += h) {
            sum += eval_pair(t);
        }
        long evals = evaluations_;
        double estimate = sum * h * half_;
        double prev = estimate;
        double err = std::numeric_limits<double>::infinity();

        for (int level = 1; level <= max_level; ++level) {
            h *= 0.5;
            // new abscissas: odd multiples of h
            for (double t = h; t <= kTMax; t += 2.0 * h) {
                sum += eval_pair(t);
            }
            estimate = sum * h * half_;
            err = std::abs(estimate - prev);
            prev = estimate;
            evals = evaluations_;
            const double floor = 8.0 * std::numeric_limits<double>::epsilon() *
                                 (std::abs(estimate) + 1e-300);
            if (level >= 2 && (err <= tol || err <= floor)) {
                return {estimate, std::max(err, floor), evals};
            }
        }
        throw QuadratureError("integrate: tanh-sinh level budget exhausted",
                              {estimate, err, evals});
    }

private:
    static constexpr double kTMax = 6.0;

    // g'(t) f(x(t)) summed over the +/- pair at |t|.
    double eval_pair(double t) {
        const double s = kHalfPi * std::sinh(t);
        const double weight = kHalfPi * std::cosh(t) * sech_sq(s);
        if (weight == 0.0) {
            return 0.0;
        }
        const double r = offset(s);  // 1 - tanh(s), in (0, 1]
        double acc = 0.0;
        const double x_lo = a_ + half_ * r;
        const double x_hi = b_ - half_ * r;
        if (x_lo > a_) {
            ++evaluations_;
            acc += f_(x_lo);
        }
        if (t > 0.0 && x_hi < b_) {
            ++evaluations_;
            acc += f_(x_hi);
        }
        return acc * weight;
    }

    static double offset(double s) { return 2.0 / (1.0 + std::exp(2.0 * s)); }

    static double sech_sq(double s) {
        const double e = std::exp(-2.0 * s);
        const double d = 1.0 + e;
        return 4.0 * e / (d * d);
    }

    const std::function<double(double)>& f_;
    double a_, b_, half_;
    long evaluations_ = 0;
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol, bool singular_at_a) {
    (void)singular_at_a;  // the rule never evaluates at the endpoints
    if (!(tol > 0.0)) {
        throw std::domain_error("integrate: tolerance must be positive");
    }
    if (std::isinf(b)) {
        // Split at a finite cut, then map the tail through x = 1/t so the
        // assumed x^-2 decay becomes a bounded integrand on (0, 1/cut].
        const double cut = std::max({1.0, a + 1.0, 2.0 * std::abs(a)});
        QuadratureResult head = integrate(f, a, cut, 0.5 * tol, singular_at_a);
        auto mapped = [&f](double t) {
            const double t2 = t * t;
            const double x = 1.0 / t;
            if (t2 == 0.0 || !std::isfinite(x)) {
                return 0.0;  // below double range; assumed x^-2 decay leaves O(t) mass
            }
            const double v = f(x);
            return (v == 0.0) ? 0.0 : v / t2;
        };
        QuadratureResult tail = integrate(mapped, 0.0, 1.0 / cut, 0.5 * tol, false);
        return {head.value + tail.value, head.error_estimate + tail.error_estimate,
                head.evaluations + tail.evaluations};
    }
    if (!(b > a)) {
        if (b == a) {
            return {0.0, 0.0, 1};
        }
        QuadratureResult r = integrate(f, b, a, tol, false);
        return {-r.value, r.error_estimate, r.evaluations};
    }
    return TanhSinh(f, a, b).run(tol);
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double a = std::min(lo, hi);
    double b = std::max(lo, hi);
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) {
        throw std::invalid_argument("find_root: no sign change over the bracket");
    }

    // Brent: b is the current best, a the previous iterate, c keeps the bracket.
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 =
            2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) {
            return b;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic / secant step
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

MinimumResult find_minimum(const std::function<double(double)>& f, double lo, double hi,
                           double tol) {
    double a = std::min(lo, hi);
    double b = std::max(lo, hi);
    const double golden = 0.3819660112501051;  // (3 - sqrt 5)/2

    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < 200; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol1 = tol * std::abs(x) + 1e-14;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) {
            break;
        }
        double p = 0.0, q = 0.0, r = 0.0;
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
                p < q * (b - x)) {
                parabolic = true;
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) {
                    d = (x < m) ? tol1 : -tol1;
                }
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }

    MinimumResult result{x, fx, false};
    // Endpoint wins: report the boundary rather than an interior near-miss.
    const double f_lo = f(std::min(lo, hi));
    const double f_hi = f(std::max(lo, hi));
    if (f_lo < result.minimum) {
        result = {std::min(lo, hi), f_lo, true};
    }
    if (f_hi < result.minimum) {
        result = {std::max(lo, hi), f_hi, true};
    }
    const double span = std::max(lo, hi) - std::min(lo, hi);
    if (result.argmin - std::min(lo, hi) < 2.0 * tol * span ||
        std::max(lo, hi) - result.argmin < 2.0 * tol * span) {
        result.at_boundary = true;
    }
    return result;
}

Interpolant1D::Interpolant1D(double lo, double hi, std::vector<double> chebyshev_coefficients,
                             double max_abs_error)
    : lo_(lo), hi_(hi), coefficients_(std::move(chebyshev_coefficients)),
      max_abs_error_(max_abs_error) {
    if (!(hi_ > lo_)) {
        throw std::domain_error("Interpolant1D: empty domain");
    }
}

double Interpolant1D::operator()(double x) const {
    if (!(x >= lo_ && x <= hi_)) {
        throw std::domain_error("Interpolant1D: evaluation outside [lo, hi]");
    }
    // Clenshaw recurrence on the mapped variable in [-1, 1].
    const double z = (2.0 * x - (lo_ + hi_)) / (hi_ - lo_);
    const double z2 = 2.0 * z;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t i = coefficients_.size(); i-- > 1;) {
        const double t = b1;
        b1 = z2 * b1 - b2 + coefficients_[i];
        b2 = t;
    }
    return z * b1 - b2 + coefficients_[0];
}

namespace {

std::vector<double> chebyshev_fit(const std::function<double(double)>& f, double lo,
                                  double hi, int n) {
    // First-kind nodes; coefficients by direct cosine sums.
    std::vector<double> fx(n);
    for (int k = 0; k < n; ++k) {
        const double theta = kPi * (k + 0.5) / n;
        const double x = 0.5 * (hi - lo) * std::cos(theta) + 0.5 * (hi + lo);
        fx[k] = f(x);
    }
    std::vector<double> c(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            s += fx[k] * std::cos(kPi * j * (k + 0.5) / n);
        }
        c[j] = s * (j == 0 ? 1.0 : 2.0) / n;
    }
    return c;
}

}  // namespace

Interpolant1D fit_interpolant(const std::function<double(double)>& f, double lo, double hi,
                              double target_error, int max_degree) {
    if (!(hi > lo)) {
        throw std::domain_error("fit_interpolant: empty domain");
    }
    if (!(target_error > 0.0)) {
        throw std::domain_error("fit_interpolant: target_error must be positive");
    }
    double achieved = std::numeric_limits<double>::infinity();
    for (int n = 8; n <= max_degree + 1; n *= 2) {
        n = std::min(n, max_degree + 1);
        std::vector<double> coeff = chebyshev_fit(f, lo, hi, n);
        Interpolant1D candidate(lo, hi, coeff, 0.0);

        // Verify off grid: uniform-in-angle points of a coprime family plus
        // the endpoints, >= 10x oversampled.
        const int m = 10 * n + 7;
        double max_err = 0.0;
        double scale = 0.0;
        for (int k = 0; k <= m; ++k) {
            const double x = std::clamp(lo + (hi - lo) * k / m, lo, hi);
            const double fv = f(x);
            max_err = std::max(max_err, std::abs(candidate(x) - fv));
            scale = std::max(scale, std::abs(fv));
        }
        const double floor = 8.0 * std::numeric_limits<double>::epsilon() * (scale + 1.0);
        const double certified = std::max(3.0 * max_err, floor);
        achieved = std::min(achieved, certified);
        if (certified <= target_error) {
            return Interpolant1D(lo, hi, std::move(coeff), certified);
        }
        if (n >= max_degree + 1) {
            break;
        }
    }
    throw InterpolationError("fit_interpolant: degree budget exhausted", achieved);
}

}  // namespace borninfeld::numerics
