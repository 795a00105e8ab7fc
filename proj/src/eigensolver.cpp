#include "borninfeld/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace borninfeld::eigensolver {

using potential::EffectiveChargeModel;

void QuantumNumbers::validate() const {
    if (n < 1 || l < 0 || l > n - 1) {
        throw std::domain_error("QuantumNumbers: need n >= 1 and 0 <= l <= n-1");
    }
}

namespace {

// Sturm-Liouville coefficient q(rho) in u'' = q(rho) u.
struct RadialProblem {
    int l;
    double e;
    double delta;
    const EffectiveChargeModel* model;

    double q(double rho) const {
        const double ll1 = static_cast<double>(l) * (l + 1);
        const double z = (delta == 0.0) ? 1.0 : (*model)(rho / delta);
        return ll1 / (rho * rho) - 2.0 * z / rho - 2.0 * e;
    }
};

struct StepperOptions {
    double rel_tol = 1e-11;
    double max_step = std::numeric_limits<double>::infinity();
    int node_cap = std::numeric_limits<int>::max();
    bool renormalize = true;
    std::vector<std::array<double, 3>>* record = nullptr;  // (rho, u, u')
};

struct StepperResult {
    double u = 0.0, du = 0.0;
    double u_sq_integral = 0.0;  // third state, meaningful when not renormalizing
    int nodes = 0;
    long steps = 0;
};

// Dormand-Prince 5(4) on the augmented state (u, u', int u^2). Adaptive with
// a per-vector relative error norm; the quadrature component does not steer
// the step size. Renormalizes (u, u') every 50 accepted steps when their
// magnitude drifts, so only ratios survive long forbidden-region runs.
StepperResult dopri5(const RadialProblem& prob, double rho0, double rho1,
                     double u0, double du0, const StepperOptions& opt) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - bhat (embedded 4th order error weights)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double direction = (rho1 > rho0) ? 1.0 : -1.0;
    const double span = std::abs(rho1 - rho0);

    double rho = rho0;
    double y[3] = {u0, du0, 0.0};
    double h = direction * std::min({0.1 * std::abs(rho0) + 1e-8, 0.05 * span, opt.max_step});

    StepperResult result;
    double last_sign = (u0 > 0.0) ? 1.0 : (u0 < 0.0 ? -1.0 : 0.0);
    if (opt.record) {
        opt.record->push_back({rho, y[0], y[1]});
    }

    auto rhs = [&prob](double r, const double* s, double* out) {
        out[0] = s[1];
        out[1] = prob.q(r) * s[0];
        out[2] = s[0] * s[0];
    };

    double k1[3];
    rhs(rho, y, k1);

    const long kMaxSteps = 2000000;
    long accepted = 0;
    while ((rho1 - rho) * direction > 0.0) {
        if (++result.steps > kMaxSteps) {
            throw SolverError("integrate_radial: step budget exhausted");
        }
        if ((rho + h - rho1) * direction > 0.0) {
            h = rho1 - rho;
        }
        if (std::abs(h) < 1e-15 * (std::abs(rho) + 1.0)) {
            throw SolverError("integrate_radial: step size underflow");
        }

        double k2[3], k3[3], k4[3], k5[3], k6[3], k7[3], yt[3], y1[3];
        for (int i = 0; i < 3; ++i) yt[i] = y[i] + h * a21 * k1[i];
        rhs(rho + c2 * h, yt, k2);
        for (int i = 0; i < 3; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(rho + c3 * h, yt, k3);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(rho + c4 * h, yt, k4);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(rho + c5 * h, yt, k5);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] +
                    h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(rho + h, yt, k6);
        for (int i = 0; i < 3; ++i)
            y1[i] = y[i] +
                    h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(rho + h, y1, k7);

        const double scale = std::max({std::abs(y[0]), std::abs(y[1]), std::abs(y1[0]),
                                       std::abs(y1[1]), 1e-290});
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            err = std::max(err, std::abs(ei));
        }
        err /= opt.rel_tol * scale;

        if (err <= 1.0) {
            rho += h;
            const double sign = (y1[0] > 0.0) ? 1.0 : (y1[0] < 0.0 ? -1.0 : 0.0);
            if (sign != 0.0 && last_sign != 0.0 && sign != last_sign) {
                if (++result.nodes > opt.node_cap) {
                    result.u = y1[0];
                    result.du = y1[1];
                    return result;
                }
            }
            if (sign != 0.0) {
                last_sign = sign;
            }
            for (int i = 0; i < 3; ++i) y[i] = y1[i];
            for (int i = 0; i < 3; ++i) k1[i] = k7[i];  // FSAL
            ++accepted;
            if (opt.renormalize && accepted % 50 == 0) {
                const double m = std::max(std::abs(y[0]), std::abs(y[1]));
                if (m > 1e6 || (m < 1e-6 && m > 0.0)) {
                    y[0] /= m;
                    y[1] /= m;
                    k1[1] = prob.q(rho) * y[0];
                    k1[0] = y[1];
                }
            }
            if (opt.record) {
                opt.record->push_back({rho, y[0], y[1]});
            }
        }
        const double factor =
            (err > 0.0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        h *= factor;
        if (std::abs(h) > opt.max_step) {
            h = direction * opt.max_step;
        }
    }
    result.u = y[0];
    result.du = y[1];
    result.u_sq_integral = y[2];
    return result;
}

double choose_rho_max(double e, double rho_turn, const SolveOptions& opts) {
    const double kappa = std::sqrt(-2.0 * e);
    return std::max({opts.kappa_rho_max / kappa, 1.3 * rho_turn + 10.0 / kappa, 10.0});
}

struct Shot {
    double u, du;
    int nodes;
};

Shot shoot_outward(const RadialProblem& prob, double rho_to, double rel_tol,
                   const SolveOptions& opts, int node_cap = std::numeric_limits<int>::max()) {
    const double rho0 = opts.rho_origin;
    const double u0 = std::pow(rho0, prob.l + 1);
    const double du0 = (prob.l + 1) * std::pow(rho0, prob.l);
    StepperOptions so;
    so.rel_tol = rel_tol;
    so.node_cap = node_cap;
    StepperResult r = dopri5(prob, rho0, rho_to, u0, du0, so);
    return {r.u, r.du, r.nodes};
}

Shot shoot_inward(const RadialProblem& prob, double rho_max, double rho_to, double rel_tol) {
    const double kappa = std::sqrt(-2.0 * prob.e);
    StepperOptions so;
    so.rel_tol = rel_tol;
    StepperResult r = dopri5(prob, rho_max, rho_to, 1.0, -kappa, so);
    return {r.u, r.du, r.nodes};
}

// Normalized Wronskian of the two shooting branches at rho_match: same roots
// as the log-derivative difference, but free of poles where u vanishes.
double matching_residual(const RadialProblem& prob, double rho_match, double rho_max,
                         const SolveOptions& opts) {
    const Shot out = shoot_outward(prob, rho_match, opts.ode_rel_tol, opts);
    const Shot in = shoot_inward(prob, rho_max, rho_match, opts.ode_rel_tol);
    const double norm_out = std::abs(out.u) + std::abs(out.du);
    const double norm_in = std::abs(in.u) + std::abs(in.du);
    return (out.du * in.u - in.du * out.u) / (norm_out * norm_in);
}

}  // namespace

std::array<double, 2> radial_rhs(double rho, const std::array<double, 2>& state, double e,
                                 int l, const EffectiveChargeModel& model, double delta) {
    if (!(rho > 0.0)) {
        throw std::domain_error("radial_rhs: rho must be positive");
    }
    RadialProblem prob{l, e, delta, &model};
    return {state[1], prob.q(rho) * state[0]};
}

double outer_turning_point(double e, int l, const EffectiveChargeModel& model, double delta,
                           int n_fallback) {
    RadialProblem prob{l, e, delta, &model};
    const double kappa = std::sqrt(std::max(-2.0 * e, 1e-12));
    const double rho_hi = std::max({4.0 * n_fallback * n_fallback, 2.0 * 35.0 / kappa, 50.0});
    const double rho_lo = 1e-4;
    const int kScan = 240;
    double prev_rho = rho_hi;
    double prev_q = prob.q(rho_hi);
    for (int i = 1; i <= kScan; ++i) {
        const double rho = rho_hi * std::pow(rho_lo / rho_hi, static_cast<double>(i) / kScan);
        const double qv = prob.q(rho);
        if (prev_q > 0.0 && qv <= 0.0) {
            return numerics::find_root([&prob](double r) { return prob.q(r); }, rho,
                                       prev_rho, 1e-10 * prev_rho);
        }
        prev_rho = rho;
        prev_q = qv;
    }
    return static_cast<double>(n_fallback) * n_fallback;
}

IntegrationResult integrate_radial(double e, int l, const EffectiveChargeModel& model,
                                   double delta, double rho_max, Direction direction,
                                   std::optional<double> rho_match, const SolveOptions& opts) {
    if (!(e < 0.0)) {
        throw std::domain_error("integrate_radial: bound-state search requires e < 0");
    }
    RadialProblem prob{l, e, delta, &model};
    IntegrationResult res;
    if (direction == Direction::Outward) {
        const double target = rho_match.value_or(rho_max);
        const Shot s = shoot_outward(prob, target, opts.ode_rel_tol, opts);
        res.node_count = s.nodes;
        res.u = s.u;
        res.du = s.du;
    } else {
        const double target = rho_match.value_or(opts.rho_origin);
        const Shot s = shoot_inward(prob, rho_max, target, opts.ode_rel_tol);
        res.node_count = s.nodes;
        res.u = s.u;
        res.du = s.du;
    }
    res.log_derivative = res.du / res.u;
    return res;
}

namespace {

int count_nodes(double e, int l, const EffectiveChargeModel& model, double delta,
                const SolveOptions& opts, int cap, int n_fallback) {
    RadialProblem prob{l, e, delta, &model};
    const double rho_turn = outer_turning_point(e, l, model, delta, n_fallback);
    const double rho_max = choose_rho_max(e, rho_turn, opts);
    return shoot_outward(prob, rho_max, opts.node_scan_rel_tol, opts, cap).nodes;
}

}  // namespace

EigenResult solve_eigenvalue(double delta, QuantumNumbers qn, const EffectiveChargeModel& model,
                             const SolveOptions& opts) {
    qn.validate();
    if (!(delta >= 0.0)) {
        throw std::domain_error("solve_eigenvalue: delta must be nonnegative");
    }
    const int k = qn.radial_nodes();

    auto nodes_at = [&](double e) {
        return count_nodes(e, qn.l, model, delta, opts, k + 2, qn.n);
    };

    double lo = opts.e_window_lo;
    double hi = opts.e_window_hi;
    bool bracketed = false;
    if (opts.bracket_hint) {
        double hlo = std::max(opts.bracket_hint->first, opts.e_window_lo);
        double hhi = std::min(opts.bracket_hint->second, opts.e_window_hi);
        if (hlo < hhi && nodes_at(hlo) <= k && nodes_at(hhi) >= k + 1) {
            lo = hlo;
            hi = hhi;
            bracketed = true;
        }
    }
    if (!bracketed) {
        if (nodes_at(lo) > k) {
            throw SolverError("solve_eigenvalue: state lies below the search window");
        }
        if (nodes_at(hi) <= k) {
            throw SolverError("solve_eigenvalue: state not found in the search window");
        }
    }

    // Node-count bisection down to a window holding exactly this eigenvalue.
    for (int iter = 0; iter < 80; ++iter) {
        if (hi - lo <= 0.02 * std::max(std::abs(lo), 1e-4)) {
            break;
        }
        const double mid = 0.5 * (lo + hi);
        if (nodes_at(mid) <= k) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    auto residual = [&](double e) {
        const double rho_turn = std::clamp(
            outer_turning_point(e, qn.l, model, delta, qn.n), 10.0 * opts.rho_origin,
            0.9 * choose_rho_max(e, 0.0, opts));
        RadialProblem prob{qn.l, e, delta, &model};
        return matching_residual(prob, rho_turn, choose_rho_max(e, rho_turn, opts), opts);
    };

    double r_lo = residual(lo);
    double r_hi = residual(hi);
    if (r_lo * r_hi > 0.0) {
        // A bisection midpoint can land on the eigenvalue itself, where the
        // residual is pure noise with arbitrary sign. Widen around the
        // smaller endpoint until a genuine sign change appears.
        const double center = (std::abs(r_lo) < std::abs(r_hi)) ? lo : hi;
        for (double w = std::max(1e-8 * std::abs(center), 1e-13);
             w <= 0.02 * std::abs(center); w *= 10.0) {
            const double a = center - w;
            const double b = std::min(center + w, opts.e_window_hi);
            const double ra = residual(a);
            const double rb = residual(b);
            if (ra * rb < 0.0) {
                lo = a;
                hi = b;
                r_lo = ra;
                r_hi = rb;
                break;
            }
        }
    }
    for (int iter = 0; iter < 20 && r_lo * r_hi > 0.0; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (nodes_at(mid) <= k) {
            lo = mid;
            r_lo = residual(lo);
        } else {
            hi = mid;
            r_hi = residual(hi);
        }
    }
    if (r_lo * r_hi > 0.0) {
        // Fine scan as a last resort before giving up on the sign change.
        bool found = false;
        double prev_e = lo, prev_r = r_lo;
        for (int i = 1; i <= 16; ++i) {
            const double e = lo + (hi - lo) * i / 16.0;
            const double r = residual(e);
            if (prev_r * r <= 0.0) {
                lo = prev_e;
                hi = e;
                found = true;
                break;
            }
            prev_e = e;
            prev_r = r;
        }
        if (!found) {
            throw SolverError("solve_eigenvalue: matching function has no sign change");
        }
    }

    const double e_star =
        numerics::find_root(residual, lo, hi, opts.eig_rel_tol * std::abs(lo));

    EigenResult result;
    result.qn = qn;
    result.e_scaled = e_star;
    result.residual = std::abs(residual(e_star));
    const double rho_turn = outer_turning_point(e_star, qn.l, model, delta, qn.n);
    result.rho_max = choose_rho_max(e_star, rho_turn, opts);
    RadialProblem prob{qn.l, e_star, delta, &model};
    result.nodes = shoot_outward(prob, rho_turn, opts.ode_rel_tol, opts).nodes;
    result.converged = (result.nodes == k) && (result.residual < 1e-6);
    return result;
}

double perturbative_shift(double delta, QuantumNumbers qn) {
    qn.validate();
    const double b2 = potential::series_coefficients().far[2];
    const double n3 = static_cast<double>(qn.n) * qn.n * qn.n;
    return -b2 * delta / (n3 * (qn.l + 0.5));
}

RadialSolution radial_wavefunction(const EigenResult& result, const EffectiveChargeModel& model,
                                   double delta, const SolveOptions& opts) {
    if (!result.converged) {
        throw SolverError("radial_wavefunction: EigenResult is not converged");
    }
    RadialProblem prob{result.qn.l, result.e_scaled, delta, &model};
    const double rho_turn =
        std::clamp(outer_turning_point(result.e_scaled, result.qn.l, model, delta, result.qn.n),
                   10.0 * opts.rho_origin, 0.9 * result.rho_max);

    std::vector<std::array<double, 3>> out_pts, in_pts;
    StepperOptions so;
    so.rel_tol = opts.ode_rel_tol;
    so.renormalize = false;
    so.max_step = 0.1;

    so.record = &out_pts;
    StepperResult out = dopri5(prob, opts.rho_origin, rho_turn,
                               std::pow(opts.rho_origin, result.qn.l + 1),
                               (result.qn.l + 1) * std::pow(opts.rho_origin, result.qn.l), so);

    so.record = &in_pts;
    const double kappa = std::sqrt(-2.0 * result.e_scaled);
    StepperResult in = dopri5(prob, result.rho_max, rho_turn, 1.0, -kappa, so);

    // Stitch: scale the inward branch so u is continuous at the match point.
    const double lambda = out.u / in.u;
    RadialSolution sol;
    std::vector<double> du_values;
    sol.rho_grid.reserve(out_pts.size() + in_pts.size());
    sol.u_values.reserve(out_pts.size() + in_pts.size());
    for (const auto& p : out_pts) {
        sol.rho_grid.push_back(p[0]);
        sol.u_values.push_back(p[1]);
        du_values.push_back(p[2]);
    }
    for (auto it = in_pts.rbegin(); it != in_pts.rend(); ++it) {
        if (!sol.rho_grid.empty() && (*it)[0] <= sol.rho_grid.back()) {
            continue;
        }
        sol.rho_grid.push_back((*it)[0]);
        sol.u_values.push_back((*it)[1] * lambda);
        du_values.push_back((*it)[2] * lambda);
    }

    // in.u_sq_integral accumulated against decreasing rho, hence negative.
    sol.normalization = out.u_sq_integral + lambda * lambda * std::abs(in.u_sq_integral);
    const double scale = 1.0 / std::sqrt(sol.normalization);
    for (std::size_t i = 0; i < sol.u_values.size(); ++i) {
        sol.u_values[i] *= scale;
        du_values[i] *= scale;
    }

    // Node positions refined on the cubic Hermite model of each bracketing
    // step (u and u' are both recorded, so the local error is O(h^4)).
    for (std::size_t i = 1; i < sol.u_values.size(); ++i) {
        const double u0 = sol.u_values[i - 1];
        const double u1 = sol.u_values[i];
        if (u0 == 0.0 || u1 == 0.0 || (u0 > 0.0) == (u1 > 0.0)) {
            continue;
        }
        const double r0 = sol.rho_grid[i - 1], r1 = sol.rho_grid[i];
        const double h = r1 - r0;
        const double d0 = du_values[i - 1] * h, d1 = du_values[i] * h;
        auto hermite = [&](double t) {
            const double t2 = t * t, t3 = t2 * t;
            return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * d0 +
                   (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * d1;
        };
        double a = 0.0, b = 1.0, fa = hermite(a);
        for (int iter = 0; iter < 60; ++iter) {
            const double m = 0.5 * (a + b);
            const double fm = hermite(m);
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        sol.node_positions.push_back(r0 + 0.5 * (a + b) * h);
    }
    return sol;
}

}  // namespace borninfeld::eigensolver
