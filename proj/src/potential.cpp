#include "borninfeld/potential.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace borninfeld::potential {

using numerics::beta_fn;
using numerics::fit_interpolant;
using numerics::integrate;
using numerics::Interpolant1D;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Factored radicand: multiplying 1/4 + y^2 - y sqrt(1+y^2) by its conjugate
// gives (1 - 8 y^2)/16, so the radicand equals
//   (y* - y)(y* + y) / (2 (1/4 + y^2 + y sqrt(1+y^2))),
// with the vanishing endpoint isolated in the (y* - y) factor.
double radicand_factor(double y) {
    const double s = std::sqrt(1.0 + y * y);
    return (kYStar + y) / (2.0 * (0.25 + y * y + y * s));
}

// Numerator of f'(y): d/dy of the radicand, i.e. 2y - (1+2y^2)/sqrt(1+y^2).
double fprime_numerator(double y) {
    const double s = std::sqrt(1.0 + y * y);
    return 2.0 * y - (1.0 + 2.0 * y * y) / s;
}

// f and f' with the endpoint distance eta = y* - y supplied exactly by the
// caller. This keeps full relative precision arbitrarily close to y*, which
// the quadrature needs (the integrand carries the (y*-y)^(-1/2) divergence).
double f_from_eta(double y, double eta) {
    return std::sqrt(eta * radicand_factor(y));
}

double fprime_from_eta(double y, double eta) {
    return fprime_numerator(y) / (2.0 * f_from_eta(y, eta));
}

}  // namespace

void ModelParams::validate() const {
    if (!(alpha > 0.0)) {
        throw std::domain_error("ModelParams: alpha must be positive");
    }
    if (!(delta >= 0.0)) {
        throw std::domain_error("ModelParams: delta must be nonnegative");
    }
}

double f_born(double y) {
    if (!(y >= 0.0) || y > kYStar) {
        throw std::domain_error("f_born: y outside [0, 1/(2 sqrt 2)]");
    }
    return f_from_eta(y, kYStar - y);
}

double f_born_prime(double y) {
    if (!(y >= 0.0) || y >= kYStar) {
        throw std::domain_error("f_born_prime: y outside [0, 1/(2 sqrt 2))");
    }
    return fprime_from_eta(y, kYStar - y);
}

double w_quadrature(double u, double tol) {
    if (!(u >= 0.0)) {
        throw std::domain_error("w_quadrature: u must be nonnegative");
    }
    if (u == 0.0) {
        return 0.0;  // continuity value: no short-distance singularity
    }
    if (std::isinf(u)) {
        return series_coefficients().far[0];
    }
    // Substituting y = 1/(u x) and zeta = y* - y turns the x-integral into
    //   W(u) = int_0^{y*} f'(y* - zeta) / sqrt(u^2 y^4 + u^-2) dzeta.
    // The f' singularity sits at zeta = 0 where the double-exponential rule
    // resolves endpoint offsets down to ~1e-300; integrating in x instead
    // would pin the singularity at the non-zero abscissa 2*sqrt(2)/u, where
    // rounding of 1/(u x) erases the distance information and caps the
    // attainable absolute accuracy near 1e-8.
    const double inv_u_sq = 1.0 / (u * u);
    auto integrand = [u, inv_u_sq](double zeta) {
        const double y = kYStar - zeta;
        const double y2 = y * y;
        return fprime_from_eta(y, zeta) / std::sqrt(u * u * y2 * y2 + inv_u_sq);
    };
    return integrate(integrand, 0.0, kYStar, tol, /*singular_at_a=*/true).value;
}

namespace {

NearCoefficientFit fit_near_coefficients() {
    NearCoefficientFit fit;
    fit.a1_candidate_128 = 3.0 / 40.0 - 3.0 * kPi / 128.0;
    fit.a1_candidate_138 = 3.0 / 40.0 - 3.0 * kPi / 138.0;
    fit.a2_closed_form = -29.0 / 672.0 + 225.0 * kPi / 16384.0;
    fit.a3_closed_form = 1667.0 / 54912.0 - 20265.0 * kPi / 2097152.0;

    // Least squares for g(u) = (W(u)/u + 1/2)/u^4 = a1 + a2 u^4 + a3 u^8 + a4 u^12.
    // The a4 column absorbs the truncation so a1..a3 come out clean.
    const int kPoints = 9;
    double ata[4][4] = {};
    double atb[4] = {};
    for (int i = 0; i < kPoints; ++i) {
        const double u = 0.2 + 0.1 * i;
        const double w = w_quadrature(u, 1e-14);
        const double u4 = u * u * u * u;
        const double g = (w / u + 0.5) / u4;
        const double row[4] = {1.0, u4, u4 * u4, u4 * u4 * u4};
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                ata[r][c] += row[r] * row[c];
            }
            atb[r] += row[r] * g;
        }
    }
    // 4x4 Gaussian elimination with partial pivoting.
    double m[4][5];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) m[r][c] = ata[r][c];
        m[r][4] = atb[r];
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        for (int c = 0; c < 5; ++c) std::swap(m[col][c], m[piv][c]);
        for (int r = col + 1; r < 4; ++r) {
            const double fac = m[r][col] / m[col][col];
            for (int c = col; c < 5; ++c) m[r][c] -= fac * m[col][c];
        }
    }
    double sol[4];
    for (int r = 3; r >= 0; --r) {
        double s = m[r][4];
        for (int c = r + 1; c < 4; ++c) s -= m[r][c] * sol[c];
        sol[r] = s / m[r][r];
    }
    fit.a1 = sol[0];
    fit.a2 = sol[1];
    fit.a3 = sol[2];
    fit.residual_128 = fit.a1 - fit.a1_candidate_128;
    fit.residual_138 = fit.a1 - fit.a1_candidate_138;
    return fit;
}

}  // namespace

const NearCoefficientFit& near_coefficient_fit() {
    static const NearCoefficientFit fit = fit_near_coefficients();
    return fit;
}

const SeriesCoefficients& series_coefficients() {
    static const SeriesCoefficients coeffs = [] {
        SeriesCoefficients c;
        c.far = {-0.25 * beta_fn(0.25, 0.25), 1.0, 0.75 * beta_fn(0.75, 0.75), 2.0};
        const NearCoefficientFit& fit = near_coefficient_fit();
        c.near = {-0.5, fit.a1, fit.a2, fit.a3};
        return c;
    }();
    return coeffs;
}

double w_series_far(double u) {
    if (!(u >= kSeriesBreak)) {
        throw std::domain_error("w_series_far: u below 2 sqrt 2");
    }
    const auto& b = series_coefficients().far;
    const double v = 1.0 / u;
    return b[0] + v * (b[1] + v * (b[2] + v * b[3]));
}

double w_series_near(double u) {
    if (!(u >= 0.0) || u >= kSeriesBreak) {
        throw std::domain_error("w_series_near: u outside [0, 2 sqrt 2)");
    }
    if (u == 0.0) {
        return 0.0;
    }
    const auto& a = series_coefficients().near;
    const double u4 = u * u * u * u;
    return u * (a[0] + u4 * (a[1] + u4 * (a[2] + u4 * a[3])));
}

double PotentialTable::operator()(double u) const {
    if (!(u >= 0.0)) {
        throw std::domain_error("PotentialTable: u must be nonnegative");
    }
    if (u <= kSeriesBreak) {
        return u * near(u);
    }
    if (u <= u_far) {
        return mid(1.0 / u);
    }
    return w_series_far(u);
}

std::shared_ptr<const PotentialTable> build_potential_table(double target_error) {
    if (!(target_error >= 1e-11)) {
        throw std::domain_error("build_potential_table: target_error below 1e-11");
    }
    auto table = std::make_shared<PotentialTable>();
    table->u_far = 1000.0;  // far-series remainder ~5.9e-12 there

    const double qtol = std::min(1e-13, target_error / 30.0);
    const auto& a = series_coefficients().near;

    // h(u) = W(u)/u; the truncated near series is exact to ~1e-20 below 0.15
    // and avoids dividing quadrature noise by a small u.
    auto h = [&](double u) {
        if (u < 0.15) {
            const double u4 = u * u * u * u;
            return a[0] + u4 * (a[1] + u4 * (a[2] + u4 * a[3]));
        }
        return w_quadrature(u, qtol * std::max(u, 0.15)) / u;
    };
    table->near = fit_interpolant(h, 0.0, kSeriesBreak, target_error / 3.0 / kSeriesBreak);

    auto m = [&](double v) { return w_quadrature(1.0 / v, qtol); };
    table->mid = fit_interpolant(m, 1.0 / table->u_far, 1.0 / kSeriesBreak,
                                 target_error / 3.0);

    // Composite verification against the quadrature, off grid on both ranges.
    double observed = 0.0;
    const PotentialTable& t = *table;
    for (int i = 0; i <= 120; ++i) {
        const double u = kSeriesBreak * i / 120.0;
        observed = std::max(observed, std::abs(t(u) - w_quadrature(u, qtol)));
    }
    for (int i = 0; i <= 120; ++i) {
        const double u = kSeriesBreak * std::pow(table->u_far / kSeriesBreak, i / 120.0);
        observed = std::max(observed, std::abs(t(u) - w_quadrature(u, qtol)));
    }
    // Continuity across the breakpoints.
    observed = std::max(observed, std::abs(t(std::nextafter(kSeriesBreak, 0.0)) -
                                           t(std::nextafter(kSeriesBreak, 10.0))));
    observed = std::max(observed, std::abs(t(table->u_far) - w_series_far(table->u_far)));

    table->certified_error = std::max(2.0 * observed, 1e-15);
    if (table->certified_error > target_error) {
        throw numerics::InterpolationError("build_potential_table: certification failed",
                                           table->certified_error);
    }
    return table;
}

std::shared_ptr<const PotentialTable> shared_potential_table() {
    static const std::shared_ptr<const PotentialTable> table = build_potential_table(1e-10);
    return table;
}

// Test-particle backing: Z_tp(u) = u I(u), I(u) = int_u^inf dx/sqrt(1+x^4).
// I is tabulated on [0, 2 sqrt 2], Z directly on the mid range, and the
// inverse-power expansion takes over past u = 30.
struct EffectiveChargeModel::TestParticleTable {
    Interpolant1D i_near;   // I(u) on [0, 2 sqrt 2]
    Interpolant1D z_mid;    // Z(1/v) on [1/30, 1/(2 sqrt 2)]
    double u_far = 30.0;

    static double integral_tail(double u) {
        auto f = [](double x) { return 1.0 / std::sqrt(1.0 + x * x * x * x); };
        return integrate(f, u, std::numeric_limits<double>::infinity(), 1e-13).value;
    }

    static double z_far(double u) {
        const double w = 1.0 / (u * u * u * u);
        return 1.0 - w * (0.1 - w * (1.0 / 24.0 - w * (5.0 / 208.0)));
    }

    static std::shared_ptr<const TestParticleTable> shared() {
        static const std::shared_ptr<const TestParticleTable> t = [] {
            auto table = std::make_shared<TestParticleTable>();
            table->i_near = fit_interpolant([](double u) { return integral_tail(u); }, 0.0,
                                            kSeriesBreak, 1e-11);
            table->z_mid = fit_interpolant(
                [](double v) { return integral_tail(1.0 / v) / v; }, 1.0 / 30.0,
                1.0 / kSeriesBreak, 1e-11);
            return table;
        }();
        return t;
    }

    double z(double u) const {
        if (u <= kSeriesBreak) {
            return u * i_near(u);
        }
        if (u <= u_far) {
            return z_mid(1.0 / u);
        }
        return z_far(u);
    }
};

EffectiveChargeModel EffectiveChargeModel::coulomb() {
    EffectiveChargeModel m;
    m.kind_ = ChargeModelKind::Coulomb;
    return m;
}

EffectiveChargeModel EffectiveChargeModel::born_infeld_pair(
    std::shared_ptr<const PotentialTable> table) {
    EffectiveChargeModel m;
    m.kind_ = ChargeModelKind::BornInfeldPair;
    m.table_ = table ? std::move(table) : shared_potential_table();
    return m;
}

EffectiveChargeModel EffectiveChargeModel::test_particle() {
    EffectiveChargeModel m;
    m.kind_ = ChargeModelKind::TestParticle;
    m.tp_ = TestParticleTable::shared();
    return m;
}

double EffectiveChargeModel::operator()(double u) const {
    if (!(u >= 0.0)) {
        throw std::domain_error("effective_charge: u must be nonnegative");
    }
    switch (kind_) {
        case ChargeModelKind::Coulomb:
            return 1.0;
        case ChargeModelKind::BornInfeldPair: {
            if (u > table_->u_far) {
                // u (W_far - b0) expanded exactly; avoids the small-difference loss
                const auto& b = series_coefficients().far;
                return 1.0 + (b[2] + b[3] / u) / u;
            }
            return u * ((*table_)(u)-series_coefficients().far[0]);
        }
        case ChargeModelKind::TestParticle:
            return tp_->z(u);
    }
    return 1.0;
}

double effective_charge(double u, const EffectiveChargeModel& model) {
    return model(u);
}

double self_energy_shift(const ModelParams& params) {
    params.validate();
    if (params.delta == 0.0) {
        throw std::domain_error("self_energy_shift: undefined in the Coulomb limit");
    }
    return params.alpha * params.alpha / params.delta * 0.25 * beta_fn(0.25, 0.25);
}

double pair_potential_phi(double r, double beta, const PotentialTable& table) {
    if (!(beta > 0.0) || !(r >= 0.0)) {
        throw std::domain_error("pair_potential_phi: need r >= 0, beta > 0");
    }
    return table(r / beta) / beta;
}

}  // namespace borninfeld::potential
