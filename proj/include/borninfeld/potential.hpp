#pragma once

#include <array>
#include <memory>
#include <optional>

#include "borninfeld/numerics.hpp"

namespace borninfeld::potential {

/// Breakpoint between the near (Taylor) and far (asymptotic) regimes, u = 2*sqrt(2).
inline constexpr double kSeriesBreak = 2.8284271247461903;
/// Upper edge of the f(y) domain, y* = 1/(2*sqrt(2)); the radicand vanishes there.
inline constexpr double kYStar = 0.35355339059327379;

/// Physical inputs. alpha is the fine-structure constant; delta = alpha*beta is
/// the scaled aether constant (beta in Compton lengths). delta = 0 selects the
/// exact Coulomb limit.
struct ModelParams {
    double alpha = 1.0 / 137.036;
    double delta = 0.0;

    void validate() const;
};

/// Expansion coefficients of the pair potential W(u).
/// far:  W = b0 + b1/u + b2/u^2 + b3/u^3 (u >= 2*sqrt(2)); b's from beta_fn.
/// near: W = a0 u + a1 u^5 + a2 u^9 + a3 u^13 (u < 2*sqrt(2)); a0 = -1/2 exact,
/// a1..a3 numerically derived from the quadrature (see NearCoefficientFit).
struct SeriesCoefficients {
    std::array<double, 4> far;
    std::array<double, 4> near;
};

/// Outcome of the near-coefficient extraction: a least-squares fit of
/// (W(u)/u - a0)/u^4 against {1, u^4, u^8, u^12} on u in [0.2, 1.0]. The two
/// closed-form candidates for a1 are recorded with their residuals against the
/// fit; the fitted values are the ones used for evaluation.
struct NearCoefficientFit {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double a1_candidate_128 = 0.0;  // 3/40 - 3*pi/128
    double a1_candidate_138 = 0.0;  // 3/40 - 3*pi/138 (as printed)
    double residual_128 = 0.0;      // fit - candidate
    double residual_138 = 0.0;
    double a2_closed_form = 0.0;    // -29/672 + 225*pi/16384
    double a3_closed_form = 0.0;    // 1667/54912 - 20265*pi/2097152
};

/// Coefficients, computed once per process (thread-safe lazy init).
const SeriesCoefficients& series_coefficients();
const NearCoefficientFit& near_coefficient_fit();

/// f(y) = sqrt(1/4 + y^2 - y sqrt(1+y^2)) on [0, y*]; the radicand is
/// evaluated in the factored form (y*^2 - y^2)(y* + y)-style to stay accurate
/// near the vanishing endpoint. Throws outside the domain.
double f_born(double y);

/// df/dy on [0, y*); diverges like (y* - y)^(-1/2) at the endpoint, which is a
/// domain error here.
double f_born_prime(double y);

/// The pair potential W(u) by adaptive quadrature, absolute error <= tol.
/// w(0) = 0 and the u -> infinity limit b0 are continuity values.
double w_quadrature(double u, double tol = 1e-12);

/// Far asymptotic series (domain u >= 2*sqrt(2)).
double w_series_far(double u);

/// Near Taylor series, four terms (domain 0 <= u < 2*sqrt(2)).
double w_series_near(double u);

/// Certified piecewise interpolant of W(u): near range [0, 2*sqrt(2)] stores
/// W(u)/u (so the table is exactly 0 at u = 0), mid range [2*sqrt(2), u_far]
/// is fit in v = 1/u, and the far series takes over beyond u_far.
struct PotentialTable {
    numerics::Interpolant1D near;   // h(u) = W(u)/u on [0, 2*sqrt(2)]
    numerics::Interpolant1D mid;    // m(v) = W(1/v) on [1/u_far, 1/(2*sqrt(2))]
    double u_far = 1000.0;
    double certified_error = 0.0;

    double operator()(double u) const;
};

/// Build a table certified to target_error (>= 1e-11); verified off grid
/// against w_quadrature during construction.
std::shared_ptr<const PotentialTable> build_potential_table(double target_error = 1e-10);

/// Process-wide table at the default 1e-10 certification, built on first use.
std::shared_ptr<const PotentialTable> shared_potential_table();

enum class ChargeModelKind { BornInfeldPair, TestParticle, Coulomb };

/// Effective Coulomb charge Z(u).
///   BornInfeldPair: Z = u (W(u) - b0), table backed.
///   TestParticle:   Z = u * integral_u^inf dx/sqrt(1+x^4), table backed.
///   Coulomb:        Z = 1.
/// Immutable and cheap to copy; safe to share across threads.
class EffectiveChargeModel {
public:
    static EffectiveChargeModel coulomb();
    static EffectiveChargeModel born_infeld_pair(
        std::shared_ptr<const PotentialTable> table = nullptr);
    static EffectiveChargeModel test_particle();

    double operator()(double u) const;
    ChargeModelKind kind() const { return kind_; }
    std::shared_ptr<const PotentialTable> table() const { return table_; }

private:
    struct TestParticleTable;
    EffectiveChargeModel() = default;

    ChargeModelKind kind_ = ChargeModelKind::Coulomb;
    std::shared_ptr<const PotentialTable> table_;
    std::shared_ptr<const TestParticleTable> tp_;
};

/// Z(u) under the given model (thin wrapper over model.operator()).
double effective_charge(double u, const EffectiveChargeModel& model);

/// Separation-independent self-energy constant (alpha/beta)(1/4)B(1/4,1/4)
/// = (alpha^2/delta) * 1.8540747, in rest-energy units. It cancels out of the
/// reduced eigenproblem and is reported only for bookkeeping. delta must be > 0.
double self_energy_shift(const ModelParams& params);

/// Dimensional pair potential phi_beta(r) = W(r/beta)/beta with r, beta in
/// Compton lengths. Satisfies the scaling phi_{2 beta}(2r) = phi_beta(r)/2.
double pair_potential_phi(double r, double beta, const PotentialTable& table);

}  // namespace borninfeld::potential
