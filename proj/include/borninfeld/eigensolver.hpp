#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "borninfeld/potential.hpp"

namespace borninfeld::eigensolver {

/// Principal and orbital quantum numbers; the magnetic number is structurally
/// absent (eigenvalues carry only the 2l+1 degeneracy).
struct QuantumNumbers {
    int n = 1;
    int l = 0;

    void validate() const;
    int radial_nodes() const { return n - l - 1; }
};

struct EigenResult {
    QuantumNumbers qn;
    double e_scaled = 0.0;   // eps / alpha^2
    int nodes = 0;
    double rho_max = 0.0;    // outer integration radius (Bohr-scaled)
    bool converged = false;
    double residual = 0.0;   // matching-function magnitude at the solution
};

struct RadialSolution {
    std::vector<double> rho_grid;
    std::vector<double> u_values;       // u = rho * R, normalized
    double normalization = 0.0;         // integral of u^2 before rescaling
    std::vector<double> node_positions;
};

struct SolveOptions {
    double ode_rel_tol = 1e-11;
    double node_scan_rel_tol = 1e-8;   // looser tolerance for counting passes
    double eig_rel_tol = 1e-10;
    double e_window_lo = -5.0;
    double e_window_hi = -1e-6;
    double rho_origin = 1e-6;
    double kappa_rho_max = 35.0;       // rho_max >= this / kappa
    std::optional<std::pair<double, double>> bracket_hint;  // sweep seeding
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Right-hand side of the reduced radial problem in Bohr-scaled variables
/// (rho = alpha r, e = eps/alpha^2):
///   u'' = [ l(l+1)/rho^2 - 2 Z(rho/delta)/rho - 2 e ] u.
/// delta = 0 takes the exact Coulomb branch (no division by delta).
std::array<double, 2> radial_rhs(double rho, const std::array<double, 2>& state, double e,
                                 int l, const potential::EffectiveChargeModel& model,
                                 double delta);

enum class Direction { Outward, Inward };

struct IntegrationResult {
    int node_count = 0;            // sign changes of u along the pass
    double log_derivative = 0.0;   // u'/u at the stop radius
    double u = 0.0, du = 0.0;      // renormalized endpoint state
    long steps = 0;
};

/// Single shooting pass. Outward starts at rho_origin with the regular
/// solution u ~ rho^(l+1); inward starts at rho_max with the decaying tail
/// u ~ exp(-kappa rho). Integration stops at rho_match (defaults: rho_max for
/// outward, rho_origin for inward). The state is renormalized every 50 steps;
/// only ratios are meaningful.
IntegrationResult integrate_radial(double e, int l, const potential::EffectiveChargeModel& model,
                                   double delta, double rho_max, Direction direction,
                                   std::optional<double> rho_match = std::nullopt,
                                   const SolveOptions& opts = {});

/// Largest root of l(l+1)/rho^2 - 2 Z(rho/delta)/rho - 2e; falls back to n^2
/// when the scan finds no classically allowed region.
double outer_turning_point(double e, int l, const potential::EffectiveChargeModel& model,
                           double delta, int n_fallback);

/// Locate e(n,l) by node-count bisection over the search window followed by
/// root finding on the matching function (normalized Wronskian of the outward
/// and inward solutions at the outer classical turning point).
EigenResult solve_eigenvalue(double delta, QuantumNumbers qn,
                             const potential::EffectiveChargeModel& model,
                             const SolveOptions& opts = {});

/// First-order estimate of the small-delta eigenvalue shift, from the
/// far-series tail Z ~ 1 + b2 delta / rho:
///   Delta e = -b2 delta <1/rho^2> = -b2 delta / (n^3 (l + 1/2)).
/// Valid for delta << 1; used as an independent oracle on the solver.
double perturbative_shift(double delta, QuantumNumbers qn);

/// Upper edge of the perturbative validity regime for perturbative_shift.
inline constexpr double kPerturbativeValidityLimit = 1e-2;

/// Normalized radial function for a converged eigenvalue: outward and inward
/// trajectories stitched at the turning point, normalized to
/// integral u^2 drho = 1 (the quadrature rides along as an extra ODE state).
RadialSolution radial_wavefunction(const EigenResult& result,
                                   const potential::EffectiveChargeModel& model, double delta,
                                   const SolveOptions& opts = {});

}  // namespace borninfeld::eigensolver
