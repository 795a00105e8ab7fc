#pragma once

#include <map>
#include <optional>
#include <vector>

#include "borninfeld/eigensolver.hpp"

namespace borninfeld::experiments {

struct SweepPoint {
    double delta = 0.0;
    double e0 = 0.0;       // ground-state eps0/alpha^2
    bool converged = false;
};

struct CrossingReport {
    std::vector<double> crossings;   // delta values with e0 = -1/2; first entry is 0
    double extremum_delta = 0.0;
    double extremum_e0 = 0.0;
    double e0_coulomb_limit = -0.5;  // delta -> 0 limit
    double e0_at_search_hi = 0.0;    // trend sample at the upper search edge
    bool interior_crossing_found = false;
};

struct TableCell {
    eigensolver::QuantumNumbers qn;
    double minus_e = 0.0;
    std::optional<double> paper_value;
    std::optional<double> deviation;     // |minus_e - paper_value|
    std::optional<double> oracle_value;  // perturbative prediction where valid
    bool converged = false;
};

struct TableRow {
    double delta = 0.0;
    std::vector<TableCell> cells;  // (1,0), (2,0), (2,1)
};

/// Emitted whenever a computed cell strays from its paper reference by more
/// than the reproduction tolerance, or when the spec-flagged anomalous cell is
/// evaluated; quantifies the gap against both references.
struct DiscrepancyRecord {
    double delta = 0.0;
    eigensolver::QuantumNumbers qn;
    double computed = 0.0;
    double paper_value = 0.0;
    std::optional<double> oracle_value;
    double gap_to_paper = 0.0;
    std::optional<double> gap_to_oracle;
};

struct TableReport {
    std::vector<TableRow> rows;
    std::vector<DiscrepancyRecord> discrepancies;
    // NIST-derived reference row bundled for annotation only.
    static constexpr double kEmpirical[3] = {0.49973, 0.12493, 0.12493};
};

struct ContrastResult {
    std::vector<SweepPoint> pair;
    std::vector<SweepPoint> test_particle;
};

/// Ground-state energy across a sorted delta grid. Solves are chunked across
/// threads (0 = hardware concurrency); within a chunk each solve is seeded by
/// its predecessor for branch continuity. Non-convergent points are flagged,
/// not fatal.
std::vector<SweepPoint> sweep_ground_state(const std::vector<double>& delta_grid,
                                           const potential::EffectiveChargeModel& model,
                                           int threads = 0,
                                           const eigensolver::SolveOptions& opts = {});

/// Default sweep grid: delta = 0 plus 60 log-spaced points on [1e-3, 10].
std::vector<double> default_sweep_grid();

/// Locate the Coulomb crossings of e0(delta) on [search_lo, search_hi] and the
/// binding extremum. The trivial crossing at delta = 0 is always reported.
CrossingReport find_coulomb_crossings(const potential::EffectiveChargeModel& model,
                                      double search_lo = 0.5, double search_hi = 3.0,
                                      double extremum_lo = 0.05, double extremum_hi = 1.0);

/// Reproduce the reference eigenvalue table (delta = 0, 6.6e-5, 1.83297 for the
/// (1,0), (2,0), (2,1) states) with paper references, deviations, and the
/// perturbative-oracle annotation on the small-delta row.
TableReport reproduce_table(const potential::EffectiveChargeModel& model, int threads = 0);

/// Born's aether constant in units of alpha: beta_B/alpha = (1/6) B(1/4,1/4).
double born_constant();

/// Radial reduction of the point-charge field energy,
/// integral_0^inf (sqrt(1+u^4) - u^2) du, by quadrature. Equals born_constant()
/// analytically; the difference is the identity check.
double field_energy_check();

/// Ground-state curves under the pair and test-particle models on a shared grid.
ContrastResult test_particle_contrast(const std::vector<double>& delta_grid, int threads = 0);

}  // namespace borninfeld::experiments
