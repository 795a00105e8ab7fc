// Acceptance suite: one pass/fail line per criterion, detail lines beneath.
// Usage: acceptance [N]  (run criterion N only; default runs all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "borninfeld/cli.hpp"
#include "borninfeld/experiments.hpp"

using namespace borninfeld;
using eigensolver::QuantumNumbers;
using eigensolver::solve_eigenvalue;
using potential::EffectiveChargeModel;

namespace {

struct Criterion {
    int id;
    std::string title;
    bool pass = true;
    std::vector<std::string> details;
    double seconds = 0.0;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
    }
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void criterion_1(Criterion& c) {
    const auto coulomb = EffectiveChargeModel::coulomb();
    for (int n = 1; n <= 4; ++n) {
        for (int l = 0; l < n; ++l) {
            const auto res = solve_eigenvalue(0.0, {n, l}, coulomb);
            const double dev = std::abs(-res.e_scaled - 0.5 / (n * n));
            c.check(res.converged && dev <= 1e-8,
                    "(" + std::to_string(n) + "," + std::to_string(l) +
                        "): -e = " + num(-res.e_scaled) + ", |dev| = " + num(dev) +
                        " <= 1e-8");
        }
    }
}

void criterion_2(Criterion& c) {
    const double far100 = std::abs(potential::w_quadrature(100.0) - potential::w_series_far(100.0));
    c.check(far100 <= 1e-6, "|W_quad - W_far|(100) = " + num(far100) + " <= 1e-6");
    const double far5 = std::abs(potential::w_quadrature(5.0) - potential::w_series_far(5.0));
    c.check(far5 <= 1e-3, "|W_quad - W_far|(5) = " + num(far5) +
                              " <= 1e-3 (true fourth-order remainder ~ 5.5/u^4 = 8.9e-3; "
                              "series is asymptotic, see w_series_far tests)");
    const double near01 =
        std::abs(potential::w_quadrature(0.1) - potential::w_series_near(0.1));
    c.check(near01 <= 1e-8, "|W_quad - W_near|(0.1) = " + num(near01) + " <= 1e-8");
}

void criterion_3(Criterion& c) {
    const double born = experiments::born_constant();
    c.check(std::abs(born - 1.2361) <= 1e-4,
            "born_constant = " + num(born) + ", |born - 1.2361| = " +
                num(std::abs(born - 1.2361)) + " <= 1e-4");
    const double integral = experiments::field_energy_check();
    c.check(std::abs(integral - born) <= 1e-9,
            "field energy integral = " + num(integral) + ", |integral - closed form| = " +
                num(std::abs(integral - born)) + " <= 1e-9");
}

void criterion_4(Criterion& c) {
    const auto pair = EffectiveChargeModel::born_infeld_pair();
    struct Cell {
        int n, l;
        double paper;
    } cells[] = {{1, 0, 0.50000}, {2, 0, 0.19766}, {2, 1, 0.36737}};
    for (const auto& cell : cells) {
        const auto res = solve_eigenvalue(1.83297, {cell.n, cell.l}, pair);
        const double dev = std::abs(-res.e_scaled - cell.paper);
        c.check(res.converged && dev <= 5e-4,
                "(" + std::to_string(cell.n) + "," + std::to_string(cell.l) +
                    "): -e = " + num(-res.e_scaled) + " vs paper " + num(cell.paper) +
                    ", |dev| = " + num(dev) + " <= 5e-4");
    }
}

void criterion_5(Criterion& c) {
    const auto pair = EffectiveChargeModel::born_infeld_pair();
    const double delta = 6.6e-5;

    const auto r10 = solve_eigenvalue(delta, {1, 0}, pair);
    const double shift10 = -r10.e_scaled - 0.5;
    const double oracle10 = -eigensolver::perturbative_shift(delta, {1, 0});
    c.check(std::abs(-r10.e_scaled - 0.50016) <= 3e-5,
            "(1,0): -e = " + num(-r10.e_scaled) + " within 3e-5 of 0.50016");
    c.check(std::abs(shift10 - oracle10) <= 0.1 * oracle10,
            "(1,0): shift " + num(shift10) + " within 10% of oracle " + num(oracle10));

    const auto r20 = solve_eigenvalue(delta, {2, 0}, pair);
    const double shift20 = -r20.e_scaled - 0.125;
    const double oracle20 = -eigensolver::perturbative_shift(delta, {2, 0});
    c.check(std::abs(-r20.e_scaled - 0.12502) <= 2e-5,
            "(2,0): -e = " + num(-r20.e_scaled) + " within 2e-5 of 0.12502");
    c.check(std::abs(shift20 - oracle20) <= 0.1 * oracle20,
            "(2,0): shift " + num(shift20) + " within 10% of oracle " + num(oracle20));

    const auto r21 = solve_eigenvalue(delta, {2, 1}, pair);
    const double oracle21 = 0.125 - eigensolver::perturbative_shift(delta, {2, 1});
    c.check(std::abs(-r21.e_scaled - oracle21) <= 1e-4,
            "(2,1): -e = " + num(-r21.e_scaled) + " agrees with the perturbative oracle " +
                num(oracle21) + " within 1e-4 (pass condition for this cell)");

    // The discrepancy record for the paper's 0.19101 must be emitted.
    const auto report = experiments::reproduce_table(pair);
    bool emitted = false;
    for (const auto& rec : report.discrepancies) {
        if (rec.delta == delta && rec.qn.n == 2 && rec.qn.l == 1) {
            emitted = true;
            c.details.push_back("  note  discrepancy record: computed " + num(rec.computed) +
                                " vs paper " + num(rec.paper_value) + ", gap " +
                                num(rec.gap_to_paper) + " (documented paper anomaly)");
        }
    }
    c.check(emitted, "discrepancy record for (2,1) vs paper 0.19101 emitted");
}

void criterion_6(Criterion& c) {
    const auto pair = EffectiveChargeModel::born_infeld_pair();
    const auto report = experiments::find_coulomb_crossings(pair);
    c.check(report.interior_crossing_found && report.crossings.size() == 2,
            "interior crossing located");
    if (report.crossings.size() == 2) {
        c.check(std::abs(report.crossings[1] - 1.83297) <= 2e-3,
                "crossing delta = " + num(report.crossings[1]) + " within 2e-3 of 1.83297");
    }
    c.check(std::abs(report.extremum_delta - 0.24774) <= 2e-3,
            "extremum delta = " + num(report.extremum_delta) + " within 2e-3 of 0.24774");
    c.check(report.extremum_e0 < -0.5,
            "e0 at extremum = " + num(report.extremum_e0) + " strictly below -0.5");
}

void criterion_7(Criterion& c) {
    const auto pair = EffectiveChargeModel::born_infeld_pair();
    const auto tp = EffectiveChargeModel::test_particle();
    for (double delta : {0.1, 0.24774, 1.0}) {
        const double pe = solve_eigenvalue(delta, {1, 0}, pair).e_scaled;
        const double te = solve_eigenvalue(delta, {1, 0}, tp).e_scaled;
        c.check(pe < -0.5, "pair e0(" + num(delta) + ") = " + num(pe) + " < -0.5");
        c.check(te > -0.5, "test-particle e0(" + num(delta) + ") = " + num(te) + " > -0.5");
    }
    const double pe10 = solve_eigenvalue(10.0, {1, 0}, pair).e_scaled;
    const double te10 = solve_eigenvalue(10.0, {1, 0}, tp).e_scaled;
    c.check(pe10 > -0.5 && pe10 < 0.0, "pair e0(10) = " + num(pe10) + " in (-0.5, 0)");
    c.check(te10 > -0.5 && te10 < 0.0, "test-particle e0(10) = " + num(te10) + " in (-0.5, 0)");

    bool z_below_one = true;
    for (int i = 0; i < 100; ++i) {
        const double u = 1e-3 * std::pow(1e3 / 1e-3, i / 99.0);
        z_below_one = z_below_one && potential::effective_charge(u, tp) < 1.0;
    }
    c.check(z_below_one, "Z_tp(u) < 1 on a 100-point log grid [1e-3, 1e3]");
}

void criterion_8(Criterion& c) {
    // scale invariance of the dimensional potential wrapper
    const auto table = potential::shared_potential_table();
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> logdist(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double r = std::pow(10.0, logdist(rng));
        const double beta = std::pow(10.0, logdist(rng));
        const double phi = potential::pair_potential_phi(r, beta, *table);
        const double phi2 = potential::pair_potential_phi(2.0 * r, 2.0 * beta, *table);
        worst = std::max(worst, std::abs(phi2 - 0.5 * phi) / std::abs(phi));
    }
    c.check(worst <= 1e-9,
            "scale invariance on 1000 random (r, beta): worst rel err = " + num(worst));

    // node-count contract across a representative solve batch
    const auto pair = EffectiveChargeModel::born_infeld_pair();
    const auto coulomb = EffectiveChargeModel::coulomb();
    bool nodes_ok = true;
    int solves = 0;
    for (double delta : {0.0, 6.6e-5, 0.5, 1.83297}) {
        for (int n = 1; n <= 3; ++n) {
            for (int l = 0; l < n; ++l) {
                const auto& model = (delta == 0.0) ? coulomb : pair;
                const auto res = solve_eigenvalue(delta, {n, l}, model);
                nodes_ok = nodes_ok && res.converged && res.nodes == n - l - 1;
                ++solves;
            }
        }
    }
    c.check(nodes_ok, "node count equals n-l-1 in all " + std::to_string(solves) +
                          " converged solves");

    // grid-refinement stability
    eigensolver::SolveOptions tight;
    tight.ode_rel_tol = 5e-12;
    tight.eig_rel_tol = 5e-11;
    tight.kappa_rho_max = 70.0;
    double worst_shift = 0.0;
    for (auto [delta, n, l] : {std::tuple{1.83297, 1, 0}, {1.83297, 2, 1}, {0.24774, 1, 0}}) {
        const double a = solve_eigenvalue(delta, {n, l}, pair).e_scaled;
        const double b = solve_eigenvalue(delta, {n, l}, pair, tight).e_scaled;
        worst_shift = std::max(worst_shift, std::abs(a - b));
    }
    c.check(worst_shift <= 1e-9,
            "doubling rho_max and halving tolerances shifts e by " + num(worst_shift) +
                " <= 1e-9");

    // byte-identical CLI reruns
    const std::string f1 = "acceptance_rerun_1.csv";
    const std::string f2 = "acceptance_rerun_2.csv";
    const std::vector<std::string> args{"table", "-o", ""};
    auto invoke = [](const std::string& path) {
        return cli::run({"table", "-o", path});
    };
    const int rc1 = invoke(f1);
    const int rc2 = invoke(f2);
    auto slurp = [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
    };
    const std::string c1 = slurp(f1), c2 = slurp(f2);
    c.check(rc1 == 0 && rc2 == 0 && !c1.empty() && c1 == c2,
            "identical CLI invocations produce byte-identical files");
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

struct Spec {
    int id;
    const char* title;
    void (*fn)(Criterion&);
    double time_limit;  // seconds; 0 = unstated
};

const Spec kSpecs[] = {
    {1, "Rydberg limit at delta = 0 (n <= 4, all l, 1e-8)", criterion_1, 5.0},
    {2, "series/quadrature cross-validation", criterion_2, 5.0},
    {3, "Born constant and field-energy identity", criterion_3, 0.0},
    {4, "table row alpha beta = 1.83297", criterion_4, 30.0},
    {5, "table row alpha beta = 6.6e-5 with perturbative oracle", criterion_5, 0.0},
    {6, "Coulomb crossing and binding extremum", criterion_6, 180.0},
    {7, "nonmonotonicity vs test particle", criterion_7, 0.0},
    {8, "property suites", criterion_8, 0.0},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
    }
    int failures = 0;
    for (const auto& spec : kSpecs) {
        if (only != 0 && spec.id != only) {
            continue;
        }
        Criterion c{spec.id, spec.title};
        const auto start = std::chrono::steady_clock::now();
        try {
            spec.fn(c);
        } catch (const std::exception& e) {
            c.check(false, std::string("unexpected exception: ") + e.what());
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
        if (spec.time_limit > 0.0) {
            c.check(c.seconds <= spec.time_limit,
                    "runtime " + num(c.seconds) + " s <= " + num(spec.time_limit) + " s");
        }
        std::printf("criterion %d: %s (%.2f s) %s\n", c.id, c.pass ? "PASS" : "FAIL",
                    c.seconds, c.title.c_str());
        for (const auto& d : c.details) {
            std::printf("%s\n", d.c_str());
        }
        failures += c.pass ? 0 : 1;
    }
    if (only == 0) {
        std::printf("%d of 8 criteria passed\n", 8 - failures);
    }
    return failures == 0 ? 0 : 1;
}
