// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, not configurable.

#include <cmath>
#include <cstdio>
#include <deque>
#include <random>
#include <map>
#include <string>
#include <vector>

#include "reeblab/correspondence.hpp"
#include "reeblab/initial_data.hpp"

using namespace reeblab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int g_failures = 0;
std::map<int, std::string> g_lines;

void report(int criterion, bool ok, const std::string& what) {
    char head[32];
    std::snprintf(head, sizeof(head), "%s  criterion %2d: ", ok ? "PASS" : "FAIL", criterion);
    g_lines[criterion] = head + what;
    if (!ok) ++g_failures;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

FlowConfig make_cfg(const ScalingRule& rule, double ds, long steps, double grad_tol,
                    int record_every = 1,
                    IntegratorKind kind = IntegratorKind::RK4) {
    FlowConfig cfg;
    cfg.rule = rule;
    cfg.ds = ds;
    cfg.max_steps = steps;
    cfg.grad_tol = grad_tol;
    cfg.integrator = kind;
    cfg.record_every = record_every;
    return cfg;
}

// Delay-flow window from stable-paired data around a seeded constant loop,
// shifted so ds tau(0) = 0.
Trajectory a1_window(std::uint64_t seed, int n, double ds, long steps) {
    const DiscreteLoop base =
        constant_loop(Model::Sphere3, n, 0.0, random_base_point(Model::Sphere3, seed));
    PerturbationSpec spec;
    spec.modes = 3;
    spec.amplitude = 0.01;
    spec.stable_pair = true;
    spec.seed = seed;
    const DiscreteLoop v0 = shift_tau_stationary(perturbed_loop(base, spec));
    return integrate(v0, make_cfg(ScalingRule::theta_rule(1.0), ds, steps, -1.0));
}

Trajectory a3_window(std::uint64_t seed, int n, double ds, long steps) {
    const DiscreteLoop base = constant_loop(Model::Sphere3, n, 0.0,
                                            random_base_point(Model::Sphere3, seed * 13 + 5));
    PerturbationSpec spec;
    spec.modes = 3;
    spec.amplitude = 0.008;
    spec.stable_pair = true;
    spec.seed = seed;
    const DiscreteLoop v0 = project_Pi(perturbed_loop(base, spec));
    return integrate(v0, make_cfg(ScalingRule::constrained_area(), ds, steps, -1.0));
}

// Trajectories accumulated for the global energy / monotonicity criterion.
std::vector<const Trajectory*> g_all;
std::deque<Trajectory> g_store;  // stable references under push_back

const Trajectory& keep(Trajectory traj) {
    g_store.push_back(std::move(traj));
    return g_store.back();
}

}  // namespace

// 1. model identities over 1e4 seeded samples
void criterion_1() {
    bool ok = true;
    std::string detail;
    for (Model m : {Model::Sphere3, Model::Cylinder1}) {
        const ValidationReport rep = validate_model(m, 10000, 2026);
        ok = ok && rep.max_lambda_reeb_err <= 1e-10 && rep.max_dlambda_reeb <= 1e-10 &&
             rep.max_J_squared_err <= 1e-12 && rep.min_compatibility > 0.0;
        detail += std::string(model_id(m)) + ": |lam(R)-1|<=" + fmt(rep.max_lambda_reeb_err) +
                  " |dlam(R,.)|<=" + fmt(rep.max_dlambda_reeb) +
                  " |J^2+id|<=" + fmt(rep.max_J_squared_err) +
                  " min w(u,Ju)/|u|^2=" + fmt(rep.min_compatibility) + "  ";
    }
    report(1, ok, "model identities over 10^4 seeded samples  [" + detail + "]");
}

// 2. gradient consistency: grad_check <= 1e-3 on 20 seeded loops per rule,
//    with the N 256 -> 512 error ratio in [3.5, 4.5]
void criterion_2() {
    const std::vector<std::pair<std::string, ScalingRule>> rules = {
        {"theta0", ScalingRule::theta_rule(0.0)},
        {"theta05", ScalingRule::theta_rule(0.5)},
        {"theta1", ScalingRule::theta_rule(1.0)},
        {"rabinowitz", ScalingRule::rabinowitz(0.8)},
        {"constrained", ScalingRule::constrained_area()}};
    bool ok = true;
    std::string detail;
    for (const auto& [name, rule] : rules) {
        double worst = 0.0;
        double mean256 = 0.0, mean512 = 0.0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            for (int n : {256, 512}) {
                DiscreteLoop v = random_loop(Model::Sphere3, n, 3, 0.2, seed);
                if (rule.kind == ScalingRule::Kind::ConstrainedArea) v = project_Pi(v);
                const TangentField vhat = random_tangent_field(v, 3, 0.2, seed + 1000);
                const GradReport rep = grad_check(v, rule, vhat, 1e-4);
                if (n == 256) {
                    worst = std::max(worst, rep.rel_error);
                    mean256 += rep.rel_error / 20.0;
                } else {
                    mean512 += rep.rel_error / 20.0;
                }
            }
        }
        const double ratio = mean256 / mean512;
        ok = ok && worst <= 1e-3 && ratio >= 3.5 && ratio <= 4.5;
        detail += name + ": max_rel=" + fmt(worst) + " ratio=" + fmt(ratio) + "  ";
    }
    report(2, ok, "gradient against the finite-difference oracle  [" + detail + "]");
}

// 3. descent from seeded perturbations of the constant loop
void criterion_3() {
    bool ok = true;
    std::string detail;
    const double thetas_run[3] = {1.0, 0.25, 0.5};
    const double r0s[3] = {0.2, -0.15, 0.1};
    for (int i = 0; i < 3; ++i) {
        const std::uint64_t seed = 100 + i;
        const DiscreteLoop v0 = constant_loop(
            Model::Sphere3, 256, r0s[i], random_base_point(Model::Sphere3, seed));
        const ScalingRule rule = ScalingRule::theta_rule(thetas_run[i]);
        const FlowConfig cfg = make_cfg(rule, 5e-3, 20000, 1e-8);
        const CriticalReport rep = find_critical(v0, rule, cfg);
        ok = ok && rep.converged && rep.r_flatness <= 1e-6 && rep.reeb_residual <= 1e-4 &&
             rep.action_formula_gap <= 1e-5;

        const DiscreteLoop vstar = critical_report_loop(Model::Sphere3, rep);
        const double a0 = action_theta(vstar, 0.0);
        for (double th : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            ok = ok && std::abs(action_theta(vstar, th) - a0) <= 1e-10;
            ok = ok && grad(vstar, ScalingRule::theta_rule(th)).sup_norm() <= 2e-8;
        }
        g_all.push_back(&keep(integrate(v0, cfg)));
        if (i == 0)
            detail = "seed " + std::to_string(seed) + ": flat=" + fmt(rep.r_flatness) +
                     " reeb=" + fmt(rep.reeb_residual) +
                     " act_gap=" + fmt(rep.action_formula_gap);
    }
    report(3, ok, "descent reaches theta-independent critical points  [" + detail + "]");
}

// 4. backward-orbit critical value 1 - e^{-2pi}
void criterion_4() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 200; seed < 203; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.02, 0.04);
        const double delta0 = unif(rng);
        const DiscreteLoop v0 = reeb_orbit_loop(Model::Sphere3, 256, -1, -kTwoPi + delta0,
                                                random_base_point(Model::Sphere3, seed));
        const ScalingRule rule = ScalingRule::theta_rule(1.0);
        const FlowConfig cfg = make_cfg(rule, 1e-3, 110, 1e-10);
        const Trajectory traj = integrate(v0, cfg);
        const double action = traj.actions.back();
        const double gap = std::abs(action - (1.0 - std::exp(-kTwoPi)));
        ok = ok && gap <= 1e-4;
        g_all.push_back(&keep(traj));
        if (seed == 200) detail = "|action - 0.99813| = " + fmt(gap);
    }
    report(4, ok, "backward-orbit action matches 1 - e^{-2pi}  [" + detail + "]");
}

// 5. cylinder closed-form oracle r(s) = r0 e^{-s}
void criterion_5() {
    const double r0 = 0.5;
    const DiscreteLoop v0 = constant_loop(Model::Cylinder1, 256, r0, {});
    const Trajectory traj =
        integrate(v0, make_cfg(ScalingRule::theta_rule(1.0), 1e-3, 5000, -1.0, 10));
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.s_values.size(); ++i)
        for (int k = 0; k < traj.loops[i].size(); ++k)
            worst = std::max(
                worst, std::abs(traj.loops[i].r(k) - r0 * std::exp(-traj.s_values[i])));
    g_all.push_back(&keep(traj));
    report(5, worst <= 1e-6,
           "cylinder flow matches r0 e^{-s} over [0,5]  [sup err " + fmt(worst) + "]");
}

// 6-8. delay-flow identities on the computed A1 set
void criteria_6_7_8() {
    std::vector<const Trajectory*> a1_set;
    const Trajectory& cyl = keep(
        integrate(constant_loop(Model::Cylinder1, 256, 0.5, {}),
                  make_cfg(ScalingRule::theta_rule(1.0), 1e-3, 4000, -1.0, 10)));
    const Trajectory& wind = keep(
        integrate(reeb_orbit_loop(Model::Cylinder1, 8, -1, -kTwoPi + 0.3, {}),
                  make_cfg(ScalingRule::theta_rule(1.0), 1e-3, 1200, -1.0, 10)));
    const Trajectory& sph41 = keep(a1_window(41, 256, 1e-3, 60));
    const Trajectory& sph42 = keep(a1_window(42, 256, 1e-3, 60));
    for (const Trajectory* t : {&cyl, &wind, &sph41, &sph42}) {
        a1_set.push_back(t);
        g_all.push_back(t);
    }

    // 6: (der) residual plus its refinement ratio
    bool ok6 = true;
    double worst6 = 0.0;
    for (const Trajectory* t : a1_set) worst6 = std::max(worst6, verify_der(*t));
    ok6 = worst6 <= 1e-3;
    // ratio measured on a window short enough that the expanding modes stay
    // at the rounding floor at both resolutions
    const Trajectory coarse = a1_window(41, 256, 1e-3, 30);
    const Trajectory fine = a1_window(41, 512, 5e-4, 60);
    const double res_coarse = verify_der(coarse);
    const double res_fine = verify_der(fine);
    const double ratio = res_coarse / res_fine;
    ok6 = ok6 && ratio >= 3.5 && ratio <= 4.5;
    report(6, ok6,
           "delay identity ds tau = (1 - A1)/e^tau - 1  [sup residual " + fmt(worst6) +
               ", refinement ratio " + fmt(ratio) + "]");

    // 7: strict lower bound on the slope of tau
    bool ok7 = true;
    double min_dtau = 0.0;
    double wbound = 0.0;
    for (const Trajectory* t : a1_set) {
        const Lemma2Report rep = verify_lemma2(*t);
        ok7 = ok7 && rep.strict_bound_ok;
        min_dtau = std::min(min_dtau, rep.min_dtau);
        wbound = std::min(wbound, rep.window_bound);
    }
    report(7, ok7,
           "ds tau > -1 pointwise on the A1 set  [min ds tau " + fmt(min_dtau) +
               ", window-endpoint bound " + fmt(wbound) + "]");

    // 8: laplacian lower bound
    bool ok8 = true;
    double min_lap = std::numeric_limits<double>::infinity();
    for (const Trajectory* t : a1_set) min_lap = std::min(min_lap, verify_laplacian(*t));
    ok8 = min_lap >= -1.0 - 1e-2;
    report(8, ok8, "interior laplacian of r >= -1 - 1e-2  [min " + fmt(min_lap) + "]");
}

// 9. inverse_D oracle and D o inverse_D = id
void criterion_9() {
    const double step = 1e-3;
    const long n = 16001;
    ScalarSeries f;
    f.s.resize(n);
    f.values.resize(n);
    for (long i = 0; i < n; ++i) {
        const double s = -8.0 + i * step;
        f.s[i] = s;
        f.values[i] = (-2.0 * s - 1.0) * std::exp(-s * s);
    }
    const InverseDResult res = inverse_D(f);
    double worst = 0.0;
    for (long i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(res.sigma.values[i] - std::exp(-f.s[i] * f.s[i])));
    bool ok = worst <= 1e-6;

    std::mt19937_64 rng(2027);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double dworst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double c0 = unif(rng), c1 = unif(rng), c2 = unif(rng);
        for (long i = 0; i < n; ++i) {
            const double s = f.s[i];
            f.values[i] = (c0 + c1 * s + c2 * s * s) * std::exp(-s * s);
        }
        const InverseDResult r2 = inverse_D(f);
        for (long i = 1; i + 1 < n; ++i) {
            const double dsig = (r2.sigma.values[i + 1] - r2.sigma.values[i - 1]) / (2 * step);
            dworst = std::max(dworst, std::abs(dsig - r2.sigma.values[i] - f.values[i]));
        }
    }
    ok = ok && dworst <= 1e-5;
    report(9, ok,
           "inverse_D oracle pair and applied-D identity  [pair err " + fmt(worst) +
               ", D o D^{-1} err " + fmt(dworst) + "]");
}

// 10. pushforward/lift roundtrips at 1e-3 with refinement decrease
void criterion_10() {
    bool ok = true;
    double worst_rab2 = 0.0, worst_back = 0.0, worst_forth = 0.0, worst_lift = 0.0;
    double dist_seed1_coarse = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Trajectory& a1 = keep(a1_window(seed, 256, 2.5e-4, 200));
        g_all.push_back(&a1);
        const Trajectory pushed = pushforward_Pi(a1);
        const double rab2 = gradrab2_residual(pushed);
        const double back = roundtrip_check(a1);
        worst_rab2 = std::max(worst_rab2, rab2);
        worst_back = std::max(worst_back, back);
        if (seed == 1) dist_seed1_coarse = back;
        ok = ok && rab2 <= 1e-3 && back <= 1e-3;

        const Trajectory& a3 = keep(a3_window(seed, 256, 5e-4, 100));
        g_all.push_back(&a3);
        const double forth = roundtrip_check(a3);
        worst_forth = std::max(worst_forth, forth);
        ok = ok && forth <= 1e-3;
        const double lift_res = gradvd_residual(lift_R(a3));
        worst_lift = std::max(worst_lift, lift_res);
        ok = ok && lift_res <= 1e-3;
    }

    // refinement: N doubled, ds halved
    const Trajectory fine = a1_window(1, 512, 1.25e-4, 400);
    const Trajectory pushed_fine = pushforward_Pi(fine);
    const double back_fine = roundtrip_check(fine);
    ok = ok && back_fine < dist_seed1_coarse;
    report(10, ok,
           "pushforward/lift roundtrips  [rab2 " + fmt(worst_rab2) + ", R o Pi " + fmt(worst_back) +
               " -> refined " + fmt(back_fine) + ", Pi o R " + fmt(worst_forth) +
               ", lift residual " + fmt(worst_lift) + "]");
}

// 11. energy identity and action monotonicity on every computed trajectory
void criterion_11() {
    bool ok = true;
    double worst_gap = 0.0;
    for (const Trajectory* t : g_all) {
        if (t->series.size() < 2) continue;
        const double e = energy(*t);
        const double drop = t->series.front().action - t->series.back().action;
        const double gap = std::abs(e - drop) / std::max(1.0, e);
        worst_gap = std::max(worst_gap, gap);
        ok = ok && gap <= 1e-3;
        for (std::size_t i = 0; i + 1 < t->series.size(); ++i)
            ok = ok && t->series[i + 1].action <= t->series[i].action + 1e-10;
    }
    report(11, ok,
           "energy equals the action drop; actions non-increasing  [" +
               std::to_string(g_all.size()) + " trajectories, worst gap " + fmt(worst_gap) +
               "]");
}

// 12. constraint preservation and the multiplier law
void criterion_12() {
    bool ok = true;
    double worst_res = 0.0;
    for (const Trajectory* t : g_all) {
        if (t->config.rule.kind != ScalingRule::Kind::ConstrainedArea) continue;
        for (const DiscreteLoop& v : t->loops)
            worst_res = std::max(worst_res, constraint_residual(v));
    }
    ok = worst_res <= 1e-12;

    const DiscreteLoop v0 = constant_loop(Model::Sphere3, 256, 0.12,
                                          random_base_point(Model::Sphere3, 77));
    const Trajectory rab =
        integrate(v0, make_cfg(ScalingRule::rabinowitz(0.12), 1e-3, 400, -1.0, 1,
                               IntegratorKind::Euler));
    const double law = multiplier_law_residual(rab);
    ok = ok && law <= 1e-6;
    g_all.push_back(&keep(rab));
    report(12, ok,
           "constraint kept to 1e-12; multiplier law residual " + fmt(law) +
               "  [max slice residual " + fmt(worst_res) + "]");
}

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criteria_6_7_8();
    criterion_9();
    criterion_10();
    criterion_12();  // adds its Rabinowitz flow to the pool checked by 11
    criterion_11();
    for (const auto& [num, line] : g_lines) std::printf("%s\n", line.c_str());
    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
