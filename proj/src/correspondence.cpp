#include "reeblab/correspondence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace reeblab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

double wrap_pm_pi(double d) {
    d = std::fmod(d, kTwoPi);
    if (d > kPi) d -= kTwoPi;
    if (d <= -kPi) d += kTwoPi;
    return d;
}

void require_rule(const Trajectory& traj, ScalingRule::Kind kind, const char* who) {
    if (traj.config.rule.kind != kind)
        throw std::invalid_argument(std::string(who) + ": trajectory has the wrong rule");
    if (kind == ScalingRule::Kind::Theta && traj.config.rule.theta != 1.0)
        throw std::invalid_argument(std::string(who) + ": delay flow (theta = 1) required");
}

// Number of leading slices on a uniform grid. The final slice may sit off the
// grid (it is recorded at the stopping time); it is dropped, anything else
// non-uniform is an error.
std::size_t uniform_count(const std::vector<double>& s) {
    if (s.size() < 2) return s.size();
    const double d0 = s[1] - s[0];
    for (std::size_t i = 2; i < s.size(); ++i) {
        if (std::abs((s[i] - s[i - 1]) - d0) > 1e-12 * std::max(1.0, std::abs(d0)))
            return (i + 1 == s.size()) ? s.size() - 1 : throw std::invalid_argument(
                                                            "non-uniform recorded s grid");
    }
    return s.size();
}

std::vector<double> central_diff(const std::vector<double>& f, double dt) {
    const std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("central_diff: need at least 3 samples");
    std::vector<double> out(n);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * dt);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    return out;
}

// The unified perturbed Cauchy-Riemann field J(dt v - tau R) with tau from
// the rule, without any tangential projection.
TangentField unified_field(const DiscreteLoop& v, const ScalingRule& rule) {
    const std::vector<double> tau = scaling_tau(v, rule);
    const TangentField xd = d_dt(v);
    TangentField g = zero_field(v);
    const int d = v.dim();
    for (int k = 0; k < v.size(); ++k) {
        const SigmaVec R = reeb(v.model(), v.z(k));
        TangentVector u = xd.at(k);
        for (int i = 0; i < d; ++i) u.w[i] -= tau[k] * R[i];
        const TangentVector jk = apply_J(v.model(), v.point(k), u);
        g.dr[k] = jk.dr;
        for (int i = 0; i < d; ++i) g.w[static_cast<std::size_t>(k) * d + i] = jk.w[i];
    }
    return g;
}

// Max interior sup-norm of ds v + J(dt v - tau R) where tau_i comes from the
// rule evaluated slice-wise.
double flow_residual(const Trajectory& traj, const ScalingRule& rule) {
    const std::size_t m = uniform_count(traj.s_values);
    if (m < 3) throw std::invalid_argument("flow residual: need at least 3 slices");
    const double ds = traj.s_values[1] - traj.s_values[0];
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const DiscreteLoop& v = traj.loops[i];
        const DiscreteLoop& vp = traj.loops[i + 1];
        const DiscreteLoop& vm = traj.loops[i - 1];
        const TangentField g = unified_field(v, rule);
        const int d = v.dim();
        for (int k = 0; k < v.size(); ++k) {
            double sq = 0.0;
            double drds = (vp.r(k) - vm.r(k)) / (2.0 * ds) + g.dr[k];
            sq += drds * drds;
            const SigmaVec gw = g.w_at(k);
            if (v.model() == Model::Cylinder1) {
                const double dz = wrap_pm_pi(vp.z(k)[0] - vm.z(k)[0]) / (2.0 * ds) + gw[0];
                sq += dz * dz;
            } else {
                const SigmaVec zp = vp.z(k), zm = vm.z(k);
                for (int c = 0; c < d; ++c) {
                    const double dz = (zp[c] - zm[c]) / (2.0 * ds) + gw[c];
                    sq += dz * dz;
                }
            }
            worst = std::max(worst, std::sqrt(sq));
        }
    }
    return worst;
}

// Solve ds sigma + sigma = g with sigma(s_0) = 0, integrating left to right
// with the linear product-integration rule (exact for piecewise-linear g).
std::vector<double> solve_d_plus(const std::vector<double>& g, double dt) {
    const double E = std::exp(-dt);
    const double b = (dt - (1.0 - E)) / dt;
    const double a = (1.0 - E) - b;
    std::vector<double> sigma(g.size(), 0.0);
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        sigma[i + 1] = E * sigma[i] + a * g[i] + b * g[i + 1];
    return sigma;
}

}  // namespace

ScalarSeries tau_series(const Trajectory& traj) {
    require_rule(traj, ScalingRule::Kind::Theta, "tau_series");
    const std::size_t m = uniform_count(traj.s_values);
    ScalarSeries out;
    out.s.assign(traj.s_values.begin(), traj.s_values.begin() + m);
    out.values.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.values[i] = std::log(mean_exp_r(traj.loops[i]));
    return out;
}

double verify_der(const Trajectory& traj) {
    const ScalarSeries tau = tau_series(traj);
    if (tau.s.size() < 3) throw std::invalid_argument("verify_der: need at least 3 slices");
    const double ds = tau.s[1] - tau.s[0];
    const std::vector<double> dtau = central_diff(tau.values, ds);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < tau.s.size(); ++i) {
        const double a1 = action_theta(traj.loops[i], 1.0);
        const double rhs = (1.0 - a1) / std::exp(tau.values[i]) - 1.0;
        worst = std::max(worst, std::abs(dtau[i] - rhs));
    }
    return worst;
}

Lemma2Report verify_lemma2(const Trajectory& traj) {
    const ScalarSeries tau = tau_series(traj);
    if (tau.s.size() < 3) throw std::invalid_argument("verify_lemma2: need at least 3 slices");
    const double ds = tau.s[1] - tau.s[0];
    const std::vector<double> dtau = central_diff(tau.values, ds);

    Lemma2Report rep;
    rep.min_dtau = dtau[1];
    for (std::size_t i = 1; i + 1 < tau.s.size(); ++i)
        rep.min_dtau = std::min(rep.min_dtau, dtau[i]);
    rep.strict_bound_ok = rep.min_dtau > -1.0;

    const double a_minus = action_theta(traj.loops.front(), 1.0);
    const double a_plus = action_theta(traj.loops[tau.s.size() - 1], 1.0);
    rep.window_bound = -(a_minus - a_plus) / (1.0 - a_plus);
    rep.window_bound_ok = rep.min_dtau >= rep.window_bound - 1e-9;
    rep.der_residual_max = verify_der(traj);
    return rep;
}

double verify_laplacian(const Trajectory& traj) {
    require_rule(traj, ScalingRule::Kind::Theta, "verify_laplacian");
    const std::size_t m = uniform_count(traj.s_values);
    if (m < 3) throw std::invalid_argument("verify_laplacian: need at least 3 slices");
    const double ds = traj.s_values[1] - traj.s_values[0];
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const DiscreteLoop& v = traj.loops[i];
        const int n = v.size();
        for (int k = 0; k < n; ++k) {
            const int kp = (k + 1) % n;
            const int km = (k + n - 1) % n;
            const double dss =
                (traj.loops[i + 1].r(k) - 2.0 * v.r(k) + traj.loops[i - 1].r(k)) / (ds * ds);
            const double dtt =
                (v.r(kp) - 2.0 * v.r(k) + v.r(km)) * static_cast<double>(n) * n;
            worst = std::min(worst, dss + dtt);
        }
    }
    return worst;
}

Trajectory pushforward_Pi(const Trajectory& traj) {
    require_rule(traj, ScalingRule::Kind::Theta, "pushforward_Pi");
    Trajectory out;
    out.model = traj.model;
    out.config = traj.config;
    out.config.rule = ScalingRule::constrained_area();
    out.config.reproject = true;
    out.status = traj.status;
    out.steps_taken = traj.steps_taken;
    out.s_values = traj.s_values;
    out.loops.reserve(traj.loops.size());
    for (const DiscreteLoop& v : traj.loops) out.loops.push_back(project_Pi(v));
    out.actions.reserve(out.loops.size());
    out.grad_norms.reserve(out.loops.size());
    for (const DiscreteLoop& v : out.loops) {
        out.actions.push_back(action_area(v));
        const TangentField g = grad(v, ScalingRule::constrained_area());
        out.grad_norms.push_back(std::sqrt(std::max(0.0, l2_inner(v, g, g))));
    }
    return out;
}

double gradrab2_residual(const Trajectory& traj) {
    require_rule(traj, ScalingRule::Kind::ConstrainedArea, "gradrab2_residual");
    for (const DiscreteLoop& v : traj.loops)
        if (constraint_residual(v) > 1e-8) throw OffConstraintError(constraint_residual(v));
    return flow_residual(traj, ScalingRule::constrained_area());
}

double gradvd_residual(const Trajectory& traj) {
    return flow_residual(traj, ScalingRule::theta_rule(1.0));
}

InverseDResult inverse_D(const ScalarSeries& f) {
    const std::size_t n = f.s.size();
    if (n < 2 || f.values.size() != n)
        throw std::invalid_argument("inverse_D: need a series with >= 2 samples");
    const double dt = f.s[1] - f.s[0];
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs((f.s[i] - f.s[i - 1]) - dt) > 1e-12 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("inverse_D: non-uniform grid");

    InverseDResult out;
    const std::size_t tail = std::max<std::size_t>(1, n / 20);
    for (std::size_t i = n - tail; i < n; ++i)
        if (std::abs(f.values[i]) > 1e-8) out.truncation_warning = true;

    // sigma_i = E sigma_{i+1} - int_{s_i}^{s_i + dt} e^{s_i - u} f(u) du,
    // f linear on each cell; sigma vanishes at the right end.
    const double E = std::exp(-dt);
    const double B = (1.0 - E * (1.0 + dt)) / dt;
    const double A = (1.0 - E) - B;
    out.sigma.s = f.s;
    out.sigma.values.assign(n, 0.0);
    for (std::size_t ip = n - 1; ip > 0; --ip) {
        const std::size_t i = ip - 1;
        out.sigma.values[i] =
            E * out.sigma.values[ip] - (A * f.values[i] + B * f.values[ip]);
    }
    return out;
}

Trajectory lift_R(const Trajectory& traj) {
    require_rule(traj, ScalingRule::Kind::ConstrainedArea, "lift_R");
    const std::size_t m = uniform_count(traj.s_values);
    if (m < 3) throw std::invalid_argument("lift_R: need at least 3 slices");
    for (std::size_t i = 0; i < m; ++i)
        if (constraint_residual(traj.loops[i]) > 1e-8)
            throw OffConstraintError(constraint_residual(traj.loops[i]));

    const double ds = traj.s_values[1] - traj.s_values[0];
    std::vector<double> a(m);
    for (std::size_t i = 0; i < m; ++i) a[i] = action_area(traj.loops[i]);
    const std::vector<double> g = central_diff(a, ds);
    const std::vector<double> sigma = solve_d_plus(g, ds);

    Trajectory out;
    out.model = traj.model;
    out.config = traj.config;
    out.config.rule = ScalingRule::theta_rule(1.0);
    out.status = traj.status;
    out.steps_taken = traj.steps_taken;
    out.s_values.assign(traj.s_values.begin(), traj.s_values.begin() + m);
    out.loops.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double rho = -a[i] + sigma[i];
        std::vector<double> r = traj.loops[i].r_data();
        for (double& x : r) x += rho;
        out.loops.emplace_back(traj.model, std::move(r), traj.loops[i].z_data());
    }
    for (const DiscreteLoop& v : out.loops) {
        out.actions.push_back(action_theta(v, 1.0));
        const TangentField gr = grad(v, ScalingRule::theta_rule(1.0));
        out.grad_norms.push_back(std::sqrt(std::max(0.0, l2_inner(v, gr, gr))));
    }
    return out;
}

double roundtrip_check(const Trajectory& traj) {
    Trajectory image = [&] {
        if (traj.config.rule.kind == ScalingRule::Kind::Theta)
            return lift_R(pushforward_Pi(traj));
        if (traj.config.rule.kind == ScalingRule::Kind::ConstrainedArea)
            return pushforward_Pi(lift_R(traj));
        throw std::invalid_argument("roundtrip_check: need a delay or constrained flow");
    }();
    const std::size_t m = std::min(image.loops.size(), traj.loops.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        worst = std::max(worst, loop_distance(traj.loops[i], image.loops[i]));
    return worst;
}

double lift_ode_residual(const Trajectory& constrained, const Trajectory& lifted) {
    const std::size_t m = std::min(constrained.loops.size(), lifted.loops.size());
    if (m < 3) throw std::invalid_argument("lift_ode_residual: need at least 3 slices");
    const double ds = constrained.s_values[1] - constrained.s_values[0];
    std::vector<double> rho(m), a(m);
    for (std::size_t i = 0; i < m; ++i) {
        rho[i] = lifted.loops[i].r(0) - constrained.loops[i].r(0);
        a[i] = action_area(constrained.loops[i]);
    }
    const std::vector<double> drho = central_diff(rho, ds);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i)
        worst = std::max(worst, std::abs(drho[i] + rho[i] + a[i]));
    return worst;
}

}  // namespace reeblab
