#include "reeblab/flow.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace reeblab {

namespace {

constexpr double kMonotoneSlack = 1e-10;
constexpr int kMaxHalvings = 20;
constexpr int kRegrowAfter = 16;

struct State {
    std::vector<double> r;
    std::vector<double> z;
    double tau = 0.0;  // Rabinowitz multiplier (ignored otherwise)
};

struct Derivative {
    std::vector<double> r;
    std::vector<double> z;
    double tau = 0.0;
};

State state_of(const DiscreteLoop& v, double tau) {
    return {v.r_data(), v.z_data(), tau};
}

// Retract samples back to Sigma (and optionally onto the constraint set)
// and build a validated loop. Throws if the state has gone non-finite.
DiscreteLoop materialize(Model model, const State& st, bool reproject_pi) {
    const int d = sigma_dim(model);
    const int n = static_cast<int>(st.r.size());
    std::vector<double> z(st.z.size());
    for (int k = 0; k < n; ++k) {
        SigmaVec amb{};
        for (int i = 0; i < d; ++i) amb[i] = st.z[static_cast<std::size_t>(k) * d + i];
        const SigmaVec zr = retract(model, amb);
        for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(k) * d + i] = zr[i];
    }
    DiscreteLoop v(model, st.r, std::move(z));
    if (reproject_pi) v = project_Pi(v);
    return v;
}

class FlowSystem {
public:
    FlowSystem(Model model, const FlowConfig& cfg) : model_(model), cfg_(cfg) {}

    bool is_rab() const {
        return cfg_.rule.kind == ScalingRule::Kind::RabinowitzMultiplier;
    }
    bool is_constrained() const {
        return cfg_.rule.kind == ScalingRule::Kind::ConstrainedArea;
    }

    ScalingRule rule_at(double tau) const {
        ScalingRule r = cfg_.rule;
        if (is_rab()) r.tau = tau;
        return r;
    }

    DiscreteLoop loop_of(const State& st) const {
        return materialize(model_, st, is_constrained() && cfg_.reproject);
    }

    Derivative eval(const State& st) const {
        const DiscreteLoop v = loop_of(st);
        const TangentField g = grad(v, rule_at(st.tau));
        const double sign = cfg_.backward ? 1.0 : -1.0;
        Derivative d;
        d.r.resize(st.r.size());
        d.z.resize(st.z.size());
        for (std::size_t k = 0; k < d.r.size(); ++k) d.r[k] = sign * g.dr[k];
        for (std::size_t k = 0; k < d.z.size(); ++k) d.z[k] = sign * g.w[k];
        d.tau = is_rab() ? -sign * (1.0 - mean_exp_r(v)) : 0.0;
        return d;
    }

    State advance(const State& st, const Derivative& d, double ds) const {
        State out = st;
        for (std::size_t k = 0; k < st.r.size(); ++k) out.r[k] += ds * d.r[k];
        for (std::size_t k = 0; k < st.z.size(); ++k) out.z[k] += ds * d.z[k];
        out.tau += ds * d.tau;
        return out;
    }

    State step(const State& st, double ds) const {
        if (cfg_.integrator == IntegratorKind::Euler) {
            return advance(st, eval(st), ds);
        }
        const Derivative k1 = eval(st);
        const Derivative k2 = eval(advance(st, k1, 0.5 * ds));
        const Derivative k3 = eval(advance(st, k2, 0.5 * ds));
        const Derivative k4 = eval(advance(st, k3, ds));
        State out = st;
        for (std::size_t k = 0; k < st.r.size(); ++k)
            out.r[k] += ds / 6.0 * (k1.r[k] + 2.0 * k2.r[k] + 2.0 * k3.r[k] + k4.r[k]);
        for (std::size_t k = 0; k < st.z.size(); ++k)
            out.z[k] += ds / 6.0 * (k1.z[k] + 2.0 * k2.z[k] + 2.0 * k3.z[k] + k4.z[k]);
        out.tau += ds / 6.0 * (k1.tau + 2.0 * k2.tau + 2.0 * k3.tau + k4.tau);
        return out;
    }

private:
    Model model_;
    FlowConfig cfg_;
};

}  // namespace

DiscreteLoop flow_step(const DiscreteLoop& v, const ScalingRule& rule, double ds,
                       bool reproject) {
    FlowConfig cfg;
    cfg.rule = rule;
    cfg.integrator = IntegratorKind::Euler;
    cfg.reproject = reproject;
    const FlowSystem sys(v.model(), cfg);
    State st = state_of(v, rule.tau);
    return sys.loop_of(sys.step(st, ds));
}

Trajectory integrate(const DiscreteLoop& v0, const FlowConfig& config) {
    if (config.ds <= 0.0) throw std::invalid_argument("integrate: ds must be positive");
    if (config.record_every < 1)
        throw std::invalid_argument("integrate: record_every must be >= 1");
    if (config.rule.kind == ScalingRule::Kind::ConstrainedArea &&
        constraint_residual(v0) > 1e-8)
        throw OffConstraintError(constraint_residual(v0));

    const FlowSystem sys(v0.model(), config);
    const bool rab = sys.is_rab();

    Trajectory traj;
    traj.model = v0.model();
    traj.config = config;
    if (rab) traj.multiplier = std::vector<double>{};

    State st = state_of(v0, config.rule.tau);
    double s = 0.0;
    double ds_cur = config.ds;
    int accepts_since_halving = 0;
    bool was_halved = false;

    const double mono_sign = config.backward ? -1.0 : 1.0;

    auto record = [&](const DiscreteLoop& v, double action, double gnorm, double gsup,
                      bool slice) {
        StepRecord rec;
        rec.s = s;
        rec.action = action;
        rec.grad_norm = gnorm;
        rec.grad_sup = gsup;
        rec.tau = rab ? st.tau : std::numeric_limits<double>::quiet_NaN();
        rec.ds = 0.0;
        traj.series.push_back(rec);
        if (slice) {
            traj.s_values.push_back(s);
            traj.loops.push_back(v);
            traj.actions.push_back(action);
            traj.grad_norms.push_back(gnorm);
            if (rab) traj.multiplier->push_back(st.tau);
        }
    };

    for (long step = 0;; ++step) {
        const DiscreteLoop v = sys.loop_of(st);
        st.r = v.r_data();  // keep the state on the manifold we just built
        st.z = v.z_data();

        const ScalingRule rule_now = sys.rule_at(st.tau);
        const TangentField g = grad(v, rule_now);
        const double action = action_of(v, rule_now);
        double gsup = g.sup_norm();
        double gnorm_sq = l2_inner(v, g, g);
        if (rab) {
            const double tdot = 1.0 - mean_exp_r(v);
            gsup = std::max(gsup, std::abs(tdot));
            gnorm_sq += tdot * tdot;
        }
        const double gnorm = std::sqrt(std::max(0.0, gnorm_sq));

        const bool done_tol = gsup <= config.grad_tol;
        const bool done_steps = step >= config.max_steps;
        if (done_tol || done_steps) {
            record(v, action, gnorm, gsup, true);
            traj.status = done_tol ? FlowStatus::Converged : FlowStatus::MaxSteps;
            traj.steps_taken = step;
            return traj;
        }

        record(v, action, gnorm, gsup, step % config.record_every == 0);

        // Step-size cap ds * max(1, sup|tau|) <= 0.1, then backtracking.
        double sup_tau = 0.0;
        for (double t : scaling_tau(v, rule_now)) sup_tau = std::max(sup_tau, std::abs(t));
        double ds_eff = std::min(ds_cur, 0.1 / std::max(1.0, sup_tau));

        int halvings = 0;
        for (;;) {
            bool ok = true;
            State cand;
            double cand_action = 0.0;
            try {
                cand = sys.step(st, ds_eff);
                const DiscreteLoop vc = sys.loop_of(cand);
                cand.r = vc.r_data();
                cand.z = vc.z_data();
                if (!std::isfinite(cand.tau)) ok = false;
                if (ok) cand_action = action_of(vc, sys.rule_at(cand.tau));
                if (ok && !std::isfinite(cand_action)) ok = false;
                if (ok && mono_sign * (cand_action - action) > kMonotoneSlack) ok = false;
            } catch (const std::exception&) {
                ok = false;
            }
            if (ok) {
                traj.series.back().ds = ds_eff;
                st = std::move(cand);
                s += ds_eff;
                if (was_halved && ++accepts_since_halving >= kRegrowAfter) {
                    ds_cur = std::min(2.0 * ds_cur, config.ds);
                    accepts_since_halving = 0;
                    was_halved = ds_cur < config.ds;
                }
                break;
            }
            if (++halvings > kMaxHalvings) {
                traj.status = FlowStatus::Diverged;
                traj.steps_taken = step;
                return traj;
            }
            ds_eff *= 0.5;
            ds_cur = std::min(ds_cur, ds_eff);
            was_halved = true;
            accepts_since_halving = 0;
        }
    }
}

CriticalReport find_critical(const DiscreteLoop& v0, const ScalingRule& rule,
                             const FlowConfig& config) {
    FlowConfig cfg = config;
    cfg.rule = rule;
    const Trajectory traj = integrate(v0, cfg);
    const DiscreteLoop& v = traj.loops.back();

    CriticalReport rep;
    rep.converged = traj.status == FlowStatus::Converged;
    rep.steps = traj.steps_taken;

    double rbar = 0.0;
    for (int k = 0; k < v.size(); ++k) rbar += v.r(k);
    rbar /= v.size();
    rep.r_bar = rbar;
    for (int k = 0; k < v.size(); ++k)
        rep.r_flatness = std::max(rep.r_flatness, std::abs(v.r(k) - rbar));

    const TangentField xd = d_dt(v);
    for (int k = 0; k < v.size(); ++k) {
        const SigmaVec R = reeb(v.model(), v.z(k));
        const SigmaVec w = xd.w_at(k);
        double sq = 0.0;
        for (int i = 0; i < v.dim(); ++i) {
            const double di = w[i] - rbar * R[i];
            sq += di * di;
        }
        rep.reeb_residual = std::max(rep.reeb_residual, std::sqrt(sq));
    }

    ScalingRule rule_final = rule;
    if (rule.kind == ScalingRule::Kind::RabinowitzMultiplier && traj.multiplier)
        rule_final.tau = traj.multiplier->back();
    rep.action = action_of(v, rule_final);
    rep.action_formula_gap = std::abs(rep.action - (1.0 - std::exp(rbar)));
    rep.final_r = v.r_data();
    rep.final_z = v.z_data();
    return rep;
}

DiscreteLoop critical_report_loop(Model model, const CriticalReport& rep) {
    return DiscreteLoop(model, rep.final_r, rep.final_z);
}

double energy(const Trajectory& traj) {
    if (traj.series.size() < 2)
        throw std::invalid_argument("energy: trajectory needs at least 2 entries");
    double e = 0.0;
    for (const StepRecord& rec : traj.series) e += rec.grad_norm * rec.grad_norm * rec.ds;
    return e;
}

double multiplier_law_residual(const Trajectory& traj) {
    if (!traj.multiplier)
        throw std::invalid_argument("multiplier_law_residual: not a Rabinowitz trajectory");
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < traj.series.size(); ++i) {
        const StepRecord& a = traj.series[i];
        const StepRecord& b = traj.series[i + 1];
        if (a.ds <= 0.0) continue;
        // The law refers to the slope produced by the scheme from state i;
        // reconstruct T_i from the recorded loop when the slice exists.
        const double dtau_ds = (b.tau - a.tau) / (b.s - a.s);
        // locate slice with s == a.s
        double T = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = 0; j < traj.s_values.size(); ++j) {
            if (traj.s_values[j] == a.s) {
                T = mean_exp_r(traj.loops[j]);
                break;
            }
        }
        if (!std::isfinite(T)) continue;
        const double sign = traj.config.backward ? -1.0 : 1.0;
        worst = std::max(worst, std::abs(dtau_ds - sign * (1.0 - T)));
    }
    return worst;
}

}  // namespace reeblab
