#include "reeblab/functionals.hpp"

#include <cmath>

namespace reeblab {

namespace {
// Flow stages may drift slightly off the constraint before reprojection;
// the coefficient of the constrained flow tolerates that much.
constexpr double kFlowConstraintTol = 1e-4;
constexpr double kStrictConstraintTol = 1e-6;
}  // namespace

ScalingRule ScalingRule::theta_rule(double theta) {
    if (theta < 0.0 || theta > 1.0)
        throw std::domain_error("ScalingRule: theta must lie in [0, 1]");
    ScalingRule r;
    r.kind = Kind::Theta;
    r.theta = theta;
    return r;
}

ScalingRule ScalingRule::rabinowitz(double tau0) {
    ScalingRule r;
    r.kind = Kind::RabinowitzMultiplier;
    r.tau = tau0;
    return r;
}

ScalingRule ScalingRule::constrained_area() {
    ScalingRule r;
    r.kind = Kind::ConstrainedArea;
    return r;
}

double h(double rho) {
    if (rho <= 0.0) throw std::domain_error("h: rho must be positive");
    return rho * (std::log(rho) - 1.0) + 1.0;
}

double h_prime(double rho) {
    if (rho <= 0.0) throw std::domain_error("h_prime: rho must be positive");
    return std::log(rho);
}

double action_theta(const DiscreteLoop& v, double theta) {
    if (theta < 0.0 || theta > 1.0)
        throw std::domain_error("action_theta: theta must lie in [0, 1]");
    double mean_h = 0.0;
    for (int k = 0; k < v.size(); ++k) mean_h += h(std::exp(v.r(k)));
    mean_h /= v.size();
    return area(v) + theta * h(mean_exp_r(v)) + (1.0 - theta) * mean_h;
}

double action_rabinowitz(const DiscreteLoop& v, double tau) {
    return area(v) + tau * (mean_exp_r(v) - 1.0);
}

double action_area(const DiscreteLoop& v) {
    const double res = constraint_residual(v);
    if (res > kStrictConstraintTol) throw OffConstraintError(res);
    return area(v);
}

double action_of(const DiscreteLoop& v, const ScalingRule& rule) {
    switch (rule.kind) {
        case ScalingRule::Kind::Theta: return action_theta(v, rule.theta);
        case ScalingRule::Kind::RabinowitzMultiplier: return action_rabinowitz(v, rule.tau);
        case ScalingRule::Kind::ConstrainedArea: return action_area(v);
    }
    throw std::logic_error("action_of: unreachable");
}

std::vector<double> scaling_tau(const DiscreteLoop& v, const ScalingRule& rule) {
    std::vector<double> tau(v.size());
    switch (rule.kind) {
        case ScalingRule::Kind::Theta: {
            const double nonlocal = rule.theta * std::log(mean_exp_r(v));
            for (int k = 0; k < v.size(); ++k)
                tau[k] = nonlocal + (1.0 - rule.theta) * v.r(k);
            break;
        }
        case ScalingRule::Kind::RabinowitzMultiplier: {
            for (double& t : tau) t = rule.tau;
            break;
        }
        case ScalingRule::Kind::ConstrainedArea: {
            const double res = constraint_residual(v);
            if (res > kFlowConstraintTol) throw OffConstraintError(res);
            const double coeff = -area(v);  // Reeb coefficient is -A_3(v_s)
            for (double& t : tau) t = coeff;
            break;
        }
    }
    return tau;
}

TangentField grad(const DiscreteLoop& v, const ScalingRule& rule) {
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
    if (rule.kind == ScalingRule::Kind::ConstrainedArea) {
        // Remove the component along the gradient of v -> mean_exp_r, which in
        // this metric is the constant d/dr field.
        TangentField w = zero_field(v);
        for (int k = 0; k < v.size(); ++k) w.dr[k] = 1.0;
        const double c = l2_inner(v, g, w) / l2_inner(v, w, w);
        for (int k = 0; k < v.size(); ++k) g.dr[k] -= c;
    }
    return g;
}

DiscreteLoop perturb(const DiscreteLoop& v, const TangentField& vhat, double eps) {
    const int n = v.size();
    const int d = v.dim();
    std::vector<double> r(n);
    std::vector<double> z(static_cast<std::size_t>(n) * d);
    for (int k = 0; k < n; ++k) {
        r[k] = v.r(k) + eps * vhat.dr[k];
        SigmaVec amb = v.z(k);
        const SigmaVec w = vhat.w_at(k);
        for (int i = 0; i < d; ++i) amb[i] += eps * w[i];
        const SigmaVec zr = retract(v.model(), amb);
        for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(k) * d + i] = zr[i];
    }
    return DiscreteLoop(v.model(), std::move(r), std::move(z));
}

GradReport grad_check(const DiscreteLoop& v, const ScalingRule& rule,
                      const TangentField& vhat, double eps) {
    if (eps < 1e-7 || eps > 1e-2)
        throw std::domain_error("grad_check: eps must lie in [1e-7, 1e-2]");
    const bool constrained = rule.kind == ScalingRule::Kind::ConstrainedArea;
    auto eval = [&](double e) {
        DiscreteLoop moved = perturb(v, vhat, e);
        if (constrained) moved = project_Pi(moved);
        return action_of(moved, rule);
    };
    GradReport rep;
    rep.directional_fd = (eval(eps) - eval(-eps)) / (2.0 * eps);
    rep.inner_with_grad = l2_inner(v, grad(v, rule), vhat);
    rep.rel_error = std::abs(rep.directional_fd - rep.inner_with_grad) /
                    std::max(1.0, std::abs(rep.directional_fd));
    return rep;
}

}  // namespace reeblab
