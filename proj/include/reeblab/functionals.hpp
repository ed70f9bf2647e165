#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "reeblab/loop.hpp"

namespace reeblab {

/// Thrown when an operation that is only defined on the constraint set
/// {mean_exp_r = 1} receives a loop that is too far off it.
class OffConstraintError : public std::runtime_error {
public:
    explicit OffConstraintError(double residual)
        : std::runtime_error("loop violates the constraint mean_exp_r = 1 (residual " +
                             std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Which of the four flow problems is being solved, i.e. how the Reeb
/// coefficient tau is produced.
struct ScalingRule {
    enum class Kind { Theta, RabinowitzMultiplier, ConstrainedArea };

    Kind kind = Kind::Theta;
    double theta = 0.0;  // Theta: interpolation parameter in [0, 1]
    double tau = 0.0;    // RabinowitzMultiplier: current Lagrange multiplier

    static ScalingRule theta_rule(double theta);
    static ScalingRule rabinowitz(double tau0);
    static ScalingRule constrained_area();

    bool is_theta(double value) const {
        return kind == Kind::Theta && theta == value;
    }
};

/// V-shaped function h(rho) = rho (ln rho - 1) + 1, minimum h(1) = 0.
double h(double rho);
/// h'(rho) = ln rho.
double h_prime(double rho);

/// A_theta(v) = area(v) + theta h(T(v)) + (1 - theta) (1/N) sum_k h(e^{r_k}).
double action_theta(const DiscreteLoop& v, double theta);

/// A_2(v, tau) = area(v) + tau (T(v) - 1).
double action_rabinowitz(const DiscreteLoop& v, double tau);

/// A_3(v) = area(v), defined only on the constraint set (residual <= 1e-6).
double action_area(const DiscreteLoop& v);

/// Action functional matching the rule (A_theta, A_2, or A_3).
double action_of(const DiscreteLoop& v, const ScalingRule& rule);

/// The Reeb coefficient tau_k of the unified flow equation
/// ds v + J(dt v - tau R(v)) = 0 for each of the four problems.
std::vector<double> scaling_tau(const DiscreteLoop& v, const ScalingRule& rule);

/// L^2 gradient  G_k = J(v_k)(d_dt(v)_k - tau_k R(v_k)).
/// For ConstrainedArea the field is projected onto the tangent space of the
/// constraint set (component along the constant d/dr field removed).
TangentField grad(const DiscreteLoop& v, const ScalingRule& rule);

struct GradReport {
    double directional_fd = 0.0;
    double inner_with_grad = 0.0;
    double rel_error = 0.0;  // |fd - ip| / max(1, |fd|)
};

/// Central finite difference of the action along the retracted perturbation
/// v_k -> (r_k + eps dr_k, retract(z_k + eps w_k)) against l2_inner(grad, vhat).
/// For ConstrainedArea the perturbed loop is re-projected with Pi, matching
/// the tangentially projected gradient.
GradReport grad_check(const DiscreteLoop& v, const ScalingRule& rule,
                      const TangentField& vhat, double eps);

/// The perturbed loop used by grad_check (one-step ambient move + retraction).
DiscreteLoop perturb(const DiscreteLoop& v, const TangentField& vhat, double eps);

}  // namespace reeblab
