#pragma once

#include <optional>
#include <vector>

#include "reeblab/functionals.hpp"

namespace reeblab {

enum class IntegratorKind { Euler, RK4 };

struct FlowConfig {
    ScalingRule rule;
    double ds = 1e-3;
    long max_steps = 1000;
    double grad_tol = 1e-8;     // stop when the sup norm of the gradient drops below
    IntegratorKind integrator = IntegratorKind::RK4;
    int record_every = 1;
    bool reproject = true;      // re-apply Pi each step (ConstrainedArea flows)
    bool backward = false;      // integrate the ascent instead of the descent
};

enum class FlowStatus { Converged, MaxSteps, Diverged };

/// Scalar data kept at every accepted step (the recorded loop slices are
/// thinned by record_every; these are not).
struct StepRecord {
    double s = 0.0;
    double action = 0.0;
    double grad_norm = 0.0;  // L^2 metric norm of the full phase-space speed
    double grad_sup = 0.0;   // pointwise sup norm, used for the stopping rule
    double tau = 0.0;        // Rabinowitz multiplier, NaN otherwise
    double ds = 0.0;         // step actually taken from this state (0 at the end)
};

/// An s-indexed numerical flow line: recorded loop slices plus the per-step
/// scalar series. Immutable once returned.
struct Trajectory {
    Model model = Model::Sphere3;
    FlowConfig config;
    FlowStatus status = FlowStatus::MaxSteps;
    long steps_taken = 0;

    std::vector<double> s_values;          // recorded slice positions
    std::vector<DiscreteLoop> loops;       // recorded slices
    std::vector<double> actions;           // per recorded slice
    std::vector<double> grad_norms;        // per recorded slice (L^2 norm)
    std::optional<std::vector<double>> multiplier;  // tau(s), Rabinowitz flows only

    std::vector<StepRecord> series;        // per accepted step
};

/// One explicit Euler step v <- retract(v - ds grad(v)); ConstrainedArea
/// steps are re-projected with Pi when reproject is set.
DiscreteLoop flow_step(const DiscreteLoop& v, const ScalingRule& rule, double ds,
                       bool reproject = true);

/// Integrate the descent (or ascent) flow of the rule from v0. For
/// RabinowitzMultiplier the multiplier is evolved jointly by ds tau = 1 - T.
/// Steps are halved when the action fails to decrease; twenty consecutive
/// halvings abort with FlowStatus::Diverged and the partial trajectory.
Trajectory integrate(const DiscreteLoop& v0, const FlowConfig& config);

struct CriticalReport {
    bool converged = false;
    long steps = 0;
    double r_bar = 0.0;            // mean of r over the final loop
    double r_flatness = 0.0;       // max_k |r_k - r_bar|
    double reeb_residual = 0.0;    // sup |xdot - r_bar R(x)|
    double action = 0.0;
    double action_formula_gap = 0.0;  // |action - (1 - e^{r_bar})|
    std::vector<double> final_r;
    std::vector<double> final_z;
};

/// Descend from v0 and report how close the end state is to a critical point
/// (constant r, x a Reeb orbit of generalized period r).
CriticalReport find_critical(const DiscreteLoop& v0, const ScalingRule& rule,
                             const FlowConfig& config);

DiscreteLoop critical_report_loop(Model model, const CriticalReport& rep);

/// E = sum over steps of grad_norm^2 ds; equals the action drop for descent.
double energy(const Trajectory& traj);

/// Max over steps of |dtau/ds - (1 - T)| for RabinowitzMultiplier series.
/// Exact (up to rounding) for Euler trajectories recorded every step.
double multiplier_law_residual(const Trajectory& traj);

}  // namespace reeblab
