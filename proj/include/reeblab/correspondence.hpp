#pragma once

#include "reeblab/flow.hpp"

namespace reeblab {

/// A scalar function of s sampled on a uniform grid.
struct ScalarSeries {
    std::vector<double> s;
    std::vector<double> values;
};

/// tau(s) = ln T(v_s) along a delay-functional (Theta(1)) trajectory.
ScalarSeries tau_series(const Trajectory& traj);

/// Max interior residual of  ds tau = (1 - A_1(v_s)) / e^tau - 1,
/// with ds tau estimated by central differences of the recorded series.
double verify_der(const Trajectory& traj);

struct Lemma2Report {
    double min_dtau = 0.0;
    bool strict_bound_ok = false;   // min_dtau > -1
    double window_bound = 0.0;      // -(A_- - A_+) / (1 - A_+) from window endpoints
    bool window_bound_ok = false;   // informational: min_dtau >= window_bound
    double der_residual_max = 0.0;
};

Lemma2Report verify_lemma2(const Trajectory& traj);

/// Min over interior grid points of Delta r = dss r + dtt r (central stencils).
double verify_laplacian(const Trajectory& traj);

/// Slice-wise Pi; the result is tagged as a candidate constrained-area flow.
Trajectory pushforward_Pi(const Trajectory& traj);

/// Max interior sup-norm of  ds v + J(dt v + A_3(v_s) R(v))  over a
/// constraint-set trajectory (central differences in s, ambient norm).
double gradrab2_residual(const Trajectory& traj);

/// Same residual for the delay flow equation (Reeb coefficient ln T(v_s)).
double gradvd_residual(const Trajectory& traj);

struct InverseDResult {
    ScalarSeries sigma;
    bool truncation_warning = false;  // f not decayed over the last 5% of the window
};

/// The decaying solution of  D sigma = ds sigma - sigma = f,  computed by
/// right-to-left integration of sigma(s) = -int_s^inf e^{s-u} f(u) du.
InverseDResult inverse_D(const ScalarSeries& f);

/// Lift a constrained-area flow line to a delay flow line: slices become
/// (r + rho(s), x) where rho solves  ds rho = -rho - A_3(v_s),  the unique
/// shift making the lifted loops solve the delay flow equation.
Trajectory lift_R(const Trajectory& traj);

/// Sup distance between the trajectory and its roundtrip image:
/// R after Pi for delay-flow inputs, Pi after R for constrained-area inputs.
double roundtrip_check(const Trajectory& traj);

/// r-shift residual of the lift: max interior |ds rho + rho + a|.
double lift_ode_residual(const Trajectory& constrained, const Trajectory& lifted);

}  // namespace reeblab
