#pragma once

#include <cstdint>

#include "reeblab/loop.hpp"

namespace reeblab {

SigmaVec random_base_point(Model m, std::uint64_t seed);

/// The loop constantly equal to (r0, base).
DiscreteLoop constant_loop(Model m, int n, double r0, const SigmaVec& base);

/// Exact Reeb orbit of generalized period 2 pi k through base, at height r0:
/// x(t) = e^{2 pi k J0 t} z0 (Sphere3) or theta(t) = theta0 + 2 pi k t.
DiscreteLoop reeb_orbit_loop(Model m, int n, int k, double r0, const SigmaVec& base);

struct PerturbationSpec {
    int modes = 3;            // Fourier modes 1..modes
    double amplitude = 0.01;  // coefficient scale, falls off like 1/m
    bool stable_pair = true;  // pair r and Reeb components so the descent contracts
    bool with_xi = true;      // include contact-hyperplane components (Sphere3)
    std::uint64_t seed = 0;
};

/// Band-limited perturbation of a base loop. With stable_pair the r and Reeb
/// components are phase-locked (and the xi part counter-rotated) so that the
/// linearized descent flow decays; without it the coefficients are
/// independent, which excites the exponentially growing Cauchy-Riemann modes.
DiscreteLoop perturbed_loop(const DiscreteLoop& base, const PerturbationSpec& spec);

/// Shift r by the constant making d/ds ln T vanish at s = 0 along the delay
/// flow, i.e. T = 1 - A_1 for the shifted loop. Anchors window-truncated
/// correspondence checks.
DiscreteLoop shift_tau_stationary(const DiscreteLoop& v);

/// Seeded band-limited random loop (generic, for gradient checks).
DiscreteLoop random_loop(Model m, int n, int modes, double amplitude, std::uint64_t seed);

/// Seeded band-limited random tangent field along v.
TangentField random_tangent_field(const DiscreteLoop& v, int modes, double amplitude,
                                  std::uint64_t seed);

}  // namespace reeblab
