#pragma once

#include <vector>

#include "reeblab/contact.hpp"

namespace reeblab {

/// A uniformly sampled loop v : S^1 -> R x Sigma with N samples at t_k = k/N.
/// Loops are immutable values; operations return new loops.
class DiscreteLoop {
public:
    /// Validates N (>= 8, even) and the on-manifold invariant of every sample.
    DiscreteLoop(Model model, std::vector<double> r, std::vector<double> z);

    Model model() const { return model_; }
    int size() const { return n_; }
    int dim() const { return sigma_dim(model_); }

    double r(int k) const { return r_[k]; }
    SigmaVec z(int k) const {
        SigmaVec out{};
        for (int i = 0; i < dim(); ++i) out[i] = z_[static_cast<std::size_t>(k) * dim() + i];
        return out;
    }
    SymplPoint point(int k) const { return {r_[k], z(k)}; }

    const std::vector<double>& r_data() const { return r_; }
    const std::vector<double>& z_data() const { return z_; }

private:
    Model model_;
    int n_;
    std::vector<double> r_;
    std::vector<double> z_;  // n * dim, row-major
};

/// A vector field along a DiscreteLoop: (dr_k, w_k) with w_k tangent at z_k.
struct TangentField {
    Model model = Model::Sphere3;
    int n = 0;
    std::vector<double> dr;
    std::vector<double> w;  // n * dim

    SigmaVec w_at(int k) const {
        SigmaVec out{};
        const int d = sigma_dim(model);
        for (int i = 0; i < d; ++i) out[i] = w[static_cast<std::size_t>(k) * d + i];
        return out;
    }
    TangentVector at(int k) const { return {dr[k], w_at(k)}; }

    double sup_norm() const;
};

TangentField zero_field(const DiscreteLoop& v);

/// Central-difference time derivative, Sigma-component projected to T_z Sigma.
/// Exact for loops linear in t on the cylinder (angle differences unwrapped).
TangentField d_dt(const DiscreteLoop& v);

/// T(v) = (1/N) sum_k e^{r_k}; the discrete \int_0^1 e^r dt.
double mean_exp_r(const DiscreteLoop& v);

/// Negative area  -(1/N) sum_k e^{r_k} lambda_{z_k}(xdot_k)  with xdot from d_dt.
double area(const DiscreteLoop& v);

/// L^2 metric  g(a, b) = (1/N) sum_k omega(a_k, J b_k).
double l2_inner(const DiscreteLoop& v, const TangentField& a, const TangentField& b);

/// Pi(r, x) = (r - ln T(v), x); lands on the constraint set {T = 1}.
DiscreteLoop project_Pi(const DiscreteLoop& v);

/// |T(v) - 1|; zero iff v lies on the discrete constraint set.
double constraint_residual(const DiscreteLoop& v);

/// Ambient sup distance between two loops: max_k |dr_k| + |dz_k|
/// (angle distance wrapped on the cylinder).
double loop_distance(const DiscreteLoop& a, const DiscreteLoop& b);

}  // namespace reeblab
