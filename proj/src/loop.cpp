#include "reeblab/loop.hpp"

#include <cmath>
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
}  // namespace

DiscreteLoop::DiscreteLoop(Model model, std::vector<double> r, std::vector<double> z)
    : model_(model), n_(static_cast<int>(r.size())), r_(std::move(r)), z_(std::move(z)) {
    if (n_ < 8 || n_ % 2 != 0)
        throw std::invalid_argument("DiscreteLoop: N must be even and >= 8");
    if (z_.size() != static_cast<std::size_t>(n_) * dim())
        throw std::invalid_argument("DiscreteLoop: z has wrong length");
    for (int k = 0; k < n_; ++k) {
        if (!std::isfinite(r_[k])) throw std::invalid_argument("DiscreteLoop: non-finite r");
        const SigmaVec zk = this->z(k);
        if (model_ == Model::Sphere3) {
            if (std::abs(norm(model_, zk) - 1.0) > 1e-12)
                throw std::invalid_argument("DiscreteLoop: sample off the sphere");
        } else {
            if (!std::isfinite(zk[0]) || zk[0] < 0.0 || zk[0] >= kTwoPi)
                throw std::invalid_argument("DiscreteLoop: angle outside [0, 2pi)");
        }
    }
}

double TangentField::sup_norm() const {
    double m = 0.0;
    const int d = sigma_dim(model);
    for (int k = 0; k < n; ++k) {
        double s = dr[k] * dr[k];
        for (int i = 0; i < d; ++i) {
            const double wi = w[static_cast<std::size_t>(k) * d + i];
            s += wi * wi;
        }
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

TangentField zero_field(const DiscreteLoop& v) {
    TangentField f;
    f.model = v.model();
    f.n = v.size();
    f.dr.assign(v.size(), 0.0);
    f.w.assign(static_cast<std::size_t>(v.size()) * v.dim(), 0.0);
    return f;
}

TangentField d_dt(const DiscreteLoop& v) {
    const int n = v.size();
    const int d = v.dim();
    const double half_n = 0.5 * n;
    TangentField f = zero_field(v);
    for (int k = 0; k < n; ++k) {
        const int kp = (k + 1) % n;
        const int km = (k + n - 1) % n;
        f.dr[k] = (v.r(kp) - v.r(km)) * half_n;
        if (v.model() == Model::Cylinder1) {
            f.w[k] = wrap_pm_pi(v.z(kp)[0] - v.z(km)[0]) * half_n;
        } else {
            SigmaVec diff{};
            const SigmaVec zp = v.z(kp), zm = v.z(km), zk = v.z(k);
            for (int i = 0; i < d; ++i) diff[i] = (zp[i] - zm[i]) * half_n;
            const SigmaVec t = project_tangent(v.model(), zk, diff);
            for (int i = 0; i < d; ++i) f.w[static_cast<std::size_t>(k) * d + i] = t[i];
        }
    }
    return f;
}

double mean_exp_r(const DiscreteLoop& v) {
    double s = 0.0;
    for (int k = 0; k < v.size(); ++k) s += std::exp(v.r(k));
    return s / v.size();
}

double area(const DiscreteLoop& v) {
    const TangentField xd = d_dt(v);
    double s = 0.0;
    for (int k = 0; k < v.size(); ++k)
        s += std::exp(v.r(k)) * lambda_form(v.model(), v.z(k), xd.w_at(k));
    return -s / v.size();
}

double l2_inner(const DiscreteLoop& v, const TangentField& a, const TangentField& b) {
    if (a.n != v.size() || b.n != v.size() || a.model != v.model() || b.model != v.model())
        throw std::invalid_argument("l2_inner: fields not based at the given loop");
    double s = 0.0;
    for (int k = 0; k < v.size(); ++k) {
        const SymplPoint p = v.point(k);
        const TangentVector jb = apply_J(v.model(), p, b.at(k));
        s += omega_form(v.model(), p, a.at(k), jb);
    }
    return s / v.size();
}

DiscreteLoop project_Pi(const DiscreteLoop& v) {
    const double shift = std::log(mean_exp_r(v));
    std::vector<double> r = v.r_data();
    for (double& x : r) x -= shift;
    return DiscreteLoop(v.model(), std::move(r), v.z_data());
}

double constraint_residual(const DiscreteLoop& v) {
    return std::abs(mean_exp_r(v) - 1.0);
}

double loop_distance(const DiscreteLoop& a, const DiscreteLoop& b) {
    if (a.model() != b.model() || a.size() != b.size())
        throw std::invalid_argument("loop_distance: incompatible loops");
    const int d = a.dim();
    double m = 0.0;
    for (int k = 0; k < a.size(); ++k) {
        double dz = 0.0;
        if (a.model() == Model::Cylinder1) {
            dz = std::abs(wrap_pm_pi(a.z(k)[0] - b.z(k)[0]));
        } else {
            const SigmaVec za = a.z(k), zb = b.z(k);
            double s = 0.0;
            for (int i = 0; i < d; ++i) s += (za[i] - zb[i]) * (za[i] - zb[i]);
            dz = std::sqrt(s);
        }
        m = std::max(m, std::abs(a.r(k) - b.r(k)) + dz);
    }
    return m;
}

}  // namespace reeblab
