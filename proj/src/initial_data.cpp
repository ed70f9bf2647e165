#include "reeblab/initial_data.hpp"

#include <cmath>
#include <random>

namespace reeblab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

SigmaVec j0(const SigmaVec& v) { return {-v[1], v[0], -v[3], v[2]}; }

std::vector<double> flat_z(Model m, int n, const SigmaVec& sample0,
                           const std::vector<SigmaVec>& samples) {
    const int d = sigma_dim(m);
    std::vector<double> z(static_cast<std::size_t>(n) * d);
    for (int k = 0; k < n; ++k) {
        const SigmaVec& src = samples.empty() ? sample0 : samples[k];
        for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(k) * d + i] = src[i];
    }
    return z;
}

}  // namespace

SigmaVec random_base_point(Model m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    if (m == Model::Cylinder1) {
        std::uniform_real_distribution<double> unif(0.0, kTwoPi);
        return {unif(rng), 0.0, 0.0, 0.0};
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    SigmaVec raw{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    return retract(m, raw);
}

DiscreteLoop constant_loop(Model m, int n, double r0, const SigmaVec& base) {
    const SigmaVec z0 = retract(m, base);
    return DiscreteLoop(m, std::vector<double>(n, r0), flat_z(m, n, z0, {}));
}

DiscreteLoop reeb_orbit_loop(Model m, int n, int k, double r0, const SigmaVec& base) {
    const SigmaVec z0 = retract(m, base);
    std::vector<SigmaVec> samples(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / n;
        if (m == Model::Cylinder1) {
            samples[i] = retract(m, {z0[0] + kTwoPi * k * t, 0.0, 0.0, 0.0});
        } else {
            // e^{phi J0} = cos(phi) I + sin(phi) J0
            const double phi = kTwoPi * k * t;
            const SigmaVec jz = j0(z0);
            SigmaVec zi{};
            for (int c = 0; c < 4; ++c) zi[c] = std::cos(phi) * z0[c] + std::sin(phi) * jz[c];
            samples[i] = retract(m, zi);
        }
    }
    return DiscreteLoop(m, std::vector<double>(n, r0), flat_z(m, n, SigmaVec{}, samples));
}

DiscreteLoop perturbed_loop(const DiscreteLoop& base, const PerturbationSpec& spec) {
    const Model m = base.model();
    const int n = base.size();
    const int d = base.dim();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> rhat(n, 0.0);
    std::vector<double> beta(n, 0.0);                       // Reeb component
    std::vector<double> xi(static_cast<std::size_t>(n) * 4, 0.0);  // ambient xi part

    for (int mode = 1; mode <= spec.modes; ++mode) {
        const double scale = spec.amplitude / mode;
        const double cre = scale * gauss(rng);
        const double cim = scale * gauss(rng);
        // independent coefficients for the unpaired variant
        const double dre = scale * gauss(rng);
        const double dim_ = scale * gauss(rng);
        for (int k = 0; k < n; ++k) {
            const double ph = kTwoPi * mode * k / n;
            const double c = std::cos(ph), s = std::sin(ph);
            // Re / Im of (cre + i cim) e^{-i ph}
            rhat[k] += cre * c + cim * s;
            beta[k] += spec.stable_pair ? (cim * c - cre * s) : (dre * c + dim_ * s);
        }
        if (m == Model::Sphere3 && spec.with_xi) {
            SigmaVec u{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
            // project u onto xi at the first base point; adequate for bases
            // that stay close to one point or one orbit
            const SigmaVec z0 = base.z(0);
            const SigmaVec R0 = reeb(m, z0);
            u = project_tangent(m, z0, u);
            const double b = dot(m, R0, u);
            for (int c = 0; c < 4; ++c) u[c] -= b * R0[c];
            double un = norm(m, u);
            if (un < 1e-12) un = 1.0;
            for (int c = 0; c < 4; ++c) u[c] *= scale / un;
            const SigmaVec ju = j0(u);
            const double mix = spec.stable_pair ? 1.0 : gauss(rng);
            for (int k = 0; k < n; ++k) {
                const double ph = kTwoPi * mode * k / n;
                // e^{-ph J0} u rotates against the Reeb flow (contracting mode)
                for (int c = 0; c < 4; ++c)
                    xi[static_cast<std::size_t>(k) * 4 + c] +=
                        std::cos(ph) * u[c] - mix * std::sin(ph) * ju[c];
            }
        }
    }

    std::vector<double> r(n);
    std::vector<double> z(static_cast<std::size_t>(n) * d);
    for (int k = 0; k < n; ++k) {
        r[k] = base.r(k) + rhat[k];
        SigmaVec amb = base.z(k);
        const SigmaVec R = reeb(m, base.z(k));
        for (int c = 0; c < d; ++c)
            amb[c] += beta[k] * R[c] + xi[static_cast<std::size_t>(k) * 4 + c];
        const SigmaVec zr = retract(m, amb);
        for (int c = 0; c < d; ++c) z[static_cast<std::size_t>(k) * d + c] = zr[c];
    }
    return DiscreteLoop(m, std::move(r), std::move(z));
}

DiscreteLoop shift_tau_stationary(const DiscreteLoop& v) {
    const double T = mean_exp_r(v);
    const double B = area(v);
    const double c = -(B + T * std::log(T)) / T;
    std::vector<double> r = v.r_data();
    for (double& x : r) x += c;
    return DiscreteLoop(v.model(), std::move(r), v.z_data());
}

DiscreteLoop random_loop(Model m, int n, int modes, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int d = sigma_dim(m);

    std::vector<double> r(n, 0.0);
    for (int mode = 1; mode <= modes; ++mode) {
        const double a = amplitude / mode * gauss(rng);
        const double b = amplitude / mode * gauss(rng);
        for (int k = 0; k < n; ++k) {
            const double ph = kTwoPi * mode * k / n;
            r[k] += a * std::cos(ph) + b * std::sin(ph);
        }
    }

    const SigmaVec z0 = random_base_point(m, seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<double> z(static_cast<std::size_t>(n) * d);
    std::vector<SigmaVec> amb(n, z0);
    for (int mode = 1; mode <= modes; ++mode) {
        SigmaVec ac{}, as{};
        for (int c = 0; c < d; ++c) {
            ac[c] = amplitude / mode * gauss(rng);
            as[c] = amplitude / mode * gauss(rng);
        }
        for (int k = 0; k < n; ++k) {
            const double ph = kTwoPi * mode * k / n;
            for (int c = 0; c < d; ++c)
                amb[k][c] += ac[c] * std::cos(ph) + as[c] * std::sin(ph);
        }
    }
    for (int k = 0; k < n; ++k) {
        const SigmaVec zr = retract(m, amb[k]);
        for (int c = 0; c < d; ++c) z[static_cast<std::size_t>(k) * d + c] = zr[c];
    }
    return DiscreteLoop(m, std::move(r), std::move(z));
}

TangentField random_tangent_field(const DiscreteLoop& v, int modes, double amplitude,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = v.size();
    const int d = v.dim();
    TangentField f = zero_field(v);
    for (int mode = 0; mode <= modes; ++mode) {
        const double scale = amplitude / (mode + 1);
        const double a = scale * gauss(rng);
        const double b = scale * gauss(rng);
        SigmaVec wc{}, ws{};
        for (int c = 0; c < d; ++c) {
            wc[c] = scale * gauss(rng);
            ws[c] = scale * gauss(rng);
        }
        for (int k = 0; k < n; ++k) {
            const double ph = kTwoPi * mode * k / n;
            f.dr[k] += a * std::cos(ph) + b * std::sin(ph);
            for (int c = 0; c < d; ++c)
                f.w[static_cast<std::size_t>(k) * d + c] +=
                    wc[c] * std::cos(ph) + ws[c] * std::sin(ph);
        }
    }
    for (int k = 0; k < n; ++k) {
        const SigmaVec t = project_tangent(v.model(), v.z(k), f.w_at(k));
        for (int c = 0; c < d; ++c) f.w[static_cast<std::size_t>(k) * d + c] = t[c];
    }
    return f;
}

}  // namespace reeblab
