#include "reeblab/contact.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace reeblab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kTangencyTol = 1e-8;

// J0 (x1, y1, x2, y2) = (-y1, x1, -y2, x2)
SigmaVec j0(const SigmaVec& v) {
    return {-v[1], v[0], -v[3], v[2]};
}

void check_tangent(Model m, const SigmaVec& z, const SigmaVec& w, const char* who) {
    if (m != Model::Sphere3) return;  // T_theta Sigma = R for the cylinder
    const double d = dot(m, z, w);
    if (std::abs(d) > kTangencyTol * std::max(1.0, norm(m, w)))
        throw std::invalid_argument(std::string(who) +
                                    ": vector not tangent to Sigma (residual " +
                                    std::to_string(d) + ")");
}

}  // namespace

Model model_from_id(std::string_view id) {
    if (id == "s3") return Model::Sphere3;
    if (id == "cyl") return Model::Cylinder1;
    throw std::invalid_argument("unknown model id: " + std::string(id));
}

std::string_view model_id(Model m) {
    return m == Model::Sphere3 ? "s3" : "cyl";
}

double dot(Model m, const SigmaVec& a, const SigmaVec& b) {
    double s = 0.0;
    for (int i = 0; i < sigma_dim(m); ++i) s += a[i] * b[i];
    return s;
}

double norm(Model m, const SigmaVec& a) { return std::sqrt(dot(m, a, a)); }

double lambda_form(Model m, const SigmaVec& z, const SigmaVec& w) {
    check_tangent(m, z, w, "lambda_form");
    if (m == Model::Cylinder1) return w[0];
    return dot(m, j0(z), w);
}

SigmaVec reeb(Model m, const SigmaVec& z) {
    if (m == Model::Cylinder1) return {1.0, 0.0, 0.0, 0.0};
    return j0(z);
}

double dlambda(Model m, const SigmaVec& z, const SigmaVec& u, const SigmaVec& w) {
    check_tangent(m, z, u, "dlambda");
    check_tangent(m, z, w, "dlambda");
    if (m == Model::Cylinder1) return 0.0;  // one-dimensional Sigma
    return 2.0 * dot(m, j0(u), w);
}

TangentVector apply_J(Model m, const SymplPoint& p, const TangentVector& u) {
    TangentVector out;
    if (m == Model::Cylinder1) {
        // J(a d/dr + b d/dtheta) = a d/dtheta - b d/dr
        out.dr = -u.w[0];
        out.w[0] = u.dr;
        return out;
    }
    const SigmaVec R = reeb(m, p.z);
    const double b = dot(m, R, u.w);  // Reeb coefficient = lambda(w)
    SigmaVec xi{};
    for (int i = 0; i < 4; ++i) xi[i] = u.w[i] - b * R[i];
    const SigmaVec jxi = j0(xi);
    out.dr = -b;
    for (int i = 0; i < 4; ++i) out.w[i] = u.dr * R[i] + jxi[i];
    return out;
}

double omega_form(Model m, const SymplPoint& p, const TangentVector& u,
                  const TangentVector& w) {
    const double lu = lambda_form(m, p.z, u.w);
    const double lw = lambda_form(m, p.z, w.w);
    const double dl = dlambda(m, p.z, u.w, w.w);
    return std::exp(p.r) * (u.dr * lw - w.dr * lu + dl);
}

SigmaVec retract(Model m, const SigmaVec& ambient) {
    if (m == Model::Cylinder1) {
        double th = std::fmod(ambient[0], kTwoPi);
        if (th < 0.0) th += kTwoPi;
        return {th, 0.0, 0.0, 0.0};
    }
    const double n = norm(m, ambient);
    if (n < 1e-14) throw std::domain_error("retract: degenerate (zero) ambient vector");
    SigmaVec out{};
    for (int i = 0; i < 4; ++i) out[i] = ambient[i] / n;
    return out;
}

SigmaVec project_tangent(Model m, const SigmaVec& z, const SigmaVec& ambient) {
    if (m == Model::Cylinder1) return ambient;
    const double d = dot(m, z, ambient);
    SigmaVec out{};
    for (int i = 0; i < 4; ++i) out[i] = ambient[i] - d * z[i];
    return out;
}

ValidationReport validate_model(Model m, int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("validate_model: n_samples >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif_r(-3.0, 3.0);
    std::uniform_real_distribution<double> unif_th(0.0, kTwoPi);

    ValidationReport rep;
    rep.n_samples = n_samples;
    rep.min_compatibility = std::numeric_limits<double>::infinity();

    for (int s = 0; s < n_samples; ++s) {
        SigmaVec z{};
        if (m == Model::Sphere3) {
            SigmaVec raw{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
            z = retract(m, raw);
        } else {
            z[0] = unif_th(rng);
        }
        const SigmaVec R = reeb(m, z);

        SigmaVec w{};
        for (int i = 0; i < sigma_dim(m); ++i) w[i] = gauss(rng);
        w = project_tangent(m, z, w);

        rep.max_lambda_reeb_err =
            std::max(rep.max_lambda_reeb_err, std::abs(lambda_form(m, z, R) - 1.0));
        rep.max_dlambda_reeb =
            std::max(rep.max_dlambda_reeb, std::abs(dlambda(m, z, R, w)));

        SymplPoint p{unif_r(rng), z};
        TangentVector u{gauss(rng), w};
        const TangentVector ju = apply_J(m, p, u);
        const TangentVector jju = apply_J(m, p, ju);
        double err = std::abs(jju.dr + u.dr);
        double usq = u.dr * u.dr;
        for (int i = 0; i < sigma_dim(m); ++i) {
            err = std::max(err, std::abs(jju.w[i] + u.w[i]));
            usq += u.w[i] * u.w[i];
        }
        rep.max_J_squared_err = std::max(rep.max_J_squared_err, err);
        if (usq > 1e-20)
            rep.min_compatibility =
                std::min(rep.min_compatibility, omega_form(m, p, u, ju) / usq);
    }

    rep.passed = rep.max_lambda_reeb_err <= 1e-10 && rep.max_dlambda_reeb <= 1e-10 &&
                 rep.max_J_squared_err <= 1e-12 && rep.min_compatibility > 0.0;
    return rep;
}

}  // namespace reeblab
