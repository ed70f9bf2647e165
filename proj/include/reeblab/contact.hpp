#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace reeblab {

/// Concrete contact models carried by the lab.
///
/// Sphere3:   Sigma = S^3 in R^4 with the round contact form
///            lambda_z(v) = <J0 z, v>, Reeb field R(z) = J0 z.
/// Cylinder1: Sigma = R/2piZ with lambda = dtheta, R = d/dtheta.
///            The contact structure is trivial; the model exists as a
///            closed-form oracle for the flow equations.
enum class Model : std::uint8_t { Sphere3, Cylinder1 };

constexpr int sigma_dim(Model m) { return m == Model::Sphere3 ? 4 : 1; }

Model model_from_id(std::string_view id);          // "s3" | "cyl"
std::string_view model_id(Model m);

/// Coordinates of a point on Sigma (first sigma_dim entries used).
using SigmaVec = std::array<double, 4>;

/// A point (r, z) of the symplectization R x Sigma; r is the log-radius.
struct SymplPoint {
    double r = 0.0;
    SigmaVec z{};
};

/// A tangent vector (dr, w) at a SymplPoint; w is ambient, tangent to Sigma.
struct TangentVector {
    double dr = 0.0;
    SigmaVec w{};
};

/// lambda_z(w). Rejects w that is not tangent to Sigma at z.
double lambda_form(Model m, const SigmaVec& z, const SigmaVec& w);

/// Reeb vector field at z; lambda(R) = 1 by construction.
SigmaVec reeb(Model m, const SigmaVec& z);

/// d lambda_z(u, w). Antisymmetric; vanishes on the Reeb direction.
double dlambda(Model m, const SigmaVec& z, const SigmaVec& u, const SigmaVec& w);

/// SFT-like almost complex structure: d/dr -> R, R -> -d/dr, and the
/// standard complex structure on the contact hyperplane. Independent of p.r.
TangentVector apply_J(Model m, const SymplPoint& p, const TangentVector& u);

/// omega = e^r (dr ^ lambda + d lambda) evaluated on two tangent vectors.
double omega_form(Model m, const SymplPoint& p, const TangentVector& u,
                  const TangentVector& w);

/// Return an ambient point to Sigma (normalization / reduction mod 2pi).
SigmaVec retract(Model m, const SigmaVec& ambient);

/// Orthogonal projection of an ambient vector onto T_z Sigma. Idempotent.
SigmaVec project_tangent(Model m, const SigmaVec& z, const SigmaVec& ambient);

struct ValidationReport {
    int n_samples = 0;
    double max_lambda_reeb_err = 0.0;  // max |lambda(R) - 1|
    double max_dlambda_reeb = 0.0;     // max |dlambda(R, w)|
    double max_J_squared_err = 0.0;    // max ||J^2 u + u||
    double min_compatibility = 0.0;    // min omega(u, Ju) / |u|^2
    bool passed = false;
};

/// Check the defining identities of the model over seeded random samples.
ValidationReport validate_model(Model m, int n_samples, std::uint64_t seed);

// Small ambient-vector helpers shared across modules.
double dot(Model m, const SigmaVec& a, const SigmaVec& b);
double norm(Model m, const SigmaVec& a);

}  // namespace reeblab
