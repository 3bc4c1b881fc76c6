#pragma once

#include <span>
#include <vector>

#include "stripforge/curves.hpp"

namespace stripforge {

struct PFunctionalReport {
    double P = 0.0;
    /// Multiplier vector paired with ⟨T, ·⟩ in the radicand.
    Vec3 b0 = Vec3::Zero();
    double mu = 0.0;
    std::vector<double> kappa_opt;
    std::vector<double> integrand;
};

/**
 * P(T) = 2∫√(⟨T,b0⟩ − μ)(1+λ²) dσ over a spherical curve T with geodesic
 * curvature λ (σ spherical arclength, dσ = speed dt), and the optimal
 * curvature κ = √(⟨T,b0⟩ − μ)/(1+λ²). Throws DomainViolation when the
 * radicand is not positive at some node.
 */
PFunctionalReport p_functional(const SphericalCurve& tangent, const Vec3& b0, double mu);

/**
 * P_T(κ) = ∫(κ(1+λ²)² + (⟨T,b0⟩ − μ)/κ) dσ: the modified Sadowsky energy of
 * the curve with tangent image T and curvature κ plus ⟨b0, γ(L) − γ(0)⟩.
 * Bounded below by P(T), with equality at κ_opt.
 */
double p_lagrangian(const SphericalCurve& tangent, std::span<const double> kappa, const Vec3& b0, double mu);

/// Multiplier vector of the P-functional for a strip with force vector b0:
/// ⟨T, 2b0⟩ = κ²(1+λ²)² + μ on elastic strips.
inline Vec3 multiplier_from_force(const Vec3& force) { return 2.0 * force; }

/**
 * γ = ∫ T/κ dσ with frame (T, e, T×e) and curvature κ on the tangent image's
 * grid; speed |γ'| = speed/κ. The profile stores κ and the geodesic
 * curvature as λ. Throws NonPositiveKappa.
 */
FramedCurve reconstruct_from_tangent(const SphericalCurve& tangent, std::span<const double> kappa);

} // namespace stripforge
