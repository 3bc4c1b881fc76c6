#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "stripforge/jet.hpp"

namespace stripforge {

using Vec3 = Eigen::Vector3d;

inline constexpr double kFrameTolerance = 1e-10;
inline constexpr double kDefaultStep = 1e-3;

enum class JetSource { none, analytic, finite_difference };

/**
 * Intrinsic description of a Frenet curve on a uniform arclength grid
 * s_i = i·h: curvature κ > 0 and modified torsion λ = τ/κ.
 *
 * Derivative jets are optional. When present, dkappa[k][i] holds the
 * (k+1)-th derivative of κ at node i (same for dlambda), up to third order.
 */
struct CurvatureProfile {
    double h = kDefaultStep;
    std::vector<double> kappa;
    std::vector<double> lambda;
    std::array<std::vector<double>, 3> dkappa;
    std::array<std::vector<double>, 3> dlambda;
    JetSource jet_source = JetSource::none;

    std::size_t size() const { return kappa.size(); }
    double length() const { return h * static_cast<double>(size() - 1); }
    double s(std::size_t i) const { return h * static_cast<double>(i); }
    bool has_jets() const { return jet_source != JetSource::none; }

    /// Jets of κ and λ at node i (order 3). Throws MissingJets without jets.
    Jet kappa_jet(std::size_t i) const;
    Jet lambda_jet(std::size_t i) const;

    /// Allocate jet storage for the current node count.
    void allocate_jets(JetSource source);
    void set_jets(std::size_t i, const Jet& kappa_j, const Jet& lambda_j);

    /// Checks κ > 0, grid uniformity data and array sizes; throws on violation.
    void validate(std::size_t min_nodes = 5) const;
};

/// Orthonormal right-handed triad with a base point.
struct Frame {
    Vec3 origin = Vec3::Zero();
    Vec3 T = Vec3::UnitX();
    Vec3 N = Vec3::UnitY();
    Vec3 B = Vec3::UnitZ();

    /// Largest deviation from orthonormality (norms and pairwise dot products).
    double orthonormality_defect() const;
};

/**
 * Sampled space curve with its Frenet frame. speed[i] is |γ'| with respect
 * to the sampling parameter (1 for arclength sampling).
 */
struct FramedCurve {
    double h = kDefaultStep;
    std::vector<Vec3> gamma;
    std::vector<Vec3> T;
    std::vector<Vec3> N;
    std::vector<Vec3> B;
    std::vector<double> speed;
    CurvatureProfile profile;

    std::size_t size() const { return gamma.size(); }
    Frame frame_at(std::size_t i) const { return {gamma[i], T[i], N[i], B[i]}; }

    /// Max over nodes of the frame orthonormality defect.
    double max_orthonormality_defect() const;
};

enum class QuadratureRule { simpson, trapezoid, simpson_trapezoid };

struct QuadratureResult {
    double value = 0.0;
    QuadratureRule rule = QuadratureRule::simpson;
    double h = 0.0;
};

/**
 * Integrate the arclength Frenet system γ' = T, T' = κN, N' = −κT + κλB,
 * B' = −κλN with fixed-step RK4. κ and λ at the half steps come from cubic
 * interpolation of the profile samples. The triad is re-orthonormalized by
 * modified Gram–Schmidt after every step.
 */
FramedCurve integrate_frame(const CurvatureProfile& profile, const Frame& initial = {});

/**
 * Fill κ', κ'', κ''', λ', λ'', λ''' by finite differences.
 *
 * Interior: 5-point centered stencils (4th order for the first and second
 * derivatives, 2nd order for the third). Near the boundary the stencil window
 * is shifted to stay inside the grid with the same accuracy order. Requires
 * n >= 7.
 */
CurvatureProfile differentiate_profile(const CurvatureProfile& profile);

/// Finite-difference derivative of the given order applied to uniform samples,
/// with the same stencil choice as differentiate_profile.
std::vector<double> finite_difference(std::span<const double> values, double h, int derivative_order);

/**
 * Composite Simpson for an odd number of samples; for an even number, Simpson
 * on the first n−1 samples and the trapezoid rule on the last interval.
 */
QuadratureResult quadrature(std::span<const double> values, double h);

/// Cumulative integral F_i = ∫_0^{t_i} f with 4th-order accurate interval sums.
std::vector<double> cumulative_integral(std::span<const double> values, double h);

/// Cubic (4-point Lagrange) interpolation of uniform samples at parameter t.
double interpolate_uniform(std::span<const double> values, double h, double t);
Vec3 interpolate_uniform(std::span<const Vec3> values, double h, double t);

/**
 * Monotone arclength map s(t) = ∫_0^t v for samples of the speed v on a
 * uniform t-grid, with cubic inversion t(s).
 */
class ArclengthMap {
public:
    ArclengthMap(double h_t, std::span<const double> speed);

    double total() const { return s_.back(); }
    double h_t() const { return h_t_; }
    std::span<const double> s_nodes() const { return s_; }
    double s_of(double t) const;
    double t_of(double s) const;

    /// Uniform s-grid with spacing h_s covering [0, total()].
    std::vector<double> uniform_grid(double h_s) const;

private:
    double h_t_;
    std::vector<double> s_;
};

/**
 * Resample a curve sampled on a uniform parameter grid (speed v = curve.speed)
 * onto a uniform arclength grid of spacing h_s. Positions, frames, κ and λ are
 * interpolated cubically; frames are re-orthonormalized. The returned profile
 * carries no jets.
 */
FramedCurve resample_by_arclength(const FramedCurve& curve, double h_s);

/**
 * Curve on the unit sphere with its Darboux frame: position x, unit tangent
 * e = x' / |x'|, conormal c = x × e, and geodesic curvature. speed[i] = |x'|
 * with respect to the sampling parameter (1 for spherical arclength).
 */
struct SphericalCurve {
    double h = kDefaultStep;
    std::vector<Vec3> point;
    std::vector<Vec3> tangent;
    std::vector<Vec3> conormal;
    std::vector<double> geodesic_curvature;
    std::vector<double> speed;

    std::size_t size() const { return point.size(); }
};

/**
 * Integrate x' = e, e' = −x + λc, c' = −λe (arclength on S²) with RK4 for
 * geodesic curvature samples λ_i on a uniform grid. initial.T/N/B seed x/e/c.
 */
SphericalCurve integrate_darboux(std::span<const double> geodesic_curvature, double h,
                                 const Frame& initial = {});

/// Tangent image of a framed curve: x = T, e = N, c = B, geodesic curvature
/// λ, sampled on the curve's grid with speed κ·v.
SphericalCurve tangent_image(const FramedCurve& curve);

/// Curvature, torsion and speed re-extracted from sampled positions by
/// finite differences (κ = |γ'×γ''|/|γ'|³, τ = det(γ',γ'',γ''')/|γ'×γ''|²).
struct DiscreteCurvature {
    std::vector<double> kappa;
    std::vector<double> torsion;
    std::vector<double> speed;
};
DiscreteCurvature extract_curvature(std::span<const Vec3> points, double h);

/**
 * Smooth random profile with analytic jets: κ = κ0 + Σ a sin(ωs + φ) with
 * κ >= κ0/2, λ = c + Σ b sin(ωs + φ). Reproducible for a given seed.
 */
CurvatureProfile random_profile(std::uint64_t seed, double length, double h = kDefaultStep);

/// Modified Gram–Schmidt on (T, N, B) in place.
void orthonormalize(Vec3& T, Vec3& N, Vec3& B);

} // namespace stripforge
