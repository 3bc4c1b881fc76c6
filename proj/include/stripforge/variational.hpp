#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stripforge/curves.hpp"
#include "stripforge/jet.hpp"

namespace stripforge {

/// Nodes excluded at each end when taking residual sup-norms.
inline constexpr std::size_t kBoundaryZone = 3;

/// Printed (nested) or fully expanded evaluation of a3, s2, f1 and f2.
enum class FormVariant { printed, expanded };

/**
 * Pointwise coefficient formulas of the modified Sadowsky functional in terms
 * of the jets of κ and λ at one node. Results are jets of reduced order where
 * derivatives are taken.
 */
namespace formulas {

Jet a1(const Jet& k, const Jet& l, double mu);
Jet a2(const Jet& k, const Jet& l);
Jet a3(const Jet& k, const Jet& l, FormVariant form = FormVariant::printed);
Jet s1(const Jet& k, const Jet& l);
Jet s2(const Jet& k, const Jet& l, FormVariant form = FormVariant::printed);
Jet s3(const Jet& k, const Jet& l);
double f1(const Jet& k, const Jet& l, double mu, FormVariant form = FormVariant::printed);
double f2(const Jet& k, const Jet& l, FormVariant form = FormVariant::printed);

} // namespace formulas

struct EnergyReport {
    double S_mu = 0.0;
    double mu = 0.0;
    double length = 0.0;
    std::vector<double> integrand;
    QuadratureRule rule = QuadratureRule::simpson;
};

/// S_μ = ∫(κ²(1+λ²)² − μ) v over the profile grid; speed defaults to 1.
EnergyReport sadowsky_energy(const CurvatureProfile& profile, double mu, std::span<const double> speed = {});

struct ELResidual {
    std::vector<double> f1;
    std::vector<double> f2;
    double f1_sup = 0.0;
    double f2_sup = 0.0;
    std::size_t skipped = kBoundaryZone;
};

/// Euler–Lagrange residuals f1, f2 per node; sup over nodes outside the
/// boundary zones.
ELResidual el_residuals(const CurvatureProfile& profile, double mu, FormVariant form = FormVariant::printed,
                        std::size_t boundary_zone = kBoundaryZone);

struct ForceField {
    std::vector<double> a1, a2, a3;
    std::vector<Vec3> b0;
    Vec3 mean = Vec3::Zero();
    double drift = 0.0;
    double max_norm = 0.0;
};

/// b0 = a1 T + a2 N + a3 B per node along the framed curve.
ForceField force_field(const CurvatureProfile& profile, double mu, const FramedCurve& curve);

struct TorqueField {
    std::vector<double> s1, s2, s3;
    std::vector<Vec3> J;
    std::vector<Vec3> b1;
    Vec3 mean = Vec3::Zero();
    double drift = 0.0;
    std::vector<double> b0_dot_b1;
    double b0_dot_b1_min = 0.0;
    double b0_dot_b1_max = 0.0;
    /// max |⟨γ,T⟩| = ½ max |⟨γ,γ⟩'|; near zero when |γ| is conserved.
    double radial_derivative = 0.0;
    bool radius_conserved = false;
};

/// J = s1 T + s2 N + s3 B and b1 = J − γ×b0 per node.
TorqueField torque_field(const CurvatureProfile& profile, double mu, const FramedCurve& curve);
TorqueField torque_field(const CurvatureProfile& profile, const ForceField& force, const FramedCurve& curve);

/// Frenet components of a variation vector field with jets through order 3.
struct VariationField {
    std::vector<Jet> u1, u2, u3;

    std::size_t size() const { return u1.size(); }
    static VariationField zero(std::size_t n);
};

/// u = a (constant vector) decomposed along the moving frame.
VariationField translation_field(const FramedCurve& curve, const Vec3& a);

/// u = w × γ decomposed along the moving frame.
VariationField rotation_field(const FramedCurve& curve, const Vec3& w);

/// One smooth bump exp(−1/(1−x²)) supported on [start, end] (arclength).
struct Bump {
    double start = 0.0;
    double end = 0.0;
    double amplitude = 1.0;
    /// Frenet component: 1, 2 or 3.
    int component = 2;
    /// Extra modulation sin(ω s + φ) when ω ≠ 0.
    double omega = 0.0;
    double phase = 0.0;
};

/// Sum of bumps; vanishes with all jets outside the bump supports.
VariationField bump_field(const CurvatureProfile& profile, std::span<const Bump> bumps);

/// Random compactly supported field: a few bumps per component whose
/// supports avoid the boundary zones by at least `margin` (arclength).
VariationField random_compact_field(const CurvatureProfile& profile, std::uint64_t seed, double margin);

struct FirstVariation {
    /// 2[∫(u2 f1 + u3 f2) + b(L) − b(0)].
    double dS = 0.0;
    /// ∫ d/dt((κ²(1+λ²)² − μ)v) evaluated from v̇, κ̇, λ̇ directly.
    double dS_direct = 0.0;
    double bulk = 0.0;
    double boundary = 0.0;
    std::vector<double> v_dot, kappa_dot, lambda_dot;
    std::vector<double> b;
};

FirstVariation first_variation(const CurvatureProfile& profile, const FramedCurve& curve,
                               const VariationField& field, double mu);

/// Noether boundary term b per node.
std::vector<double> noether_boundary_term(const CurvatureProfile& profile, const FramedCurve& curve,
                                          const VariationField& field, double mu);

struct Tolerances {
    double el = 1e-5;
    double drift = 1e-6;
};

/// Defaults, overridden by STRIPFORGE_TOL ("el=1e-5,drift=1e-6" or a bare
/// number applied to both).
Tolerances tolerances_from_env();
Tolerances parse_tolerances(const std::string& text, Tolerances base = {});

struct VerificationReport {
    double mu = 0.0;
    double S_mu = 0.0;
    double length = 0.0;
    double f1_sup = 0.0;
    double f2_sup = 0.0;
    double b0_drift = 0.0;
    double b1_drift = 0.0;
    double b0_dot_b1_min = 0.0;
    double b0_dot_b1_max = 0.0;
    JetSource jets = JetSource::none;
    Tolerances tol;
    bool certified = false;

    std::string to_text() const;
    std::string to_json() const;
};

/// Residuals, conservation drifts and energy in one pass. Profiles without
/// jets are differentiated by finite differences first.
VerificationReport verify_strip(const CurvatureProfile& profile, const FramedCurve& curve, double mu,
                                const Tolerances& tol = {});

} // namespace stripforge
