#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stripforge/curves.hpp"

namespace stripforge {

/**
 * Spherical elastica λ'' = −½λ³ − (1 − l/2)λ on a uniform grid in the
 * spherical arclength t, with first integral λ'² + ¼λ⁴ + (1 − l/2)λ² = A.
 */
struct ElasticaSolution {
    double l = 1.0;
    double A = 0.0;
    double h = kDefaultStep;
    std::vector<double> lambda, dlambda, d2lambda, d3lambda;
    std::optional<double> period_estimate;

    std::size_t size() const { return lambda.size(); }
    double length() const { return h * static_cast<double>(size() - 1); }
    /// Jet [λ, λ', λ'', λ'''] at node i.
    Jet jet(std::size_t i) const;
    /// max |λ'² + ¼λ⁴ + (1 − l/2)λ² − A| over the nodes.
    double invariant_violation() const;
};

/// Right-hand side of the cubic oscillator and its first integral.
double elastica_force(double lambda, double l);
double elastica_energy(double lambda, double dlambda, double l);

/// RK4 on (λ, λ') with step h up to `length`; jets filled from the ODE.
ElasticaSolution solve_spherical_elastica(double l, double lambda0, double dlambda0, double length, double h);

/// Rebuild a solution from stored (λ, λ') samples with the jet law.
ElasticaSolution elastica_from_samples(double l, double h, std::vector<double> lambda, std::vector<double> dlambda);

enum class StripKind { force_free, momentum, helix, planar_elastica, cylinder_geodesic };

std::string to_string(StripKind kind);
StripKind strip_kind_from_string(const std::string& name);

struct StripConstruction {
    StripKind kind = StripKind::helix;
    CurvatureProfile profile;
    FramedCurve frame;
    double mu = 0.0;
    /// Elastica multiplier and energy constant used (NaN when not applicable).
    double l = 0.0;
    double A = 0.0;
    std::string provenance;
};

/**
 * Force-free strip from a spherical elastica with l = 1: κ = 1/(1+λ²),
 * modified torsion λ, μ = −1. The elastica and the Frenet frame are
 * integrated together in the strip arclength s (ds = (1+λ²) dt), so κ, λ
 * and their jets are exact samples of the construction at every node.
 */
StripConstruction build_force_free(const ElasticaSolution& sol, const Frame& initial = {});

/**
 * Momentum strip from a spherical elastica λ_B with multiplier l = −μ: the
 * binormal image has geodesic curvature λ_B, the strip has modified torsion
 * 1/λ_B and κ = 1/(λ(1+λ²)) (so s1 = 2). Solutions with λ_B < 0 are mirrored.
 * Hands off to build_helix when λ_B is constant (sup |λ_B'| < 1e−8).
 */
StripConstruction build_momentum(const ElasticaSolution& sol, double mu, const Frame& initial = {});

/// Constant κ, λ with μ = −κ²(1+λ²)²(1+2λ²).
StripConstruction build_helix(double kappa, double lambda, double length = 2.0 * 3.14159265358979323846,
                              double h = kDefaultStep, const Frame& initial = {});

double helix_multiplier(double kappa, double lambda);

/// Planar elastica κ'' = −½κ³ − ½μκ (λ ≡ 0); requires κ > 0 along the run.
StripConstruction build_planar_elastica(double kappa0, double dkappa0, double mu, double length,
                                        double h = kDefaultStep, const Frame& initial = {});

/**
 * Constant-λ elastic strip with non-constant curvature
 * κ(s) = (2c/a²) sech(c(s − s_c)/a), a = √(1+λ²), μ = −2(1+λ²)c²: a slope
 * line of a cylinder. center < 0 places s_c at the middle of the run.
 */
StripConstruction build_cylinder_geodesic(double lambda, double c, double length, double h = kDefaultStep,
                                          double center = -1.0, const Frame& initial = {});

/// Planar elastica data κ'² + ¼κ⁴ + lκ² = E.
struct PlanarElastica {
    double h = kDefaultStep;
    std::vector<double> kappa;
    std::vector<double> dkappa;
    std::vector<double> d2kappa;
    std::vector<Vec3> gamma;
    double l_planar = 0.0;
    double E = 0.0;
    /// max |κ'² + ¼κ⁴ + lκ² − E| over the nodes.
    double first_integral_residual = 0.0;
    bool zero_energy = false;
    /// Spread of ⟨γ̃, (λT+B)/a⟩.
    double planarity_defect = 0.0;
    /// max |κ̃ − a²κ(as)| where κ̃ is re-extracted from the points γ̃.
    double curvature_mismatch = 0.0;
};

/**
 * γ̃(σ) = γ(aσ) − (λ/a) σ (λT + B). Sampling σ_j = j h / a keeps the original
 * nodes. E and the multiplier are fitted by least squares from the jets
 * κ̃ = a²κ, κ̃' = a³κ', and reported with the fit residual.
 */
PlanarElastica cylinder_geodesic_transform(const StripConstruction& strip, double zero_energy_tol = 1e-6);

/// Closure search over force-free strips (elastica multiplier fixed to 1).
struct ClosureCandidate {
    double lambda0 = 0.0;
    double A = 0.0;
    double period = 0.0;
    /// Holonomy rotation angle over one period, in [0, π].
    double rotation_angle = 0.0;
    int p = 0;
    int q = 1;
    double angle_defect = 0.0;
    /// Axial mass-center component of T (weighted by 1+λ²) over one period,
    /// relative to the strip length per period; |mass| / L when the holonomy
    /// is the identity.
    double mass_defect = 0.0;
    double defect() const { return angle_defect + mass_defect; }
};

struct ClosureOptions {
    double h = kDefaultStep;
    int q_max = 12;
    double angle_tol = 1e-2;
    double mass_tol = 1e-2;
    double max_time = 200.0;
};

/// Evaluate one (λ0, A) pair; std::nullopt when A is below the potential at
/// λ0 or no period is found within max_time.
std::optional<ClosureCandidate> closure_candidate(double lambda0, double A, const ClosureOptions& opt = {});

/// Sweep λ0 × A; returns candidates within tolerances, sorted by defect.
std::vector<ClosureCandidate> closure_search(const std::vector<double>& lambda0_grid, const std::vector<double>& A_grid,
                                             const ClosureOptions& opt = {});

} // namespace stripforge
