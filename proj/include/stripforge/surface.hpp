#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stripforge/curves.hpp"

namespace stripforge {

/**
 * Rectifying strip F(s, u) = γ(s) + u D(s), D = λT + B, sampled on
 * rows = n nodes × cols = 2m+1 rulings positions u_j = −w + j w/m.
 * vertex(i, j) is stored row-major.
 */
struct StripMesh {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double width = 0.0;
    std::vector<Vec3> vertices;
    std::vector<Vec3> ruling;       // D per row
    std::vector<Vec3> normal;       // −N per row
    /// Per quad strip between rows i and i+1: max deviation of the quad
    /// normals from their mean.
    std::vector<double> ruling_defect;
    double developability_defect = 0.0;

    const Vec3& vertex(std::size_t i, std::size_t j) const { return vertices[i * cols + j]; }
    Vec3& vertex(std::size_t i, std::size_t j) { return vertices[i * cols + j]; }
};

/// Admissible half-width bound 1 / sup|λ'| (infinite when λ' ≡ 0).
double regression_bound(const CurvatureProfile& profile);

/// Build the strip mesh; throws WidthExceedsRegression when w·sup|λ'| >= 1.
StripMesh build_mesh(const FramedCurve& curve, double width, std::size_t rulings_per_side);

/// Unit normal of the quad (i, j)–(i+1, j+1) from its diagonals, oriented as
/// the triangles of export_obj.
Vec3 quad_normal(const StripMesh& mesh, std::size_t i, std::size_t j);

/// Recompute ruling_defect and developability_defect from the vertices.
void update_developability(StripMesh& mesh);

/**
 * Angle-defect Gaussian curvature (2π − Σ angles) / A_mixed at every interior
 * vertex of the triangulation used by export_obj; boundary entries are 0.
 */
std::vector<double> gauss_curvature_probe(const StripMesh& mesh);

/// Max |K| over interior vertices.
double max_abs_gauss(const std::vector<double>& K, const StripMesh& mesh);

/// Wavefront OBJ: `v` lines (17 significant digits) then triangle `f` lines.
std::string export_obj(const StripMesh& mesh);
void write_obj(std::ostream& os, const StripMesh& mesh);

/// Per-vertex CSV `s,u,defect` (defect of the quad strip starting at the row).
std::string export_defect_csv(const StripMesh& mesh, double h);

} // namespace stripforge
