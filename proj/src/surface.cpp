#include "stripforge/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "stripforge/error.hpp"

namespace stripforge {

namespace {

double angle_between(const Vec3& a, const Vec3& b)
{
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

// Mixed Voronoi area of triangle corner p (Meyer et al.).
double mixed_area(const Vec3& p, const Vec3& q, const Vec3& r)
{
    const Vec3 pq = q - p, pr = r - p, qr = r - q;
    const double area = 0.5 * pq.cross(pr).norm();
    if (area == 0.0) return 0.0;
    const double ap = angle_between(pq, pr);
    const double aq = angle_between(-pq, qr);
    const double ar = angle_between(-pr, -qr);
    const double right = 0.5 * std::numbers::pi;
    if (ap > right) return 0.5 * area;
    if (aq > right || ar > right) return 0.25 * area;
    const double cot_q = std::cos(aq) / std::sin(aq);
    const double cot_r = std::cos(ar) / std::sin(ar);
    return (pr.squaredNorm() * cot_q + pq.squaredNorm() * cot_r) / 8.0;
}

} // namespace

double regression_bound(const CurvatureProfile& profile)
{
    std::vector<double> dl;
    if (profile.has_jets() && profile.dlambda[0].size() == profile.size())
        dl = profile.dlambda[0];
    else
        dl = finite_difference(profile.lambda, profile.h, 1);
    double sup = 0.0;
    for (double v : dl) sup = std::max(sup, std::abs(v));
    return sup > 0.0 ? 1.0 / sup : std::numeric_limits<double>::infinity();
}

StripMesh build_mesh(const FramedCurve& curve, double width, std::size_t rulings_per_side)
{
    if (!(width > 0.0) || !std::isfinite(width)) throw StripError(ErrorCode::InvalidArgument, "width must be positive");
    if (rulings_per_side == 0) throw StripError(ErrorCode::InvalidArgument, "need at least one ruling sample per side");
    const auto& prof = curve.profile;
    if (prof.lambda.size() != curve.size()) throw StripError(ErrorCode::InvalidArgument, "curve carries no profile");
    if (curve.size() < 2) throw StripError(ErrorCode::GridTooSmall, "mesh needs at least 2 rows");
    const double bound = regression_bound(prof);
    if (!(width < bound)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "half-width %.6g reaches the edge of regression (bound 1/sup|lambda'| = %.6g)",
                      width, bound);
        throw StripError(ErrorCode::WidthExceedsRegression, buf);
    }

    StripMesh mesh;
    mesh.rows = curve.size();
    mesh.cols = 2 * rulings_per_side + 1;
    mesh.width = width;
    mesh.vertices.resize(mesh.rows * mesh.cols);
    mesh.ruling.resize(mesh.rows);
    mesh.normal.resize(mesh.rows);
    const double du = width / static_cast<double>(rulings_per_side);
    for (std::size_t i = 0; i < mesh.rows; ++i) {
        const Vec3 D = prof.lambda[i] * curve.T[i] + curve.B[i];
        mesh.ruling[i] = D;
        mesh.normal[i] = -curve.N[i];
        for (std::size_t j = 0; j < mesh.cols; ++j) {
            const double u = (j + 1 == mesh.cols) ? width : -width + static_cast<double>(j) * du;
            mesh.vertex(i, j) = curve.gamma[i] + u * D;
        }
    }
    update_developability(mesh);
    return mesh;
}

Vec3 quad_normal(const StripMesh& mesh, std::size_t i, std::size_t j)
{
    const Vec3 d1 = mesh.vertex(i + 1, j + 1) - mesh.vertex(i, j);
    const Vec3 d2 = mesh.vertex(i, j + 1) - mesh.vertex(i + 1, j);
    return d1.cross(d2).normalized();
}

void update_developability(StripMesh& mesh)
{
    mesh.ruling_defect.assign(mesh.rows, 0.0);
    mesh.developability_defect = 0.0;
    if (mesh.rows < 2 || mesh.cols < 2) return;
    std::vector<Vec3> n(mesh.cols - 1);
    for (std::size_t i = 0; i + 1 < mesh.rows; ++i) {
        Vec3 mean = Vec3::Zero();
        for (std::size_t j = 0; j + 1 < mesh.cols; ++j) {
            n[j] = quad_normal(mesh, i, j);
            mean += n[j];
        }
        mean.normalize();
        double d = 0.0;
        for (const auto& v : n) d = std::max(d, (v - mean).norm());
        mesh.ruling_defect[i] = d;
        mesh.developability_defect = std::max(mesh.developability_defect, d);
    }
}

std::vector<double> gauss_curvature_probe(const StripMesh& mesh)
{
    const std::size_t R = mesh.rows, C = mesh.cols;
    std::vector<double> angle(R * C, 0.0), area(R * C, 0.0), K(R * C, 0.0);
    auto corner = [&](std::size_t a, std::size_t b, std::size_t c) {
        const Vec3& p = mesh.vertices[a];
        const Vec3& q = mesh.vertices[b];
        const Vec3& r = mesh.vertices[c];
        angle[a] += angle_between(q - p, r - p);
        area[a] += mixed_area(p, q, r);
    };
    auto triangle = [&](std::size_t a, std::size_t b, std::size_t c) {
        corner(a, b, c);
        corner(b, c, a);
        corner(c, a, b);
    };
    for (std::size_t i = 0; i + 1 < R; ++i)
        for (std::size_t j = 0; j + 1 < C; ++j) {
            const std::size_t v00 = i * C + j, v10 = (i + 1) * C + j, v11 = (i + 1) * C + j + 1, v01 = i * C + j + 1;
            triangle(v00, v10, v11);
            triangle(v00, v11, v01);
        }
    for (std::size_t i = 1; i + 1 < R; ++i)
        for (std::size_t j = 1; j + 1 < C; ++j) {
            const std::size_t v = i * C + j;
            if (area[v] > 0.0) K[v] = (2.0 * std::numbers::pi - angle[v]) / area[v];
        }
    return K;
}

double max_abs_gauss(const std::vector<double>& K, const StripMesh& mesh)
{
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < mesh.rows; ++i)
        for (std::size_t j = 1; j + 1 < mesh.cols; ++j) m = std::max(m, std::abs(K[i * mesh.cols + j]));
    return m;
}

void write_obj(std::ostream& os, const StripMesh& mesh)
{
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        os << buf;
    }
    const std::size_t C = mesh.cols;
    for (std::size_t i = 0; i + 1 < mesh.rows; ++i)
        for (std::size_t j = 0; j + 1 < C; ++j) {
            const std::size_t v00 = i * C + j + 1, v10 = (i + 1) * C + j + 1, v11 = (i + 1) * C + j + 2,
                              v01 = i * C + j + 2;
            os << "f " << v00 << ' ' << v10 << ' ' << v11 << '\n';
            os << "f " << v00 << ' ' << v11 << ' ' << v01 << '\n';
        }
}

std::string export_obj(const StripMesh& mesh)
{
    std::ostringstream os;
    write_obj(os, mesh);
    return os.str();
}

std::string export_defect_csv(const StripMesh& mesh, double h)
{
    std::ostringstream os;
    os << "s,u,defect\n";
    char buf[128];
    const double du = mesh.cols > 1 ? 2.0 * mesh.width / static_cast<double>(mesh.cols - 1) : 0.0;
    for (std::size_t i = 0; i < mesh.rows; ++i)
        for (std::size_t j = 0; j < mesh.cols; ++j) {
            const double d = i < mesh.ruling_defect.size() ? mesh.ruling_defect[i] : 0.0;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", h * static_cast<double>(i),
                          -mesh.width + du * static_cast<double>(j), d);
            os << buf;
        }
    return os.str();
}

} // namespace stripforge
