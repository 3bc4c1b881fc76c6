#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "stripforge/error.hpp"
#include "stripforge/integrable.hpp"
#include "stripforge/surface.hpp"
#include "support.hpp"

using namespace stripforge;

namespace {

double half_bound(const StripConstruction& s) { return 0.5 * regression_bound(s.profile); }

} // namespace

TEST(Mesh, VertexCountAndRulings)
{
    const auto s = build_helix(1.0, 0.5, 3.0, 1e-2);
    const auto mesh = build_mesh(s.frame, 0.3, 3);
    EXPECT_EQ(mesh.rows, s.frame.size());
    EXPECT_EQ(mesh.cols, 7u);
    EXPECT_EQ(mesh.vertices.size(), s.frame.size() * 7);
    for (std::size_t i = 0; i < mesh.rows; ++i) {
        EXPECT_EQ(mesh.ruling[i], (0.5 * s.frame.T[i] + s.frame.B[i]).eval());
        EXPECT_EQ(mesh.normal[i], (-s.frame.N[i]).eval());
        EXPECT_EQ(mesh.vertex(i, 3), s.frame.gamma[i]);
        EXPECT_NEAR((mesh.vertex(i, 0) - s.frame.gamma[i] + 0.3 * mesh.ruling[i]).norm(), 0.0, 1e-15);
    }
}

TEST(Mesh, ZeroWidthCollapsesOntoCenterline)
{
    const auto s = sftest::sample_force_free(1e-3, 6.0);
    const auto mesh = build_mesh(s.frame, 1e-12, 2);
    for (std::size_t i = 0; i < mesh.rows; ++i)
        for (std::size_t j = 0; j < mesh.cols; ++j) ASSERT_LE((mesh.vertex(i, j) - s.frame.gamma[i]).norm(), 1e-11);
}

TEST(Mesh, HelixIsDevelopable)
{
    const auto s = build_helix(1.0, 1.0);
    EXPECT_TRUE(std::isinf(regression_bound(s.profile)));
    for (double w : {0.1, 1.0, 3.0}) EXPECT_LE(build_mesh(s.frame, w, 4).developability_defect, 1e-8) << w;
}

TEST(Mesh, ElasticStripsAreDevelopable)
{
    for (const auto& s : {sftest::sample_force_free(), sftest::sample_momentum()}) {
        const auto mesh = build_mesh(s.frame, half_bound(s), 4);
        EXPECT_LE(mesh.developability_defect, 1e-6);
        EXPECT_LE(max_abs_gauss(gauss_curvature_probe(mesh), mesh), 1e-4);
    }
}

TEST(Mesh, NonStripRulingsAreNotDevelopable)
{
    // Rulings along B alone do not give a developable surface when λ varies.
    auto s = sftest::sample_force_free(1e-3, 6.0);
    auto mesh = build_mesh(s.frame, 0.2, 2);
    for (std::size_t i = 0; i < mesh.rows; ++i)
        for (std::size_t j = 0; j < mesh.cols; ++j)
            mesh.vertex(i, j) = s.frame.gamma[i] + (-0.2 + 0.1 * static_cast<double>(j)) * s.frame.B[i];
    update_developability(mesh);
    EXPECT_GE(mesh.developability_defect, 1e-4);
}

TEST(Mesh, WidthGuard)
{
    const auto s = sftest::sample_force_free(1e-3, 6.0);
    const double bound = regression_bound(s.profile);
    EXPECT_NO_THROW(build_mesh(s.frame, 0.99 * bound, 2));
    try {
        build_mesh(s.frame, 1.01 * bound, 2);
        FAIL();
    } catch (const StripError& e) {
        EXPECT_EQ(e.code(), ErrorCode::WidthExceedsRegression);
    }
    EXPECT_THROW(build_mesh(s.frame, 0.0, 2), StripError);
}

TEST(Gauss, ConvergesUnderRefinement)
{
    // Below h ~ 5e-3 the probe sits at the roundoff floor, so refine from coarse steps.
    double prev = 0.0;
    for (double h : {0.1, 0.05, 0.025}) {
        const auto s = sftest::sample_force_free(h, 8.0);
        const auto mesh = build_mesh(s.frame, half_bound(s), 4);
        const double k = max_abs_gauss(gauss_curvature_probe(mesh), mesh);
        if (prev > 0.0) {
            EXPECT_GE(prev / k, 8.0) << h;
        }
        prev = k;
    }
}

TEST(Gauss, PlanarStripIsFlat)
{
    const auto s = build_planar_elastica(1.2, 0.0, -2.0, 6.0);
    const auto mesh = build_mesh(s.frame, 0.5, 4);
    EXPECT_LE(max_abs_gauss(gauss_curvature_probe(mesh), mesh), 1e-8);
}

TEST(Gauss, SphereCalibration)
{
    const auto mesh = sftest::sphere_patch(61, 61, 0.3);
    const auto K = gauss_curvature_probe(mesh);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < mesh.rows; ++i)
        for (std::size_t j = 1; j + 1 < mesh.cols; ++j) worst = std::max(worst, std::abs(K[i * mesh.cols + j] - 1.0));
    EXPECT_LE(worst, 1e-2);
    EXPECT_EQ(K[0], 0.0);
}

TEST(Obj, TwoByTwo)
{
    StripMesh m;
    m.rows = m.cols = 2;
    m.vertices = {Vec3(0, 0, 0), Vec3(0, 1, 0), Vec3(1, 0, 0), Vec3(1, 1, 0)};
    const auto text = export_obj(m);
    EXPECT_EQ(sftest::parse_obj_vertices(text).size(), 4u);
    EXPECT_EQ(sftest::count_obj_faces(text), 2u);
}

TEST(Obj, OrientationFollowsMinusN)
{
    const auto s = build_helix(1.0, 0.5, 2.0, 1e-2);
    const auto mesh = build_mesh(s.frame, 0.2, 1);
    for (std::size_t i = 0; i + 1 < mesh.rows; i += 20)
        EXPECT_GT(quad_normal(mesh, i, 0).dot(mesh.normal[i]), 0.99);
}

TEST(Obj, RoundTripIsExact)
{
    const auto s = build_helix(1.0, 1.0, 4.0, 1e-2);
    const auto mesh = build_mesh(s.frame, 0.4, 2);
    const auto text = export_obj(mesh);
    const auto back = sftest::parse_obj_vertices(text);
    ASSERT_EQ(back.size(), mesh.vertices.size());
    for (std::size_t k = 0; k < back.size(); ++k) ASSERT_EQ(back[k], mesh.vertices[k]);
    EXPECT_EQ(sftest::count_obj_faces(text), 2 * (mesh.rows - 1) * (mesh.cols - 1));
}

TEST(Obj, Deterministic)
{
    const auto a = export_obj(build_mesh(sftest::sample_momentum(1e-3, 4.0).frame, 0.05, 3));
    const auto b = export_obj(build_mesh(sftest::sample_momentum(1e-3, 4.0).frame, 0.05, 3));
    EXPECT_EQ(a, b);
}

TEST(Obj, DefectCsvShape)
{
    const auto s = build_helix(1.0, 0.5, 1.0, 0.1);
    const auto mesh = build_mesh(s.frame, 0.2, 1);
    const auto csv = export_defect_csv(mesh, 0.1);
    EXPECT_EQ(csv.rfind("s,u,defect\n", 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 1 + mesh.vertices.size());
}
