#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "stripforge/curves.hpp"
#include "stripforge/error.hpp"
#include "support.hpp"

using namespace stripforge;
constexpr double kPi = std::numbers::pi;

namespace {

CurvatureProfile constant_profile(double kappa, double lambda, double length, std::size_t intervals)
{
    CurvatureProfile p;
    p.h = length / static_cast<double>(intervals);
    p.kappa.assign(intervals + 1, kappa);
    p.lambda.assign(intervals + 1, lambda);
    return p;
}

double frame_error(const FramedCurve& coarse, const FramedCurve& fine, std::size_t stride)
{
    double e = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const std::size_t j = i * stride;
        e = std::max({e, (coarse.T[i] - fine.T[j]).norm(), (coarse.N[i] - fine.N[j]).norm(),
                      (coarse.B[i] - fine.B[j]).norm()});
    }
    return e;
}

} // namespace

TEST(IntegrateFrame, UnitCircleCloses)
{
    const auto p = constant_profile(1.0, 0.0, 2.0 * kPi, 6284);
    const auto c = integrate_frame(p);
    const double h = p.h;
    EXPECT_LE((c.gamma.back() - c.gamma.front()).norm(), 10.0 * std::pow(h, 4) * 2.0 * kPi);
    for (std::size_t i = 0; i < c.size(); i += 97) {
        EXPECT_NEAR(c.gamma[i].z(), 0.0, 1e-14);
        EXPECT_NEAR((c.gamma[i] - Vec3(0.0, 1.0, 0.0)).norm(), 1.0, 1e-12);
    }
}

TEST(IntegrateFrame, HelixDarbouxVectorIsConstant)
{
    const auto p = constant_profile(1.0, 1.0, 5.0, 5000);
    const auto c = integrate_frame(p);
    const Vec3 D0 = c.T[0] + c.B[0];
    for (std::size_t i = 0; i < c.size(); ++i)
        EXPECT_LE((c.T[i] + c.B[i] - D0).norm(), 10.0 * std::pow(p.h, 4) * p.s(i) + 1e-14);
}

TEST(IntegrateFrame, OrthonormalityPerStep)
{
    for (double h : {1e-2, 1e-3}) {
        const auto p = random_profile(3, 4.0, h);
        const auto c = integrate_frame(p);
        EXPECT_LE(c.max_orthonormality_defect(), kFrameTolerance);
    }
}

TEST(IntegrateFrame, FrameErrorConvergesUnderRefinement)
{
    // Renormalization keeps orthonormality at rounding level, so convergence is
    // measured on the frame itself against a h/4 reference.
    const double L = 4.0;
    const auto ref = integrate_frame(random_profile(5, L, 2.5e-3 / 4.0));
    const auto c1 = integrate_frame(random_profile(5, L, 1e-2));
    const auto c2 = integrate_frame(random_profile(5, L, 5e-3));
    const double e1 = frame_error(c1, ref, 16);
    const double e2 = frame_error(c2, ref, 8);
    EXPECT_GE(e1 / e2, 8.0) << e1 << " " << e2;
}

TEST(IntegrateFrame, RejectsBadInput)
{
    auto p = constant_profile(1.0, 0.0, 1.0, 10);
    Frame bad;
    bad.N = Vec3(1.0, 1.0, 0.0);
    try {
        integrate_frame(p, bad);
        FAIL();
    } catch (const StripError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonOrthonormalInitialFrame);
    }
    p.kappa[4] = 0.0;
    try {
        integrate_frame(p);
        FAIL();
    } catch (const StripError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPositiveCurvature);
    }
    auto tiny = constant_profile(1.0, 0.0, 1.0, 2);
    try {
        integrate_frame(tiny);
        FAIL();
    } catch (const StripError& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridTooSmall);
    }
}

TEST(IntegrateFrame, CurvatureReextractionIsSecondOrder)
{
    double prev = 0.0;
    for (double h : {4e-2, 2e-2, 1e-2}) {
        const auto p = random_profile(9, 3.0, h);
        const auto c = integrate_frame(p);
        const auto d = extract_curvature(c.gamma, h);
        double err = 0.0;
        for (std::size_t i = 2; i + 2 < p.size(); ++i) err = std::max(err, std::abs(d.kappa[i] - p.kappa[i]));
        EXPECT_LE(err, 1e-4);
        if (prev > 0.0) {
            EXPECT_GE(prev / err, 3.5) << h;
        }
        prev = err;
    }
}

TEST(FiniteDifference, SineDerivative)
{
    auto p = constant_profile(1.0, 0.0, 2.0 * kPi, 256);
    for (std::size_t i = 0; i < p.size(); ++i) p.lambda[i] = std::sin(p.s(i));
    const auto d = differentiate_profile(p);
    for (std::size_t i = 2; i + 2 < p.size(); ++i) EXPECT_NEAR(d.dlambda[0][i], std::cos(p.s(i)), 1e-6);
    EXPECT_EQ(d.jet_source, JetSource::finite_difference);
}

TEST(FiniteDifference, ConstantProfileHasZeroJets)
{
    const auto d = differentiate_profile(constant_profile(0.7, 1.3, 1.0, 50));
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < d.size(); ++i) {
            EXPECT_EQ(d.dkappa[k][i], 0.0);
            EXPECT_EQ(d.dlambda[k][i], 0.0);
        }
}

TEST(FiniteDifference, QuadraticIsExact)
{
    auto p = constant_profile(1.0, 0.0, 2.0, 20);
    for (std::size_t i = 0; i < p.size(); ++i) p.lambda[i] = p.s(i) * p.s(i);
    const auto d = differentiate_profile(p);
    for (std::size_t i = 2; i + 2 < p.size(); ++i) {
        EXPECT_NEAR(d.dlambda[1][i], 2.0, 1e-10);
        EXPECT_NEAR(d.dlambda[2][i], 0.0, 1e-7);
    }
}

TEST(FiniteDifference, NeedsSevenNodes)
{
    EXPECT_THROW(differentiate_profile(constant_profile(1.0, 0.0, 1.0, 4)), StripError);
}

TEST(Quadrature, ExactCases)
{
    std::vector<double> ones(101, 1.0);
    EXPECT_DOUBLE_EQ(quadrature(ones, 0.01).value, 1.0);
    std::vector<double> two{3.0, 5.0};
    const auto r = quadrature(two, 0.5);
    EXPECT_DOUBLE_EQ(r.value, 2.0);
    EXPECT_EQ(r.rule, QuadratureRule::trapezoid);
}

TEST(Quadrature, SineIntegral)
{
    const int n = 128;
    const double h = kPi / n;
    std::vector<double> f(n + 1);
    for (int i = 0; i <= n; ++i) f[i] = std::sin(i * h);
    EXPECT_NEAR(quadrature(f, h).value, 2.0, 1e-8);
    f.pop_back();
    const auto r = quadrature(f, h);
    EXPECT_EQ(r.rule, QuadratureRule::simpson_trapezoid);
    EXPECT_NEAR(r.value, 1.0 - std::cos((n - 1) * h), 1e-5);
}

TEST(Quadrature, DerivativeTelescopes)
{
    // f = sin(2s)·exp(s/3); f' integrates to f(L) − f(0).
    const double h = 1e-2, L = 3.0;
    const auto n = static_cast<std::size_t>(L / h) + 1;
    std::vector<double> df(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = h * static_cast<double>(i);
        df[i] = std::exp(s / 3.0) * (2.0 * std::cos(2.0 * s) + std::sin(2.0 * s) / 3.0);
    }
    const double exact = std::sin(2.0 * L) * std::exp(L / 3.0);
    // |f⁽⁵⁾| ≤ (2 + 1/3)^5 e^{L/3}
    const double bound = 10.0 * std::pow(h, 4) * L * std::pow(7.0 / 3.0, 5) * std::exp(1.0);
    EXPECT_NEAR(quadrature(df, h).value, exact, bound);
    EXPECT_NEAR(cumulative_integral(df, h).back(), exact, bound);
}

TEST(ArclengthMap, ConstantSpeed)
{
    std::vector<double> v(101, 2.0);
    const ArclengthMap m(0.01, v);
    EXPECT_NEAR(m.total(), 2.0, 1e-14);
    EXPECT_NEAR(m.s_of(0.37), 0.74, 1e-14);
    EXPECT_NEAR(m.t_of(1.5), 0.75, 1e-12);
    const auto grid = m.uniform_grid(0.02);
    EXPECT_EQ(grid.size(), 101u);
    EXPECT_NEAR(grid.back(), 2.0, 1e-12);
}

TEST(ArclengthMap, MatchesClosedForm)
{
    const double h = 1e-3;
    const int n = 3000;
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = 1.0 + std::pow(std::sin(i * h), 2);
    const ArclengthMap m(h, v);
    for (double t : {0.3, 1.1, 2.5, 3.0}) EXPECT_NEAR(m.s_of(t), 1.5 * t - std::sin(2.0 * t) / 4.0, 1e-8);
}

TEST(ArclengthMap, RejectsNonPositiveSpeed)
{
    std::vector<double> v{1.0, 0.5, -0.1, 1.0};
    try {
        ArclengthMap m(0.1, v);
        FAIL();
    } catch (const StripError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPositiveSpeed);
    }
}

TEST(Resample, DoubleSpeedLine)
{
    // Circle of radius 1 traversed at speed 2 in t ∈ [0, 1].
    FramedCurve c;
    c.h = 1e-3;
    for (int i = 0; i <= 1000; ++i) {
        const double t = i * c.h, a = 2.0 * t;
        c.gamma.emplace_back(std::cos(a), std::sin(a), 0.0);
        c.T.emplace_back(-std::sin(a), std::cos(a), 0.0);
        c.N.emplace_back(-std::cos(a), -std::sin(a), 0.0);
        c.B.emplace_back(0.0, 0.0, 1.0);
        c.speed.push_back(2.0);
        c.profile.kappa.push_back(1.0);
        c.profile.lambda.push_back(0.0);
    }
    c.profile.h = c.h;
    const auto r = resample_by_arclength(c, 1e-3);
    EXPECT_NEAR(r.profile.length(), 2.0, 1e-9);
    EXPECT_EQ(r.size(), 2001u);
    for (std::size_t i = 0; i < r.size(); i += 50) {
        const double s = r.h * static_cast<double>(i);
        EXPECT_NEAR((r.gamma[i] - Vec3(std::cos(s), std::sin(s), 0.0)).norm(), 0.0, 1e-10);
    }
}

TEST(Resample, IdentityOnArclengthInput)
{
    const auto p = random_profile(4, 2.0, 1e-3);
    const auto c = integrate_frame(p);
    const auto r = resample_by_arclength(c, p.h);
    ASSERT_EQ(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_NEAR(r.profile.kappa[i], p.kappa[i], 1e-10);
        EXPECT_NEAR(r.profile.lambda[i], p.lambda[i], 1e-10);
        EXPECT_NEAR((r.gamma[i] - c.gamma[i]).norm(), 0.0, 1e-10);
    }
}

TEST(SphericalCurves, TangentImageHasSpeedKappa)
{
    const auto p = random_profile(8, 3.0);
    const auto c = integrate_frame(p);
    const auto t = tangent_image(c);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(t.point[i].norm(), 1.0, 1e-12);
        EXPECT_NEAR(t.speed[i], p.kappa[i], 1e-15);
        EXPECT_NEAR(t.point[i].dot(t.tangent[i]), 0.0, 1e-12);
        EXPECT_NEAR(t.geodesic_curvature[i], p.lambda[i], 1e-15);
    }
}

TEST(SphericalCurves, ConstantGeodesicCurvatureIsSmallCircle)
{
    // λ constant: a circle of spherical radius atan(1/λ) with period 2π/√(1+λ²).
    const double lam = 0.75, period = 2.0 * kPi / std::sqrt(1.0 + lam * lam);
    const std::size_t n = 4000;
    std::vector<double> g(n + 1, lam);
    const auto s = integrate_darboux(g, period / n);
    EXPECT_LE((s.point.back() - s.point.front()).norm(), 1e-10);
    EXPECT_LE((s.tangent.back() - s.tangent.front()).norm(), 1e-10);
}

TEST(RandomProfile, ReproducibleAndPositive)
{
    const auto a = random_profile(42, 5.0);
    const auto b = random_profile(42, 5.0);
    const auto c = random_profile(43, 5.0);
    EXPECT_EQ(a.kappa, b.kappa);
    EXPECT_EQ(a.lambda, b.lambda);
    EXPECT_NE(a.kappa, c.kappa);
    EXPECT_EQ(a.jet_source, JetSource::analytic);
    for (double k : a.kappa) EXPECT_GT(k, 0.0);
    // Analytic jets agree with differences of the samples.
    const auto d = differentiate_profile(a);
    for (std::size_t i = 3; i + 3 < a.size(); i += 10) {
        EXPECT_NEAR(d.dkappa[0][i], a.dkappa[0][i], 1e-8);
        EXPECT_NEAR(d.dlambda[1][i], a.dlambda[1][i], 1e-6);
    }
}
