#include "stripforge/pfunctional.hpp"

#include <cmath>
#include <string>

#include "stripforge/error.hpp"

namespace stripforge {

namespace {

void check_sizes(const SphericalCurve& t, std::size_t n)
{
    if (t.size() < 2) throw StripError(ErrorCode::GridTooSmall, "tangent image needs at least 2 nodes");
    if (t.geodesic_curvature.size() != t.size() || t.speed.size() != t.size() || n != t.size())
        throw StripError(ErrorCode::InvalidArgument, "tangent image arrays have inconsistent sizes");
}

} // namespace

PFunctionalReport p_functional(const SphericalCurve& tangent, const Vec3& b0, double mu)
{
    check_sizes(tangent, tangent.size());
    PFunctionalReport r;
    r.b0 = b0;
    r.mu = mu;
    const std::size_t n = tangent.size();
    r.kappa_opt.resize(n);
    r.integrand.resize(n);
    std::vector<double> weighted(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rad = tangent.point[i].dot(b0) - mu;
        if (!(rad > 0.0))
            throw StripError(ErrorCode::DomainViolation,
                             "<T,b0> - mu = " + std::to_string(rad) + " at node " + std::to_string(i));
        const double W = 1.0 + tangent.geodesic_curvature[i] * tangent.geodesic_curvature[i];
        const double root = std::sqrt(rad);
        r.kappa_opt[i] = root / W;
        r.integrand[i] = 2.0 * root * W;
        weighted[i] = r.integrand[i] * tangent.speed[i];
    }
    r.P = quadrature(weighted, tangent.h).value;
    return r;
}

double p_lagrangian(const SphericalCurve& tangent, std::span<const double> kappa, const Vec3& b0, double mu)
{
    check_sizes(tangent, kappa.size());
    std::vector<double> v(kappa.size());
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        if (!(kappa[i] > 0.0)) throw StripError(ErrorCode::NonPositiveKappa, "kappa must be positive");
        const double W = 1.0 + tangent.geodesic_curvature[i] * tangent.geodesic_curvature[i];
        v[i] = (kappa[i] * W * W + (tangent.point[i].dot(b0) - mu) / kappa[i]) * tangent.speed[i];
    }
    return quadrature(v, tangent.h).value;
}

FramedCurve reconstruct_from_tangent(const SphericalCurve& tangent, std::span<const double> kappa)
{
    check_sizes(tangent, kappa.size());
    const std::size_t n = kappa.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!(kappa[i] > 0.0))
            throw StripError(ErrorCode::NonPositiveKappa, "kappa[" + std::to_string(i) + "] = " + std::to_string(kappa[i]));
    FramedCurve c;
    c.h = tangent.h;
    c.T = tangent.point;
    c.N = tangent.tangent;
    c.B.resize(n);
    c.speed.resize(n);
    c.gamma.resize(n);
    std::array<std::vector<double>, 3> comp;
    for (auto& v : comp) v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.B[i] = tangent.point[i].cross(tangent.tangent[i]);
        c.speed[i] = tangent.speed[i] / kappa[i];
        for (int k = 0; k < 3; ++k) comp[k][i] = c.speed[i] * tangent.point[i][k];
    }
    std::array<std::vector<double>, 3> integ;
    for (int k = 0; k < 3; ++k) integ[k] = cumulative_integral(comp[k], tangent.h);
    for (std::size_t i = 0; i < n; ++i) c.gamma[i] = Vec3(integ[0][i], integ[1][i], integ[2][i]);
    c.profile.h = tangent.h;
    c.profile.kappa.assign(kappa.begin(), kappa.end());
    c.profile.lambda = tangent.geodesic_curvature;
    return c;
}

} // namespace stripforge
