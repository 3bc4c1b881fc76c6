#include "stripforge/curves.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Geometry>

#include "stripforge/error.hpp"

namespace stripforge {

namespace {

// Fornberg's algorithm: weights of the derivative of order m at x0 for the
// nodes x[0..n-1]. Computed in long double, rounded once.
std::vector<double> fornberg(const std::vector<long double>& x, long double x0, int m)
{
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<long double>> c(n, std::vector<long double>(m + 1, 0.0L));
    long double c1 = 1.0L;
    long double c4 = x[0] - x0;
    c[0][0] = 1.0L;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        long double c2 = 1.0L;
        const long double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const long double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = static_cast<double>(c[i][m]);
    return w;
}

struct Stencil {
    std::size_t start;
    std::vector<double> weights; // unscaled (h = 1)
};

Stencil stencil_for(std::size_t i, std::size_t n, int order)
{
    std::size_t width = 5;
    std::size_t start = i >= 2 ? i - 2 : 0;
    if (start + width > n) start = n - width;
    const bool centered = (start + 2 == i);
    if (order == 2 && !centered) {
        width = 6;
        start = i >= 2 ? i - 2 : 0;
        if (start + width > n) start = n - width;
    }
    std::vector<long double> x(width);
    for (std::size_t k = 0; k < width; ++k)
        x[k] = static_cast<long double>(start + k) - static_cast<long double>(i);
    return {start, fornberg(x, 0.0L, order)};
}

// 4-point Lagrange window containing t (in units of h) clamped to the grid.
std::size_t window_start(double t, std::size_t n)
{
    if (n < 4) return 0;
    const double base = std::floor(t) - 1.0;
    if (base <= 0.0) return 0;
    const auto b = static_cast<std::size_t>(base);
    return std::min(b, n - 4);
}

std::array<double, 4> lagrange4(double x)
{
    // nodes at 0,1,2,3
    return {-(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0, x * (x - 2.0) * (x - 3.0) / 2.0,
            -x * (x - 1.0) * (x - 3.0) / 2.0, x * (x - 1.0) * (x - 2.0) / 6.0};
}

double frame_defect(const Vec3& T, const Vec3& N, const Vec3& B)
{
    double d = std::max({std::abs(T.norm() - 1.0), std::abs(N.norm() - 1.0), std::abs(B.norm() - 1.0)});
    d = std::max({d, std::abs(T.dot(N)), std::abs(T.dot(B)), std::abs(N.dot(B))});
    return d;
}

} // namespace

Jet CurvatureProfile::kappa_jet(std::size_t i) const
{
    if (!has_jets()) throw StripError(ErrorCode::MissingJets, "curvature profile carries no derivative jets");
    return Jet{kappa[i], dkappa[0][i], dkappa[1][i], dkappa[2][i]};
}

Jet CurvatureProfile::lambda_jet(std::size_t i) const
{
    if (!has_jets()) throw StripError(ErrorCode::MissingJets, "curvature profile carries no derivative jets");
    return Jet{lambda[i], dlambda[0][i], dlambda[1][i], dlambda[2][i]};
}

void CurvatureProfile::allocate_jets(JetSource source)
{
    for (auto& v : dkappa) v.assign(size(), 0.0);
    for (auto& v : dlambda) v.assign(size(), 0.0);
    jet_source = source;
}

void CurvatureProfile::set_jets(std::size_t i, const Jet& kappa_j, const Jet& lambda_j)
{
    kappa[i] = kappa_j.value();
    lambda[i] = lambda_j.value();
    for (int k = 0; k < 3; ++k) {
        dkappa[k][i] = kappa_j[k + 1];
        dlambda[k][i] = lambda_j[k + 1];
    }
}

void CurvatureProfile::validate(std::size_t min_nodes) const
{
    if (!(h > 0.0) || !std::isfinite(h))
        throw StripError(ErrorCode::InvalidArgument, "grid spacing must be positive");
    if (lambda.size() != kappa.size())
        throw StripError(ErrorCode::InvalidArgument, "kappa and lambda sizes differ");
    if (size() < min_nodes)
        throw StripError(ErrorCode::GridTooSmall,
                         "need at least " + std::to_string(min_nodes) + " nodes, got " + std::to_string(size()));
    for (std::size_t i = 0; i < size(); ++i) {
        if (!(kappa[i] > 0.0))
            throw StripError(ErrorCode::NonPositiveCurvature, "kappa[" + std::to_string(i) + "] = " +
                                                                  std::to_string(kappa[i]));
    }
    if (has_jets()) {
        for (int k = 0; k < 3; ++k)
            if (dkappa[k].size() != size() || dlambda[k].size() != size())
                throw StripError(ErrorCode::InvalidArgument, "jet arrays do not match node count");
    }
}

double Frame::orthonormality_defect() const
{
    return frame_defect(T, N, B);
}

double FramedCurve::max_orthonormality_defect() const
{
    double d = 0.0;
    for (std::size_t i = 0; i < size(); ++i) d = std::max(d, frame_defect(T[i], N[i], B[i]));
    return d;
}

void orthonormalize(Vec3& T, Vec3& N, Vec3& B)
{
    T.normalize();
    N -= T.dot(N) * T;
    N.normalize();
    B -= T.dot(B) * T;
    B -= N.dot(B) * N;
    B.normalize();
}

FramedCurve integrate_frame(const CurvatureProfile& profile, const Frame& initial)
{
    profile.validate();
    if (initial.orthonormality_defect() > kFrameTolerance || initial.T.cross(initial.N).dot(initial.B) <= 0.0)
        throw StripError(ErrorCode::NonOrthonormalInitialFrame, "initial triad is not orthonormal and right-handed");

    const std::size_t n = profile.size();
    const double h = profile.h;
    FramedCurve out;
    out.h = h;
    out.profile = profile;
    out.gamma.resize(n);
    out.T.resize(n);
    out.N.resize(n);
    out.B.resize(n);
    out.speed.assign(n, 1.0);

    struct State {
        Vec3 g, T, N, B;
    };
    auto rhs = [](const State& y, double k, double l) {
        return State{y.T, k * y.N, -k * y.T + k * l * y.B, -k * l * y.N};
    };
    auto axpy = [](const State& y, double a, const State& d) {
        return State{y.g + a * d.g, y.T + a * d.T, y.N + a * d.N, y.B + a * d.B};
    };

    std::span<const double> kap(profile.kappa);
    std::span<const double> lam(profile.lambda);
    State y{initial.origin, initial.T, initial.N, initial.B};
    out.gamma[0] = y.g;
    out.T[0] = y.T;
    out.N[0] = y.N;
    out.B[0] = y.B;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double tm = (static_cast<double>(i) + 0.5) * h;
        const double km = interpolate_uniform(kap, h, tm);
        const double lm = interpolate_uniform(lam, h, tm);
        const State k1 = rhs(y, profile.kappa[i], profile.lambda[i]);
        const State k2 = rhs(axpy(y, 0.5 * h, k1), km, lm);
        const State k3 = rhs(axpy(y, 0.5 * h, k2), km, lm);
        const State k4 = rhs(axpy(y, h, k3), profile.kappa[i + 1], profile.lambda[i + 1]);
        y.g += h / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
        y.T += h / 6.0 * (k1.T + 2.0 * k2.T + 2.0 * k3.T + k4.T);
        y.N += h / 6.0 * (k1.N + 2.0 * k2.N + 2.0 * k3.N + k4.N);
        y.B += h / 6.0 * (k1.B + 2.0 * k2.B + 2.0 * k3.B + k4.B);
        orthonormalize(y.T, y.N, y.B);
        out.gamma[i + 1] = y.g;
        out.T[i + 1] = y.T;
        out.N[i + 1] = y.N;
        out.B[i + 1] = y.B;
    }
    return out;
}

std::vector<double> finite_difference(std::span<const double> values, double h, int derivative_order)
{
    const std::size_t n = values.size();
    if (n < 7) throw StripError(ErrorCode::GridTooSmall, "finite differences need at least 7 nodes");
    if (derivative_order < 1 || derivative_order > 3)
        throw StripError(ErrorCode::InvalidArgument, "derivative order must be 1, 2 or 3");
    const double scale = std::pow(h, -derivative_order);
    std::vector<double> out(n);
    // Stencils depend only on the offset pattern, so cache the boundary ones.
    const Stencil interior = stencil_for(3, 7, derivative_order);
    for (std::size_t i = 0; i < n; ++i) {
        const bool inside = i >= 2 && i + 2 < n;
        const Stencil st = inside ? Stencil{i - 2, interior.weights} : stencil_for(i, n, derivative_order);
        // Weights sum to zero; differencing against the node value keeps constants exact.
        double acc = 0.0;
        for (std::size_t k = 0; k < st.weights.size(); ++k) acc += st.weights[k] * (values[st.start + k] - values[i]);
        out[i] = acc * scale;
    }
    return out;
}

CurvatureProfile differentiate_profile(const CurvatureProfile& profile)
{
    if (profile.size() < 7) throw StripError(ErrorCode::GridTooSmall, "differentiate_profile needs at least 7 nodes");
    CurvatureProfile out = profile;
    out.allocate_jets(JetSource::finite_difference);
    for (int k = 0; k < 3; ++k) {
        out.dkappa[k] = finite_difference(profile.kappa, profile.h, k + 1);
        out.dlambda[k] = finite_difference(profile.lambda, profile.h, k + 1);
    }
    return out;
}

QuadratureResult quadrature(std::span<const double> values, double h)
{
    const std::size_t n = values.size();
    if (n < 2) throw StripError(ErrorCode::GridTooSmall, "quadrature needs at least 2 samples");
    QuadratureResult r;
    r.h = h;
    if (n == 2) {
        r.rule = QuadratureRule::trapezoid;
        r.value = 0.5 * h * (values[0] + values[1]);
        return r;
    }
    const std::size_t m = (n % 2 == 1) ? n : n - 1;
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i) (i % 2 == 1 ? odd : even) += values[i];
    r.value = h / 3.0 * (values[0] + 4.0 * odd + 2.0 * even + values[m - 1]);
    r.rule = QuadratureRule::simpson;
    if (m != n) {
        r.value += 0.5 * h * (values[n - 2] + values[n - 1]);
        r.rule = QuadratureRule::simpson_trapezoid;
    }
    return r;
}

std::vector<double> cumulative_integral(std::span<const double> values, double h)
{
    const std::size_t n = values.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n < 4) {
        for (std::size_t i = 0; i + 1 < n; ++i) out[i + 1] = out[i] + 0.5 * h * (values[i] + values[i + 1]);
        return out;
    }
    const double c = h / 24.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double piece;
        if (i == 0)
            piece = c * (9.0 * values[0] + 19.0 * values[1] - 5.0 * values[2] + values[3]);
        else if (i + 2 == n)
            piece = c * (values[n - 4] - 5.0 * values[n - 3] + 19.0 * values[n - 2] + 9.0 * values[n - 1]);
        else
            piece = c * (-values[i - 1] + 13.0 * values[i] + 13.0 * values[i + 1] - values[i + 2]);
        out[i + 1] = out[i] + piece;
    }
    return out;
}

double interpolate_uniform(std::span<const double> values, double h, double t)
{
    const std::size_t n = values.size();
    const double x = t / h;
    if (n < 4) {
        const auto i = static_cast<std::size_t>(std::clamp(std::floor(x), 0.0, static_cast<double>(n - 2)));
        const double a = x - static_cast<double>(i);
        return (1.0 - a) * values[i] + a * values[i + 1];
    }
    const std::size_t s = window_start(x, n);
    const auto w = lagrange4(x - static_cast<double>(s));
    return w[0] * values[s] + w[1] * values[s + 1] + w[2] * values[s + 2] + w[3] * values[s + 3];
}

Vec3 interpolate_uniform(std::span<const Vec3> values, double h, double t)
{
    const std::size_t n = values.size();
    const double x = t / h;
    if (n < 4) {
        const auto i = static_cast<std::size_t>(std::clamp(std::floor(x), 0.0, static_cast<double>(n - 2)));
        const double a = x - static_cast<double>(i);
        return (1.0 - a) * values[i] + a * values[i + 1];
    }
    const std::size_t s = window_start(x, n);
    const auto w = lagrange4(x - static_cast<double>(s));
    return w[0] * values[s] + w[1] * values[s + 1] + w[2] * values[s + 2] + w[3] * values[s + 3];
}

ArclengthMap::ArclengthMap(double h_t, std::span<const double> speed) : h_t_(h_t)
{
    if (speed.size() < 2) throw StripError(ErrorCode::GridTooSmall, "arclength map needs at least 2 samples");
    for (std::size_t i = 0; i < speed.size(); ++i)
        if (!(speed[i] > 0.0))
            throw StripError(ErrorCode::NonPositiveSpeed, "speed[" + std::to_string(i) + "] = " + std::to_string(speed[i]));
    s_ = cumulative_integral(speed, h_t);
}

double ArclengthMap::s_of(double t) const
{
    return interpolate_uniform(std::span<const double>(s_), h_t_, t);
}

double ArclengthMap::t_of(double s) const
{
    if (s <= 0.0) return 0.0;
    const double t_end = h_t_ * static_cast<double>(s_.size() - 1);
    if (s >= s_.back()) return t_end;
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t j = static_cast<std::size_t>(it - s_.begin()) - 1;
    double lo = h_t_ * static_cast<double>(j);
    double hi = lo + h_t_;
    // Secant start, then safeguarded Newton on the cubic interpolant.
    double t = lo + h_t_ * (s - s_[j]) / (s_[j + 1] - s_[j]);
    for (int iter = 0; iter < 60; ++iter) {
        const double f = s_of(t) - s;
        if (f > 0.0) hi = t; else lo = t;
        const double d = 1e-3 * h_t_;
        const double fp = (s_of(t + d) - s_of(t - d)) / (2.0 * d);
        double next = fp > 0.0 ? t - f / fp : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(t))) return next;
        t = next;
    }
    return t;
}

std::vector<double> ArclengthMap::uniform_grid(double h_s) const
{
    if (!(h_s > 0.0)) throw StripError(ErrorCode::InvalidArgument, "grid spacing must be positive");
    const auto count = static_cast<std::size_t>(std::floor(total() / h_s + 1e-9)) + 1;
    std::vector<double> g(count);
    for (std::size_t k = 0; k < count; ++k) g[k] = h_s * static_cast<double>(k);
    return g;
}

FramedCurve resample_by_arclength(const FramedCurve& curve, double h_s)
{
    const ArclengthMap map(curve.h, curve.speed);
    const auto grid = map.uniform_grid(h_s);
    FramedCurve out;
    out.h = h_s;
    out.profile.h = h_s;
    const std::size_t m = grid.size();
    out.gamma.resize(m);
    out.T.resize(m);
    out.N.resize(m);
    out.B.resize(m);
    out.speed.assign(m, 1.0);
    out.profile.kappa.resize(m);
    out.profile.lambda.resize(m);
    const bool has_profile = curve.profile.size() == curve.size();
    for (std::size_t k = 0; k < m; ++k) {
        const double t = map.t_of(grid[k]);
        out.gamma[k] = interpolate_uniform(std::span<const Vec3>(curve.gamma), curve.h, t);
        Vec3 T = interpolate_uniform(std::span<const Vec3>(curve.T), curve.h, t);
        Vec3 N = interpolate_uniform(std::span<const Vec3>(curve.N), curve.h, t);
        Vec3 B = interpolate_uniform(std::span<const Vec3>(curve.B), curve.h, t);
        orthonormalize(T, N, B);
        out.T[k] = T;
        out.N[k] = N;
        out.B[k] = B;
        if (has_profile) {
            out.profile.kappa[k] = interpolate_uniform(std::span<const double>(curve.profile.kappa), curve.h, t);
            out.profile.lambda[k] = interpolate_uniform(std::span<const double>(curve.profile.lambda), curve.h, t);
        }
    }
    if (!has_profile) {
        out.profile.kappa.clear();
        out.profile.lambda.clear();
    }
    return out;
}

SphericalCurve integrate_darboux(std::span<const double> geodesic_curvature, double h, const Frame& initial)
{
    const std::size_t n = geodesic_curvature.size();
    if (n < 2) throw StripError(ErrorCode::GridTooSmall, "need at least 2 samples");
    if (!(h > 0.0)) throw StripError(ErrorCode::InvalidArgument, "grid spacing must be positive");
    if (initial.orthonormality_defect() > kFrameTolerance || initial.T.cross(initial.N).dot(initial.B) <= 0.0)
        throw StripError(ErrorCode::NonOrthonormalInitialFrame, "initial triad is not orthonormal and right-handed");

    SphericalCurve out;
    out.h = h;
    out.point.resize(n);
    out.tangent.resize(n);
    out.conormal.resize(n);
    out.geodesic_curvature.assign(geodesic_curvature.begin(), geodesic_curvature.end());
    out.speed.assign(n, 1.0);

    struct State {
        Vec3 x, e, c;
    };
    auto rhs = [](const State& y, double l) { return State{y.e, -y.x + l * y.c, -l * y.e}; };
    auto axpy = [](const State& y, double a, const State& d) {
        return State{y.x + a * d.x, y.e + a * d.e, y.c + a * d.c};
    };
    State y{initial.T, initial.N, initial.B};
    out.point[0] = y.x;
    out.tangent[0] = y.e;
    out.conormal[0] = y.c;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double lm = interpolate_uniform(geodesic_curvature, h, (static_cast<double>(i) + 0.5) * h);
        const State k1 = rhs(y, geodesic_curvature[i]);
        const State k2 = rhs(axpy(y, 0.5 * h, k1), lm);
        const State k3 = rhs(axpy(y, 0.5 * h, k2), lm);
        const State k4 = rhs(axpy(y, h, k3), geodesic_curvature[i + 1]);
        y.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        y.e += h / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e);
        y.c += h / 6.0 * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c);
        orthonormalize(y.x, y.e, y.c);
        out.point[i + 1] = y.x;
        out.tangent[i + 1] = y.e;
        out.conormal[i + 1] = y.c;
    }
    return out;
}

SphericalCurve tangent_image(const FramedCurve& curve)
{
    SphericalCurve out;
    out.h = curve.h;
    out.point = curve.T;
    out.tangent = curve.N;
    out.conormal = curve.B;
    out.geodesic_curvature = curve.profile.lambda;
    out.speed.resize(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) out.speed[i] = curve.profile.kappa[i] * curve.speed[i];
    return out;
}

CurvatureProfile random_profile(std::uint64_t seed, double length, double h)
{
    if (!(h > 0.0) || !(length > 0.0)) throw StripError(ErrorCode::InvalidArgument, "length and h must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    struct Mode {
        double amp, omega, phase;
    };
    const double k0 = 0.8 + 0.7 * unit(rng);
    const double c0 = unit(rng) - 0.5;
    std::array<Mode, 3> km{}, lm{};
    for (auto& m : km) m = {k0 / 6.0 * (2.0 * unit(rng) - 1.0), 0.5 + 2.5 * unit(rng), 6.283185307179586 * unit(rng)};
    for (auto& m : lm) m = {unit(rng) - 0.5, 0.5 + 2.5 * unit(rng), 6.283185307179586 * unit(rng)};

    auto eval = [](double base, const std::array<Mode, 3>& modes, double s) {
        std::array<double, 4> d{base, 0.0, 0.0, 0.0};
        for (const auto& m : modes) {
            const double a = m.omega * s + m.phase;
            const double w = m.omega;
            d[0] += m.amp * std::sin(a);
            d[1] += m.amp * w * std::cos(a);
            d[2] -= m.amp * w * w * std::sin(a);
            d[3] -= m.amp * w * w * w * std::cos(a);
        }
        return Jet::from_array(d, 3);
    };
    CurvatureProfile p;
    p.h = h;
    const auto n = static_cast<std::size_t>(std::floor(length / h + 1e-9)) + 1;
    p.kappa.resize(n);
    p.lambda.resize(n);
    p.allocate_jets(JetSource::analytic);
    for (std::size_t i = 0; i < n; ++i) p.set_jets(i, eval(k0, km, p.s(i)), eval(c0, lm, p.s(i)));
    return p;
}

DiscreteCurvature extract_curvature(std::span<const Vec3> points, double h)
{
    const std::size_t n = points.size();
    if (n < 7) throw StripError(ErrorCode::GridTooSmall, "curvature extraction needs at least 7 nodes");
    std::array<std::vector<double>, 3> coord;
    for (int c = 0; c < 3; ++c) {
        coord[c].resize(n);
        for (std::size_t i = 0; i < n; ++i) coord[c][i] = points[i][c];
    }
    std::array<std::array<std::vector<double>, 3>, 3> d; // d[order-1][component]
    for (int o = 0; o < 3; ++o)
        for (int c = 0; c < 3; ++c) d[o][c] = finite_difference(coord[c], h, o + 1);
    DiscreteCurvature out;
    out.kappa.resize(n);
    out.torsion.resize(n);
    out.speed.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 g1(d[0][0][i], d[0][1][i], d[0][2][i]);
        const Vec3 g2(d[1][0][i], d[1][1][i], d[1][2][i]);
        const Vec3 g3(d[2][0][i], d[2][1][i], d[2][2][i]);
        const Vec3 cr = g1.cross(g2);
        const double v = g1.norm();
        out.speed[i] = v;
        out.kappa[i] = cr.norm() / (v * v * v);
        out.torsion[i] = cr.dot(g3) / cr.squaredNorm();
    }
    return out;
}

} // namespace stripforge
