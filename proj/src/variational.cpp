#include "stripforge/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stripforge/error.hpp"

namespace stripforge {

namespace formulas {

namespace {

// Fully expanded forms (product rule applied throughout). T is Jet or double.
template <class T>
T a3_expanded(const T& k0, const T& k1, const T& k2, const T& l0, const T& l1, const T& l2)
{
    const T l0_2 = l0 * l0;
    const T l0_3 = l0_2 * l0;
    const T l0_5 = l0_3 * l0_2;
    const T k0_2 = k0 * k0;
    return -k0_2 * l0_5 - 2.0 * k0_2 * l0_3 - k0_2 * l0 + k2 * (-2.0 * l0_3 / k0 - 2.0 * l0 / k0) -
           12.0 * l0 * l1 * l1 + l2 * (-6.0 * l0_2 - 2.0) - 6.0 * k1 * l0_2 * l1 / k0 - 2.0 * k1 * l1 / k0 +
           2.0 * k1 * k1 * l0_3 / k0_2 + 2.0 * k1 * k1 * l0 / k0_2;
}

template <class T>
T s2_expanded(const T& k0, const T& k1, const T& l0, const T& l1)
{
    const T l0_2 = l0 * l0;
    return 6.0 * l0_2 * l1 + 2.0 * l1 + 2.0 * k1 * l0_2 * l0 / k0 + 2.0 * k1 * l0 / k0;
}

double f1_expanded(double k0, double k1, double k2, double l0, double l1, double l2, double mu)
{
    const double l0_2 = l0 * l0, l0_3 = l0_2 * l0, l0_4 = l0_2 * l0_2, l0_6 = l0_4 * l0_2;
    const double k0_3 = k0 * k0 * k0;
    return k0_3 * l0_6 + 2.5 * k0_3 * l0_4 + 2.0 * k0_3 * l0_2 + 0.5 * k0_3 + 18.0 * k0 * l0_2 * l1 * l1 +
           2.0 * k0 * l1 * l1 + 0.5 * k0 * mu + 12.0 * k1 * l0_3 * l1 + 8.0 * k1 * l0 * l1 +
           k2 * (3.0 * l0_4 + 4.0 * l0_2 + 1.0) + l2 * (8.0 * k0 * l0_3 + 4.0 * k0 * l0) -
           2.0 * k1 * k1 * l0_4 / k0 - 2.0 * k1 * k1 * l0_2 / k0;
}

double f2_expanded(double k0, double k1, double k2, double k3, double l0, double l1, double l2, double l3)
{
    const double l0_2 = l0 * l0, l0_3 = l0_2 * l0, l0_4 = l0_2 * l0_2, l0_5 = l0_4 * l0;
    const double k0_2 = k0 * k0, k0_3 = k0_2 * k0;
    const double k1_2 = k1 * k1, k1_3 = k1_2 * k1;
    return -3.0 * k0_2 * l0_4 * l1 - 4.0 * k0_2 * l0_2 * l1 - k0_2 * l1 - k0 * k1 * l0_5 - 2.0 * k0 * k1 * l0_3 -
           k0 * k1 * l0 +
           k2 * (-12.0 * l0_2 * l1 / k0 - 4.0 * l1 / k0 + 6.0 * k1 * l0_3 / k0_2 + 6.0 * k1 * l0 / k0_2) +
           k3 * (-2.0 * l0_3 / k0 - 2.0 * l0 / k0) - 12.0 * l1 * l1 * l1 +
           l2 * (-36.0 * l0 * l1 - 6.0 * k1 * l0_2 / k0 - 2.0 * k1 / k0) + l3 * (-6.0 * l0_2 - 2.0) -
           12.0 * k1 * l0 * l1 * l1 / k0 + 12.0 * k1_2 * l0_2 * l1 / k0_2 + 4.0 * k1_2 * l1 / k0_2 -
           4.0 * k1_3 * l0_3 / k0_3 - 4.0 * k1_3 * l0 / k0_3;
}

// κ²(1+λ²)²λ + (κ'/κ (1+λ²) 2λ)' + ((1+λ²) 2λ)''  (= −a3)
Jet minus_a3_printed(const Jet& k, const Jet& l)
{
    const Jet W = 1.0 + l * l;
    const Jet inner = k.derivative() / k * W * 2.0 * l;
    const Jet twist = W * 2.0 * l;
    return k * k * W * W * l + inner.derivative() + twist.derivative().derivative();
}

} // namespace

Jet a1(const Jet& k, const Jet& l, double mu)
{
    const Jet W = 1.0 + l * l;
    return 0.5 * (k * k * W * W + mu);
}

Jet a2(const Jet& k, const Jet& l)
{
    const Jet W = 1.0 + l * l;
    return k.derivative() * W * W + 2.0 * k * W * l * l.derivative();
}

Jet a3(const Jet& k, const Jet& l, FormVariant form)
{
    if (form == FormVariant::expanded) {
        const Jet k1 = k.derivative(), l1 = l.derivative();
        return a3_expanded<Jet>(k, k1, k1.derivative(), l, l1, l1.derivative());
    }
    return -minus_a3_printed(k, l);
}

Jet s1(const Jet& k, const Jet& l)
{
    return 2.0 * k * l * (1.0 + l * l);
}

Jet s2(const Jet& k, const Jet& l, FormVariant form)
{
    if (form == FormVariant::expanded) return s2_expanded<Jet>(k, k.derivative(), l, l.derivative());
    return (2.0 * k * l * (1.0 + l * l)).derivative() / k;
}

Jet s3(const Jet& k, const Jet& l)
{
    return k * (1.0 + l * l) * (1.0 - l * l);
}

double f1(const Jet& k, const Jet& l, double mu, FormVariant form)
{
    if (form == FormVariant::expanded)
        return f1_expanded(k[0], k[1], k[2], l[0], l[1], l[2], mu);
    const Jet W = 1.0 + l * l;
    const Jet first = (k.derivative() * W * W + 2.0 * k * W * l * l.derivative()).derivative();
    const Jet second = k / 2.0 * (k * k * W * W + mu);
    const Jet third = l * k * minus_a3_printed(k, l);
    return first.value() + second.value() + third.value();
}

double f2(const Jet& k, const Jet& l, FormVariant form)
{
    if (form == FormVariant::expanded)
        return f2_expanded(k[0], k[1], k[2], k[3], l[0], l[1], l[2], l[3]);
    const Jet W = 1.0 + l * l;
    const Jet first = -minus_a3_printed(k, l).derivative();
    const Jet second = k * l * (k.derivative() * W * W + 2.0 * k * W * l * l.derivative());
    return first.value() + second.value();
}

} // namespace formulas

namespace {

double sup_interior(const std::vector<double>& v, std::size_t zone)
{
    double s = 0.0;
    if (v.size() <= 2 * zone) return s;
    for (std::size_t i = zone; i + zone < v.size(); ++i) s = std::max(s, std::abs(v[i]));
    return s;
}

void require_jets(const CurvatureProfile& p)
{
    if (!p.has_jets()) throw StripError(ErrorCode::MissingJets, "profile has no derivative jets");
}

void require_match(const CurvatureProfile& p, const FramedCurve& c)
{
    if (c.size() != p.size())
        throw StripError(ErrorCode::InvalidArgument, "profile and curve node counts differ");
}

Vec3 mean_of(const std::vector<Vec3>& v)
{
    Vec3 m = Vec3::Zero();
    for (const auto& x : v) m += x;
    return v.empty() ? m : Vec3(m / static_cast<double>(v.size()));
}

double drift_of(const std::vector<Vec3>& v, const Vec3& m)
{
    double d = 0.0;
    for (const auto& x : v) d = std::max(d, (x - m).norm());
    return d;
}

constexpr double binom(int n, int k)
{
    constexpr double t[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    return t[n][k];
}

// Derivatives E^(m), m = 0..3, of T, N, B at one node as vectors.
using FrameDerivs = std::array<std::array<Vec3, 4>, 3>;

FrameDerivs frame_derivatives(const Jet& k, const Jet& l, const Vec3& T, const Vec3& N, const Vec3& B)
{
    FrameDerivs out;
    const Jet kl = k * l;
    for (int j = 0; j < 3; ++j) {
        Jet c[3] = {Jet(j == 0 ? 1.0 : 0.0), Jet(j == 1 ? 1.0 : 0.0), Jet(j == 2 ? 1.0 : 0.0)};
        for (int m = 0; m <= 3; ++m) {
            out[j][m] = c[0].value() * T + c[1].value() * N + c[2].value() * B;
            if (m == 3) break;
            const Jet na = c[0].derivative() - k * c[1];
            const Jet nb = c[1].derivative() + k * c[0] - kl * c[2];
            const Jet nc = c[2].derivative() + kl * c[1];
            c[0] = na;
            c[1] = nb;
            c[2] = nc;
        }
    }
    return out;
}

// u_j = ⟨V, E_j⟩ with V^(r) supplied.
VariationField project_field(const FramedCurve& curve, const std::function<std::array<Vec3, 4>(std::size_t)>& V)
{
    const auto& p = curve.profile;
    require_jets(p);
    VariationField f = VariationField::zero(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const FrameDerivs E = frame_derivatives(p.kappa_jet(i), p.lambda_jet(i), curve.T[i], curve.N[i], curve.B[i]);
        const auto v = V(i);
        std::array<std::array<double, 4>, 3> u{};
        for (int j = 0; j < 3; ++j)
            for (int m = 0; m <= 3; ++m) {
                double acc = 0.0;
                for (int r = 0; r <= m; ++r) acc += binom(m, r) * v[r].dot(E[j][m - r]);
                u[j][m] = acc;
            }
        f.u1[i] = Jet::from_array(u[0], 3);
        f.u2[i] = Jet::from_array(u[1], 3);
        f.u3[i] = Jet::from_array(u[2], 3);
    }
    return f;
}

Jet sin_jet(double omega, double phase, double s)
{
    const double a = omega * s + phase;
    const double sa = std::sin(a), ca = std::cos(a);
    return Jet{sa, omega * ca, -omega * omega * sa, -omega * omega * omega * ca};
}

// b per node (the Noether boundary term).
double boundary_term(const Jet& k, const Jet& l, double mu, const Jet& u1, const Jet& u2, const Jet& u3)
{
    const Jet W = 1.0 + l * l;
    const Jet k1 = k.derivative();
    const Jet l1 = l.derivative();
    const Jet c_u2 = (6.0 * l * l1 * k + 2.0 * l * l * k1) * W - (k * (3.0 * l * l + 1.0) * W).derivative();
    const Jet c_u2p = k * (3.0 * l * l + 1.0) * W;
    const Jet g = 2.0 * l * k1 / k * W;
    const Jet twist = 2.0 * l * W;
    const Jet c_u3 = g.derivative() + twist.derivative().derivative();
    const Jet c_u3p = g + twist.derivative();
    const Jet c_u3pp = 2.0 * W * l;
    const double c_u1 = 0.5 * (k[0] * k[0] * W[0] * W[0] - mu);
    return u1[0] * c_u1 + u2[0] * c_u2[0] + u2[1] * c_u2p[0] + u3[0] * c_u3[0] - u3[1] * c_u3p[0] +
           u3[2] * c_u3pp[0];
}

} // namespace

EnergyReport sadowsky_energy(const CurvatureProfile& profile, double mu, std::span<const double> speed)
{
    profile.validate(2);
    if (!speed.empty() && speed.size() != profile.size())
        throw StripError(ErrorCode::InvalidArgument, "speed array size differs from profile");
    EnergyReport r;
    r.mu = mu;
    const std::size_t n = profile.size();
    r.integrand.resize(n);
    std::vector<double> weighted(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double W = 1.0 + profile.lambda[i] * profile.lambda[i];
        r.integrand[i] = profile.kappa[i] * profile.kappa[i] * W * W - mu;
        v[i] = speed.empty() ? 1.0 : speed[i];
        weighted[i] = r.integrand[i] * v[i];
    }
    const auto q = quadrature(weighted, profile.h);
    r.S_mu = q.value;
    r.rule = q.rule;
    r.length = quadrature(v, profile.h).value;
    return r;
}

ELResidual el_residuals(const CurvatureProfile& profile, double mu, FormVariant form, std::size_t boundary_zone)
{
    require_jets(profile);
    ELResidual r;
    r.skipped = boundary_zone;
    const std::size_t n = profile.size();
    r.f1.resize(n);
    r.f2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Jet k = profile.kappa_jet(i);
        const Jet l = profile.lambda_jet(i);
        r.f1[i] = formulas::f1(k, l, mu, form);
        r.f2[i] = formulas::f2(k, l, form);
    }
    r.f1_sup = sup_interior(r.f1, boundary_zone);
    r.f2_sup = sup_interior(r.f2, boundary_zone);
    return r;
}

ForceField force_field(const CurvatureProfile& profile, double mu, const FramedCurve& curve)
{
    require_jets(profile);
    require_match(profile, curve);
    ForceField f;
    const std::size_t n = profile.size();
    f.a1.resize(n);
    f.a2.resize(n);
    f.a3.resize(n);
    f.b0.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Jet k = profile.kappa_jet(i);
        const Jet l = profile.lambda_jet(i);
        f.a1[i] = formulas::a1(k, l, mu).value();
        f.a2[i] = formulas::a2(k, l).value();
        f.a3[i] = formulas::a3(k, l).value();
        f.b0[i] = f.a1[i] * curve.T[i] + f.a2[i] * curve.N[i] + f.a3[i] * curve.B[i];
        f.max_norm = std::max(f.max_norm, f.b0[i].norm());
    }
    f.mean = mean_of(f.b0);
    f.drift = drift_of(f.b0, f.mean);
    return f;
}

TorqueField torque_field(const CurvatureProfile& profile, double mu, const FramedCurve& curve)
{
    return torque_field(profile, force_field(profile, mu, curve), curve);
}

TorqueField torque_field(const CurvatureProfile& profile, const ForceField& force, const FramedCurve& curve)
{
    require_jets(profile);
    require_match(profile, curve);
    TorqueField t;
    const std::size_t n = profile.size();
    t.s1.resize(n);
    t.s2.resize(n);
    t.s3.resize(n);
    t.J.resize(n);
    t.b1.resize(n);
    t.b0_dot_b1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Jet k = profile.kappa_jet(i);
        const Jet l = profile.lambda_jet(i);
        t.s1[i] = formulas::s1(k, l).value();
        t.s2[i] = formulas::s2(k, l).value();
        t.s3[i] = formulas::s3(k, l).value();
        t.J[i] = t.s1[i] * curve.T[i] + t.s2[i] * curve.N[i] + t.s3[i] * curve.B[i];
        t.b1[i] = t.J[i] - curve.gamma[i].cross(force.b0[i]);
        t.b0_dot_b1[i] = force.b0[i].dot(t.b1[i]);
        t.radial_derivative = std::max(t.radial_derivative, std::abs(curve.gamma[i].dot(curve.T[i])));
    }
    t.mean = mean_of(t.b1);
    t.drift = drift_of(t.b1, t.mean);
    const auto [lo, hi] = std::minmax_element(t.b0_dot_b1.begin(), t.b0_dot_b1.end());
    t.b0_dot_b1_min = *lo;
    t.b0_dot_b1_max = *hi;
    double scale = 0.0;
    for (const auto& g : curve.gamma) scale = std::max(scale, g.norm());
    t.radius_conserved = t.radial_derivative <= 1e-6 * std::max(1.0, scale);
    return t;
}

VariationField VariationField::zero(std::size_t n)
{
    VariationField f;
    f.u1.assign(n, Jet(0.0));
    f.u2.assign(n, Jet(0.0));
    f.u3.assign(n, Jet(0.0));
    return f;
}

VariationField translation_field(const FramedCurve& curve, const Vec3& a)
{
    return project_field(curve, [&](std::size_t) {
        return std::array<Vec3, 4>{a, Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    });
}

VariationField rotation_field(const FramedCurve& curve, const Vec3& w)
{
    const auto& p = curve.profile;
    return project_field(curve, [&](std::size_t i) {
        const FrameDerivs E = frame_derivatives(p.kappa_jet(i), p.lambda_jet(i), curve.T[i], curve.N[i], curve.B[i]);
        return std::array<Vec3, 4>{w.cross(curve.gamma[i]), w.cross(E[0][0]), w.cross(E[0][1]), w.cross(E[0][2])};
    });
}

VariationField bump_field(const CurvatureProfile& profile, std::span<const Bump> bumps)
{
    VariationField f = VariationField::zero(profile.size());
    for (const auto& b : bumps) {
        if (!(b.end > b.start)) throw StripError(ErrorCode::InvalidArgument, "bump support is empty");
        if (b.component < 1 || b.component > 3) throw StripError(ErrorCode::InvalidArgument, "bump component must be 1..3");
        auto& target = b.component == 1 ? f.u1 : (b.component == 2 ? f.u2 : f.u3);
        const double scale = 2.0 / (b.end - b.start);
        for (std::size_t i = 0; i < profile.size(); ++i) {
            const double s = profile.s(i);
            const double x = (2.0 * s - b.start - b.end) / (b.end - b.start);
            if (std::abs(x) >= 1.0) continue;
            const Jet xj{x, scale, 0.0, 0.0};
            Jet phi = exp(Jet(-1.0) / (1.0 - xj * xj));
            if (b.omega != 0.0) phi = phi * sin_jet(b.omega, b.phase, s);
            target[i] += b.amplitude * phi;
        }
    }
    return f;
}

VariationField random_compact_field(const CurvatureProfile& profile, std::uint64_t seed, double margin)
{
    const double L = profile.length();
    const double lo = margin;
    const double hi = L - margin;
    if (!(hi - lo > 0.0)) throw StripError(ErrorCode::InvalidArgument, "margin leaves no room for a compact field");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Bump> bumps;
    const double span = hi - lo;
    for (int c = 1; c <= 3; ++c) {
        const int count = 1 + static_cast<int>(unit(rng) * 2.0);
        for (int j = 0; j < count; ++j) {
            Bump b;
            const double width = span * (0.3 + 0.5 * unit(rng));
            b.start = lo + (span - width) * unit(rng);
            b.end = b.start + width;
            b.amplitude = 2.0 * unit(rng) - 1.0;
            b.component = c;
            b.omega = unit(rng) * 6.0 * std::numbers::pi / L;
            b.phase = 2.0 * std::numbers::pi * unit(rng);
            bumps.push_back(b);
        }
    }
    return bump_field(profile, bumps);
}

std::vector<double> noether_boundary_term(const CurvatureProfile& profile, const FramedCurve& curve,
                                          const VariationField& field, double mu)
{
    require_jets(profile);
    require_match(profile, curve);
    if (field.size() != profile.size())
        throw StripError(ErrorCode::InvalidArgument, "variation field node count differs from profile");
    std::vector<double> b(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i)
        b[i] = boundary_term(profile.kappa_jet(i), profile.lambda_jet(i), mu, field.u1[i], field.u2[i], field.u3[i]);
    return b;
}

FirstVariation first_variation(const CurvatureProfile& profile, const FramedCurve& curve,
                               const VariationField& field, double mu)
{
    require_jets(profile);
    require_match(profile, curve);
    if (field.size() != profile.size())
        throw StripError(ErrorCode::InvalidArgument, "variation field node count differs from profile");
    const std::size_t n = profile.size();
    FirstVariation r;
    r.v_dot.resize(n);
    r.kappa_dot.resize(n);
    r.lambda_dot.resize(n);
    r.b.resize(n);
    std::vector<double> bulk(n), direct(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Jet k = profile.kappa_jet(i);
        const Jet l = profile.lambda_jet(i);
        const Jet& u1 = field.u1[i];
        const Jet& u2 = field.u2[i];
        const Jet& u3 = field.u3[i];
        const Jet lk = l * k;
        const Jet lk1 = lk.derivative();
        const double k0 = k[0], l0 = l[0], W = 1.0 + l0 * l0;

        const double vd = u1[1] - k0 * u2[0];
        const double kd = u1[0] * k[1] + (1.0 - l0 * l0) * k0 * k0 * u2[0] + u2[2] - lk1[0] * u3[0] -
                          2.0 * l0 * k0 * u3[1];
        const double ld = u1[0] * l[1] +
                          u2[0] * (lk1[1] / (k0 * k0) - lk1[0] * k[1] / (k0 * k0 * k0) + l0 * l0 * l0 * k0 + l0 * k0) +
                          u2[1] * (2.0 * l[1] / k0 + lk1[0] / (k0 * k0)) + u2[2] * l0 / k0 - u3[0] * l0 * l[1] +
                          u3[1] * W - u3[2] * k[1] / (k0 * k0 * k0) + u3[3] / (k0 * k0);
        r.v_dot[i] = vd;
        r.kappa_dot[i] = kd;
        r.lambda_dot[i] = ld;
        direct[i] = (k0 * k0 * W * W - mu) * vd + 2.0 * k0 * kd * W * W + 4.0 * k0 * k0 * W * l0 * ld;
        bulk[i] = u2[0] * formulas::f1(k, l, mu) + u3[0] * formulas::f2(k, l);
        r.b[i] = boundary_term(k, l, mu, u1, u2, u3);
    }
    r.bulk = quadrature(bulk, profile.h).value;
    r.boundary = r.b.back() - r.b.front();
    r.dS = 2.0 * (r.bulk + r.boundary);
    r.dS_direct = quadrature(direct, profile.h).value;
    return r;
}

Tolerances parse_tolerances(const std::string& text, Tolerances base)
{
    if (text.empty()) return base;
    auto parse_number = [&](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
            throw StripError(ErrorCode::InvalidArgument, "bad tolerance value '" + s + "'");
        return v;
    };
    if (text.find('=') == std::string::npos) {
        const double v = parse_number(text);
        base.el = v;
        base.drift = v;
        return base;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw StripError(ErrorCode::InvalidArgument, "bad tolerance entry '" + item + "'");
        const std::string key = item.substr(0, eq);
        const double v = parse_number(item.substr(eq + 1));
        if (key == "el") base.el = v;
        else if (key == "drift") base.drift = v;
        else throw StripError(ErrorCode::InvalidArgument, "unknown tolerance key '" + key + "'");
    }
    return base;
}

Tolerances tolerances_from_env()
{
    const char* env = std::getenv("STRIPFORGE_TOL");
    return parse_tolerances(env ? std::string(env) : std::string());
}

namespace {

std::string jet_source_name(JetSource s)
{
    switch (s) {
    case JetSource::analytic: return "analytic";
    case JetSource::finite_difference: return "finite-difference";
    case JetSource::none: break;
    }
    return "none";
}

} // namespace

std::string VerificationReport::to_text() const
{
    char buf[1024];
    std::snprintf(buf, sizeof buf,
                  "mu               %.17g\n"
                  "S_mu             %.17g\n"
                  "length           %.17g\n"
                  "f1_sup           %.6e\n"
                  "f2_sup           %.6e\n"
                  "b0_drift         %.6e\n"
                  "b1_drift         %.6e\n"
                  "b0_dot_b1_range  [%.17g, %.17g]\n"
                  "jets             %s\n"
                  "tolerances       el=%.3g drift=%.3g\n"
                  "certified        %s\n",
                  mu, S_mu, length, f1_sup, f2_sup, b0_drift, b1_drift, b0_dot_b1_min, b0_dot_b1_max,
                  jet_source_name(jets).c_str(), tol.el, tol.drift, certified ? "yes" : "no");
    return buf;
}

std::string VerificationReport::to_json() const
{
    nlohmann::json j;
    j["mu"] = mu;
    j["S_mu"] = S_mu;
    j["length"] = length;
    j["f1_sup"] = f1_sup;
    j["f2_sup"] = f2_sup;
    j["b0_drift"] = b0_drift;
    j["b1_drift"] = b1_drift;
    j["b0_dot_b1_range"] = {b0_dot_b1_min, b0_dot_b1_max};
    j["jets"] = jet_source_name(jets);
    j["tolerances"] = {{"el", tol.el}, {"drift", tol.drift}};
    j["certified"] = certified;
    return j.dump(2);
}

VerificationReport verify_strip(const CurvatureProfile& profile, const FramedCurve& curve, double mu,
                                const Tolerances& tol)
{
    const CurvatureProfile p = profile.has_jets() ? profile : differentiate_profile(profile);
    VerificationReport r;
    r.mu = mu;
    r.tol = tol;
    r.jets = p.jet_source;
    const auto energy = sadowsky_energy(p, mu);
    r.S_mu = energy.S_mu;
    r.length = energy.length;
    const auto res = el_residuals(p, mu);
    r.f1_sup = res.f1_sup;
    r.f2_sup = res.f2_sup;
    const auto force = force_field(p, mu, curve);
    const auto torque = torque_field(p, force, curve);
    r.b0_drift = force.drift;
    r.b1_drift = torque.drift;
    r.b0_dot_b1_min = torque.b0_dot_b1_min;
    r.b0_dot_b1_max = torque.b0_dot_b1_max;
    r.certified = r.f1_sup <= tol.el && r.f2_sup <= tol.el && r.b0_drift <= tol.drift && r.b1_drift <= tol.drift;
    return r;
}

} // namespace stripforge
