#include "stripforge/integrable.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "stripforge/error.hpp"

namespace stripforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kEdgeSkip = 3;

double elastica_slope(double lambda, double l)
{
    return -1.5 * lambda * lambda - (1.0 - 0.5 * l);
}

std::size_t node_count(double length, double h)
{
    if (!(h > 0.0) || !std::isfinite(h)) throw StripError(ErrorCode::InvalidArgument, "h must be positive");
    if (!(length > 0.0) || !std::isfinite(length)) throw StripError(ErrorCode::InvalidArgument, "length must be positive");
    return static_cast<std::size_t>(std::floor(length / h + 1e-9)) + 1;
}

void check_frame(const Frame& f)
{
    if (f.orthonormality_defect() > kFrameTolerance || f.T.cross(f.N).dot(f.B) <= 0.0)
        throw StripError(ErrorCode::NonOrthonormalInitialFrame, "initial triad is not orthonormal and right-handed");
}

// Strip family driven by a two-dimensional autonomous ODE y' = g(y) in the
// strip arclength, with κ and λ read off the state.
struct Family {
    std::function<std::array<double, 2>(double, double)> rhs;
    std::function<double(double, double)> kappa;
    std::function<double(double, double)> lambda;
    /// Jets of κ and λ in s at the state (y0, y1).
    std::function<std::pair<Jet, Jet>(double, double)> jets;
};

StripConstruction integrate_family(const Family& fam, double y0, double y1, std::size_t n, double h,
                                   const Frame& initial)
{
    check_frame(initial);
    if (n < 7) throw StripError(ErrorCode::GridTooSmall, "construction needs at least 7 nodes");

    struct State {
        double y0, y1;
        Vec3 g, T, N, B;
    };
    auto rhs = [&](const State& y) {
        const auto d = fam.rhs(y.y0, y.y1);
        const double k = fam.kappa(y.y0, y.y1);
        const double l = fam.lambda(y.y0, y.y1);
        return State{d[0], d[1], y.T, k * y.N, -k * y.T + k * l * y.B, -k * l * y.N};
    };
    auto axpy = [](const State& y, double a, const State& d) {
        return State{y.y0 + a * d.y0, y.y1 + a * d.y1, y.g + a * d.g, y.T + a * d.T, y.N + a * d.N, y.B + a * d.B};
    };

    StripConstruction out;
    auto& prof = out.profile;
    prof.h = h;
    prof.kappa.resize(n);
    prof.lambda.resize(n);
    prof.allocate_jets(JetSource::analytic);
    auto& fr = out.frame;
    fr.h = h;
    fr.gamma.resize(n);
    fr.T.resize(n);
    fr.N.resize(n);
    fr.B.resize(n);
    fr.speed.assign(n, 1.0);

    State y{y0, y1, initial.origin, initial.T, initial.N, initial.B};
    for (std::size_t i = 0;; ++i) {
        const auto [kj, lj] = fam.jets(y.y0, y.y1);
        if (!(kj.value() > 0.0))
            throw StripError(ErrorCode::NonPositiveCurvature, "curvature vanishes at s = " + std::to_string(h * i));
        prof.set_jets(i, kj, lj);
        fr.gamma[i] = y.g;
        fr.T[i] = y.T;
        fr.N[i] = y.N;
        fr.B[i] = y.B;
        if (i + 1 == n) break;
        const State k1 = rhs(y);
        const State k2 = rhs(axpy(y, 0.5 * h, k1));
        const State k3 = rhs(axpy(y, 0.5 * h, k2));
        const State k4 = rhs(axpy(y, h, k3));
        State next = y;
        next.y0 += h / 6.0 * (k1.y0 + 2.0 * k2.y0 + 2.0 * k3.y0 + k4.y0);
        next.y1 += h / 6.0 * (k1.y1 + 2.0 * k2.y1 + 2.0 * k3.y1 + k4.y1);
        next.g += h / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
        next.T += h / 6.0 * (k1.T + 2.0 * k2.T + 2.0 * k3.T + k4.T);
        next.N += h / 6.0 * (k1.N + 2.0 * k2.N + 2.0 * k3.N + k4.N);
        next.B += h / 6.0 * (k1.B + 2.0 * k2.B + 2.0 * k3.B + k4.B);
        orthonormalize(next.T, next.N, next.B);
        y = next;
    }
    fr.profile = prof;
    return out;
}

// t-jet of an elastica at state (λ, λ').
Jet elastica_jet(double lambda, double dlambda, double l)
{
    return Jet{lambda, dlambda, elastica_force(lambda, l), elastica_slope(lambda, l) * dlambda};
}

// Strip length ∫ w(λ(t)) dt over the stored solution.
double strip_length(const ElasticaSolution& sol, const std::function<double(double)>& w)
{
    std::vector<double> v(sol.size());
    for (std::size_t i = 0; i < sol.size(); ++i) v[i] = w(sol.lambda[i]);
    return quadrature(v, sol.h).value;
}

std::string format_double(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Cubic Hermite root of p on [t0, t0+h] given values and slopes.
double hermite_root(double t0, double h, double p0, double p1, double d0, double d1)
{
    auto eval = [&](double x) {
        const double x2 = x * x, x3 = x2 * x;
        return (2 * x3 - 3 * x2 + 1) * p0 + (x3 - 2 * x2 + x) * h * d0 + (-2 * x3 + 3 * x2) * p1 +
               (x3 - x2) * h * d1;
    };
    double lo = 0.0, hi = 1.0;
    double flo = eval(lo);
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return t0 + h * 0.5 * (lo + hi);
}

std::vector<double> turning_times(const std::vector<double>& lam, const std::vector<double>& p, double l, double h)
{
    std::vector<double> times;
    const std::size_t n = p.size();
    if (n >= 1 && p[0] == 0.0) times.push_back(0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (p[i + 1] == 0.0) {
            if (i + 2 < n && p[i] * p[i + 2] < 0.0) times.push_back(h * static_cast<double>(i + 1));
            continue;
        }
        if (p[i] * p[i + 1] < 0.0)
            times.push_back(hermite_root(h * static_cast<double>(i), h, p[i], p[i + 1], elastica_force(lam[i], l),
                                         elastica_force(lam[i + 1], l)));
    }
    return times;
}

} // namespace

double elastica_force(double lambda, double l)
{
    return -0.5 * lambda * lambda * lambda - (1.0 - 0.5 * l) * lambda;
}

double elastica_energy(double lambda, double dlambda, double l)
{
    return dlambda * dlambda + 0.25 * lambda * lambda * lambda * lambda + (1.0 - 0.5 * l) * lambda * lambda;
}

Jet ElasticaSolution::jet(std::size_t i) const
{
    return Jet{lambda[i], dlambda[i], d2lambda[i], d3lambda[i]};
}

double ElasticaSolution::invariant_violation() const
{
    double v = 0.0;
    for (std::size_t i = 0; i < size(); ++i) v = std::max(v, std::abs(elastica_energy(lambda[i], dlambda[i], l) - A));
    return v;
}

ElasticaSolution elastica_from_samples(double l, double h, std::vector<double> lambda, std::vector<double> dlambda)
{
    if (lambda.size() != dlambda.size() || lambda.size() < 2)
        throw StripError(ErrorCode::InvalidArgument, "elastica samples must have matching sizes >= 2");
    ElasticaSolution sol;
    sol.l = l;
    sol.h = h;
    sol.lambda = std::move(lambda);
    sol.dlambda = std::move(dlambda);
    const std::size_t n = sol.lambda.size();
    sol.d2lambda.resize(n);
    sol.d3lambda.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sol.d2lambda[i] = elastica_force(sol.lambda[i], l);
        sol.d3lambda[i] = elastica_slope(sol.lambda[i], l) * sol.dlambda[i];
    }
    sol.A = elastica_energy(sol.lambda[0], sol.dlambda[0], l);
    const auto times = turning_times(sol.lambda, sol.dlambda, l, h);
    if (times.size() >= 2)
        sol.period_estimate = 2.0 * (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    return sol;
}

ElasticaSolution solve_spherical_elastica(double l, double lambda0, double dlambda0, double length, double h)
{
    if (!std::isfinite(l) || !std::isfinite(lambda0) || !std::isfinite(dlambda0))
        throw StripError(ErrorCode::InvalidArgument, "non-finite elastica parameters");
    const std::size_t n = node_count(length, h);
    std::vector<double> lam(n), p(n);
    lam[0] = lambda0;
    p[0] = dlambda0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double x = lam[i], v = p[i];
        const double k1x = v, k1v = elastica_force(x, l);
        const double k2x = v + 0.5 * h * k1v, k2v = elastica_force(x + 0.5 * h * k1x, l);
        const double k3x = v + 0.5 * h * k2v, k3v = elastica_force(x + 0.5 * h * k2x, l);
        const double k4x = v + h * k3v, k4v = elastica_force(x + h * k3x, l);
        lam[i + 1] = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        p[i + 1] = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return elastica_from_samples(l, h, std::move(lam), std::move(p));
}

std::string to_string(StripKind kind)
{
    switch (kind) {
    case StripKind::force_free: return "force-free";
    case StripKind::momentum: return "momentum";
    case StripKind::helix: return "helix";
    case StripKind::planar_elastica: return "planar-elastica";
    case StripKind::cylinder_geodesic: return "cylinder-geodesic";
    }
    return "unknown";
}

StripKind strip_kind_from_string(const std::string& name)
{
    for (auto k : {StripKind::force_free, StripKind::momentum, StripKind::helix, StripKind::planar_elastica,
                   StripKind::cylinder_geodesic})
        if (to_string(k) == name) return k;
    throw StripError(ErrorCode::InvalidArgument, "unknown strip kind '" + name + "'");
}

StripConstruction build_force_free(const ElasticaSolution& sol, const Frame& initial)
{
    if (sol.l != 1.0)
        throw StripError(ErrorCode::MultiplierMismatch,
                         "force-free strips need an elastica with l = 1, got l = " + format_double(sol.l));
    if (sol.size() < 2) throw StripError(ErrorCode::GridTooSmall, "empty elastica solution");
    const double l = sol.l;
    const double L = strip_length(sol, [](double x) { return 1.0 + x * x; });
    const std::size_t n = node_count(L, sol.h);

    Family fam;
    fam.rhs = [l](double x, double p) {
        const double r = 1.0 / (1.0 + x * x);
        return std::array<double, 2>{r * p, r * elastica_force(x, l)};
    };
    fam.kappa = [](double x, double) { return 1.0 / (1.0 + x * x); };
    fam.lambda = [](double x, double) { return x; };
    fam.jets = [l](double x, double p) {
        const Jet lt = elastica_jet(x, p, l);
        const Jet rate = 1.0 / (1.0 + lt * lt);
        return std::pair<Jet, Jet>{reparametrize(rate, rate), reparametrize(lt, rate)};
    };
    StripConstruction out = integrate_family(fam, sol.lambda[0], sol.dlambda[0], n, sol.h, initial);
    out.kind = StripKind::force_free;
    out.mu = -1.0;
    out.l = sol.l;
    out.A = sol.A;
    out.provenance = "spherical elastica l=1 lambda0=" + format_double(sol.lambda[0]) +
                     " dlambda0=" + format_double(sol.dlambda[0]) + " A=" + format_double(sol.A);
    return out;
}

StripConstruction build_momentum(const ElasticaSolution& sol, double mu, const Frame& initial)
{
    if (sol.size() < 2) throw StripError(ErrorCode::GridTooSmall, "empty elastica solution");
    if (std::abs(sol.l + mu) > 1e-12 * std::max(1.0, std::abs(mu)))
        throw StripError(ErrorCode::MultiplierMismatch, "momentum strips need l = -mu, got l = " + format_double(sol.l) +
                                                            ", mu = " + format_double(mu));
    double min_abs = std::abs(sol.lambda[0]);
    bool positive = false, negative = false;
    double sup_d = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        min_abs = std::min(min_abs, std::abs(sol.lambda[i]));
        positive = positive || sol.lambda[i] > 0.0;
        negative = negative || sol.lambda[i] < 0.0;
        sup_d = std::max(sup_d, std::abs(sol.dlambda[i]));
    }
    if (min_abs < 1e-6 || (positive && negative))
        throw StripError(ErrorCode::LambdaHasZeros,
                         "geodesic curvature of the binormal image comes within " + format_double(min_abs) + " of zero");
    const double sign = positive ? 1.0 : -1.0;
    const double l = sol.l;
    const double L = strip_length(sol, [](double x) { return 1.0 + 1.0 / (x * x); });

    if (sup_d < 1e-8) {
        const double lb = sign * sol.lambda[0];
        const double lam_s = 1.0 / lb;
        const double kappa = lb * lb * lb / (1.0 + lb * lb);
        StripConstruction out = build_helix(kappa, lam_s, L, sol.h, initial);
        out.kind = StripKind::momentum;
        out.l = sol.l;
        out.A = sol.A;
        out.provenance = "constant binormal curvature, helix with kappa=" + format_double(kappa) +
                         " lambda=" + format_double(lam_s);
        return out;
    }

    Family fam;
    fam.rhs = [l](double x, double p) {
        const double r = x * x / (1.0 + x * x);
        return std::array<double, 2>{r * p, r * elastica_force(x, l)};
    };
    fam.kappa = [](double x, double) { return x * x * x / (1.0 + x * x); };
    fam.lambda = [](double x, double) { return 1.0 / x; };
    fam.jets = [l](double x, double p) {
        const Jet lt = elastica_jet(x, p, l);
        const Jet rate = lt * lt / (1.0 + lt * lt);
        const Jet kappa = lt * lt * lt / (1.0 + lt * lt);
        return std::pair<Jet, Jet>{reparametrize(kappa, rate), reparametrize(1.0 / lt, rate)};
    };
    StripConstruction out = integrate_family(fam, sign * sol.lambda[0], sign * sol.dlambda[0], node_count(L, sol.h),
                                             sol.h, initial);
    out.kind = StripKind::momentum;
    out.mu = mu;
    out.l = sol.l;
    out.A = sol.A;
    out.provenance = "binormal spherical elastica l=" + format_double(sol.l) +
                     " lambda0=" + format_double(sign * sol.lambda[0]) +
                     " dlambda0=" + format_double(sign * sol.dlambda[0]) + " A=" + format_double(sol.A) +
                     (sign < 0.0 ? " (mirrored)" : "");
    return out;
}

double helix_multiplier(double kappa, double lambda)
{
    const double W = 1.0 + lambda * lambda;
    return -kappa * kappa * W * W * (1.0 + 2.0 * lambda * lambda);
}

StripConstruction build_helix(double kappa, double lambda, double length, double h, const Frame& initial)
{
    if (!(kappa > 0.0)) throw StripError(ErrorCode::NonPositiveCurvature, "helix curvature must be positive");
    if (!std::isfinite(lambda)) throw StripError(ErrorCode::InvalidArgument, "non-finite lambda");
    const std::size_t n = node_count(length, h);
    StripConstruction out;
    out.kind = StripKind::helix;
    out.profile.h = h;
    out.profile.kappa.assign(n, kappa);
    out.profile.lambda.assign(n, lambda);
    out.profile.allocate_jets(JetSource::analytic);
    out.frame = integrate_frame(out.profile, initial);
    out.mu = helix_multiplier(kappa, lambda);
    out.l = std::nan("");
    out.A = std::nan("");
    out.provenance = "helix kappa=" + format_double(kappa) + " lambda=" + format_double(lambda);
    return out;
}

StripConstruction build_planar_elastica(double kappa0, double dkappa0, double mu, double length, double h,
                                        const Frame& initial)
{
    Family fam;
    fam.rhs = [mu](double k, double q) {
        return std::array<double, 2>{q, -0.5 * k * k * k - 0.5 * mu * k};
    };
    fam.kappa = [](double k, double) { return k; };
    fam.lambda = [](double, double) { return 0.0; };
    fam.jets = [mu](double k, double q) {
        const Jet kj{k, q, -0.5 * k * k * k - 0.5 * mu * k, (-1.5 * k * k - 0.5 * mu) * q};
        return std::pair<Jet, Jet>{kj, Jet{0.0, 0.0, 0.0, 0.0}};
    };
    StripConstruction out = integrate_family(fam, kappa0, dkappa0, node_count(length, h), h, initial);
    out.kind = StripKind::planar_elastica;
    out.mu = mu;
    out.l = 0.5 * mu;
    out.A = dkappa0 * dkappa0 + 0.25 * std::pow(kappa0, 4) + 0.5 * mu * kappa0 * kappa0;
    out.provenance = "planar elastica kappa0=" + format_double(kappa0) + " dkappa0=" + format_double(dkappa0);
    return out;
}

StripConstruction build_cylinder_geodesic(double lambda, double c, double length, double h, double center,
                                          const Frame& initial)
{
    if (!(c > 0.0)) throw StripError(ErrorCode::InvalidArgument, "c must be positive");
    const std::size_t n = node_count(length, h);
    const double a = std::sqrt(1.0 + lambda * lambda);
    const double sc = center < 0.0 ? 0.5 * h * static_cast<double>(n - 1) : center;
    StripConstruction out;
    out.kind = StripKind::cylinder_geodesic;
    auto& p = out.profile;
    p.h = h;
    p.kappa.resize(n);
    p.lambda.assign(n, lambda);
    p.allocate_jets(JetSource::analytic);
    for (std::size_t i = 0; i < n; ++i) {
        const Jet z{c * (p.s(i) - sc) / a, c / a, 0.0, 0.0};
        const Jet k = (4.0 * c / (a * a)) / (exp(z) + exp(-z));
        p.set_jets(i, k, Jet{lambda, 0.0, 0.0, 0.0});
    }
    out.frame = integrate_frame(p, initial);
    out.mu = -2.0 * (1.0 + lambda * lambda) * c * c;
    out.l = std::nan("");
    out.A = std::nan("");
    out.provenance = "cylinder slope line lambda=" + format_double(lambda) + " c=" + format_double(c) +
                     " center=" + format_double(sc);
    return out;
}

PlanarElastica cylinder_geodesic_transform(const StripConstruction& strip, double zero_energy_tol)
{
    const CurvatureProfile& p0 = strip.profile;
    p0.validate(7);
    const CurvatureProfile p = p0.has_jets() ? p0 : differentiate_profile(p0);
    const std::size_t n = p.size();
    const double lam = p.lambda[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = std::max({std::abs(p.lambda[i] - lam), std::abs(p.dlambda[0][i]), std::abs(p.dlambda[1][i])});
        if (dev > 1e-10 * std::max(1.0, std::abs(lam)))
            throw StripError(ErrorCode::LambdaNotConstant, "modified torsion varies along the strip");
    }
    if (std::abs(lam) < 1e-12) throw StripError(ErrorCode::LambdaNotConstant, "modified torsion must be nonzero");
    const auto [kmin, kmax] = std::minmax_element(p.kappa.begin(), p.kappa.end());
    if (*kmax - *kmin <= 1e-9 * *kmax) throw StripError(ErrorCode::ConstantCurvature, "curvature is constant");

    const double a = std::sqrt(1.0 + lam * lam);
    const auto& fr = strip.frame;
    Vec3 D = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) D += lam * fr.T[i] + fr.B[i];
    D /= static_cast<double>(n);

    PlanarElastica out;
    out.h = p.h / a;
    out.gamma.resize(n);
    out.kappa.resize(n);
    out.dkappa.resize(n);
    out.d2kappa.resize(n);
    double pmin = INFINITY, pmax = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        out.gamma[i] = fr.gamma[i] - (lam / (a * a)) * p.s(i) * D;
        out.kappa[i] = a * a * p.kappa[i];
        out.dkappa[i] = a * a * a * p.dkappa[0][i];
        out.d2kappa[i] = a * a * a * a * p.dkappa[1][i];
        const double proj = out.gamma[i].dot(D) / a;
        pmin = std::min(pmin, proj);
        pmax = std::max(pmax, proj);
    }
    out.planarity_defect = pmax - pmin;

    // q = κ'² + ¼κ⁴ = E − lκ²
    Eigen::MatrixXd M(n, 2);
    Eigen::VectorXd q(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = out.kappa[i];
        M(static_cast<Eigen::Index>(i), 0) = 1.0;
        M(static_cast<Eigen::Index>(i), 1) = -k * k;
        q(static_cast<Eigen::Index>(i)) = out.dkappa[i] * out.dkappa[i] + 0.25 * k * k * k * k;
    }
    const Eigen::Vector2d sol = M.colPivHouseholderQr().solve(q);
    out.E = sol(0);
    out.l_planar = sol(1);
    out.first_integral_residual = (M * sol - q).cwiseAbs().maxCoeff();
    out.zero_energy = std::abs(out.E) <= zero_energy_tol;

    const auto extracted = extract_curvature(out.gamma, out.h);
    for (std::size_t i = kEdgeSkip; i + kEdgeSkip < n; ++i)
        out.curvature_mismatch = std::max(out.curvature_mismatch, std::abs(extracted.kappa[i] - out.kappa[i]));
    return out;
}

std::optional<ClosureCandidate> closure_candidate(double lambda0, double A, const ClosureOptions& opt)
{
    const double l = 1.0;
    const double V = elastica_energy(lambda0, 0.0, l);
    if (A < V) return std::nullopt;
    const double p0 = std::sqrt(A - V);
    ClosureCandidate c;
    c.lambda0 = lambda0;
    c.A = A;
    if (lambda0 == 0.0 && p0 == 0.0) {
        c.period = 2.0 * kPi;
        return c;
    }

    // Period from turning points of λ.
    const auto probe = solve_spherical_elastica(l, lambda0, p0, opt.max_time, opt.h);
    const auto times = turning_times(probe.lambda, probe.dlambda, l, opt.h);
    if (times.size() < 3) return std::nullopt;
    const double P = times[2] - times[0];
    c.period = P;

    const auto steps = std::max<std::size_t>(8, static_cast<std::size_t>(std::llround(P / opt.h)));
    const double dt = P / static_cast<double>(steps);
    struct State {
        double x, p;
        Vec3 X, e, cn, m;
        double len;
    };
    auto rhs = [l](const State& y) {
        const double w = 1.0 + y.x * y.x;
        return State{y.p, elastica_force(y.x, l), y.e, -y.X + y.x * y.cn, -y.x * y.e, w * y.X, w};
    };
    auto axpy = [](const State& y, double a, const State& d) {
        return State{y.x + a * d.x, y.p + a * d.p, y.X + a * d.X, y.e + a * d.e, y.cn + a * d.cn, y.m + a * d.m,
                     y.len + a * d.len};
    };
    State y{lambda0, p0, Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ(), Vec3::Zero(), 0.0};
    for (std::size_t i = 0; i < steps; ++i) {
        const State k1 = rhs(y);
        const State k2 = rhs(axpy(y, 0.5 * dt, k1));
        const State k3 = rhs(axpy(y, 0.5 * dt, k2));
        const State k4 = rhs(axpy(y, dt, k3));
        y.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        y.p += dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
        y.X += dt / 6.0 * (k1.X + 2.0 * k2.X + 2.0 * k3.X + k4.X);
        y.e += dt / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e);
        y.cn += dt / 6.0 * (k1.cn + 2.0 * k2.cn + 2.0 * k3.cn + k4.cn);
        y.m += dt / 6.0 * (k1.m + 2.0 * k2.m + 2.0 * k3.m + k4.m);
        y.len += dt / 6.0 * (k1.len + 2.0 * k2.len + 2.0 * k3.len + k4.len);
        orthonormalize(y.X, y.e, y.cn);
    }
    Eigen::Matrix3d R;
    R.col(0) = y.X;
    R.col(1) = y.e;
    R.col(2) = y.cn;
    const Vec3 skew(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
    const double theta = std::atan2(0.5 * skew.norm(), 0.5 * (R.trace() - 1.0));
    c.rotation_angle = theta;
    Vec3 axis;
    if (skew.norm() > 1e-9) {
        axis = skew.normalized();
    } else {
        const Eigen::Matrix3d S = R + Eigen::Matrix3d::Identity();
        Eigen::Index col = 0;
        S.colwise().norm().maxCoeff(&col);
        axis = S.col(col).normalized();
    }

    const double frac = theta / (2.0 * kPi);
    double best = INFINITY;
    for (int q = 1; q <= opt.q_max; ++q) {
        const int pp = static_cast<int>(std::lround(frac * q));
        const double err = std::abs(frac - static_cast<double>(pp) / q);
        if (err < best - 1e-15) {
            best = err;
            c.p = pp;
            c.q = q;
        }
    }
    c.angle_defect = 2.0 * kPi * best;
    c.mass_defect = (c.p == 0 ? y.m.norm() : std::abs(y.m.dot(axis))) / y.len;
    return c;
}

std::vector<ClosureCandidate> closure_search(const std::vector<double>& lambda0_grid, const std::vector<double>& A_grid,
                                             const ClosureOptions& opt)
{
    std::vector<ClosureCandidate> out;
    for (double l0 : lambda0_grid)
        for (double A : A_grid) {
            const auto c = closure_candidate(l0, A, opt);
            if (c && c->angle_defect <= opt.angle_tol && c->mass_defect <= opt.mass_tol) out.push_back(*c);
        }
    std::sort(out.begin(), out.end(), [](const ClosureCandidate& a, const ClosureCandidate& b) {
        if (a.defect() != b.defect()) return a.defect() < b.defect();
        if (a.lambda0 != b.lambda0) return a.lambda0 < b.lambda0;
        return a.A < b.A;
    });
    return out;
}

} // namespace stripforge
