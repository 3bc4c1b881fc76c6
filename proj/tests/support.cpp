#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace sftest {

using namespace stripforge;

std::vector<long double> central_weights(int order, int radius)
{
    const int n = 2 * radius + 1;
    std::vector<long double> x(n);
    for (int i = 0; i < n; ++i) x[i] = i - radius;
    // c[j][k]: weight of node j for derivative k.
    std::vector<std::vector<long double>> c(n, std::vector<long double>(order + 1, 0.0L));
    long double c1 = 1.0L, c4 = x[0];
    c[0][0] = 1.0L;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        long double c2 = 1.0L;
        const long double c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            const long double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<long double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[j][order];
    return w;
}

long double position_energy(const std::vector<LVec3>& base, const std::vector<LVec3>& dir, long double eps, double h,
                            double mu, std::size_t skip)
{
    constexpr int r = 4;
    static const auto w1 = central_weights(1, r);
    static const auto w2 = central_weights(2, r);
    static const auto w3 = central_weights(3, r);
    const long double hl = h;
    skip = std::max<std::size_t>(skip, r);
    auto stencil = [&](const std::vector<LVec3>& pts, std::size_t i, const std::vector<long double>& w) {
        LVec3 d = LVec3::Zero();
        for (int k = -r; k <= r; ++k) d += w[k + r] * pts[i + k];
        return d;
    };
    long double total = 0.0L;
    for (std::size_t i = skip; i + skip < base.size(); ++i) {
        LVec3 d1 = stencil(base, i, w1), d2 = stencil(base, i, w2), d3 = stencil(base, i, w3);
        if (!dir.empty()) {
            d1 += eps * stencil(dir, i, w1);
            d2 += eps * stencil(dir, i, w2);
            d3 += eps * stencil(dir, i, w3);
        }
        d1 /= hl;
        d2 /= hl * hl;
        d3 /= hl * hl * hl;
        const LVec3 c = d1.cross(d2);
        const long double v = d1.norm();
        const long double cn2 = c.squaredNorm();
        const long double kappa = std::sqrt(cn2) / (v * v * v);
        const long double tau = c.dot(d3) / cn2;
        const long double lam = tau / kappa;
        const long double W = 1.0L + lam * lam;
        total += (kappa * kappa * W * W - mu) * v;
    }
    return total * hl;
}

namespace {

struct LFrame {
    LVec3 g, T, N, B;
};

long double taylor(const CurvatureProfile& p, bool kappa, std::size_t i, long double ds)
{
    const auto& v = kappa ? p.kappa : p.lambda;
    const auto& d = kappa ? p.dkappa : p.dlambda;
    return v[i] + ds * (d[0][i] + ds / 2.0L * (d[1][i] + ds / 3.0L * d[2][i]));
}

LFrame rate(const LFrame& f, long double k, long double l)
{
    return {f.T, k * f.N, -k * f.T + k * l * f.B, -k * l * f.N};
}

LFrame axpy(const LFrame& f, long double a, const LFrame& d)
{
    return {f.g + a * d.g, f.T + a * d.T, f.N + a * d.N, f.B + a * d.B};
}

} // namespace

std::pair<std::vector<LVec3>, std::vector<LVec3>> long_double_positions(const CurvatureProfile& p,
                                                                          const VariationField& field)
{
    const long double h = p.h;
    const std::size_t n = p.size();
    LFrame f{LVec3::Zero(), LVec3::UnitX(), LVec3::UnitY(), LVec3::UnitZ()};
    std::vector<LVec3> base(n), dir(n);
    for (std::size_t i = 0;; ++i) {
        const long double u1 = field.u1[i].value(), u2 = field.u2[i].value(), u3 = field.u3[i].value();
        base[i] = f.g;
        dir[i] = u1 * f.T + u2 * f.N + u3 * f.B;
        if (i + 1 == n) break;
        const long double k0 = p.kappa[i], l0 = p.lambda[i];
        const long double km = taylor(p, true, i, h / 2), lm = taylor(p, false, i, h / 2);
        const long double k1 = p.kappa[i + 1], l1 = p.lambda[i + 1];
        const LFrame a = rate(f, k0, l0);
        const LFrame b = rate(axpy(f, h / 2, a), km, lm);
        const LFrame c = rate(axpy(f, h / 2, b), km, lm);
        const LFrame d = rate(axpy(f, h, c), k1, l1);
        f.g += h / 6 * (a.g + 2 * b.g + 2 * c.g + d.g);
        f.T += h / 6 * (a.T + 2 * b.T + 2 * c.T + d.T);
        f.N += h / 6 * (a.N + 2 * b.N + 2 * c.N + d.N);
        f.B += h / 6 * (a.B + 2 * b.B + 2 * c.B + d.B);
        f.T.normalize();
        f.N -= f.N.dot(f.T) * f.T;
        f.N.normalize();
        f.B = f.T.cross(f.N);
    }
    return {std::move(base), std::move(dir)};
}

double fd_first_variation(const CurvatureProfile& profile, const VariationField& field, double mu, double eps)
{
    const auto [base, dir] = long_double_positions(profile, field);
    auto central = [&](long double e) {
        const long double sp = position_energy(base, dir, e, profile.h, mu);
        const long double sm = position_energy(base, dir, -e, profile.h, mu);
        return static_cast<double>((sp - sm) / (2.0L * e));
    };
    const double d1 = central(eps);
    const double d2 = central(2.0L * eps);
    return (4.0 * d1 - d2) / 3.0;
}

StripMesh sphere_patch(std::size_t rows, std::size_t cols, double half_angle)
{
    StripMesh m;
    m.rows = rows;
    m.cols = cols;
    m.vertices.resize(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const double th = -half_angle + 2.0 * half_angle * static_cast<double>(i) / static_cast<double>(rows - 1);
        for (std::size_t j = 0; j < cols; ++j) {
            const double ph = -half_angle + 2.0 * half_angle * static_cast<double>(j) / static_cast<double>(cols - 1);
            m.vertex(i, j) = Vec3(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), std::sin(th));
        }
    }
    return m;
}

std::vector<Vec3> parse_obj_vertices(const std::string& text)
{
    std::vector<Vec3> out;
    std::istringstream is(text);
    std::string tag;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        ls >> tag;
        if (tag != "v") continue;
        double x, y, z;
        ls >> x >> y >> z;
        out.emplace_back(x, y, z);
    }
    return out;
}

std::size_t count_obj_faces(const std::string& text)
{
    std::size_t count = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind("f ", 0) == 0) ++count;
    return count;
}

double aligned_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        ca += a[i];
        cb += b[i];
    }
    ca /= static_cast<double>(n);
    cb /= static_cast<double>(n);
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < n; ++i) H += (b[i] - cb) * (a[i] - ca).transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) D(2, 2) = -1.0;
    const Eigen::Matrix3d R = svd.matrixV() * D * svd.matrixU().transpose();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, (R * (b[i] - cb) + ca - a[i]).norm());
    return worst;
}

FramedCurve scaled_curvature(const FramedCurve& curve, double factor)
{
    FramedCurve c = curve;
    for (auto& k : c.profile.kappa) k *= factor;
    c.profile.jet_source = JetSource::none;
    for (auto& d : c.profile.dkappa) d.clear();
    for (auto& d : c.profile.dlambda) d.clear();
    return c;
}

std::filesystem::path scratch_dir(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("stripforge_" + name);
    std::filesystem::create_directories(p);
    return p;
}

StripConstruction sample_force_free(double h, double length)
{
    return build_force_free(solve_spherical_elastica(1.0, 0.6, 0.2, length, h));
}

StripConstruction sample_momentum(double h, double length)
{
    return build_momentum(solve_spherical_elastica(4.0, 1.7, 0.0, length, h), -4.0);
}

double relative(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace sftest
