#include "stripforge/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stripforge/error.hpp"
#include "stripforge/integrable.hpp"
#include "stripforge/io.hpp"
#include "stripforge/pfunctional.hpp"
#include "stripforge/surface.hpp"
#include "stripforge/variational.hpp"

namespace stripforge::cli {

namespace {

using nlohmann::json;

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sci(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

struct Common {
    bool json_out = false;
};

struct ElasticaArgs {
    std::optional<double> l;
    std::optional<double> lambda0;
    double dlambda0 = 0.0;
    double length = 20.0;
    double h = kDefaultStep;
    std::string out;
};

struct BuildArgs {
    std::string kind;
    std::string solution;
    std::optional<double> l;
    double lambda0 = 0.0;
    double dlambda0 = 0.0;
    double length = 20.0;
    double h = kDefaultStep;
    std::optional<double> mu;
    std::optional<double> kappa;
    std::optional<double> lambda;
    double c = 1.0;
    double kappa0 = 1.0;
    double dkappa0 = 0.0;
    std::string out;
};

struct VerifyArgs {
    std::string bundle;
    std::optional<double> mu;
};

struct MeshArgs {
    std::string bundle;
    double width = 0.0;
    std::size_t m = 4;
    std::string out;
    std::string defects;
};

struct PfuncArgs {
    std::string bundle;
    std::optional<double> mu;
    std::vector<double> b0;
};

struct VariationArgs {
    std::uint64_t seed = 1;
    int count = 20;
    double length = 6.0;
    double h = kDefaultStep;
    double mu = 0.5;
};

struct ClosureArgs {
    double lambda0_min = 0.0;
    double lambda0_max = 1.0;
    int lambda0_steps = 5;
    double A_min = 0.0;
    double A_max = 2.0;
    int A_steps = 5;
    double h = 1e-2;
    int q_max = 12;
    double angle_tol = 1e-2;
    double mass_tol = 1e-2;
};

std::vector<double> linspace(double a, double b, int steps)
{
    std::vector<double> v;
    if (steps <= 1) return {a};
    for (int i = 0; i < steps; ++i) v.push_back(a + (b - a) * i / (steps - 1));
    return v;
}

int cmd_elastica(const ElasticaArgs& a, const Common& c, std::ostream& out, std::ostream& err)
{
    if (!a.l) {
        err << "elastica: --l is required\n";
        return kUsageError;
    }
    if (!a.lambda0) {
        err << "elastica: --lambda0 is required\n";
        return kUsageError;
    }
    const auto sol = solve_spherical_elastica(*a.l, *a.lambda0, a.dlambda0, a.length, a.h);
    if (!a.out.empty()) save_elastica(a.out, sol);
    if (c.json_out) {
        json j{{"l", sol.l}, {"A", sol.A}, {"h", sol.h}, {"n", sol.size()},
               {"invariant_violation", sol.invariant_violation()},
               {"period_estimate", sol.period_estimate ? json(*sol.period_estimate) : json(nullptr)}};
        if (!a.out.empty()) j["out"] = a.out;
        out << j.dump(2) << '\n';
    } else {
        out << "A                   " << fmt(sol.A) << '\n';
        out << "period_estimate     " << (sol.period_estimate ? fmt(*sol.period_estimate) : "none") << '\n';
        out << "invariant_violation " << sci(sol.invariant_violation()) << '\n';
        out << "nodes               " << sol.size() << '\n';
        if (!a.out.empty()) out << "written             " << a.out << '\n';
    }
    return kSuccess;
}

ElasticaSolution solution_for_build(const BuildArgs& a, double default_l)
{
    if (!a.solution.empty()) return load_elastica(a.solution);
    return solve_spherical_elastica(a.l.value_or(default_l), a.lambda0, a.dlambda0, a.length, a.h);
}

int cmd_build(const BuildArgs& a, const Common& c, std::ostream& out, std::ostream& err)
{
    StripConstruction strip;
    if (a.kind == "force-free") {
        strip = build_force_free(solution_for_build(a, 1.0));
    } else if (a.kind == "momentum") {
        const auto sol = solution_for_build(a, a.mu ? -*a.mu : 1.0);
        strip = build_momentum(sol, a.mu.value_or(-sol.l));
    } else if (a.kind == "helix") {
        if (!a.kappa || !a.lambda) {
            err << "build --kind helix needs --kappa and --lambda\n";
            return kUsageError;
        }
        strip = build_helix(*a.kappa, *a.lambda, a.length, a.h);
    } else if (a.kind == "cylinder-geodesic") {
        if (!a.lambda) {
            err << "build --kind cylinder-geodesic needs --lambda\n";
            return kUsageError;
        }
        strip = build_cylinder_geodesic(*a.lambda, a.c, a.length, a.h);
    } else if (a.kind == "planar-elastica") {
        if (!a.mu) {
            err << "build --kind planar-elastica needs --mu\n";
            return kUsageError;
        }
        strip = build_planar_elastica(a.kappa0, a.dkappa0, *a.mu, a.length, a.h);
    } else {
        err << "unknown --kind '" << a.kind << "'\n";
        return kUsageError;
    }
    save_bundle(a.out, strip);
    if (c.json_out) {
        out << json{{"kind", to_string(strip.kind)},
                    {"mu", strip.mu},
                    {"l", number_or_null(strip.l)},
                    {"A", number_or_null(strip.A)},
                    {"h", strip.profile.h},
                    {"n", strip.profile.size()},
                    {"length", strip.profile.length()},
                    {"out", a.out}}
                   .dump(2)
            << '\n';
    } else {
        out << "kind    " << to_string(strip.kind) << '\n';
        out << "mu      " << fmt(strip.mu) << '\n';
        out << "nodes   " << strip.profile.size() << '\n';
        out << "length  " << fmt(strip.profile.length()) << '\n';
        out << "written " << a.out << '\n';
    }
    return kSuccess;
}

int cmd_verify(const VerifyArgs& a, const Common& c, std::ostream& out)
{
    const auto tol = tolerances_from_env();
    const auto b = load_bundle(a.bundle);
    const double mu = a.mu.value_or(b.mu);
    const auto report = verify_strip(b.curve.profile, b.curve, mu, tol);
    out << (c.json_out ? report.to_json() + "\n" : report.to_text());
    return report.certified ? kSuccess : kCertificationFailed;
}

int cmd_mesh(const MeshArgs& a, const Common& c, std::ostream& out)
{
    const auto b = load_bundle(a.bundle);
    const auto mesh = build_mesh(b.curve, a.width, a.m);
    {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + a.out);
        write_obj(f, mesh);
    }
    if (!a.defects.empty()) {
        std::ofstream f(a.defects);
        if (!f) throw std::runtime_error("cannot write " + a.defects);
        f << export_defect_csv(mesh, b.curve.h);
    }
    const auto K = gauss_curvature_probe(mesh);
    const double kmax = max_abs_gauss(K, mesh);
    if (c.json_out) {
        out << json{{"vertices", mesh.vertices.size()},
                    {"rows", mesh.rows},
                    {"cols", mesh.cols},
                    {"developability_defect", mesh.developability_defect},
                    {"max_abs_gauss", kmax},
                    {"regression_bound", number_or_null(regression_bound(b.curve.profile))},
                    {"out", a.out}}
                   .dump(2)
            << '\n';
    } else {
        out << "vertices              " << mesh.vertices.size() << '\n';
        out << "developability_defect " << sci(mesh.developability_defect) << '\n';
        out << "max_abs_gauss         " << sci(kmax) << '\n';
        out << "written               " << a.out << '\n';
    }
    return kSuccess;
}

int cmd_energy(const VerifyArgs& a, const Common& c, std::ostream& out)
{
    const auto b = load_bundle(a.bundle);
    const double mu = a.mu.value_or(b.mu);
    const auto e = sadowsky_energy(b.curve.profile, mu, b.curve.speed);
    if (c.json_out)
        out << json{{"S_mu", e.S_mu}, {"mu", mu}, {"length", e.length}}.dump(2) << '\n';
    else
        out << "S_mu    " << fmt(e.S_mu) << "\nmu      " << fmt(mu) << "\nlength  " << fmt(e.length) << '\n';
    return kSuccess;
}

int cmd_pfunc(const PfuncArgs& a, const Common& c, std::ostream& out, std::ostream& err)
{
    const auto b = load_bundle(a.bundle);
    const double mu = a.mu.value_or(b.mu);
    Vec3 multiplier;
    if (!a.b0.empty()) {
        if (a.b0.size() != 3) {
            err << "--b0 takes three components\n";
            return kUsageError;
        }
        multiplier = Vec3(a.b0[0], a.b0[1], a.b0[2]);
    } else {
        const auto prof = differentiate_profile(b.curve.profile);
        multiplier = multiplier_from_force(force_field(prof, mu, b.curve).mean);
    }
    const auto tangent = tangent_image(b.curve);
    const auto rep = p_functional(tangent, multiplier, mu);
    const auto energy = sadowsky_energy(b.curve.profile, mu);
    const double rel = std::abs(rep.P - energy.S_mu) / std::max(1e-300, std::abs(energy.S_mu));
    double kdev = 0.0;
    for (std::size_t i = 0; i < rep.kappa_opt.size(); ++i)
        kdev = std::max(kdev, std::abs(rep.kappa_opt[i] - b.curve.profile.kappa[i]) / b.curve.profile.kappa[i]);
    if (c.json_out) {
        out << json{{"P", rep.P},
                    {"S_mu", energy.S_mu},
                    {"mu", mu},
                    {"b0", {multiplier.x(), multiplier.y(), multiplier.z()}},
                    {"relative_gap", rel},
                    {"kappa_opt_relative_deviation", kdev}}
                   .dump(2)
            << '\n';
    } else {
        out << "P                            " << fmt(rep.P) << '\n';
        out << "S_mu                         " << fmt(energy.S_mu) << '\n';
        out << "relative_gap                 " << sci(rel) << '\n';
        out << "kappa_opt_relative_deviation " << sci(kdev) << '\n';
    }
    return kSuccess;
}

int cmd_variation(const VariationArgs& a, const Common& c, std::ostream& out)
{
    const auto tol = tolerances_from_env();
    const auto profile = random_profile(a.seed, a.length, a.h);
    const auto curve = integrate_frame(profile);
    json fields = json::array();
    double worst = 0.0;
    for (int k = 0; k < a.count; ++k) {
        const auto field = random_compact_field(profile, a.seed * 1000003ULL + static_cast<std::uint64_t>(k), 0.05 * a.length);
        const auto fv = first_variation(profile, curve, field, a.mu);
        const double rel = std::abs(fv.dS - fv.dS_direct) / std::max(1e-300, std::abs(fv.dS_direct));
        worst = std::max(worst, rel);
        fields.push_back({{"dS", fv.dS}, {"dS_direct", fv.dS_direct}, {"relative_difference", rel}});
    }
    // b0' against f1 N + f2 B with b0 differentiated along the curve.
    const auto force = force_field(profile, a.mu, curve);
    const auto res = el_residuals(profile, a.mu);
    std::array<std::vector<double>, 3> comp;
    for (int d = 0; d < 3; ++d) {
        comp[d].resize(profile.size());
        for (std::size_t i = 0; i < profile.size(); ++i) comp[d][i] = force.b0[i][d];
        comp[d] = finite_difference(comp[d], profile.h, 1);
    }
    double identity = 0.0;
    for (std::size_t i = kBoundaryZone; i + kBoundaryZone < profile.size(); ++i) {
        const Vec3 db(comp[0][i], comp[1][i], comp[2][i]);
        identity = std::max(identity, (db - res.f1[i] * curve.N[i] - res.f2[i] * curve.B[i]).norm());
    }
    const bool ok = worst <= tol.el && identity <= tol.drift;
    if (c.json_out) {
        out << json{{"seed", a.seed},
                    {"fields", fields},
                    {"max_relative_difference", worst},
                    {"force_identity_sup", identity},
                    {"passed", ok}}
                   .dump(2)
            << '\n';
    } else {
        out << "seed                    " << a.seed << '\n';
        out << "fields                  " << a.count << '\n';
        out << "max_relative_difference " << sci(worst) << '\n';
        out << "force_identity_sup      " << sci(identity) << '\n';
        out << "passed                  " << (ok ? "yes" : "no") << '\n';
    }
    return ok ? kSuccess : kCertificationFailed;
}

int cmd_closure(const ClosureArgs& a, const Common& c, std::ostream& out)
{
    ClosureOptions opt;
    opt.h = a.h;
    opt.q_max = a.q_max;
    opt.angle_tol = a.angle_tol;
    opt.mass_tol = a.mass_tol;
    const auto cands =
        closure_search(linspace(a.lambda0_min, a.lambda0_max, a.lambda0_steps), linspace(a.A_min, a.A_max, a.A_steps), opt);
    if (c.json_out) {
        json arr = json::array();
        for (const auto& k : cands)
            arr.push_back({{"lambda0", k.lambda0},
                           {"A", k.A},
                           {"period", k.period},
                           {"rotation_angle", k.rotation_angle},
                           {"p", k.p},
                           {"q", k.q},
                           {"angle_defect", k.angle_defect},
                           {"mass_defect", k.mass_defect}});
        out << json{{"candidates", arr}}.dump(2) << '\n';
    } else {
        out << "lambda0,A,period,p,q,angle_defect,mass_defect\n";
        for (const auto& k : cands)
            out << fmt(k.lambda0) << ',' << fmt(k.A) << ',' << fmt(k.period) << ',' << k.p << ',' << k.q << ','
                << sci(k.angle_defect) << ',' << sci(k.mass_defect) << '\n';
    }
    return kSuccess;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Elastic developable strips: construction, verification and meshing", "stripforge"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    Common common;
    app.add_flag("--json", common.json_out, "Machine-readable output");

    ElasticaArgs ea;
    auto* el = app.add_subcommand("elastica", "Solve the spherical elastica ODE");
    el->add_option("--l", ea.l, "Lagrange multiplier l");
    el->add_option("--lambda0", ea.lambda0, "Initial geodesic curvature");
    el->add_option("--dlambda0", ea.dlambda0, "Initial derivative");
    el->add_option("--length", ea.length, "Parameter length")->check(CLI::PositiveNumber);
    el->add_option("--h", ea.h, "Step size")->check(CLI::PositiveNumber);
    el->add_option("--out", ea.out, "Solution CSV path");
    el->add_flag("--json", common.json_out);

    BuildArgs ba;
    auto* bu = app.add_subcommand("build", "Construct a strip bundle");
    bu->add_option("--kind", ba.kind, "force-free | momentum | helix | cylinder-geodesic | planar-elastica")
        ->required()
        ->check(CLI::IsMember({"force-free", "momentum", "helix", "cylinder-geodesic", "planar-elastica"}));
    bu->add_option("--solution", ba.solution, "Elastica solution CSV (from `elastica --out`)");
    bu->add_option("--l", ba.l, "Elastica multiplier when solving inline");
    bu->add_option("--lambda0", ba.lambda0, "Elastica initial value when solving inline");
    bu->add_option("--dlambda0", ba.dlambda0, "Elastica initial derivative when solving inline");
    bu->add_option("--length", ba.length, "Elastica parameter length, or strip length for closed-form kinds")
        ->check(CLI::PositiveNumber);
    bu->add_option("--h", ba.h, "Step size")->check(CLI::PositiveNumber);
    bu->add_option("--mu", ba.mu, "Strip multiplier (momentum, planar-elastica)");
    bu->add_option("--kappa", ba.kappa, "Helix curvature")->check(CLI::PositiveNumber);
    bu->add_option("--lambda", ba.lambda, "Helix or cylinder-geodesic modified torsion");
    bu->add_option("--c", ba.c, "Cylinder-geodesic scale")->check(CLI::PositiveNumber);
    bu->add_option("--kappa0", ba.kappa0, "Planar elastica initial curvature")->check(CLI::PositiveNumber);
    bu->add_option("--dkappa0", ba.dkappa0, "Planar elastica initial derivative");
    bu->add_option("--out", ba.out, "Bundle CSV path")->required();
    bu->add_flag("--json", common.json_out);

    VerifyArgs va;
    auto* ve = app.add_subcommand("verify", "Certify a strip bundle");
    ve->add_option("--bundle", va.bundle, "Bundle CSV path")->required();
    ve->add_option("--mu", va.mu, "Override the stored multiplier");
    ve->add_flag("--json", common.json_out);

    MeshArgs ma;
    auto* me = app.add_subcommand("mesh", "Mesh the rectifying strip and export OBJ");
    me->add_option("--bundle", ma.bundle, "Bundle CSV path")->required();
    me->add_option("--width", ma.width, "Half-width w")->required()->check(CLI::PositiveNumber);
    me->add_option("--m", ma.m, "Ruling samples per side")->check(CLI::PositiveNumber);
    me->add_option("--out", ma.out, "OBJ path")->required();
    me->add_option("--defects", ma.defects, "Optional s,u,defect CSV path");
    me->add_flag("--json", common.json_out);

    VerifyArgs na;
    auto* en = app.add_subcommand("energy", "Modified Sadowsky energy of a bundle");
    en->add_option("--bundle", na.bundle, "Bundle CSV path")->required();
    en->add_option("--mu", na.mu, "Override the stored multiplier");
    en->add_flag("--json", common.json_out);

    PfuncArgs pa;
    auto* pf = app.add_subcommand("pfunc", "P-functional on the tangent image of a bundle");
    pf->add_option("--bundle", pa.bundle, "Bundle CSV path")->required();
    pf->add_option("--mu", pa.mu, "Override the stored multiplier");
    pf->add_option("--b0", pa.b0, "Multiplier vector (three numbers); default 2x the mean force vector")
        ->expected(3)
        ->delimiter(',');
    pf->add_flag("--json", common.json_out);

    VariationArgs vca;
    auto* vc = app.add_subcommand("variation-check", "First-variation consistency on random profiles");
    vc->add_option("--seed", vca.seed, "RNG seed");
    vc->add_option("--count", vca.count, "Number of random compact fields")->check(CLI::PositiveNumber);
    vc->add_option("--length", vca.length, "Profile length")->check(CLI::PositiveNumber);
    vc->add_option("--h", vca.h, "Step size")->check(CLI::PositiveNumber);
    vc->add_option("--mu", vca.mu, "Multiplier");
    vc->add_flag("--json", common.json_out);

    ClosureArgs ca;
    auto* cs = app.add_subcommand("closure-search", "Scan force-free strips for near-closed candidates");
    cs->add_option("--lambda0-min", ca.lambda0_min);
    cs->add_option("--lambda0-max", ca.lambda0_max);
    cs->add_option("--lambda0-steps", ca.lambda0_steps)->check(CLI::PositiveNumber);
    cs->add_option("--A-min", ca.A_min);
    cs->add_option("--A-max", ca.A_max);
    cs->add_option("--A-steps", ca.A_steps)->check(CLI::PositiveNumber);
    cs->add_option("--h", ca.h)->check(CLI::PositiveNumber);
    cs->add_option("--q-max", ca.q_max)->check(CLI::PositiveNumber);
    cs->add_option("--angle-tol", ca.angle_tol)->check(CLI::PositiveNumber);
    cs->add_option("--mass-tol", ca.mass_tol)->check(CLI::PositiveNumber);
    cs->add_flag("--json", common.json_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*el) return cmd_elastica(ea, common, out, err);
        if (*bu) return cmd_build(ba, common, out, err);
        if (*ve) return cmd_verify(va, common, out);
        if (*me) return cmd_mesh(ma, common, out);
        if (*en) return cmd_energy(na, common, out);
        if (*pf) return cmd_pfunc(pa, common, out, err);
        if (*vc) return cmd_variation(vca, common, out);
        if (*cs) return cmd_closure(ca, common, out);
    } catch (const StripError& e) {
        err << "error: " << e.what() << '\n';
        if (e.code() == ErrorCode::InvalidArgument) return kUsageError;
        return kDomainError;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    err << app.help();
    return kUsageError;
}

} // namespace stripforge::cli
