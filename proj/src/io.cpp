#include "stripforge/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "stripforge/error.hpp"

namespace stripforge {

namespace {

using Row = std::vector<double>;

std::string trim(std::string s)
{
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
    return s.substr(b);
}

std::vector<Row> read_table(std::istream& is, const std::string& header)
{
    std::string line;
    if (!std::getline(is, line)) throw FormatError("empty file, expected header '" + header + "'");
    if (trim(line) != header) throw FormatError("bad header '" + trim(line) + "', expected '" + header + "'");
    const std::size_t cols = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        Row row;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell = trim(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v))
                throw FormatError("line " + std::to_string(lineno) + ": malformed number '" + cell + "'");
            row.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (row.size() != cols)
            throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(cols) + " fields, got " +
                              std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw FormatError("need at least 2 data rows");
    return rows;
}

double uniform_spacing(const std::vector<Row>& rows)
{
    const double h = rows[1][0] - rows[0][0];
    if (!(h > 0.0)) throw FormatError("grid is not increasing");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double expect = rows[0][0] + h * static_cast<double>(i);
        if (std::abs(rows[i][0] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw FormatError("grid is not uniform at row " + std::to_string(i + 1));
    }
    return h;
}

void put(std::ostream& os, const std::vector<double>& vals)
{
    char buf[40];
    for (std::size_t k = 0; k < vals.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", vals[k]);
        if (k) os << ',';
        os << buf;
    }
    os << '\n';
}

double json_number(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key)) throw FormatError(std::string("metadata is missing '") + key + "'");
    const auto& v = j.at(key);
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!v.is_number()) throw FormatError(std::string("metadata field '") + key + "' is not a number");
    return v.get<double>();
}

nlohmann::json read_json(const std::filesystem::path& p)
{
    std::ifstream in(p);
    if (!in) throw FormatError("cannot open " + p.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(p.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& p, const nlohmann::json& j)
{
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << j.dump(2) << '\n';
}

} // namespace

void write_curve_csv(std::ostream& os, const FramedCurve& curve)
{
    os << kCurveHeader << '\n';
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& g = curve.gamma[i];
        const auto& T = curve.T[i];
        const auto& N = curve.N[i];
        const auto& B = curve.B[i];
        put(os, {curve.h * static_cast<double>(i), g.x(), g.y(), g.z(), T.x(), T.y(), T.z(), N.x(), N.y(), N.z(), B.x(),
                 B.y(), B.z(), curve.profile.kappa[i], curve.profile.lambda[i]});
    }
}

FramedCurve read_curve_csv(std::istream& is)
{
    const auto rows = read_table(is, kCurveHeader);
    FramedCurve c;
    c.h = uniform_spacing(rows);
    c.profile.h = c.h;
    for (const auto& r : rows) {
        c.gamma.emplace_back(r[1], r[2], r[3]);
        c.T.emplace_back(r[4], r[5], r[6]);
        c.N.emplace_back(r[7], r[8], r[9]);
        c.B.emplace_back(r[10], r[11], r[12]);
        c.speed.push_back(1.0);
        c.profile.kappa.push_back(r[13]);
        c.profile.lambda.push_back(r[14]);
    }
    return c;
}

void write_profile_csv(std::ostream& os, const CurvatureProfile& profile)
{
    os << kProfileHeader << '\n';
    for (std::size_t i = 0; i < profile.size(); ++i) put(os, {profile.s(i), profile.kappa[i], profile.lambda[i]});
}

CurvatureProfile read_profile_csv(std::istream& is)
{
    const auto rows = read_table(is, kProfileHeader);
    CurvatureProfile p;
    p.h = uniform_spacing(rows);
    for (const auto& r : rows) {
        p.kappa.push_back(r[1]);
        p.lambda.push_back(r[2]);
    }
    return p;
}

void write_elastica_csv(std::ostream& os, const ElasticaSolution& sol)
{
    os << kElasticaHeader << '\n';
    for (std::size_t i = 0; i < sol.size(); ++i)
        put(os, {sol.h * static_cast<double>(i), sol.lambda[i], sol.dlambda[i], sol.d2lambda[i], sol.d3lambda[i]});
}

ElasticaSolution read_elastica_csv(std::istream& is, double l)
{
    const auto rows = read_table(is, kElasticaHeader);
    const double h = uniform_spacing(rows);
    std::vector<double> lam, dlam;
    for (const auto& r : rows) {
        lam.push_back(r[1]);
        dlam.push_back(r[2]);
    }
    return elastica_from_samples(l, h, std::move(lam), std::move(dlam));
}

std::filesystem::path sidecar_path(const std::filesystem::path& path)
{
    return std::filesystem::path(path.string() + ".meta.json");
}

void save_elastica(const std::filesystem::path& path, const ElasticaSolution& sol)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_elastica_csv(out, sol);
    nlohmann::json j;
    j["kind"] = "spherical-elastica";
    j["l"] = sol.l;
    j["A"] = sol.A;
    j["h"] = sol.h;
    j["n"] = sol.size();
    if (sol.period_estimate) j["period_estimate"] = *sol.period_estimate;
    else j["period_estimate"] = nullptr;
    write_json(sidecar_path(path), j);
}

ElasticaSolution load_elastica(const std::filesystem::path& path)
{
    const auto meta = read_json(sidecar_path(path));
    const double l = json_number(meta, "l");
    if (!std::isfinite(l)) throw FormatError("elastica metadata has no multiplier l");
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_elastica_csv(in, l);
}

void save_bundle(const std::filesystem::path& path, const StripConstruction& strip)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_curve_csv(out, strip.frame);
    nlohmann::json j;
    j["kind"] = to_string(strip.kind);
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    j["mu"] = strip.mu;
    j["l"] = num(strip.l);
    j["A"] = num(strip.A);
    j["h"] = strip.profile.h;
    j["n"] = strip.profile.size();
    j["provenance"] = strip.provenance;
    write_json(sidecar_path(path), j);
}

StripBundle load_bundle(const std::filesystem::path& path)
{
    StripBundle b;
    const auto meta = read_json(sidecar_path(path));
    if (!meta.contains("kind") || !meta["kind"].is_string()) throw FormatError("metadata is missing 'kind'");
    try {
        b.kind = strip_kind_from_string(meta["kind"].get<std::string>());
    } catch (const StripError& e) {
        throw FormatError(e.what());
    }
    b.mu = json_number(meta, "mu");
    if (!std::isfinite(b.mu)) throw FormatError("metadata field 'mu' must be finite");
    b.l = json_number(meta, "l");
    b.A = json_number(meta, "A");
    b.h = json_number(meta, "h");
    const double n = json_number(meta, "n");
    if (meta.contains("provenance") && meta["provenance"].is_string()) b.provenance = meta["provenance"];
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    b.curve = read_curve_csv(in);
    if (static_cast<double>(b.curve.size()) != n) throw FormatError("metadata node count does not match the CSV");
    b.n = b.curve.size();
    if (std::abs(b.curve.h - b.h) > 1e-9 * b.h) throw FormatError("metadata h does not match the CSV grid");
    return b;
}

} // namespace stripforge
