#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "stripforge/curves.hpp"
#include "stripforge/integrable.hpp"

namespace stripforge {

inline constexpr const char* kCurveHeader = "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,lambda";
inline constexpr const char* kProfileHeader = "s,kappa,lambda";
inline constexpr const char* kElasticaHeader = "t,lambda,dlambda,d2lambda,d3lambda";

/// Curve sample CSV (arclength grid). Values are written with 17 significant
/// digits so a write/read round trip is exact.
void write_curve_csv(std::ostream& os, const FramedCurve& curve);
/// Throws FormatError on a wrong header, malformed numbers or a non-uniform grid.
FramedCurve read_curve_csv(std::istream& is);

void write_profile_csv(std::ostream& os, const CurvatureProfile& profile);
CurvatureProfile read_profile_csv(std::istream& is);

void write_elastica_csv(std::ostream& os, const ElasticaSolution& sol);
/// Reads the CSV; l is taken from the argument, jets are recomputed.
ElasticaSolution read_elastica_csv(std::istream& is, double l);

/// `<path>.meta.json`
std::filesystem::path sidecar_path(const std::filesystem::path& path);

void save_elastica(const std::filesystem::path& path, const ElasticaSolution& sol);
ElasticaSolution load_elastica(const std::filesystem::path& path);

/// Strip bundle: curve CSV plus sidecar metadata {kind, mu, l, A, h, n}.
struct StripBundle {
    StripKind kind = StripKind::helix;
    double mu = 0.0;
    double l = 0.0;
    double A = 0.0;
    double h = 0.0;
    std::size_t n = 0;
    std::string provenance;
    FramedCurve curve;
};

void save_bundle(const std::filesystem::path& path, const StripConstruction& strip);
StripBundle load_bundle(const std::filesystem::path& path);

} // namespace stripforge
