#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "stripforge/curves.hpp"
#include "stripforge/integrable.hpp"
#include "stripforge/surface.hpp"
#include "stripforge/variational.hpp"

namespace sftest {

using stripforge::Vec3;
using LVec3 = Eigen::Matrix<long double, 3, 1>;

// Centered finite-difference weights (Fornberg) on offsets -r..r.
std::vector<long double> central_weights(int order, int radius);

// Modified Sadowsky energy of the node positions base + eps·dir: curvature,
// torsion and speed come from 9-point stencils (applied to base and dir
// separately); nodes closer than `skip` to an end are left out.
long double position_energy(const std::vector<LVec3>& base, const std::vector<LVec3>& dir, long double eps, double h,
                            double mu, std::size_t skip = 6);

// Node positions γ and displacement u1 T + u2 N + u3 B of the curve with the
// given profile, integrated in long double (RK4, midpoint κ and λ from the jets).
std::pair<std::vector<LVec3>, std::vector<LVec3>> long_double_positions(const stripforge::CurvatureProfile& profile,
                                                                        const stripforge::VariationField& field);

// Central difference (S(γ+εu) − S(γ−εu)) / 2ε over perturbed positions, with
// one Richardson step against step 2ε to remove the ε² term. Needs analytic jets.
double fd_first_variation(const stripforge::CurvatureProfile& profile, const stripforge::VariationField& field,
                          double mu, double eps = 1e-5);

// Latitude/longitude patch of the unit sphere packed into a StripMesh.
stripforge::StripMesh sphere_patch(std::size_t rows, std::size_t cols, double half_angle);

std::vector<Vec3> parse_obj_vertices(const std::string& text);
std::size_t count_obj_faces(const std::string& text);

// Max nodewise distance after the best rigid alignment of b onto a.
double aligned_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

// κ·factor with the frame left untouched.
stripforge::FramedCurve scaled_curvature(const stripforge::FramedCurve& curve, double factor);

std::filesystem::path scratch_dir(const std::string& name);

// Generic force-free and momentum strips used across suites.
stripforge::StripConstruction sample_force_free(double h = stripforge::kDefaultStep, double length = 20.0);
stripforge::StripConstruction sample_momentum(double h = stripforge::kDefaultStep, double length = 20.0);

double relative(double a, double b);

} // namespace sftest
