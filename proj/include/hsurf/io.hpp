#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hsurf/discrete_surface.hpp"
#include "hsurf/flat_curve.hpp"
#include "hsurf/profile_curve.hpp"
#include "hsurf/types.hpp"

namespace hsurf {

/// 17-significant-digit formatting; all text artifacts use it so that
/// identical runs are byte-identical.
std::string format_double(double v);

void write_text(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// (s, theta, x, y) table of a planar generating curve.
void write_curve_csv(const std::string& path, const PlanarCurveSolution& sol);
/// (s, x, z, theta) table of a meridian profile.
void write_profile_csv(const std::string& path, const ProfileCurve& prof);

/// Standalone polyline plot.
void write_svg_polyline(const std::string& path, const std::vector<Vec2>& points,
                        int pixel_size = 640);

void write_obj(const std::string& path, const DiscreteSurface& surface);

/// Per-vertex scalar fields next to the mesh (columns: x,y,z then fields).
void write_vertex_fields_csv(const std::string& path, const DiscreteSurface& surface,
                             const std::map<std::string, std::vector<double>>& fields);

/// Triplet text export (row col value per line) for external verification.
void write_matrix_triplets(const std::string& path, const SparseMat& m);

} // namespace hsurf
