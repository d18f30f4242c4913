#pragma once

#include <vector>

#include "hsurf/discrete_surface.hpp"

namespace hsurf {

/// Shortest grid-graph distance from a set of source vertices, Dijkstra
/// on the 8-connected metric edges followed by one corrective triangle
/// sweep (a single fast-marching-style relaxation pass in distance order,
/// which removes most of the lattice-direction bias).
std::vector<double> geodesic_distance(const DiscreteSurface& surface,
                                      const std::vector<int>& sources);

/// Distance to the boundary vertex set; throws GeometryError on closed
/// surfaces.
std::vector<double> boundary_distance(const DiscreteSurface& surface);

/// max over vertices of the distance to the boundary.
double intrinsic_radius(const DiscreteSurface& surface);

} // namespace hsurf
