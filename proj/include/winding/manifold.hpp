#pragma once

// Sampled curves in R^2 and triangulated surfaces in R^3 with unit normals,
// measure weights and an intrinsic adjacency graph.

#include "winding/curve.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace winding {

struct Edge {
    std::size_t to;
    double length;
};

enum class Topology { Path, Cycle, Mesh };

/// Curves are embedded in the z = 0 plane so both cases share one layout.
struct SampledManifold {
    int dim = 1;
    Topology topology = Topology::Path;
    std::vector<Eigen::Vector3d> points;
    std::vector<Eigen::Vector3d> normals;
    std::vector<double> weights;
    std::vector<std::vector<Edge>> adjacency;
    /// Triangles (0-based) for surfaces; empty for curves.
    std::vector<std::array<std::size_t, 3>> triangles;
    /// Vertices on the boundary (path ends, mesh boundary edges).
    std::vector<char> boundary;

    std::size_t size() const { return points.size(); }

    /// Checks unit normals, positive weights, edge lengths and connectivity.
    /// Throws InvalidArgument or ConnectivityError.
    void validate() const;

    /// Largest Euclidean distance between two samples (exact for n <= 4096,
    /// otherwise within a factor of two from a double sweep).
    double ambient_diameter() const;

    double median_edge_length() const;
};

/// Open polyline (or closed if `closed`), weights = half adjacent segments.
SampledManifold manifold_from_polyline(const std::vector<Eigen::Vector2d>& points,
                                       const std::vector<Eigen::Vector2d>& normals, bool closed);

SampledManifold manifold_from_curve(const SampledCurve& curve);

/// Triangle mesh; normals are area-weighted face normals (right-hand rule
/// on the face order), weights are one third of incident triangle areas.
SampledManifold manifold_from_mesh(const std::vector<Eigen::Vector3d>& vertices,
                                   const std::vector<std::array<std::size_t, 3>>& faces);

/// "v x y z" and "f i j k" lines (1-based), '#' comments, blank lines.
/// Throws ParseError with the offending line.
SampledManifold read_mesh_text(std::istream& in);

void write_mesh_text(std::ostream& out, const SampledManifold& mesh);

/// Reads a curve CSV or a mesh text file, detected from the first line.
SampledManifold read_manifold_file(const std::string& path);

/// Unit circle with n equally spaced samples, outward normals.
SampledManifold make_circle(std::size_t n, double radius = 1.0);

/// Straight segment [0, length] x {0} with n samples, normal (0, 1).
SampledManifold make_segment(std::size_t n, double length = 1.0);

/// Square [-half, half]^2 in the z = 0 plane, n x n vertices, normal e_z.
SampledManifold make_flat_patch(std::size_t n, double half = 1.0);

/// Unit icosphere: 10 * 4^subdivisions + 2 vertices.
SampledManifold make_icosphere(std::size_t subdivisions, double radius = 1.0);

/// Intrinsic shortest-path distances from `source`. Curves use arclength
/// along the path or cycle; meshes use Dijkstra with planar unfolding of
/// each triangle. Throws ConnectivityError on an unreachable sample.
std::vector<double> geodesic_distances(const SampledManifold& mani, std::size_t source);

} // namespace winding
