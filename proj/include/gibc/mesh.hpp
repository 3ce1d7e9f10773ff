#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gibc {

using Vec3 = Eigen::Vector3d;

// Maps a point near the analytic surface back onto it (used when refining
// meshes of spheres and tori so midpoints land on the true geometry).
using SurfaceSnap = std::function<Vec3(const Vec3&)>;

// Oriented closed triangulation of the scatterer boundary. Triangles wind
// counterclockwise seen from outside, so vertex-winding normals point into
// the exterior domain. Edges carry a canonical global orientation (lower to
// higher vertex index); triangle_to_edges records, per triangle, the global
// edge index of each local edge together with the sign relating the local
// (winding-induced) orientation to the global one.
struct TriangleSurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> edges;

    struct EdgeRef {
        int edge = -1;
        int sign = 0; // +1 if local orientation matches global, -1 otherwise
    };
    // Local edge k of triangle (v0,v1,v2) is the edge opposite vertex k:
    // edge 0 = (v1,v2), edge 1 = (v2,v0), edge 2 = (v0,v1).
    std::vector<std::array<EdgeRef, 3>> triangle_to_edges;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int euler_characteristic() const {
        return vertex_count() - edge_count() + triangle_count();
    }

    Vec3 triangle_centroid(int t) const;
    // Unnormalized winding normal; its norm is twice the triangle area.
    Vec3 triangle_normal_scaled(int t) const;
    Vec3 triangle_unit_normal(int t) const;
    double triangle_area(int t) const;
    double edge_length(int e) const;

    // Largest edge length; the mesh width h reported by convergence studies.
    double max_edge_length() const;
    double total_area() const;
    double diameter_estimate() const;

    // True when every edge is shared by exactly two triangles with opposite
    // induced orientations.
    bool is_closed() const;
};

// Builds the edge table and triangle_to_edges from vertices/triangles.
void index_edges(TriangleSurfaceMesh& mesh);

// Throws if the mesh violates its structural invariants (watertightness,
// degenerate triangles). `expect_closed` can be disabled for open patches
// used in tests.
void validate_mesh(const TriangleSurfaceMesh& mesh, bool expect_closed = true);

// Icosahedron subdivided `level` times, vertices projected to the sphere of
// the given radius, outward orientation. level <= 7 guards memory.
TriangleSurfaceMesh generate_icosphere(int level, double radius);

// Structured torus triangulation: tube of radius minor_radius revolving at
// distance major_radius around the x3 axis; 2 * n_major * n_minor triangles.
TriangleSurfaceMesh generate_torus(double major_radius, double minor_radius,
                                   int n_major, int n_minor);

// Uniform 1-to-4 split; new midpoints are projected with `snap` if provided.
TriangleSurfaceMesh refine(const TriangleSurfaceMesh& mesh,
                           const SurfaceSnap* snap = nullptr);

SurfaceSnap sphere_snap(double radius);
SurfaceSnap torus_snap(double major_radius, double minor_radius);

// Plain-text OFF-style export/import (debugging aid; byte layout not
// contractual).
void write_off(std::ostream& os, const TriangleSurfaceMesh& mesh);
TriangleSurfaceMesh read_off(std::istream& is);

} // namespace gibc
