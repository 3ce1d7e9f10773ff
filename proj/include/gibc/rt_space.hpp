#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "gibc/mesh.hpp"

namespace gibc {

// Order-0 Raviart-Thomas (RWG-type) trace space: one degree of freedom per
// global edge. On a supporting triangle with opposite vertex p, the basis
// function of edge e is sign * l_e / (2 A) * (x - p); its surface divergence
// is sign * l_e / A. The sign is the triangle's local-vs-global edge
// orientation, which makes the normal flux continuous across e. The basis
// carries unit mean normal flux along its edge.
class RTSpace {
public:
    struct LocalDof {
        int global_edge;
        int sign;
        int opposite_vertex; // global vertex id
        double edge_length;
    };

    struct TriangleData {
        std::array<LocalDof, 3> dofs;
        double area;
        Vec3 unit_normal;
    };

    explicit RTSpace(std::shared_ptr<const TriangleSurfaceMesh> mesh);

    int dof_count() const { return dofs_; }
    const TriangleSurfaceMesh& mesh() const { return *mesh_; }
    std::shared_ptr<const TriangleSurfaceMesh> mesh_ptr() const { return mesh_; }
    const TriangleData& triangle_data(int t) const { return data_[t]; }

    struct BasisValues {
        std::array<Vec3, 3> value;       // with global signs applied
        std::array<double, 3> divergence;
        std::array<int, 3> global_edge;
    };

    // Basis values at a physical point of triangle t (the point must lie in
    // the triangle plane; callers obtain it from a chart or barycentrics).
    BasisValues eval_at_point(int t, const Vec3& x) const;

    // Basis values at barycentric coordinates (l0,l1,l2), l0+l1+l2=1.
    BasisValues eval_basis(int t, const std::array<double, 3>& bary) const;

    // nu x phi for each local basis function (Nedelec-type rotated values).
    std::array<Vec3, 3> rotated_test_basis(int t, const std::array<double, 3>& bary) const;

private:
    std::shared_ptr<const TriangleSurfaceMesh> mesh_;
    std::vector<TriangleData> data_;
    int dofs_ = 0;
};

RTSpace build_rt0(std::shared_ptr<const TriangleSurfaceMesh> mesh);

// Raviart-Thomas space of order k on the mesh. Only k = 0 ships; higher
// orders raise an unsupported-feature error so callers can feature-test.
RTSpace build_rt(std::shared_ptr<const TriangleSurfaceMesh> mesh, int order);

} // namespace gibc
