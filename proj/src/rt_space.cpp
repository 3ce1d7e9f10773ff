#include "gibc/rt_space.hpp"

#include <string>

#include "gibc/errors.hpp"

namespace gibc {

RTSpace::RTSpace(std::shared_ptr<const TriangleSurfaceMesh> mesh)
    : mesh_(std::move(mesh)) {
    if (!mesh_) throw DomainError("RTSpace: null mesh");
    if (mesh_->triangle_to_edges.size() != mesh_->triangles.size())
        throw DomainError("RTSpace: mesh edges not indexed");
    dofs_ = mesh_->edge_count();
    data_.resize(mesh_->triangle_count());
    for (int t = 0; t < mesh_->triangle_count(); ++t) {
        TriangleData& td = data_[t];
        td.area = mesh_->triangle_area(t);
        td.unit_normal = mesh_->triangle_unit_normal(t);
        const auto& tri = mesh_->triangles[t];
        for (int k = 0; k < 3; ++k) {
            const auto& ref = mesh_->triangle_to_edges[t][k];
            td.dofs[k] = {ref.edge, ref.sign, tri[k], mesh_->edge_length(ref.edge)};
        }
    }
}

RTSpace::BasisValues RTSpace::eval_at_point(int t, const Vec3& x) const {
    if (t < 0 || t >= static_cast<int>(data_.size()))
        throw DomainError("RTSpace: triangle index out of range");
    const TriangleData& td = data_[t];
    BasisValues out;
    for (int k = 0; k < 3; ++k) {
        const LocalDof& d = td.dofs[k];
        const double scale = d.sign * d.edge_length / (2.0 * td.area);
        out.value[k] = scale * (x - mesh_->vertices[d.opposite_vertex]);
        out.divergence[k] = d.sign * d.edge_length / td.area;
        out.global_edge[k] = d.global_edge;
    }
    return out;
}

RTSpace::BasisValues RTSpace::eval_basis(int t, const std::array<double, 3>& bary) const {
    if (t < 0 || t >= static_cast<int>(data_.size()))
        throw DomainError("RTSpace: triangle index out of range");
    const auto& tri = mesh_->triangles[t];
    const Vec3 x = bary[0] * mesh_->vertices[tri[0]] + bary[1] * mesh_->vertices[tri[1]] +
                   bary[2] * mesh_->vertices[tri[2]];
    return eval_at_point(t, x);
}

std::array<Vec3, 3> RTSpace::rotated_test_basis(int t, const std::array<double, 3>& bary) const {
    const BasisValues b = eval_basis(t, bary);
    const Vec3& nu = data_[t].unit_normal;
    return {nu.cross(b.value[0]), nu.cross(b.value[1]), nu.cross(b.value[2])};
}

RTSpace build_rt0(std::shared_ptr<const TriangleSurfaceMesh> mesh) {
    return RTSpace(std::move(mesh));
}

RTSpace build_rt(std::shared_ptr<const TriangleSurfaceMesh> mesh, int order) {
    if (order == 0) return build_rt0(std::move(mesh));
    throw DomainError("build_rt: Raviart-Thomas order " + std::to_string(order) +
                      " is not implemented (only k = 0 ships)");
}

} // namespace gibc
