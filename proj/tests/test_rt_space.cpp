#include "doctest.h"

#include <cmath>
#include <memory>

#include <Eigen/Eigenvalues>

#include "gibc/assembly.hpp"
#include "gibc/errors.hpp"
#include "gibc/quadrature.hpp"
#include "gibc/rt_space.hpp"

using namespace gibc;

namespace {

std::shared_ptr<const TriangleSurfaceMesh> sphere(int level) {
    return std::make_shared<TriangleSurfaceMesh>(generate_icosphere(level, 1.0));
}

} // namespace

TEST_CASE("one dof per edge") {
    const RTSpace space = build_rt0(sphere(1));
    CHECK(space.dof_count() == 120);
}

TEST_CASE("orders above zero are rejected") {
    CHECK_THROWS_AS(build_rt(sphere(0), 1), DomainError);
    CHECK_NOTHROW(build_rt(sphere(0), 0));
}

TEST_CASE("basis vanishes at the opposite vertex") {
    const RTSpace space = build_rt0(sphere(0));
    const auto v = space.eval_basis(0, {1.0, 0.0, 0.0});
    // Local edge 0 is opposite local vertex 0.
    CHECK(v.value[0].norm() < 1e-15);
}

TEST_CASE("divergence is sign * edge length / area") {
    const RTSpace space = build_rt0(sphere(1));
    for (int t : {0, 7, 33}) {
        const auto& td = space.triangle_data(t);
        const auto v = space.eval_basis(t, {1.0 / 3, 1.0 / 3, 1.0 / 3});
        for (int k = 0; k < 3; ++k) {
            const auto& d = td.dofs[k];
            CHECK(v.divergence[k] ==
                  doctest::Approx(d.sign * d.edge_length / td.area).epsilon(1e-13));
        }
    }
}

TEST_CASE("local interpolation reproduces a constant-divergence field") {
    // f(x) = alpha (x - c) on the panel has in-plane divergence 2 alpha; its
    // RT0 interpolant (matching mean normal fluxes) must carry the same
    // divergence sum.
    const RTSpace space = build_rt0(sphere(1));
    const int t = 5;
    const auto& mesh = space.mesh();
    const auto& tri = mesh.triangles[t];
    const Vec3 c = mesh.triangle_centroid(t);
    const double alpha = 0.83;

    double coeff[3];
    for (int k = 0; k < 3; ++k) {
        // Mean normal flux of f over local edge k (opposite vertex k): the
        // basis carries unit mean flux, so the coefficient is that mean.
        const Vec3 a = mesh.vertices[tri[(k + 1) % 3]];
        const Vec3 b = mesh.vertices[tri[(k + 2) % 3]];
        const Vec3 nu = space.triangle_data(t).unit_normal;
        Vec3 edge_normal = (b - a).cross(nu).normalized();
        if (edge_normal.dot(a - mesh.vertices[tri[k]]) < 0) edge_normal = -edge_normal;
        const int sign = space.triangle_data(t).dofs[k].sign;
        const Gauss1D g = gauss_legendre_01(2);
        double mean = 0;
        for (int q = 0; q < 2; ++q) {
            const Vec3 x = a + g.nodes[q] * (b - a);
            mean += g.weights[q] * alpha * (x - c).dot(edge_normal);
        }
        coeff[k] = sign * mean;
    }
    const auto v = space.eval_basis(t, {0.3, 0.3, 0.4});
    double div = 0;
    for (int k = 0; k < 3; ++k) div += coeff[k] * v.divergence[k];
    CHECK(div == doctest::Approx(2 * alpha).epsilon(1e-12));
}

TEST_CASE("unit mean normal flux along the own edge") {
    const RTSpace space = build_rt0(sphere(1));
    const auto& mesh = space.mesh();
    for (int t : {0, 11, 42}) {
        const auto& tri = mesh.triangles[t];
        const auto& td = space.triangle_data(t);
        for (int k = 0; k < 3; ++k) {
            const Vec3 a = mesh.vertices[tri[(k + 1) % 3]];
            const Vec3 b = mesh.vertices[tri[(k + 2) % 3]];
            Vec3 edge_normal = (b - a).cross(td.unit_normal).normalized();
            if (edge_normal.dot(a - mesh.vertices[tri[k]]) < 0) edge_normal = -edge_normal;
            const Gauss1D g = gauss_legendre_01(2);
            double mean = 0;
            for (int q = 0; q < 2; ++q) {
                const Vec3 x = a + g.nodes[q] * (b - a);
                const auto v = space.eval_at_point(t, x);
                mean += g.weights[q] * v.value[k].dot(edge_normal);
            }
            CHECK(std::abs(mean - td.dofs[k].sign) < 1e-12);
        }
    }
}

TEST_CASE("normal component vanishes on the other edges") {
    const RTSpace space = build_rt0(sphere(1));
    const auto& mesh = space.mesh();
    const int t = 3;
    const auto& tri = mesh.triangles[t];
    const auto& td = space.triangle_data(t);
    for (int k = 0; k < 3; ++k) {
        for (int other = 0; other < 3; ++other) {
            if (other == k) continue;
            const Vec3 a = mesh.vertices[tri[(other + 1) % 3]];
            const Vec3 b = mesh.vertices[tri[(other + 2) % 3]];
            const Vec3 edge_normal = (b - a).cross(td.unit_normal).normalized();
            for (double sgrid : {0.25, 0.5, 0.75}) {
                const Vec3 x = a + sgrid * (b - a);
                const auto v = space.eval_at_point(t, x);
                CHECK(std::abs(v.value[k].dot(edge_normal)) < 1e-13);
            }
        }
    }
}

TEST_CASE("flux continuity across shared edges") {
    const RTSpace space = build_rt0(sphere(1));
    const auto& mesh = space.mesh();
    // For every edge find its two supporting triangles and compare the normal
    // component of the edge's own basis function from both sides.
    std::vector<std::pair<int, int>> support(mesh.edge_count(), {-1, -1});
    for (int t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) {
            auto& s = support[mesh.triangle_to_edges[t][k].edge];
            (s.first < 0 ? s.first : s.second) = t;
        }
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto [t1, t2] = support[e];
        const Vec3 a = mesh.vertices[mesh.edges[e][0]];
        const Vec3 b = mesh.vertices[mesh.edges[e][1]];
        // In-plane edge normals of the two panels, both pointing out of t1.
        const Vec3 n1 = (b - a).cross(space.triangle_data(t1).unit_normal).normalized();
        Vec3 out1 = n1;
        if (out1.dot(a - mesh.triangle_centroid(t1)) < 0) out1 = -out1;
        Vec3 out2 = (b - a).cross(space.triangle_data(t2).unit_normal).normalized();
        if (out2.dot(a - mesh.triangle_centroid(t2)) < 0) out2 = -out2;
        const Gauss1D g = gauss_legendre_01(2);
        double jump = 0;
        for (int q = 0; q < 2; ++q) {
            const Vec3 x = a + g.nodes[q] * (b - a);
            const auto v1 = space.eval_at_point(t1, x);
            const auto v2 = space.eval_at_point(t2, x);
            double f1 = 0, f2 = 0;
            for (int k = 0; k < 3; ++k) {
                if (v1.global_edge[k] == e) f1 = v1.value[k].dot(out1);
                if (v2.global_edge[k] == e) f2 = v2.value[k].dot(-out2);
            }
            jump += g.weights[q] * (f1 - f2);
        }
        CHECK(std::abs(jump) < 1e-12);
    }
}

TEST_CASE("rotated test basis properties") {
    const RTSpace space = build_rt0(sphere(1));
    const std::array<double, 3> bary{0.2, 0.5, 0.3};
    for (int t : {1, 17, 60}) {
        const auto plain = space.eval_basis(t, bary);
        const auto rotated = space.rotated_test_basis(t, bary);
        const Vec3& nu = space.triangle_data(t).unit_normal;
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(rotated[k].dot(plain.value[k])) < 1e-13);
            CHECK(std::abs(rotated[k].norm() - plain.value[k].norm()) < 1e-13);
            const Vec3 twice = nu.cross(rotated[k]);
            CHECK((twice + plain.value[k]).norm() < 1e-13);
        }
    }
}

TEST_CASE("mass matrix is symmetric positive definite") {
    for (int level : {0, 1}) {
        const RTSpace space = build_rt0(sphere(level));
        const Eigen::MatrixXd m = assemble_mass(space).matrix.real();
        CHECK((m - m.transpose()).norm() < 1e-12 * m.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}
