#include "doctest.h"

#include <cmath>
#include <map>
#include <memory>
#include <random>

#include <Eigen/Cholesky>

#include "gibc/assembly.hpp"
#include "gibc/errors.hpp"
#include "gibc/mesh.hpp"

using namespace gibc;

namespace {

std::shared_ptr<const TriangleSurfaceMesh> sphere(int level) {
    static std::map<int, std::shared_ptr<const TriangleSurfaceMesh>> cache;
    auto it = cache.find(level);
    if (it == cache.end())
        it = cache.emplace(level,
                           std::make_shared<TriangleSurfaceMesh>(generate_icosphere(level, 1.0)))
                 .first;
    return it->second;
}

PairRule oracle_rule_64() {
    const TriangleRule tri = tensor_gauss_triangle(8);
    PairRule rule;
    for (const auto& px : tri)
        for (const auto& py : tri)
            rule.push_back({px.u, px.v, py.u, py.v, px.w * py.w});
    return rule;
}

} // namespace

TEST_CASE("layer matrices are symmetric and satisfy conjugation symmetry") {
    const RTSpace space = build_rt0(sphere(1));
    const QuadratureConfig quad;
    const Complex s(1.5, 2.5);
    const LayerOperators ops = assemble_layer_operators(space, s, quad);
    const Eigen::MatrixXcd& v = ops.single_layer.matrix;
    const Eigen::MatrixXcd& k = ops.double_layer.matrix;
    CHECK((v - v.transpose()).norm() <= 1e-10 * v.norm());
    // Swapping x and y flips both grad G and the cross product, so the
    // collapsed double-layer form is symmetric as well.
    CHECK((k - k.transpose()).norm() <= 1e-10 * k.norm());

    const LayerOperators conj_ops = assemble_layer_operators(space, std::conj(s), quad);
    CHECK((conj_ops.single_layer.matrix - v.conjugate()).norm() <= 1e-12 * v.norm());
    CHECK((conj_ops.double_layer.matrix - k.conjugate()).norm() <= 1e-12 * k.norm());
}

TEST_CASE("layer matrices are real on the positive real frequency axis") {
    const RTSpace space = build_rt0(sphere(0));
    const QuadratureConfig quad;
    const LayerOperators ops = assemble_layer_operators(space, Complex(1.7, 0.0), quad);
    CHECK(ops.single_layer.matrix.imag().cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(ops.double_layer.matrix.imag().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("frequency precondition") {
    const RTSpace space = build_rt0(sphere(0));
    CHECK_THROWS_AS(assemble_layer_operators(space, Complex(-1.0, 2.0), QuadratureConfig{}),
                    DomainError);
}

TEST_CASE("well-separated pair entries match the 64-point tensor Gauss oracle") {
    const RTSpace space = build_rt0(sphere(2));
    const auto& mesh = space.mesh();
    const QuadratureConfig quad;
    const Complex s(2.0, 3.0);
    const PairRule oracle = oracle_rule_64();

    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> pick(0, mesh.triangle_count() - 1);
    int tested = 0;
    while (tested < 50) {
        const int tx = pick(rng), ty = pick(rng);
        const PairGeometry geo = classify_pair(mesh, tx, ty);
        if (geo.kind != PairCase::Separated || geo.distance / geo.diameter < 4.0) continue;
        ++tested;
        const PairBlocks got = routed_layer_pair_blocks(space, tx, ty, s, quad);
        const PairBlocks ref =
            layer_pair_blocks(space, tx, ty, s, oracle, geo.chart_x, geo.chart_y);
        double kscale = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                kscale = std::max(kscale, std::abs(ref.double_layer(a, b)));
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                CHECK(std::abs(got.single_layer(a, b) - ref.single_layer(a, b)) <=
                      1e-8 * std::abs(ref.single_layer(a, b)));
                // Nearly coplanar sphere panels drive some double-layer
                // entries towards zero; gauge those against the block scale.
                CHECK(std::abs(got.double_layer(a, b) - ref.double_layer(a, b)) <=
                      1e-8 * kscale);
            }
    }
}

TEST_CASE("pairing matrix structure") {
    const RTSpace space = build_rt0(sphere(1));
    const Eigen::MatrixXcd p = assemble_pairing(space).matrix;
    CHECK((p + p.transpose()).norm() <= 1e-14 * p.norm());
    for (int i = 0; i < p.rows(); ++i) CHECK(std::abs(p(i, i)) <= 1e-14);

    // Edges with no common triangle give exact zeros.
    const auto& mesh = space.mesh();
    const int e1 = 0;
    int e2 = -1;
    for (int e = 0; e < mesh.edge_count() && e2 < 0; ++e) {
        bool share_vertex = false;
        for (int va : mesh.edges[e1])
            for (int vb : mesh.edges[e])
                if (va == vb) share_vertex = true;
        if (!share_vertex) e2 = e;
    }
    REQUIRE(e2 >= 0);
    CHECK(p(e1, e2) == Complex(0, 0));
}

TEST_CASE("mass and divergence mass are hermitian positive semidefinite") {
    const RTSpace space = build_rt0(sphere(1));
    const Eigen::MatrixXd m = assemble_mass(space).matrix.real();
    const Eigen::MatrixXd d = assemble_divmass(space).matrix.real();
    CHECK((m - m.transpose()).norm() <= 1e-12 * m.norm());
    CHECK((d - d.transpose()).norm() <= 1e-12 * d.norm());
    std::mt19937 rng(5);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd x(space.dof_count());
        for (int i = 0; i < x.size(); ++i) x(i) = dist(rng);
        CHECK(x.dot(m * x) > 0.0);
        CHECK(x.dot(d * x) >= -1e-12 * x.squaredNorm());
    }
}

TEST_CASE("impedance closed forms") {
    const RTSpace space = build_rt0(sphere(1));
    const GalerkinMatrix mass = assemble_mass(space);
    const GalerkinMatrix divmass = assemble_divmass(space);

    const GalerkinMatrix thin =
        impedance_from_parts(mass, divmass, Complex(1, 0), ImpedanceKind::ThinLayer, 1.0);
    CHECK((thin.matrix - (mass.matrix + divmass.matrix)).norm() <= 1e-14 * thin.matrix.norm());

    const GalerkinMatrix absorb =
        impedance_from_parts(mass, divmass, Complex(4, 0), ImpedanceKind::Absorbing, 0.5);
    CHECK((absorb.matrix - mass.matrix).norm() <= 1e-14 * mass.matrix.norm());
}

TEST_CASE("impedance forms have positive real part") {
    const RTSpace space = build_rt0(sphere(1));
    const GalerkinMatrix mass = assemble_mass(space);
    const GalerkinMatrix divmass = assemble_divmass(space);
    const Complex s(2, 5);
    std::mt19937 rng(17);
    std::normal_distribution<double> dist;
    for (ImpedanceKind kind : {ImpedanceKind::ThinLayer, ImpedanceKind::Absorbing}) {
        const Eigen::MatrixXcd z = impedance_from_parts(mass, divmass, s, kind, 0.7).matrix;
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXcd x(space.dof_count());
            for (int i = 0; i < x.size(); ++i) x(i) = Complex(dist(rng), dist(rng));
            CHECK((x.dot(z * x)).real() > 0.0);
        }
    }
}

TEST_CASE("quadratic form of the single layer settles under refinement") {
    // Interpolant of a fixed smooth tangential field; x^* V(s) x converges.
    const Complex s(1.0, 2.0);
    const QuadratureConfig quad;
    auto field = [](const Vec3& x) {
        const Vec3 radial = x.normalized();
        const Vec3 v(-x.y(), x.x(), 0.3 * x.z());
        const Vec3 t = v - v.dot(radial) * radial;
        return t.cast<Complex>().eval();
    };
    std::vector<Complex> values;
    for (int level : {0, 1, 2}) {
        const RTSpace space = build_rt0(sphere(level));
        const Eigen::MatrixXcd mass = assemble_mass(space).matrix;
        const Eigen::VectorXcd rhs = project_tangential(space, field);
        const Eigen::VectorXcd coeffs = mass.llt().solve(rhs);
        const Eigen::MatrixXcd v = assemble_single_layer(space, s, quad).matrix;
        values.push_back(coeffs.dot(v * coeffs));
    }
    const double d1 = std::abs(values[1] - values[0]);
    const double d2 = std::abs(values[2] - values[1]);
    CHECK(d2 * 2.0 <= d1);
}

TEST_CASE("pairing functional matches a per-triangle reference") {
    const RTSpace space = build_rt0(sphere(1));
    auto field = [](const Vec3& x) {
        return Vec3c(std::sin(x.x()), x.y() * x.z(), std::cos(x.z()));
    };
    const Eigen::VectorXcd a = pairing_functional(space, field);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(space.dof_count());
    const auto& mesh = space.mesh();
    const TriangleRule& rule = triangle_rule(6);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tv = mesh.triangles[t];
        const TriangleChart chart(mesh.vertices[tv[0]], mesh.vertices[tv[1]],
                                  mesh.vertices[tv[2]]);
        const Vec3 nu = mesh.triangle_unit_normal(t);
        for (const auto& q : rule) {
            const Vec3 x = chart.map(q.u, q.v);
            const auto basis = space.eval_at_point(t, x);
            for (int k = 0; k < 3; ++k) {
                const Vec3c rotated = basis.value[k].cross(nu).cast<Complex>();
                b(basis.global_edge[k]) += chart.jacobian * q.w * rotated.dot(field(x));
            }
        }
    }
    CHECK((a - b).norm() <= 1e-12 * b.norm());
}
