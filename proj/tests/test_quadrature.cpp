#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>

#include "gibc/kernel.hpp"
#include "gibc/mesh.hpp"
#include "gibc/quadrature.hpp"

using namespace gibc;

namespace {

double integrate_reference_triangle(const TriangleRule& rule,
                                    const std::function<double(double, double)>& f) {
    double acc = 0;
    for (const auto& q : rule) acc += q.w * f(q.u, q.v);
    return acc;
}

// Exact integral of u^a v^b over {0 <= v <= u <= 1}.
double monomial_exact(int a, int b) {
    return 1.0 / ((b + 1.0) * (a + b + 2.0));
}

double integrate_pair(const PairRule& rule, const TriangleChart& cx, const TriangleChart& cy,
                      const std::function<double(const Vec3&, const Vec3&)>& f) {
    double acc = 0;
    for (const auto& q : rule)
        acc += q.w * f(cx.map(q.ux, q.vx), cy.map(q.uy, q.vy));
    return acc * cx.jacobian * cy.jacobian;
}

} // namespace

TEST_CASE("1D Gauss rules integrate monomials") {
    for (int n = 1; n <= 10; ++n) {
        const Gauss1D gl = gauss_legendre_01(n);
        const Gauss1D gj = gauss_jacobi_01_weight_t(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double accl = 0, accj = 0;
            for (int i = 0; i < n; ++i) {
                accl += gl.weights[i] * std::pow(gl.nodes[i], k);
                accj += gj.weights[i] * std::pow(gj.nodes[i], k);
            }
            CHECK(std::abs(accl - 1.0 / (k + 1)) < 1e-13);
            CHECK(std::abs(accj - 1.0 / (k + 2)) < 1e-13); // weight t adds one power
        }
    }
}

TEST_CASE("triangle rule is degree 2n-1 exact") {
    for (int n = 2; n <= 6; ++n) {
        const TriangleRule& rule = triangle_rule(n);
        for (int a = 0; a + 0 <= 2 * n - 1; ++a)
            for (int b = 0; a + b <= 2 * n - 1; ++b) {
                const double got = integrate_reference_triangle(
                    rule, [&](double u, double v) { return std::pow(u, a) * std::pow(v, b); });
                CHECK(std::abs(got - monomial_exact(a, b)) < 1e-12);
            }
    }
}

TEST_CASE("tensor Gauss triangle oracle rule integrates smooth functions") {
    const TriangleRule oracle = tensor_gauss_triangle(8);
    const double got = integrate_reference_triangle(
        oracle, [](double u, double v) { return std::exp(u - 2 * v); });
    const double fine = integrate_reference_triangle(
        triangle_rule(16), [](double u, double v) { return std::exp(u - 2 * v); });
    CHECK(std::abs(got - fine) < 1e-12);
}

TEST_CASE("Sauter-Schwab rules reproduce smooth pair integrals") {
    // A valid decomposition of That x That must integrate smooth kernels to
    // the same value as a plain tensor rule; gaps or overlaps would show.
    const TriangleChart cx(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
    const TriangleChart cy_edge(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.3, -0.9, 0.1));
    const TriangleChart cy_vertex(Vec3(0, 0, 0), Vec3(-0.2, -0.8, 0.0), Vec3(-0.9, 0.1, 0.4));

    auto smooth = [](const Vec3& x, const Vec3& y) {
        return std::exp(x.dot(Vec3(0.3, -0.2, 0.1)) + y.dot(Vec3(-0.1, 0.4, 0.2))) +
               x.dot(y);
    };
    const PairRule reference = separated_pair_rule(12);

    SUBCASE("coincident") {
        const double exact = integrate_pair(reference, cx, cx, smooth);
        const double got =
            integrate_pair(sauter_schwab_rule(PairCase::Coincident, 10), cx, cx, smooth);
        CHECK(std::abs(got - exact) < 1e-10 * std::abs(exact));
    }
    SUBCASE("shared edge") {
        const double exact = integrate_pair(reference, cx, cy_edge, smooth);
        const double got =
            integrate_pair(sauter_schwab_rule(PairCase::SharedEdge, 10), cx, cy_edge, smooth);
        CHECK(std::abs(got - exact) < 1e-10 * std::abs(exact));
    }
    SUBCASE("shared vertex") {
        const double exact = integrate_pair(reference, cx, cy_vertex, smooth);
        const double got =
            integrate_pair(sauter_schwab_rule(PairCase::SharedVertex, 10), cx, cy_vertex, smooth);
        CHECK(std::abs(got - exact) < 1e-10 * std::abs(exact));
    }
}

TEST_CASE("Sauter-Schwab converges on the weakly singular kernel") {
    const TriangleChart cx(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.2, 0.9, 0));
    auto kernel = [](const Vec3& x, const Vec3& y) { return 1.0 / (4 * M_PI * (x - y).norm()); };
    double prev = 0, prev_diff = 0;
    for (int n : {3, 5, 7, 9}) {
        const double got = integrate_pair(sauter_schwab_rule(PairCase::Coincident, n), cx, cx, kernel);
        if (n > 3) {
            const double diff = std::abs(got - prev);
            if (n > 5) CHECK(diff < 0.8 * prev_diff + 1e-14);
            prev_diff = diff;
        }
        prev = got;
    }
    CHECK(prev_diff < 1e-6 * std::abs(prev));
}

TEST_CASE("subdivision consistency of the singular rules") {
    // Split one panel of a touching pair into four children and re-integrate
    // with the routed child rules; the sum must match the parent value. This
    // exercises every routing branch against the others.
    TriangleSurfaceMesh parent;
    parent.vertices = {{0, 0, 0}, {1, 0, 0}, {0.2, 0.9, 0.0}};
    parent.triangles = {{0, 1, 2}};
    index_edges(parent);
    const auto child = refine(parent);

    auto kernel = [](const Vec3& x, const Vec3& y) { return 1.0 / (4 * M_PI * (x - y).norm()); };

    const TriangleChart cx(parent.vertices[0], parent.vertices[1], parent.vertices[2]);
    const double whole =
        integrate_pair(sauter_schwab_rule(PairCase::Coincident, 10), cx, cx, kernel);

    double parts = 0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const PairGeometry geo = classify_pair(child, a, b);
            const PairRule& rule = geo.kind == PairCase::Separated
                                       ? separated_pair_rule(12)
                                       : sauter_schwab_rule(geo.kind, 10);
            parts += integrate_pair(rule, geo.chart_x, geo.chart_y, kernel);
        }
    }
    CHECK(std::abs(parts - whole) < 1e-8 * std::abs(whole));
}

TEST_CASE("pair classification on a mesh") {
    const auto mesh = generate_icosphere(0, 1.0);
    CHECK(classify_pair(mesh, 3, 3).kind == PairCase::Coincident);
    int edges = 0, vertices = 0, separated = 0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto geo = classify_pair(mesh, 0, t);
        if (geo.kind == PairCase::SharedEdge) ++edges;
        if (geo.kind == PairCase::SharedVertex) ++vertices;
        if (geo.kind == PairCase::Separated) {
            ++separated;
            CHECK(geo.distance > 0);
        }
    }
    CHECK(edges == 3);
    CHECK(vertices == 6); // icosahedron vertices have valence 5
    CHECK(separated == 20 - 1 - 3 - 6);
}

TEST_CASE("regular rule order grading is continuous at the band edges") {
    // Two separated unit-size panels moved through the band boundaries; the
    // graded rule must agree with a much stronger rule at every ratio.
    const QuadratureConfig quad;
    const Complex s(2.0, 3.0);
    for (double ratio : {1.2, 1.9, 2.1, 4.0, 7.9, 8.1, 12.0}) {
        const double d = ratio * 1.0;
        const TriangleChart cx(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
        const TriangleChart cy(Vec3(0.1, 0.2, d), Vec3(1, 0, d + 0.1), Vec3(0.2, 0.9, d));
        auto kernel = [&](const Vec3& x, const Vec3& y) {
            return std::abs(green(s, x - y));
        };
        const double got =
            integrate_pair(separated_pair_rule(quad.order_for_ratio(ratio)), cx, cy, kernel);
        const double exact = integrate_pair(separated_pair_rule(16), cx, cy, kernel);
        CHECK(std::abs(got - exact) <= 1e-7 * std::abs(exact));
    }
}
