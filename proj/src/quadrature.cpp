#include "gibc/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "gibc/errors.hpp"

namespace gibc {

namespace {

// Golub-Welsch from the symmetric-tridiagonal recurrence of the orthogonal
// polynomials: nodes are eigenvalues, weights mu0 * (first component)^2.
Gauss1D golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                     double mu0) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = diag(i);
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = offdiag(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Gauss1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

} // namespace

Gauss1D gauss_legendre_01(int n) {
    if (n < 1) throw DomainError("gauss_legendre_01: order must be >= 1");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd off(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        off(k - 1) = std::sqrt(kk * kk / (4.0 * kk * kk - 1.0));
    }
    Gauss1D rule = golub_welsch(diag, off, 2.0);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
        rule.weights[i] *= 0.5;
    }
    return rule;
}

Gauss1D gauss_jacobi_01_weight_t(int n) {
    if (n < 1) throw DomainError("gauss_jacobi_01_weight_t: order must be >= 1");
    // Jacobi weight (1+x) on [-1,1]: alpha=0, beta=1.
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(n > 1 ? n - 1 : 0);
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * k + 1.0;
        diag(k) = 1.0 / (t * (t + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double b = kk * (kk + 1.0) / ((2.0 * kk + 1.0) * (2.0 * kk + 1.0));
        off(k - 1) = std::sqrt(b);
    }
    Gauss1D rule = golub_welsch(diag, off, 2.0);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
        rule.weights[i] *= 0.25; // (1+x) dx -> 4 t dt under x = 2t-1
    }
    return rule;
}

namespace {

std::mutex rule_cache_mutex;

TriangleRule build_triangle_rule(int n) {
    const Gauss1D radial = gauss_jacobi_01_weight_t(n);
    const Gauss1D angular = gauss_legendre_01(n);
    TriangleRule rule;
    rule.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = radial.nodes[i];
            const double b = angular.nodes[j];
            rule.push_back({a, a * b, radial.weights[i] * angular.weights[j]});
        }
    }
    return rule;
}

} // namespace

const TriangleRule& triangle_rule(int n) {
    static std::map<int, TriangleRule> cache;
    std::lock_guard<std::mutex> lock(rule_cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_triangle_rule(n)).first;
    return it->second;
}

TriangleRule tensor_gauss_triangle(int n) {
    const Gauss1D g = gauss_legendre_01(n);
    TriangleRule rule;
    rule.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = g.nodes[i];
            const double b = g.nodes[j];
            rule.push_back({a, a * b, g.weights[i] * g.weights[j] * a});
        }
    }
    return rule;
}

namespace {

struct Map4 {
    // Simplex coordinates of both panels for one regularizing subdomain,
    // evaluated at (xi, eta1, eta2, eta3) in [0,1]^4, plus the transform
    // weight (without the Gauss weights).
    double ux, vx, uy, vy, w;
};

using SubdomainMap = Map4 (*)(double xi, double e1, double e2, double e3);

// Coincident panels: six subdomains, weight xi^3 eta1^2 eta2.
template <int K>
Map4 common_face_map(double xi, double e1, double e2, double e3) {
    const double w = xi * xi * xi * e1 * e1 * e2;
    switch (K) {
        case 0: return {xi, xi * (1 - e1 + e1 * e2), xi * (1 - e1 * e2 * e3), xi * (1 - e1), w};
        case 1: return {xi * (1 - e1 * e2 * e3), xi * (1 - e1), xi, xi * (1 - e1 + e1 * e2), w};
        case 2: return {xi, xi * e1 * (1 - e2 + e2 * e3), xi * (1 - e1 * e2), xi * e1 * (1 - e2), w};
        case 3: return {xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * (1 - e2 + e2 * e3), w};
        case 4: return {xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * (1 - e2), w};
        default: return {xi, xi * e1 * (1 - e2), xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), w};
    }
}

// Panels sharing the chart edge (p0,p1): five subdomains.
template <int K>
Map4 common_edge_map(double xi, double e1, double e2, double e3) {
    const double w1 = xi * xi * xi * e1 * e1;
    const double w2 = w1 * e2;
    switch (K) {
        case 0: return {xi, xi * e1 * e3, xi * (1 - e1 * e2), xi * e1 * (1 - e2), w1};
        case 1: return {xi, xi * e1, xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), w2};
        case 2: return {xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * e2 * e3, w2};
        case 3: return {xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), xi, xi * e1, w2};
        default: return {xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * e2, w2};
    }
}

// Panels sharing the chart vertex p0: two subdomains, weight xi^3 eta2.
template <int K>
Map4 common_vertex_map(double xi, double e1, double e2, double e3) {
    const double w = xi * xi * xi * e2;
    if constexpr (K == 0) return {xi, xi * e1, xi * e2, xi * e2 * e3, w};
    return {xi * e2, xi * e2 * e3, xi, xi * e1, w};
}

PairRule build_sauter_schwab(PairCase c, int n) {
    std::vector<SubdomainMap> maps;
    switch (c) {
        case PairCase::Coincident:
            maps = {common_face_map<0>, common_face_map<1>, common_face_map<2>,
                    common_face_map<3>, common_face_map<4>, common_face_map<5>};
            break;
        case PairCase::SharedEdge:
            maps = {common_edge_map<0>, common_edge_map<1>, common_edge_map<2>,
                    common_edge_map<3>, common_edge_map<4>};
            break;
        case PairCase::SharedVertex:
            maps = {common_vertex_map<0>, common_vertex_map<1>};
            break;
        default:
            throw DomainError("sauter_schwab_rule: pair is not singular");
    }
    const Gauss1D g = gauss_legendre_01(n);
    PairRule rule;
    rule.reserve(maps.size() * n * n * n * n);
    for (const auto& map : maps) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const Map4 m = map(g.nodes[i], g.nodes[j], g.nodes[k], g.nodes[l]);
                        const double w = m.w * g.weights[i] * g.weights[j] *
                                         g.weights[k] * g.weights[l];
                        rule.push_back({m.ux, m.vx, m.uy, m.vy, w});
                    }
    }
    return rule;
}

} // namespace

const PairRule& sauter_schwab_rule(PairCase c, int n) {
    static std::map<std::pair<int, int>, PairRule> cache;
    std::lock_guard<std::mutex> lock(rule_cache_mutex);
    const auto key = std::make_pair(static_cast<int>(c), n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_sauter_schwab(c, n)).first;
    return it->second;
}

PairRule separated_pair_rule(int n) {
    const TriangleRule& tri = triangle_rule(n);
    PairRule rule;
    rule.reserve(tri.size() * tri.size());
    for (const auto& px : tri)
        for (const auto& py : tri)
            rule.push_back({px.u, px.v, py.u, py.v, px.w * py.w});
    return rule;
}

PairGeometry classify_pair(const TriangleSurfaceMesh& mesh, int tx, int ty) {
    const auto& a = mesh.triangles[tx];
    const auto& b = mesh.triangles[ty];
    PairGeometry geo;

    auto diam = [&](const std::array<int, 3>& tri) {
        double d = 0;
        for (int k = 0; k < 3; ++k)
            d = std::max(d, (mesh.vertices[tri[k]] - mesh.vertices[tri[(k + 1) % 3]]).norm());
        return d;
    };
    geo.diameter = std::max(diam(a), diam(b));

    if (tx == ty) {
        geo.kind = PairCase::Coincident;
        geo.chart_x = geo.chart_y =
            TriangleChart(mesh.vertices[a[0]], mesh.vertices[a[1]], mesh.vertices[a[2]]);
        geo.distance = 0;
        return geo;
    }

    std::vector<int> shared, only_a, only_b;
    for (int va : a) {
        bool found = false;
        for (int vb : b)
            if (va == vb) found = true;
        (found ? shared : only_a).push_back(va);
    }
    for (int vb : b) {
        bool found = false;
        for (int va : a)
            if (va == vb) found = true;
        if (!found) only_b.push_back(vb);
    }

    if (shared.size() == 2) {
        geo.kind = PairCase::SharedEdge;
        geo.chart_x = TriangleChart(mesh.vertices[shared[0]], mesh.vertices[shared[1]],
                                    mesh.vertices[only_a[0]]);
        geo.chart_y = TriangleChart(mesh.vertices[shared[0]], mesh.vertices[shared[1]],
                                    mesh.vertices[only_b[0]]);
        geo.distance = 0;
        return geo;
    }
    if (shared.size() == 1) {
        geo.kind = PairCase::SharedVertex;
        geo.chart_x = TriangleChart(mesh.vertices[shared[0]], mesh.vertices[only_a[0]],
                                    mesh.vertices[only_a[1]]);
        geo.chart_y = TriangleChart(mesh.vertices[shared[0]], mesh.vertices[only_b[0]],
                                    mesh.vertices[only_b[1]]);
        geo.distance = 0;
        return geo;
    }

    geo.kind = PairCase::Separated;
    geo.chart_x = TriangleChart(mesh.vertices[a[0]], mesh.vertices[a[1]], mesh.vertices[a[2]]);
    geo.chart_y = TriangleChart(mesh.vertices[b[0]], mesh.vertices[b[1]], mesh.vertices[b[2]]);
    double d2 = std::numeric_limits<double>::infinity();
    for (int va : a)
        for (int vb : b)
            d2 = std::min(d2, (mesh.vertices[va] - mesh.vertices[vb]).squaredNorm());
    geo.distance = std::sqrt(d2);
    return geo;
}

int QuadratureConfig::order_for_ratio(double ratio) const {
    if (ratio < near_threshold) return regular_order + 3;
    if (ratio < 4.0 * near_threshold) return regular_order + 1;
    return regular_order;
}

} // namespace gibc
