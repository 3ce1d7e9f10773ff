#include "gibc/assembly.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "gibc/errors.hpp"
#include "gibc/parallel.hpp"

namespace gibc {

namespace {

// Flat per-panel basis data for the pair-integration hot path.
struct PanelBasis {
    Vec3 opposite[3];
    double scale[3]; // sign * l / (2A); divergence is 2 * scale
    int edge[3];

    explicit PanelBasis(const RTSpace& space, int t) {
        const auto& td = space.triangle_data(t);
        const auto& mesh = space.mesh();
        for (int k = 0; k < 3; ++k) {
            const auto& d = td.dofs[k];
            opposite[k] = mesh.vertices[d.opposite_vertex];
            scale[k] = d.sign * d.edge_length / (2.0 * td.area);
            edge[k] = d.global_edge;
        }
    }
};

void accumulate_pair(const PairRule& rule, const TriangleChart& cx, const TriangleChart& cy,
                     const PanelBasis& bx, const PanelBasis& by, Complex s, bool skip_kernel_k,
                     Eigen::Matrix3cd& vblock, Eigen::Matrix3cd& kblock) {
    const double jac = cx.jacobian * cy.jacobian;
    Complex weighted_g_sum = 0.0;
    Eigen::Matrix3cd value_sum = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3cd cross_sum = Eigen::Matrix3cd::Zero();
    for (const PairPoint& q : rule) {
        const Vec3 x = cx.map(q.ux, q.vx);
        const Vec3 y = cy.map(q.uy, q.vy);
        const KernelValues ker = green_with_grad(s, x - y);
        const Complex wg = q.w * ker.g;
        weighted_g_sum += wg;
        Vec3 phix[3], phiy[3];
        for (int a = 0; a < 3; ++a) phix[a] = bx.scale[a] * (x - bx.opposite[a]);
        for (int b = 0; b < 3; ++b) phiy[b] = by.scale[b] * (y - by.opposite[b]);
        if (skip_kernel_k) {
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    value_sum(a, b) += wg * phix[a].dot(phiy[b]);
        } else {
            Vec3c rotated[3];
            for (int a = 0; a < 3; ++a)
                rotated[a] = phix[a].cast<Complex>().cross(q.w * ker.grad);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    value_sum(a, b) += wg * phix[a].dot(phiy[b]);
                    // grad_x G . (phi_y x phi_x) = phi_y . (phi_x x grad G)
                    cross_sum(a, b) += phiy[b].cast<Complex>().dot(rotated[a]);
                }
        }
    }
    const Complex inv_s = 1.0 / s;
    for (int a = 0; a < 3; ++a) {
        const double diva = 2.0 * bx.scale[a];
        for (int b = 0; b < 3; ++b) {
            const double divb = 2.0 * by.scale[b];
            vblock(a, b) = jac * (-s * value_sum(a, b) - inv_s * diva * divb * weighted_g_sum);
            kblock(a, b) = jac * cross_sum(a, b);
        }
    }
}

PairBlocks pair_blocks_impl(const RTSpace& space, int tx, int ty, Complex s,
                            const PairRule& rule, const TriangleChart& cx,
                            const TriangleChart& cy, bool coincident) {
    PairBlocks out;
    const PanelBasis bx(space, tx), by(space, ty);
    // On a flat panel pair with x and y coplanar the double-layer integrand
    // (phi_y x phi_x).grad G is normal to the plane while grad G is in-plane,
    // so the coincident contribution is exactly zero.
    accumulate_pair(rule, cx, cy, bx, by, s, coincident, out.single_layer, out.double_layer);
    if (coincident) out.double_layer.setZero();
    return out;
}

} // namespace

PairBlocks layer_pair_blocks(const RTSpace& space, int tx, int ty, Complex s,
                             const PairRule& rule, const TriangleChart& chart_x,
                             const TriangleChart& chart_y) {
    return pair_blocks_impl(space, tx, ty, s, rule, chart_x, chart_y, tx == ty);
}

PairBlocks routed_layer_pair_blocks(const RTSpace& space, int tx, int ty, Complex s,
                                    const QuadratureConfig& quad) {
    const PairGeometry geo = classify_pair(space.mesh(), tx, ty);
    const PairRule* rule = nullptr;
    if (geo.kind == PairCase::Separated) {
        const double ratio = geo.distance / geo.diameter;
        static thread_local std::map<int, PairRule> separated_cache;
        const int order = quad.order_for_ratio(ratio);
        auto it = separated_cache.find(order);
        if (it == separated_cache.end())
            it = separated_cache.emplace(order, separated_pair_rule(order)).first;
        rule = &it->second;
    } else {
        rule = &sauter_schwab_rule(geo.kind, quad.singular_order);
    }
    return pair_blocks_impl(space, tx, ty, s, *rule, geo.chart_x, geo.chart_y,
                            geo.kind == PairCase::Coincident);
}

LayerOperators assemble_layer_operators(const RTSpace& space, Complex s,
                                        const QuadratureConfig& quad, int workers) {
    if (!(s.real() > 0.0))
        throw DomainError("assemble_layer_operators: frequency must satisfy Re s > 0");
    const int n = space.dof_count();
    const int nf = space.mesh().triangle_count();
    if (workers <= 0) workers = default_worker_count();
    workers = std::min(workers, 4); // each worker owns dense accumulators

    std::vector<Eigen::MatrixXcd> vparts, kparts;
    const int used = std::max(1, std::min<int>(workers, nf));
    for (int w = 0; w < used; ++w) {
        vparts.emplace_back(Eigen::MatrixXcd::Zero(n, n));
        kparts.emplace_back(Eigen::MatrixXcd::Zero(n, n));
    }

    // Both weak forms are symmetric in test <-> trial (swapping x and y flips
    // grad G and the cross product), so each unordered pair is integrated once
    // and scattered to both blocks; the assembled matrices are symmetric to
    // machine precision. Row stripes are interleaved to balance the shrinking
    // inner loops.
    parallel_for(static_cast<std::size_t>(used), [&](std::size_t w) {
        Eigen::MatrixXcd& vmat = vparts[w];
        Eigen::MatrixXcd& kmat = kparts[w];
        for (int tx = static_cast<int>(w); tx < nf; tx += used) {
            const PanelBasis bx(space, tx);
            for (int ty = tx; ty < nf; ++ty) {
                PairBlocks blocks = routed_layer_pair_blocks(space, tx, ty, s, quad);
                const PanelBasis by(space, ty);
                if (tx == ty) {
                    blocks.single_layer = 0.5 * (blocks.single_layer +
                                                 blocks.single_layer.transpose().eval());
                    blocks.double_layer = 0.5 * (blocks.double_layer +
                                                 blocks.double_layer.transpose().eval());
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) {
                            vmat(bx.edge[a], by.edge[b]) += blocks.single_layer(a, b);
                            kmat(bx.edge[a], by.edge[b]) += blocks.double_layer(a, b);
                        }
                } else {
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) {
                            vmat(bx.edge[a], by.edge[b]) += blocks.single_layer(a, b);
                            vmat(by.edge[b], bx.edge[a]) += blocks.single_layer(a, b);
                            kmat(bx.edge[a], by.edge[b]) += blocks.double_layer(a, b);
                            kmat(by.edge[b], bx.edge[a]) += blocks.double_layer(a, b);
                        }
                }
            }
        }
    }, used);

    LayerOperators out;
    out.single_layer = {std::move(vparts[0]), s, OperatorTag::SingleLayer};
    out.double_layer = {std::move(kparts[0]), s, OperatorTag::DoubleLayer};
    for (int w = 1; w < used; ++w) {
        out.single_layer.matrix += vparts[w];
        out.double_layer.matrix += kparts[w];
    }
    return out;
}

GalerkinMatrix assemble_single_layer(const RTSpace& space, Complex s,
                                     const QuadratureConfig& quad, int workers) {
    return assemble_layer_operators(space, s, quad, workers).single_layer;
}

GalerkinMatrix assemble_double_layer(const RTSpace& space, Complex s,
                                     const QuadratureConfig& quad, int workers) {
    return assemble_layer_operators(space, s, quad, workers).double_layer;
}

GalerkinMatrix assemble_pairing(const RTSpace& space) {
    const int n = space.dof_count();
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
    const TriangleRule& rule = triangle_rule(2); // integrand degree 2
    for (int t = 0; t < space.mesh().triangle_count(); ++t) {
        const PanelBasis pb(space, t);
        const auto& tri = space.mesh().triangles[t];
        const TriangleChart chart(space.mesh().vertices[tri[0]], space.mesh().vertices[tri[1]],
                                  space.mesh().vertices[tri[2]]);
        const Vec3& nu = space.triangle_data(t).unit_normal;
        Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
        for (const auto& q : rule) {
            const Vec3 x = chart.map(q.u, q.v);
            Vec3 phi[3];
            for (int k = 0; k < 3; ++k) phi[k] = pb.scale[k] * (x - pb.opposite[k]);
            for (int a = 0; a < 3; ++a) {
                const Vec3 rotated = phi[a].cross(nu);
                for (int b = 0; b < 3; ++b) local(a, b) += q.w * rotated.dot(phi[b]);
            }
        }
        local *= chart.jacobian;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                mat(pb.edge[a], pb.edge[b]) += local(a, b);
    }
    return {std::move(mat), Complex(0, 0), OperatorTag::Pairing};
}

GalerkinMatrix assemble_mass(const RTSpace& space) {
    const int n = space.dof_count();
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
    const TriangleRule& rule = triangle_rule(2);
    for (int t = 0; t < space.mesh().triangle_count(); ++t) {
        const PanelBasis pb(space, t);
        const auto& tri = space.mesh().triangles[t];
        const TriangleChart chart(space.mesh().vertices[tri[0]], space.mesh().vertices[tri[1]],
                                  space.mesh().vertices[tri[2]]);
        Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
        for (const auto& q : rule) {
            const Vec3 x = chart.map(q.u, q.v);
            Vec3 phi[3];
            for (int k = 0; k < 3; ++k) phi[k] = pb.scale[k] * (x - pb.opposite[k]);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) local(a, b) += q.w * phi[a].dot(phi[b]);
        }
        local *= chart.jacobian;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                mat(pb.edge[a], pb.edge[b]) += local(a, b);
    }
    return {std::move(mat), Complex(0, 0), OperatorTag::Mass};
}

GalerkinMatrix assemble_divmass(const RTSpace& space) {
    const int n = space.dof_count();
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
    for (int t = 0; t < space.mesh().triangle_count(); ++t) {
        const PanelBasis pb(space, t);
        const double area = space.triangle_data(t).area;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                mat(pb.edge[a], pb.edge[b]) += area * (2.0 * pb.scale[a]) * (2.0 * pb.scale[b]);
    }
    return {std::move(mat), Complex(0, 0), OperatorTag::DivMass};
}

GalerkinMatrix impedance_from_parts(const GalerkinMatrix& mass, const GalerkinMatrix& divmass,
                                    Complex s, ImpedanceKind kind, double delta) {
    if (!(s.real() > 0.0)) throw DomainError("impedance: frequency must satisfy Re s > 0");
    if (delta < 0.0) throw DomainError("impedance: delta must be nonnegative");
    GalerkinMatrix out;
    out.frequency = s;
    out.tag = OperatorTag::Impedance;
    switch (kind) {
        case ImpedanceKind::ThinLayer:
            out.matrix = delta * s * mass.matrix + delta / s * divmass.matrix;
            break;
        case ImpedanceKind::Absorbing:
            out.matrix = delta * std::sqrt(s) * mass.matrix;
            break;
        default:
            throw DomainError("impedance: unknown kind");
    }
    return out;
}

GalerkinMatrix assemble_impedance(const RTSpace& space, Complex s, ImpedanceKind kind,
                                  double delta) {
    const GalerkinMatrix mass = assemble_mass(space);
    GalerkinMatrix divmass;
    if (kind == ImpedanceKind::ThinLayer) divmass = assemble_divmass(space);
    else divmass = {Eigen::MatrixXcd::Zero(space.dof_count(), space.dof_count()),
                    Complex(0, 0), OperatorTag::DivMass};
    return impedance_from_parts(mass, divmass, s, kind, delta);
}

namespace {

template <typename Weight>
Eigen::VectorXcd assemble_functional(const RTSpace& space, int order, const Weight& weight) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(space.dof_count());
    const TriangleRule& rule = triangle_rule(order);
    for (int t = 0; t < space.mesh().triangle_count(); ++t) {
        const PanelBasis pb(space, t);
        const auto& tri = space.mesh().triangles[t];
        const TriangleChart chart(space.mesh().vertices[tri[0]], space.mesh().vertices[tri[1]],
                                  space.mesh().vertices[tri[2]]);
        const Vec3& nu = space.triangle_data(t).unit_normal;
        Complex local[3] = {0, 0, 0};
        for (const auto& q : rule) {
            const Vec3 x = chart.map(q.u, q.v);
            weight(t, x, nu, pb, q.w, local);
        }
        for (int k = 0; k < 3; ++k) out(pb.edge[k]) += chart.jacobian * local[k];
    }
    return out;
}

} // namespace

Eigen::VectorXcd project_tangential(const RTSpace& space, const TangentialField& f, int order) {
    return assemble_functional(
        space, order,
        [&](int, const Vec3& x, const Vec3&, const PanelBasis& pb, double w, Complex* local) {
            const Vec3c val = f(x);
            for (int k = 0; k < 3; ++k)
                local[k] += w * (pb.scale[k] * (x - pb.opposite[k])).cast<Complex>().dot(val);
        });
}

Eigen::VectorXcd pairing_functional(const RTSpace& space, const TangentialField& f, int order) {
    return assemble_functional(
        space, order,
        [&](int, const Vec3& x, const Vec3& nu, const PanelBasis& pb, double w, Complex* local) {
            const Vec3c val = f(x);
            for (int k = 0; k < 3; ++k) {
                const Vec3 rotated = (pb.scale[k] * (x - pb.opposite[k])).cross(nu);
                local[k] += w * rotated.cast<Complex>().dot(val);
            }
        });
}

Eigen::VectorXcd divergence_functional(const RTSpace& space, const ScalarField& g, int order) {
    return assemble_functional(
        space, order,
        [&](int, const Vec3& x, const Vec3&, const PanelBasis& pb, double w, Complex* local) {
            const Complex val = g(x);
            for (int k = 0; k < 3; ++k) local[k] += w * (2.0 * pb.scale[k]) * val;
        });
}

} // namespace gibc
