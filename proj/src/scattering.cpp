#include "gibc/scattering.hpp"

#include <cmath>
#include <limits>

#include "gibc/errors.hpp"
#include "gibc/parallel.hpp"

namespace gibc {

StageSeries IncidentTraces::stacked() const {
    const int n = e_tangential.dim();
    StageSeries out(e_tangential.steps(), e_tangential.stages(), 3 * n);
    for (int st = 0; st <= e_tangential.steps(); ++st)
        for (int i = 0; i < e_tangential.stages(); ++i) {
            out.at(st, i).segment(0, n) = e_tangential.at(st, i);
            out.at(st, i).segment(n, n) = h_rotated.at(st, i);
            out.at(st, i).segment(2 * n, n) = h_rotated_div.at(st, i);
        }
    return out;
}

IncidentTraces incident_traces(const IncidentWave& wave, const RTSpace& space,
                               const CQContext& ctx, int quad_order) {
    const int m = ctx.tableau.stages;
    const int n = space.dof_count();
    IncidentTraces tr;
    tr.e_tangential = StageSeries(ctx.steps, m, n);
    tr.h_rotated = StageSeries(ctx.steps, m, n);
    tr.h_rotated_div = StageSeries(ctx.steps, m, n);

    for (int st = 0; st <= ctx.steps; ++st) {
        for (int i = 0; i < m; ++i) {
            const double t = ctx.stage_time(st, i);
            tr.e_tangential.at(st, i) = project_tangential(
                space,
                [&](const Vec3& x) { return wave.efield(t, x).cast<Complex>().eval(); },
                quad_order);
            // phi.(H x nu) = -(phi x nu).H
            tr.h_rotated.at(st, i) = -pairing_functional(
                space,
                [&](const Vec3& x) { return wave.hfield(t, x).cast<Complex>().eval(); },
                quad_order);
            tr.h_rotated_div.at(st, i) = Eigen::VectorXcd::Zero(n);
        }
    }

    // div_Gamma(H x nu) = -nu . curl H.
    for (int st = 0; st <= ctx.steps; ++st)
        for (int i = 0; i < m; ++i) {
            const double t = ctx.stage_time(st, i);
            const auto& mesh = space.mesh();
            Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n);
            const TriangleRule& rule = triangle_rule(quad_order);
            for (int tri = 0; tri < mesh.triangle_count(); ++tri) {
                const auto& td = space.triangle_data(tri);
                const auto& tv = mesh.triangles[tri];
                const TriangleChart chart(mesh.vertices[tv[0]], mesh.vertices[tv[1]],
                                          mesh.vertices[tv[2]]);
                Complex cell = 0.0;
                for (const auto& q : rule) {
                    const Vec3 x = chart.map(q.u, q.v);
                    cell += q.w * (-td.unit_normal.dot(wave.curl_hfield(t, x)));
                }
                cell *= chart.jacobian;
                for (int k = 0; k < 3; ++k) {
                    const auto& d = td.dofs[k];
                    acc(d.global_edge) += d.sign * d.edge_length / td.area * cell;
                }
            }
            tr.h_rotated_div.at(st, i) = acc;
        }
    return tr;
}

Eigen::VectorXcd rhs_at_frequency(Complex s, const Eigen::VectorXcd& e_data,
                                  const Eigen::VectorXcd& h_data,
                                  const Eigen::VectorXcd& h_div_data,
                                  ImpedanceKind kind, double delta) {
    const Eigen::Index n = e_data.size();
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * n);
    switch (kind) {
        case ImpedanceKind::ThinLayer:
            rhs.head(n) = -(e_data + delta * s * h_data + delta / s * h_div_data);
            break;
        case ImpedanceKind::Absorbing:
            rhs.head(n) = -(e_data + delta * std::sqrt(s) * h_data);
            break;
        default:
            throw DomainError("rhs_at_frequency: unknown impedance kind");
    }
    return rhs;
}

BoundaryDensities solve_densities(const RTSpace& space, const SpaceOperators& ops,
                                  const CQContext& ctx, const IncidentWave& wave,
                                  ImpedanceKind kind, double delta,
                                  const QuadratureConfig& quad,
                                  const ScatteringSolveOptions& opts) {
    const int n = space.dof_count();
    const IncidentTraces traces = incident_traces(wave, space, ctx);
    const StageSeries data = traces.stacked();

    const bool parallel_freq = n <= opts.frequency_parallel_dof_cap;
    const int outer_workers = parallel_freq ? opts.workers : 1;
    const int inner_workers = parallel_freq ? 1 : opts.workers;

    CQOptions cq_opts;
    cq_opts.conjugate_symmetry = true;
    cq_opts.workers = outer_workers;
    cq_opts.output_dim = 2 * n;

    const FrequencyOp op = [&](Complex s, const Eigen::VectorXcd& mixed) {
        const Eigen::VectorXcd rhs = rhs_at_frequency(
            s, mixed.segment(0, n), mixed.segment(n, n), mixed.segment(2 * n, n), kind, delta);
        const BlockSystem sys = build_system(space, ops, s, kind, delta, quad, inner_workers);
        return solve(sys, rhs, opts.solver);
    };

    const StageSeries solution = cq_solve(ctx, op, data, cq_opts);

    BoundaryDensities out;
    out.imag_residue = solution.max_imag_abs();
    out.phi = StageSeries(ctx.steps, ctx.tableau.stages, n);
    out.psi = StageSeries(ctx.steps, ctx.tableau.stages, n);
    for (int st = 0; st <= ctx.steps; ++st)
        for (int i = 0; i < ctx.tableau.stages; ++i) {
            out.phi.at(st, i) = solution.at(st, i).segment(0, n).real().cast<Complex>();
            out.psi.at(st, i) = solution.at(st, i).segment(n, n).real().cast<Complex>();
        }
    return out;
}

PotentialEvaluator::PotentialEvaluator(const RTSpace& space, int quad_order) {
    const auto& mesh = space.mesh();
    const TriangleRule& rule = triangle_rule(quad_order);
    qps_.reserve(static_cast<std::size_t>(mesh.triangle_count()) * rule.size());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& td = space.triangle_data(t);
        const auto& tv = mesh.triangles[t];
        const TriangleChart chart(mesh.vertices[tv[0]], mesh.vertices[tv[1]],
                                  mesh.vertices[tv[2]]);
        for (const auto& q : rule) {
            QuadPoint qp;
            qp.y = chart.map(q.u, q.v);
            qp.w = q.w * chart.jacobian;
            for (int k = 0; k < 3; ++k) {
                const auto& d = td.dofs[k];
                const double scale = d.sign * d.edge_length / (2.0 * td.area);
                qp.basis[k] = scale * (qp.y - mesh.vertices[d.opposite_vertex]);
                qp.div[k] = 2.0 * scale;
                qp.edge[k] = d.global_edge;
            }
            qps_.push_back(qp);
        }
    }
}

PotentialEvaluator::Potentials PotentialEvaluator::evaluate(Complex s,
                                                            const Eigen::VectorXcd& coeffs,
                                                            const Vec3& point) const {
    Potentials out{Vec3c::Zero(), Vec3c::Zero()};
    const Complex inv_s = 1.0 / s;
    for (const auto& qp : qps_) {
        Vec3c density = Vec3c::Zero();
        Complex div = 0.0;
        for (int k = 0; k < 3; ++k) {
            const Complex c = coeffs(qp.edge[k]);
            density += c * qp.basis[k].cast<Complex>();
            div += c * qp.div[k];
        }
        const KernelValues ker = green_with_grad(s, point - qp.y);
        out.single_layer += qp.w * (-s * ker.g * density + inv_s * div * ker.grad);
        out.double_layer += qp.w * ker.grad.cross(density);
    }
    return out;
}

Eigen::VectorXcd PotentialEvaluator::fields_at(Complex s, const Eigen::VectorXcd& phi,
                                               const Eigen::VectorXcd& psi,
                                               const std::vector<Vec3>& points) const {
    const Complex inv_s = 1.0 / s;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(6 * points.size());

    // Interpolate both densities once per quadrature point, then sweep points.
    struct Interp {
        Vec3c phi_val, psi_val;
        Complex phi_div, psi_div;
    };
    std::vector<Interp> interp(qps_.size());
    for (std::size_t q = 0; q < qps_.size(); ++q) {
        const auto& qp = qps_[q];
        Interp v{Vec3c::Zero(), Vec3c::Zero(), 0.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            const Complex cphi = phi(qp.edge[k]);
            const Complex cpsi = psi(qp.edge[k]);
            v.phi_val += cphi * qp.basis[k].cast<Complex>();
            v.psi_val += cpsi * qp.basis[k].cast<Complex>();
            v.phi_div += cphi * qp.div[k];
            v.psi_div += cpsi * qp.div[k];
        }
        interp[q] = v;
    }

    for (std::size_t p = 0; p < points.size(); ++p) {
        Vec3c s_phi = Vec3c::Zero(), d_phi = Vec3c::Zero();
        Vec3c s_psi = Vec3c::Zero(), d_psi = Vec3c::Zero();
        for (std::size_t q = 0; q < qps_.size(); ++q) {
            const auto& qp = qps_[q];
            const auto& v = interp[q];
            const KernelValues ker = green_with_grad(s, points[p] - qp.y);
            const Complex wg = qp.w * ker.g;
            const Vec3c wgrad = qp.w * ker.grad;
            s_phi += -s * wg * v.phi_val + inv_s * v.phi_div * wgrad;
            s_psi += -s * wg * v.psi_val + inv_s * v.psi_div * wgrad;
            d_phi += wgrad.cross(v.phi_val);
            d_psi += wgrad.cross(v.psi_val);
        }
        out.segment<3>(6 * p) = -s_phi + d_psi;      // E
        out.segment<3>(6 * p + 3) = -d_phi - s_psi;  // H
    }
    return out;
}

namespace {

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Ericson, Real-Time Collision Detection, closest-point-on-triangle.
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) return (p - a).norm();
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) return (p - b).norm();
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        const double v = d1 / (d1 - d3);
        return (p - (a + v * ab)).norm();
    }
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) return (p - c).norm();
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        const double w = d2 / (d2 - d6);
        return (p - (a + w * ac)).norm();
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + w * (c - b))).norm();
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    return (p - (a + v * ab + w * ac)).norm();
}

} // namespace

double distance_to_mesh(const TriangleSurfaceMesh& mesh, const Vec3& point) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& tri : mesh.triangles)
        d = std::min(d, point_triangle_distance(point, mesh.vertices[tri[0]],
                                                mesh.vertices[tri[1]], mesh.vertices[tri[2]]));
    return d;
}

FieldObservation evaluate_fields(const RTSpace& space, const CQContext& ctx,
                                 const BoundaryDensities& densities,
                                 const std::vector<Vec3>& points, int quad_order,
                                 int workers) {
    const int n = space.dof_count();
    const double clearance = 0.1 * space.mesh().max_edge_length();

    FieldObservation obs;
    obs.points = points;
    obs.distances.reserve(points.size());
    for (const auto& p : points) {
        const double d = distance_to_mesh(space.mesh(), p);
        if (!(d >= clearance))
            throw DomainError("evaluate_fields: point too close to the boundary (distance " +
                              std::to_string(d) + ", need >= " + std::to_string(clearance) + ")");
        obs.distances.push_back(d);
    }

    StageSeries stacked(ctx.steps, ctx.tableau.stages, 2 * n);
    for (int st = 0; st <= ctx.steps; ++st)
        for (int i = 0; i < ctx.tableau.stages; ++i) {
            stacked.at(st, i).segment(0, n) = densities.phi.at(st, i);
            stacked.at(st, i).segment(n, n) = densities.psi.at(st, i);
        }

    const PotentialEvaluator evaluator(space, quad_order);
    CQOptions opts;
    opts.conjugate_symmetry = true;
    opts.workers = workers;
    opts.output_dim = 6 * static_cast<int>(points.size());
    const FrequencyOp op = [&](Complex s, const Eigen::VectorXcd& mixed) {
        return evaluator.fields_at(s, mixed.segment(0, n), mixed.segment(n, n), points);
    };
    const StageSeries fields = cq_apply(ctx, op, stacked, opts);

    obs.imag_residue = fields.max_imag_abs();
    const auto nodes = node_values(fields);
    obs.efield.assign(nodes.size(), std::vector<Vec3>(points.size()));
    obs.hfield.assign(nodes.size(), std::vector<Vec3>(points.size()));
    for (std::size_t nidx = 0; nidx < nodes.size(); ++nidx)
        for (std::size_t p = 0; p < points.size(); ++p) {
            obs.efield[nidx][p] = nodes[nidx].segment<3>(6 * p).real();
            obs.hfield[nidx][p] = nodes[nidx].segment<3>(6 * p + 3).real();
        }
    return obs;
}

} // namespace gibc
