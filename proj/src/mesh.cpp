#include "gibc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "gibc/errors.hpp"

namespace gibc {

Vec3 TriangleSurfaceMesh::triangle_centroid(int t) const {
    const auto& tri = triangles[t];
    return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

Vec3 TriangleSurfaceMesh::triangle_normal_scaled(int t) const {
    const auto& tri = triangles[t];
    const Vec3 a = vertices[tri[1]] - vertices[tri[0]];
    const Vec3 b = vertices[tri[2]] - vertices[tri[0]];
    return a.cross(b);
}

Vec3 TriangleSurfaceMesh::triangle_unit_normal(int t) const {
    return triangle_normal_scaled(t).normalized();
}

double TriangleSurfaceMesh::triangle_area(int t) const {
    return 0.5 * triangle_normal_scaled(t).norm();
}

double TriangleSurfaceMesh::edge_length(int e) const {
    return (vertices[edges[e][0]] - vertices[edges[e][1]]).norm();
}

double TriangleSurfaceMesh::max_edge_length() const {
    double h = 0.0;
    for (int e = 0; e < edge_count(); ++e) h = std::max(h, edge_length(e));
    return h;
}

double TriangleSurfaceMesh::total_area() const {
    double a = 0.0;
    for (int t = 0; t < triangle_count(); ++t) a += triangle_area(t);
    return a;
}

double TriangleSurfaceMesh::diameter_estimate() const {
    Vec3 lo = vertices.empty() ? Vec3::Zero() : vertices.front();
    Vec3 hi = lo;
    for (const auto& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return (hi - lo).norm();
}

bool TriangleSurfaceMesh::is_closed() const {
    std::vector<int> use_count(edges.size(), 0);
    std::vector<int> sign_sum(edges.size(), 0);
    for (const auto& refs : triangle_to_edges) {
        for (const auto& r : refs) {
            use_count[r.edge]++;
            sign_sum[r.edge] += r.sign;
        }
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (use_count[e] != 2 || sign_sum[e] != 0) return false;
    }
    return true;
}

void index_edges(TriangleSurfaceMesh& mesh) {
    mesh.edges.clear();
    mesh.triangle_to_edges.assign(mesh.triangles.size(), {});
    std::map<std::pair<int, int>, int> edge_ids;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int a = tri[(k + 1) % 3];
            const int b = tri[(k + 2) % 3];
            const int lo = std::min(a, b), hi = std::max(a, b);
            auto [it, inserted] = edge_ids.try_emplace({lo, hi}, mesh.edge_count());
            if (inserted) mesh.edges.push_back({lo, hi});
            mesh.triangle_to_edges[t][k] = {it->second, a == lo ? +1 : -1};
        }
    }
}

void validate_mesh(const TriangleSurfaceMesh& mesh, bool expect_closed) {
    if (mesh.triangle_to_edges.size() != mesh.triangles.size())
        throw DomainError("mesh: edge index not built");
    if (expect_closed && !mesh.is_closed())
        throw DomainError("mesh: surface is not closed/watertight");
    const double diam = mesh.diameter_estimate();
    const double area_floor = 1e-14 * diam * diam;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        if (!(mesh.triangle_area(t) > area_floor))
            throw DomainError("mesh: degenerate triangle " + std::to_string(t));
    }
}

namespace {

struct MidpointCache {
    std::map<std::pair<int, int>, int> ids;
    int lookup(TriangleSurfaceMesh& mesh, int a, int b, const SurfaceSnap* snap) {
        const auto key = std::minmax(a, b);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        Vec3 mid = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
        if (snap && *snap) mid = (*snap)(mid);
        const int id = mesh.vertex_count();
        mesh.vertices.push_back(mid);
        ids.emplace(key, id);
        return id;
    }
};

TriangleSurfaceMesh icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleSurfaceMesh m;
    m.vertices = {
        {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1},
    };
    m.triangles = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    return m;
}

} // namespace

TriangleSurfaceMesh generate_icosphere(int level, double radius) {
    if (level < 0) throw DomainError("icosphere: level must be non-negative");
    if (level > 7) throw ResourceError("icosphere: level > 7 exceeds the memory guard");
    if (!(radius > 0)) throw DomainError("icosphere: radius must be positive");

    TriangleSurfaceMesh mesh = icosahedron();
    const SurfaceSnap snap = sphere_snap(radius);
    for (auto& v : mesh.vertices) v = snap(v);
    index_edges(mesh);
    for (int l = 0; l < level; ++l) mesh = refine(mesh, &snap);
    validate_mesh(mesh);
    return mesh;
}

TriangleSurfaceMesh generate_torus(double major_radius, double minor_radius,
                                   int n_major, int n_minor) {
    if (!(major_radius > 0) || !(minor_radius > 0))
        throw DomainError("torus: radii must be positive");
    if (!(minor_radius < major_radius))
        throw DomainError("torus: minor radius must be below the major radius");
    if (n_major < 3 || n_minor < 3)
        throw DomainError("torus: need at least 3 segments per direction");

    TriangleSurfaceMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(n_major) * n_minor);
    for (int i = 0; i < n_major; ++i) {
        const double u = 2.0 * M_PI * i / n_major;
        for (int j = 0; j < n_minor; ++j) {
            const double v = 2.0 * M_PI * j / n_minor;
            const double ring = major_radius + minor_radius * std::cos(v);
            mesh.vertices.emplace_back(ring * std::cos(u), ring * std::sin(u),
                                       minor_radius * std::sin(v));
        }
    }
    auto vid = [&](int i, int j) {
        return ((i % n_major + n_major) % n_major) * n_minor +
               ((j % n_minor + n_minor) % n_minor);
    };
    // Split each parameter quad along one diagonal; winding chosen so normals
    // face away from the tube axis (outward).
    for (int i = 0; i < n_major; ++i) {
        for (int j = 0; j < n_minor; ++j) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    }
    index_edges(mesh);

    // Orientation check: at v = 0 (outer equator) the outward normal is radial.
    {
        const Vec3 n = mesh.triangle_unit_normal(0);
        const Vec3 c = mesh.triangle_centroid(0);
        const Vec3 radial(c.x(), c.y(), 0.0);
        if (n.dot(radial) < 0) {
            for (auto& tri : mesh.triangles) std::swap(tri[1], tri[2]);
            index_edges(mesh);
        }
    }
    validate_mesh(mesh);
    return mesh;
}

TriangleSurfaceMesh refine(const TriangleSurfaceMesh& mesh, const SurfaceSnap* snap) {
    TriangleSurfaceMesh out;
    out.vertices = mesh.vertices;
    out.triangles.reserve(mesh.triangles.size() * 4);
    MidpointCache cache;
    for (const auto& tri : mesh.triangles) {
        const int m01 = cache.lookup(out, tri[0], tri[1], snap);
        const int m12 = cache.lookup(out, tri[1], tri[2], snap);
        const int m20 = cache.lookup(out, tri[2], tri[0], snap);
        out.triangles.push_back({tri[0], m01, m20});
        out.triangles.push_back({tri[1], m12, m01});
        out.triangles.push_back({tri[2], m20, m12});
        out.triangles.push_back({m01, m12, m20});
    }
    index_edges(out);
    return out;
}

SurfaceSnap sphere_snap(double radius) {
    return [radius](const Vec3& p) -> Vec3 { return radius * p.normalized(); };
}

SurfaceSnap torus_snap(double major_radius, double minor_radius) {
    return [major_radius, minor_radius](const Vec3& p) -> Vec3 {
        const double ring = std::hypot(p.x(), p.y());
        Vec3 ring_dir = ring > 0 ? Vec3(p.x() / ring, p.y() / ring, 0.0) : Vec3(1, 0, 0);
        const Vec3 center = major_radius * ring_dir;
        Vec3 offset = p - center;
        const double len = offset.norm();
        if (len == 0) return center + minor_radius * Vec3(0, 0, 1);
        return center + minor_radius / len * offset;
    };
}

void write_off(std::ostream& os, const TriangleSurfaceMesh& mesh) {
    os << "OFF\n"
       << mesh.vertex_count() << ' ' << mesh.triangle_count() << ' '
       << mesh.edge_count() << '\n';
    os.precision(17);
    for (const auto& v : mesh.vertices)
        os << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& t : mesh.triangles)
        os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

TriangleSurfaceMesh read_off(std::istream& is) {
    std::string header;
    is >> header;
    if (header != "OFF") throw DomainError("read_off: missing OFF header");
    int nv = 0, nf = 0, ne = 0;
    is >> nv >> nf >> ne;
    if (!is || nv <= 0 || nf <= 0) throw DomainError("read_off: bad counts");
    TriangleSurfaceMesh mesh;
    mesh.vertices.resize(nv);
    for (auto& v : mesh.vertices) is >> v.x() >> v.y() >> v.z();
    mesh.triangles.resize(nf);
    for (auto& t : mesh.triangles) {
        int k = 0;
        is >> k;
        if (k != 3) throw DomainError("read_off: only triangles are supported");
        is >> t[0] >> t[1] >> t[2];
    }
    if (!is) throw DomainError("read_off: truncated file");
    index_edges(mesh);
    return mesh;
}

} // namespace gibc
