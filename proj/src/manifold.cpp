#include "winding/manifold.hpp"

#include "winding/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace winding {

void SampledManifold::validate() const {
    const std::size_t n = points.size();
    if (n == 0) throw InvalidArgument("manifold has no samples");
    if (normals.size() != n || weights.size() != n || adjacency.size() != n || boundary.size() != n) {
        throw InvalidArgument("manifold sample arrays differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(normals[i].norm() - 1.0) > 1e-10) {
            throw InvalidArgument("normal " + std::to_string(i) + " is not unit length");
        }
        if (!(weights[i] > 0.0)) {
            throw InvalidArgument("weight " + std::to_string(i) + " is not positive");
        }
        for (const Edge& e : adjacency[i]) {
            if (e.to >= n) throw InvalidArgument("edge points past the last sample");
            const double len = (points[i] - points[e.to]).norm();
            if (std::abs(len - e.length) > 1e-10) {
                throw InvalidArgument("edge " + std::to_string(i) + "-" + std::to_string(e.to) +
                                      " length disagrees with its endpoints");
            }
        }
    }
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (const Edge& e : adjacency[u]) {
            if (!seen[e.to]) {
                seen[e.to] = 1;
                ++reached;
                stack.push_back(e.to);
            }
        }
    }
    if (reached != n) {
        const auto first = static_cast<std::size_t>(std::find(seen.begin(), seen.end(), 0) - seen.begin());
        throw ConnectivityError("manifold is disconnected: sample " + std::to_string(first) +
                                " is unreachable from sample 0 (" + std::to_string(n - reached) +
                                " of " + std::to_string(n) + " samples unreachable)");
    }
}

double SampledManifold::ambient_diameter() const {
    const std::size_t n = points.size();
    double best = 0.0;
    if (n <= 20000) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, (points[i] - points[j]).squaredNorm());
        }
        return std::sqrt(best);
    }
    std::size_t a = 0;
    for (int sweep = 0; sweep < 3; ++sweep) {
        std::size_t far = a;
        double far_d = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = (points[a] - points[j]).squaredNorm();
            if (d > far_d) {
                far_d = d;
                far = j;
            }
        }
        best = std::max(best, far_d);
        a = far;
    }
    return std::sqrt(best);
}

double SampledManifold::median_edge_length() const {
    std::vector<double> lens;
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        for (const Edge& e : adjacency[i]) {
            if (e.to > i) lens.push_back(e.length);
        }
    }
    if (lens.empty()) return 0.0;
    std::nth_element(lens.begin(), lens.begin() + lens.size() / 2, lens.end());
    return lens[lens.size() / 2];
}

namespace {

void add_edge(SampledManifold& m, std::size_t i, std::size_t j) {
    const double len = (m.points[i] - m.points[j]).norm();
    m.adjacency[i].push_back({j, len});
    m.adjacency[j].push_back({i, len});
}

} // namespace

SampledManifold manifold_from_polyline(const std::vector<Eigen::Vector2d>& points,
                                       const std::vector<Eigen::Vector2d>& normals, bool closed) {
    const std::size_t n = points.size();
    if (n < 2) throw InvalidArgument("polyline needs at least two samples");
    if (normals.size() != n) throw InvalidArgument("polyline normals and points differ in length");
    SampledManifold m;
    m.dim = 1;
    m.topology = closed ? Topology::Cycle : Topology::Path;
    m.points.resize(n);
    m.normals.resize(n);
    m.weights.assign(n, 0.0);
    m.adjacency.resize(n);
    m.boundary.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        m.points[i] = {points[i].x(), points[i].y(), 0.0};
        m.normals[i] = {normals[i].x(), normals[i].y(), 0.0};
    }
    const std::size_t segs = closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i) {
        const std::size_t j = (i + 1) % n;
        add_edge(m, i, j);
        const double len = m.adjacency[i].back().length;
        m.weights[i] += 0.5 * len;
        m.weights[j] += 0.5 * len;
    }
    if (!closed) m.boundary.front() = m.boundary.back() = 1;
    m.validate();
    return m;
}

SampledManifold manifold_from_curve(const SampledCurve& curve) {
    curve.validate();
    SampledManifold m = manifold_from_polyline(curve.points, curve.normals, false);
    for (std::size_t i = 0; i < m.size(); ++i) m.weights[i] = curve.arc_weights[i];
    return m;
}

SampledManifold manifold_from_mesh(const std::vector<Eigen::Vector3d>& vertices,
                                   const std::vector<std::array<std::size_t, 3>>& faces) {
    const std::size_t n = vertices.size();
    if (n < 3 || faces.empty()) throw InvalidArgument("mesh needs at least one triangle");
    SampledManifold m;
    m.dim = 2;
    m.topology = Topology::Mesh;
    m.points = vertices;
    m.normals.assign(n, Eigen::Vector3d::Zero());
    m.weights.assign(n, 0.0);
    m.adjacency.resize(n);
    m.boundary.assign(n, 0);
    m.triangles = faces;
    std::map<std::pair<std::size_t, std::size_t>, int> edge_faces;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& t = faces[f];
        for (std::size_t k = 0; k < 3; ++k) {
            if (t[k] >= n) throw InvalidArgument("face " + std::to_string(f + 1) + " references a missing vertex");
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw InvalidArgument("face " + std::to_string(f + 1) + " repeats a vertex");
        }
        const Eigen::Vector3d cross = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
        const double area = 0.5 * cross.norm();
        if (!(area > 0.0)) throw InvalidArgument("face " + std::to_string(f + 1) + " is degenerate");
        for (std::size_t k = 0; k < 3; ++k) {
            m.normals[t[k]] += cross;
            m.weights[t[k]] += area / 3.0;
            const std::size_t a = std::min(t[k], t[(k + 1) % 3]);
            const std::size_t b = std::max(t[k], t[(k + 1) % 3]);
            ++edge_faces[{a, b}];
        }
    }
    for (const auto& [e, count] : edge_faces) {
        add_edge(m, e.first, e.second);
        if (count == 1) m.boundary[e.first] = m.boundary[e.second] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double len = m.normals[i].norm();
        if (!(len > 0.0)) throw InvalidArgument("vertex " + std::to_string(i + 1) + " has no incident face");
        m.normals[i] /= len;
    }
    m.validate();
    return m;
}

SampledManifold read_mesh_text(std::istream& in) {
    std::vector<Eigen::Vector3d> verts;
    std::vector<std::array<std::size_t, 3>> faces;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) throw ParseError("vertex needs three coordinates", line_no);
            std::string extra;
            if (ls >> extra) throw ParseError("unexpected token '" + extra + "' after vertex", line_no);
            verts.emplace_back(x, y, z);
        } else if (tag == "f") {
            long long i, j, k;
            if (!(ls >> i >> j >> k)) throw ParseError("face needs three vertex indices", line_no);
            std::string extra;
            if (ls >> extra) throw ParseError("only triangular faces are supported", line_no);
            for (long long idx : {i, j, k}) {
                if (idx < 1 || static_cast<std::size_t>(idx) > verts.size()) {
                    throw ParseError("face index " + std::to_string(idx) + " is out of range (1-based, " +
                                         std::to_string(verts.size()) + " vertices so far)",
                                     line_no);
                }
            }
            faces.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                             static_cast<std::size_t>(k - 1)});
        } else {
            throw ParseError("unknown record '" + tag + "' (expected v or f)", line_no);
        }
    }
    if (faces.empty()) throw ParseError("mesh has no faces", line_no);
    try {
        return manifold_from_mesh(verts, faces);
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no);
    }
}

void write_mesh_text(std::ostream& out, const SampledManifold& mesh) {
    char buf[128];
    for (const auto& p : mesh.points) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
        out << buf;
    }
    for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

SampledManifold read_manifold_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string first;
    std::getline(in, first);
    in.clear();
    in.seekg(0);
    if (first.rfind("x,px,py", 0) == 0) return manifold_from_curve(read_curve_csv(in));
    return read_mesh_text(in);
}

SampledManifold make_circle(std::size_t n, double radius) {
    if (n < 3) throw InvalidArgument("circle needs at least three samples");
    std::vector<Eigen::Vector2d> pts(n), nrm(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = two_pi * static_cast<double>(i) / static_cast<double>(n);
        nrm[i] = {std::cos(t), std::sin(t)};
        pts[i] = radius * nrm[i];
    }
    return manifold_from_polyline(pts, nrm, true);
}

SampledManifold make_segment(std::size_t n, double length) {
    if (n < 2) throw InvalidArgument("segment needs at least two samples");
    std::vector<Eigen::Vector2d> pts(n), nrm(n, Eigen::Vector2d(0.0, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = {length * static_cast<double>(i) / static_cast<double>(n - 1), 0.0};
    }
    return manifold_from_polyline(pts, nrm, false);
}

SampledManifold make_flat_patch(std::size_t n, double half) {
    if (n < 2) throw InvalidArgument("flat patch needs at least 2 x 2 vertices");
    std::vector<Eigen::Vector3d> verts;
    verts.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double t = static_cast<double>(i) / static_cast<double>(n - 1);
            const double u = static_cast<double>(j) / static_cast<double>(n - 1);
            verts.emplace_back(-half * (1 - u) + half * u, -half * (1 - t) + half * t, 0.0);
        }
    }
    std::vector<std::array<std::size_t, 3>> faces;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const std::size_t a = i * n + j, b = a + 1, c = a + n, d = c + 1;
            faces.push_back({a, b, d});
            faces.push_back({a, d, c});
        }
    }
    return manifold_from_mesh(verts, faces);
}

SampledManifold make_icosphere(std::size_t subdivisions, double radius) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                                      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                                      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) p.normalize();
    std::vector<std::array<std::size_t, 3>> f = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (std::size_t s = 0; s < subdivisions; ++s) {
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> mid;
        auto midpoint = [&](std::size_t a, std::size_t b) {
            const auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            v.push_back((v[a] + v[b]).normalized());
            mid.emplace(key, v.size() - 1);
            return v.size() - 1;
        };
        std::vector<std::array<std::size_t, 3>> next;
        next.reserve(f.size() * 4);
        for (const auto& tri : f) {
            const std::size_t ab = midpoint(tri[0], tri[1]);
            const std::size_t bc = midpoint(tri[1], tri[2]);
            const std::size_t ca = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }
    for (auto& p : v) p *= radius;
    return manifold_from_mesh(v, f);
}

} // namespace winding
