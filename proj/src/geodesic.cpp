#include "winding/error.hpp"
#include "winding/manifold.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace winding {
namespace {

std::vector<double> curve_distances(const SampledManifold& m, std::size_t source) {
    const std::size_t n = m.size();
    // Arclength along the path order 0, 1, ..., n-1.
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) s[i] = s[i - 1] + (m.points[i] - m.points[i - 1]).norm();
    const double total = m.topology == Topology::Cycle ? s.back() + (m.points.front() - m.points.back()).norm()
                                                        : s.back();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ds = std::abs(s[i] - s[source]);
        d[i] = m.topology == Topology::Cycle ? std::min(ds, total - ds) : ds;
    }
    return d;
}

// Distance to c through triangle (a, b, c) from a virtual source placed
// at distances da, db from a and b on the far side of edge ab. Returns
// infinity when the straight ray misses the edge.
double unfold(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c, double da,
              double db) {
    const double len = (b - a).norm();
    const double ac = (c - a).norm();
    const double bc = (c - b).norm();
    const double cx = (ac * ac - bc * bc + len * len) / (2.0 * len);
    const double cy2 = ac * ac - cx * cx;
    const double sx = (da * da - db * db + len * len) / (2.0 * len);
    const double sy2 = da * da - sx * sx;
    if (cy2 <= 0.0 || sy2 < 0.0) return std::numeric_limits<double>::infinity();
    const double cy = std::sqrt(cy2);
    const double sy = -std::sqrt(sy2);
    const double t = -sy / (cy - sy);
    const double x_cross = sx + t * (cx - sx);
    if (x_cross < 0.0 || x_cross > len) return std::numeric_limits<double>::infinity();
    return std::hypot(cx - sx, cy - sy);
}

std::vector<double> mesh_distances(const SampledManifold& m, std::size_t source) {
    const std::size_t n = m.size();
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t f = 0; f < m.triangles.size(); ++f) {
        for (std::size_t v : m.triangles[f]) incident[v].push_back(f);
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.push({0.0, source});
    auto relax = [&](std::size_t v, double cand) {
        if (cand < dist[v] * (1.0 - 1e-14) - 1e-300) {
            dist[v] = cand;
            queue.push({cand, v});
        }
    };
    while (!queue.empty()) {
        const auto [du, u] = queue.top();
        queue.pop();
        if (du > dist[u]) continue;
        for (const Edge& e : m.adjacency[u]) relax(e.to, du + e.length);
        // Each triangle at u can now improve its remaining vertex through
        // the edge from u to the other known vertex.
        for (std::size_t f : incident[u]) {
            const auto& t = m.triangles[f];
            std::size_t others[2];
            std::size_t k = 0;
            for (std::size_t v : t) {
                if (v != u) others[k++] = v;
            }
            for (int side = 0; side < 2; ++side) {
                const std::size_t b = others[side];
                const std::size_t c = others[1 - side];
                if (dist[b] == inf) continue;
                relax(c, unfold(m.points[u], m.points[b], m.points[c], du, dist[b]));
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] == inf) {
            throw ConnectivityError("sample " + std::to_string(i) + " is unreachable from sample " +
                                    std::to_string(source));
        }
    }
    return dist;
}

} // namespace

std::vector<double> geodesic_distances(const SampledManifold& mani, std::size_t source) {
    if (source >= mani.size()) throw InvalidArgument("geodesic source index out of range");
    if (mani.topology == Topology::Mesh) return mesh_distances(mani, source);
    return curve_distances(mani, source);
}

} // namespace winding
