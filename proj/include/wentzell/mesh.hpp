#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <queue>
#include <vector>

#include <nlohmann/json.hpp>

#include "wentzell/errors.hpp"

namespace wentzell {

/// Simplicial mesh of a 1D interval or a 2D polygonal domain.
///
/// Elements are index tuples into `nodes`: 2 indices per 1D segment,
/// 3 per triangle (the unused slot holds -1 in 1D). Boundary facets are
/// the element faces owned by exactly one element: a single node in 1D,
/// an edge in 2D. 2D triangles are stored counterclockwise, so a boundary
/// edge (a, b) taken in element order has the domain on its left; the
/// orientation flag fixes the outward side explicitly:
///   1D: orientation = -1 at the left endpoint, +1 at the right endpoint
///       (the outward normal direction on the axis),
///   2D: orientation = +1 means the outward normal of edge (a, b) is the
///       right-hand rotation (d.y, -d.x)/|d| of the edge direction d.
struct Mesh {
    struct BoundaryFacet {
        std::array<int, 2> nodes{-1, -1};
        int orientation = 1;
    };

    int dimension = 1;
    std::vector<std::array<double, 2>> nodes;       // (x, 0) in 1D
    std::vector<std::array<int, 3>> elements;       // last index -1 in 1D
    std::vector<BoundaryFacet> boundary_facets;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int element_count() const { return static_cast<int>(elements.size()); }

    int nodes_per_element() const { return dimension == 1 ? 2 : 3; }

    /// Length of a segment or (positive) area of a CCW triangle.
    double element_measure(int e) const {
        const auto& el = elements[e];
        if (dimension == 1) {
            return nodes[el[1]][0] - nodes[el[0]][0];
        }
        const auto& a = nodes[el[0]];
        const auto& b = nodes[el[1]];
        const auto& c = nodes[el[2]];
        return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
    }

    /// Surface measure of a boundary facet: 1 in 1D (counting measure),
    /// edge length in 2D.
    double facet_measure(const BoundaryFacet& f) const {
        if (dimension == 1) return 1.0;
        const auto& a = nodes[f.nodes[0]];
        const auto& b = nodes[f.nodes[1]];
        return std::hypot(b[0] - a[0], b[1] - a[1]);
    }

    /// Indices of all nodes lying on some boundary facet, ascending.
    std::vector<int> boundary_nodes() const {
        std::vector<int> out;
        for (const auto& f : boundary_facets) {
            out.push_back(f.nodes[0]);
            if (f.nodes[1] >= 0) out.push_back(f.nodes[1]);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Recomputes the boundary as the set of element faces owned by a
    /// single element, in the face order of the owning element.
    std::vector<BoundaryFacet> extract_boundary() const {
        std::vector<BoundaryFacet> out;
        if (dimension == 1) {
            std::map<int, int> use;
            for (const auto& el : elements) {
                use[el[0]]++;
                use[el[1]]++;
            }
            for (const auto& el : elements) {
                if (use.at(el[0]) == 1) out.push_back({{el[0], -1}, -1});
                if (use.at(el[1]) == 1) out.push_back({{el[1], -1}, +1});
            }
            return out;
        }
        std::map<std::pair<int, int>, int> use;
        for (const auto& el : elements) {
            for (int k = 0; k < 3; ++k) {
                int a = el[k], b = el[(k + 1) % 3];
                use[{std::min(a, b), std::max(a, b)}]++;
            }
        }
        for (const auto& el : elements) {
            for (int k = 0; k < 3; ++k) {
                int a = el[k], b = el[(k + 1) % 3];
                if (use.at({std::min(a, b), std::max(a, b)}) == 1)
                    out.push_back({{a, b}, +1});
            }
        }
        return out;
    }

    /// Checks every structural invariant; throws NumericalError on the
    /// first violation.
    void validate() const {
        if (dimension != 1 && dimension != 2)
            throw NumericalError("mesh: dimension must be 1 or 2");
        const int n = node_count();
        for (const auto& el : elements) {
            for (int k = 0; k < nodes_per_element(); ++k)
                if (el[k] < 0 || el[k] >= n)
                    throw NumericalError("mesh: element node index out of range");
        }
        for (int e = 0; e < element_count(); ++e)
            if (!(element_measure(e) > 0.0))
                throw NumericalError("mesh: element " + std::to_string(e) +
                                     " has non-positive measure");
        // boundary_facets must equal the single-owner face set
        auto extracted = extract_boundary();
        auto key = [](const BoundaryFacet& f) {
            return std::make_pair(std::min(f.nodes[0], f.nodes[1]),
                                  std::max(f.nodes[0], f.nodes[1]));
        };
        std::vector<std::pair<int, int>> have, want;
        for (const auto& f : boundary_facets) have.push_back(key(f));
        for (const auto& f : extracted) want.push_back(key(f));
        std::sort(have.begin(), have.end());
        std::sort(want.begin(), want.end());
        if (have != want)
            throw NumericalError("mesh: boundary_facets do not match the facets "
                                 "owned by exactly one element");
        for (const auto& f : boundary_facets) {
            if (f.nodes[0] < 0 || f.nodes[0] >= n ||
                (dimension == 2 && (f.nodes[1] < 0 || f.nodes[1] >= n)))
                throw NumericalError("mesh: facet node index out of range");
            if (f.orientation != 1 && f.orientation != -1)
                throw NumericalError("mesh: facet orientation must be +-1");
        }
        // connectivity of the element union (BFS over shared nodes)
        if (!elements.empty()) {
            std::vector<std::vector<int>> node_elems(n);
            for (int e = 0; e < element_count(); ++e)
                for (int k = 0; k < nodes_per_element(); ++k)
                    node_elems[elements[e][k]].push_back(e);
            std::vector<char> seen(elements.size(), 0);
            std::queue<int> q;
            q.push(0);
            seen[0] = 1;
            std::size_t reached = 1;
            while (!q.empty()) {
                int e = q.front();
                q.pop();
                for (int k = 0; k < nodes_per_element(); ++k)
                    for (int other : node_elems[elements[e][k]])
                        if (!seen[other]) {
                            seen[other] = 1;
                            ++reached;
                            q.push(other);
                        }
            }
            if (reached != elements.size())
                throw NumericalError("mesh: element union is not connected");
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["dimension"] = dimension;
        auto& jn = j["nodes"] = nlohmann::json::array();
        for (const auto& p : nodes) {
            if (dimension == 1)
                jn.push_back({p[0]});
            else
                jn.push_back({p[0], p[1]});
        }
        auto& je = j["elements"] = nlohmann::json::array();
        for (const auto& el : elements) {
            if (dimension == 1)
                je.push_back({el[0], el[1]});
            else
                je.push_back({el[0], el[1], el[2]});
        }
        auto& jf = j["boundary_facets"] = nlohmann::json::array();
        for (const auto& f : boundary_facets) {
            nlohmann::json e;
            e["nodes"] = dimension == 1 ? nlohmann::json{f.nodes[0]}
                                        : nlohmann::json{f.nodes[0], f.nodes[1]};
            e["orientation"] = f.orientation;
            jf.push_back(e);
        }
        return j;
    }
};

/// Uniform partition of (a, b) into n segments.
inline Mesh build_interval_mesh(double a, double b, int n) {
    if (!(a < b)) throw ConfigError("interval mesh: requires a < b");
    if (n < 1) throw ConfigError("interval mesh: requires n >= 1");
    Mesh m;
    m.dimension = 1;
    m.nodes.resize(n + 1);
    for (int i = 0; i <= n; ++i)
        m.nodes[i] = {a + (b - a) * static_cast<double>(i) / n, 0.0};
    m.elements.resize(n);
    for (int e = 0; e < n; ++e) m.elements[e] = {e, e + 1, -1};
    m.boundary_facets = {{{0, -1}, -1}, {{n, -1}, +1}};
    return m;
}

/// Uniform n-by-n grid of [0,1]^2, each cell split along the diagonal
/// from its lower-left to its upper-right corner (fixed for reproducibility).
inline Mesh build_square_mesh(int n) {
    if (n < 1) throw ConfigError("square mesh: requires n >= 1");
    Mesh m;
    m.dimension = 2;
    const int s = n + 1;
    m.nodes.resize(static_cast<std::size_t>(s) * s);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            m.nodes[j * s + i] = {static_cast<double>(i) / n, static_cast<double>(j) / n};
    m.elements.reserve(static_cast<std::size_t>(2) * n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            int v00 = j * s + i, v10 = v00 + 1, v01 = v00 + s, v11 = v01 + 1;
            m.elements.push_back({v00, v10, v11});
            m.elements.push_back({v00, v11, v01});
        }
    m.boundary_facets = m.extract_boundary();
    return m;
}

/// Triangulation of the regular n_sectors-gon inscribed in the unit circle:
/// a center node plus n_rings concentric rings of vertices at the same
/// angular positions, so the element union is exactly the polygon.
inline Mesh build_disk_mesh(int n_rings, int n_sectors) {
    if (n_rings < 1) throw ConfigError("disk mesh: requires n_rings >= 1");
    if (n_sectors < 3) throw ConfigError("disk mesh: requires n_sectors >= 3");
    Mesh m;
    m.dimension = 2;
    m.nodes.push_back({0.0, 0.0});
    for (int r = 1; r <= n_rings; ++r) {
        double rad = static_cast<double>(r) / n_rings;
        for (int j = 0; j < n_sectors; ++j) {
            double th = 2.0 * std::numbers::pi * j / n_sectors;
            m.nodes.push_back({rad * std::cos(th), rad * std::sin(th)});
        }
    }
    auto ring_node = [&](int r, int j) {
        return 1 + (r - 1) * n_sectors + (j % n_sectors);
    };
    for (int j = 0; j < n_sectors; ++j)
        m.elements.push_back({0, ring_node(1, j), ring_node(1, j + 1)});
    for (int r = 1; r < n_rings; ++r)
        for (int j = 0; j < n_sectors; ++j) {
            int a = ring_node(r, j), b = ring_node(r + 1, j);
            int c = ring_node(r + 1, j + 1), d = ring_node(r, j + 1);
            m.elements.push_back({a, b, c});
            m.elements.push_back({a, c, d});
        }
    m.boundary_facets = m.extract_boundary();
    return m;
}

/// Integrates a weight over the boundary: sum of facet quadrature. In 1D
/// the surface measure is the counting measure on the two endpoints, so
/// this is w(a) + w(b); in 2D a two-point Gauss rule per edge (exact for
/// cubics along each edge). With w == 1 this returns |Gamma|.
inline double boundary_measure(const Mesh& mesh,
                               const std::function<double(double, double)>& weight) {
    double total = 0.0;
    for (const auto& f : mesh.boundary_facets) {
        if (mesh.dimension == 1) {
            const auto& p = mesh.nodes[f.nodes[0]];
            total += weight(p[0], p[1]);
        } else {
            const auto& a = mesh.nodes[f.nodes[0]];
            const auto& b = mesh.nodes[f.nodes[1]];
            const double len = mesh.facet_measure(f);
            const double t = 0.5 / std::numbers::sqrt3;
            for (double s : {0.5 - t, 0.5 + t})
                total += 0.5 * len *
                         weight(a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]));
        }
    }
    return total;
}

/// Total measure of the element union (length or area).
inline double domain_measure(const Mesh& mesh) {
    double total = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) total += mesh.element_measure(e);
    return total;
}

} // namespace wentzell
