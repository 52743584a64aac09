#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "wentzell/errors.hpp"
#include "wentzell/fields.hpp"
#include "wentzell/mesh.hpp"
#include "wentzell/quadrature.hpp"

namespace wentzell {

using SparseMatrix = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(double, double)>;

inline ScalarField as_field(const FieldSpec& spec) {
    return [spec](double x, double y) { return spec(x, y); };
}

namespace detail {

// P1 shape values at an element quadrature point, in element-local order.
// 1D: (1-t, t); triangle: the barycentric coordinates themselves.
struct ElementQuad {
    std::vector<QuadPoint> points;
    std::vector<std::array<double, 3>> shapes;  // per point
};

inline ElementQuad element_quad_with_shapes(const Mesh& mesh, int e, int degree) {
    ElementQuad q;
    if (mesh.dimension == 1) {
        const auto& el = mesh.elements[e];
        const double a = mesh.nodes[el[0]][0];
        const double len = mesh.element_measure(e);
        for (const auto& rp : gauss_rule(degree)) {
            q.points.push_back({a + rp.t * len, 0.0, rp.w * len});
            q.shapes.push_back({1.0 - rp.t, rp.t, 0.0});
        }
    } else {
        const auto& el = mesh.elements[e];
        const auto& p0 = mesh.nodes[el[0]];
        const auto& p1 = mesh.nodes[el[1]];
        const auto& p2 = mesh.nodes[el[2]];
        const double area = mesh.element_measure(e);
        for (const auto& rp : triangle_rule(degree)) {
            q.points.push_back({rp.l0 * p0[0] + rp.l1 * p1[0] + rp.l2 * p2[0],
                                rp.l0 * p0[1] + rp.l1 * p1[1] + rp.l2 * p2[1],
                                rp.w * area});
            q.shapes.push_back({rp.l0, rp.l1, rp.l2});
        }
    }
    return q;
}

// P1 shape values on a boundary facet (2 nonzero shapes in 2D, 1 in 1D).
struct FacetQuad {
    std::vector<QuadPoint> points;
    std::vector<std::array<double, 2>> shapes;
};

inline FacetQuad facet_quad_with_shapes(const Mesh& mesh, const Mesh::BoundaryFacet& f,
                                        int degree) {
    FacetQuad q;
    if (mesh.dimension == 1) {
        const auto& p = mesh.nodes[f.nodes[0]];
        q.points.push_back({p[0], p[1], 1.0});
        q.shapes.push_back({1.0, 0.0});
        return q;
    }
    const auto& a = mesh.nodes[f.nodes[0]];
    const auto& b = mesh.nodes[f.nodes[1]];
    const double len = mesh.facet_measure(f);
    for (const auto& rp : gauss_rule(degree)) {
        q.points.push_back({a[0] + rp.t * (b[0] - a[0]), a[1] + rp.t * (b[1] - a[1]),
                            rp.w * len});
        q.shapes.push_back({1.0 - rp.t, rp.t});
    }
    return q;
}

} // namespace detail

/// Weighted mass matrix M_w[i][j] = integral of w phi_i phi_j over the
/// domain. The quadrature is exact for polynomial weights of `w_degree`.
inline SparseMatrix assemble_mass(const Mesh& mesh, const ScalarField& w, int w_degree) {
    const int n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> trip;
    const int nv = mesh.nodes_per_element();
    for (int e = 0; e < mesh.element_count(); ++e) {
        auto q = detail::element_quad_with_shapes(mesh, e, w_degree + 2);
        const auto& el = mesh.elements[e];
        for (int a = 0; a < nv; ++a)
            for (int b = 0; b < nv; ++b) {
                double v = 0.0;
                for (std::size_t p = 0; p < q.points.size(); ++p)
                    v += q.points[p].weight * w(q.points[p].x, q.points[p].y) *
                         q.shapes[p][a] * q.shapes[p][b];
                trip.emplace_back(el[a], el[b], v);
            }
    }
    SparseMatrix M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

inline SparseMatrix assemble_mass(const Mesh& mesh, const FieldSpec& w) {
    return assemble_mass(mesh, as_field(w), w.degree());
}

/// Stiffness matrix K[i][j] = integral of grad phi_i . grad phi_j.
/// Positive semidefinite with the constant vector in its kernel.
inline SparseMatrix assemble_stiffness(const Mesh& mesh) {
    const int n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> trip;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const double meas = mesh.element_measure(e);
        if (!(meas > 0.0))
            throw NumericalError("stiffness: degenerate element " + std::to_string(e));
        const auto& el = mesh.elements[e];
        if (mesh.dimension == 1) {
            const double k = 1.0 / meas;
            trip.emplace_back(el[0], el[0], k);
            trip.emplace_back(el[0], el[1], -k);
            trip.emplace_back(el[1], el[0], -k);
            trip.emplace_back(el[1], el[1], k);
        } else {
            const auto& p0 = mesh.nodes[el[0]];
            const auto& p1 = mesh.nodes[el[1]];
            const auto& p2 = mesh.nodes[el[2]];
            // constant P1 gradients: grad phi_a = rot(opposite edge) / (2 area)
            const std::array<std::array<double, 2>, 3> g{{
                {(p1[1] - p2[1]) / (2 * meas), (p2[0] - p1[0]) / (2 * meas)},
                {(p2[1] - p0[1]) / (2 * meas), (p0[0] - p2[0]) / (2 * meas)},
                {(p0[1] - p1[1]) / (2 * meas), (p1[0] - p0[0]) / (2 * meas)},
            }};
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    trip.emplace_back(el[a], el[b],
                                      meas * (g[a][0] * g[b][0] + g[a][1] * g[b][1]));
        }
    }
    SparseMatrix K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

/// Weighted boundary mass B_w[i][j] = integral of w phi_i phi_j over the
/// boundary, stored at full node dimension with support on boundary nodes.
/// In 1D this is diagonal with w at the two endpoints.
inline SparseMatrix assemble_boundary_mass(const Mesh& mesh, const ScalarField& w,
                                           int w_degree) {
    const int n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& f : mesh.boundary_facets) {
        auto q = detail::facet_quad_with_shapes(mesh, f, w_degree + 2);
        const int nv = mesh.dimension == 1 ? 1 : 2;
        for (int a = 0; a < nv; ++a)
            for (int b = 0; b < nv; ++b) {
                double v = 0.0;
                for (std::size_t p = 0; p < q.points.size(); ++p)
                    v += q.points[p].weight * w(q.points[p].x, q.points[p].y) *
                         q.shapes[p][a] * q.shapes[p][b];
                trip.emplace_back(f.nodes[a], f.nodes[b], v);
            }
    }
    SparseMatrix B(n, n);
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

inline SparseMatrix assemble_boundary_mass(const Mesh& mesh, const FieldSpec& w) {
    return assemble_boundary_mass(mesh, as_field(w), w.degree());
}

/// Load vector l_i = integral of f phi_i over the domain.
inline Eigen::VectorXd assemble_interior_load(const Mesh& mesh, const ScalarField& f,
                                              int f_degree) {
    Eigen::VectorXd l = Eigen::VectorXd::Zero(mesh.node_count());
    const int nv = mesh.nodes_per_element();
    for (int e = 0; e < mesh.element_count(); ++e) {
        auto q = detail::element_quad_with_shapes(mesh, e, f_degree + 1);
        const auto& el = mesh.elements[e];
        for (int a = 0; a < nv; ++a)
            for (std::size_t p = 0; p < q.points.size(); ++p)
                l[el[a]] += q.points[p].weight * f(q.points[p].x, q.points[p].y) *
                            q.shapes[p][a];
    }
    return l;
}

/// Load vector l_i = integral of f phi_i over the boundary (any surface
/// weight is folded into f by the caller).
inline Eigen::VectorXd assemble_boundary_load(const Mesh& mesh, const ScalarField& f,
                                              int f_degree) {
    Eigen::VectorXd l = Eigen::VectorXd::Zero(mesh.node_count());
    for (const auto& facet : mesh.boundary_facets) {
        auto q = detail::facet_quad_with_shapes(mesh, facet, f_degree + 1);
        const int nv = mesh.dimension == 1 ? 1 : 2;
        for (int a = 0; a < nv; ++a)
            for (std::size_t p = 0; p < q.points.size(); ++p)
                l[facet.nodes[a]] += q.points[p].weight * f(q.points[p].x, q.points[p].y) *
                                     q.shapes[p][a];
    }
    return l;
}

} // namespace wentzell
