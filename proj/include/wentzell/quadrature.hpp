#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "wentzell/errors.hpp"
#include "wentzell/mesh.hpp"

namespace wentzell {

// Fixed quadrature rules. Weights sum to one on the reference domain, so
// physical weights are rule weight times element measure. Rules are exact
// for the stated polynomial degree; requests beyond the largest rule clamp
// to it (coefficient fields are restricted to low degree).

struct RulePoint1D {
    double t;  // on [0, 1]
    double w;
};

struct RulePointTri {
    double l0, l1, l2;  // barycentric
    double w;
};

namespace detail {

inline std::span<const RulePoint1D> gauss_rule_impl(int points) {
    static const std::array<RulePoint1D, 1> g1{{{0.5, 1.0}}};
    static const std::array<RulePoint1D, 2> g2{{
        {0.5 - 0.5 / std::numbers::sqrt3, 0.5},
        {0.5 + 0.5 / std::numbers::sqrt3, 0.5},
    }};
    static const std::array<RulePoint1D, 3> g3{{
        {0.5 - 0.5 * std::sqrt(0.6), 5.0 / 18.0},
        {0.5, 8.0 / 18.0},
        {0.5 + 0.5 * std::sqrt(0.6), 5.0 / 18.0},
    }};
    static const std::array<RulePoint1D, 4> g4 = [] {
        const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
        const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
        const double wa = (18.0 + std::sqrt(30.0)) / 72.0;
        const double wb = (18.0 - std::sqrt(30.0)) / 72.0;
        return std::array<RulePoint1D, 4>{{{0.5 - 0.5 * b, wb},
                                           {0.5 - 0.5 * a, wa},
                                           {0.5 + 0.5 * a, wa},
                                           {0.5 + 0.5 * b, wb}}};
    }();
    static const std::array<RulePoint1D, 5> g5 = [] {
        const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 1800.0;
        const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 1800.0;
        return std::array<RulePoint1D, 5>{{{0.5 - 0.5 * b, wb},
                                           {0.5 - 0.5 * a, wa},
                                           {0.5, 64.0 / 225.0},
                                           {0.5 + 0.5 * a, wa},
                                           {0.5 + 0.5 * b, wb}}};
    }();
    switch (points) {
        case 1: return g1;
        case 2: return g2;
        case 3: return g3;
        case 4: return g4;
        default: return g5;
    }
}

} // namespace detail

/// Gauss-Legendre rule on [0,1] exact for polynomials of `degree`.
inline std::span<const RulePoint1D> gauss_rule(int degree) {
    int points = std::max(1, (degree + 2) / 2);
    return detail::gauss_rule_impl(std::min(points, 5));
}

/// Symmetric triangle rules (barycentric): exact for degree 2, 4 or 6.
inline std::span<const RulePointTri> triangle_rule(int degree) {
    static const std::array<RulePointTri, 3> d2{{
        {2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3},
        {1.0 / 6, 2.0 / 3, 1.0 / 6, 1.0 / 3},
        {1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 3},
    }};
    static const std::array<RulePointTri, 6> d4 = [] {
        const double a1 = 0.816847572980459, b1 = 0.091576213509771;
        const double w1 = 0.109951743655322;
        const double a2 = 0.108103018168070, b2 = 0.445948490915965;
        const double w2 = 0.223381589678011;
        return std::array<RulePointTri, 6>{{{a1, b1, b1, w1},
                                            {b1, a1, b1, w1},
                                            {b1, b1, a1, w1},
                                            {a2, b2, b2, w2},
                                            {b2, a2, b2, w2},
                                            {b2, b2, a2, w2}}};
    }();
    static const std::array<RulePointTri, 12> d6 = [] {
        const double a1 = 0.873821971016996, b1 = 0.063089014491502;
        const double w1 = 0.050844906370207;
        const double a2 = 0.501426509658179, b2 = 0.249286745170910;
        const double w2 = 0.116786275726379;
        const double p = 0.636502499121399, q = 0.310352451033785,
                     r = 0.053145049844816;
        const double w3 = 0.082851075618374;
        return std::array<RulePointTri, 12>{{{a1, b1, b1, w1},
                                             {b1, a1, b1, w1},
                                             {b1, b1, a1, w1},
                                             {a2, b2, b2, w2},
                                             {b2, a2, b2, w2},
                                             {b2, b2, a2, w2},
                                             {p, q, r, w3},
                                             {p, r, q, w3},
                                             {q, p, r, w3},
                                             {q, r, p, w3},
                                             {r, p, q, w3},
                                             {r, q, p, w3}}};
    }();
    if (degree <= 2) return d2;
    if (degree <= 4) return d4;
    return d6;
}

/// A physical quadrature point with its weight (measure included).
struct QuadPoint {
    double x, y;
    double weight;
};

/// Physical quadrature points of one element, exact for `degree`.
inline std::vector<QuadPoint> element_quadrature(const Mesh& mesh, int e, int degree) {
    std::vector<QuadPoint> out;
    const auto& el = mesh.elements[e];
    const double meas = mesh.element_measure(e);
    if (mesh.dimension == 1) {
        const double a = mesh.nodes[el[0]][0];
        for (const auto& rp : gauss_rule(degree))
            out.push_back({a + rp.t * meas, 0.0, rp.w * meas});
    } else {
        const auto& p0 = mesh.nodes[el[0]];
        const auto& p1 = mesh.nodes[el[1]];
        const auto& p2 = mesh.nodes[el[2]];
        for (const auto& rp : triangle_rule(degree))
            out.push_back({rp.l0 * p0[0] + rp.l1 * p1[0] + rp.l2 * p2[0],
                           rp.l0 * p0[1] + rp.l1 * p1[1] + rp.l2 * p2[1],
                           rp.w * meas});
    }
    return out;
}

/// Physical quadrature points of one boundary facet. 1D facets carry the
/// counting measure: a single point of weight one.
inline std::vector<QuadPoint> facet_quadrature(const Mesh& mesh,
                                               const Mesh::BoundaryFacet& f,
                                               int degree) {
    std::vector<QuadPoint> out;
    if (mesh.dimension == 1) {
        const auto& p = mesh.nodes[f.nodes[0]];
        out.push_back({p[0], p[1], 1.0});
        return out;
    }
    const auto& a = mesh.nodes[f.nodes[0]];
    const auto& b = mesh.nodes[f.nodes[1]];
    const double len = mesh.facet_measure(f);
    for (const auto& rp : gauss_rule(degree))
        out.push_back({a[0] + rp.t * (b[0] - a[0]), a[1] + rp.t * (b[1] - a[1]),
                       rp.w * len});
    return out;
}

} // namespace wentzell
