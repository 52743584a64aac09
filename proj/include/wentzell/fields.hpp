#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wentzell/errors.hpp"
#include "wentzell/mesh.hpp"
#include "wentzell/quadrature.hpp"

namespace wentzell {

/// A serializable scalar field: a constant or a polynomial in the
/// coordinates. JSON forms:
///   {"kind": "constant",   "coeffs": [c]}
///   {"kind": "polynomial", "coeffs": [c0, c1, ...]}        sum ck * x^k
///   {"kind": "polynomial", "coeffs": [[c, px, py], ...]}   sum c * x^px * y^py
struct FieldSpec {
    enum class Kind { Constant, Polynomial };

    struct Term {
        double coeff = 0.0;
        int px = 0;
        int py = 0;
    };

    Kind kind = Kind::Constant;
    double constant = 0.0;
    std::vector<Term> terms;

    static FieldSpec constant_field(double c) {
        FieldSpec f;
        f.kind = Kind::Constant;
        f.constant = c;
        return f;
    }

    static FieldSpec polynomial(std::vector<Term> t) {
        FieldSpec f;
        f.kind = Kind::Polynomial;
        f.terms = std::move(t);
        return f;
    }

    double operator()(double x, double y = 0.0) const {
        if (kind == Kind::Constant) return constant;
        double v = 0.0;
        for (const auto& t : terms)
            v += t.coeff * std::pow(x, t.px) * std::pow(y, t.py);
        return v;
    }

    /// Total polynomial degree (0 for constants).
    int degree() const {
        if (kind == Kind::Constant) return 0;
        int d = 0;
        for (const auto& t : terms) d = std::max(d, t.px + t.py);
        return d;
    }

    static FieldSpec from_json(const nlohmann::json& j) {
        if (!j.contains("kind") || !j["kind"].is_string())
            throw ConfigError("field: missing \"kind\"");
        const std::string kind = j["kind"].get<std::string>();
        if (!j.contains("coeffs") || !j["coeffs"].is_array())
            throw ConfigError("field: missing \"coeffs\" array");
        const auto& coeffs = j["coeffs"];
        if (kind == "constant") {
            if (coeffs.size() != 1 || !coeffs[0].is_number())
                throw ConfigError("field: constant takes exactly one coefficient");
            return constant_field(coeffs[0].get<double>());
        }
        if (kind == "polynomial") {
            std::vector<Term> terms;
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                const auto& c = coeffs[i];
                if (c.is_number()) {
                    terms.push_back({c.get<double>(), static_cast<int>(i), 0});
                } else if (c.is_array() && (c.size() == 2 || c.size() == 3)) {
                    Term t;
                    t.coeff = c[0].get<double>();
                    t.px = c[1].get<int>();
                    t.py = c.size() == 3 ? c[2].get<int>() : 0;
                    if (t.px < 0 || t.py < 0)
                        throw ConfigError("field: negative exponent");
                    terms.push_back(t);
                } else {
                    throw ConfigError("field: coeffs entries must be numbers or "
                                      "[coeff, px(, py)] triples");
                }
            }
            return polynomial(std::move(terms));
        }
        throw ConfigError("field: unknown kind \"" + kind + "\"");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        if (kind == Kind::Constant) {
            j["kind"] = "constant";
            j["coeffs"] = {constant};
        } else {
            j["kind"] = "polynomial";
            auto& c = j["coeffs"] = nlohmann::json::array();
            for (const auto& t : terms) c.push_back({t.coeff, t.px, t.py});
        }
        return j;
    }
};

inline double evaluate_field(const FieldSpec& spec, double x, double y = 0.0) {
    return spec(x, y);
}

/// Coefficient data (alpha on the interior, beta and gamma on the boundary)
/// together with the ellipticity floor eta. alpha and beta must stay at or
/// above eta; gamma is unconstrained in sign.
struct ProblemData {
    FieldSpec alpha = FieldSpec::constant_field(1.0);
    FieldSpec beta = FieldSpec::constant_field(1.0);
    FieldSpec gamma = FieldSpec::constant_field(0.0);
    double eta = 0.5;
};

struct HypothesisReport {
    bool ok = true;
    std::string field;             // "alpha" or "beta" when violated
    std::array<double, 2> point{}; // first offending quadrature point
    double value = 0.0;

    std::string message() const {
        if (ok) return "hypothesis ok";
        return "hypothesis violated: " + field + "(" + std::to_string(point[0]) +
               ", " + std::to_string(point[1]) + ") = " + std::to_string(value) +
               " below floor";
    }
};

/// Checks alpha >= eta at the interior quadrature points and beta >= eta at
/// the boundary quadrature points of the assembly rules (the discrete
/// reading of the almost-everywhere bounds). Reports the first violation.
inline HypothesisReport validate_hypothesis(const Mesh& mesh, const ProblemData& data) {
    HypothesisReport rep;
    if (!(data.eta > 0.0)) {
        rep.ok = false;
        rep.field = "eta";
        return rep;
    }
    const int adeg = data.alpha.degree() + 2;
    for (int e = 0; e < mesh.element_count(); ++e) {
        for (const auto& qp : element_quadrature(mesh, e, adeg)) {
            const double v = data.alpha(qp.x, qp.y);
            if (v < data.eta) {
                rep.ok = false;
                rep.field = "alpha";
                rep.point = {qp.x, qp.y};
                rep.value = v;
                return rep;
            }
        }
    }
    const int bdeg = data.beta.degree() + 2;
    for (const auto& f : mesh.boundary_facets) {
        for (const auto& qp : facet_quadrature(mesh, f, bdeg)) {
            const double v = data.beta(qp.x, qp.y);
            if (v < data.eta) {
                rep.ok = false;
                rep.field = "beta";
                rep.point = {qp.x, qp.y};
                rep.value = v;
                return rep;
            }
        }
    }
    return rep;
}

/// Smallest gamma value over all boundary quadrature points, clamped from
/// above by zero: the lower bound of the quadratic form and the spectrum.
inline double gamma_floor(const Mesh& mesh, const ProblemData& data) {
    double lo = 0.0;
    const int deg = data.gamma.degree() + 2;
    for (const auto& f : mesh.boundary_facets)
        for (const auto& qp : facet_quadrature(mesh, f, deg))
            lo = std::min(lo, data.gamma(qp.x, qp.y));
    return lo;
}

} // namespace wentzell
