#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "wentzell/errors.hpp"
#include "wentzell/mesh.hpp"
#include "wentzell/operator.hpp"
#include "wentzell/spectrum.hpp"

namespace wentzell {

// Semi-analytic eigenvalue oracle on an interval (0, L) with constant
// coefficients, independent of the finite element path.
//
// Eigenvalue problem: alpha u'''' = lambda u with the boundary conditions
//   u'(0) = u'(L) = 0,
//   beta alpha u'''(0) = (lambda - gamma) u(0),
//   -beta alpha u'''(L) = (lambda - gamma) u(L).
// The third-derivative signs encode the outward normal (nu = -1 at 0,
// nu = +1 at L) inside the flux term of the dynamic boundary condition:
// at x = 0 the outward flux of alpha u'' is -alpha u'''(0), at x = L it is
// +alpha u'''(L), and the boundary row of the operator is
// -beta * (outward flux) + gamma * u = lambda * u.
// With k = (lambda/alpha)^{1/4} and the basis
// {cos kx, sin kx, cosh kx, sinh kx}, eigenvalues are the roots of the
// 4x4 boundary-condition determinant below.

struct BeamParams {
    double length = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 0.0;

    BeamParams(double L, double a, double b, double g)
        : length(L), alpha(a), beta(b), gamma(g) {
        if (!(length > 0.0) || !(alpha > 0.0) || !(beta > 0.0) || gamma < 0.0)
            throw ConfigError(
                "beam oracle: requires L > 0, alpha > 0, beta > 0, gamma >= 0");
    }
};

/// Boundary-condition determinant; zero exactly at the positive eigenvalues.
/// For k L > 350 the two x = L rows are divided by cosh(kL) to avoid
/// overflow (a positive scaling, so roots and sign changes are preserved).
inline double wentzell_char_det(const BeamParams& p, double lambda) {
    if (!(lambda > 0.0))
        throw NumericalError("beam oracle: determinant defined for lambda > 0");
    const double k = std::pow(lambda / p.alpha, 0.25);
    const double L = p.length;
    const double ba = p.beta * p.alpha;
    const double lg = lambda - p.gamma;
    const double k3 = k * k * k;
    const double s = std::sin(k * L), c = std::cos(k * L);

    Eigen::Matrix4d D;
    D.row(0) << 0.0, k, 0.0, k;
    D.row(2) << -lg, -ba * k3, -lg, ba * k3;
    if (k * L <= 350.0) {
        const double sh = std::sinh(k * L), ch = std::cosh(k * L);
        D.row(1) << -k * s, k * c, k * sh, k * ch;
        D.row(3) << -ba * k3 * s - lg * c, ba * k3 * c - lg * s,
            -ba * k3 * sh - lg * ch, -ba * k3 * ch - lg * sh;
    } else {
        const double th = std::tanh(k * L);   // ~1
        const double sech = 0.0;              // cosh(kL) overflows; 1/cosh ~ e^{-kL}
        D.row(1) << -k * s * sech, k * c * sech, k * th, k;
        D.row(3) << (-ba * k3 * s - lg * c) * sech, (ba * k3 * c - lg * s) * sech,
            -ba * k3 * th - lg, -ba * k3 - lg * th;
    }
    return D.determinant();
}

struct OracleRoot {
    double lambda = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual = 0.0;  // |det(root)| / max |det| at the initial bracket
};

struct OracleEigenvalues {
    std::vector<OracleRoot> roots;  // ascending; leads with 0 when gamma == 0
    int requested = 0;
    bool complete = false;
    double lambda_max = 0.0;

    std::vector<double> values() const {
        std::vector<double> v;
        for (const auto& r : roots) v.push_back(r.lambda);
        return v;
    }
};

/// First `count` eigenvalues by sign-change scanning of the determinant on
/// a geometric lambda grid (ratio 1.02 from 1e-6 alpha / L^4) followed by
/// bisection to 1e-12 relative. When gamma == 0 the zero eigenvalue of the
/// constant mode is prepended analytically. Closely spaced roots inside one
/// grid cell would be missed; the interlacing check of the callers flags
/// that situation.
inline OracleEigenvalues find_wentzell_eigenvalues_1d(const BeamParams& p, int count,
                                                      double lambda_max = 1e9) {
    if (count < 1) throw ConfigError("beam oracle: count >= 1 required");
    OracleEigenvalues out;
    out.requested = count;
    out.lambda_max = lambda_max;
    if (p.gamma == 0.0) out.roots.push_back({0.0, 0.0, 0.0, 0.0});

    double lo = 1e-6 * p.alpha / std::pow(p.length, 4);
    double flo = wentzell_char_det(p, lo);
    while (static_cast<int>(out.roots.size()) < count && lo < lambda_max) {
        const double hi = lo * 1.02;
        const double fhi = wentzell_char_det(p, hi);
        if ((flo < 0.0 && fhi > 0.0) || (flo > 0.0 && fhi < 0.0)) {
            OracleRoot root;
            root.bracket_lo = lo;
            root.bracket_hi = hi;
            const double det_scale = std::max(std::abs(flo), std::abs(fhi));
            double a = lo, b = hi, fa = flo;
            for (int it = 0; it < 200 && (b - a) > 1e-12 * b; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = wentzell_char_det(p, m);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            root.lambda = 0.5 * (a + b);
            root.residual = std::abs(wentzell_char_det(p, root.lambda)) /
                            std::max(det_scale, 1e-300);
            out.roots.push_back(root);
        }
        lo = hi;
        flo = fhi;
    }
    out.complete = static_cast<int>(out.roots.size()) >= count;
    return out;
}

/// Positive wavenumbers of cos(k) cosh(k) = 1, bisected on the brackets
/// ((j + 1/2) pi - 0.3, (j + 1/2) pi + 0.3) via the overflow-free form
/// cos k = sech k.
inline std::vector<double> clamped_beam_wavenumbers(int count) {
    auto f = [](double k) { return std::cos(k) - 1.0 / std::cosh(k); };
    std::vector<double> ks;
    for (int j = 1; j <= count; ++j) {
        double a = (j + 0.5) * std::numbers::pi - 0.3;
        double b = (j + 0.5) * std::numbers::pi + 0.3;
        double fa = f(a);
        for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
            const double m = 0.5 * (a + b);
            const double fm = f(m);
            if ((fa < 0.0) == (fm < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        ks.push_back(0.5 * (a + b));
    }
    return ks;
}

/// Eigenvalues alpha (k_j / L)^4 of the clamped beam (u = u' = 0 at both
/// ends), the gamma -> infinity limit problem on the interval.
inline std::vector<double> clamped_beam_eigenvalues(double alpha, double L, int count) {
    if (count < 1) throw ConfigError("beam oracle: count >= 1 required");
    std::vector<double> out;
    for (double k : clamped_beam_wavenumbers(count))
        out.push_back(alpha * std::pow(k / L, 4));
    return out;
}

struct FemOracleRow {
    int n = 0;       // mesh resolution
    int k = 0;       // eigenvalue index (1-based)
    double lambda_fem = 0.0;
    double lambda_oracle = 0.0;
    double rel_error = 0.0;  // absolute error for the zero mode
};

struct FemOracleComparison {
    std::vector<FemOracleRow> rows;
    // empirical order per eigenvalue index: log(err_i / err_{i+1}) / log(n_{i+1} / n_i)
    std::vector<std::pair<int, double>> orders;
};

/// Cross-validation harness: relative eigenvalue errors of the finite
/// element spectrum against the oracle over a family of interval meshes.
inline FemOracleComparison compare_fem_oracle(const std::vector<int>& mesh_sizes,
                                              const BeamParams& p, int count,
                                              double lambda_max = 1e9) {
    const auto oracle = find_wentzell_eigenvalues_1d(p, count, lambda_max);
    if (!oracle.complete)
        throw NumericalError("oracle comparison: fewer oracle roots than requested");
    FemOracleComparison cmp;
    std::vector<std::vector<double>> errs(count);
    for (int n : mesh_sizes) {
        ProblemData data;
        data.alpha = FieldSpec::constant_field(p.alpha);
        data.beta = FieldSpec::constant_field(p.beta);
        data.gamma = FieldSpec::constant_field(p.gamma);
        data.eta = 0.5 * std::min(p.alpha, p.beta);
        auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, p.length, n));
        auto op = build_operator(mesh, data);
        const auto sd = solve_spectrum(op, count);
        for (int k = 0; k < count; ++k) {
            FemOracleRow row;
            row.n = n;
            row.k = k + 1;
            row.lambda_fem = sd.eigenvalues[k];
            row.lambda_oracle = oracle.roots[k].lambda;
            row.rel_error = row.lambda_oracle != 0.0
                                ? std::abs(row.lambda_fem - row.lambda_oracle) /
                                      std::abs(row.lambda_oracle)
                                : std::abs(row.lambda_fem);
            errs[k].push_back(row.rel_error);
            cmp.rows.push_back(row);
        }
    }
    for (int k = 0; k < count; ++k)
        for (std::size_t i = 0; i + 1 < mesh_sizes.size(); ++i) {
            if (errs[k][i + 1] > 0.0 && errs[k][i] > 0.0)
                cmp.orders.emplace_back(
                    k + 1, std::log(errs[k][i] / errs[k][i + 1]) /
                               std::log(static_cast<double>(mesh_sizes[i + 1]) /
                                        mesh_sizes[i]));
        }
    return cmp;
}

} // namespace wentzell
