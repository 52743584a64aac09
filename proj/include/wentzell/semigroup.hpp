#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "wentzell/errors.hpp"
#include "wentzell/operator.hpp"
#include "wentzell/spectrum.hpp"

namespace wentzell {

/// H-orthogonal projection of fields (f1, f2) onto the discrete space:
/// solves M_H c = load with load_i = int f1 phi_i dx + int f2 phi_i / beta dS.
/// f2 need not be the trace of f1.
inline Eigen::VectorXd project_initial_data(const WentzellOperator& op,
                                            const FieldSpec& f1, const FieldSpec& f2) {
    const auto& beta = op.data().beta;
    Eigen::VectorXd load =
        assemble_interior_load(op.mesh(), as_field(f1), f1.degree());
    load += assemble_boundary_load(
        op.mesh(), [&](double x, double y) { return f2(x, y) / beta(x, y); },
        f2.degree() + (beta.degree() == 0 ? 0 : beta.degree() + 4));
    return op.solve_product_mass(load);
}

/// Truncated spectral evolution: sum over k of exp(-lambda_k t) <f, e_k>_H e_k.
/// With the full spectrum this is exact for the discrete operator.
inline Eigen::VectorXd semigroup_apply(const SpectralDecomposition& sd,
                                       const Eigen::VectorXd& f, double t,
                                       int k_max = -1) {
    if (t < 0.0) throw NumericalError("semigroup: negative time rejected");
    const int k = k_max < 0 ? sd.count() : std::min(k_max, sd.count());
    const auto E = sd.eigenvectors.leftCols(k);
    Eigen::VectorXd c = E.transpose() * (sd.op->product_mass() * f);
    for (int j = 0; j < k; ++j) c[j] *= std::exp(-sd.eigenvalues[j] * t);
    return E * c;
}

/// Dense propagator matrix P(t) = E diag(exp(-lambda t)) E' M_H; columns are
/// the semigroup applied to the nodal unit vectors.
inline Eigen::MatrixXd semigroup_matrix(const SpectralDecomposition& sd, double t) {
    if (t < 0.0) throw NumericalError("semigroup: negative time rejected");
    Eigen::MatrixXd C = sd.eigenvectors.transpose() * Eigen::MatrixXd(sd.op->product_mass());
    for (int j = 0; j < sd.count(); ++j)
        C.row(j) *= std::exp(-sd.eigenvalues[j] * t);
    return sd.eigenvectors * C;
}

/// H-orthogonal projection of f onto the constant vector; the long-time
/// limit of the semigroup in the gamma == 0 configuration.
inline Eigen::VectorXd steady_state(const WentzellOperator& op,
                                    const Eigen::VectorXd& f) {
    if (!op.gamma_is_zero())
        throw NumericalError("steady_state: requires the gamma == 0 configuration");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.node_count());
    const double coeff = op.h_inner(ones, f) / op.h_inner(ones, ones);
    return coeff * ones;
}

/// The mean-value coefficient written with unweighted boundary integrals,
/// (int f1 dx + int f2 dS) / (|Omega| + |Gamma|); agrees with the
/// H-projection coefficient exactly when beta == 1.
inline double mean_value_coefficient(const WentzellOperator& op,
                                     const Eigen::VectorXd& f) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.node_count());
    const double num = ones.dot(op.mass() * f) + ones.dot(op.boundary_mass_one() * f);
    const double den =
        ones.dot(op.mass() * ones) + ones.dot(op.boundary_mass_one() * ones);
    return num / den;
}

inline std::vector<double> geometric_time_grid(double t_lo, double t_hi, int count) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo) || count < 2)
        throw ConfigError("time grid: requires 0 < t_lo < t_hi and count >= 2");
    std::vector<double> out(count);
    const double r = std::log(t_hi / t_lo) / (count - 1);
    for (int i = 0; i < count; ++i) out[i] = t_lo * std::exp(r * i);
    return out;
}

// ---------------------------------------------------------------------------
// decay / growth diagnostics
// ---------------------------------------------------------------------------

struct DecayEnvelopeReport {
    double rate = 0.0;          // lambda_2 for gamma == 0, lambda_1 otherwise
    double max_ratio = 0.0;     // max over t of ||T(t)f - fbar|| e^{rate t} / ||f||
    std::vector<std::pair<double, double>> per_t;
    bool pass = false;
};

/// Envelope check for gamma >= 0: the distance to the steady state decays
/// at least like exp(-rate t).
inline DecayEnvelopeReport decay_envelope_check(const SpectralDecomposition& sd,
                                                const Eigen::VectorXd& f,
                                                const std::vector<double>& t_grid) {
    const auto& op = *sd.op;
    if (op.gamma_lower_bound() < 0.0)
        throw NumericalError("decay envelope: requires gamma >= 0");
    DecayEnvelopeReport rep;
    const double fnorm = op.h_norm(f);
    if (!(fnorm > 0.0)) throw NumericalError("decay envelope: zero initial datum");
    Eigen::VectorXd fbar;
    if (op.gamma_is_zero()) {
        if (sd.count() < 2)
            throw NumericalError("decay envelope: needs at least two eigenvalues");
        rep.rate = sd.eigenvalues[1];
        fbar = steady_state(op, f);
    } else {
        rep.rate = sd.eigenvalues[0];
        fbar = Eigen::VectorXd::Zero(op.node_count());
    }
    for (double t : t_grid) {
        const double ratio =
            op.h_norm(semigroup_apply(sd, f, t) - fbar) * std::exp(rep.rate * t) / fnorm;
        rep.per_t.emplace_back(t, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    rep.pass = rep.max_ratio <= 1.0 + 1e-10;
    return rep;
}

struct GrowthReport {
    bool applicable = false;  // false when lambda_1 >= 0 (flagged, not an error)
    double lambda1 = 0.0;
    std::vector<std::pair<double, double>> norms;  // (t, e^{-lambda1 t})
    double max_mode_deviation = 0.0;  // |T(t) e1| vs e^{-lambda1 t}, relative
    double max_log_linearity_defect = 0.0;
};

/// Operator-norm growth for configurations with a negative first eigenvalue:
/// on the discrete space the norm equals exp(-lambda_1 t), attained at e_1.
inline GrowthReport growth_check(const SpectralDecomposition& sd,
                                 const std::vector<double>& t_grid) {
    GrowthReport rep;
    rep.lambda1 = sd.eigenvalues[0];
    rep.applicable = rep.lambda1 < 0.0;
    const Eigen::VectorXd e1 = sd.eigenvectors.col(0);
    for (double t : t_grid) {
        const double expected = std::exp(-rep.lambda1 * t);
        const double attained = sd.op->h_norm(semigroup_apply(sd, e1, t));
        rep.norms.emplace_back(t, expected);
        rep.max_mode_deviation =
            std::max(rep.max_mode_deviation, std::abs(attained - expected) / expected);
        if (t > 0.0) {
            const double defect =
                std::abs(std::log(attained) + rep.lambda1 * t) /
                std::max(1.0, std::abs(rep.lambda1 * t));
            rep.max_log_linearity_defect = std::max(rep.max_log_linearity_defect, defect);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// positivity probes
// ---------------------------------------------------------------------------

struct PositivityProbe {
    double min_value = 0.0;
    int argmin_node = -1;
};

/// Minimum nodal value of T(t)f over interior and boundary nodes, for
/// nonnegative nonzero f.
inline PositivityProbe positivity_probe(const SpectralDecomposition& sd,
                                        const Eigen::VectorXd& f, double t) {
    if (f.minCoeff() < 0.0)
        throw NumericalError("positivity probe: initial datum has a negative node");
    if (f.cwiseAbs().maxCoeff() == 0.0)
        throw NumericalError("positivity probe: initial datum is zero");
    const Eigen::VectorXd u = semigroup_apply(sd, f, t);
    PositivityProbe probe;
    probe.min_value = u.minCoeff(&probe.argmin_node);
    return probe;
}

struct EventualPositivityResult {
    bool found = false;
    double t0 = std::numeric_limits<double>::quiet_NaN();
    double eps0 = 0.0;  // half the kernel-projection coefficient of f
};

/// Smallest grid time t0 with min T(t)f >= eps0 for every grid t in
/// [t0, t_max], where eps0 is half the constant-mode coefficient of f.
/// The grid is {0} followed by t_resolution geometrically spaced times.
inline EventualPositivityResult eventual_positivity_time(const SpectralDecomposition& sd,
                                                         const Eigen::VectorXd& f,
                                                         double t_max,
                                                         int t_resolution) {
    const auto& op = *sd.op;
    if (!op.gamma_is_zero())
        throw NumericalError("eventual positivity: requires gamma == 0");
    if (f.minCoeff() < 0.0 || f.cwiseAbs().maxCoeff() == 0.0)
        throw NumericalError("eventual positivity: datum must be nonnegative, nonzero");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.node_count());
    EventualPositivityResult res;
    res.eps0 = 0.5 * op.h_inner(ones, f) / op.h_inner(ones, ones);
    std::vector<double> grid{0.0};
    for (double t : geometric_time_grid(t_max * 1e-5, t_max, t_resolution))
        grid.push_back(t);
    int last_violation = -1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (semigroup_apply(sd, f, grid[i]).minCoeff() < res.eps0)
            last_violation = static_cast<int>(i);
    }
    if (last_violation + 1 < static_cast<int>(grid.size())) {
        res.found = true;
        res.t0 = grid[last_violation + 1];
    }
    return res;
}

struct UniformPositivityReport {
    std::vector<double> per_hat_t0;
    double max_t0 = 0.0;
    double eps0_min = 0.0;
    bool all_found = false;
};

/// Eventual-positivity sweep over the whole nodal hat family, evaluated
/// through per-time propagator matrices (each column is one hat's evolution).
inline UniformPositivityReport uniform_positivity_time(const SpectralDecomposition& sd,
                                                       double t_max, int t_resolution) {
    const auto& op = *sd.op;
    if (!op.gamma_is_zero())
        throw NumericalError("eventual positivity: requires gamma == 0");
    const int n = op.node_count();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd eps0 =
        0.5 * (Eigen::VectorXd(op.product_mass() * ones) / op.h_inner(ones, ones));
    std::vector<double> grid{0.0};
    for (double t : geometric_time_grid(t_max * 1e-5, t_max, t_resolution))
        grid.push_back(t);
    std::vector<int> last_violation(n, -1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::MatrixXd P = semigroup_matrix(sd, grid[i]);
        for (int j = 0; j < n; ++j)
            if (P.col(j).minCoeff() < eps0[j]) last_violation[j] = static_cast<int>(i);
    }
    UniformPositivityReport rep;
    rep.eps0_min = eps0.minCoeff();
    rep.all_found = true;
    rep.per_hat_t0.resize(n);
    for (int j = 0; j < n; ++j) {
        if (last_violation[j] + 1 < static_cast<int>(grid.size())) {
            rep.per_hat_t0[j] = grid[last_violation[j] + 1];
            rep.max_t0 = std::max(rep.max_t0, rep.per_hat_t0[j]);
        } else {
            rep.per_hat_t0[j] = std::numeric_limits<double>::quiet_NaN();
            rep.all_found = false;
        }
    }
    return rep;
}

struct NonpositivityWitness {
    bool found = false;
    int candidate = -1;
    double t = 0.0;
    double min_value = 0.0;
    int node = -1;
};

struct SupNormWitness {
    bool found = false;
    int candidate = -1;
    double t = 0.0;
    double ratio = 1.0;
};

struct NonpositivitySearchResult {
    NonpositivityWitness negativity;
    SupNormWitness sup_violation;
    int candidates = 0;
    int time_points = 0;
    double t_lo = 0.0, t_hi = 0.0;
};

/// Grid search over a family of nonnegative data for a positivity violation
/// (some node of T(t)f below -1e-6 ||f||_inf) and a sup-norm contractivity
/// violation (||T(t)f||_inf above (1 + 1e-6) ||f||_inf). Scans times in
/// ascending order, candidates by index; records the first witness of each
/// kind. Finding none is a valid, reported outcome.
inline NonpositivitySearchResult nonpositivity_search(
    const SpectralDecomposition& sd, const std::vector<Eigen::VectorXd>& family,
    double t_lo, double t_hi, int t_points) {
    if (family.empty())
        throw NumericalError("nonpositivity search: empty candidate family");
    const int n = sd.op->node_count();
    const int m = static_cast<int>(family.size());
    Eigen::MatrixXd F(n, m);
    Eigen::VectorXd sup(m);
    for (int j = 0; j < m; ++j) {
        if (family[j].minCoeff() < 0.0 || family[j].cwiseAbs().maxCoeff() == 0.0)
            throw NumericalError(
                "nonpositivity search: candidates must be nonnegative and nonzero");
        F.col(j) = family[j];
        sup[j] = family[j].cwiseAbs().maxCoeff();
    }
    NonpositivitySearchResult res;
    res.candidates = m;
    res.time_points = t_points;
    res.t_lo = t_lo;
    res.t_hi = t_hi;
    Eigen::MatrixXd C = sd.eigenvectors.transpose() *
                        (Eigen::MatrixXd(sd.op->product_mass()) * F);
    for (double t : geometric_time_grid(t_lo, t_hi, t_points)) {
        Eigen::MatrixXd Ct = C;
        for (int j = 0; j < sd.count(); ++j)
            Ct.row(j) *= std::exp(-sd.eigenvalues[j] * t);
        const Eigen::MatrixXd U = sd.eigenvectors * Ct;
        for (int j = 0; j < m; ++j) {
            if (!res.negativity.found) {
                int node;
                const double mn = U.col(j).minCoeff(&node);
                if (mn <= -1e-6 * sup[j])
                    res.negativity = {true, j, t, mn, node};
            }
            if (!res.sup_violation.found) {
                const double r = U.col(j).cwiseAbs().maxCoeff() / sup[j];
                if (r > 1.0 + 1e-6) res.sup_violation = {true, j, t, r};
            }
        }
        if (res.negativity.found && res.sup_violation.found) break;
    }
    return res;
}

/// The nodal hat functions (unit coefficient vectors).
inline std::vector<Eigen::VectorXd> nodal_hat_family(int n) {
    std::vector<Eigen::VectorXd> fam;
    fam.reserve(n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
        f[j] = 1.0;
        fam.push_back(std::move(f));
    }
    return fam;
}

/// Flat-top profiles with linear shoulders, f = clamp((w - |x - c|)/s, 0, 1),
/// interpolated at the nodes. Sharp-shouldered plateaus are the natural
/// probes for sup-norm contractivity violations.
inline std::vector<Eigen::VectorXd> plateau_family(const Mesh& mesh) {
    std::vector<Eigen::VectorXd> fam;
    const int n = mesh.node_count();
    for (double cx : {0.3, 0.5}) {
        for (double w : {0.2, 0.3, 0.4}) {
            for (double frac : {0.3, 0.5, 0.7}) {
                const double s = w * frac;
                Eigen::VectorXd f(n);
                for (int i = 0; i < n; ++i) {
                    const double dx = mesh.dimension == 1
                                          ? std::abs(mesh.nodes[i][0] - cx)
                                          : std::hypot(mesh.nodes[i][0] - cx,
                                                       mesh.nodes[i][1] - cx);
                    f[i] = std::clamp((w - dx) / s, 0.0, 1.0);
                }
                if (f.cwiseAbs().maxCoeff() > 0.0) fam.push_back(std::move(f));
            }
        }
    }
    return fam;
}

// ---------------------------------------------------------------------------
// trajectories
// ---------------------------------------------------------------------------

struct EvolutionResult {
    std::vector<double> times;
    Eigen::MatrixXd snapshots;  // node_count x times
    std::vector<double> h_norms, min_values, max_values, sup_norms;
};

inline EvolutionResult evolve(const SpectralDecomposition& sd, const Eigen::VectorXd& f,
                              const std::vector<double>& times, int k_max = -1) {
    EvolutionResult out;
    out.times = times;
    out.snapshots.resize(sd.op->node_count(), static_cast<int>(times.size()));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Eigen::VectorXd u = semigroup_apply(sd, f, times[i], k_max);
        out.snapshots.col(static_cast<int>(i)) = u;
        out.h_norms.push_back(sd.op->h_norm(u));
        out.min_values.push_back(u.minCoeff());
        out.max_values.push_back(u.maxCoeff());
        out.sup_norms.push_back(u.cwiseAbs().maxCoeff());
    }
    return out;
}

} // namespace wentzell
