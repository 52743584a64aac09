#pragma once

#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "wentzell/beam_oracle.hpp"
#include "wentzell/errors.hpp"
#include "wentzell/operator.hpp"
#include "wentzell/spectrum.hpp"

namespace wentzell {

/// Spectrum of the clamped problem: boundary nodal values constrained to
/// zero while the Neumann condition stays built into the mixed Laplacian.
/// Eigenvectors are returned at full node dimension (zero on the boundary).
struct ClampedSpectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

namespace detail {

inline ClampedSpectrum clamped_spectrum(std::shared_ptr<const Mesh> mesh, double alpha,
                                        int count) {
    ProblemData data;
    data.alpha = FieldSpec::constant_field(alpha);
    data.beta = FieldSpec::constant_field(1.0);
    data.gamma = FieldSpec::constant_field(0.0);
    data.eta = 0.5 * std::min(1.0, alpha);
    auto op = build_operator(mesh, data);

    const int n = op->node_count();
    std::vector<char> on_boundary(n, 0);
    for (int b : op->boundary_nodes()) on_boundary[b] = 1;
    std::vector<int> interior;
    for (int i = 0; i < n; ++i)
        if (!on_boundary[i]) interior.push_back(i);
    const int ni = static_cast<int>(interior.size());
    if (ni < count)
        throw NumericalError("clamped reference: fewer interior nodes than requested "
                             "eigenvalues");

    Eigen::MatrixXd A(ni, ni), B(ni, ni);
    const Eigen::MatrixXd& Afull = op->form_matrix();
    const Eigen::MatrixXd Mfull(op->mass());
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < ni; ++j) {
            A(i, j) = Afull(interior[i], interior[j]);
            B(i, j) = Mfull(interior[i], interior[j]);
        }
    auto pe = generalized_symmetric_eigen(A, B, count);
    ClampedSpectrum out;
    out.eigenvalues = pe.values;
    out.eigenvectors = Eigen::MatrixXd::Zero(n, count);
    for (int j = 0; j < count; ++j)
        for (int i = 0; i < ni; ++i)
            out.eigenvectors(interior[i], j) = pe.vectors(i, j);
    return out;
}

} // namespace detail

/// Discrete clamped-plate reference on a 2D mesh, the empirical
/// gamma -> infinity limit target on the same triangulation.
inline ClampedSpectrum clamped_reference_2d(std::shared_ptr<const Mesh> mesh, int count,
                                            double alpha = 1.0) {
    if (mesh->dimension != 2)
        throw ConfigError("clamped_reference_2d: requires a 2D mesh");
    return detail::clamped_spectrum(std::move(mesh), alpha, count);
}

struct GammaSweepConfig {
    std::shared_ptr<const Mesh> mesh;
    double alpha = 1.0;           // beta is fixed to 1 in sweep mode
    std::vector<double> ladder;   // strictly increasing, positive
    int eigencount = 4;
    double eta = 0.5;

    void validate() const {
        if (!mesh) throw ConfigError("gamma sweep: missing mesh");
        if (!(alpha > 0.0)) throw ConfigError("gamma sweep: alpha must be positive");
        if (ladder.empty()) throw ConfigError("gamma sweep: empty ladder");
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            if (!(ladder[i] > 0.0))
                throw ConfigError("gamma sweep: ladder entries must be positive");
            if (i > 0 && !(ladder[i] > ladder[i - 1]))
                throw ConfigError("gamma sweep: ladder must be strictly increasing");
        }
    }
};

struct GammaSweepRung {
    double g = 0.0;
    double lambda1 = 0.0;
    double trace_norm = 0.0;   // || e1 on Gamma ||_{Gamma, beta}
    double bound_rhs = 0.0;    // lambda1 / g
    double clamped_ref = 0.0;  // 1D: oracle clamped value; 2D: discrete clamped
    double gap = 0.0;          // clamped_ref - lambda1
    bool bound_ok = false;     // trace_norm^2 <= bound_rhs + 1e-10
};

struct GammaSweepReport {
    std::vector<GammaSweepRung> rungs;
    std::vector<double> clamped_reference;  // eigencount reference eigenvalues
    double clamped_discrete_lambda1 = 0.0;  // same-mesh clamped value
    bool lambda1_increasing = false;
    bool trace_bound_ok = false;
    bool below_discrete_clamped = false;  // lambda1(g) <= discrete clamped lambda1
};

/// Monotone gamma ladder toward the clamped problem: per rung the first
/// eigenpair of the operator with gamma == g, the boundary norm of the
/// first eigenvector with its 1/g bound, and the gap to the clamped target.
inline GammaSweepReport run_gamma_sweep(const GammaSweepConfig& config) {
    config.validate();
    GammaSweepReport rep;

    if (config.mesh->dimension == 1) {
        double lo = config.mesh->nodes.front()[0], hi = lo;
        for (const auto& p : config.mesh->nodes) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        rep.clamped_reference =
            clamped_beam_eigenvalues(config.alpha, hi - lo, config.eigencount);
    } else {
        const auto clamped =
            clamped_reference_2d(config.mesh, config.eigencount, config.alpha);
        rep.clamped_reference.assign(clamped.eigenvalues.data(),
                                     clamped.eigenvalues.data() + config.eigencount);
    }
    rep.clamped_discrete_lambda1 =
        detail::clamped_spectrum(config.mesh, config.alpha, 1).eigenvalues[0];

    rep.lambda1_increasing = true;
    rep.trace_bound_ok = true;
    rep.below_discrete_clamped = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (double g : config.ladder) {
        ProblemData data;
        data.alpha = FieldSpec::constant_field(config.alpha);
        data.beta = FieldSpec::constant_field(1.0);
        data.gamma = FieldSpec::constant_field(g);
        data.eta = config.eta;
        std::shared_ptr<const WentzellOperator> op;
        try {
            op = build_operator(config.mesh, data);
        } catch (const std::exception& e) {
            throw NumericalError("gamma sweep: rung g = " + std::to_string(g) +
                                 " failed: " + e.what());
        }
        const auto sd = solve_spectrum(op, std::max(2, config.eigencount));
        GammaSweepRung rung;
        rung.g = g;
        rung.lambda1 = sd.eigenvalues[0];
        const Eigen::VectorXd e1 = sd.eigenvectors.col(0);
        rung.trace_norm = std::sqrt(
            std::max(0.0, e1.dot(op->boundary_mass_beta_inv() * e1)));
        rung.bound_rhs = rung.lambda1 / g;
        rung.bound_ok = rung.trace_norm * rung.trace_norm <= rung.bound_rhs + 1e-10;
        rung.clamped_ref = rep.clamped_reference[0];
        rung.gap = rung.clamped_ref - rung.lambda1;
        rep.rungs.push_back(rung);

        rep.lambda1_increasing = rep.lambda1_increasing && rung.lambda1 > prev;
        prev = rung.lambda1;
        rep.trace_bound_ok = rep.trace_bound_ok && rung.bound_ok;
        rep.below_discrete_clamped =
            rep.below_discrete_clamped &&
            rung.lambda1 <= rep.clamped_discrete_lambda1 + 1e-10;
    }
    return rep;
}

struct SignCensus {
    int positive_nodes = 0;
    int negative_nodes = 0;
    int zero_nodes = 0;
    double min_value = 0.0;
    double max_value = 0.0;
};

/// Nodal sign census of an eigenvector after normalizing its H-pairing with
/// the constant vector to be nonnegative. Nodes within 1e-12 of the sup
/// norm scale count as zero.
inline SignCensus sign_structure(const Eigen::VectorXd& e, const WentzellOperator& op) {
    Eigen::VectorXd v = e;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.node_count());
    if (op.h_inner(ones, v) < 0.0) v = -v;
    SignCensus census;
    const double tol = 1e-12 * std::max(v.cwiseAbs().maxCoeff(), 1e-300);
    census.min_value = v.minCoeff();
    census.max_value = v.maxCoeff();
    for (int i = 0; i < v.size(); ++i) {
        if (v[i] > tol)
            ++census.positive_nodes;
        else if (v[i] < -tol)
            ++census.negative_nodes;
        else
            ++census.zero_nodes;
    }
    return census;
}

} // namespace wentzell
