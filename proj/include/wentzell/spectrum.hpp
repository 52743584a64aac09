#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "wentzell/errors.hpp"
#include "wentzell/operator.hpp"

namespace wentzell {

/// Ascending eigenpairs of A_form e = lambda M_H e with M_H-orthonormal
/// eigenvectors. `clusters` lists index ranges (inclusive) of eigenvalues
/// closer than 1e-8 * scale: orthonormality holds inside a cluster but the
/// individual vectors are not canonicalized.
struct SpectralDecomposition {
    std::shared_ptr<const WentzellOperator> op;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // node_count x count
    Eigen::VectorXd residuals;     // backward-error relative
    std::vector<std::pair<int, int>> clusters;
    bool kernel_deflated = false;

    int count() const { return static_cast<int>(eigenvalues.size()); }
};

namespace detail {

struct PencilEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

// Rayleigh-quotient refinement: the dense congruence pipeline carries an
// absolute eigenvalue error on the order of eps * lambda_max, which drowns
// the small eigenvalues of this stiff pencil; the quotient evaluated on the
// computed eigenvector recovers them to quadrature accuracy.
inline void rq_refine_and_sort(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               PencilEigen& pe, int keep_fixed = 0) {
    const int k = static_cast<int>(pe.values.size());
    for (int j = keep_fixed; j < k; ++j) {
        const Eigen::VectorXd& x = pe.vectors.col(j);
        pe.values[j] = x.dot(A * x) / x.dot(B * x);
    }
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin() + keep_fixed, order.end(),
                     [&](int a, int b) { return pe.values[a] < pe.values[b]; });
    Eigen::VectorXd v(k);
    Eigen::MatrixXd E(pe.vectors.rows(), k);
    for (int j = 0; j < k; ++j) {
        v[j] = pe.values[order[j]];
        E.col(j) = pe.vectors.col(order[j]);
    }
    pe.values = std::move(v);
    pe.vectors = std::move(E);
}

/// First k eigenpairs of A x = lambda B x (B SPD), B-orthonormal vectors,
/// Cholesky congruence plus dense symmetric eigensolve plus refinement.
inline PencilEigen generalized_symmetric_eigen(const Eigen::MatrixXd& A,
                                               const Eigen::MatrixXd& B, int k) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B,
                                                                 Eigen::ComputeEigenvectors |
                                                                     Eigen::Ax_lBx);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigensolver: dense symmetric solve did not converge");
    PencilEigen pe;
    pe.values = es.eigenvalues().head(k);
    pe.vectors = es.eigenvectors().leftCols(k);
    rq_refine_and_sort(A, B, pe);
    return pe;
}

// Deflated variant for the known one-dimensional kernel span{1} (the
// gamma == 0 case): lambda_1 = 0 and e_1 = 1/||1||_{M_H} are exact, the
// congruence eigensolve runs on the M_H-orthogonal complement.
inline PencilEigen kernel_deflated_eigen(const Eigen::MatrixXd& A,
                                         const Eigen::MatrixXd& B, int k) {
    const int n = static_cast<int>(A.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success)
        throw NumericalError("eigensolver: product mass Cholesky failed");
    const Eigen::MatrixXd L = llt.matrixL();

    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd d = L.transpose() * ones;
    d.normalize();
    // Householder v with (I - 2vv') d = -sign(d0) e_1
    Eigen::VectorXd v = d;
    v[0] += (d[0] >= 0.0 ? 1.0 : -1.0);
    v.normalize();

    Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(A);
    C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose().eval();
    C = (0.5 * (C + C.transpose())).eval();

    const Eigen::VectorXd w = C * v;
    const double c = v.dot(w);
    C.noalias() -= 2.0 * v * w.transpose();
    C.noalias() -= 2.0 * w * v.transpose();
    C.noalias() += (4.0 * c) * v * v.transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        C.bottomRightCorner(n - 1, n - 1));
    if (es.info() != Eigen::Success)
        throw NumericalError("eigensolver: deflated symmetric solve did not converge");

    PencilEigen pe;
    pe.values.resize(k);
    pe.vectors.resize(n, k);
    pe.values[0] = 0.0;
    pe.vectors.col(0) = ones / std::sqrt(ones.dot(B * ones));
    for (int j = 1; j < k; ++j) {
        pe.values[j] = es.eigenvalues()[j - 1];
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        y.tail(n - 1) = es.eigenvectors().col(j - 1);
        y -= (2.0 * v.dot(y)) * v;
        pe.vectors.col(j) =
            L.transpose().triangularView<Eigen::Upper>().solve(y);
    }
    rq_refine_and_sort(A, B, pe, /*keep_fixed=*/1);
    return pe;
}

} // namespace detail

/// Solves the generalized symmetric eigenproblem of the discrete pair
/// (A_form, M_H) for the k smallest eigenpairs. When gamma vanishes
/// identically the constant kernel is deflated exactly.
inline SpectralDecomposition solve_spectrum(std::shared_ptr<const WentzellOperator> op,
                                            int k) {
    const int n = op->node_count();
    if (k < 1 || k > n)
        throw NumericalError("solve_spectrum: k must be in [1, node count]");
    const Eigen::MatrixXd& A = op->form_matrix();
    const Eigen::MatrixXd B = Eigen::MatrixXd(op->product_mass());

    detail::PencilEigen pe = op->gamma_is_zero()
                                 ? detail::kernel_deflated_eigen(A, B, k)
                                 : detail::generalized_symmetric_eigen(A, B, k);

    SpectralDecomposition sd;
    sd.op = std::move(op);
    sd.eigenvalues = std::move(pe.values);
    sd.eigenvectors = std::move(pe.vectors);
    sd.kernel_deflated = sd.op->gamma_is_zero();

    const double a_scale = A.norm();
    const double b_scale = B.norm();
    sd.residuals.resize(k);
    for (int j = 0; j < k; ++j) {
        const Eigen::VectorXd& e = sd.eigenvectors.col(j);
        const double num = (A * e - sd.eigenvalues[j] * (B * e)).norm();
        const double den =
            (a_scale + std::abs(sd.eigenvalues[j]) * b_scale) * e.norm() + 1e-300;
        sd.residuals[j] = num / den;
    }

    int start = 0;
    for (int j = 1; j <= k; ++j) {
        const bool close =
            j < k && (sd.eigenvalues[j] - sd.eigenvalues[j - 1]) <
                         1e-8 * std::max({1.0, std::abs(sd.eigenvalues[j - 1]),
                                          std::abs(sd.eigenvalues[j])});
        if (!close) {
            if (j - 1 > start) sd.clusters.emplace_back(start, j - 1);
            start = j;
        }
    }
    return sd;
}

enum class KernelClass {
    ZeroEigenvalueConstantKernel,
    StrictlyPositive,
    NegativeFirstEigenvalue,
};

struct KernelClassification {
    KernelClass kind = KernelClass::ZeroEigenvalueConstantKernel;
    bool ambiguous = false;  // |lambda1| inside the zero band but e1 not constant
    double lambda1 = 0.0;
    double threshold = 0.0;
    double constant_spread = 0.0;
    std::string detail;
};

/// Classifies the bottom of the spectrum: zero eigenvalue with constant
/// kernel, strictly positive, or negative first eigenvalue. An ambiguous
/// case (first eigenvalue inside the zero band but a non-constant first
/// eigenvector) is reported, not guessed.
inline KernelClassification kernel_classify(const SpectralDecomposition& sd) {
    if (sd.count() < 2)
        throw NumericalError("kernel_classify: needs at least two eigenvalues");
    KernelClassification out;
    out.lambda1 = sd.eigenvalues[0];
    out.threshold = 1e-9 * std::max(sd.eigenvalues[1], 1.0);
    const Eigen::VectorXd& e1 = sd.eigenvectors.col(0);
    out.constant_spread =
        (e1.maxCoeff() - e1.minCoeff()) / std::max(e1.cwiseAbs().maxCoeff(), 1e-300);
    if (out.lambda1 > out.threshold) {
        out.kind = KernelClass::StrictlyPositive;
        out.detail = "lambda1 > 0";
    } else if (out.lambda1 < -out.threshold) {
        out.kind = KernelClass::NegativeFirstEigenvalue;
        out.detail = "lambda1 < 0";
    } else {
        out.kind = KernelClass::ZeroEigenvalueConstantKernel;
        if (out.constant_spread > 1e-6) {
            out.ambiguous = true;
            out.detail = "lambda1 inside the zero band but first eigenvector is "
                         "not constant (spread " +
                         std::to_string(out.constant_spread) + ")";
        } else {
            out.detail = "lambda1 ~ 0 with constant kernel";
        }
    }
    return out;
}

inline const char* to_string(KernelClass k) {
    switch (k) {
        case KernelClass::ZeroEigenvalueConstantKernel:
            return "ZeroEigenvalueConstantKernel";
        case KernelClass::StrictlyPositive:
            return "StrictlyPositive";
        case KernelClass::NegativeFirstEigenvalue:
            return "NegativeFirstEigenvalue";
    }
    return "unknown";
}

} // namespace wentzell
