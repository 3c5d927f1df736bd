#include "kknn/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kknn {

Eigen::MatrixXd local_covariance(const Patch& p) {
    const int k = p.k();
    const int m = p.m();
    if (k < 1) throw std::invalid_argument("local_covariance: patch has no neighbours");
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(m, m);
    for (int r = 0; r < k; ++r) {
        Eigen::VectorXd diff = p.neighbor_vectors.row(r).transpose() - p.center;
        sigma.noalias() += diff * diff.transpose();
    }
    return sigma / k;
}

Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& eigenvectors) {
    const int m = static_cast<int>(eigenvectors.rows());
    if (eigenvectors.cols() != m) {
        throw std::invalid_argument("design_matrix: expected m eigenvector columns");
    }
    const int quadratic = m * (m + 1) / 2;
    Eigen::MatrixXd design(m, 1 + m + quadratic);
    design.col(0).setOnes();
    design.block(0, 1, m, m) = eigenvectors;
    int col = 1 + m;
    for (int a = 0; a < m; ++a) {
        design.col(col++) = eigenvectors.col(a).cwiseProduct(eigenvectors.col(a));
    }
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            design.col(col++) = eigenvectors.col(a).cwiseProduct(eigenvectors.col(b));
        }
    }
    return design;
}

Eigen::MatrixXd second_fundamental_form(const Eigen::MatrixXd& design) {
    const int m = static_cast<int>(design.rows());
    const int quadratic = m * (m + 1) / 2;
    if (design.cols() != 1 + m + quadratic) {
        throw std::invalid_argument("second_fundamental_form: design matrix must have 1+m+m(m+1)/2 columns");
    }
    Eigen::MatrixXd h = design.rightCols(quadratic);  // m x m(m+1)/2
    return h * h.transpose();
}

Eigen::MatrixXd shape_operator(const Eigen::MatrixXd& hess, const Eigen::MatrixXd& sigma) {
    if (hess.rows() != hess.cols() || sigma.rows() != sigma.cols() ||
        hess.rows() != sigma.rows()) {
        throw std::invalid_argument("shape_operator: dimension mismatch");
    }
    return -hess * sigma;
}

double gaussian_curvature(const Eigen::MatrixXd& shape) {
    if (shape.rows() != shape.cols()) {
        throw std::invalid_argument("gaussian_curvature: shape operator must be square");
    }
    return shape.determinant();
}

double mean_curvature(const Eigen::MatrixXd& shape) {
    if (shape.rows() != shape.cols()) {
        throw std::invalid_argument("mean_curvature: shape operator must be square");
    }
    return shape.trace();
}

PrincipalCurvatures principal_curvatures(const Eigen::MatrixXd& shape) {
    if (shape.rows() != shape.cols()) {
        throw std::invalid_argument("principal_curvatures: shape operator must be square");
    }
    PrincipalCurvatures out;
    if (shape.size() == 0) return out;
    Eigen::EigenSolver<Eigen::MatrixXd> eig(shape);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("principal_curvatures: eigensolver failed");
    }
    const double scale = std::max(1.0, shape.cwiseAbs().maxCoeff());
    for (int i = 0; i < shape.rows(); ++i) {
        std::complex<double> lambda = eig.eigenvalues()(i);
        if (std::abs(lambda.imag()) > 1e-9 * scale) out.had_complex = true;
        out.values.push_back(lambda.real());
    }
    std::sort(out.values.begin(), out.values.end(), std::greater<>());
    return out;
}

LocalForms local_forms(const Patch& p) {
    LocalForms forms;
    forms.sigma = local_covariance(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(forms.sigma);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("local_forms: covariance eigensolver failed");
    }
    // Descending eigenvalue order (Eigen reports ascending).
    const int m = p.m();
    Eigen::MatrixXd u(m, m);
    for (int j = 0; j < m; ++j) u.col(j) = eig.eigenvectors().col(m - 1 - j);
    forms.hess = second_fundamental_form(design_matrix(u));
    forms.shape = shape_operator(forms.hess, forms.sigma);
    return forms;
}

double curvature_of_patch(const Patch& p) {
    if (p.k() + 1 <= p.m()) {
        // Rank collapse: sigma has rank <= k < m, so det(-hess*sigma) is
        // exactly 0. Short-circuiting keeps the zero exact.
        return 0.0;
    }
    return gaussian_curvature(local_forms(p).shape);
}

QuantizedScores quantize_scores(const Eigen::VectorXd& raw) {
    const int n = static_cast<int>(raw.size());
    if (n == 0) throw std::invalid_argument("quantize_scores: empty curvature vector");
    QuantizedScores q;
    Eigen::VectorXd mags = raw.cwiseAbs();
    const double lo = mags.minCoeff();
    const double hi = mags.maxCoeff();
    if (hi == lo) {
        q.degenerate = true;
        q.magnitudes = Eigen::VectorXd::Zero(n);
        q.boundaries.fill(0.0);
        q.scores.assign(n, 0);
        return q;
    }
    q.magnitudes = (mags.array() - lo) / (hi - lo);

    std::vector<double> sorted(q.magnitudes.data(), q.magnitudes.data() + n);
    std::sort(sorted.begin(), sorted.end());
    // Decile boundaries at levels 0.1..0.9, linear interpolation between
    // order statistics.
    for (int r = 1; r <= 9; ++r) {
        double h = 0.1 * r * (n - 1);
        auto idx = static_cast<int>(std::floor(h));
        double frac = h - idx;
        q.boundaries[r - 1] = (idx + 1 < n)
                                  ? sorted[idx] + frac * (sorted[idx + 1] - sorted[idx])
                                  : sorted[n - 1];
    }
    q.scores.resize(n);
    for (int i = 0; i < n; ++i) {
        int score = 0;
        for (double b : q.boundaries) {
            if (b <= q.magnitudes(i)) ++score;
        }
        q.scores[i] = score;
    }
    return q;
}

CurvatureProfile curvature_profile(const Dataset& d, const NeighborGraph& g) {
    CurvatureProfile profile;
    profile.raw.resize(d.n());
    for (int i = 0; i < d.n(); ++i) {
        profile.raw(i) = curvature_of_patch(patch_of(g, d, i));
    }
    profile.rank_collapsed = (g.k + 1 <= d.m());
    QuantizedScores q = quantize_scores(profile.raw);
    profile.magnitudes = std::move(q.magnitudes);
    profile.boundaries = q.boundaries;
    profile.scores = std::move(q.scores);
    profile.degenerate = q.degenerate;
    return profile;
}

CurvatureProfile curvature_profile(const Dataset& d, int k) {
    return curvature_profile(d, build_knng(d, k));
}

}  // namespace kknn
