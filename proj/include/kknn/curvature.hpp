#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "kknn/dataset.hpp"
#include "kknn/knn_graph.hpp"

namespace kknn {

/// The three local forms estimated at one patch: sigma is the local
/// covariance (its inverse approximates the metric tensor), hess the
/// second-fundamental-form estimate, shape = -hess * sigma the shape
/// operator. No matrix inverse is ever taken; the metric approximation
/// cancels in the product.
struct LocalForms {
    Eigen::MatrixXd sigma;
    Eigen::MatrixXd hess;
    Eigen::MatrixXd shape;
};

/// Output of the curvature quantizer: |raw| magnitudes min-max normalized to
/// [0,1], deciles of the normalized magnitudes as bin boundaries, and integer
/// scores in 0..9 (count of boundaries <= magnitude). A degenerate input
/// (max == min) short-circuits to all-zero magnitudes and scores, which makes
/// the classifier fall back to plain k-NN.
struct QuantizedScores {
    Eigen::VectorXd magnitudes;
    std::array<double, 9> boundaries{};
    std::vector<int> scores;
    bool degenerate = false;
};

/// Per-sample curvature summary of a whole dataset.
struct CurvatureProfile {
    Eigen::VectorXd raw;  // Gaussian curvature K_i per sample
    Eigen::VectorXd magnitudes;
    std::array<double, 9> boundaries{};
    std::vector<int> scores;
    bool degenerate = false;
    /// True when k+1 <= m: every local covariance is singular, all raw
    /// curvatures are exactly 0, and dimensionality reduction is advisable.
    bool rank_collapsed = false;

    int n() const { return static_cast<int>(raw.size()); }
};

/// Local covariance about the patch CENTER (not the patch mean):
/// sigma = (1/k) * sum_j (x_j - center)(x_j - center)^T.
Eigen::MatrixXd local_covariance(const Patch& p);

/// Design matrix with columns [1 | U_1..U_m | U_1^2..U_m^2 | U_a*U_b, a<b
/// lexicographic], where U holds unit eigenvectors of the local covariance
/// sorted by descending eigenvalue and products are pointwise. Shape is
/// m x (1 + m + m(m+1)/2).
Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& eigenvectors);

/// Gram matrix H H^T of the trailing m(m+1)/2 (quadratic) columns of the
/// design matrix; symmetric PSD, m x m.
Eigen::MatrixXd second_fundamental_form(const Eigen::MatrixXd& design);

/// shape = -hess * sigma.
Eigen::MatrixXd shape_operator(const Eigen::MatrixXd& hess, const Eigen::MatrixXd& sigma);

/// Gaussian curvature: det(shape). Sign is structurally 0 or (-1)^m.
double gaussian_curvature(const Eigen::MatrixXd& shape);

/// Mean curvature: trace(shape).
double mean_curvature(const Eigen::MatrixXd& shape);

struct PrincipalCurvatures {
    std::vector<double> values;  // real parts, sorted descending
    bool had_complex = false;    // the shape operator is not symmetric; tiny
                                 // imaginary parts can appear numerically
};

/// Eigenvalues of the shape operator, descending.
PrincipalCurvatures principal_curvatures(const Eigen::MatrixXd& shape);

/// Runs the covariance -> design -> second-fundamental-form -> shape pipeline
/// for one patch.
LocalForms local_forms(const Patch& p);

/// Gaussian curvature of one patch. When the patch has fewer neighbours than
/// dimensions (k+1 <= m) the local covariance is structurally singular and
/// the curvature is exactly 0; that case is returned without touching the
/// eigensolver.
double curvature_of_patch(const Patch& p);

/// Curvature of a test sample's patch (Algorithm-3 single-point use).
inline double curvature_of_query(const Patch& p) { return curvature_of_patch(p); }

/// Normalize + decile boundaries + digitize. See QuantizedScores.
QuantizedScores quantize_scores(const Eigen::VectorXd& raw);

/// Full training-side pipeline: build the k-NNG, compute every K_i, quantize.
CurvatureProfile curvature_profile(const Dataset& d, int k);

/// Same, reusing an already-built graph.
CurvatureProfile curvature_profile(const Dataset& d, const NeighborGraph& g);

}  // namespace kknn
