#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kknn {

/// A labelled dataset: one sample per row, class ids densified to 0..c-1 in
/// first-appearance order. Immutable by convention; every operation below
/// returns a new value.
struct Dataset {
    Eigen::MatrixXd features;                // n x m
    std::vector<int> labels;                 // length n, values in 0..class_count-1
    int class_count = 0;
    std::vector<std::string> label_names;    // class id -> original label text
    std::vector<std::string> feature_names;  // empty when the source had no header

    int n() const { return static_cast<int>(features.rows()); }
    int m() const { return static_cast<int>(features.cols()); }

    /// Throws std::invalid_argument if any structural invariant is violated
    /// (finite features, n >= 2, m >= 1, c >= 2, every class id used).
    void validate() const;
};

struct SplitPlan {
    double train_fraction = 0.5;
    std::uint64_t seed = 42;
    bool stratified = true;
};

/// Column selector: by 0-based index, by header name, or default (last column).
using ColumnRef = std::variant<std::monostate, int, std::string>;

struct CsvOptions {
    ColumnRef label_column;  // default: last column
    bool has_header = true;
    std::vector<std::string> ignore_columns;  // dropped before parsing features
};

/// Parses a UTF-8 comma-separated file. Feature cells must be real numbers
/// (decimal point, no locale); label cells are arbitrary categories mapped to
/// 0..c-1 in first-appearance order. Cells are trimmed of surrounding
/// whitespace; double quotes around a cell are stripped.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Each feature column shifted to mean 0 and scaled to population standard
/// deviation 1; constant columns become all-zero.
Dataset standardize(const Dataset& d);

/// Projects the (mean-centered) features onto the top target_dim eigenvectors
/// of the global covariance, descending eigenvalue order.
/// Requires 1 <= target_dim <= min(n-1, m).
Dataset pca_reduce(const Dataset& d, int target_dim);

/// Fisher discriminant projection onto the top eigenvectors of
/// (S_w + ridge*I)^-1 S_b. Requires 1 <= target_dim <= class_count-1.
/// ridge < 0 selects the default 1e-6 * trace(S_w) / m; ridge == 0 demands a
/// nonsingular within-class scatter.
Dataset lda_reduce(const Dataset& d, int target_dim, double ridge = -1.0);

/// Seeded stratified holdout indices (ascending within each side). Each class
/// keeps max(1, floor(train_fraction * n_class)) training samples.
std::pair<std::vector<int>, std::vector<int>> stratified_split_indices(const Dataset& d,
                                                                       const SplitPlan& plan);

std::pair<Dataset, Dataset> stratified_split(const Dataset& d, const SplitPlan& plan);

/// Seeded stratified row subsample (used to reduce large benchmark datasets
/// before any experiment).
Dataset stratified_subsample(const Dataset& d, double fraction, std::uint64_t seed);

/// New dataset from a subset of rows (labels remapped is NOT performed; the
/// subset must still contain every class).
Dataset take_rows(const Dataset& d, const std::vector<int>& rows);

}  // namespace kknn
