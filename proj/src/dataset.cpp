#include "kknn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kknn/random.hpp"

namespace kknn {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

// Splits one CSV record; supports double-quoted cells with embedded commas.
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool in_quotes = false;
    for (char ch : line) {
        if (ch == '"') {
            in_quotes = !in_quotes;
            cur.push_back(ch);
        } else if (ch == ',' && !in_quotes) {
            cells.push_back(unquote(trim(cur)));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(unquote(trim(cur)));
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

void Dataset::validate() const {
    if (n() < 2) throw std::invalid_argument("dataset: need at least 2 samples");
    if (m() < 1) throw std::invalid_argument("dataset: need at least 1 feature");
    if (class_count < 2) throw std::invalid_argument("dataset: need at least 2 classes");
    if (static_cast<int>(labels.size()) != n()) {
        throw std::invalid_argument("dataset: label count does not match sample count");
    }
    if (!features.allFinite()) {
        throw std::invalid_argument("dataset: features contain NaN or Inf");
    }
    std::vector<bool> seen(class_count, false);
    for (int y : labels) {
        if (y < 0 || y >= class_count) {
            throw std::invalid_argument("dataset: label id out of range");
        }
        seen[y] = true;
    }
    for (int c = 0; c < class_count; ++c) {
        if (!seen[c]) {
            throw std::invalid_argument("dataset: class " + std::to_string(c) +
                                        " has no samples");
        }
    }
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path.string());
    }

    std::vector<std::vector<std::string>> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        records.push_back(split_record(line));
    }
    if (records.empty()) {
        throw std::runtime_error("empty file: " + path.string());
    }

    std::vector<std::string> header;
    std::size_t first_data_row = 0;
    const std::size_t width = records.front().size();
    if (options.has_header) {
        header = records.front();
        first_data_row = 1;
        if (records.size() == 1) {
            throw std::runtime_error("file has a header but no data rows: " + path.string());
        }
    } else {
        header.resize(width);
        for (std::size_t j = 0; j < width; ++j) header[j] = "col" + std::to_string(j);
    }

    auto column_name = [&](int j) {
        return options.has_header ? "\"" + header[j] + "\"" : "#" + std::to_string(j);
    };

    int label_index = static_cast<int>(width) - 1;
    if (std::holds_alternative<int>(options.label_column)) {
        label_index = std::get<int>(options.label_column);
    } else if (std::holds_alternative<std::string>(options.label_column)) {
        const std::string& want = std::get<std::string>(options.label_column);
        auto it = std::find(header.begin(), header.end(), want);
        if (it != header.end()) {
            label_index = static_cast<int>(it - header.begin());
        } else {
            // A non-header file may still address the column by number.
            int idx = -1;
            if (double v = 0; parse_double(want, v) && v == std::floor(v)) idx = static_cast<int>(v);
            if (idx < 0) {
                throw std::runtime_error("label column \"" + want + "\" not found in header");
            }
            label_index = idx;
        }
    }
    if (label_index < 0 || label_index >= static_cast<int>(width)) {
        throw std::runtime_error("label column index " + std::to_string(label_index) +
                                 " out of range (file has " + std::to_string(width) +
                                 " columns)");
    }

    std::vector<bool> drop(width, false);
    for (const std::string& name : options.ignore_columns) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it != header.end()) drop[it - header.begin()] = true;
    }
    drop[label_index] = false;

    std::vector<int> feature_cols;
    for (int j = 0; j < static_cast<int>(width); ++j) {
        if (j != label_index && !drop[j]) feature_cols.push_back(j);
    }
    if (feature_cols.empty()) {
        throw std::runtime_error("no feature columns left in " + path.string());
    }

    const int n = static_cast<int>(records.size() - first_data_row);
    const int m = static_cast<int>(feature_cols.size());
    Dataset d;
    d.features.resize(n, m);
    d.labels.reserve(n);
    std::map<std::string, int> label_ids;

    for (int i = 0; i < n; ++i) {
        const auto& rec = records[first_data_row + i];
        if (rec.size() != width) {
            throw std::runtime_error("row " + std::to_string(i + 1) + " has " +
                                     std::to_string(rec.size()) + " cells, expected " +
                                     std::to_string(width));
        }
        for (int jj = 0; jj < m; ++jj) {
            const std::string& cell = rec[feature_cols[jj]];
            double v = 0;
            if (!parse_double(cell, v) || !std::isfinite(v)) {
                throw std::runtime_error("non-numeric feature cell \"" + cell + "\" at row " +
                                         std::to_string(i + 1) + ", column " +
                                         column_name(feature_cols[jj]));
            }
            d.features(i, jj) = v;
        }
        const std::string& cell = rec[label_index];
        auto [it, inserted] = label_ids.try_emplace(cell, static_cast<int>(d.label_names.size()));
        if (inserted) d.label_names.push_back(cell);
        d.labels.push_back(it->second);
    }

    d.class_count = static_cast<int>(d.label_names.size());
    if (d.class_count < 2) {
        throw std::runtime_error("single-class dataset: " + path.string());
    }
    for (int jj = 0; jj < m; ++jj) d.feature_names.push_back(header[feature_cols[jj]]);
    d.validate();
    return d;
}

Dataset standardize(const Dataset& d) {
    if (d.n() < 2) throw std::invalid_argument("standardize: need n >= 2");
    Dataset out = d;
    for (int j = 0; j < d.m(); ++j) {
        double mean = d.features.col(j).mean();
        double var = (d.features.col(j).array() - mean).square().sum() / d.n();
        double sd = std::sqrt(var);
        if (sd == 0.0) {
            out.features.col(j).setZero();
        } else {
            out.features.col(j) = (d.features.col(j).array() - mean) / sd;
        }
    }
    return out;
}

Dataset pca_reduce(const Dataset& d, int target_dim) {
    const int limit = std::min(d.n() - 1, d.m());
    if (target_dim < 1 || target_dim > limit) {
        throw std::invalid_argument("pca_reduce: target_dim must be in [1, " +
                                    std::to_string(limit) + "], got " +
                                    std::to_string(target_dim));
    }
    Eigen::RowVectorXd mean = d.features.colwise().mean();
    Eigen::MatrixXd centered = d.features.rowwise() - mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered) / d.n();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw std::runtime_error("pca_reduce: eigensolver failed");
    // Eigen reports ascending order; keep the trailing columns reversed.
    Eigen::MatrixXd basis(d.m(), target_dim);
    for (int j = 0; j < target_dim; ++j) {
        basis.col(j) = eig.eigenvectors().col(d.m() - 1 - j);
    }
    Dataset out = d;
    out.features = centered * basis;
    out.feature_names.clear();
    for (int j = 0; j < target_dim; ++j) out.feature_names.push_back("pc" + std::to_string(j + 1));
    return out;
}

Dataset lda_reduce(const Dataset& d, int target_dim, double ridge) {
    if (target_dim < 1 || target_dim > d.class_count - 1) {
        throw std::invalid_argument("lda_reduce: target_dim must be in [1, c-1] = [1, " +
                                    std::to_string(d.class_count - 1) + "], got " +
                                    std::to_string(target_dim));
    }
    if (target_dim > d.m()) {
        throw std::invalid_argument("lda_reduce: target_dim exceeds feature count");
    }

    const int m = d.m();
    Eigen::RowVectorXd global_mean = d.features.colwise().mean();
    std::vector<Eigen::RowVectorXd> class_mean(d.class_count, Eigen::RowVectorXd::Zero(m));
    std::vector<int> class_size(d.class_count, 0);
    for (int i = 0; i < d.n(); ++i) {
        class_mean[d.labels[i]] += d.features.row(i);
        ++class_size[d.labels[i]];
    }
    for (int c = 0; c < d.class_count; ++c) class_mean[c] /= class_size[c];

    Eigen::MatrixXd within = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd between = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < d.n(); ++i) {
        Eigen::RowVectorXd dev = d.features.row(i) - class_mean[d.labels[i]];
        within.noalias() += dev.transpose() * dev;
    }
    for (int c = 0; c < d.class_count; ++c) {
        Eigen::RowVectorXd dev = class_mean[c] - global_mean;
        between.noalias() += class_size[c] * dev.transpose() * dev;
    }

    if (ridge < 0) ridge = 1e-6 * within.trace() / m;
    if (ridge == 0.0) {
        Eigen::LLT<Eigen::MatrixXd> chol(within);
        if (chol.info() != Eigen::Success) {
            throw std::runtime_error("lda_reduce: singular within-class scatter with ridge = 0");
        }
    }
    Eigen::MatrixXd regularized = within + ridge * Eigen::MatrixXd::Identity(m, m);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(between, regularized);
    if (eig.info() != Eigen::Success) throw std::runtime_error("lda_reduce: eigensolver failed");
    Eigen::MatrixXd basis(m, target_dim);
    for (int j = 0; j < target_dim; ++j) {
        basis.col(j) = eig.eigenvectors().col(m - 1 - j);
    }
    Dataset out = d;
    out.features = d.features * basis;
    out.feature_names.clear();
    for (int j = 0; j < target_dim; ++j) out.feature_names.push_back("ld" + std::to_string(j + 1));
    return out;
}

std::pair<std::vector<int>, std::vector<int>> stratified_split_indices(const Dataset& d,
                                                                       const SplitPlan& plan) {
    if (!(plan.train_fraction > 0.0 && plan.train_fraction < 1.0)) {
        throw std::invalid_argument("stratified_split: train_fraction must be in (0,1)");
    }
    SplitMix64 rng(plan.seed);
    std::vector<int> train, test;
    if (plan.stratified) {
        std::vector<std::vector<int>> by_class(d.class_count);
        for (int i = 0; i < d.n(); ++i) by_class[d.labels[i]].push_back(i);
        for (int c = 0; c < d.class_count; ++c) {
            auto& idx = by_class[c];
            if (idx.empty()) {
                throw std::invalid_argument("stratified_split: class " + std::to_string(c) +
                                            " would get 0 training samples");
            }
            shuffle(idx, rng);
            int want = std::max(1, static_cast<int>(std::floor(plan.train_fraction * idx.size())));
            train.insert(train.end(), idx.begin(), idx.begin() + want);
            test.insert(test.end(), idx.begin() + want, idx.end());
        }
    } else {
        std::vector<int> all(d.n());
        std::iota(all.begin(), all.end(), 0);
        shuffle(all, rng);
        int want = std::max(1, static_cast<int>(std::floor(plan.train_fraction * d.n())));
        train.assign(all.begin(), all.begin() + want);
        test.assign(all.begin() + want, all.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

Dataset take_rows(const Dataset& d, const std::vector<int>& rows) {
    Dataset out;
    out.features.resize(static_cast<int>(rows.size()), d.m());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<int>(i)) = d.features.row(rows[i]);
        out.labels.push_back(d.labels[rows[i]]);
    }
    out.class_count = d.class_count;
    out.label_names = d.label_names;
    out.feature_names = d.feature_names;
    return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& d, const SplitPlan& plan) {
    auto [train_idx, test_idx] = stratified_split_indices(d, plan);
    return {take_rows(d, train_idx), take_rows(d, test_idx)};
}

Dataset stratified_subsample(const Dataset& d, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("stratified_subsample: fraction must be in (0,1]");
    }
    if (fraction == 1.0) return d;
    SplitPlan plan{fraction, seed, true};
    auto [keep, dropped] = stratified_split_indices(d, plan);
    (void)dropped;
    return take_rows(d, keep);
}

}  // namespace kknn
