#include "kknn/knn_graph.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "kknn/csv_io.hpp"

namespace kknn {

namespace {

// Ascending (distance, index) order; the index tiebreak keeps everything
// deterministic for duplicate points.
bool closer(const NeighborEntry& a, const NeighborEntry& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
}

std::vector<NeighborEntry> nearest(const Eigen::MatrixXd& points, const Eigen::VectorXd& q,
                                   int k, int skip_index) {
    std::vector<NeighborEntry> all;
    all.reserve(points.rows());
    for (int j = 0; j < points.rows(); ++j) {
        if (j == skip_index) continue;
        all.push_back({j, (points.row(j).transpose() - q).norm()});
    }
    int keep = std::min<int>(k, static_cast<int>(all.size()));
    std::partial_sort(all.begin(), all.begin() + keep, all.end(), closer);
    all.resize(keep);
    return all;
}

}  // namespace

int default_k(int n) {
    if (n < 2) throw std::invalid_argument("default_k: need n >= 2");
    return std::max(1, std::bit_width(static_cast<unsigned>(n)) - 1);
}

NeighborGraph build_knng(const Dataset& d, int k) {
    if (k < 1 || k > d.n() - 1) {
        throw std::invalid_argument("build_knng: k must be in [1, n-1], got " +
                                    std::to_string(k));
    }
    NeighborGraph g;
    g.k = k;
    g.neighbors.resize(d.n());
    for (int i = 0; i < d.n(); ++i) {
        g.neighbors[i] = nearest(d.features, d.features.row(i).transpose(), k, i);
    }
    return g;
}

Patch patch_of(const NeighborGraph& g, const Dataset& d, int i) {
    if (i < 0 || i >= g.n()) {
        throw std::invalid_argument("patch_of: sample index " + std::to_string(i) +
                                    " out of range");
    }
    Patch p;
    p.center = d.features.row(i).transpose();
    p.entries = g.neighbors[i];
    p.neighbor_vectors.resize(p.k(), d.m());
    for (int r = 0; r < p.k(); ++r) {
        p.neighbor_vectors.row(r) = d.features.row(p.entries[r].index);
    }
    return p;
}

Patch neighbors_of_query(const Dataset& train, const Eigen::VectorXd& query, int k) {
    if (query.size() != train.m()) {
        throw std::invalid_argument("neighbors_of_query: query has " +
                                    std::to_string(query.size()) + " features, expected " +
                                    std::to_string(train.m()));
    }
    if (k < 1 || k > train.n()) {
        throw std::invalid_argument("neighbors_of_query: k must be in [1, n_train], got " +
                                    std::to_string(k));
    }
    Patch p;
    p.center = query;
    p.entries = nearest(train.features, query, k, -1);
    p.neighbor_vectors.resize(p.k(), train.m());
    for (int r = 0; r < p.k(); ++r) {
        p.neighbor_vectors.row(r) = train.features.row(p.entries[r].index);
    }
    return p;
}

void write_graph_csv(const NeighborGraph& g, std::ostream& out) {
    out << "i,rank,j,distance\n";
    for (int i = 0; i < g.n(); ++i) {
        for (std::size_t r = 0; r < g.neighbors[i].size(); ++r) {
            out << i << ',' << r << ',' << g.neighbors[i][r].index << ','
                << format_double(g.neighbors[i][r].distance) << '\n';
        }
    }
}

}  // namespace kknn
