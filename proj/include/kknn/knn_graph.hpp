#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <vector>

#include "kknn/dataset.hpp"

namespace kknn {

struct NeighborEntry {
    int index;
    double distance;
};

/// Directed k-nearest-neighbour graph: for each sample, its k closest other
/// samples under Euclidean distance, ascending, ties broken by lower index.
struct NeighborGraph {
    int k = 0;
    std::vector<std::vector<NeighborEntry>> neighbors;

    int n() const { return static_cast<int>(neighbors.size()); }
};

/// A sample (or query point) together with its k nearest neighbours; the set
/// {center} u neighbours has cardinality k+1.
struct Patch {
    Eigen::VectorXd center;
    Eigen::MatrixXd neighbor_vectors;    // k x m, row order matches entries
    std::vector<NeighborEntry> entries;  // ascending distance

    int k() const { return static_cast<int>(entries.size()); }
    int m() const { return static_cast<int>(center.size()); }
};

/// Paper default neighbourhood size: max(1, floor(log2 n)). Exact for powers
/// of two (integer bit arithmetic, no libm).
int default_k(int n);

/// Brute-force O(n^2 m) construction; each list holds min(k, n-1) entries.
NeighborGraph build_knng(const Dataset& d, int k);

Patch patch_of(const NeighborGraph& g, const Dataset& d, int i);

/// k nearest training samples of an arbitrary query vector.
Patch neighbors_of_query(const Dataset& train, const Eigen::VectorXd& query, int k);

/// Debug dump, one line per edge: i,rank,j,distance
void write_graph_csv(const NeighborGraph& g, std::ostream& out);

}  // namespace kknn
