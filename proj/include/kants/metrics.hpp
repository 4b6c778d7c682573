#pragma once

#include "kants/dataset.hpp"
#include "kants/grid.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kants {

/// Euclidean distance on the torus, each axis taking the shorter way round.
double toroidal_distance(CellCoord a, CellCoord b, GridDims dims);

struct CompactnessReport {
    /// Mean pairwise distance among ants of each class (indexed by LabelId;
    /// nullopt for classes with fewer than two ants).
    std::vector<std::optional<double>> per_class;
    double intra = 0.0; ///< mean over all same-class pairs
    std::optional<double> inter; ///< mean over all cross-class pairs
    /// intra / inter; absent when fewer than two classes are present.
    std::optional<double> ratio;
};

/// Spatial clustering of ants by class. Lower ratio means tighter clusters;
/// randomly placed labels give a ratio near 1.
CompactnessReport compactness(std::span<const CellCoord> positions, std::span<const LabelId> labels,
                              std::size_t n_labels, GridDims dims);

struct RunStats {
    double best = 0.0;
    double mean = 0.0;
    double stddev = 0.0; ///< population form (divisor n)
    std::size_t n_runs = 0;
};

RunStats aggregate_runs(std::span<const double> accuracies);

/// "98.00 ±0.67"
std::string format_mean_std(const RunStats& stats);

} // namespace kants
