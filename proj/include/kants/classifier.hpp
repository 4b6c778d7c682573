#pragma once

#include "kants/dataset.hpp"
#include "kants/engine.hpp"
#include "kants/grid.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace kants {

/// Reference vectors with a class each, searched by nearest-K voting.
struct LabeledGrid {
    Grid grid;
    std::vector<std::string> labels;
    /// Per cell (row-major), the class of the ants that ended there.
    std::vector<std::optional<LabelId>> cell_labels;

    std::size_t labeled_count() const;
};

/// How the reference set for classification is built from a trained model.
enum class LabelingMode {
    /// Cells occupied at the end of training, labeled by their occupants.
    CellOccupancy,
    /// The ants' own sample vectors (a plain KNN over the training set).
    AntVectors,
};

/// Label every occupied cell with the majority class of its ants. Ties go to
/// the tied-class ant whose vector is nearest the cell vector.
LabeledGrid label_cells(const TrainedModel& model);

struct Prediction {
    LabelId label = 0;
    std::vector<double> neighbor_distances; ///< ascending, K entries
    std::vector<std::size_t> votes;         ///< per class, sums to K
};

/// One reference point for nearest-K search.
struct Reference {
    std::span<const double> vector;
    LabelId label;
};

/// Plurality vote among the K references nearest to `sample` (Euclidean in
/// feature space).
///
/// Neighbours at equal distance are ranked by class order and then by
/// reference index. A tied vote goes to the class with the larger sum of
/// inverse distances, then to the lower class id.
Prediction nearest_k_vote(std::span<const double> sample, std::span<const Reference> references,
                          std::size_t n_labels, std::size_t k);

Prediction classify(std::span<const double> sample, const LabeledGrid& lg, std::size_t k);

/// Reference set of a labeled grid: its labeled cells in row-major order.
std::vector<Reference> references(const LabeledGrid& lg);
std::vector<Reference> references(const Dataset& dataset);
std::vector<Reference> references(const TrainedModel& model, LabelingMode mode, const LabeledGrid& lg);

struct Evaluation {
    double accuracy = 0.0; ///< percent correct
    std::vector<LabelId> predicted;
};

/// Classify every test sample against `refs`. Throws on an empty test set.
Evaluation evaluate(std::span<const Reference> refs, const Dataset& test, std::size_t k);

Evaluation evaluate(const LabeledGrid& lg, const Dataset& test, std::size_t k);

/// Classic KNN over the raw training vectors; returns percent correct.
double knn_baseline(const Dataset& train, const Dataset& test, std::size_t k);

/// `sample_index,true_label,predicted_label,correct` rows with a header.
void write_predictions(const Dataset& test, const Evaluation& eval, const std::filesystem::path& path);

} // namespace kants
