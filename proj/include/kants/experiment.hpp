#pragma once

#include "kants/classifier.hpp"
#include "kants/dataset.hpp"
#include "kants/engine.hpp"
#include "kants/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kants {

/// Run fn(0..n-1) on a pool of worker threads. Each index is handled exactly
/// once; the first exception thrown by any task is rethrown after all
/// workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

/// Known datasets shipped under data/: file name and column layout.
struct DatasetPreset {
    std::string name;
    std::string file;
    CsvOptions csv;
};

std::optional<DatasetPreset> find_preset(const std::string& name);

/// A normalized train/test pair; the test side is scaled with the training
/// ranges.
struct PreparedSplit {
    Dataset train;
    Dataset test;
    FeatureRanges ranges;
};

PreparedSplit prepare(const Split& split);

/// Seed of the i-th (1-based) split set under `master`; shared by
/// make-splits and reproduce so both produce the same partitions.
std::uint64_t split_seed(std::uint64_t master, int set_index);

struct RunOutcome {
    double accuracy = 0.0;
    double initial_ratio = 0.0; ///< compactness at iteration 0
    double final_ratio = 0.0;   ///< compactness after the last iteration
    double seconds = 0.0;       ///< wall time of training + evaluation
    TrainedModel model;
};

/// Train on `data.train`, classify `data.test` (skipped when empty).
RunOutcome run_once(const PreparedSplit& data, const KantsParams& params, std::size_t k,
                    LabelingMode mode = LabelingMode::CellOccupancy);

/// Compactness ratio of the given ant positions (1.0 when undefined).
double compactness_ratio(const std::vector<Ant>& ants, const std::vector<CellCoord>& positions,
                         std::size_t n_labels, GridDims dims);

struct SweepConfig {
    std::vector<double> betas;
    std::vector<double> deltas;
    KantsParams base;
    int runs = 1;
    std::uint64_t seed = 1;
    std::size_t k = 1;
    double train_fraction = 0.5;
};

struct SweepRow {
    double beta = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
    double initial_ratio = 0.0;
    double final_ratio = 0.0;
    double accuracy = 0.0;
    GridDims dims;
    std::vector<CellCoord> positions;
    std::vector<std::size_t> classes;
};

/// Train once per (beta, delta, run) on one stratified split of `raw`.
std::vector<SweepRow> run_sweep(const Dataset& raw, const SweepConfig& config);

/// `beta,delta,seed,final_ratio,accuracy` with a header line.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// The (beta, delta) with the lowest mean final ratio.
std::pair<double, double> best_sweep_point(const std::vector<SweepRow>& rows);

/// `count` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int count);

struct ReproduceConfig {
    std::string name;
    KantsParams base;
    std::size_t k = 1;
    int runs = 10;
    int sets = 3;
    std::vector<double> fractions{0.5, 0.9};
    std::uint64_t seed = 1;
    LabelingMode mode = LabelingMode::CellOccupancy;
    /// When set, split files are written here.
    std::optional<std::filesystem::path> split_dir;
};

struct ReproduceRow {
    std::string split;
    RunStats kants;
    double knn = 0.0;
    double mean_seconds = 0.0;
    double max_seconds = 0.0;
};

/// For each fraction and set: a fresh stratified split of the whole
/// dataset, `runs` seeded trainings, and the deterministic KNN baseline.
std::vector<ReproduceRow> reproduce(const Dataset& raw, const ReproduceConfig& config);

/// Fixed-width table: split, KANTS best, KANTS mean ±std, KNN (deterministic).
std::string format_table(const std::string& title, const std::vector<ReproduceRow>& rows);

} // namespace kants
