#pragma once

#include "kants/dataset.hpp"
#include "kants/grid.hpp"
#include "kants/random.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kants {

/// Which vector is compared against the candidate centroids when an ant picks
/// its next cell.
enum class SigmaSource {
    Ant,  ///< the ant's own sample vector (default)
    Cell, ///< the vector of the cell the ant stands on
};

struct KantsParams {
    double beta = 8.0;   ///< weighting exponent
    double delta = 10.0; ///< sensory term of the weighting function
    double q0 = 0.9;    ///< probability of the greedy move
    double alpha = 1.0; ///< learning rate, constant over the run
    double rho = 0.1;   ///< evaporation rate
    int nr0 = 1;        ///< initial movement radius
    int cr = 3;         ///< centroid radius
    int iterations = 100;
    int grid_x = 0; ///< 0 = default_grid_side(n_ants)
    int grid_y = 0;
    std::uint64_t seed = 1;
    SigmaSource sigma_source = SigmaSource::Ant;
    /// Record ant positions every this many iterations (and at iteration 0).
    /// 0 disables history.
    int snapshot_every = 0;
};

/// Grid dimensions a run will use for `n_ants` ants.
GridDims resolve_dims(const KantsParams& params, std::size_t n_ants);

/// Throws std::invalid_argument on any out-of-range parameter.
void validate(const KantsParams& params, GridDims dims);

/// Pheromone weighting (1 + delta / (1 + sigma * delta))^beta.
double weight(double sigma, double beta, double delta);

/// Movement radius for iteration t of T.
using RadiusSchedule = std::function<int(int nr0, int t, int total)>;

/// max(1, round(nr0 * (1 - t / T))).
int linear_radius_schedule(int nr0, int t, int total);

struct Ant {
    FeatureVector vector;
    LabelId label = 0;
    CellCoord position;
};

/// The scored candidate destinations of one decision, in neighborhood order.
struct MoveCandidates {
    std::vector<CellCoord> cells;
    std::vector<double> sigma;
    std::vector<double> weight;
};

/// Score the radius-`nr` neighborhood of `from`: sigma is the Euclidean
/// distance between `reference` and each candidate's centroid.
MoveCandidates score_moves(std::span<const double> reference, CellCoord from, int nr, const Grid& grid, int cr,
                           double beta, double delta);

/// Same, reading centroids from a precomputed Grid::centroid_field.
MoveCandidates score_moves(std::span<const double> reference, CellCoord from, int nr, GridDims dims,
                           std::span<const double> centroid_field, double beta, double delta);

/// Roulette probabilities W_j / sum W over the candidates.
std::vector<double> move_probabilities(const MoveCandidates& candidates);

/// Index of the greedy choice: largest weight, first in neighborhood order on
/// ties.
std::size_t greedy_choice(const MoveCandidates& candidates);

/// Pseudo-random proportional rule: draw q in [0,1); if q <= q0 take the
/// greedy choice, else spin a roulette wheel over the weights.
std::size_t choose_move(const MoveCandidates& candidates, double q0, Rng& rng);

/// One decision for `ant` on `grid` at movement radius `nr`.
CellCoord decide_where_to_go(const Ant& ant, const Grid& grid, const KantsParams& params, int nr, Rng& rng);

struct Snapshot {
    int iteration = 0;
    std::vector<CellCoord> positions; ///< indexed by ant id
};

struct TrainedModel {
    Grid grid;
    std::vector<Ant> ants;
    std::vector<std::string> labels;
    KantsParams params;
    std::vector<Snapshot> history;
};

/// The training loop state. Every iteration runs three phases in order:
/// all ants move (decisions read the grid as it was at the start of the
/// phase), every ant updates the cell it landed on, then the grid
/// evaporates once.
class Colony {
public:
    Colony(const Dataset& train_set, const KantsParams& params, RadiusSchedule schedule = linear_radius_schedule);

    void step();

    void move_phase();
    void update_phase();
    void evaporate_phase();

    int iteration() const { return iteration_; }
    int current_radius() const;
    const Grid& grid() const { return grid_; }
    const std::vector<Ant>& ants() const { return ants_; }
    const KantsParams& params() const { return params_; }

    std::vector<CellCoord> positions() const;
    TrainedModel finish() &&;

private:
    void record_snapshot();

    KantsParams params_;
    RadiusSchedule schedule_;
    std::vector<std::string> labels_;
    Grid grid_;
    std::vector<Ant> ants_;
    std::vector<std::size_t> order_;
    Rng rng_;
    int iteration_ = 0;
    std::vector<Snapshot> history_;
};

/// Run the full training loop. Deterministic per params.seed.
TrainedModel train(const Dataset& train_set, const KantsParams& params,
                   const RadiusSchedule& schedule = linear_radius_schedule);

} // namespace kants
