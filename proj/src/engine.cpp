#include "kants/engine.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kants {

namespace {

// Stream ids under the master seed.
constexpr std::uint64_t kGridStream = 1;
constexpr std::uint64_t kColonyStream = 2;

void require(bool ok, const std::string& message)
{
    if (!ok)
        throw std::invalid_argument(message);
}

} // namespace

GridDims resolve_dims(const KantsParams& params, std::size_t n_ants)
{
    const int side = default_grid_side(n_ants);
    return {params.grid_x > 0 ? params.grid_x : side, params.grid_y > 0 ? params.grid_y : side};
}

void validate(const KantsParams& p, GridDims dims)
{
    require(p.beta >= 0.0 && std::isfinite(p.beta), "beta must be >= 0");
    require(p.delta >= 0.0 && std::isfinite(p.delta), "delta must be >= 0");
    require(p.q0 >= 0.0 && p.q0 <= 1.0, "q0 must lie in [0,1]");
    require(p.alpha > 0.0 && p.alpha <= 1.0, "alpha must lie in (0,1]");
    require(p.rho >= 0.0 && p.rho <= 1.0, "rho must lie in [0,1]");
    require(p.nr0 >= 1, "nr0 must be >= 1");
    require(p.cr >= 0, "cr must be >= 0");
    require(p.iterations >= 0, "iterations must be >= 0");
    require(p.snapshot_every >= 0, "snapshot interval must be >= 0");
    require(dims.width >= 3 && dims.height >= 3, "grid must be at least 3x3");
    const int smallest = std::min(dims.width, dims.height);
    require(2 * p.nr0 + 1 <= smallest, "nr0 too large for the grid (need 2*nr0+1 <= min(X,Y))");
    require(2 * p.cr + 1 <= smallest, "cr too large for the grid (need 2*cr+1 <= min(X,Y))");
}

double weight(double sigma, double beta, double delta)
{
    return std::pow(1.0 + delta / (1.0 + sigma * delta), beta);
}

int linear_radius_schedule(int nr0, int t, int total)
{
    if (total <= 0)
        return std::max(1, nr0);
    const double frac = 1.0 - static_cast<double>(t) / static_cast<double>(total);
    return std::max(1, static_cast<int>(std::lround(static_cast<double>(nr0) * frac)));
}

MoveCandidates score_moves(std::span<const double> reference, CellCoord from, int nr, const Grid& grid, int cr,
                           double beta, double delta)
{
    MoveCandidates out;
    out.cells = neighborhood_cells(from, nr, grid.dims());
    out.sigma.reserve(out.cells.size());
    out.weight.reserve(out.cells.size());
    for (const auto& c : out.cells) {
        const auto ctr = grid.centroid(c, cr);
        const double s = euclidean(reference, ctr);
        out.sigma.push_back(s);
        out.weight.push_back(weight(s, beta, delta));
    }
    return out;
}

MoveCandidates score_moves(std::span<const double> reference, CellCoord from, int nr, GridDims dims,
                           std::span<const double> centroid_field, double beta, double delta)
{
    const auto nv = reference.size();
    MoveCandidates out;
    out.cells = neighborhood_cells(from, nr, dims);
    out.sigma.reserve(out.cells.size());
    out.weight.reserve(out.cells.size());
    for (const auto& c : out.cells) {
        const double s = euclidean(reference, centroid_field.subspan(dims.index(c) * nv, nv));
        out.sigma.push_back(s);
        out.weight.push_back(weight(s, beta, delta));
    }
    return out;
}

std::vector<double> move_probabilities(const MoveCandidates& candidates)
{
    const double total = std::accumulate(candidates.weight.begin(), candidates.weight.end(), 0.0);
    std::vector<double> p(candidates.weight.size());
    for (std::size_t j = 0; j < p.size(); ++j)
        p[j] = candidates.weight[j] / total;
    return p;
}

std::size_t greedy_choice(const MoveCandidates& candidates)
{
    std::size_t best = 0;
    for (std::size_t j = 1; j < candidates.weight.size(); ++j)
        if (candidates.weight[j] > candidates.weight[best])
            best = j;
    return best;
}

std::size_t choose_move(const MoveCandidates& candidates, double q0, Rng& rng)
{
    const double q = rng.uniform();
    if (q <= q0)
        return greedy_choice(candidates);

    const double total = std::accumulate(candidates.weight.begin(), candidates.weight.end(), 0.0);
    const double spin = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t j = 0; j < candidates.weight.size(); ++j) {
        acc += candidates.weight[j];
        if (spin < acc)
            return j;
    }
    return candidates.weight.size() - 1;
}

CellCoord decide_where_to_go(const Ant& ant, const Grid& grid, const KantsParams& params, int nr, Rng& rng)
{
    const auto reference = params.sigma_source == SigmaSource::Ant ? std::span<const double>(ant.vector)
                                                                    : grid.cell(ant.position);
    const auto candidates = score_moves(reference, ant.position, nr, grid, params.cr, params.beta, params.delta);
    return candidates.cells[choose_move(candidates, params.q0, rng)];
}

Colony::Colony(const Dataset& train_set, const KantsParams& params, RadiusSchedule schedule)
    : params_(params), schedule_(std::move(schedule)), labels_(train_set.labels),
      rng_(derive_seed(params.seed, kColonyStream))
{
    if (train_set.empty())
        throw std::invalid_argument("training set is empty");
    const auto dims = resolve_dims(params, train_set.size());
    validate(params, dims);
    params_.grid_x = dims.width;
    params_.grid_y = dims.height;

    grid_ = Grid::random(dims, train_set.nvars, derive_seed(params.seed, kGridStream));

    ants_.reserve(train_set.size());
    for (const auto& s : train_set.samples) {
        const CellCoord pos{static_cast<int>(rng_.below(static_cast<std::uint64_t>(dims.width))),
                            static_cast<int>(rng_.below(static_cast<std::uint64_t>(dims.height)))};
        ants_.push_back({s.features, s.label, pos});
    }
    order_.resize(ants_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});

    if (params_.snapshot_every > 0)
        record_snapshot();
}

int Colony::current_radius() const
{
    return schedule_(params_.nr0, iteration_, params_.iterations);
}

void Colony::move_phase()
{
    const int nr = current_radius();
    const auto field = grid_.centroid_field(params_.cr);
    rng_.shuffle(std::span(order_));
    for (auto k : order_) {
        auto& ant = ants_[k];
        const auto reference = params_.sigma_source == SigmaSource::Ant ? std::span<const double>(ant.vector)
                                                                         : grid_.cell(ant.position);
        const auto candidates =
            score_moves(reference, ant.position, nr, grid_.dims(), field, params_.beta, params_.delta);
        ant.position = candidates.cells[choose_move(candidates, params_.q0, rng_)];
    }
}

void Colony::update_phase()
{
    for (auto k : order_)
        grid_.update_cell(ants_[k].position, ants_[k].vector, params_.alpha, params_.cr);
}

void Colony::evaporate_phase()
{
    grid_.evaporate(params_.rho);
}

void Colony::step()
{
    move_phase();
    update_phase();
    evaporate_phase();
    ++iteration_;
    if (params_.snapshot_every > 0 && iteration_ % params_.snapshot_every == 0)
        record_snapshot();
}

std::vector<CellCoord> Colony::positions() const
{
    std::vector<CellCoord> out;
    out.reserve(ants_.size());
    for (const auto& a : ants_)
        out.push_back(a.position);
    return out;
}

void Colony::record_snapshot()
{
    history_.push_back({iteration_, positions()});
}

TrainedModel Colony::finish() &&
{
    return {std::move(grid_), std::move(ants_), std::move(labels_), params_, std::move(history_)};
}

TrainedModel train(const Dataset& train_set, const KantsParams& params, const RadiusSchedule& schedule)
{
    Colony colony(train_set, params, schedule);
    for (int t = 0; t < params.iterations; ++t)
        colony.step();
    return std::move(colony).finish();
}

} // namespace kants
