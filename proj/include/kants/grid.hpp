#pragma once

#include "kants/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace kants {

struct CellCoord {
    int x = 0;
    int y = 0;

    friend bool operator==(const CellCoord&, const CellCoord&) = default;
    friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

struct GridDims {
    int width = 0;
    int height = 0;

    std::size_t cells() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
    std::size_t index(CellCoord c) const
    {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c.x);
    }
    CellCoord coord(std::size_t index) const
    {
        return {static_cast<int>(index % static_cast<std::size_t>(width)),
                static_cast<int>(index / static_cast<std::size_t>(width))};
    }
    /// Wrap arbitrary integer coordinates onto the torus.
    CellCoord wrap(int x, int y) const;
    bool contains(CellCoord c) const { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; }
    /// Largest radius r with 2r+1 <= min(width, height).
    int max_radius() const;

    friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Grid side used when none is given: max(10, ceil(2 * sqrt(n_ants))), about
/// four cells per ant.
int default_grid_side(std::size_t n_ants);

/// Cells at Chebyshev distance 1..radius from `center` on the torus (the
/// center itself is excluded), ordered by (dy, dx) offset from -radius to
/// +radius. Always (2r+1)^2 - 1 entries.
std::vector<CellCoord> neighborhood_cells(CellCoord center, int radius, GridDims dims);

/// The toroidal lattice of feature vectors. Each cell keeps its current
/// vector and the frozen vector it started with.
class Grid {
public:
    Grid() = default;
    Grid(GridDims dims, std::size_t nvars, std::vector<double> cells, std::vector<double> initial);

    /// Every component uniform in [0,1); deterministic per seed.
    static Grid random(GridDims dims, std::size_t nvars, std::uint64_t seed);
    /// Every cell (current and initial) set to `value`.
    static Grid uniform(GridDims dims, std::span<const double> value);

    GridDims dims() const { return dims_; }
    int width() const { return dims_.width; }
    int height() const { return dims_.height; }
    std::size_t nvars() const { return nvars_; }
    std::size_t cell_count() const { return dims_.cells(); }

    std::span<const double> cell(CellCoord c) const { return cell(dims_.index(c)); }
    std::span<const double> cell(std::size_t index) const
    {
        return {cells_.data() + index * nvars_, nvars_};
    }
    std::span<double> cell_mut(CellCoord c)
    {
        return {cells_.data() + dims_.index(c) * nvars_, nvars_};
    }
    std::span<const double> initial_cell(CellCoord c) const
    {
        return {initial_.data() + dims_.index(c) * nvars_, nvars_};
    }

    /// Overwrite a current cell vector. The initial vector is untouched.
    void set_cell(CellCoord c, std::span<const double> value);

    /// Mean of the current vectors within Chebyshev radius `cr` of `center`,
    /// the center included: (2cr+1)^2 cells.
    FeatureVector centroid(CellCoord center, int cr) const;

    /// centroid(c, cr) for every cell, flattened row-major (y, then x).
    std::vector<double> centroid_field(int cr) const;

    /// Move the vector at `c` toward `ant`:
    ///   D = mean_v |ant(v) - centroid(c, cr)(v)|,  R = alpha * (1 - D),
    ///   V(v) += R * (ant(v) - V(v)).
    /// Returns R.
    double update_cell(CellCoord c, std::span<const double> ant, double alpha, int cr);

    /// Relax every cell toward its initial vector: V = (1 - rho) V + rho V0.
    void evaporate(double rho);

    const std::vector<double>& raw_cells() const { return cells_; }
    const std::vector<double>& raw_initial() const { return initial_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    GridDims dims_;
    std::size_t nvars_ = 0;
    std::vector<double> cells_;
    std::vector<double> initial_;
};

/// Euclidean distance between two equally long vectors.
double euclidean(std::span<const double> a, std::span<const double> b);

/// Mean absolute per-component difference; in [0,1] for vectors in [0,1]^n.
double mean_abs_difference(std::span<const double> a, std::span<const double> b);

/// Grid file format:
///
///     kants-grid,X,Y,nvars,1
///     x,y,v_0..v_{n-1},v0_0..v0_{n-1}      (one row per cell, y-major)
///
/// Values use the shortest round-trip decimal form, so import(export(g)) == g
/// bit for bit.
void export_grid(const Grid& grid, const std::filesystem::path& path);
Grid import_grid(const std::filesystem::path& path);
std::string grid_to_string(const Grid& grid);
Grid grid_from_string(const std::string& content, const std::string& source = "<memory>");

} // namespace kants
