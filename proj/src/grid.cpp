#include "kants/grid.hpp"

#include "kants/random.hpp"
#include "kants/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kants {

namespace {

constexpr int kGridFormatVersion = 1;

int wrap_axis(int v, int n)
{
    const int r = v % n;
    return r < 0 ? r + n : r;
}

void check_radius(int radius, GridDims dims, const char* what)
{
    if (radius < 0 || 2 * radius + 1 > std::min(dims.width, dims.height))
        throw std::invalid_argument(std::string(what) + " radius " + std::to_string(radius) + " too large for a " +
                                    std::to_string(dims.width) + "x" + std::to_string(dims.height) + " grid");
}

} // namespace

CellCoord GridDims::wrap(int x, int y) const
{
    return {wrap_axis(x, width), wrap_axis(y, height)};
}

int GridDims::max_radius() const
{
    return (std::min(width, height) - 1) / 2;
}

int default_grid_side(std::size_t n_ants)
{
    const auto side = static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(n_ants))));
    return std::max(10, side);
}

std::vector<CellCoord> neighborhood_cells(CellCoord center, int radius, GridDims dims)
{
    if (radius < 1)
        throw std::invalid_argument("neighborhood radius must be at least 1");
    check_radius(radius, dims, "neighborhood");
    std::vector<CellCoord> out;
    out.reserve(static_cast<std::size_t>((2 * radius + 1) * (2 * radius + 1) - 1));
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx != 0 || dy != 0)
                out.push_back(dims.wrap(center.x + dx, center.y + dy));
    return out;
}

Grid::Grid(GridDims dims, std::size_t nvars, std::vector<double> cells, std::vector<double> initial)
    : dims_(dims), nvars_(nvars), cells_(std::move(cells)), initial_(std::move(initial))
{
    if (dims.width < 1 || dims.height < 1 || nvars < 1)
        throw std::invalid_argument("grid: degenerate dimensions");
    if (cells_.size() != dims.cells() * nvars || initial_.size() != cells_.size())
        throw std::invalid_argument("grid: storage does not match dimensions");
}

Grid Grid::random(GridDims dims, std::size_t nvars, std::uint64_t seed)
{
    if (dims.width < 3 || dims.height < 3)
        throw std::invalid_argument("grid: width and height must be at least 3");
    if (nvars < 1)
        throw std::invalid_argument("grid: nvars must be at least 1");
    Rng rng(seed);
    std::vector<double> cells(dims.cells() * nvars);
    for (auto& v : cells)
        v = rng.uniform();
    auto initial = cells;
    return Grid(dims, nvars, std::move(cells), std::move(initial));
}

Grid Grid::uniform(GridDims dims, std::span<const double> value)
{
    std::vector<double> cells;
    cells.reserve(dims.cells() * value.size());
    for (std::size_t i = 0; i < dims.cells(); ++i)
        cells.insert(cells.end(), value.begin(), value.end());
    auto initial = cells;
    return Grid(dims, value.size(), std::move(cells), std::move(initial));
}

void Grid::set_cell(CellCoord c, std::span<const double> value)
{
    if (value.size() != nvars_)
        throw std::invalid_argument("set_cell: wrong vector length");
    std::copy(value.begin(), value.end(), cell_mut(c).begin());
}

FeatureVector Grid::centroid(CellCoord center, int cr) const
{
    check_radius(cr, dims_, "centroid");
    FeatureVector sum(nvars_, 0.0);
    for (int dy = -cr; dy <= cr; ++dy) {
        for (int dx = -cr; dx <= cr; ++dx) {
            const auto v = cell(dims_.wrap(center.x + dx, center.y + dy));
            for (std::size_t k = 0; k < nvars_; ++k)
                sum[k] += v[k];
        }
    }
    const double n = static_cast<double>((2 * cr + 1) * (2 * cr + 1));
    for (auto& s : sum)
        s /= n;
    return sum;
}

std::vector<double> Grid::centroid_field(int cr) const
{
    check_radius(cr, dims_, "centroid");
    const int w = dims_.width;
    const int h = dims_.height;
    const auto nv = nvars_;
    // Separable box filter: horizontal window sums, then vertical.
    std::vector<double> rows(cells_.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double* out = rows.data() + dims_.index({x, y}) * nv;
            for (int dx = -cr; dx <= cr; ++dx) {
                const auto v = cell(dims_.wrap(x + dx, y));
                for (std::size_t k = 0; k < nv; ++k)
                    out[k] += v[k];
            }
        }
    }
    std::vector<double> field(cells_.size(), 0.0);
    const double n = static_cast<double>((2 * cr + 1) * (2 * cr + 1));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double* out = field.data() + dims_.index({x, y}) * nv;
            for (int dy = -cr; dy <= cr; ++dy) {
                const double* in = rows.data() + dims_.index(dims_.wrap(x, y + dy)) * nv;
                for (std::size_t k = 0; k < nv; ++k)
                    out[k] += in[k];
            }
            for (std::size_t k = 0; k < nv; ++k)
                out[k] /= n;
        }
    }
    return field;
}

double Grid::update_cell(CellCoord c, std::span<const double> ant, double alpha, int cr)
{
    if (ant.size() != nvars_)
        throw std::invalid_argument("update_cell: ant vector has wrong length");
    const auto ctr = centroid(c, cr);
    const double reinforce = alpha * (1.0 - mean_abs_difference(ant, ctr));
    auto v = cell_mut(c);
    for (std::size_t k = 0; k < nvars_; ++k) {
        // Clamped to the segment [V, ant] so rounding never overshoots.
        const double moved = v[k] + reinforce * (ant[k] - v[k]);
        v[k] = std::clamp(moved, std::min(v[k], ant[k]), std::max(v[k], ant[k]));
    }
    return reinforce;
}

void Grid::evaporate(double rho)
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("evaporation rate must lie in [0,1]");
    if (rho == 1.0) {
        cells_ = initial_;
        return;
    }
    const double keep = 1.0 - rho;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const double relaxed = keep * cells_[i] + rho * initial_[i];
        cells_[i] = std::clamp(relaxed, std::min(cells_[i], initial_[i]), std::max(cells_[i], initial_[i]));
    }
}

double euclidean(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double mean_abs_difference(std::span<const double> a, std::span<const double> b)
{
    if (a.empty())
        return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += std::abs(a[k] - b[k]);
    return s / static_cast<double>(a.size());
}

std::string grid_to_string(const Grid& grid)
{
    std::ostringstream out;
    out << "kants-grid," << grid.width() << ',' << grid.height() << ',' << grid.nvars() << ','
        << kGridFormatVersion << '\n';
    for (std::size_t i = 0; i < grid.cell_count(); ++i) {
        const auto c = grid.dims().coord(i);
        out << c.x << ',' << c.y;
        for (double v : grid.cell(c))
            out << ',' << text::format_double(v);
        for (double v : grid.initial_cell(c))
            out << ',' << text::format_double(v);
        out << '\n';
    }
    return out.str();
}

Grid grid_from_string(const std::string& content, const std::string& source)
{
    const auto rows = text::lines(content);
    if (rows.empty())
        throw ParseError(source, 1, "empty grid file");
    const auto head = text::split_fields(rows[0]);
    if (head.size() != 5 || head[0] != "kants-grid")
        throw ParseError(source, 1, "expected header 'kants-grid,X,Y,nvars,version'");
    const auto w = text::parse_int(head[1]);
    const auto h = text::parse_int(head[2]);
    const auto nv = text::parse_int(head[3]);
    const auto version = text::parse_int(head[4]);
    if (!w || !h || !nv || *w < 1 || *h < 1 || *nv < 1)
        throw ParseError(source, 1, "bad grid dimensions");
    if (!version || *version != kGridFormatVersion)
        throw ParseError(source, 1, "unsupported grid format version");

    const GridDims dims{static_cast<int>(*w), static_cast<int>(*h)};
    const auto nvars = static_cast<std::size_t>(*nv);
    std::vector<double> cells(dims.cells() * nvars);
    std::vector<double> initial(cells.size());
    std::vector<bool> seen(dims.cells(), false);

    std::size_t count = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto lineno = i + 1;
        if (text::trim(rows[i]).empty())
            continue;
        const auto f = text::split_fields(rows[i]);
        if (f.size() != 2 + 2 * nvars)
            throw ParseError(source, lineno, "expected " + std::to_string(2 + 2 * nvars) + " fields");
        const auto x = text::parse_int(f[0]);
        const auto y = text::parse_int(f[1]);
        if (!x || !y || !dims.contains({static_cast<int>(*x), static_cast<int>(*y)}))
            throw ParseError(source, lineno, "bad cell coordinates");
        const auto idx = dims.index({static_cast<int>(*x), static_cast<int>(*y)});
        if (seen[idx])
            throw ParseError(source, lineno, "duplicate cell");
        seen[idx] = true;
        for (std::size_t k = 0; k < 2 * nvars; ++k) {
            const auto v = text::parse_double(f[2 + k]);
            if (!v)
                throw ParseError(source, lineno, "non-numeric value '" + std::string(f[2 + k]) + "'");
            (k < nvars ? cells[idx * nvars + k] : initial[idx * nvars + k - nvars]) = *v;
        }
        ++count;
    }
    if (count != dims.cells())
        throw ParseError(source, rows.size(),
                         "expected " + std::to_string(dims.cells()) + " cells, found " + std::to_string(count));
    return Grid(dims, nvars, std::move(cells), std::move(initial));
}

void export_grid(const Grid& grid, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << grid_to_string(grid);
}

Grid import_grid(const std::filesystem::path& path)
{
    return grid_from_string(text::read_file(path.string()), path.string());
}

} // namespace kants
