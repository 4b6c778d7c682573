#pragma once

#include "kants/engine.hpp"
#include "kants/grid.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kants {

// Ant position history files:
//
//     kants-history,X,Y,1
//     iteration,ant_id,label,x,y
//     0,0,Iris-setosa,12,3
//     ...
//
// A file may hold any number of iterations.

struct HistoryRow {
    int iteration = 0;
    std::size_t ant_id = 0;
    std::string label;
    CellCoord position;
};

struct History {
    GridDims dims;
    std::vector<HistoryRow> rows;

    /// Distinct iterations, ascending.
    std::vector<int> iterations() const;
    /// Distinct labels in canonical order.
    std::vector<std::string> labels() const;
};

std::string history_to_string(GridDims dims, const std::vector<HistoryRow>& rows);
History history_from_string(const std::string& content, const std::string& source = "<memory>");
History read_history(const std::filesystem::path& path);

/// Rows of one snapshot of a trained model.
std::vector<HistoryRow> snapshot_rows(const TrainedModel& model, const Snapshot& snapshot);

/// Write one `snapshot-<iteration>.csv` per recorded snapshot into `dir`.
/// Returns the paths written.
std::vector<std::filesystem::path> write_history(const TrainedModel& model, const std::filesystem::path& dir);

using Rgb = std::array<std::uint8_t, 3>;

/// Fixed class palette; class i gets entry i modulo the palette size.
Rgb class_color(std::size_t class_index);

/// Plain-text PPM (P3) of ant positions: white background, one
/// `cell_px`-square block per occupied cell in the color of its majority
/// class (lower class index on ties).
std::string render_ppm(GridDims dims, const std::vector<CellCoord>& positions,
                       const std::vector<std::size_t>& classes, int cell_px = 8);

/// Render every iteration found in `history` into `outdir` as
/// `snapshot-<iteration>.ppm`. Returns the paths written.
std::vector<std::filesystem::path> render_history(const History& history, const std::filesystem::path& outdir,
                                                  int cell_px = 8);

/// Merge several history files (same grid) into one.
History merge_histories(const std::vector<History>& parts);

} // namespace kants
