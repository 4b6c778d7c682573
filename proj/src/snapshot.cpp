#include "kants/snapshot.hpp"

#include "kants/text.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kants {

namespace {

constexpr int kHistoryFormatVersion = 1;

constexpr std::array<Rgb, 10> kPalette{{
    {228, 26, 28},
    {55, 126, 184},
    {77, 175, 74},
    {152, 78, 163},
    {255, 127, 0},
    {166, 86, 40},
    {247, 129, 191},
    {0, 0, 0},
    {23, 190, 207},
    {188, 189, 34},
}};

std::string iteration_tag(int iteration)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06d", iteration);
    return buf;
}

} // namespace

std::vector<int> History::iterations() const
{
    std::set<int> its;
    for (const auto& r : rows)
        its.insert(r.iteration);
    return {its.begin(), its.end()};
}

std::vector<std::string> History::labels() const
{
    std::set<std::string> names;
    for (const auto& r : rows)
        names.insert(r.label);
    std::vector<std::string> out(names.begin(), names.end());
    sort_labels(out);
    return out;
}

std::string history_to_string(GridDims dims, const std::vector<HistoryRow>& rows)
{
    std::ostringstream out;
    out << "kants-history," << dims.width << ',' << dims.height << ',' << kHistoryFormatVersion << '\n';
    out << "iteration,ant_id,label,x,y\n";
    for (const auto& r : rows)
        out << r.iteration << ',' << r.ant_id << ',' << r.label << ',' << r.position.x << ',' << r.position.y
            << '\n';
    return out.str();
}

History history_from_string(const std::string& content, const std::string& source)
{
    const auto rows = text::lines(content);
    if (rows.size() < 2)
        throw ParseError(source, 1, "missing history header");
    const auto head = text::split_fields(rows[0]);
    if (head.size() != 4 || head[0] != "kants-history")
        throw ParseError(source, 1, "expected header 'kants-history,X,Y,version'");
    const auto w = text::parse_int(head[1]);
    const auto h = text::parse_int(head[2]);
    const auto version = text::parse_int(head[3]);
    if (!w || !h || *w < 1 || *h < 1)
        throw ParseError(source, 1, "bad grid dimensions");
    if (!version || *version != kHistoryFormatVersion)
        throw ParseError(source, 1, "unsupported history format version");
    if (text::trim(rows[1]) != "iteration,ant_id,label,x,y")
        throw ParseError(source, 2, "expected column header 'iteration,ant_id,label,x,y'");

    History history;
    history.dims = {static_cast<int>(*w), static_cast<int>(*h)};
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const auto lineno = i + 1;
        if (text::trim(rows[i]).empty())
            continue;
        const auto f = text::split_fields(rows[i]);
        if (f.size() != 5)
            throw ParseError(source, lineno, "expected 5 fields");
        const auto it = text::parse_int(f[0]);
        const auto id = text::parse_int(f[1]);
        const auto x = text::parse_int(f[3]);
        const auto y = text::parse_int(f[4]);
        if (!it || !id || !x || !y || *id < 0)
            throw ParseError(source, lineno, "non-integer field");
        const CellCoord pos{static_cast<int>(*x), static_cast<int>(*y)};
        if (!history.dims.contains(pos))
            throw ParseError(source, lineno, "position outside the grid");
        history.rows.push_back({static_cast<int>(*it), static_cast<std::size_t>(*id), std::string(f[2]), pos});
    }
    return history;
}

History read_history(const std::filesystem::path& path)
{
    return history_from_string(text::read_file(path.string()), path.string());
}

History merge_histories(const std::vector<History>& parts)
{
    History out;
    for (const auto& p : parts) {
        if (out.rows.empty() && out.dims.width == 0)
            out.dims = p.dims;
        else if (!(p.dims == out.dims))
            throw std::invalid_argument("history files disagree on grid dimensions");
        out.rows.insert(out.rows.end(), p.rows.begin(), p.rows.end());
    }
    return out;
}

std::vector<HistoryRow> snapshot_rows(const TrainedModel& model, const Snapshot& snapshot)
{
    std::vector<HistoryRow> rows;
    rows.reserve(snapshot.positions.size());
    for (std::size_t k = 0; k < snapshot.positions.size(); ++k)
        rows.push_back({snapshot.iteration, k, model.labels.at(model.ants.at(k).label), snapshot.positions[k]});
    return rows;
}

std::vector<std::filesystem::path> write_history(const TrainedModel& model, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& snap : model.history) {
        const auto path = dir / ("snapshot-" + iteration_tag(snap.iteration) + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write '" + path.string() + "'");
        out << history_to_string(model.grid.dims(), snapshot_rows(model, snap));
        written.push_back(path);
    }
    return written;
}

Rgb class_color(std::size_t class_index)
{
    return kPalette[class_index % kPalette.size()];
}

std::string render_ppm(GridDims dims, const std::vector<CellCoord>& positions,
                       const std::vector<std::size_t>& classes, int cell_px)
{
    if (positions.size() != classes.size())
        throw std::invalid_argument("render_ppm: positions and classes differ in length");
    if (cell_px < 1)
        throw std::invalid_argument("render_ppm: cell size must be positive");

    std::vector<std::map<std::size_t, std::size_t>> counts(dims.cells());
    for (std::size_t k = 0; k < positions.size(); ++k)
        ++counts.at(dims.index(positions[k]))[classes[k]];

    std::vector<Rgb> cell_color(dims.cells(), Rgb{255, 255, 255});
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i].empty())
            continue;
        std::size_t best_class = 0;
        std::size_t best_count = 0;
        for (const auto& [c, n] : counts[i]) {
            if (n > best_count) {
                best_class = c;
                best_count = n;
            }
        }
        cell_color[i] = class_color(best_class);
    }

    const int width_px = dims.width * cell_px;
    const int height_px = dims.height * cell_px;
    std::string out = "P3\n" + std::to_string(width_px) + " " + std::to_string(height_px) + "\n255\n";
    out.reserve(out.size() + static_cast<std::size_t>(width_px) * static_cast<std::size_t>(height_px) * 12);
    // At most five pixels per text line keeps lines under the 70 characters
    // plain PPM readers are allowed to expect.
    for (int py = 0; py < height_px; ++py) {
        for (int px = 0; px < width_px; ++px) {
            const auto& c = cell_color[dims.index({px / cell_px, py / cell_px})];
            if (px > 0)
                out += px % 5 == 0 ? '\n' : ' ';
            out += std::to_string(c[0]);
            out += ' ';
            out += std::to_string(c[1]);
            out += ' ';
            out += std::to_string(c[2]);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::filesystem::path> render_history(const History& history, const std::filesystem::path& outdir,
                                                  int cell_px)
{
    std::vector<std::filesystem::path> written;
    if (history.rows.empty())
        return written;
    std::filesystem::create_directories(outdir);

    const auto labels = history.labels();
    std::map<std::string, std::size_t> class_of;
    for (std::size_t i = 0; i < labels.size(); ++i)
        class_of[labels[i]] = i;

    for (int it : history.iterations()) {
        std::vector<CellCoord> positions;
        std::vector<std::size_t> classes;
        for (const auto& r : history.rows) {
            if (r.iteration != it)
                continue;
            positions.push_back(r.position);
            classes.push_back(class_of.at(r.label));
        }
        const auto path = outdir / ("snapshot-" + iteration_tag(it) + ".ppm");
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write '" + path.string() + "'");
        out << render_ppm(history.dims, positions, classes, cell_px);
        written.push_back(path);
    }
    return written;
}

} // namespace kants
