#include "kants/model_io.hpp"

#include "kants/text.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kants {

namespace {

void write_text(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

std::string require_key(const std::map<std::string, std::string>& kv, const std::string& key,
                        const std::string& source)
{
    const auto it = kv.find(key);
    if (it == kv.end())
        throw ParseError(source, 0, "missing key '" + key + "'");
    return it->second;
}

double to_double(const std::string& value, const std::string& key, const std::string& source)
{
    const auto v = text::parse_double(value);
    if (!v)
        throw ParseError(source, 0, "key '" + key + "': not a number: '" + value + "'");
    return *v;
}

long long to_int(const std::string& value, const std::string& key, const std::string& source)
{
    const auto v = text::parse_int(value);
    if (!v)
        throw ParseError(source, 0, "key '" + key + "': not an integer: '" + value + "'");
    return *v;
}

} // namespace

std::map<std::string, std::string> parse_key_values(const std::string& content, const std::string& source)
{
    std::map<std::string, std::string> kv;
    const auto rows = text::lines(content);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto line = text::trim(rows[i]);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(source, i + 1, "expected key=value");
        kv[std::string(text::trim(line.substr(0, eq)))] = std::string(text::trim(line.substr(eq + 1)));
    }
    return kv;
}

std::map<std::string, std::string> params_to_key_values(const KantsParams& p)
{
    return {
        {"beta", text::format_double(p.beta)},
        {"delta", text::format_double(p.delta)},
        {"q0", text::format_double(p.q0)},
        {"alpha", text::format_double(p.alpha)},
        {"rho", text::format_double(p.rho)},
        {"nr0", std::to_string(p.nr0)},
        {"cr", std::to_string(p.cr)},
        {"iterations", std::to_string(p.iterations)},
        {"grid_x", std::to_string(p.grid_x)},
        {"grid_y", std::to_string(p.grid_y)},
        {"seed", std::to_string(p.seed)},
        {"sigma_source", p.sigma_source == SigmaSource::Ant ? "ant" : "cell"},
        {"snapshot_every", std::to_string(p.snapshot_every)},
    };
}

void apply_key_values(KantsParams& p, const std::map<std::string, std::string>& kv, const std::string& source)
{
    for (const auto& [key, value] : kv) {
        if (key == "beta")
            p.beta = to_double(value, key, source);
        else if (key == "delta")
            p.delta = to_double(value, key, source);
        else if (key == "q0")
            p.q0 = to_double(value, key, source);
        else if (key == "alpha")
            p.alpha = to_double(value, key, source);
        else if (key == "rho")
            p.rho = to_double(value, key, source);
        else if (key == "nr0")
            p.nr0 = static_cast<int>(to_int(value, key, source));
        else if (key == "cr")
            p.cr = static_cast<int>(to_int(value, key, source));
        else if (key == "iterations")
            p.iterations = static_cast<int>(to_int(value, key, source));
        else if (key == "grid_x")
            p.grid_x = static_cast<int>(to_int(value, key, source));
        else if (key == "grid_y")
            p.grid_y = static_cast<int>(to_int(value, key, source));
        else if (key == "seed")
            p.seed = static_cast<std::uint64_t>(to_int(value, key, source));
        else if (key == "snapshot_every")
            p.snapshot_every = static_cast<int>(to_int(value, key, source));
        else if (key == "sigma_source") {
            if (value == "ant")
                p.sigma_source = SigmaSource::Ant;
            else if (value == "cell")
                p.sigma_source = SigmaSource::Cell;
            else
                throw ParseError(source, 0, "sigma_source must be 'ant' or 'cell'");
        }
    }
}

void save_model(const StoredModel& stored, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const auto& model = stored.model;
    export_grid(model.grid, dir / "grid.csv");

    std::ostringstream ants;
    ants << "kants-ants," << model.ants.size() << ',' << model.grid.nvars() << ",1\n";
    for (std::size_t k = 0; k < model.ants.size(); ++k) {
        const auto& a = model.ants[k];
        ants << k << ',' << model.labels.at(a.label) << ',' << a.position.x << ',' << a.position.y;
        for (double v : a.vector)
            ants << ',' << text::format_double(v);
        ants << '\n';
    }
    write_text(dir / "ants.csv", ants.str());

    std::ostringstream cells;
    cells << "x,y,label\n";
    const auto dims = stored.labeled.grid.dims();
    for (std::size_t i = 0; i < stored.labeled.cell_labels.size(); ++i) {
        if (!stored.labeled.cell_labels[i])
            continue;
        const auto c = dims.coord(i);
        cells << c.x << ',' << c.y << ',' << stored.labeled.labels.at(*stored.labeled.cell_labels[i]) << '\n';
    }
    write_text(dir / "cells.csv", cells.str());

    std::ostringstream meta;
    meta << "# kants model\n";
    for (const auto& [k, v] : params_to_key_values(model.params))
        meta << k << '=' << v << '\n';
    meta << "nlabels=" << model.labels.size() << '\n';
    for (std::size_t i = 0; i < model.labels.size(); ++i)
        meta << "label." << i << '=' << model.labels[i] << '\n';
    meta << "nvars=" << stored.ranges.size() << '\n';
    for (std::size_t v = 0; v < stored.ranges.size(); ++v)
        meta << "range." << v << '=' << text::format_double(stored.ranges[v].min) << ','
             << text::format_double(stored.ranges[v].max) << '\n';
    write_text(dir / "model.meta", meta.str());
}

StoredModel load_model(const std::filesystem::path& dir)
{
    for (const char* name : {"grid.csv", "ants.csv", "cells.csv", "model.meta"})
        if (!std::filesystem::exists(dir / name))
            throw std::runtime_error("model file missing: '" + (dir / name).string() + "'");

    StoredModel stored;
    auto& model = stored.model;

    const auto meta_path = (dir / "model.meta").string();
    const auto kv = parse_key_values(text::read_file(meta_path), meta_path);
    apply_key_values(model.params, kv, meta_path);
    const auto nlabels = to_int(require_key(kv, "nlabels", meta_path), "nlabels", meta_path);
    for (long long i = 0; i < nlabels; ++i)
        model.labels.push_back(require_key(kv, "label." + std::to_string(i), meta_path));
    const auto nvars = to_int(require_key(kv, "nvars", meta_path), "nvars", meta_path);
    for (long long v = 0; v < nvars; ++v) {
        const auto key = "range." + std::to_string(v);
        const auto fields = text::split_fields(require_key(kv, key, meta_path));
        if (fields.size() != 2)
            throw ParseError(meta_path, 0, "key '" + key + "': expected min,max");
        stored.ranges.push_back({to_double(std::string(fields[0]), key, meta_path),
                                 to_double(std::string(fields[1]), key, meta_path)});
    }

    model.grid = import_grid(dir / "grid.csv");
    if (model.grid.nvars() != static_cast<std::size_t>(nvars))
        throw std::runtime_error("model: grid and metadata disagree on nvars");

    const Dataset label_table{{}, model.grid.nvars(), model.labels};
    const auto ants_path = (dir / "ants.csv").string();
    const auto ants_text = text::read_file(ants_path);
    const auto rows = text::lines(ants_text);
    if (rows.empty() || !text::trim(rows[0]).starts_with("kants-ants,"))
        throw ParseError(ants_path, 1, "expected header 'kants-ants,N,nvars,version'");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (text::trim(rows[i]).empty())
            continue;
        const auto f = text::split_fields(rows[i]);
        if (f.size() != 4 + model.grid.nvars())
            throw ParseError(ants_path, i + 1, "wrong field count");
        const auto label = label_table.find_label(std::string(f[1]));
        const auto x = text::parse_int(f[2]);
        const auto y = text::parse_int(f[3]);
        if (!label || !x || !y || !model.grid.dims().contains({static_cast<int>(*x), static_cast<int>(*y)}))
            throw ParseError(ants_path, i + 1, "bad ant row");
        Ant ant{{}, *label, {static_cast<int>(*x), static_cast<int>(*y)}};
        for (std::size_t v = 0; v < model.grid.nvars(); ++v) {
            const auto value = text::parse_double(f[4 + v]);
            if (!value)
                throw ParseError(ants_path, i + 1, "non-numeric feature");
            ant.vector.push_back(*value);
        }
        model.ants.push_back(std::move(ant));
    }

    stored.labeled = {model.grid, model.labels, std::vector<std::optional<LabelId>>(model.grid.cell_count())};
    const auto cells_path = (dir / "cells.csv").string();
    const auto cells_text = text::read_file(cells_path);
    const auto cell_rows = text::lines(cells_text);
    for (std::size_t i = 1; i < cell_rows.size(); ++i) {
        if (text::trim(cell_rows[i]).empty())
            continue;
        const auto f = text::split_fields(cell_rows[i]);
        const auto x = f.size() == 3 ? text::parse_int(f[0]) : std::nullopt;
        const auto y = f.size() == 3 ? text::parse_int(f[1]) : std::nullopt;
        const auto label = f.size() == 3 ? label_table.find_label(std::string(f[2])) : std::nullopt;
        const CellCoord c{x ? static_cast<int>(*x) : -1, y ? static_cast<int>(*y) : -1};
        if (!label || !model.grid.dims().contains(c))
            throw ParseError(cells_path, i + 1, "bad cell label row");
        stored.labeled.cell_labels[model.grid.dims().index(c)] = *label;
    }
    return stored;
}

} // namespace kants
