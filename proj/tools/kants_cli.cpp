#include "kants/classifier.hpp"
#include "kants/dataset.hpp"
#include "kants/engine.hpp"
#include "kants/experiment.hpp"
#include "kants/metrics.hpp"
#include "kants/model_io.hpp"
#include "kants/snapshot.hpp"
#include "kants/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef KANTS_DATA_DIR
#define KANTS_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace kants;

namespace {

/// Bad input that the user can fix on the command line (exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamFlags {
    std::optional<std::string> config;
    std::optional<std::string> grid_size;
    std::optional<double> beta, delta, q0, alpha, rho;
    std::optional<int> nr0, cr, iterations, snapshot_every;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> sigma_source;
    std::optional<std::size_t> k;

    void add_to(CLI::App& app, bool with_snapshots)
    {
        app.add_option("--config", config, "key=value parameter file ('#' starts a comment)");
        app.add_option("--grid-size", grid_size, "grid dimensions X,Y (or a single side)");
        app.add_option("--beta", beta, "weighting exponent");
        app.add_option("--delta", delta, "sensory term of the weighting function");
        app.add_option("--q0", q0, "probability of the greedy move");
        app.add_option("--alpha", alpha, "learning rate");
        app.add_option("--rho", rho, "evaporation rate");
        app.add_option("--nr0", nr0, "initial movement radius");
        app.add_option("--cr", cr, "centroid radius");
        app.add_option("--iterations", iterations, "training iterations");
        app.add_option("--seed", seed, "master random seed");
        app.add_option("--sigma-source", sigma_source, "vector compared with centroids: ant or cell");
        app.add_option("--k", k, "neighbors used by the classifier");
        if (with_snapshots)
            app.add_option("--snapshot-every", snapshot_every, "record ant positions every N iterations");
    }

    /// Built-in defaults, then the config file, then explicit flags.
    KantsParams resolve(std::size_t& k_out) const
    {
        KantsParams p;
        k_out = 1;
        if (config) {
            if (!fs::exists(*config))
                throw std::runtime_error("no such file: '" + *config + "'");
            const auto kv = parse_key_values(text::read_file(*config), *config);
            apply_key_values(p, kv, *config);
            if (const auto it = kv.find("k"); it != kv.end()) {
                const auto v = text::parse_int(it->second);
                if (!v || *v < 1)
                    throw UsageError(*config + ": k must be a positive integer");
                k_out = static_cast<std::size_t>(*v);
            }
        }
        if (grid_size) {
            const auto f = text::split_fields(*grid_size);
            const auto x = f.empty() ? std::nullopt : text::parse_int(f[0]);
            const auto y = f.size() == 2 ? text::parse_int(f[1]) : x;
            if (!x || !y || f.size() > 2)
                throw UsageError("--grid-size expects X,Y");
            p.grid_x = static_cast<int>(*x);
            p.grid_y = static_cast<int>(*y);
        }
        if (beta) p.beta = *beta;
        if (delta) p.delta = *delta;
        if (q0) p.q0 = *q0;
        if (alpha) p.alpha = *alpha;
        if (rho) p.rho = *rho;
        if (nr0) p.nr0 = *nr0;
        if (cr) p.cr = *cr;
        if (iterations) p.iterations = *iterations;
        if (seed) p.seed = *seed;
        if (snapshot_every) p.snapshot_every = *snapshot_every;
        if (sigma_source) {
            if (*sigma_source == "ant")
                p.sigma_source = SigmaSource::Ant;
            else if (*sigma_source == "cell")
                p.sigma_source = SigmaSource::Cell;
            else
                throw UsageError("--sigma-source must be 'ant' or 'cell'");
        }
        if (k)
            k_out = *k;
        if (k_out < 1)
            throw UsageError("--k must be at least 1");
        return p;
    }
};

struct DataFlags {
    int label_column = -1;
    std::vector<int> ignore_columns;
    std::string data_dir = KANTS_DATA_DIR;

    void add_to(CLI::App& app, bool with_data_dir)
    {
        app.add_option("--label-column", label_column, "label column; negative counts from the end")
            ->capture_default_str();
        app.add_option("--ignore-columns", ignore_columns, "columns to drop, e.g. an ID column")->delimiter(',');
        if (with_data_dir)
            app.add_option("--data-dir", data_dir, "directory holding the bundled datasets")->capture_default_str();
    }

    CsvOptions options() const { return {label_column, ignore_columns}; }
};

struct NamedData {
    std::string name;
    Dataset data;
};

/// A bundled dataset name (iris, glass, pima) or a CSV path.
NamedData load_dataset(const std::string& arg, const DataFlags& flags, bool explicit_layout)
{
    if (const auto preset = find_preset(arg); preset && !fs::exists(arg)) {
        const auto path = fs::path(flags.data_dir) / preset->file;
        if (!fs::exists(path))
            throw std::runtime_error("no such file: '" + path.string() + "'");
        return {preset->name, load_csv(path, explicit_layout ? flags.options() : preset->csv)};
    }
    if (!fs::exists(arg))
        throw std::runtime_error("no such file: '" + arg + "'");
    return {fs::path(arg).stem().string(), load_csv(arg, flags.options())};
}

const CLI::Validator kOpenUnit(
    [](std::string& value) -> std::string {
        const auto v = text::parse_double(value);
        if (!v || !(*v > 0.0 && *v < 1.0))
            return "fraction must lie strictly between 0 and 1, got " + value;
        return {};
    },
    "(0,1)");

std::string tag(double value)
{
    return text::format_double(value);
}

int cmd_make_splits(const std::string& dataset, double fraction, int sets, std::uint64_t seed,
                    const std::string& outdir, const DataFlags& flags, bool explicit_layout)
{
    if (sets < 1)
        throw UsageError("--sets must be at least 1");
    const auto [name, data] = load_dataset(dataset, flags, explicit_layout);
    for (int set = 1; set <= sets; ++set) {
        const SplitSpec spec{fraction, true, split_seed(seed, set)};
        const auto split = stratified_split(data, spec);
        for (const auto& w : split.warnings)
            std::cerr << "warning: " << w << '\n';
        const auto stem = split_name(name, fraction, set);
        write_split_files(split, spec, outdir, stem);
        std::cout << stem << ": " << split.train.size() << " train, " << split.test.size() << " test\n";
    }
    return 0;
}

int cmd_train(const std::string& train_path, const std::string& outdir, const ParamFlags& pf, const DataFlags& df)
{
    std::size_t k = 1;
    const auto params = pf.resolve(k);
    if (!fs::exists(train_path))
        throw std::runtime_error("no such file: '" + train_path + "'");
    const auto raw = load_csv(train_path, df.options());
    const auto normalized = normalize(raw);

    Colony colony(normalized.data, params);
    const auto n_labels = normalized.data.labels.size();
    const auto dims = colony.grid().dims();
    const int total = params.iterations;
    const int every = std::max(1, total / 10);
    std::printf("grid %dx%d, %zu ants, %d iterations\n", dims.width, dims.height, colony.ants().size(), total);
    std::printf("%10s %12s\n", "iteration", "compactness");
    auto report = [&] {
        std::printf("%10d %12.4f\n", colony.iteration(),
                    compactness_ratio(colony.ants(), colony.positions(), n_labels, dims));
    };
    report();
    while (colony.iteration() < total) {
        colony.step();
        if (colony.iteration() % every == 0 || colony.iteration() == total)
            report();
    }

    StoredModel stored;
    stored.model = std::move(colony).finish();
    stored.labeled = label_cells(stored.model);
    stored.ranges = normalized.ranges;
    save_model(stored, outdir);
    if (!stored.model.history.empty())
        write_history(stored.model, fs::path(outdir) / "history");
    std::printf("labeled cells: %zu of %zu\n", stored.labeled.labeled_count(), stored.model.grid.cell_count());
    std::printf("model written to %s\n", outdir.c_str());
    return 0;
}

int cmd_classify(const std::string& model_dir, const std::string& test_path, std::optional<std::size_t> k_flag,
                 const std::optional<std::string>& predictions, const std::string& labeling, const DataFlags& df)
{
    const auto k = k_flag.value_or(1);
    if (k < 1)
        throw UsageError("--k must be at least 1");
    if (!fs::exists(model_dir))
        throw std::runtime_error("no such model directory: '" + model_dir + "'");
    if (!fs::exists(test_path))
        throw std::runtime_error("no such file: '" + test_path + "'");
    const auto stored = load_model(model_dir);
    const auto raw = load_csv(test_path, df.options());
    if (raw.nvars != stored.ranges.size())
        throw std::runtime_error("schema mismatch: '" + test_path + "' has " + std::to_string(raw.nvars) +
                                 " features, the model expects " + std::to_string(stored.ranges.size()));
    auto label_table = stored.model.labels;
    const auto test = normalize(align_labels(raw, label_table), stored.ranges).data;

    const auto mode = labeling == "ants" ? LabelingMode::AntVectors : LabelingMode::CellOccupancy;
    const auto refs = references(stored.model, mode, stored.labeled);
    if (refs.size() < k)
        throw UsageError("--k " + std::to_string(k) + " exceeds the " + std::to_string(refs.size()) +
                         " labeled references");
    const auto eval = evaluate(refs, test, k);
    if (predictions)
        write_predictions(test, eval, *predictions);
    std::printf("accuracy: %s\n", text::format_percent(eval.accuracy).c_str());
    return 0;
}

int cmd_sweep(const std::string& dataset, std::vector<double> betas, std::vector<double> deltas, int runs,
              double fraction, const std::string& outdir, const ParamFlags& pf, const DataFlags& df,
              bool explicit_layout)
{
    if (runs < 1)
        throw UsageError("--runs must be at least 1");
    if (betas.empty() || deltas.empty())
        throw UsageError("--betas and --deltas need at least one value");
    SweepConfig config;
    config.base = pf.resolve(config.k);
    config.betas = std::move(betas);
    config.deltas = std::move(deltas);
    config.runs = runs;
    config.seed = config.base.seed;
    config.train_fraction = fraction;
    const auto [name, data] = load_dataset(dataset, df, explicit_layout);

    const auto rows = run_sweep(data, config);
    fs::create_directories(fs::path(outdir) / "ppm");
    {
        std::ofstream csv(fs::path(outdir) / "sweep.csv", std::ios::binary);
        if (!csv)
            throw std::runtime_error("cannot write '" + (fs::path(outdir) / "sweep.csv").string() + "'");
        csv << sweep_csv(rows);
    }
    double lo = rows.front().final_ratio;
    double hi = lo;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        lo = std::min(lo, r.final_ratio);
        hi = std::max(hi, r.final_ratio);
        const auto file = "beta" + tag(r.beta) + "_delta" + tag(r.delta) + "_run" +
                          std::to_string(i % static_cast<std::size_t>(runs) + 1) + ".ppm";
        std::ofstream out(fs::path(outdir) / "ppm" / file, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write '" + (fs::path(outdir) / "ppm" / file).string() + "'");
        out << render_ppm(r.dims, r.positions, r.classes);
    }
    const auto [beta, delta] = best_sweep_point(rows);
    std::printf("%s: %zu runs, compactness ratio range [%.4f, %.4f]\n", name.c_str(), rows.size(), lo, hi);
    std::printf("best point: beta=%s delta=%s\n", tag(beta).c_str(), tag(delta).c_str());
    return 0;
}

std::vector<fs::path> history_files(const std::vector<std::string>& inputs)
{
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        if (!fs::exists(in))
            throw std::runtime_error("no such file: '" + in + "'");
        if (!fs::is_directory(in)) {
            files.emplace_back(in);
            continue;
        }
        std::vector<fs::path> found;
        for (const auto& entry : fs::directory_iterator(in))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                found.push_back(entry.path());
        std::sort(found.begin(), found.end());
        files.insert(files.end(), found.begin(), found.end());
    }
    return files;
}

int cmd_snapshot(const std::vector<std::string>& inputs, const std::string& outdir, int cell_px)
{
    if (cell_px < 1)
        throw UsageError("--cell-size must be at least 1");
    std::vector<History> parts;
    for (const auto& f : history_files(inputs))
        parts.push_back(read_history(f));
    const auto history = merge_histories(parts);
    const auto written = render_history(history, outdir, cell_px);
    if (written.empty()) {
        std::cerr << "warning: history is empty, no images written\n";
        return 0;
    }
    for (const auto& p : written)
        std::printf("%s\n", p.string().c_str());
    return 0;
}

int cmd_reproduce(const std::string& dataset, int runs, int sets, const std::optional<std::string>& outdir,
                  const std::string& labeling, const ParamFlags& pf, const DataFlags& df, bool explicit_layout)
{
    ReproduceConfig config;
    config.base = pf.resolve(config.k);
    config.runs = runs;
    config.sets = sets;
    config.seed = config.base.seed;
    config.mode = labeling == "ants" ? LabelingMode::AntVectors : LabelingMode::CellOccupancy;
    if (runs < 1 || sets < 1)
        throw UsageError("--runs and --sets must be at least 1");
    const auto [name, data] = load_dataset(dataset, df, explicit_layout);
    config.name = name;
    if (outdir)
        config.split_dir = fs::path(*outdir) / "splits";

    const auto rows = reproduce(data, config);
    const auto title = name + ": KANTS (" + std::to_string(runs) + " runs per split) vs KNN, K=" +
                       std::to_string(config.k);
    const auto table = format_table(title, rows);
    std::cout << table;
    double seconds = 0.0;
    for (const auto& r : rows)
        seconds = std::max(seconds, r.max_seconds);
    std::printf("slowest split: %.3f s per run\n", seconds);
    if (outdir) {
        std::ofstream out(fs::path(*outdir) / "report.txt", std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write '" + (fs::path(*outdir) / "report.txt").string() + "'");
        out << table;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"KANTS: ant-colony clustering and classification on a toroidal vector grid"};
    app.require_subcommand(1);

    DataFlags data_flags;

    auto* splits = app.add_subcommand("make-splits", "write stratified train/test split files");
    std::string split_dataset;
    double fraction = 0.5;
    int sets = 3;
    std::uint64_t split_seed_value = 1;
    std::string split_out = "splits";
    splits->add_option("dataset", split_dataset, "bundled dataset name or CSV path")->required();
    splits->add_option("--fraction", fraction, "training fraction")->check(kOpenUnit)->capture_default_str();
    splits->add_option("--sets", sets, "number of split sets")->capture_default_str();
    splits->add_option("--seed", split_seed_value, "master seed")->capture_default_str();
    splits->add_option("--out", split_out, "output directory")->capture_default_str();
    data_flags.add_to(*splits, true);

    auto* train_cmd = app.add_subcommand("train", "train a colony and save the model");
    std::string train_path;
    std::string train_out = "model";
    ParamFlags train_params;
    train_cmd->add_option("train", train_path, "training CSV")->required();
    train_cmd->add_option("--out", train_out, "model directory")->capture_default_str();
    train_params.add_to(*train_cmd, true);
    data_flags.add_to(*train_cmd, false);

    auto* classify_cmd = app.add_subcommand("classify", "classify a test CSV with a saved model");
    std::string model_dir;
    std::string test_path;
    std::optional<std::size_t> classify_k;
    std::optional<std::string> predictions;
    std::string labeling = "cells";
    classify_cmd->add_option("model", model_dir, "model directory")->required();
    classify_cmd->add_option("test", test_path, "test CSV")->required();
    classify_cmd->add_option("--k", classify_k, "number of nearest references (default 1)");
    classify_cmd->add_option("--out", predictions, "write per-sample predictions to this CSV");
    classify_cmd->add_option("--labeling", labeling, "reference set: cells (labeled grid) or ants")
        ->check(CLI::IsMember({"cells", "ants"}))
        ->capture_default_str();
    data_flags.add_to(*classify_cmd, false);

    auto* sweep_cmd = app.add_subcommand("sweep", "compactness over a beta x delta grid");
    std::string sweep_dataset;
    std::vector<double> betas{0, 1, 2, 4, 8, 16, 32, 64};
    std::vector<double> deltas{0, 0.1, 0.25, 0.5, 1, 2, 5, 10};
    int sweep_runs = 1;
    double sweep_fraction = 0.5;
    std::string sweep_out = "sweep";
    ParamFlags sweep_params;
    sweep_cmd->add_option("dataset", sweep_dataset, "bundled dataset name or CSV path")->required();
    sweep_cmd->add_option("--betas", betas, "comma-separated beta values")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--deltas", deltas, "comma-separated delta values")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--runs", sweep_runs, "seeds per point")->capture_default_str();
    sweep_cmd->add_option("--fraction", sweep_fraction, "training fraction of the swept split")
        ->check(kOpenUnit)
        ->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "output directory")->capture_default_str();
    sweep_params.add_to(*sweep_cmd, false);
    data_flags.add_to(*sweep_cmd, true);

    auto* snapshot_cmd = app.add_subcommand("snapshot", "render history CSVs as PPM images");
    std::vector<std::string> history_inputs;
    std::string snapshot_out = "snapshots";
    int cell_px = 8;
    snapshot_cmd->add_option("history", history_inputs, "history CSV files or directories")->required();
    snapshot_cmd->add_option("--out", snapshot_out, "output directory")->capture_default_str();
    snapshot_cmd->add_option("--cell-size", cell_px, "pixels per grid cell")->capture_default_str();

    auto* reproduce_cmd = app.add_subcommand("reproduce", "repeated-runs accuracy report, KANTS vs KNN");
    std::string reproduce_dataset;
    int reproduce_runs = 10;
    int reproduce_sets = 3;
    std::optional<std::string> reproduce_out;
    std::string reproduce_labeling = "cells";
    ParamFlags reproduce_params;
    reproduce_cmd->add_option("dataset", reproduce_dataset, "bundled dataset name or CSV path")->required();
    reproduce_cmd->add_option("--runs", reproduce_runs, "seeds per split")->capture_default_str();
    reproduce_cmd->add_option("--sets", reproduce_sets, "split sets per fraction")->capture_default_str();
    reproduce_cmd->add_option("--out", reproduce_out, "write split files and report.txt here");
    reproduce_cmd->add_option("--labeling", reproduce_labeling, "reference set: cells or ants")
        ->check(CLI::IsMember({"cells", "ants"}))
        ->capture_default_str();
    reproduce_params.add_to(*reproduce_cmd, false);
    data_flags.add_to(*reproduce_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto layout_given = [](CLI::App* sub) {
        return sub->count("--label-column") > 0 || sub->count("--ignore-columns") > 0;
    };

    try {
        if (*splits)
            return cmd_make_splits(split_dataset, fraction, sets, split_seed_value, split_out, data_flags,
                                   layout_given(splits));
        if (*train_cmd)
            return cmd_train(train_path, train_out, train_params, data_flags);
        if (*classify_cmd)
            return cmd_classify(model_dir, test_path, classify_k, predictions, labeling, data_flags);
        if (*sweep_cmd)
            return cmd_sweep(sweep_dataset, betas, deltas, sweep_runs, sweep_fraction, sweep_out, sweep_params,
                             data_flags, layout_given(sweep_cmd));
        if (*snapshot_cmd)
            return cmd_snapshot(history_inputs, snapshot_out, cell_px);
        if (*reproduce_cmd)
            return cmd_reproduce(reproduce_dataset, reproduce_runs, reproduce_sets, reproduce_out,
                                 reproduce_labeling, reproduce_params, data_flags, layout_given(reproduce_cmd));
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
