#include "kants/experiment.hpp"

#include "kants/random.hpp"
#include "kants/text.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace kants {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads)
{
    if (n == 0)
        return;
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const auto i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
}

std::optional<DatasetPreset> find_preset(const std::string& name)
{
    if (name == "iris")
        return DatasetPreset{"iris", "iris.csv", {-1, {}}};
    if (name == "glass")
        return DatasetPreset{"glass", "glass.csv", {-1, {0}}};
    if (name == "pima")
        return DatasetPreset{"pima", "pima.csv", {-1, {}}};
    return std::nullopt;
}

PreparedSplit prepare(const Split& split)
{
    auto train = normalize(split.train);
    PreparedSplit out{std::move(train.data), {}, train.ranges};
    if (!split.test.empty())
        out.test = normalize(split.test, out.ranges).data;
    else
        out.test = Dataset{{}, split.test.nvars, split.test.labels};
    return out;
}

std::uint64_t split_seed(std::uint64_t master, int set_index)
{
    return derive_seed(master, 0x5eed0000ULL + static_cast<std::uint64_t>(set_index));
}

double compactness_ratio(const std::vector<Ant>& ants, const std::vector<CellCoord>& positions,
                         std::size_t n_labels, GridDims dims)
{
    std::vector<LabelId> labels;
    labels.reserve(ants.size());
    for (const auto& a : ants)
        labels.push_back(a.label);
    const auto report = compactness(positions, labels, n_labels, dims);
    return report.ratio.value_or(1.0);
}

RunOutcome run_once(const PreparedSplit& data, const KantsParams& params, std::size_t k, LabelingMode mode)
{
    const auto start = std::chrono::steady_clock::now();
    RunOutcome out;
    Colony colony(data.train, params);
    const auto n_labels = data.train.labels.size();
    out.initial_ratio = compactness_ratio(colony.ants(), colony.positions(), n_labels, colony.grid().dims());
    for (int t = 0; t < params.iterations; ++t)
        colony.step();
    out.final_ratio = compactness_ratio(colony.ants(), colony.positions(), n_labels, colony.grid().dims());
    out.model = std::move(colony).finish();
    if (!data.test.empty()) {
        const auto lg = label_cells(out.model);
        const auto refs = references(out.model, mode, lg);
        out.accuracy = evaluate(refs, data.test, k).accuracy;
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<double> linspace(double lo, double hi, int count)
{
    std::vector<double> out;
    if (count <= 0)
        return out;
    if (count == 1)
        return {lo};
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

std::vector<SweepRow> run_sweep(const Dataset& raw, const SweepConfig& config)
{
    if (config.runs < 1)
        throw std::invalid_argument("sweep: runs must be at least 1");
    const auto split = stratified_split(raw, {config.train_fraction, true, split_seed(config.seed, 1)});
    const auto data = prepare(split);

    const std::size_t per_point = static_cast<std::size_t>(config.runs);
    const std::size_t total = config.betas.size() * config.deltas.size() * per_point;
    std::vector<SweepRow> rows(total);
    parallel_for(total, [&](std::size_t i) {
        const auto run = i % per_point;
        const auto point = i / per_point;
        const auto bi = point / config.deltas.size();
        const auto di = point % config.deltas.size();
        KantsParams p = config.base;
        p.beta = config.betas[bi];
        p.delta = config.deltas[di];
        p.seed = derive_seed(config.seed, run);
        p.snapshot_every = 0;
        auto outcome = run_once(data, p, config.k);
        auto& row = rows[i];
        row.beta = p.beta;
        row.delta = p.delta;
        row.seed = p.seed;
        row.initial_ratio = outcome.initial_ratio;
        row.final_ratio = outcome.final_ratio;
        row.accuracy = outcome.accuracy;
        row.dims = outcome.model.grid.dims();
        for (const auto& a : outcome.model.ants) {
            row.positions.push_back(a.position);
            row.classes.push_back(a.label);
        }
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::ostringstream out;
    out << "beta,delta,seed,final_ratio,accuracy\n";
    for (const auto& r : rows)
        out << text::format_double(r.beta) << ',' << text::format_double(r.delta) << ',' << r.seed << ','
            << text::format_double(r.final_ratio) << ',' << text::format_percent(r.accuracy) << '\n';
    return out.str();
}

std::pair<double, double> best_sweep_point(const std::vector<SweepRow>& rows)
{
    if (rows.empty())
        throw std::invalid_argument("best_sweep_point: no rows");
    std::map<std::pair<double, double>, std::pair<double, int>> acc;
    for (const auto& r : rows) {
        auto& [sum, n] = acc[{r.beta, r.delta}];
        sum += r.final_ratio;
        ++n;
    }
    auto best = acc.begin();
    for (auto it = acc.begin(); it != acc.end(); ++it)
        if (it->second.first / it->second.second < best->second.first / best->second.second)
            best = it;
    return best->first;
}

std::vector<ReproduceRow> reproduce(const Dataset& raw, const ReproduceConfig& config)
{
    if (config.runs < 1 || config.sets < 1)
        throw std::invalid_argument("reproduce: runs and sets must be at least 1");

    struct Job {
        std::string name;
        PreparedSplit data;
    };
    std::vector<Job> jobs;
    for (double fraction : config.fractions) {
        for (int set = 1; set <= config.sets; ++set) {
            const SplitSpec spec{fraction, true, split_seed(config.seed, set)};
            const auto split = stratified_split(raw, spec);
            const auto name = split_name(config.name, fraction, set);
            if (config.split_dir)
                write_split_files(split, spec, *config.split_dir, name);
            jobs.push_back({name, prepare(split)});
        }
    }

    const auto runs = static_cast<std::size_t>(config.runs);
    std::vector<double> accuracy(jobs.size() * runs);
    std::vector<double> seconds(jobs.size() * runs);
    parallel_for(accuracy.size(), [&](std::size_t i) {
        const auto& job = jobs[i / runs];
        KantsParams p = config.base;
        p.seed = derive_seed(config.seed, i % runs);
        p.snapshot_every = 0;
        const auto outcome = run_once(job.data, p, config.k, config.mode);
        accuracy[i] = outcome.accuracy;
        seconds[i] = outcome.seconds;
    });

    std::vector<ReproduceRow> rows;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const auto first = accuracy.begin() + static_cast<long>(j * runs);
        ReproduceRow row;
        row.split = jobs[j].name;
        row.kants = aggregate_runs(std::span<const double>(&*first, runs));
        row.knn = knn_baseline(jobs[j].data.train, jobs[j].data.test, config.k);
        double total = 0.0;
        for (std::size_t r = 0; r < runs; ++r) {
            total += seconds[j * runs + r];
            row.max_seconds = std::max(row.max_seconds, seconds[j * runs + r]);
        }
        row.mean_seconds = total / static_cast<double>(runs);
        rows.push_back(row);
    }
    return rows;
}

std::string format_table(const std::string& title, const std::vector<ReproduceRow>& rows)
{
    auto pad = [](std::string s, std::size_t width) {
        if (s.size() < width)
            s.insert(0, width - s.size(), ' ');
        return s;
    };
    std::ostringstream out;
    out << title << '\n';
    out << pad("dataset", 28) << pad("KANTS best", 12) << pad("KANTS mean", 16) << pad("KNN", 10) << '\n';
    for (const auto& r : rows) {
        out << pad(r.split, 28) << pad(text::format_percent(r.kants.best), 12)
            << pad(format_mean_std(r.kants), 17) << pad(text::format_percent(r.knn), 10) << '\n';
    }
    return out.str();
}

} // namespace kants
