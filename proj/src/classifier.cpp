#include "kants/classifier.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace kants {

std::size_t LabeledGrid::labeled_count() const
{
    return static_cast<std::size_t>(
        std::count_if(cell_labels.begin(), cell_labels.end(), [](const auto& l) { return l.has_value(); }));
}

LabeledGrid label_cells(const TrainedModel& model)
{
    if (model.ants.empty())
        throw std::invalid_argument("label_cells: model has no ants");

    const auto dims = model.grid.dims();
    std::vector<std::vector<std::size_t>> occupants(dims.cells());
    for (std::size_t k = 0; k < model.ants.size(); ++k)
        occupants[dims.index(model.ants[k].position)].push_back(k);

    LabeledGrid lg{model.grid, model.labels, std::vector<std::optional<LabelId>>(dims.cells())};
    for (std::size_t i = 0; i < occupants.size(); ++i) {
        const auto& here = occupants[i];
        if (here.empty())
            continue;
        std::map<LabelId, std::size_t> counts;
        for (auto k : here)
            ++counts[model.ants[k].label];
        std::size_t top = 0;
        for (const auto& [label, n] : counts)
            top = std::max(top, n);

        const auto cell = model.grid.cell(i);
        std::optional<LabelId> chosen;
        double nearest = std::numeric_limits<double>::infinity();
        for (auto k : here) {
            const auto& ant = model.ants[k];
            if (counts[ant.label] != top)
                continue;
            const double d = euclidean(ant.vector, cell);
            if (!chosen || d < nearest || (d == nearest && ant.label < *chosen)) {
                chosen = ant.label;
                nearest = d;
            }
        }
        lg.cell_labels[i] = chosen;
    }
    return lg;
}

Prediction nearest_k_vote(std::span<const double> sample, std::span<const Reference> refs, std::size_t n_labels,
                          std::size_t k)
{
    if (k == 0)
        throw std::invalid_argument("K must be at least 1");
    if (k > refs.size())
        throw std::invalid_argument("K = " + std::to_string(k) + " exceeds the " + std::to_string(refs.size()) +
                                    " available reference vectors");

    struct Ranked {
        double distance;
        LabelId label;
        std::size_t index;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i)
        ranked.push_back({euclidean(sample, refs[i].vector), refs[i].label, i});
    const auto before = [](const Ranked& a, const Ranked& b) {
        if (a.distance != b.distance)
            return a.distance < b.distance;
        if (a.label != b.label)
            return a.label < b.label;
        return a.index < b.index;
    };
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<long>(k), ranked.end(), before);

    Prediction p;
    p.votes.assign(n_labels, 0);
    std::vector<double> inverse(n_labels, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const auto& r = ranked[j];
        if (r.label >= n_labels)
            throw std::invalid_argument("reference label out of range");
        p.neighbor_distances.push_back(r.distance);
        ++p.votes[r.label];
        inverse[r.label] += r.distance > 0.0 ? 1.0 / r.distance : std::numeric_limits<double>::infinity();
    }

    LabelId best = 0;
    for (LabelId c = 1; c < n_labels; ++c) {
        if (p.votes[c] > p.votes[best] || (p.votes[c] == p.votes[best] && inverse[c] > inverse[best]))
            best = c;
    }
    p.label = best;
    return p;
}

std::vector<Reference> references(const LabeledGrid& lg)
{
    std::vector<Reference> refs;
    for (std::size_t i = 0; i < lg.cell_labels.size(); ++i)
        if (lg.cell_labels[i])
            refs.push_back({lg.grid.cell(i), *lg.cell_labels[i]});
    return refs;
}

std::vector<Reference> references(const Dataset& dataset)
{
    std::vector<Reference> refs;
    refs.reserve(dataset.size());
    for (const auto& s : dataset.samples)
        refs.push_back({s.features, s.label});
    return refs;
}

std::vector<Reference> references(const TrainedModel& model, LabelingMode mode, const LabeledGrid& lg)
{
    if (mode == LabelingMode::CellOccupancy)
        return references(lg);
    std::vector<Reference> refs;
    refs.reserve(model.ants.size());
    for (const auto& a : model.ants)
        refs.push_back({a.vector, a.label});
    return refs;
}

Prediction classify(std::span<const double> sample, const LabeledGrid& lg, std::size_t k)
{
    const auto refs = references(lg);
    return nearest_k_vote(sample, refs, lg.labels.size(), k);
}

Evaluation evaluate(std::span<const Reference> refs, const Dataset& test, std::size_t k)
{
    if (test.empty())
        throw std::invalid_argument("evaluate: empty test set");
    std::size_t n_labels = test.labels.size();
    for (const auto& r : refs)
        n_labels = std::max(n_labels, r.label + 1);

    Evaluation eval;
    eval.predicted.reserve(test.size());
    std::size_t correct = 0;
    for (const auto& s : test.samples) {
        if (s.features.size() != (refs.empty() ? s.features.size() : refs.front().vector.size()))
            throw std::invalid_argument("evaluate: test sample has the wrong number of features");
        const auto p = nearest_k_vote(s.features, refs, n_labels, k);
        eval.predicted.push_back(p.label);
        if (p.label == s.label)
            ++correct;
    }
    eval.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(test.size());
    return eval;
}

Evaluation evaluate(const LabeledGrid& lg, const Dataset& test, std::size_t k)
{
    const auto refs = references(lg);
    return evaluate(refs, test, k);
}

double knn_baseline(const Dataset& train, const Dataset& test, std::size_t k)
{
    if (k > train.size())
        throw std::invalid_argument("K exceeds the training set size");
    const auto refs = references(train);
    return evaluate(refs, test, k).accuracy;
}

void write_predictions(const Dataset& test, const Evaluation& eval, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "sample_index,true_label,predicted_label,correct\n";
    for (std::size_t i = 0; i < test.size(); ++i) {
        const auto truth = test.samples[i].label;
        const auto pred = eval.predicted.at(i);
        out << i << ',' << test.label_name(truth) << ',' << test.label_name(pred) << ','
            << (truth == pred ? 1 : 0) << '\n';
    }
}

} // namespace kants
