#include "kants/metrics.hpp"

#include "kants/text.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kants {

double toroidal_distance(CellCoord a, CellCoord b, GridDims dims)
{
    const int ax = std::abs(a.x - b.x);
    const int ay = std::abs(a.y - b.y);
    const double dx = std::min(ax, dims.width - ax);
    const double dy = std::min(ay, dims.height - ay);
    return std::sqrt(dx * dx + dy * dy);
}

CompactnessReport compactness(std::span<const CellCoord> positions, std::span<const LabelId> labels,
                              std::size_t n_labels, GridDims dims)
{
    if (positions.size() != labels.size())
        throw std::invalid_argument("compactness: positions and labels differ in length");
    if (positions.size() < 2)
        throw std::invalid_argument("compactness: need at least two ants");

    std::vector<double> class_sum(n_labels, 0.0);
    std::vector<double> class_pairs(n_labels, 0.0);
    double intra_sum = 0.0;
    double intra_pairs = 0.0;
    double inter_sum = 0.0;
    double inter_pairs = 0.0;

    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            const double d = toroidal_distance(positions[i], positions[j], dims);
            if (labels[i] == labels[j]) {
                class_sum.at(labels[i]) += d;
                class_pairs.at(labels[i]) += 1.0;
                intra_sum += d;
                intra_pairs += 1.0;
            } else {
                inter_sum += d;
                inter_pairs += 1.0;
            }
        }
    }

    CompactnessReport report;
    report.per_class.resize(n_labels);
    for (std::size_t c = 0; c < n_labels; ++c)
        if (class_pairs[c] > 0.0)
            report.per_class[c] = class_sum[c] / class_pairs[c];
    report.intra = intra_pairs > 0.0 ? intra_sum / intra_pairs : 0.0;
    if (inter_pairs > 0.0) {
        report.inter = inter_sum / inter_pairs;
        // All classes stacked on one cell: no spread at all, call it perfectly
        // mixed rather than dividing by zero.
        report.ratio = *report.inter > 0.0 ? report.intra / *report.inter : 1.0;
    }
    return report;
}

RunStats aggregate_runs(std::span<const double> accuracies)
{
    if (accuracies.empty())
        throw std::invalid_argument("aggregate_runs: no runs");
    // Summed in sorted order so the result does not depend on run order.
    std::vector<double> sorted(accuracies.begin(), accuracies.end());
    std::sort(sorted.begin(), sorted.end());
    RunStats stats;
    stats.n_runs = sorted.size();
    stats.best = sorted.back();
    double sum = 0.0;
    for (double a : sorted)
        sum += a;
    stats.mean = std::min(sum / static_cast<double>(stats.n_runs), stats.best);
    double ss = 0.0;
    for (double a : sorted)
        ss += (a - stats.mean) * (a - stats.mean);
    stats.stddev = std::sqrt(ss / static_cast<double>(stats.n_runs));
    return stats;
}

std::string format_mean_std(const RunStats& stats)
{
    return text::format_percent(stats.mean) + " ±" + text::format_percent(stats.stddev);
}

} // namespace kants
