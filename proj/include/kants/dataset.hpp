#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kants {

using FeatureVector = std::vector<double>;

/// Index into Dataset::labels.
using LabelId = std::size_t;

/// Parse failure in one of the text formats; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what);

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct Sample {
    FeatureVector features;
    LabelId label = 0;
};

struct FeatureRange {
    double min = 0.0;
    double max = 0.0;

    bool constant() const { return !(min < max); }
};

using FeatureRanges = std::vector<FeatureRange>;

struct Dataset {
    std::vector<Sample> samples;
    std::size_t nvars = 0;
    /// Distinct class names in canonical order (numeric order when every
    /// label parses as a number, lexicographic otherwise).
    std::vector<std::string> labels;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    const std::string& label_name(LabelId id) const { return labels.at(id); }
    std::optional<LabelId> find_label(const std::string& name) const;

    /// Per-class sample counts, indexed by LabelId.
    std::vector<std::size_t> class_counts() const;

    /// Feature-wise (min, max) over the samples.
    FeatureRanges observed_ranges() const;

    /// Copy with only the given rows, keeping nvars and the label table.
    Dataset subset(const std::vector<std::size_t>& rows) const;

    friend bool operator==(const Dataset& a, const Dataset& b);
};

bool operator==(const Sample& a, const Sample& b);

/// Sort label names in canonical order: numerically if they all parse as
/// numbers, otherwise lexicographically.
void sort_labels(std::vector<std::string>& labels);

struct CsvOptions {
    /// Label column; negative values count from the end (-1 = last column).
    int label_column = -1;
    /// Columns dropped before parsing (e.g. an ID column). Same indexing as
    /// label_column.
    std::vector<int> ignore_columns;
};

/// Load a comma-separated file. A first row whose feature cells are not all
/// numeric is taken as a header and skipped.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Parse CSV text; `source` names the input in error messages.
Dataset parse_csv(const std::string& text, const CsvOptions& options = {},
                  const std::string& source = "<memory>");

/// Write samples as `f0,...,f{n-1},label` rows, no header, shortest
/// round-trip decimal form for each value.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Relabel `dataset` so that its LabelIds refer to `reference`. Names missing
/// from `reference` are appended to it.
Dataset align_labels(const Dataset& dataset, std::vector<std::string>& reference);

struct Normalized {
    Dataset data;
    FeatureRanges ranges;
};

/// Min-max scale every feature to [0,1].
///
/// Without `ranges` the ranges are taken from `dataset` itself (training
/// case). With `ranges` (test case) values outside them are clamped. A
/// constant feature maps to 0.5.
Normalized normalize(const Dataset& dataset, const std::optional<FeatureRanges>& ranges = std::nullopt);

struct SplitSpec {
    double train_fraction = 0.5;
    bool stratified = true;
    std::uint64_t seed = 0;
};

struct Split {
    Dataset train;
    Dataset test;
    /// Source row indices of each side, ascending.
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    std::vector<std::string> warnings;
};

/// Stratified train/test partition. Each class c contributes
/// round(fraction * n_c) training rows, kept within [1, n_c - 1] so that both
/// sides see the class. A class with fewer than two samples goes wholly to
/// train and a warning is recorded. Rows keep their original order on both
/// sides.
Split stratified_split(const Dataset& dataset, const SplitSpec& spec);

/// Canonical file stem for a split, e.g. "iris-90tra-10tst-set1".
std::string split_name(const std::string& dataset_name, double train_fraction, int set_index);

/// Write `<dir>/<name>.tra.csv`, `<dir>/<name>.tst.csv` and the
/// `<dir>/<name>.meta` sidecar (key=value lines).
void write_split_files(const Split& split, const SplitSpec& spec, const std::filesystem::path& dir,
                       const std::string& name);

} // namespace kants
