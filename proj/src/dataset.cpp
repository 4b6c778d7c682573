#include "kants/dataset.hpp"

#include "kants/random.hpp"
#include "kants/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace kants {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line)
{
}

bool operator==(const Sample& a, const Sample& b)
{
    return a.label == b.label && a.features == b.features;
}

bool operator==(const Dataset& a, const Dataset& b)
{
    return a.nvars == b.nvars && a.labels == b.labels && a.samples == b.samples;
}

std::optional<LabelId> Dataset::find_label(const std::string& name) const
{
    const auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end())
        return std::nullopt;
    return static_cast<LabelId>(it - labels.begin());
}

std::vector<std::size_t> Dataset::class_counts() const
{
    std::vector<std::size_t> counts(labels.size(), 0);
    for (const auto& s : samples)
        ++counts.at(s.label);
    return counts;
}

FeatureRanges Dataset::observed_ranges() const
{
    FeatureRanges ranges(nvars);
    if (samples.empty())
        return ranges;
    for (std::size_t v = 0; v < nvars; ++v)
        ranges[v] = {samples.front().features[v], samples.front().features[v]};
    for (const auto& s : samples) {
        for (std::size_t v = 0; v < nvars; ++v) {
            ranges[v].min = std::min(ranges[v].min, s.features[v]);
            ranges[v].max = std::max(ranges[v].max, s.features[v]);
        }
    }
    return ranges;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const
{
    Dataset out;
    out.nvars = nvars;
    out.labels = labels;
    out.samples.reserve(rows.size());
    for (auto r : rows)
        out.samples.push_back(samples.at(r));
    return out;
}

void sort_labels(std::vector<std::string>& labels)
{
    const bool numeric = std::all_of(labels.begin(), labels.end(),
                                     [](const std::string& l) { return text::parse_double(l).has_value(); });
    if (numeric) {
        std::stable_sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
            return *text::parse_double(a) < *text::parse_double(b);
        });
    } else {
        std::sort(labels.begin(), labels.end());
    }
}

namespace {

std::size_t resolve_column(int column, std::size_t ncols, const std::string& source)
{
    const long long idx = column < 0 ? static_cast<long long>(ncols) + column : column;
    if (idx < 0 || idx >= static_cast<long long>(ncols))
        throw ParseError(source, 1, "column " + std::to_string(column) + " out of range for " +
                                        std::to_string(ncols) + " columns");
    return static_cast<std::size_t>(idx);
}

} // namespace

Dataset parse_csv(const std::string& content, const CsvOptions& options, const std::string& source)
{
    const auto rows = text::lines(content);

    std::size_t ncols = 0;
    std::size_t label_col = 0;
    std::vector<bool> is_feature;
    bool layout_known = false;
    bool header_checked = false;

    std::vector<std::pair<FeatureVector, std::string>> parsed;

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (text::trim(rows[i]).empty())
            continue;
        const auto fields = text::split_fields(rows[i]);

        if (!layout_known) {
            ncols = fields.size();
            label_col = resolve_column(options.label_column, ncols, source);
            is_feature.assign(ncols, true);
            is_feature[label_col] = false;
            for (int c : options.ignore_columns) {
                const auto idx = resolve_column(c, ncols, source);
                if (idx == label_col)
                    throw ParseError(source, lineno, "label column is also listed as ignored");
                is_feature[idx] = false;
            }
            if (std::none_of(is_feature.begin(), is_feature.end(), [](bool b) { return b; }))
                throw ParseError(source, lineno, "no feature columns");
            layout_known = true;
        }

        if (fields.size() != ncols)
            throw ParseError(source, lineno,
                             "expected " + std::to_string(ncols) + " columns, found " + std::to_string(fields.size()));

        if (!header_checked) {
            header_checked = true;
            bool numeric = true;
            for (std::size_t c = 0; c < ncols; ++c)
                if (is_feature[c] && !text::parse_double(fields[c]))
                    numeric = false;
            if (!numeric)
                continue;
        }

        FeatureVector features;
        for (std::size_t c = 0; c < ncols; ++c) {
            if (!is_feature[c])
                continue;
            const auto v = text::parse_double(fields[c]);
            if (!v || !std::isfinite(*v))
                throw ParseError(source, lineno,
                                 "column " + std::to_string(c) + ": non-numeric value '" + std::string(fields[c]) + "'");
            features.push_back(*v);
        }
        if (fields[label_col].empty())
            throw ParseError(source, lineno, "empty label");
        parsed.emplace_back(std::move(features), std::string(fields[label_col]));
    }

    if (parsed.empty())
        throw ParseError(source, rows.size(), "no data rows");

    std::set<std::string> distinct;
    for (const auto& p : parsed)
        distinct.insert(p.second);

    Dataset ds;
    ds.nvars = parsed.front().first.size();
    ds.labels.assign(distinct.begin(), distinct.end());
    sort_labels(ds.labels);
    std::map<std::string, LabelId> ids;
    for (LabelId i = 0; i < ds.labels.size(); ++i)
        ids[ds.labels[i]] = i;
    ds.samples.reserve(parsed.size());
    for (auto& [features, label] : parsed)
        ds.samples.push_back({std::move(features), ids.at(label)});
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options)
{
    if (!std::filesystem::exists(path))
        throw std::runtime_error("no such file: '" + path.string() + "'");
    return parse_csv(text::read_file(path.string()), options, path.string());
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    for (const auto& s : dataset.samples) {
        for (double v : s.features)
            out << text::format_double(v) << ',';
        out << dataset.label_name(s.label) << '\n';
    }
}

Dataset align_labels(const Dataset& dataset, std::vector<std::string>& reference)
{
    std::vector<LabelId> remap(dataset.labels.size());
    for (LabelId i = 0; i < dataset.labels.size(); ++i) {
        const auto it = std::find(reference.begin(), reference.end(), dataset.labels[i]);
        if (it == reference.end()) {
            reference.push_back(dataset.labels[i]);
            remap[i] = reference.size() - 1;
        } else {
            remap[i] = static_cast<LabelId>(it - reference.begin());
        }
    }
    Dataset out = dataset;
    out.labels = reference;
    for (auto& s : out.samples)
        s.label = remap[s.label];
    return out;
}

Normalized normalize(const Dataset& dataset, const std::optional<FeatureRanges>& ranges)
{
    Normalized result{dataset, ranges ? *ranges : dataset.observed_ranges()};
    if (result.ranges.size() != dataset.nvars)
        throw std::invalid_argument("normalize: " + std::to_string(result.ranges.size()) + " ranges for " +
                                    std::to_string(dataset.nvars) + " features");
    for (auto& s : result.data.samples) {
        for (std::size_t v = 0; v < dataset.nvars; ++v) {
            const auto& r = result.ranges[v];
            if (r.constant()) {
                s.features[v] = 0.5;
                continue;
            }
            const double scaled = (s.features[v] - r.min) / (r.max - r.min);
            s.features[v] = std::clamp(scaled, 0.0, 1.0);
        }
    }
    return result;
}

Split stratified_split(const Dataset& dataset, const SplitSpec& spec)
{
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw std::invalid_argument("train fraction must lie in (0,1)");

    std::vector<std::vector<std::size_t>> by_class(dataset.labels.size());
    for (std::size_t i = 0; i < dataset.size(); ++i)
        by_class.at(dataset.samples[i].label).push_back(i);

    Split split;
    Rng rng(spec.seed);
    if (!spec.stratified) {
        std::vector<std::size_t> all(dataset.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = i;
        by_class = {all};
    }
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& rows = by_class[c];
        const std::size_t n = rows.size();
        if (n == 0)
            continue;
        if (n < 2) {
            split.warnings.push_back("class '" + dataset.labels[c] + "' has " + std::to_string(n) +
                                     " sample(s); placed wholly in the training set");
            split.train_rows.insert(split.train_rows.end(), rows.begin(), rows.end());
            continue;
        }
        auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
        n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
        rng.shuffle(std::span(rows));
        split.train_rows.insert(split.train_rows.end(), rows.begin(), rows.begin() + static_cast<long>(n_train));
        split.test_rows.insert(split.test_rows.end(), rows.begin() + static_cast<long>(n_train), rows.end());
    }
    std::sort(split.train_rows.begin(), split.train_rows.end());
    std::sort(split.test_rows.begin(), split.test_rows.end());
    split.train = dataset.subset(split.train_rows);
    split.test = dataset.subset(split.test_rows);
    return split;
}

std::string split_name(const std::string& dataset_name, double train_fraction, int set_index)
{
    const auto tra = std::lround(train_fraction * 100.0);
    return dataset_name + "-" + std::to_string(tra) + "tra-" + std::to_string(100 - tra) + "tst-set" +
           std::to_string(set_index);
}

void write_split_files(const Split& split, const SplitSpec& spec, const std::filesystem::path& dir,
                       const std::string& name)
{
    std::filesystem::create_directories(dir);
    write_csv(split.train, dir / (name + ".tra.csv"));
    write_csv(split.test, dir / (name + ".tst.csv"));

    std::ofstream meta(dir / (name + ".meta"), std::ios::binary);
    if (!meta)
        throw std::runtime_error("cannot write metadata for '" + name + "'");
    meta << "seed=" << spec.seed << '\n';
    meta << "train_fraction=" << text::format_double(spec.train_fraction) << '\n';
    meta << "train_size=" << split.train.size() << '\n';
    meta << "test_size=" << split.test.size() << '\n';
    const auto train_counts = split.train.class_counts();
    const auto test_counts = split.test.class_counts();
    for (LabelId c = 0; c < split.train.labels.size(); ++c) {
        meta << "train_count." << split.train.labels[c] << '=' << train_counts[c] << '\n';
        meta << "test_count." << split.train.labels[c] << '=' << test_counts[c] << '\n';
    }
}

} // namespace kants
