#pragma once

#include "kants/dataset.hpp"
#include "kants/grid.hpp"
#include "kants/random.hpp"

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace kants::test {

inline std::filesystem::path data_path(const std::string& file)
{
    return std::filesystem::path(KANTS_DATA_DIR) / file;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("kants-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Bitwise equality of two double sequences (distinguishes -0.0 and NaN payloads).
inline bool same_bits(const std::vector<double>& a, const std::vector<double>& b)
{
    return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

/// `n` samples with `nvars` uniform features and labels cycling over `classes`.
inline Dataset random_dataset(std::size_t n, std::size_t nvars, std::size_t classes, std::uint64_t seed)
{
    Rng rng(seed);
    Dataset ds;
    ds.nvars = nvars;
    for (std::size_t c = 0; c < classes; ++c)
        ds.labels.push_back(std::to_string(c));
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        for (std::size_t v = 0; v < nvars; ++v)
            s.features.push_back(rng.uniform());
        s.label = i % classes;
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

} // namespace kants::test
