#pragma once

#include "kants/classifier.hpp"
#include "kants/dataset.hpp"
#include "kants/engine.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace kants {

/// A trained model as persisted on disk: everything needed to classify raw
/// (unnormalized) samples later.
struct StoredModel {
    TrainedModel model;
    LabeledGrid labeled;
    FeatureRanges ranges;
};

// Model directory layout:
//   grid.csv    grid export (see export_grid)
//   ants.csv    kants-ants,N,nvars,1 header, then ant_id,label,x,y,f_0..f_{n-1}
//   cells.csv   x,y,label for every labeled cell
//   model.meta  key=value: parameters, label table, feature ranges
void save_model(const StoredModel& stored, const std::filesystem::path& dir);
StoredModel load_model(const std::filesystem::path& dir);

/// Parse `key=value` lines; blank lines and `#` comments are skipped.
std::map<std::string, std::string> parse_key_values(const std::string& content, const std::string& source);

std::map<std::string, std::string> params_to_key_values(const KantsParams& params);
/// Apply recognized keys onto `params`; unknown keys are ignored.
void apply_key_values(KantsParams& params, const std::map<std::string, std::string>& kv, const std::string& source);

} // namespace kants
