#pragma once

#include "sigaug/model.hpp"

#include <string>

namespace sigaug {

/// Everything the training CLI reads from a config file.
struct Settings {
    Hyper hyper;
    TrainConfig train;
    int folds = 5;
    /// Declared number of new time instants; when >= 0 the grid implied by
    /// (strategy, dataset length) must match it exactly. < 0 skips the check.
    int M = -1;
};

/// Parses the "key = value" text format ('#' starts a comment). Unknown keys
/// and malformed values raise std::runtime_error naming the line.
Settings parse_settings_text(const std::string& text);
Settings load_settings(const std::string& path);
std::string settings_to_text(const Settings& s);

GridStrategy parse_strategy(const std::string& name);
std::string strategy_name(GridStrategy s);

}  // namespace sigaug
