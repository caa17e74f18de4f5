#pragma once

// Flat "key = value" configuration files. '#' starts a comment; blank lines
// are ignored; later keys override earlier ones.

#include "evmoga/engine.hpp"
#include "evmoga/preferences.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace evmoga {

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::filesystem::path& path);

/// Run configuration: every EvMogaConfig field by name, plus optional
/// `lower_bound` / `upper_bound` applied to every asset. Unknown keys are
/// rejected.
struct RunSettings {
    EvMogaConfig config;
    double lower_bound = 0.0;
    double upper_bound = 1.0;

    Bounds bounds(std::size_t num_assets) const { return Bounds::uniform(static_cast<Eigen::Index>(num_assets), lower_bound, upper_bound); }
};

/// Applies `values` on top of `base`. Throws std::invalid_argument for
/// unknown keys or unparsable values.
RunSettings apply_run_settings(RunSettings base, const KeyValues& values);
KeyValues to_key_values(const RunSettings& settings);

/// Profile file keys: `green.<label> = <percentile>`, `risk.<label> = ...`.
ProfileConfig apply_profile_settings(ProfileConfig base, const KeyValues& values);

}  // namespace evmoga
