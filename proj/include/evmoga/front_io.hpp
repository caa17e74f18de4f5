#pragma once

// Canonical front file (JSON): grid metadata, the archive entries in box
// order and the metadata of the run that produced them.

#include "evmoga/engine.hpp"
#include "evmoga/kv_config.hpp"
#include "evmoga/market_data.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace evmoga {

inline constexpr const char* kFrontSchemaVersion = "1.0";

struct RunMetadata {
    std::uint64_t seed = 0;
    KeyValues config;
    long long iterations = 0;
    long long evaluations = 0;
    double wall_seconds = 0.0;
    std::vector<Checkpoint> checkpoints;
};

struct FrontExport {
    std::string schema_version = kFrontSchemaVersion;
    std::string instance_ref;
    std::vector<std::string> asset_ids;
    Grid grid;
    /// Sorted by box index; an entry's id is its position here.
    std::vector<ArchiveEntry> entries;
    std::optional<RunMetadata> run;

    static FrontExport from_archive(const EpsArchive& archive, const AssetUniverse& universe);
    static FrontExport from_run(const RunResult& result, const AssetUniverse& universe, const RunSettings& settings);

    /// Rebuilds the archive (validates every archive invariant).
    EpsArchive to_archive() const;

    /// Throws DataError if `universe` is not the instance this front was
    /// computed on.
    void check_instance(const AssetUniverse& universe) const;
};

nlohmann::json entry_to_json(const ArchiveEntry& entry, std::size_t id);
nlohmann::json entries_to_json(const std::vector<ArchiveEntry>& entries);
nlohmann::json checkpoint_to_json(const Checkpoint& cp);
nlohmann::json front_to_json(const FrontExport& front);
FrontExport front_from_json(const nlohmann::json& doc);

void save_front(const FrontExport& front, const std::filesystem::path& path);
FrontExport load_front(const std::filesystem::path& path);

}  // namespace evmoga
