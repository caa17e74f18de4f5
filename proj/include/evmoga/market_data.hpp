#pragma once

// Return-series ingestion and moment estimation.
//
// Returns are periodic returns in percent (e.g. monthly), one column per
// asset. The estimated universe carries the expected-return vector, the
// sample covariance matrix and a carbon risk score per asset.

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace evmoga {

/// Raised for malformed input files. Carries the offending location when known
/// (1-based data row / column; 0 means "not applicable").
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
        : std::runtime_error(what), row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

struct CarbonRange {
    double lo = 0.0;
    double hi = 10.0;
};

struct ReturnsMatrix {
    std::vector<std::string> asset_ids;
    Eigen::MatrixXd observations;  // T x N
    std::string period_label = "monthly";

    std::size_t num_assets() const { return asset_ids.size(); }
    std::size_t num_periods() const { return static_cast<std::size_t>(observations.rows()); }

    /// Throws DataError if T < 2, ids are not unique, or an entry is not finite.
    void validate() const;
};

struct AssetUniverse {
    std::vector<std::string> asset_ids;
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    Eigen::VectorXd carbon;
    CarbonRange carbon_range;

    std::size_t size() const { return asset_ids.size(); }

    /// Checks dimensions, symmetry (1e-9), positive semidefiniteness
    /// (smallest eigenvalue >= -1e-8) and the carbon range. Throws DataError.
    void validate() const;
};

ReturnsMatrix load_returns(const std::filesystem::path& path, const std::string& period_label = "monthly");

/// Reads a two-column (asset_id, carbon_score) CSV. A header row is detected
/// when the second cell of the first line is not numeric.
std::vector<std::pair<std::string, double>> load_carbon_scores(const std::filesystem::path& path);

/// Orders carbon scores to match `asset_ids`. Throws DataError listing ids
/// missing from either side.
Eigen::VectorXd align_carbon(const std::vector<std::string>& asset_ids,
                             const std::vector<std::pair<std::string, double>>& scores);

/// Sample mean and covariance (divisor T-1) of the return columns.
AssetUniverse estimate_moments(const ReturnsMatrix& returns, const Eigen::VectorXd& carbon,
                               CarbonRange range = {});

// Canonical instance file (JSON).
nlohmann::json instance_to_json(const AssetUniverse& universe);
AssetUniverse instance_from_json(const nlohmann::json& doc);
void save_instance(const AssetUniverse& universe, const std::filesystem::path& path);
AssetUniverse load_instance(const std::filesystem::path& path);

/// Content digest of the canonical instance serialization ("fnv1a64:<hex>").
std::string instance_digest(const AssetUniverse& universe);

}  // namespace evmoga
