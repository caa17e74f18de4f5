#include "evmoga/market_data.hpp"

#include <Eigen/Eigenvalues>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

namespace evmoga {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

bool parse_double(std::string_view cell, double& out) {
    cell = trim(cell);
    if (cell.empty()) return false;
    if (cell.front() == '+') cell.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::string location(const std::filesystem::path& path, std::size_t row, std::size_t line) {
    std::ostringstream os;
    os << path.string() << ": row " << row << " (line " << line << ")";
    return os.str();
}

}  // namespace

void ReturnsMatrix::validate() const {
    const auto n = asset_ids.size();
    if (n == 0) throw DataError("returns: no assets");
    if (static_cast<std::size_t>(observations.cols()) != n)
        throw DataError("returns: observation width does not match asset count");
    if (observations.rows() < 2) throw DataError("returns: at least two observations are required");
    std::set<std::string> seen;
    for (const auto& id : asset_ids) {
        if (!seen.insert(id).second) throw DataError("returns: duplicate asset id '" + id + "'");
    }
    for (Eigen::Index t = 0; t < observations.rows(); ++t) {
        for (Eigen::Index j = 0; j < observations.cols(); ++j) {
            if (!std::isfinite(observations(t, j)))
                throw DataError("returns: non-finite value", static_cast<std::size_t>(t) + 1,
                                static_cast<std::size_t>(j) + 1);
        }
    }
}

void AssetUniverse::validate() const {
    const auto n = static_cast<Eigen::Index>(asset_ids.size());
    if (n == 0) throw DataError("instance: no assets");
    if (mu.size() != n || carbon.size() != n || sigma.rows() != n || sigma.cols() != n)
        throw DataError("instance: dimension mismatch between asset_ids, mu, sigma and carbon");
    if (!mu.allFinite() || !sigma.allFinite() || !carbon.allFinite())
        throw DataError("instance: non-finite moment or carbon value");
    if (carbon_range.lo > carbon_range.hi) throw DataError("instance: carbon_range lo > hi");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (carbon(i) < carbon_range.lo || carbon(i) > carbon_range.hi) {
            std::ostringstream os;
            os << "instance: carbon score " << carbon(i) << " of '" << asset_ids[static_cast<std::size_t>(i)]
               << "' outside [" << carbon_range.lo << ", " << carbon_range.hi << "]";
            throw DataError(os.str(), 0, static_cast<std::size_t>(i) + 1);
        }
    }
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw DataError("instance: covariance matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-8)
        throw DataError("instance: covariance matrix is not positive semidefinite");
}

ReturnsMatrix load_returns(const std::filesystem::path& path, const std::string& period_label) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open returns file '" + path.string() + "'");

    ReturnsMatrix out;
    out.period_label = period_label;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw DataError(path.string() + ": empty file");
    // Strip a UTF-8 byte order mark.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    for (auto cell : split_csv(line)) {
        auto id = unquote(cell);
        if (id.empty()) throw DataError(path.string() + ": empty asset id in header", 0, out.asset_ids.size() + 1);
        out.asset_ids.push_back(std::move(id));
    }
    const auto n = out.asset_ids.size();

    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++row;
        auto cells = split_csv(line);
        if (cells.size() != n) {
            std::ostringstream os;
            os << location(path, row, line_no) << ": expected " << n << " cells, found " << cells.size();
            throw DataError(os.str(), row);
        }
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            if (trim(cells[j]).empty())
                throw DataError(location(path, row, line_no) + ", column '" + out.asset_ids[j] + "': empty cell", row,
                                j + 1);
            if (!parse_double(cells[j], v) || !std::isfinite(v))
                throw DataError(location(path, row, line_no) + ", column '" + out.asset_ids[j] +
                                    "': not a number: '" + std::string(trim(cells[j])) + "'",
                                row, j + 1);
            values.push_back(v);
        }
    }
    out.observations.resize(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < row; ++t)
        for (std::size_t j = 0; j < n; ++j)
            out.observations(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = values[t * n + j];
    out.validate();
    return out;
}

std::vector<std::pair<std::string, double>> load_carbon_scores(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open carbon file '" + path.string() + "'");
    std::vector<std::pair<std::string, double>> scores;
    std::string line;
    std::size_t line_no = 0;
    std::size_t row = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto cells = split_csv(line);
        double v = 0.0;
        if (first) {
            first = false;
            if (cells.size() == 2 && !parse_double(cells[1], v)) continue;  // header
        }
        ++row;
        if (cells.size() != 2)
            throw DataError(location(path, row, line_no) + ": expected 2 cells (asset_id, carbon_score)", row);
        if (!parse_double(cells[1], v) || !std::isfinite(v))
            throw DataError(location(path, row, line_no) + ": carbon score is not a number", row, 2);
        scores.emplace_back(unquote(cells[0]), v);
    }
    return scores;
}

Eigen::VectorXd align_carbon(const std::vector<std::string>& asset_ids,
                             const std::vector<std::pair<std::string, double>>& scores) {
    std::map<std::string, double> by_id;
    for (const auto& [id, v] : scores) {
        if (!by_id.emplace(id, v).second) throw DataError("carbon: duplicate asset id '" + id + "'");
    }
    std::vector<std::string> missing;
    std::set<std::string> known(asset_ids.begin(), asset_ids.end());
    Eigen::VectorXd out(static_cast<Eigen::Index>(asset_ids.size()));
    for (std::size_t i = 0; i < asset_ids.size(); ++i) {
        auto it = by_id.find(asset_ids[i]);
        if (it == by_id.end()) {
            missing.push_back(asset_ids[i]);
            continue;
        }
        out(static_cast<Eigen::Index>(i)) = it->second;
    }
    std::vector<std::string> extra;
    for (const auto& [id, v] : by_id)
        if (!known.count(id)) extra.push_back(id);
    if (!missing.empty() || !extra.empty()) {
        std::ostringstream os;
        os << "carbon scores do not match return columns;";
        if (!missing.empty()) {
            os << " missing:";
            for (const auto& id : missing) os << ' ' << id;
            os << ';';
        }
        if (!extra.empty()) {
            os << " unknown:";
            for (const auto& id : extra) os << ' ' << id;
        }
        throw DataError(os.str());
    }
    return out;
}

AssetUniverse estimate_moments(const ReturnsMatrix& returns, const Eigen::VectorXd& carbon, CarbonRange range) {
    if (returns.observations.rows() < 2)
        throw DataError("estimate_moments: at least two observations are required for the covariance");
    const auto n = returns.observations.cols();
    if (carbon.size() != n) {
        std::ostringstream os;
        os << "estimate_moments: carbon vector has " << carbon.size() << " entries, expected " << n;
        throw DataError(os.str());
    }
    const auto t_count = returns.observations.rows();

    AssetUniverse u;
    u.asset_ids = returns.asset_ids;
    u.carbon = carbon;
    u.carbon_range = range;
    u.mu = returns.observations.colwise().mean().transpose();

    const Eigen::MatrixXd centered = returns.observations.rowwise() - u.mu.transpose();
    u.sigma.resize(n, n);
    const double denom = static_cast<double>(t_count - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double c = centered.col(i).dot(centered.col(j)) / denom;
            u.sigma(i, j) = c;
            u.sigma(j, i) = c;
        }
    }
    u.validate();
    return u;
}

nlohmann::json instance_to_json(const AssetUniverse& u) {
    nlohmann::json doc;
    doc["schema_version"] = "1.0";
    doc["asset_ids"] = u.asset_ids;
    doc["mu"] = std::vector<double>(u.mu.data(), u.mu.data() + u.mu.size());
    auto& rows = doc["sigma"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < u.sigma.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(u.sigma.cols()));
        for (Eigen::Index j = 0; j < u.sigma.cols(); ++j) row[static_cast<std::size_t>(j)] = u.sigma(i, j);
        rows.push_back(row);
    }
    doc["carbon"] = std::vector<double>(u.carbon.data(), u.carbon.data() + u.carbon.size());
    doc["carbon_range"] = {u.carbon_range.lo, u.carbon_range.hi};
    return doc;
}

AssetUniverse instance_from_json(const nlohmann::json& doc) {
    try {
        AssetUniverse u;
        u.asset_ids = doc.at("asset_ids").get<std::vector<std::string>>();
        const auto n = static_cast<Eigen::Index>(u.asset_ids.size());
        const auto mu = doc.at("mu").get<std::vector<double>>();
        const auto carbon = doc.at("carbon").get<std::vector<double>>();
        const auto sigma = doc.at("sigma").get<std::vector<std::vector<double>>>();
        if (static_cast<Eigen::Index>(mu.size()) != n || static_cast<Eigen::Index>(carbon.size()) != n ||
            static_cast<Eigen::Index>(sigma.size()) != n)
            throw DataError("instance: dimension mismatch");
        u.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), n);
        u.carbon = Eigen::Map<const Eigen::VectorXd>(carbon.data(), n);
        u.sigma.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& row = sigma[static_cast<std::size_t>(i)];
            if (static_cast<Eigen::Index>(row.size()) != n) throw DataError("instance: sigma row has wrong length");
            for (Eigen::Index j = 0; j < n; ++j) u.sigma(i, j) = row[static_cast<std::size_t>(j)];
        }
        if (doc.contains("carbon_range")) {
            const auto r = doc.at("carbon_range").get<std::vector<double>>();
            if (r.size() != 2) throw DataError("instance: carbon_range must have two entries");
            u.carbon_range = {r[0], r[1]};
        }
        u.validate();
        return u;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("instance: malformed JSON: ") + e.what());
    }
}

void save_instance(const AssetUniverse& universe, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write instance file '" + path.string() + "'");
    out << instance_to_json(universe).dump(2) << '\n';
}

AssetUniverse load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open instance file '" + path.string() + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return instance_from_json(doc);
}

std::string instance_digest(const AssetUniverse& universe) {
    const auto text = instance_to_json(universe).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace evmoga
