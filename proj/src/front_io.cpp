#include "evmoga/front_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace evmoga {

namespace {

nlohmann::json vec3_json(const Vec3& v) { return nlohmann::json::array({v[0], v[1], v[2]}); }

Vec3 vec3_from(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != kNumObjectives) throw DataError("front: expected a 3-vector");
    return {v[0], v[1], v[2]};
}

}  // namespace

FrontExport FrontExport::from_archive(const EpsArchive& archive, const AssetUniverse& universe) {
    FrontExport f;
    f.instance_ref = instance_digest(universe);
    f.asset_ids = universe.asset_ids;
    if (archive.has_grid()) f.grid = archive.grid();
    f.grid.n_box = archive.n_box();
    f.entries = archive.sorted_entries();
    return f;
}

FrontExport FrontExport::from_run(const RunResult& result, const AssetUniverse& universe, const RunSettings& settings) {
    auto f = from_archive(result.archive, universe);
    RunMetadata meta;
    meta.seed = settings.config.seed;
    meta.config = to_key_values(settings);
    meta.iterations = result.iterations_done;
    meta.evaluations = result.evaluations;
    meta.wall_seconds = result.wall_seconds;
    meta.checkpoints = result.checkpoints;
    f.run = std::move(meta);
    return f;
}

EpsArchive FrontExport::to_archive() const {
    if (entries.empty()) return EpsArchive(grid.n_box);
    return EpsArchive::restore(grid, entries);
}

void FrontExport::check_instance(const AssetUniverse& universe) const {
    const auto digest = instance_digest(universe);
    if (digest != instance_ref)
        throw DataError("front was computed on instance " + instance_ref + ", got " + digest);
}

nlohmann::json entry_to_json(const ArchiveEntry& e, std::size_t id) {
    const auto& w = e.portfolio.weights;
    return {
        {"id", id},
        {"weights", std::vector<double>(w.data(), w.data() + w.size())},
        {"risk", e.objectives.risk},
        {"ret", e.objectives.ret},
        {"carbon", e.objectives.carbon},
        {"box", {e.box[0], e.box[1], e.box[2]}},
    };
}

nlohmann::json entries_to_json(const std::vector<ArchiveEntry>& entries) {
    auto arr = nlohmann::json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) arr.push_back(entry_to_json(entries[i], i));
    return arr;
}

nlohmann::json checkpoint_to_json(const Checkpoint& cp) {
    return {
        {"iteration", cp.iteration},
        {"archive_size", cp.archive_size},
        {"hypervolume", cp.hypervolume},
        {"anchors", {vec3_json(cp.anchors[0]), vec3_json(cp.anchors[1]), vec3_json(cp.anchors[2])}},
    };
}

nlohmann::json front_to_json(const FrontExport& f) {
    nlohmann::json doc;
    doc["schema_version"] = f.schema_version;
    doc["instance_ref"] = f.instance_ref;
    doc["asset_ids"] = f.asset_ids;
    doc["grid"] = {
        {"f_min", vec3_json(f.grid.f_min)},
        {"f_max", vec3_json(f.grid.f_max)},
        {"eps", vec3_json(f.grid.eps)},
        {"n_box", f.grid.n_box},
    };
    doc["entries"] = entries_to_json(f.entries);
    if (f.run) {
        auto cps = nlohmann::json::array();
        for (const auto& cp : f.run->checkpoints) cps.push_back(checkpoint_to_json(cp));
        doc["run"] = {
            {"seed", f.run->seed},
            {"config", f.run->config},
            {"iterations", f.run->iterations},
            {"evaluations", f.run->evaluations},
            {"wall_seconds", f.run->wall_seconds},
            {"checkpoints", cps},
        };
    }
    return doc;
}

FrontExport front_from_json(const nlohmann::json& doc) {
    try {
        FrontExport f;
        f.schema_version = doc.at("schema_version").get<std::string>();
        if (f.schema_version != kFrontSchemaVersion)
            throw DataError("front: unsupported schema_version '" + f.schema_version + "'");
        f.instance_ref = doc.at("instance_ref").get<std::string>();
        f.asset_ids = doc.at("asset_ids").get<std::vector<std::string>>();
        const auto& g = doc.at("grid");
        f.grid.f_min = vec3_from(g.at("f_min"));
        f.grid.f_max = vec3_from(g.at("f_max"));
        f.grid.eps = vec3_from(g.at("eps"));
        f.grid.n_box = g.at("n_box").get<int>();
        if (f.grid.n_box < 1) throw DataError("front: n_box must be positive");

        const auto n = f.asset_ids.size();
        for (const auto& je : doc.at("entries")) {
            const auto id = je.at("id").get<std::size_t>();
            std::ostringstream where;
            where << "front: entry " << id << ": ";
            if (id != f.entries.size()) throw DataError(where.str() + "ids must be consecutive from 0");
            const auto w = je.at("weights").get<std::vector<double>>();
            if (w.size() != n) throw DataError(where.str() + "weight count does not match asset_ids");
            Eigen::VectorXd weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(n));
            if (!weights.allFinite() || std::abs(weights.sum() - 1.0) > kSumTolerance ||
                weights.minCoeff() < -kBoundTolerance || weights.maxCoeff() > 1.0 + kBoundTolerance)
                throw DataError(where.str() + "weights are not a feasible portfolio");
            ObjectiveVector obj{je.at("risk").get<double>(), je.at("ret").get<double>(), je.at("carbon").get<double>()};
            if (!std::isfinite(obj.risk) || !std::isfinite(obj.ret) || !std::isfinite(obj.carbon) || obj.risk < 0.0)
                throw DataError(where.str() + "invalid objective values");
            auto entry = ArchiveEntry::make(Portfolio{weights}, obj);
            const auto box = je.at("box").get<std::vector<std::int64_t>>();
            if (box.size() != kNumObjectives) throw DataError(where.str() + "box must have 3 indices");
            entry.box = {box[0], box[1], box[2]};
            if (entry.box != box_index(entry.minimized, f.grid))
                throw DataError(where.str() + "box index does not match the grid");
            f.entries.push_back(std::move(entry));
        }

        if (doc.contains("run")) {
            const auto& r = doc.at("run");
            RunMetadata meta;
            meta.seed = r.at("seed").get<std::uint64_t>();
            meta.config = r.at("config").get<KeyValues>();
            meta.iterations = r.at("iterations").get<long long>();
            meta.evaluations = r.at("evaluations").get<long long>();
            meta.wall_seconds = r.at("wall_seconds").get<double>();
            for (const auto& jc : r.at("checkpoints")) {
                Checkpoint cp;
                cp.iteration = jc.at("iteration").get<long long>();
                cp.archive_size = jc.at("archive_size").get<std::size_t>();
                cp.hypervolume = jc.at("hypervolume").get<double>();
                const auto& a = jc.at("anchors");
                for (std::size_t k = 0; k < kNumObjectives; ++k) cp.anchors[k] = vec3_from(a.at(k));
                meta.checkpoints.push_back(cp);
            }
            f.run = std::move(meta);
        }
        // Validates the archive invariants.
        (void)f.to_archive();
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("front: malformed JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("front: ") + e.what());
    }
}

void save_front(const FrontExport& front, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write front file '" + path.string() + "'");
    out << front_to_json(front).dump(2) << '\n';
}

FrontExport load_front(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open front file '" + path.string() + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return front_from_json(doc);
}

}  // namespace evmoga
