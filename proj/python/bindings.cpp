#include "evmoga/commands.hpp"
#include "evmoga/engine.hpp"
#include "evmoga/front_io.hpp"
#include "evmoga/hypervolume.hpp"
#include "evmoga/market_data.hpp"
#include "evmoga/preferences.hpp"
#include "evmoga/report.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace evmoga;

namespace {

py::dict objectives_dict(const ObjectiveVector& f) {
    py::dict d;
    d["risk"] = f.risk;
    d["ret"] = f.ret;
    d["carbon"] = f.carbon;
    return d;
}

// Weights as an (entries x assets) matrix, objectives as (entries x 3).
Eigen::MatrixXd front_weights(const FrontExport& f) {
    Eigen::MatrixXd w(static_cast<Eigen::Index>(f.entries.size()), static_cast<Eigen::Index>(f.asset_ids.size()));
    for (std::size_t i = 0; i < f.entries.size(); ++i) w.row(static_cast<Eigen::Index>(i)) = f.entries[i].portfolio.weights;
    return w;
}

Eigen::MatrixXd front_objectives(const FrontExport& f) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(f.entries.size()), 3);
    for (std::size_t i = 0; i < f.entries.size(); ++i) {
        const auto& o = f.entries[i].objectives;
        m.row(static_cast<Eigen::Index>(i)) << o.risk, o.ret, o.carbon;
    }
    return m;
}

RunSettings settings_from(const py::dict& config) {
    KeyValues kv;
    for (const auto& [k, v] : config) kv[py::str(k)] = py::str(v);
    return apply_run_settings({}, kv);
}

ProfileConfig profiles_from(const std::optional<std::map<std::string, double>>& green,
                            const std::optional<std::map<std::string, double>>& risk) {
    ProfileConfig p;
    if (green) p.green = *green;
    if (risk) p.risk = *risk;
    p.validate();
    return p;
}

py::dict representatives_dict(const FrontExport& front, const PreferenceFilter& filter) {
    const auto region = filter_region(front.entries, filter);
    if (region.empty()) throw py::value_error("empty region of interest: aspirations infeasible on this front");
    return py::module_::import("json").attr("loads")(representatives_to_json(representatives(region)).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ev-MOGA portfolio optimization core";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    py::class_<AssetUniverse>(m, "Instance")
        .def(py::init([](std::vector<std::string> ids, Eigen::VectorXd mu, Eigen::MatrixXd sigma, Eigen::VectorXd carbon) {
                 AssetUniverse u{std::move(ids), std::move(mu), std::move(sigma), std::move(carbon), {}};
                 u.validate();
                 return u;
             }),
             py::arg("asset_ids"), py::arg("mu"), py::arg("sigma"), py::arg("carbon"))
        .def_readonly("asset_ids", &AssetUniverse::asset_ids)
        .def_readonly("mu", &AssetUniverse::mu)
        .def_readonly("sigma", &AssetUniverse::sigma)
        .def_readonly("carbon", &AssetUniverse::carbon)
        .def_property_readonly("digest", [](const AssetUniverse& u) { return instance_digest(u); })
        .def("__len__", &AssetUniverse::size)
        .def("save", [](const AssetUniverse& u, const std::filesystem::path& p) { save_instance(u, p); });

    m.def(
        "estimate_moments",
        [](std::vector<std::string> ids, const Eigen::MatrixXd& returns, const Eigen::VectorXd& carbon) {
            return estimate_moments(ReturnsMatrix{std::move(ids), returns, "monthly"}, carbon);
        },
        py::arg("asset_ids"), py::arg("returns"), py::arg("carbon"),
        "Sample mean and covariance (divisor T - 1) of a T x N return panel.");
    m.def(
        "ingest",
        [](const std::filesystem::path& returns_csv, const std::filesystem::path& carbon_csv) {
            const auto r = load_returns(returns_csv);
            return estimate_moments(r, align_carbon(r.asset_ids, load_carbon_scores(carbon_csv)));
        },
        py::arg("returns_csv"), py::arg("carbon_csv"));
    m.def("load_instance", &load_instance, py::arg("path"));

    m.def(
        "evaluate",
        [](const AssetUniverse& u, const Eigen::VectorXd& w) { return objectives_dict(evaluate(Portfolio{w}, u)); },
        py::arg("instance"), py::arg("weights"));
    m.def(
        "repair",
        [](const Eigen::VectorXd& w, double lower, double upper) {
            return repair(w, Bounds::uniform(w.size(), lower, upper)).weights;
        },
        py::arg("weights"), py::arg("lower") = 0.0, py::arg("upper") = 1.0);
    m.def(
        "hypervolume",
        [](const Eigen::MatrixXd& points, const Eigen::Vector3d& ref) {
            if (points.size() > 0 && points.cols() != 3) throw py::value_error("points must be an (n, 3) array");
            std::vector<Vec3> pts;
            for (Eigen::Index i = 0; i < points.rows(); ++i) pts.push_back({points(i, 0), points(i, 1), points(i, 2)});
            return hypervolume(pts, {ref(0), ref(1), ref(2)});
        },
        py::arg("points"), py::arg("reference"), "Hypervolume of minimized 3-D points.");
    m.def("percentile", &percentile, py::arg("values"), py::arg("q"));

    py::class_<FrontExport>(m, "Front")
        .def_readonly("asset_ids", &FrontExport::asset_ids)
        .def_readonly("instance_ref", &FrontExport::instance_ref)
        .def("__len__", [](const FrontExport& f) { return f.entries.size(); })
        .def_property_readonly("weights", &front_weights)
        .def_property_readonly("objectives", &front_objectives, "Columns: risk, ret, carbon.")
        .def_property_readonly("grid",
                               [](const FrontExport& f) {
                                   py::dict d;
                                   d["f_min"] = f.grid.f_min;
                                   d["f_max"] = f.grid.f_max;
                                   d["eps"] = f.grid.eps;
                                   d["n_box"] = f.grid.n_box;
                                   return d;
                               })
        .def("to_json", [](const FrontExport& f) { return front_to_json(f).dump(); })
        .def("save", [](const FrontExport& f, const std::filesystem::path& p) { save_front(f, p); });

    m.def("load_front", &load_front, py::arg("path"));

    m.def(
        "optimize",
        [](const AssetUniverse& u, const py::dict& config) {
            const auto settings = settings_from(config);
            RunResult result{EpsArchive(1), 0, 0, {}, 0.0};
            {
                py::gil_scoped_release release;
                result = run(u, settings.bounds(u.size()), settings.config);
            }
            return FrontExport::from_run(result, u, settings);
        },
        py::arg("instance"), py::arg("config") = py::dict(),
        "Runs ev-MOGA. `config` takes the configuration-file keys (nind_p, nind_ga, k_max, p_cm, n_box, seed, ...).");

    m.def(
        "resolve_profile",
        [](const FrontExport& f, const std::string& green, const std::string& risk,
           const std::optional<std::map<std::string, double>>& green_map,
           const std::optional<std::map<std::string, double>>& risk_map) {
            if (f.entries.empty()) throw py::value_error("front has no entries");
            const auto p = resolve_profile(f.entries, profiles_from(green_map, risk_map), green, risk);
            return std::make_pair(p.p_g, p.p_r);
        },
        py::arg("front"), py::arg("green"), py::arg("risk"), py::arg("green_percentiles") = py::none(),
        py::arg("risk_percentiles") = py::none(), "Returns (p_g, p_r) for a pair of profile labels.");
    m.def(
        "filter",
        [](const FrontExport& f, double p_g, double p_r) { return filter_region(f.entries, {p_g, p_r}).ids; },
        py::arg("front"), py::arg("p_g"), py::arg("p_r"), "Ids of the entries with carbon <= p_g and risk <= p_r.");
    m.def(
        "representatives", [](const FrontExport& f, double p_g, double p_r) { return representatives_dict(f, {p_g, p_r}); },
        py::arg("front"), py::arg("p_g"), py::arg("p_r"));
    m.def(
        "report",
        [](const FrontExport& f, const std::string& green, const std::string& risk) {
            if (f.entries.empty()) throw py::value_error("front has no entries");
            ProfileSelection sel{green, risk, resolve_profile(f.entries, ProfileConfig{}, green, risk)};
            const auto region = filter_region(f.entries, sel.filter);
            if (region.empty()) throw py::value_error("empty region of interest: aspirations infeasible on this front");
            return render_table(f.asset_ids, representatives(region), sel, region.entries.size(), f.entries.size());
        },
        py::arg("front"), py::arg("green"), py::arg("risk"), "Composition table for a pair of profile labels.");
}
