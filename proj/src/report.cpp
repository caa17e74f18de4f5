#include "evmoga/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace evmoga {

std::string format_fixed(double value, int decimals) {
    const double unit = std::pow(10.0, -decimals) / 2.0;
    if (std::abs(value) < unit) value = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

namespace {

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string render_table(const std::vector<std::string>& asset_ids, const Representatives& reps,
                         const ProfileSelection& sel, std::size_t region_size, std::size_t front_size) {
    const std::array<std::pair<const ArchiveEntry*, const char*>, 4> rows{{
        {&reps.opt, "opt"},
        {&reps.min_var, "min var"},
        {&reps.min_emi, "min emi"},
        {&reps.max_ret, "max ret"},
    }};

    std::vector<std::size_t> columns;
    for (std::size_t j = 0; j < asset_ids.size(); ++j) {
        const bool used = std::any_of(rows.begin(), rows.end(), [&](const auto& row) {
            return format_fixed(100.0 * row.first->portfolio.weights(static_cast<Eigen::Index>(j)), 1) != "0.0";
        });
        if (used) columns.push_back(j);
    }

    std::vector<std::size_t> widths;
    for (auto j : columns) widths.push_back(std::max<std::size_t>(6, asset_ids[j].size() + 1));
    constexpr std::size_t kObjWidth = 9;

    std::ostringstream os;
    os << "profile: green=" << sel.green_label << " (p_g = " << format_fixed(sel.filter.p_g, 3) << "), risk="
       << sel.risk_label << " (p_r = " << format_fixed(sel.filter.p_r, 3) << ")\n";
    os << "region: " << region_size << " of " << front_size << " entries\n";
    for (std::size_t c = 0; c < columns.size(); ++c) os << pad_left(asset_ids[columns[c]], widths[c]);
    os << pad_left("Risk", kObjWidth) << pad_left("Ret.", kObjWidth) << pad_left("Emiss", kObjWidth) << '\n';
    for (const auto& [entry, label] : rows) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << pad_left(format_fixed(100.0 * entry->portfolio.weights(static_cast<Eigen::Index>(columns[c])), 1),
                           widths[c]);
        os << pad_left(format_fixed(entry->objectives.risk, 3), kObjWidth)
           << pad_left(format_fixed(entry->objectives.ret, 3), kObjWidth)
           << pad_left(format_fixed(entry->objectives.carbon, 3), kObjWidth) << "  " << label << '\n';
    }
    return os.str();
}

std::string render_scatter_csv(const std::vector<ArchiveEntry>& front, const RegionOfInterest& region,
                               const Representatives* reps) {
    std::vector<bool> member(front.size(), false);
    for (auto id : region.ids) member[id] = true;
    std::ostringstream os;
    os.precision(17);
    os << "id,risk,ret,carbon,in_region,role\n";
    for (std::size_t i = 0; i < front.size(); ++i) {
        std::string role;
        if (reps) {
            auto add = [&](std::size_t id, const char* name) {
                if (id != i) return;
                if (!role.empty()) role += '|';
                role += name;
            };
            add(reps->opt_id, "opt");
            add(reps->min_var_id, "min_var");
            add(reps->min_emi_id, "min_emi");
            add(reps->max_ret_id, "max_ret");
        }
        const auto& f = front[i].objectives;
        os << i << ',' << f.risk << ',' << f.ret << ',' << f.carbon << ',' << (member[i] ? 1 : 0) << ',' << role
           << '\n';
    }
    return os.str();
}

nlohmann::json representatives_to_json(const Representatives& reps) {
    return {
        {"opt", entry_to_json(reps.opt, reps.opt_id)},
        {"min_var", entry_to_json(reps.min_var, reps.min_var_id)},
        {"min_emi", entry_to_json(reps.min_emi, reps.min_emi_id)},
        {"max_ret", entry_to_json(reps.max_ret, reps.max_ret_id)},
    };
}

}  // namespace evmoga
