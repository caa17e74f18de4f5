#include "evmoga/kv_config.hpp"

#include <charconv>
#include <cmath>
#include <type_traits>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evmoga {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    T value{};
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc() && ptr == last) return value;
    if constexpr (std::is_integral_v<T>) {
        // Integral values may be written in scientific notation (1e4).
        double d = 0.0;
        auto [dptr, dec] = std::from_chars(first, last, d);
        if (dec == std::errc() && dptr == last && d >= 0.0 && d <= 9.0e15 && std::floor(d) == d)
            return static_cast<T>(d);
    }
    throw std::invalid_argument("config: '" + key + "' has invalid value '" + text + "'");
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        out[key] = value;
    }
    return out;
}

KeyValues load_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

RunSettings apply_run_settings(RunSettings s, const KeyValues& values) {
    auto& c = s.config;
    for (const auto& [key, value] : values) {
        if (key == "nind_p")
            c.nind_p = parse_number<int>(key, value);
        else if (key == "nind_ga")
            c.nind_ga = parse_number<int>(key, value);
        else if (key == "k_max")
            c.k_max = parse_number<long long>(key, value);
        else if (key == "p_cm")
            c.p_cm = parse_number<double>(key, value);
        else if (key == "n_box")
            c.n_box = parse_number<int>(key, value);
        else if (key == "seed")
            c.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "recomb_extension")
            c.recomb_extension = parse_number<double>(key, value);
        else if (key == "mutation_scale")
            c.mutation_scale = parse_number<double>(key, value);
        else if (key == "checkpoint_every")
            c.checkpoint_every = parse_number<long long>(key, value);
        else if (key == "lower_bound")
            s.lower_bound = parse_number<double>(key, value);
        else if (key == "upper_bound")
            s.upper_bound = parse_number<double>(key, value);
        else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return s;
}

KeyValues to_key_values(const RunSettings& s) {
    const auto& c = s.config;
    return {
        {"nind_p", std::to_string(c.nind_p)},
        {"nind_ga", std::to_string(c.nind_ga)},
        {"k_max", std::to_string(c.k_max)},
        {"p_cm", format_double(c.p_cm)},
        {"n_box", std::to_string(c.n_box)},
        {"seed", std::to_string(c.seed)},
        {"recomb_extension", format_double(c.recomb_extension)},
        {"mutation_scale", format_double(c.mutation_scale)},
        {"checkpoint_every", std::to_string(c.checkpoint_every)},
        {"lower_bound", format_double(s.lower_bound)},
        {"upper_bound", format_double(s.upper_bound)},
    };
}

ProfileConfig apply_profile_settings(ProfileConfig base, const KeyValues& values) {
    for (const auto& [key, value] : values) {
        const auto dot = key.find('.');
        const auto group = key.substr(0, dot);
        if (dot == std::string::npos || dot + 1 == key.size() || (group != "green" && group != "risk"))
            throw std::invalid_argument("profiles: unknown key '" + key + "' (expected green.<label> or risk.<label>)");
        const auto label = key.substr(dot + 1);
        (group == "green" ? base.green : base.risk)[label] = parse_number<double>(key, value);
    }
    base.validate();
    return base;
}

}  // namespace evmoga
