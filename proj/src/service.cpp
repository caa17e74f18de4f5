#include "evmoga/service.hpp"

#include "evmoga/engine.hpp"
#include "evmoga/report.hpp"

#include <httplib.h>

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace evmoga {

namespace {

ServiceResponse bad_request(const std::string& message) {
    return {400, {{"status", "error"}, {"message", message}}};
}

ServiceResponse empty_region(const PreferenceFilter& f) {
    return {409,
            {{"status", "empty_region"},
             {"message", "aspirations infeasible on this front"},
             {"p_g", f.p_g},
             {"p_r", f.p_r},
             {"ids", nlohmann::json::array()}}};
}

std::optional<double> parse_finite(const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

FrontService::FrontService(FrontExport front, ProfileConfig profiles)
    : profiles_(std::move(profiles)), front_(std::make_shared<const FrontExport>(std::move(front))) {
    profiles_.validate();
}

FrontService::FrontService(AssetUniverse universe, RunSettings settings, ProfileConfig profiles)
    : profiles_(std::move(profiles)), live_(true) {
    profiles_.validate();
    settings.config.validate();
    auto empty = FrontExport::from_archive(EpsArchive(settings.config.n_box), universe);
    front_ = std::make_shared<const FrontExport>(std::move(empty));
    if (settings.config.checkpoint_every == 0)
        settings.config.checkpoint_every = std::max<long long>(1, settings.config.k_max / 20);
    running_ = true;
    worker_ = std::thread([this, universe = std::move(universe), settings]() {
        try {
            auto sink = [&](const Checkpoint& cp, const EpsArchive& archive) {
                auto snap = std::make_shared<FrontExport>(FrontExport::from_archive(archive, universe));
                std::lock_guard lock(mutex_);
                checkpoints_.push_back(cp);
                front_ = std::move(snap);
            };
            const auto result = run(universe, settings.bounds(universe.size()), settings.config, sink);
            publish(std::make_shared<const FrontExport>(FrontExport::from_run(result, universe, settings)));
        } catch (const std::exception& e) {
            std::lock_guard lock(mutex_);
            live_error_ = e.what();
        }
        running_ = false;
    });
}

FrontService::~FrontService() { wait(); }

void FrontService::wait() {
    if (worker_.joinable()) worker_.join();
}

void FrontService::publish(std::shared_ptr<const FrontExport> front) {
    std::lock_guard lock(mutex_);
    front_ = std::move(front);
}

std::shared_ptr<const FrontExport> FrontService::snapshot() const {
    std::lock_guard lock(mutex_);
    return front_;
}

ServiceResponse FrontService::get_front() const { return {200, front_to_json(*snapshot())}; }

ServiceResponse FrontService::get_profiles() const {
    const auto front = snapshot();
    nlohmann::json body = {{"green", profiles_.green}, {"risk", profiles_.risk}};
    if (front->entries.empty()) {
        body["resolved"] = nullptr;
        return {200, body};
    }
    nlohmann::json pg = nlohmann::json::object();
    nlohmann::json pr = nlohmann::json::object();
    std::vector<double> carbon;
    std::vector<double> risk;
    for (const auto& e : front->entries) {
        carbon.push_back(e.objectives.carbon);
        risk.push_back(e.objectives.risk);
    }
    for (const auto& [label, q] : profiles_.green) pg[label] = percentile(carbon, q);
    for (const auto& [label, q] : profiles_.risk) pr[label] = percentile(risk, q);
    body["resolved"] = {{"p_g", pg}, {"p_r", pr}};
    return {200, body};
}

ServiceResponse FrontService::post_filter(const std::string& body) const {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception&) {
        return bad_request("body is not valid JSON");
    }
    if (!doc.is_object() || !doc.contains("p_g") || !doc.contains("p_r") || !doc["p_g"].is_number() ||
        !doc["p_r"].is_number())
        return bad_request("expected {\"p_g\": number, \"p_r\": number}");
    const PreferenceFilter filter{doc["p_g"].get<double>(), doc["p_r"].get<double>()};
    if (!std::isfinite(filter.p_g) || !std::isfinite(filter.p_r)) return bad_request("thresholds must be finite");
    const auto front = snapshot();
    const auto region = filter_region(front->entries, filter);
    if (region.empty()) return empty_region(filter);
    return {200, {{"status", "ok"}, {"p_g", filter.p_g}, {"p_r", filter.p_r}, {"ids", region.ids}}};
}

ServiceResponse FrontService::get_representatives(const std::map<std::string, std::string>& query) const {
    const auto front = snapshot();
    PreferenceFilter filter;
    nlohmann::json profile;
    const bool labels = query.count("green") || query.count("risk");
    const bool raw = query.count("p_g") || query.count("p_r");
    if (labels == raw) return bad_request("pass either green & risk labels or p_g & p_r thresholds");
    if (front->entries.empty()) return empty_region(filter);
    if (labels) {
        if (!query.count("green") || !query.count("risk")) return bad_request("both green and risk are required");
        const auto& green = query.at("green");
        const auto& risk = query.at("risk");
        if (!profiles_.green.count(green)) return bad_request("unknown green profile '" + green + "'");
        if (!profiles_.risk.count(risk)) return bad_request("unknown risk profile '" + risk + "'");
        filter = resolve_profile(front->entries, profiles_, green, risk);
        profile = {{"green", green}, {"risk", risk}};
    } else {
        if (!query.count("p_g") || !query.count("p_r")) return bad_request("both p_g and p_r are required");
        const auto pg = parse_finite(query.at("p_g"));
        const auto pr = parse_finite(query.at("p_r"));
        if (!pg || !pr) return bad_request("p_g and p_r must be finite numbers");
        filter = {*pg, *pr};
        profile = {{"green", "custom"}, {"risk", "custom"}};
    }
    const auto region = filter_region(front->entries, filter);
    if (region.empty()) return empty_region(filter);
    auto body = representatives_to_json(representatives(region));
    body["status"] = "ok";
    body["profile"] = profile;
    body["p_g"] = filter.p_g;
    body["p_r"] = filter.p_r;
    body["region_size"] = region.ids.size();
    return {200, body};
}

ServiceResponse FrontService::get_status() const {
    std::lock_guard lock(mutex_);
    auto cps = nlohmann::json::array();
    for (const auto& cp : checkpoints_) cps.push_back(checkpoint_to_json(cp));
    nlohmann::json body = {{"mode", live_ ? "live" : "static"},
                           {"running", running_.load()},
                           {"entries", front_->entries.size()},
                           {"checkpoints", cps}};
    if (!live_error_.empty()) body["error"] = live_error_;
    return {200, body};
}

struct HttpFrontServer::Impl {
    FrontService& service;
    httplib::Server server;
    std::thread thread;

    explicit Impl(FrontService& s) : service(s) {
        auto send = [](httplib::Response& res, const ServiceResponse& r) {
            res.status = r.status;
            res.set_header("Access-Control-Allow-Origin", "*");
            res.set_content(r.body.dump(), "application/json");
        };
        server.Get("/front", [this, send](const httplib::Request&, httplib::Response& res) {
            send(res, service.get_front());
        });
        server.Get("/profiles", [this, send](const httplib::Request&, httplib::Response& res) {
            send(res, service.get_profiles());
        });
        server.Post("/filter", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, service.post_filter(req.body));
        });
        server.Get("/representatives", [this, send](const httplib::Request& req, httplib::Response& res) {
            std::map<std::string, std::string> query;
            for (const auto& [k, v] : req.params) query[k] = v;
            send(res, service.get_representatives(query));
        });
        server.Get("/status", [this, send](const httplib::Request&, httplib::Response& res) {
            send(res, service.get_status());
        });
    }
};

HttpFrontServer::HttpFrontServer(FrontService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpFrontServer::~HttpFrontServer() { stop(); }

int HttpFrontServer::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) throw std::runtime_error("serve: cannot bind " + host + ":" + std::to_string(port));
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void HttpFrontServer::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpFrontServer::listen_blocking(const std::string& host, int port) {
    if (!impl_->server.listen(host, port))
        throw std::runtime_error("serve: cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace evmoga
