#pragma once

// Read-only HTTP service over a front.
//
//   GET  /front                          front file (JSON)
//   GET  /profiles                       label -> percentile maps and the
//                                        resolved p_g / p_r thresholds
//   POST /filter {"p_g": x, "p_r": y}    ids of the region of interest
//   GET  /representatives?green=&risk=   opt / min_var / min_emi / max_ret
//        (or ?p_g=&p_r= for raw thresholds)
//   GET  /status                         mode and live-run checkpoints
//
// Malformed requests get 400; an empty region of interest gets 409 with
// {"status": "empty_region"}.

#include "evmoga/front_io.hpp"
#include "evmoga/preferences.hpp"

#include <json.hpp>

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace evmoga {

struct ServiceResponse {
    int status = 200;
    nlohmann::json body;
};

class FrontService {
public:
    explicit FrontService(FrontExport front, ProfileConfig profiles = {});
    /// Live mode: runs the engine on a background thread and publishes a new
    /// front snapshot at every checkpoint and at the end of the run.
    FrontService(AssetUniverse universe, RunSettings settings, ProfileConfig profiles = {});
    ~FrontService();

    FrontService(const FrontService&) = delete;
    FrontService& operator=(const FrontService&) = delete;

    ServiceResponse get_front() const;
    ServiceResponse get_profiles() const;
    ServiceResponse post_filter(const std::string& body) const;
    /// Query parameters as received (green, risk, p_g, p_r).
    ServiceResponse get_representatives(const std::map<std::string, std::string>& query) const;
    ServiceResponse get_status() const;

    /// Blocks until a live run has finished (no-op for a static front).
    void wait();

    std::shared_ptr<const FrontExport> snapshot() const;

private:
    void publish(std::shared_ptr<const FrontExport> front);

    ProfileConfig profiles_;
    mutable std::mutex mutex_;
    std::shared_ptr<const FrontExport> front_;
    std::vector<Checkpoint> checkpoints_;
    bool live_ = false;
    std::atomic<bool> running_{false};
    std::string live_error_;
    std::thread worker_;
};

/// Binds the service's routes on an HTTP server running on its own thread.
class HttpFrontServer {
public:
    explicit HttpFrontServer(FrontService& service);
    ~HttpFrontServer();

    HttpFrontServer(const HttpFrontServer&) = delete;
    HttpFrontServer& operator=(const HttpFrontServer&) = delete;

    /// Starts listening; port 0 picks a free port. Returns the bound port.
    int start(const std::string& host, int port);
    void stop();
    /// Blocks in the calling thread until stop() is called elsewhere.
    void listen_blocking(const std::string& host, int port);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace evmoga
