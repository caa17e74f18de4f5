#include "evmoga/commands.hpp"

#include "support/golden_front.hpp"
#include "support/tempdir.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace evmoga;

namespace {

const std::filesystem::path kDataDir = std::filesystem::path(EVMOGA_TEST_DATA_DIR) / "data";
const std::filesystem::path kGoldenDir = std::filesystem::path(EVMOGA_TEST_DATA_DIR) / "golden";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("ingest, optimize, filter and report end to end") {
    evmoga::testing::TempDir dir;
    std::ostringstream out;
    std::ostringstream err;

    IngestOptions ingest;
    ingest.returns_csv = kDataDir / "returns_small.csv";
    ingest.carbon_csv = kDataDir / "carbon_small.csv";
    ingest.out_instance = dir / "instance.json";
    REQUIRE(cmd_ingest(ingest, out, err) == kExitOk);
    const auto u = load_instance(ingest.out_instance);
    CHECK(u.size() == 6);
    CHECK(u.carbon(3) == 1.5);

    OptimizeOptions opt;
    opt.instance = ingest.out_instance;
    opt.out_front = dir / "front.json";
    opt.settings = apply_run_settings({}, load_key_values(std::filesystem::path(EVMOGA_TEST_DATA_DIR) / ".." / "config" / "quick.cfg"));
    opt.settings.config.k_max = 50;
    opt.quiet = true;
    REQUIRE(cmd_optimize(opt, out, err) == kExitOk);
    CHECK(out.str().find("anchor min risk") != std::string::npos);
    const auto front = load_front(opt.out_front);
    CHECK_NOTHROW(front.check_instance(u));
    CHECK(front.run->config.at("k_max") == "50");

    SelectionOptions sel;
    sel.front = opt.out_front;
    sel.green_label = "strong";
    sel.risk_label = "aggressive";
    std::ostringstream fout;
    REQUIRE(cmd_filter(sel, fout, err) == kExitOk);
    const auto doc = nlohmann::json::parse(fout.str());
    CHECK(doc["status"] == "ok");
    CHECK(doc["ids"].size() > 0);

    ReportOptions rep;
    rep.selection = sel;
    rep.out_table = dir / "table.txt";
    rep.out_scatter = dir / "scatter.csv";
    rep.out_json = dir / "reps.json";
    REQUIRE(cmd_report(rep, out, err) == kExitOk);
    CHECK(slurp(rep.out_table).find("  opt\n") != std::string::npos);
    const auto scatter = slurp(rep.out_scatter);
    CHECK(scatter.rfind("id,risk,ret,carbon,in_region,role\n", 0) == 0);
    CHECK(scatter.find("opt") != std::string::npos);
    const auto reps = nlohmann::json::parse(slurp(rep.out_json));
    CHECK(reps.contains("min_var"));
}

TEST_CASE("an empty region is reported with its own exit code") {
    evmoga::testing::TempDir dir;
    save_front(evmoga::testing::golden_front(), dir / "front.json");
    SelectionOptions sel;
    sel.front = dir / "front.json";
    sel.p_g = 0.0;
    sel.p_r = 100.0;
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cmd_filter(sel, out, err) == kExitEmptyRegion);
    CHECK(nlohmann::json::parse(out.str())["status"] == "empty_region");
    CHECK(err.str().find("infeasible") != std::string::npos);

    ReportOptions rep;
    rep.selection = sel;
    CHECK(cmd_report(rep, out, err) == kExitEmptyRegion);
}

TEST_CASE("bad inputs fail with exit code 1") {
    evmoga::testing::TempDir dir;
    std::ostringstream out;
    std::ostringstream err;

    IngestOptions ingest;
    ingest.returns_csv = kDataDir / "returns_small.csv";
    ingest.carbon_csv = kDataDir / "missing.csv";
    ingest.out_instance = dir / "instance.json";
    CHECK(cmd_ingest(ingest, out, err) == kExitFailure);

    SelectionOptions sel;
    sel.front = dir / "none.json";
    sel.green_label = "weak";
    sel.risk_label = "cautious";
    CHECK(cmd_filter(sel, out, err) == kExitFailure);

    save_front(evmoga::testing::golden_front(), dir / "front.json");
    sel.front = dir / "front.json";
    sel.p_g = 3.0;
    CHECK(cmd_filter(sel, out, err) == kExitFailure);
    sel.p_g.reset();
    sel.green_label = "unheard-of";
    CHECK(cmd_filter(sel, out, err) == kExitFailure);
}

TEST_CASE("report table matches the golden file") {
    evmoga::testing::TempDir dir;
    save_front(evmoga::testing::golden_front(), dir / "front.json");
    ReportOptions rep;
    rep.selection.front = dir / "front.json";
    rep.selection.green_label = "moderate";
    rep.selection.risk_label = "cautious";
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(cmd_report(rep, out, err) == kExitOk);
    CHECK(out.str() == slurp(kGoldenDir / "report_moderate_cautious.txt"));
}

TEST_CASE("format_fixed never prints negative zero") {
    CHECK(format_fixed(-0.00004, 3) == "0.000");
    CHECK(format_fixed(-0.0, 1) == "0.0");
    CHECK(format_fixed(12.3456, 3) == "12.346");
    CHECK(format_fixed(-1.25, 1) == "-1.2");
}
