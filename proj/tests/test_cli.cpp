#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmem/cli.hpp"
#include "qmem/io.hpp"

using namespace qmem;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::current_path() / "cli_scratch" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::kUsageError);
    CHECK(run({"bogus"}).code == cli::kUsageError);
    CHECK(run({"spectrum", "--grid", "100"}).code == cli::kUsageError);
    CHECK(run({"spectrum", "--protocol", "read"}).code == cli::kUsageError);
    CHECK(run({"spectrum", "--p", "-2"}).code == cli::kUsageError);
    CHECK(run({"spectrum", "--mu", "1"}).code == cli::kUsageError);
    CHECK(run({"spectrum", "--delay", "1"}).code == cli::kUsageError);
    CHECK(run({"spectrum", "--half-width", "-1"}).code == cli::kUsageError);
    CHECK(run({"spectrum", "--config", "no/such/file.json"}).code == cli::kUsageError);
    const auto fig = run({"figure", "fig9", "--grid", "129", "--out", scratch("fig9").string()});
    CHECK(fig.code == cli::kUsageError);
    CHECK(fig.err.find("unknown figure") != std::string::npos);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("spectrum writes a curve and its resolved configuration") {
    const fs::path dir = scratch("spectrum");
    const auto r = run({"spectrum", "--protocol", "read-successive", "--p", "0", "--grid", "129", "--half-width", "3",
                        "--out", dir.string()});
    REQUIRE(r.code == cli::kOk);
    const std::string csv = slurp(dir / "read-successive.csv");
    CHECK(csv.find('\r') == std::string::npos);
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 2 + 7);
    CHECK(rows[0].rfind("# axis=frequency grain=", 0) == 0);
    CHECK(rows[0].find("units=dimensionless") != std::string::npos);
    CHECK(rows[1] == "index,argument,value");
    CHECK(rows[2].rfind("-3,", 0) == 0);
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(rows[i].substr(rows[i].rfind(',') + 1) == "1");

    const auto j = nlohmann::json::parse(slurp(dir / "read-successive.json"));
    CHECK(j["resolved_config"]["memory"]["n_t"] == 129);
    CHECK(j["resolved_config"]["source"]["p"] == 0.0);
    CHECK(j["headline"]["duan"] == 1.0);
    CHECK(j["flags"]["entangled"] == false);
}

TEST_CASE("numbers carry seventeen significant digits") {
    const fs::path dir = scratch("digits");
    REQUIRE(run({"spectrum", "--protocol", "write", "--grid", "129", "--half-width", "1", "--out", dir.string()}).code ==
            cli::kOk);
    const auto rows = lines(slurp(dir / "write.csv"));
    const std::string value = rows[3].substr(rows[3].rfind(',') + 1);
    CHECK(value == io::format_number(std::stod(value)));
    CHECK(std::stod(value) < 1.0);
    CHECK(io::format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("configuration file with flag override") {
    const fs::path dir = scratch("config");
    io::write_text(dir / "run.json", R"({"memory": {"L": 10, "Tw": 5.5, "grid": 129},
                                        "source": {"p": -0.5, "mu": 0.1},
                                        "protocol": "write", "half_width": 2})");
    const auto r = run({"spectrum", "--config", (dir / "run.json").string(), "--p", "-1", "--out", dir.string()});
    REQUIRE(r.code == cli::kOk);
    const auto j = nlohmann::json::parse(slurp(dir / "write.json"));
    CHECK(j["resolved_config"]["source"]["p"] == -1.0);
    CHECK(j["resolved_config"]["source"]["mu"] == 0.1);
    CHECK(j["resolved_config"]["protocol"] == "write");
    CHECK(j["resolved_config"]["half_width"] == 2);
    io::write_text(dir / "broken.json", "{ not json");
    CHECK(run({"spectrum", "--config", (dir / "broken.json").string()}).code == cli::kUsageError);
}

TEST_CASE("two-pulse records its derivation note") {
    const fs::path dir = scratch("two_pulse");
    REQUIRE(run({"spectrum", "--protocol", "two-pulse", "--grid", "129", "--p2", "-1", "--half-width", "1", "--out",
                 dir.string()})
                .code == cli::kOk);
    const auto j = nlohmann::json::parse(slurp(dir / "two-pulse.json"));
    CHECK(j["notes"][0] == "derived, not from paper");
    CHECK(j["flags"]["entangled"] == true);
}

TEST_CASE("figure and schmidt outputs") {
    const fs::path dir = scratch("figures");
    REQUIRE(run({"figure", "fig2a", "--grid", "129", "--half-width", "2", "--out", dir.string()}).code == cli::kOk);
    CHECK(fs::exists(dir / "fig2a_set1.csv"));
    CHECK(fs::exists(dir / "fig2a_set2.csv"));
    const auto f2 = nlohmann::json::parse(slurp(dir / "fig2a.json"));
    CHECK(f2["curve2_above_curve1_at_zero"].is_boolean());

    REQUIRE(run({"figure", "fig45b", "--grid", "129", "--half-width", "2", "--out", dir.string()}).code == cli::kOk);
    for (const char* f : {"fig45b_set1_simultaneous.csv", "fig45b_set1_successive.csv", "fig45b_set2_simultaneous.csv",
                          "fig45b_set2_successive.csv", "fig45b.json"}) {
        CHECK(fs::exists(dir / f));
    }
    const auto f45 = nlohmann::json::parse(slurp(dir / "fig45b.json"));
    CHECK(f45["readout_less_sensitive"] == true);

    REQUIRE(run({"schmidt", "--grid", "129", "--modes", "4", "--out", dir.string()}).code == cli::kOk);
    const auto table = lines(slurp(dir / "schmidt_table.csv"));
    CHECK(table[1] == "mode,lambda,operator_eigenvalue,zero_frequency_magnitude");
    CHECK(table.size() == 2 + 4);
    CHECK(lines(slurp(dir / "schmidt_temporal_modes.csv"))[1] == "t,mode_1,mode_2,mode_3,mode_4");
    const auto sj = nlohmann::json::parse(slurp(dir / "schmidt.json"));
    CHECK(sj["lambdas"].size() == 4);
    CHECK(sj["orthonormality"]["temporal_diagonal"].get<double>() <= 1e-6);
}

TEST_CASE("kernel export round-trips and feeds the imported-kernel check") {
    const fs::path dir = scratch("kernel");
    REQUIRE(run({"kernel", "--grid", "129", "--out", dir.string()}).code == cli::kOk);
    const io::GridTable cycle = io::read_grid_csv(dir / "cycle_kernel.csv");
    CHECK(cycle.values.rows() == 129);
    CHECK(cycle.values.cols() == 129);
    CHECK(cycle.values == cycle.values.transpose());
    const io::GridTable write = io::read_grid_csv(dir / "write_kernel.csv");
    CHECK(write.row_axis == "z");
    CHECK(write.col_axis == "t");
    CHECK(write.rows.back() == 10.0);

    cli::RunConfig rc;
    rc.memory = kernels::MemoryConfig::make(10.0, 5.5, 129);
    rc.kernel_csv = dir / "cycle_kernel.csv";
    auto find = [](const std::vector<cli::CheckResult>& all, const std::string& name) {
        for (const auto& c : all)
            if (c.name == name) return c;
        FAIL("missing check " << name);
        return cli::CheckResult{};
    };
    CHECK(find(cli::run_validation(rc), "imported kernel symmetry").passed);

    io::GridTable broken = cycle;
    broken.values(3, 70) += 1e-3 * broken.values.cwiseAbs().maxCoeff();
    io::write_grid_csv(dir / "broken.csv", broken);
    rc.kernel_csv = dir / "broken.csv";
    const auto checks = cli::run_validation(rc);
    CHECK_FALSE(find(checks, "imported kernel symmetry").passed);
    CHECK(find(checks, "cycle kernel symmetry").passed);
    CHECK(find(checks, "PDE oracle").passed);
}

TEST_CASE("coarse grids are flagged by validation") {
    const auto r = run({"validate", "--grid", "65"});
    CHECK(r.code == cli::kValidationFailure);
    CHECK(r.out.find("FAIL grid convergence") != std::string::npos);
    CHECK(r.out.find("PASS temporal mode orthonormality") != std::string::npos);
}

TEST_CASE("output is identical across thread counts") {
    std::string first;
    for (const char* threads : {"1", "8"}) {
        setenv("QMEM_THREADS", threads, 1);
        const fs::path dir = scratch(std::string("threads_") + threads);
        REQUIRE(run({"figure", "fig3", "--grid", "257", "--out", dir.string()}).code == cli::kOk);
        const std::string bytes = slurp(dir / "fig3.csv") + slurp(dir / "fig3.json");
        if (first.empty()) {
            first = bytes;
        } else {
            CHECK(bytes == first);
        }
    }
    unsetenv("QMEM_THREADS");
}
