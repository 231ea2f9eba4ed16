#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "riccati/cli.hpp"

namespace fs = std::filesystem;
using riccati::run_cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("riccati_cli_test_" + std::to_string(counter_++) + "_" +
                                             std::to_string(::getpid()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> last_row(const std::string& csv_path) {
    std::ifstream in(csv_path);
    std::string line, last;
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    std::vector<std::string> cells;
    std::stringstream ss(last);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

} // namespace

TEST_CASE("check exit codes") {
    TempDir dir;
    REQUIRE(cli({"catalog", "--name", "tanh", "--out", dir.file("tanh.json")}).code == 0);
    REQUIRE(cli({"catalog", "--name", "blowup", "--out", dir.file("blowup.json")}).code == 0);

    auto r = cli({"check", dir.file("tanh.json"), "--criterion", "theorem3.1"});
    CHECK(r.code == 0);
    auto report = nlohmann::json::parse(r.out);
    CHECK(report["holds"] == true);
    CHECK_FALSE(report["notes"].empty());

    r = cli({"check", dir.file("blowup.json")});
    CHECK(r.code == 1);
    report = nlohmann::json::parse(r.out);
    bool named = false;
    for (const auto& c : report["conditions"])
        if (c["name"] == "III") {
            named = true;
            CHECK(c["passed"] == false);
            CHECK(c["worst_value"].get<double>() == doctest::Approx(-2.0));
        }
    CHECK(named);

    std::ofstream(dir.file("zero.json")) << R"({"n": 0, "t0": 0, "t_end": 1})";
    r = cli({"check", dir.file("zero.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("n") != std::string::npos);

    std::ofstream(dir.file("broken.json")) << "{ not json";
    CHECK(cli({"check", dir.file("broken.json")}).code == 2);
    CHECK(cli({"check", dir.file("absent.json")}).code == 2);
    CHECK(cli({"check", dir.file("tanh.json"), "--criterion", "bogus"}).code == 2);
    CHECK(cli({"check", dir.file("tanh.json"), "--grid", "1"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({}).code == 2);
}

TEST_CASE("check other criteria") {
    TempDir dir;
    REQUIRE(cli({"catalog", "--name", "care_constant", "--out", dir.file("c.json")}).code == 0);
    CHECK(cli({"check", dir.file("c.json"), "--criterion", "theorem1.1"}).code == 0);
    CHECK(cli({"check", dir.file("c.json"), "--criterion", "cor3.1"}).code == 0);
    CHECK(cli({"check", dir.file("c.json"), "--criterion", "cor3.2"}).code == 0);

    REQUIRE(cli({"catalog", "--name", "linear", "--out", dir.file("l.json")}).code == 0);
    // P = 0 is not positive definite, so the corollary does not apply.
    const auto r = cli({"check", dir.file("l.json"), "--criterion", "cor3.1"});
    CHECK(r.code == 1);
    CHECK(nlohmann::json::parse(r.out)["holds"] == false);
}

TEST_CASE("integrate writes CSV and sidecar") {
    TempDir dir;
    REQUIRE(cli({"catalog", "--name", "tanh", "--out", dir.file("tanh.json")}).code == 0);
    auto r = cli({"integrate", dir.file("tanh.json"), "--method", "direct", "--samples", "101", "--out",
                  dir.file("tanh.csv")});
    CHECK(r.code == 0);
    const auto row = last_row(dir.file("tanh.csv"));
    REQUIRE(row.size() >= 3);
    CHECK(std::stod(row[0]) == 1.0);
    CHECK(std::stod(row[1]) == doctest::Approx(0.761594).epsilon(1e-6));
    CHECK(slurp(dir.file("tanh.csv")).rfind("t,y_0_0_re,y_0_0_im,lambda_min_gap,residual\n", 0) == 0);
    CHECK(nlohmann::json::parse(slurp(dir.file("tanh.csv.json")))["status"] == "completed");

    r = cli({"integrate", dir.file("tanh.json"), "--method", "both", "--out", dir.file("both.csv")});
    CHECK(r.code == 0);
    const auto pos = r.out.find("max_discrepancy ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 16)) <= 1e-6);

    r = cli({"integrate", dir.file("tanh.json"), "--method", "radon", "--out", dir.file("radon.csv")});
    CHECK(r.code == 0);
    CHECK(slurp(dir.file("radon.csv")).find("det_phi_abs") != std::string::npos);

    r = cli({"integrate", dir.file("tanh.json"), "--method", "lyapunov", "--out", dir.file("lyap.csv")});
    CHECK(r.code == 0);

    CHECK(cli({"integrate", dir.file("tanh.json"), "--method", "euler"}).code == 2);
    CHECK(cli({"integrate", dir.file("tanh.json"), "--rtol", "-1"}).code == 2);
}

TEST_CASE("integrate reports blow-up as a result") {
    TempDir dir;
    REQUIRE(cli({"catalog", "--name", "blowup", "--out", dir.file("b.json")}).code == 0);
    const auto r = cli({"integrate", dir.file("b.json"), "--out", dir.file("b.csv")});
    CHECK(r.code == 0);
    const auto side = nlohmann::json::parse(slurp(dir.file("b.csv.json")));
    CHECK(side["status"] == "blow_up");
    CHECK(side["t_escape"].get<double>() == doctest::Approx(1.5708).epsilon(1e-3));
}

TEST_CASE("verify") {
    TempDir dir;
    REQUIRE(cli({"catalog", "--name", "tanh", "--out", dir.file("tanh.json")}).code == 0);
    REQUIRE(cli({"integrate", dir.file("tanh.json"), "--out", dir.file("tanh.csv")}).code == 0);
    auto r = cli({"verify", dir.file("tanh.json"), dir.file("tanh.csv")});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["min_gap"].get<double>() == doctest::Approx(0.0));
    CHECK(j["time_of_min"].get<double>() == 0.0);

    // -tan on [0, 1]
    {
        std::ofstream csv(dir.file("tan.csv"));
        csv << "t,y_0_0_re,y_0_0_im\n";
        for (int k = 0; k <= 100; ++k) csv << k / 100.0 << ',' << -std::tan(k / 100.0) << ",0\n";
    }
    CHECK(cli({"verify", dir.file("tanh.json"), dir.file("tan.csv")}).code == 1);

    {
        std::ofstream csv(dir.file("two.csv"));
        csv << "t,y_0_0_re,y_0_0_im\n0,0,0\n0.5,0.46,0\n";
    }
    r = cli({"verify", dir.file("tanh.json"), dir.file("two.csv")});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(nlohmann::json::parse(r.out)["max_residual"].is_null());

    REQUIRE(cli({"catalog", "--name", "linear", "--out", dir.file("linear.json")}).code == 0);
    CHECK(cli({"verify", dir.file("linear.json"), dir.file("tanh.csv")}).code == 2);

    {
        std::ofstream csv(dir.file("junk.csv"));
        csv << "t,y_0_0_re,y_0_0_im\n0,abc,0\n";
    }
    CHECK(cli({"verify", dir.file("tanh.json"), dir.file("junk.csv")}).code == 2);
}

TEST_CASE("gen") {
    TempDir dir;
    auto r = cli({"gen", "--target", "satisfying", "--n", "3", "--seed", "7", "--out", dir.file("a.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("holds") != std::string::npos);
    CHECK(cli({"check", dir.file("a.json"), "--criterion", "theorem3.1"}).code == 0);
    REQUIRE(cli({"gen", "--target", "satisfying", "--n", "3", "--seed", "7", "--out", dir.file("b.json")}).code == 0);
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));

    r = cli({"gen", "--target", "blowup", "--n", "1", "--seed", "0", "--out", dir.file("c.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("fails") != std::string::npos);
    r = cli({"check", dir.file("c.json")});
    CHECK(r.code == 1);
    for (const auto& c : nlohmann::json::parse(r.out)["conditions"])
        if (c["name"] == "III") CHECK(c["passed"] == false);

    CHECK(cli({"gen", "--target", "nope", "--out", dir.file("d.json")}).code == 2);
    CHECK(cli({"gen", "--out", dir.file("missing_dir/x.json")}).code == 2);
    CHECK(cli({"gen", "--n", "0", "--out", dir.file("e.json")}).code == 2);
}

TEST_CASE("round trip for satisfying instances") {
    TempDir dir;
    for (int n = 1; n <= 4; ++n) {
        const std::string inst = dir.file("s" + std::to_string(n) + ".json");
        const std::string csv = dir.file("s" + std::to_string(n) + ".csv");
        REQUIRE(cli({"gen", "--target", "satisfying", "--n", std::to_string(n), "--seed", "3", "--out", inst}).code == 0);
        CHECK(cli({"check", inst}).code == 0);
        CHECK(cli({"integrate", inst, "--out", csv}).code == 0);
        CHECK(cli({"verify", inst, csv}).code == 0);
    }
}

TEST_CASE("catalog listing") {
    const auto r = cli({"catalog"});
    CHECK(r.code == 0);
    for (const char* name : {"tanh", "blowup", "cosh_sinh", "linear", "care_constant"})
        CHECK(r.out.find(name) != std::string::npos);
    CHECK(cli({"catalog", "--name", "nope"}).code == 2);
}
