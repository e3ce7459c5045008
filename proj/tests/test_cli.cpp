#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"
#include "weylcap/bounds.hpp"

using testsupport::CliResult;
using testsupport::run_cli;
using testsupport::split;

namespace {

const std::string kHeader =
    "seed,d,chi_lb,chi_ub,chi_opt,coincide,dset_achievable,argmin_n,argmin_m,"
    "lb_runtime_seconds";

}  // namespace

TEST_CASE("cli binary is reachable") {
    REQUIRE_FALSE(testsupport::cli_path().empty());
    CHECK(run_cli("--help").status == 0);
}

TEST_CASE("bounds subcommand") {
    SUBCASE("depolarizing channel by kind") {
        const CliResult r = run_cli(R"(bounds '{"d":3,"kind":"depolarizing","mu":0.4}')");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("coincide").get<bool>());
        CHECK(j.at("exact_capacity").get<double>() ==
              doctest::Approx(weylcap::depolarizing_holevo_capacity(3, 0.4)).epsilon(1e-12));
    }
    SUBCASE("noiseless qubit") {
        const CliResult r = run_cli(R"(bounds '{"d":2,"p":[1,0,0,0]}')");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("chi_lb").get<double>() == doctest::Approx(1.0));
        CHECK(j.at("chi_ub").get<double>() == doctest::Approx(1.0));
    }
    SUBCASE("skewed qubit upper bound") {
        const CliResult r = run_cli(R"(bounds '{"d":2,"p":[0.5,0.3,0.15,0.05]}')");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        const double expect = 1.0 + 0.8 * std::log2(0.8) + 0.2 * std::log2(0.2);
        CHECK(j.at("chi_ub").get<double>() == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("--oracle adds a sandwiched chi_opt") {
        const CliResult r =
            run_cli(R"(bounds --oracle --seed 5 '{"d":2,"p":[0.6,0.2,0.1,0.1]}')");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        REQUIRE(j.contains("chi_opt"));
        const double lb = j.at("chi_lb").get<double>();
        const double ub = j.at("chi_ub").get<double>();
        const double opt = j.at("chi_opt").get<double>();
        CHECK(opt >= lb - 1e-9);
        CHECK(opt <= ub + 1e-9);
    }
    SUBCASE("channel JSON arrives on stdin when no argument is given") {
        namespace fs = std::filesystem;
        const fs::path tmp = fs::temp_directory_path() / "weylcap_cli_stdin.json";
        {
            std::ofstream f(tmp);
            f << R"({"d":2,"p":[1,0,0,0]})";
        }
        const CliResult r = run_cli("bounds < " + tmp.string());
        fs::remove(tmp);
        REQUIRE(r.status == 0);
        CHECK(nlohmann::json::parse(r.out).at("chi_lb").get<double>() == doctest::Approx(1.0));
    }
    SUBCASE("exit codes") {
        CHECK(run_cli("bounds '{'").status == 2);
        CHECK(run_cli(R"(bounds '{"d":2,"p":[1,0,0]}')").status == 2);
        CHECK(run_cli("bounds < /dev/null").status == 2);
        CHECK(run_cli(R"(bounds '{"d":2,"p":[0.9,0.3,0,0]}')").status == 3);
        CHECK(run_cli(R"(bounds '{"d":2,"kind":"depolarizing","mu":1.5}')").status == 3);
        CHECK(run_cli(R"(bounds --out /nonexistent-dir/x.json '{"d":2,"p":[1,0,0,0]}')").status ==
              4);
    }
}

TEST_CASE("sweep subcommand") {
    SUBCASE("qubit sweep coincides on every row") {
        const CliResult r = run_cli("sweep --d 2 --count 50 --seed 0 --no-timing");
        REQUIRE(r.status == 0);
        const std::vector<std::string> lines = split(r.out, "\r\n");
        REQUIRE(lines.size() == 51);
        CHECK(lines[0] == kHeader);
        double prev_ub = 2.0;
        for (size_t k = 1; k < lines.size(); ++k) {
            const std::vector<std::string> f = split(lines[k], ",");
            REQUIRE(f.size() == 10);
            CHECK(f[1] == "2");
            CHECK(f[5] == "true");
            CHECK(f[4].empty());
            const double ub = std::stod(f[3]);
            REQUIRE(ub <= prev_ub + 1e-15);
            prev_ub = ub;
            const unsigned long long seed = std::stoull(f[0]);
            REQUIRE(seed < 50);
        }
    }
    SUBCASE("byte-identical reruns with --no-timing") {
        const std::string cmd = "sweep --d 3 --count 40 --seed 7 --no-timing";
        const CliResult a = run_cli(cmd);
        const CliResult b = run_cli(cmd);
        REQUIRE(a.status == 0);
        REQUIRE(b.status == 0);
        CHECK(a.out == b.out);
        // every advertised seed appears exactly once
        const std::vector<std::string> lines = split(a.out, "\r\n");
        REQUIRE(lines.size() == 41);
        std::vector<int> seen(47, 0);
        for (size_t k = 1; k < lines.size(); ++k) ++seen[std::stoul(split(lines[k], ",")[0])];
        for (int s = 7; s < 47; ++s) CHECK(seen[s] == 1);
    }
    SUBCASE("--normalize lands the columns in [0, 1]") {
        const CliResult r = run_cli("sweep --d 5 --count 10 --seed 3 --normalize --no-timing");
        REQUIRE(r.status == 0);
        const std::vector<std::string> lines = split(r.out, "\r\n");
        for (size_t k = 1; k < lines.size(); ++k) {
            const std::vector<std::string> f = split(lines[k], ",");
            CHECK(std::stod(f[2]) >= -1e-12);
            CHECK(std::stod(f[3]) <= 1.0 + 1e-12);
        }
    }
    SUBCASE("--oracle fills chi_opt between the bounds") {
        const CliResult r = run_cli("sweep --d 3 --count 5 --seed 11 --oracle --no-timing");
        REQUIRE(r.status == 0);
        const std::vector<std::string> lines = split(r.out, "\r\n");
        REQUIRE(lines.size() == 6);
        for (size_t k = 1; k < lines.size(); ++k) {
            const std::vector<std::string> f = split(lines[k], ",");
            REQUIRE_FALSE(f[4].empty());
            const double lb = std::stod(f[2]);
            const double ub = std::stod(f[3]);
            const double opt = std::stod(f[4]);
            CHECK(opt >= lb - 1e-6);
            CHECK(opt <= ub + 1e-6);
        }
    }
    SUBCASE("bad requests") {
        CHECK(run_cli("sweep --count 5").status == 2);       // missing --d
        CHECK(run_cli("sweep --d 3 --count 0").status == 3);
    }
}

TEST_CASE("special subcommand") {
    SUBCASE("noiseless depolarizing limit") {
        const CliResult r = run_cli("special --kind depolarizing --d 3 --mu 0");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("analytic_capacity").get<double>() ==
              doctest::Approx(std::log2(3.0)).epsilon(1e-12));
        CHECK(j.at("abs_diff_lb").get<double>() <= 1e-9);
        CHECK(j.at("abs_diff_ub").get<double>() <= 1e-9);
        CHECK(j.at("coincide").get<bool>());
    }
    SUBCASE("one-parameter family matches its closed form") {
        const CliResult r = run_cli("special --kind depol-like-1 --d 3 --xi 0.3 --n 1 --m 2");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("abs_diff_lb").get<double>() <= 1e-9);
        CHECK(j.at("abs_diff_ub").get<double>() <= 1e-9);
        CHECK(j.at("coincide").get<bool>());
    }
    SUBCASE("two-parameter family matches its closed form") {
        const CliResult r =
            run_cli("special --kind depol-like-2 --d 2 --eta 0.8 --kappa 0.9");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("abs_diff_lb").get<double>() <= 1e-9);
        CHECK(j.at("coincide").get<bool>());
    }
    SUBCASE("rejections") {
        CHECK(run_cli("special --kind depol-like-2 --d 2 --eta 0.3 --kappa 0.3").status == 3);
        CHECK(run_cli("special --kind mystery --d 2").status == 2);
    }
}

TEST_CASE("eig subcommand") {
    SUBCASE("order-4 operator with a clean spectrum") {
        const CliResult r = run_cli("eig --n 3 --m 1 --d 4 --json");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("order").get<int>() == 4);
        CHECK(j.at("max_residual").get<double>() < 1e-10);
        const auto& evs = j.at("eigenvalues");
        REQUIRE(evs.size() == 4);
        for (size_t a = 0; a < evs.size(); ++a)
            for (size_t b = a + 1; b < evs.size(); ++b) {
                const double dre = evs[a].at("re").get<double>() - evs[b].at("re").get<double>();
                const double dim = evs[a].at("im").get<double>() - evs[b].at("im").get<double>();
                REQUIRE(std::hypot(dre, dim) > 1e-6);
            }
    }
    SUBCASE("identity has a flat spectrum") {
        const CliResult r = run_cli("eig --n 0 --m 0 --d 5 --json");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("order").get<int>() == 1);
        CHECK(j.at("degenerate").get<bool>());
        for (const auto& ev : j.at("eigenvalues")) {
            CHECK(ev.at("re").get<double>() == doctest::Approx(1.0));
            CHECK(ev.at("im").get<double>() == doctest::Approx(0.0));
        }
    }
    SUBCASE("order-2 shift in d = 4") {
        const CliResult r = run_cli("eig --n 0 --m 2 --d 4 --json");
        REQUIRE(r.status == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("order").get<int>() == 2);
        CHECK(j.at("degenerate").get<bool>());
        int plus = 0, minus = 0;
        for (const auto& ev : j.at("eigenvalues")) {
            const double re = ev.at("re").get<double>();
            if (std::abs(re - 1.0) < 1e-12) ++plus;
            if (std::abs(re + 1.0) < 1e-12) ++minus;
        }
        CHECK(plus == 2);
        CHECK(minus == 2);
    }
    SUBCASE("text table mentions the residual") {
        const CliResult r = run_cli("eig --n 1 --m 1 --d 3");
        REQUIRE(r.status == 0);
        CHECK(r.out.find("order 3") != std::string::npos);
        CHECK(r.out.find("max |W v - lambda v|") != std::string::npos);
    }
    SUBCASE("index outside the square is an argument error") {
        CHECK(run_cli("eig --n 5 --m 0 --d 3").status == 2);
    }
}

TEST_CASE("verify subcommand") {
    const CliResult r = run_cli("verify --count 5 --seed 1");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("all checks passed") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}
