#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "hlw/runner.hpp"

using namespace hlw;

namespace {

std::pair<int, std::string> run(const RunConfig& cfg) {
    std::ostringstream out;
    int code = run_command(cfg, out);
    return {code, out.str()};
}

}  // namespace

TEST_CASE("identical config and seed give byte-identical reports") {
    std::vector<RunConfig> configs;
    {
        RunConfig c;
        c.command = "verify-group";
        c.q_list = {3};
        configs.push_back(c);
    }
    {
        RunConfig c;
        c.command = "region-scan";
        c.q_list = {3, 5};
        c.grid_denom = 10;
        configs.push_back(c);
        c.format = "csv";
        configs.push_back(c);
    }
    {
        RunConfig c;
        c.command = "lw-check";
        c.q_list = {3};
        c.samples = 40;
        configs.push_back(c);
    }
    {
        RunConfig c;
        c.command = "extremize";
        c.q_list = {3};
        c.exponents = {Exponent(3, 2), Exponent(3, 2)};
        c.restarts = 4;
        c.max_iter = 40;
        configs.push_back(c);
        c.method = "exhaustive";
        configs.push_back(c);
    }
    {
        RunConfig c;
        c.command = "set-lw";
        c.q_list = {3};
        c.samples = 25;
        configs.push_back(c);
    }
    {
        RunConfig c;
        c.command = "incidence";
        c.q_list = {3};
        c.samples = 50;
        configs.push_back(c);
    }
    {
        RunConfig c;
        c.command = "chen";
        c.q_list = {3};
        c.samples = 15;
        configs.push_back(c);
    }
    {
        RunConfig c;
        c.command = "subgroups";
        c.subaction = "count";
        c.p = 3;
        configs.push_back(c);
        c.subaction = "enumerate";
        c.q_list = {3};
        configs.push_back(c);
    }

    for (const auto& cfg : configs) {
        auto [code1, text1] = run(cfg);
        auto [code2, text2] = run(cfg);
        CHECK(code1 == code2);
        CHECK(text1 == text2);
        CHECK(!text1.empty());
    }
}

TEST_CASE("thread count does not change report bytes") {
    RunConfig c;
    c.command = "incidence";
    c.q_list = {5};
    c.samples = 60;
    auto [code1, serial] = run(c);
    c.threads = 2;
    auto [code2, parallel] = run(c);
    CHECK(code1 == code2);
    CHECK(serial == parallel);
}

TEST_CASE("different seeds give different corpora") {
    RunConfig c;
    c.command = "set-lw";
    c.q_list = {3};
    c.samples = 10;
    auto [code1, a] = run(c);
    c.seed = 1;
    auto [code2, b] = run(c);
    CHECK(a != b);
}

TEST_CASE("exit codes") {
    RunConfig ok;
    ok.command = "verify-group";
    ok.q_list = {3};
    CHECK(run(ok).first == 0);

    // the chen command reports the quoted-bound violation on singletons
    RunConfig chen;
    chen.command = "chen";
    chen.q_list = {3};
    chen.samples = 200;  // large enough to hit tiny sets under seed 0
    auto [code, text] = run(chen);
    CHECK(code == 1);
    CHECK(text.find("\"witness\"") != std::string::npos);

    RunConfig bad;
    bad.command = "no-such-command";
    std::ostringstream sink;
    CHECK_THROWS_MATCHES(run_command(bad, sink), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::usage; }));

    RunConfig huge;
    huge.command = "subgroups";
    huge.subaction = "enumerate";
    huge.n = 2;
    huge.q_list = {5};
    CHECK_THROWS_MATCHES(run_command(huge, sink), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::too_large; }));
}

TEST_CASE("report lines are valid json") {
    RunConfig c;
    c.command = "lw-check";
    c.q_list = {3};
    c.samples = 10;
    auto [code, text] = run(c);
    std::istringstream lines(text);
    std::string line;
    uint64_t parsed = 0;
    while (std::getline(lines, line)) {
        json j = json::parse(line);  // throws on malformed output
        CHECK(j.contains("check"));
        ++parsed;
    }
    CHECK(parsed > 0);
}

TEST_CASE("witnesses replay the failing check") {
    // a failing vinh line must carry the instance needed to recompute it
    RunConfig c;
    c.command = "extremize";
    c.q_list = {5};
    c.exponents = {Exponent(3, 2), Exponent(3, 2)};
    c.restarts = 2;
    c.max_iter = 30;
    auto [code, text] = run(c);
    CHECK(code == 0);
    std::istringstream lines(text);
    std::string line;
    bool saw_witness = false, saw_report = false;
    while (std::getline(lines, line)) {
        json j = json::parse(line);
        if (j.value("type", "") == "witness") {
            saw_witness = true;
            REQUIRE(j["functions"].is_array());
            // rebuild the witness and re-evaluate the reported ratio
            GroupCtx ctx = GroupCtx::make(1, field_from_q(5));
            std::vector<GridFn> fs;
            for (const auto& fj : j["functions"])
                fs.push_back(GridFn::from_values(ctx, fj["values"].get<std::vector<double>>()));
            auto [value, degenerate] =
                lw_ratio(ctx, fs, {Exponent(3, 2), Exponent(3, 2)});
            CHECK(std::isfinite(value));
        }
        if (j.value("type", "") == "ratio_report") saw_report = true;
    }
    CHECK(saw_witness);
    CHECK(saw_report);
}
