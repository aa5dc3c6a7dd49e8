// Batch experiment runner for the Heisenberg Loomis-Whitney laboratory.
// Subcommands map one-to-one onto the library's verification routines;
// identical flags and seed produce byte-identical reports.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hlw/runner.hpp"

namespace {

std::vector<hlw::Exponent> parse_exponents(const std::string& csv) {
    std::vector<hlw::Exponent> out;
    size_t start = 0;
    while (start <= csv.size()) {
        size_t comma = csv.find(',', start);
        std::string token =
            comma == std::string::npos ? csv.substr(start) : csv.substr(start, comma - start);
        if (!token.empty()) out.push_back(hlw::Exponent::parse(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loomis-Whitney laboratory on finite Heisenberg groups"};
    app.require_subcommand(1);

    hlw::RunConfig cfg;
    std::string out_path;
    std::string exponents_csv;
    double grid_step = 0.1;
    std::vector<uint32_t> q_list;
    uint32_t q_single = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--n", cfg.n, "ambient parameter n");
        cmd->add_option("--q", q_single, "field size (odd prime power)");
        cmd->add_option("--q-list", q_list, "comma-separated field sizes")->delimiter(',');
        cmd->add_option("--seed", cfg.seed, "RNG seed (default 0, reproducible)");
        cmd->add_option("--samples", cfg.samples, "random corpus size");
        cmd->add_option("--tol", cfg.tol, "numeric tolerance");
        cmd->add_option("--out", out_path, "report file (default stdout)");
        cmd->add_option("--format", cfg.format, "jsonl or csv")
            ->check(CLI::IsMember({"jsonl", "csv"}));
        cmd->add_option("--threads", cfg.threads, "worker threads for corpus sweeps");
    };

    CLI::App* verify = app.add_subcommand("verify-group", "exhaustive group structure checks");
    add_common(verify);

    CLI::App* region = app.add_subcommand("region-scan", "test-family ratios over the exponent grid");
    add_common(region);
    region->add_option("--grid", grid_step, "grid step in 1/u (e.g. 0.05 for a 21x21 grid)");

    CLI::App* lw = app.add_subcommand("lw-check", "multilinear ratio corpus at the critical exponents");
    add_common(lw);

    CLI::App* ext = app.add_subcommand("extremize", "sharp-constant lower-bound search");
    add_common(ext);
    ext->add_option("--exponents", exponents_csv, "comma-separated exponents, e.g. 3/2,3/2");
    ext->add_option("--restarts", cfg.restarts, "ascent restarts");
    ext->add_option("--max-iter", cfg.max_iter, "ascent sweep cap");
    ext->add_option("--method", cfg.method, "ascent, exhaustive, or family")
        ->check(CLI::IsMember({"ascent", "exhaustive", "family"}));

    CLI::App* setlw = app.add_subcommand("set-lw", "set inequality and incidence chain corpus");
    add_common(setlw);

    CLI::App* inc = app.add_subcommand("incidence", "point-line incidence bound verification");
    add_common(inc);

    CLI::App* chen = app.add_subcommand("chen", "hyperplane covering family verification");
    add_common(chen);
    chen->add_option("--r-max", cfg.r_max, "largest covering budget r");

    CLI::App* sub = app.add_subcommand("subgroups", "subgroup enumeration and counting");
    CLI::App* sub_enum = sub->add_subcommand("enumerate", "list all subgroups");
    add_common(sub_enum);
    sub_enum->add_flag("--with-elements", cfg.with_elements, "include element ranks");
    CLI::App* sub_count = sub->add_subcommand("count", "counting formulas vs enumeration");
    add_common(sub_count);
    sub_count->add_option("--p", cfg.p, "odd prime characteristic");
    sub->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        for (CLI::App* cmd : {verify, region, lw, ext, setlw, inc, chen}) {
            if (cmd->parsed()) cfg.command = cmd->get_name();
        }
        if (sub->parsed()) {
            cfg.command = "subgroups";
            cfg.subaction = sub_enum->parsed() ? "enumerate" : "count";
        }
        if (!q_list.empty())
            cfg.q_list = q_list;
        else if (q_single != 0)
            cfg.q_list = {q_single};
        if (!exponents_csv.empty()) cfg.exponents = parse_exponents(exponents_csv);
        if (region->parsed()) {
            hlw::require(grid_step > 0 && grid_step <= 1, hlw::errc::usage,
                         "--grid must lie in (0, 1]");
            cfg.grid_denom = static_cast<uint32_t>(std::lround(1.0 / grid_step));
        }

        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            hlw::require(file.good(), hlw::errc::usage, "cannot open '" + out_path + "'");
        }
        std::ostream& out = out_path.empty() ? std::cout : file;
        return hlw::run_command(cfg, out);
    } catch (const hlw::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
