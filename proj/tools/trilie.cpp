#include "trilie/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv)
{
    CLI::App app{"Exact-rational workbench for 3-Lie algebras"};
    std::string command, input_path, out_path;
    trilie::CommandOptions opt;
    std::size_t n = 0;

    std::string commands;
    for (const auto& c : trilie::command_names()) commands += (commands.empty() ? "" : ", ") + c;
    app.add_option("command", command, "One of: " + commands)->required();
    app.add_option("input", input_path, "Algebra document (JSON)")->required();
    app.add_option("--form", opt.forms, "Named form; repeat for commands taking several");
    app.add_option("--map", opt.maps, "Named map; repeat for commands taking several");
    auto* cocycle = app.add_option("--cocycle", opt.cocycle.emplace(), "Named cocycle");
    auto* n_opt = app.add_option("--n", n, "Truncation order for construct-Ln")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "Search seed")->capture_default_str();
    app.add_option("--attempts", opt.attempts, "Search budget")->capture_default_str();
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    std::string emit_path;
    app.add_option("--emit", emit_path, "Also write the constructed document here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (cocycle->count() == 0) opt.cocycle.reset();
    if (n_opt->count() > 0) opt.n = n;

    std::ifstream in(input_path, std::ios::binary);
    if (!in) {
        std::cerr << "trilie: cannot read " << input_path << "\n";
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    trilie::Report report;
    try {
        report = trilie::execute(command, buf.str(), opt);
    } catch (const std::exception& e) {
        std::cerr << "trilie: internal error: " << e.what() << "\n";
        return 2;
    }
    if (report.exit_code == 2) std::cerr << "trilie: " << report.body["error"]["message"].get<std::string>() << "\n";

    if (!emit_path.empty()) {
        const auto it = report.body.find("constructed");
        if (it == report.body.end() || it->is_null()) {
            std::cerr << "trilie: command produced no document to emit\n";
        } else {
            std::ofstream(emit_path, std::ios::binary) << it->dump(2) << "\n";
        }
    }
    if (out_path.empty()) {
        std::cout << report.text();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << report.text();
        if (!out) {
            std::cerr << "trilie: cannot write " << out_path << "\n";
            return 2;
        }
    }
    return report.exit_code;
}
