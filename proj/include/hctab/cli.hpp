#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hctab/bench.hpp"
#include "hctab/builtins.hpp"
#include "hctab/tabling.hpp"

namespace hctab {

namespace detail {

inline Mode parse_mode(const std::string& s) {
    if (s == "none") return Mode::none;
    if (s == "hashcons") return Mode::hashcons;
    if (s == "enhanced") return Mode::enhanced;
    throw std::runtime_error("--mode expects none|hashcons|enhanced, got " + s);
}

inline HashFlavor parse_flavor(const std::string& s) {
    if (s == "full") return HashFlavor::full;
    if (s == "prefix3") return HashFlavor::prefix3;
    throw std::runtime_error("--hash expects full|prefix3, got " + s);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open program file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void print_stats(std::ostream& os, Engine& engine) {
    for (auto& [k, v] : engine.statistics_report()) os << "% " << k << " = " << v << "\n";
}

}  // namespace detail

// run FILE -q GOAL [--mode M] [--hash H] [--stats]
// bench NAME [--sizes ...] [--mode M] [--hash H] [--seed S] [--csv PATH]
inline int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"tabled logic-program engine with hash-consed table area"};
    app.require_subcommand(1);

    std::string file, query, mode_s = "enhanced", hash_s = "full", csv_path;
    bool stats = false;
    auto* run = app.add_subcommand("run", "load a program and run a query");
    run->add_option("file", file, "program file")->required();
    run->add_option("-q,--query", query, "goal to solve")->required();
    run->add_option("--mode", mode_s, "sharing mode: none|hashcons|enhanced");
    run->add_option("--hash", hash_s, "subgoal hash flavor: full|prefix3");
    run->add_flag("--stats", stats, "print table statistics after the query");

    std::string bench_name;
    std::vector<std::uint64_t> sizes;
    std::uint64_t seed = 12345;
    auto* bench = app.add_subcommand("bench", "run a named benchmark series");
    bench->add_option("name", bench_name, "benchmark name")->required();
    bench->add_option("--sizes", sizes, "instance sizes")->delimiter(',');
    bench->add_option("--mode", mode_s, "sharing mode: none|hashcons|enhanced");
    bench->add_option("--hash", hash_s, "subgoal hash flavor: full|prefix3");
    bench->add_option("--seed", seed, "random list seed");
    bench->add_option("--csv", csv_path, "write rows to this CSV file");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        Mode mode = detail::parse_mode(mode_s);
        HashFlavor flavor = detail::parse_flavor(hash_s);

        if (run->parsed()) {
            Engine engine(mode, flavor);
            engine.consult_text(detail::read_file(file));
            for (const std::string& w : engine.warnings()) std::cerr << "warning: " << w << "\n";
            Engine::QueryResult result = engine.run_query(query);
            if (!result.lines.empty()) {
                for (const std::string& line : result.lines) std::cout << line << "\n";
            } else {
                std::cout << (result.solutions > 0 ? "yes" : "no") << "\n";
            }
            if (stats) detail::print_stats(std::cout, engine);
            return 0;
        }

        // bench
        bool known = false;
        for (const std::string& n : benchmark_names()) known = known || n == bench_name;
        if (!known) {
            std::cerr << "unknown benchmark: " << bench_name << "\nusage: bench NAME with NAME in {";
            for (std::size_t i = 0; i < benchmark_names().size(); ++i)
                std::cerr << (i ? ", " : "") << benchmark_names()[i];
            std::cerr << "}\n";
            return 2;
        }
        if (sizes.empty()) sizes = default_sizes(bench_name);
        std::vector<BenchRow> rows = run_benchmark(bench_name, sizes, mode, flavor, seed);
        if (csv_path.empty()) {
            write_csv(rows, std::cout);
        } else {
            write_csv(rows, csv_path);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hctab
