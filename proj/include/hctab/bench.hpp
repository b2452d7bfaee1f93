#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hctab/builtins.hpp"
#include "hctab/programs.hpp"
#include "hctab/tabling.hpp"

namespace hctab {

// splitmix64; the fixed constants make generated inputs reproducible across
// platforms and runs.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

inline Cell gen_repeated_list(TermStore& ts, std::uint64_t n) {
    Cell t = ts.nil();
    for (std::uint64_t i = 0; i < n; ++i) t = ts.make_cons(ts.make_int(1), t);
    return t;
}

// Deterministic pseudo-random integer list; elements in [0, 2^30).
inline Cell gen_random_list(TermStore& ts, std::uint64_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Cell> elems;
    elems.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        elems.push_back(ts.make_int(static_cast<std::int64_t>(rng.next() >> 34)));
    return ts.make_list(elems, ts.nil());
}

struct BenchRow {
    std::string benchmark;
    std::uint64_t n = 0;
    Mode mode = Mode::enhanced;
    HashFlavor hash = HashFlavor::full;
    double seconds = 0.0;
    std::uint64_t cells = 0;
    std::uint64_t subgoals = 0;
    std::uint64_t answers = 0;
    std::uint64_t hash_combines = 0;
    std::uint64_t traversal_steps = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t comparisons = 0;
};

inline const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names = {"is_list_repeat", "is_list_random",
                                                   "edit_repeat",    "edit_random",
                                                   "create_list",    "path_cyclic"};
    return names;
}

inline std::vector<std::uint64_t> default_sizes(std::string_view name) {
    if (name == "is_list_repeat" || name == "is_list_random")
        return {500, 1000, 1500, 2000, 2500, 3000, 3500, 4000};
    if (name == "edit_repeat" || name == "edit_random") return {30, 60, 90, 120};
    if (name == "create_list") return {200, 400, 800, 1600};
    if (name == "path_cyclic") return {10, 20, 40, 80};
    return {};
}

// One fresh engine per (benchmark, size) cell: load the bundled program,
// run the query, drain every answer, report the counters.
inline BenchRow run_benchmark_one(const std::string& name, std::uint64_t n, Mode mode,
                                  HashFlavor flavor, std::uint64_t seed) {
    Engine engine(mode, flavor);
    TermStore& ts = engine.store();
    std::vector<Cell> goals;

    if (name == "is_list_repeat" || name == "is_list_random") {
        engine.consult_text(programs::is_list);
        Cell list = name == "is_list_repeat" ? gen_repeated_list(ts, n)
                                             : gen_random_list(ts, n, seed);
        goals.push_back(ts.make_struct(ts.symbols().intern("is_list", 1), {list}));
    } else if (name == "edit_repeat" || name == "edit_random") {
        engine.consult_text(programs::edit);
        Cell l1, l2;
        if (name == "edit_repeat") {
            l1 = gen_repeated_list(ts, n);
            l2 = gen_repeated_list(ts, n);
        } else {
            SplitMix64 rng(seed);  // one stream: both lists derive from `seed`
            l1 = gen_random_list(ts, n, rng.next());
            l2 = gen_random_list(ts, n, rng.next());
        }
        goals.push_back(
            ts.make_struct(ts.symbols().intern("edit", 3), {l1, l2, ts.make_var()}));
    } else if (name == "create_list") {
        engine.consult_text(programs::create_list);
        goals.push_back(ts.make_struct(ts.symbols().intern("create_list", 2),
                                       {ts.make_int(static_cast<std::int64_t>(n)), ts.make_var()}));
    } else if (name == "path_cyclic") {
        engine.consult_text(programs::ring_with_chords(n));
        goals.push_back(
            ts.make_struct(ts.symbols().intern("path", 2), {ts.make_atom("n0"), ts.make_var()}));
    } else {
        throw std::invalid_argument("unknown benchmark: " + name);
    }

    auto t0 = std::chrono::steady_clock::now();
    std::function<bool()> drain = []() { return false; };
    engine.solve(goals, drain);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const Stats& s = engine.stats();
    BenchRow row;
    row.benchmark = name;
    row.n = n;
    row.mode = mode;
    row.hash = flavor;
    row.seconds = seconds;
    row.cells = engine.store().table().used_cells();
    row.subgoals = s.subgoals;
    row.answers = s.answers;
    row.hash_combines = s.hash_combines;
    row.traversal_steps = s.traversal_steps;
    row.hits = s.terms_hits;
    row.misses = s.terms_misses;
    row.comparisons = s.chain_comparisons();
    return row;
}

inline std::vector<BenchRow> run_benchmark(const std::string& name,
                                           const std::vector<std::uint64_t>& sizes, Mode mode,
                                           HashFlavor flavor, std::uint64_t seed) {
    std::vector<BenchRow> rows;
    rows.reserve(sizes.size());
    for (std::uint64_t n : sizes) rows.push_back(run_benchmark_one(name, n, mode, flavor, seed));
    return rows;
}

struct ScalingVerdict {
    std::string metric;
    double slope = 0.0;
    double lo = 0.0, hi = 0.0;
    bool pass = false;
};

inline std::uint64_t bench_metric(const BenchRow& row, std::string_view metric) {
    if (metric == "cells") return row.cells;
    if (metric == "subgoals") return row.subgoals;
    if (metric == "answers") return row.answers;
    if (metric == "hash_combines") return row.hash_combines;
    if (metric == "traversal_steps") return row.traversal_steps;
    if (metric == "work") return row.hash_combines + row.traversal_steps;
    if (metric == "hits") return row.hits;
    if (metric == "misses") return row.misses;
    if (metric == "comparisons") return row.comparisons;
    throw std::invalid_argument("unknown metric: " + std::string(metric));
}

// Least-squares slope of log(metric) against log(n); the scaling exponent.
inline ScalingVerdict fit_scaling(const std::vector<BenchRow>& rows, std::string_view metric,
                                  double lo, double hi) {
    std::vector<std::pair<double, double>> pts;
    for (const BenchRow& r : rows) {
        std::uint64_t v = bench_metric(r, metric);
        if (v == 0) continue;  // non-positive values carry no slope information
        pts.emplace_back(std::log(static_cast<double>(r.n)), std::log(static_cast<double>(v)));
    }
    if (pts.size() < 4)
        throw std::invalid_argument("fit_scaling needs at least 4 usable points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(pts.size());
    ScalingVerdict v;
    v.metric = metric;
    v.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    v.lo = lo;
    v.hi = hi;
    v.pass = v.slope >= lo && v.slope <= hi;
    return v;
}

inline void write_csv(const std::vector<BenchRow>& rows, std::ostream& os) {
    os << "benchmark,n,mode,hash,seconds,cells,subgoals,answers,hash_combines,"
          "traversal_steps,hits,misses,comparisons\n";
    for (const BenchRow& r : rows) {
        std::ostringstream sec;
        sec.setf(std::ios::fixed);
        sec.precision(6);
        sec << r.seconds;
        os << r.benchmark << ',' << r.n << ',' << to_string(r.mode) << ',' << to_string(r.hash)
           << ',' << sec.str() << ',' << r.cells << ',' << r.subgoals << ',' << r.answers << ','
           << r.hash_combines << ',' << r.traversal_steps << ',' << r.hits << ',' << r.misses
           << ',' << r.comparisons << '\n';
    }
}

inline void write_csv(const std::vector<BenchRow>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open CSV output: " + path);
    write_csv(rows, os);
    if (!os.good()) throw std::runtime_error("write failure on CSV output: " + path);
}

}  // namespace hctab
