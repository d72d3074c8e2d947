#include "apfree/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "apfree/ap_verify.hpp"
#include "apfree/bounds.hpp"
#include "apfree/construction.hpp"
#include "apfree/errors.hpp"
#include "apfree/exact.hpp"
#include "apfree/exact_cache.hpp"
#include "apfree/iterlog.hpp"
#include "apfree/numeric_args.hpp"
#include "apfree/set_io.hpp"
#include "json.hpp"

namespace apfree::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kDefaultCacheFile = "apfree_cache.csv";
constexpr const char* kCacheEnv = "APFREE_CACHE";

enum class Format { plain, csv, json };

Format parse_format(const std::string& text, bool has_out) {
    if (text.empty()) return has_out ? Format::csv : Format::plain;
    if (text == "plain") return Format::plain;
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw InvalidParameter("unknown format '" + text + "' (expected plain, csv or json)");
}

std::string fmt(double v, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

unsigned resolve_threads(const std::string& text) {
    if (text.empty()) return std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t t = parse_count(text);
    if (t == 0) return std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(t);
}

unsigned parse_k(const std::string& text) {
    const std::uint64_t k = parse_count(text);
    if (k > 1'000'000) throw InvalidParameter("k is unreasonably large: " + text);
    return static_cast<unsigned>(k);
}

std::string join_members(const IntegerSet& set, char sep) {
    std::string out;
    for (std::uint64_t m : set) {
        if (!out.empty()) out += sep;
        out += std::to_string(m);
    }
    return out;
}

// ---- construct -----------------------------------------------------------

struct ConstructArgs {
    std::string k, r, out, format, threads, universe_limit;
    bool no_verify = false;
};

int cmd_construct(const ConstructArgs& args, std::ostream& out) {
    const unsigned k = parse_k(args.k);
    const std::uint64_t r = parse_count(args.r);
    if (!is_prime(k)) throw InvalidParameter("k must be prime");
    if (k < 3) throw InvalidParameter("k must be at least 3");
    if (r == 0 || r > 64) throw InvalidParameter("r must be between 1 and 64");

    ConstructionOptions options;
    options.threads = resolve_threads(args.threads);
    options.verify_final = !args.no_verify;
    if (!args.universe_limit.empty()) options.universe_limit = parse_count(args.universe_limit);
    const Format format = parse_format(args.format, !args.out.empty());

    const ConstructionTrace trace = iterate_construction(k, static_cast<unsigned>(r), options);
    if (!args.out.empty()) write_set_file(args.out, trace.final_set);

    switch (format) {
        case Format::plain: {
            out << "sizes: ";
            for (std::size_t i = 0; i < trace.levels.size(); ++i) out << (i ? "," : "") << trace.levels[i].cardinality;
            out << "\nuniverse: " << trace.final_set.universe_max() << "\n";
            out << "verified: " << (trace.verified ? "yes" : "skipped") << "\n";
            if (args.out.empty()) write_set(out, trace.final_set);
            break;
        }
        case Format::csv: {
            out << "level,universe_max,cardinality\n";
            for (std::size_t i = 0; i < trace.levels.size(); ++i) {
                out << i + 1 << ',' << trace.levels[i].universe_max << ',' << trace.levels[i].cardinality << '\n';
            }
            if (args.out.empty()) write_set(out, trace.final_set);
            break;
        }
        case Format::json: {
            json doc;
            doc["k"] = k;
            doc["r"] = r;
            auto levels = json::array();
            for (std::size_t i = 0; i < trace.levels.size(); ++i) {
                levels.push_back({{"level", i + 1},
                                  {"universe_max", trace.levels[i].universe_max},
                                  {"cardinality", trace.levels[i].cardinality}});
            }
            doc["levels"] = std::move(levels);
            doc["verified"] = trace.verified;
            if (args.out.empty()) {
                doc["members"] = trace.final_set.members();
            } else {
                doc["out"] = args.out;
            }
            out << doc.dump(2) << '\n';
            break;
        }
    }
    return kSuccess;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
    std::string file, k, format, threads, strategy;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
    const unsigned k = parse_k(args.k);
    VerifyOptions options;
    options.threads = resolve_threads(args.threads);
    if (args.strategy.empty() || args.strategy == "auto") {
        options.strategy = VerifyStrategy::automatic;
    } else if (args.strategy == "pairs") {
        options.strategy = VerifyStrategy::pairs;
    } else if (args.strategy == "strides") {
        options.strategy = VerifyStrategy::strides;
    } else {
        throw InvalidParameter("unknown strategy '" + args.strategy + "'");
    }
    const Format format = parse_format(args.format, false);

    const IntegerSet set = read_set_file(args.file);
    const Verdict verdict = verify_ap_free(set, k, options);

    if (format == Format::json) {
        json doc;
        doc["k"] = k;
        doc["universe_max"] = set.universe_max();
        doc["size"] = set.size();
        doc["ap_free"] = verdict.ap_free();
        if (verdict.witness) {
            doc["witness"] = {{"a", verdict.witness->start}, {"d", verdict.witness->difference}};
        } else {
            doc["witness"] = nullptr;
        }
        out << doc.dump(2) << '\n';
    } else if (format == Format::csv) {
        out << "k,universe_max,size,ap_free,a,d\n"
            << k << ',' << set.universe_max() << ',' << set.size() << ',' << (verdict.ap_free() ? "true" : "false")
            << ',';
        if (verdict.witness) out << verdict.witness->start << ',' << verdict.witness->difference;
        else out << ',';
        out << '\n';
    } else if (verdict.witness) {
        out << "a=" << verdict.witness->start << " d=" << verdict.witness->difference << '\n';
    } else {
        out << "AP-free\n";
    }
    return verdict.ap_free() ? kSuccess : kWitnessFound;
}

// ---- exact ---------------------------------------------------------------

struct ExactArgs {
    std::string k, n, range, max_nodes, max_time, cache, format, threads;
    bool no_cache = false;
};

std::optional<std::filesystem::path> resolve_cache_path(const ExactArgs& args) {
    if (args.no_cache) return std::nullopt;
    if (!args.cache.empty()) return std::filesystem::path(args.cache);
    if (const char* env = std::getenv(kCacheEnv); env && *env) return std::filesystem::path(env);
    return std::filesystem::path(kDefaultCacheFile);
}

int cmd_exact(const ExactArgs& args, std::ostream& out, std::ostream& err) {
    const unsigned k = parse_k(args.k);
    if (k < 3) throw InvalidParameter("k must be at least 3");
    std::uint64_t from = 0, to = 0;
    if (!args.n.empty() == !args.range.empty()) throw InvalidParameter("give exactly one of --n or --range");
    if (!args.n.empty()) {
        from = to = parse_count(args.n);
    } else {
        std::tie(from, to) = parse_range(args.range);
    }
    if (from == 0) throw InvalidParameter("n must be positive");
    if (from > to) throw InvalidParameter("range is empty");

    SolveBudget budget;
    if (!args.max_nodes.empty()) budget.max_nodes = parse_count(args.max_nodes);
    if (!args.max_time.empty()) budget.max_time = std::chrono::duration<double>(parse_real(args.max_time));
    SolverOptions options;
    options.threads = resolve_threads(args.threads);
    const Format format = parse_format(args.format, false);

    std::optional<ExactCache> cache;
    if (auto path = resolve_cache_path(args)) {
        cache.emplace(*path);
        for (const auto& w : cache->warnings()) err << "warning: " << w << '\n';
    } else {
        cache.emplace();
    }

    const std::vector<SolveOutcome> outcomes = solve_range(k, from, to, budget, &*cache, options);

    bool any_unsolved = false;
    json records = json::array();
    if (format == Format::csv) out << ExactCache::kHeader << '\n';
    for (const auto& outcome : outcomes) {
        if (const auto* rec = std::get_if<ExactRecord>(&outcome)) {
            if (rec->from_cache) err << "cache hit: k=" << rec->k << " n=" << rec->n << '\n';
            if (format == Format::json) {
                records.push_back({{"k", rec->k},
                                   {"n", rec->n},
                                   {"status", "solved"},
                                   {"value", rec->value},
                                   {"witness", rec->witness.members()}});
            } else {
                out << ExactCache::format_row(rec->k, rec->n, rec->value, rec->witness) << '\n';
            }
        } else {
            const auto& u = std::get<Unsolved>(outcome);
            any_unsolved = true;
            err << "unsolved: k=" << u.k << " n=" << u.n << ": " << u.reason << '\n';
            if (format == Format::json) {
                records.push_back({{"k", u.k},
                                   {"n", u.n},
                                   {"status", "unsolved"},
                                   {"lower_bound", u.lower_bound},
                                   {"witness", u.best_witness ? u.best_witness->members() : std::vector<std::uint64_t>{}}});
            } else {
                out << u.k << ',' << u.n << ",>=" << u.lower_bound << ','
                    << (u.best_witness ? join_members(*u.best_witness, ';') : std::string{}) << '\n';
            }
        }
    }
    if (format == Format::json) out << records.dump(2) << '\n';
    return any_unsolved ? kResource : kSuccess;
}

// ---- bounds --------------------------------------------------------------

struct BoundsArgs {
    std::string k, c = "1", c1 = "1", c2 = "1", gowers_exponent_log2, format;
    std::vector<std::string> n, log2n, families;
};

int cmd_bounds(const BoundsArgs& args, std::ostream& out) {
    const unsigned k = parse_k(args.k);
    if (args.n.empty() && args.log2n.empty()) throw InvalidParameter("give --n and/or --log2n");
    const Format format = parse_format(args.format, false);

    std::vector<LogValue> points;
    for (const auto& text : args.n) points.push_back(parse_magnitude(text));
    for (const auto& text : args.log2n) points.push_back(LogValue::from_log2(parse_real(text)));

    std::vector<BoundFamily> families;
    if (args.families.empty()) {
        for (BoundFamily f : kAllFamilies) {
            if (BoundSpec::accepts_k(f, k)) families.push_back(f);
        }
        if (families.empty()) throw InvalidParameter("no bound family applies to k=" + std::to_string(k));
    } else {
        for (const auto& name : args.families) families.push_back(parse_family(name));
    }

    std::vector<BoundRow> rows;
    for (LogValue n : points) {
        for (BoundFamily f : families) {
            BoundSpec spec{f, k, parse_real(args.c), parse_real(args.c1), parse_real(args.c2), std::nullopt};
            if (!args.gowers_exponent_log2.empty()) spec.gowers_exponent_log2 = parse_real(args.gowers_exponent_log2);
            spec.validate();
            rows.push_back(evaluate_row(spec, n));
        }
    }

    switch (format) {
        case Format::csv:
            write_bound_csv_header(out);
            for (const auto& row : rows) write_bound_csv_row(out, row);
            break;
        case Format::plain:
            for (const auto& row : rows) {
                out << "n=" << format_n(row.n) << "  " << family_name(row.spec.family) << "  k=" << row.spec.k;
                if (row.value) {
                    out << "  log2=" << fmt(row.value->log2(), 10) << "  value=" << row.value->to_string() << '\n';
                } else {
                    out << "  domain-error: " << row.status << '\n';
                }
            }
            out << "(constants c=" << args.c << " c1=" << args.c1 << " c2=" << args.c2 << ")\n";
            break;
        case Format::json: {
            json doc = json::array();
            for (const auto& row : rows) {
                json item{{"n", format_n(row.n)},
                          {"log2_n", row.n.log2()},
                          {"family", family_name(row.spec.family)},
                          {"k", row.spec.k},
                          {"status", row.value ? "ok" : "domain-error"}};
                if (row.value) {
                    item["log2_value"] = row.value->log2();
                    item["value"] = row.value->to_string();
                } else {
                    item["message"] = row.status;
                }
                doc.push_back(std::move(item));
            }
            out << doc.dump(2) << '\n';
            break;
        }
    }
    return kSuccess;
}

// ---- crossover / recipsum / probe ----------------------------------------

int cmd_crossover(const std::string& k_text, const std::string& c_text, const std::string& format_text,
                  std::ostream& out) {
    const unsigned k = parse_k(k_text);
    const double c = parse_real(c_text);
    const Format format = parse_format(format_text, false);
    const CrossoverResult result = crossover_n(k, c);

    if (format == Format::json) {
        json doc{{"k", k}, {"c", c}, {"found", result.found}};
        if (result.found) doc["log2_n_star"] = result.log2_n_star;
        else doc["log2_n_star"] = nullptr;
        doc["note"] = "up to constants";
        out << doc.dump(2) << '\n';
    } else if (format == Format::csv) {
        out << "k,c,found,log2_n_star\n" << k << ',' << fmt(c) << ',' << (result.found ? "true" : "false") << ',';
        if (result.found) out << fmt(result.log2_n_star);
        out << '\n';
    } else if (result.found) {
        out << "log2_n_star ≈ " << fmt(result.log2_n_star, 6) << " (constants=" << fmt(c, 6) << ")\n";
    } else {
        out << "no crossover found for log2 n in [1, 1e6] (constants=" << fmt(c, 6) << ")\n";
    }
    return kSuccess;
}

struct RecipsumArgs {
    std::string d = "1", s = "1", from, to, format;
};

int cmd_recipsum(const RecipsumArgs& args, std::ostream& out) {
    const IterLogSpec spec{static_cast<unsigned>(parse_count(args.d)), parse_real(args.s)};
    const std::uint64_t from = parse_count(args.from);
    const std::uint64_t to = parse_count(args.to);
    const Format format = parse_format(args.format, false);

    const double sum = reciprocal_partial_sum(spec, from, to);
    const double integral = comparison_integral(spec, static_cast<double>(from), static_cast<double>(to));

    if (format == Format::json) {
        json doc{{"d", spec.d}, {"s", spec.s}, {"from", from}, {"to", to}, {"partial_sum", sum},
                 {"comparison_integral", integral}};
        out << doc.dump(2) << '\n';
    } else if (format == Format::csv) {
        out << "d,s,from,to,partial_sum,comparison_integral\n"
            << spec.d << ',' << fmt(spec.s) << ',' << from << ',' << to << ',' << fmt(sum) << ',' << fmt(integral)
            << '\n';
    } else {
        out << "partial sum ≈ " << fmt(sum, 10) << "\ncomparison integral ≈ " << fmt(integral, 10) << '\n';
    }
    return kSuccess;
}

struct ProbeArgs {
    std::string theorem, d = "1", s, c = "1", samples = "20";
};

int cmd_probe(const ProbeArgs& args, std::ostream& out) {
    const unsigned d = static_cast<unsigned>(parse_count(args.d));
    const double c = parse_real(args.c);
    const unsigned samples = static_cast<unsigned>(parse_count(args.samples));
    ProbeReport report;
    if (args.theorem == "11") {
        if (!args.s.empty() && parse_real(args.s) != 1.0) throw InvalidParameter("the large-set probe uses s = 1");
        report = probe_large_set(d, c, samples);
    } else if (args.theorem == "13") {
        const double s = args.s.empty() ? 1.5 : parse_real(args.s);
        report = probe_small_set(d, s, c, samples);
    } else {
        throw InvalidParameter("--theorem must be 11 or 13");
    }
    out << probe_report_json(report) << '\n';
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constructs and verifies k-AP-free sets, computes exact r_k(n), and evaluates bounds on r_k(n)."};
    app.name("apfree");
    app.require_subcommand(1);

    ConstructArgs construct_args;
    auto* construct = app.add_subcommand("construct", "Iterated block construction of a k-AP-free set in {1..k^r}");
    construct->add_option("--k", construct_args.k, "Prime progression length")->required();
    construct->add_option("--r", construct_args.r, "Number of levels")->required();
    construct->add_option("--out", construct_args.out, "Write the final set to this set file");
    construct->add_option("--format", construct_args.format, "plain, csv or json");
    construct->add_option("--threads", construct_args.threads, "Verifier workers (0 = all cores)");
    construct->add_option("--universe-limit", construct_args.universe_limit, "Largest universe to allocate");
    construct->add_flag("--no-verify", construct_args.no_verify, "Skip verification of the final set");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Check a set file for a k-term progression");
    verify->add_option("file,--file", verify_args.file, "Set file")->required();
    verify->add_option("--k", verify_args.k, "Progression length (>= 3)")->required();
    verify->add_option("--format", verify_args.format, "plain, csv or json");
    verify->add_option("--threads", verify_args.threads, "Workers (0 = all cores)");
    verify->add_option("--strategy", verify_args.strategy, "auto, pairs or strides");

    ExactArgs exact_args;
    auto* exact = app.add_subcommand("exact", "Exact r_k(n) by branch and bound");
    exact->add_option("--k", exact_args.k, "Progression length (>= 3)")->required();
    exact->add_option("--n", exact_args.n, "Single n");
    exact->add_option("--range", exact_args.range, "FROM:TO sweep");
    exact->add_option("--max-nodes", exact_args.max_nodes, "Node budget per instance");
    exact->add_option("--max-time", exact_args.max_time, "Time budget per instance in seconds");
    exact->add_option("--cache", exact_args.cache, "Cache file (default $APFREE_CACHE or apfree_cache.csv)");
    exact->add_flag("--no-cache", exact_args.no_cache, "Do not read or write a cache file");
    exact->add_option("--format", exact_args.format, "plain, csv or json");
    exact->add_option("--threads", exact_args.threads, "Search workers (0 = all cores)");

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "Evaluate bound formulas on r_k(n) in log space");
    bounds->add_option("--k", bounds_args.k, "Progression length")->required();
    bounds->add_option("--n", bounds_args.n, "Comma-separated n values (1e6 and 2^40 accepted)")->delimiter(',');
    bounds->add_option("--log2n", bounds_args.log2n, "Comma-separated log2 n values")->delimiter(',');
    bounds->add_option("--families", bounds_args.families, "Comma-separated families")->delimiter(',');
    bounds->add_option("--c", bounds_args.c, "Leading constant c");
    bounds->add_option("--c1", bounds_args.c1, "Constant c1 (green-tao-r4)");
    bounds->add_option("--c2", bounds_args.c2, "Constant c2 (green-tao-r4)");
    bounds->add_option("--gowers-exponent-log2", bounds_args.gowers_exponent_log2,
                       "log2 of the Gowers exponent (default 2^(k+9))");
    bounds->add_option("--format", bounds_args.format, "plain, csv or json");

    std::string crossover_k, crossover_c = "1", crossover_format;
    auto* crossover = app.add_subcommand("crossover", "Smallest n where the O'Bryant bound overtakes the main bound");
    crossover->add_option("--k", crossover_k, "Prime k >= 3")->required();
    crossover->add_option("--c", crossover_c, "O'Bryant constant c");
    crossover->add_option("--format", crossover_format, "plain, csv or json");

    RecipsumArgs recipsum_args;
    auto* recipsum = app.add_subcommand("recipsum", "Partial sum of 1/(n ln n ... (ln^(d) n)^s)");
    recipsum->add_option("--d", recipsum_args.d, "Iteration depth");
    recipsum->add_option("--s", recipsum_args.s, "Outer exponent");
    recipsum->add_option("--from", recipsum_args.from, "First index")->required();
    recipsum->add_option("--to", recipsum_args.to, "Last index")->required();
    recipsum->add_option("--format", recipsum_args.format, "plain, csv or json");

    ProbeArgs probe_args;
    auto* probe = app.add_subcommand("probe", "Numeric threshold probe for the large/small-set growth conditions");
    probe->add_option("--theorem", probe_args.theorem, "11 (large set) or 13 (small set)")->required();
    probe->add_option("--d", probe_args.d, "Iteration depth");
    probe->add_option("--s", probe_args.s, "Outer exponent (13 only, default 1.5)");
    probe->add_option("--c", probe_args.c, "Leading constant");
    probe->add_option("--samples", probe_args.samples, "Consecutive doublings required");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (*construct) return cmd_construct(construct_args, out);
        if (*verify) return cmd_verify(verify_args, out);
        if (*exact) return cmd_exact(exact_args, out, err);
        if (*bounds) return cmd_bounds(bounds_args, out);
        if (*crossover) return cmd_crossover(crossover_k, crossover_c, crossover_format, out);
        if (*recipsum) return cmd_recipsum(recipsum_args, out);
        if (*probe) return cmd_probe(probe_args, out);
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << '\n';
        return kResource;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"apfree"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace apfree::cli
