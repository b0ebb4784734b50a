#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "conjecture.hpp"
#include "field_oracle.hpp"
#include "json_io.hpp"
#include "pivots.hpp"
#include "positroid.hpp"
#include "set_system.hpp"
#include "wilson_loop.hpp"

namespace shapeloci::cli {

namespace detail {

inline json read_json(const std::string& path, std::istream& fallback) {
    if (path.empty() || path == "-") return json::parse(fallback);
    std::ifstream f(path);
    if (!f) throw domain_error("cannot open input file: " + path);
    return json::parse(f);
}

inline void emit(std::ostream& out, const json& value, bool pretty) {
    out << (pretty ? value.dump(2) : value.dump()) << "\n";
}

/// Accepts either a set system ("sets") or an explicit matroid ("bases").
inline Matroid matroid_or_system(const json& j) {
    if (j.contains("sets")) return transversal_matroid(set_system_of(j));
    return matroid_of(j);
}

} // namespace detail

/// Runs one CLI invocation. Streams on the given file handles so the driver is
/// testable in-process. Exit codes: 0 success, 1 domain or parse error, 2 anomaly
/// (for instance a conjecture counterexample).
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"Exact tools for transversal matroids, positroids, and basis shape loci"};
    app.require_subcommand(1);
    bool pretty = false;
    app.add_flag("--pretty", pretty, "indent JSON output");

    std::string input_path;
    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("input", input_path, "input file (default: stdin)");
    };

    auto* cmd_matroid = app.add_subcommand("matroid", "bases of the transversal matroid");
    add_input(cmd_matroid);
    auto* cmd_minimal = app.add_subcommand("minimal", "test minimality and reduce");
    add_input(cmd_minimal);
    auto* cmd_dim = app.add_subcommand("dim", "dimension of the basis shape locus");
    add_input(cmd_dim);
    auto* cmd_pos = app.add_subcommand("is-positroid", "positroid test");
    add_input(cmd_pos);
    auto* cmd_cross = app.add_subcommand("crossings", "all crossing witnesses");
    add_input(cmd_cross);
    auto* cmd_env = app.add_subcommand("envelope", "positroid envelope of a matroid");
    add_input(cmd_env);
    auto* cmd_irank = app.add_subcommand("interval-rank", "interval rank matrix");
    add_input(cmd_irank);
    auto* cmd_ienv = app.add_subcommand("interval-envelope", "interval positroid envelope");
    add_input(cmd_ienv);
    int ienv_k = 0;
    cmd_ienv->add_option("--k", ienv_k, "rank of the envelope")->required();
    auto* cmd_ec = app.add_subcommand("ec", "expected codimension");
    add_input(cmd_ec);
    auto* cmd_trans = app.add_subcommand("is-transversal", "transversality with witness");
    add_input(cmd_trans);
    auto* cmd_targets = app.add_subcommand("pivot-targets", "pivot targets of one set");
    add_input(cmd_targets);
    int target_set = 0;
    cmd_targets->add_option("--set", target_set, "1-based index of the pivoted set")->required();
    auto* cmd_gale = app.add_subcommand("gale-minimal", "a-Gale minimal presentation");
    add_input(cmd_gale);
    int gale_a = 1;
    cmd_gale->add_option("--a", gale_a, "rotation start of the Gale order")->required();

    auto* cmd_verify = app.add_subcommand("verify-conjecture",
                                          "sweep for noncrossing a-Gale presentations");
    int max_n = 0, max_k = 0;
    cmd_verify->add_option("--max-n", max_n, "largest ground set")->required();
    cmd_verify->add_option("--max-k", max_k, "largest number of sets")->required();
    std::vector<std::string> random_args;
    cmd_verify->add_option("--random", random_args, "SEED TRIALS: sample instead of sweeping")
        ->expected(2);
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    cmd_verify->add_option("--threads", threads, "worker threads");
    std::string resume_path;
    cmd_verify->add_option("--resume", resume_path, "skip systems already in this report file");

    auto* cmd_wld = app.add_subcommand("wld", "Wilson loop diagram tools");
    cmd_wld->require_subcommand(1);
    auto* wld_check = cmd_wld->add_subcommand("check", "admissibility");
    add_input(wld_check);
    auto* wld_convert = cmd_wld->add_subcommand("convert", "derived set system");
    add_input(wld_convert);
    auto* wld_equiv = cmd_wld->add_subcommand("equiv", "matroid equivalence of two diagrams");
    add_input(wld_equiv);
    auto* wld_uncross = cmd_wld->add_subcommand("uncross", "admissible equivalent diagram");
    add_input(wld_uncross);
    auto* wld_catalan = cmd_wld->add_subcommand("catalan", "count admissible exact arrangements");
    int catalan_vertices = 0;
    wld_catalan->add_option("--vertices", catalan_vertices, "segment length")->required();

    auto* cmd_oracle = app.add_subcommand("oracle", "finite-field certification of the matroid");
    add_input(cmd_oracle);
    std::uint64_t oracle_seed = 0;
    cmd_oracle->add_option("--seed", oracle_seed, "RNG seed")->required();
    std::uint64_t oracle_prime = kDefaultPrime;
    cmd_oracle->add_option("--prime", oracle_prime, "field modulus");

    std::vector<const char*> argv;
    argv.push_back("shapeloci");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        const int code = app.exit(e, msg, msg);
        (code == 0 ? out : err) << msg.str();
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_matroid->parsed()) {
            detail::emit(out, json_of(detail::matroid_or_system(detail::read_json(input_path, in))),
                         pretty);
        } else if (cmd_minimal->parsed()) {
            const SetSystem s = set_system_of(detail::read_json(input_path, in));
            const MinimalityResult r = is_minimal_presentation(s);
            json result{{"minimal", r.minimal}};
            if (r.violating) {
                json v = json::array();
                for (int i : *r.violating) v.push_back(i + 1);
                result["violating"] = v;
            }
            result["reduced"] = json_of(reduce_to_minimal(s));
            detail::emit(out, result, pretty);
        } else if (cmd_dim->parsed()) {
            const SetSystem s = set_system_of(detail::read_json(input_path, in));
            detail::emit(out, json{{"dimension", locus_dimension(s)}}, pretty);
        } else if (cmd_pos->parsed()) {
            const Matroid m = detail::matroid_or_system(detail::read_json(input_path, in));
            detail::emit(out, json{{"positroid", is_positroid(m)}}, pretty);
        } else if (cmd_cross->parsed()) {
            const SetSystem s = set_system_of(detail::read_json(input_path, in));
            json list = json::array();
            for (const CrossingWitness& w : crossings(s)) list.push_back(json_of(w));
            detail::emit(out, json{{"crossings", list}}, pretty);
        } else if (cmd_env->parsed()) {
            const Matroid m = detail::matroid_or_system(detail::read_json(input_path, in));
            detail::emit(out, json_of(positroid_envelope(m)), pretty);
        } else if (cmd_irank->parsed()) {
            const SetSystem s = set_system_of(detail::read_json(input_path, in));
            detail::emit(out, json_of(interval_rank_matrix(s)), pretty);
        } else if (cmd_ienv->parsed()) {
            const IntervalRankMatrix r =
                interval_rank_matrix_of(detail::read_json(input_path, in));
            detail::emit(out, json_of(interval_envelope(r, ienv_k)), pretty);
        } else if (cmd_ec->parsed()) {
            const json j = detail::read_json(input_path, in);
            long long ec = 0;
            if (j.contains("sets")) {
                const SetSystem s = set_system_of(j);
                const SetSystem minimal = reduce_to_minimal(s);
                ec = expected_codimension(transversal_matroid(minimal), minimal);
            } else {
                ec = expected_codimension(matroid_of(j));
            }
            detail::emit(out, json{{"ec", ec}}, pretty);
        } else if (cmd_trans->parsed()) {
            const Matroid m = detail::matroid_or_system(detail::read_json(input_path, in));
            const auto witness = transversal_presentation(m);
            json result{{"transversal", witness.has_value()}};
            if (witness) result["presentation"] = json_of(*witness);
            detail::emit(out, result, pretty);
        } else if (cmd_targets->parsed()) {
            const SetSystem s = set_system_of(detail::read_json(input_path, in));
            if (target_set < 1 || target_set > s.k())
                throw domain_error("--set must be a 1-based set index");
            json list = json::array();
            for (GroundSubset t : pivot_targets(s, target_set - 1)) list.push_back(json_of(t));
            detail::emit(out, json{{"targets", list}}, pretty);
        } else if (cmd_gale->parsed()) {
            const SetSystem s = set_system_of(detail::read_json(input_path, in));
            detail::emit(out, json_of(gale_minimal(s, gale_a)), pretty);
        } else if (cmd_verify->parsed()) {
            std::optional<RandomMode> mode;
            if (!random_args.empty())
                mode = RandomMode{std::stoull(random_args[0]), std::stoll(random_args[1])};
            std::set<std::string> done;
            if (!resume_path.empty()) {
                std::ifstream f(resume_path);
                std::string line;
                while (std::getline(f, line)) {
                    if (line.empty()) continue;
                    const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
                    if (j.is_discarded() || !j.contains("system")) continue;
                    done.insert(j.at("system").dump());
                }
            }
            const ConjectureSummary summary = verify_conjecture(
                max_n, max_k, mode, threads,
                [&](const ConjectureRecord& r) { out << json_of(r).dump() << "\n"; },
                [&](const SetSystem& s) { return done.count(json_of(s).dump()) > 0; });
            detail::emit(out,
                         json{{"summary", true},
                              {"systems", summary.systems},
                              {"positroids", summary.positroids},
                              {"counterexamples", summary.counterexamples},
                              {"wall_ms", summary.wall_ms}},
                         pretty);
            if (summary.counterexamples > 0) return 2;
        } else if (wld_check->parsed()) {
            const WilsonLoopDiagram w = wld_of(detail::read_json(input_path, in));
            const Admissibility a = is_admissible(w);
            json result{{"admissible", a.admissible}};
            if (a.violating_subdiagram) {
                json v = json::array();
                for (int i : *a.violating_subdiagram) v.push_back(i + 1);
                result["violating_subdiagram"] = v;
            }
            if (a.crossing_pair) {
                const auto [x, y] = *a.crossing_pair;
                const Propagator p = w.propagators()[static_cast<std::size_t>(x)];
                const Propagator q = w.propagators()[static_cast<std::size_t>(y)];
                result["crossing_pair"] = json::array(
                    {json::array({p.first, p.second}), json::array({q.first, q.second})});
            }
            detail::emit(out, result, pretty);
        } else if (wld_convert->parsed()) {
            detail::emit(out, json_of(to_set_system(wld_of(detail::read_json(input_path, in)))),
                         pretty);
        } else if (wld_equiv->parsed()) {
            const json j = detail::read_json(input_path, in);
            if (!j.contains("first") || !j.contains("second"))
                throw domain_error("equiv input needs fields \"first\" and \"second\"");
            detail::emit(
                out,
                json{{"equivalent", wld_equivalent(wld_of(j.at("first")), wld_of(j.at("second")))}},
                pretty);
        } else if (wld_uncross->parsed()) {
            detail::emit(out, json_of(uncross(wld_of(detail::read_json(input_path, in)))), pretty);
        } else if (wld_catalan->parsed()) {
            detail::emit(out,
                         json{{"vertices", catalan_vertices},
                              {"count", noncrossing_exact_count(catalan_vertices)}},
                         pretty);
        } else if (cmd_oracle->parsed()) {
            const SetSystem s = set_system_of(detail::read_json(input_path, in));
            const Matroid by_field = matroid_from_matrix(random_evaluation(s, oracle_seed, oracle_prime));
            const Matroid by_matching = transversal_matroid(s);
            detail::emit(out,
                         json{{"matroid", json_of(by_field)},
                              {"agrees_with_matching", by_field == by_matching},
                              {"seed", oracle_seed},
                              {"prime", oracle_prime}},
                         pretty);
        }
    } catch (const json::parse_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const anomaly_error& e) {
        err << "anomaly: " << e.what() << "\n";
        return 2;
    } catch (const rank_deficient_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace shapeloci::cli
