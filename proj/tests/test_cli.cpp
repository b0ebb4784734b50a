#include <sstream>

#include "doctest.h"
#include "shapeloci/cli.hpp"
#include "test_helpers.hpp"

using namespace shapeloci;
using namespace shapeloci::testing;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult invoke(const std::vector<std::string>& args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

const std::string kRunning = R"({"n":4,"sets":[[1,3,4],[1,2],[2,3]]})";

} // namespace

TEST_CASE("cli: worked examples") {
    SUBCASE("dim") {
        const CliResult r = invoke({"dim"}, kRunning);
        CHECK(r.code == 0);
        CHECK(json::parse(r.out) == json{{"dimension", 3}});
    }
    SUBCASE("matroid") {
        const CliResult r = invoke({"matroid"}, kRunning);
        CHECK(r.code == 0);
        CHECK(matroid_of(json::parse(r.out)) == Matroid::uniform(3, 4));
    }
    SUBCASE("minimal: test plus reduction") {
        const CliResult r = invoke({"minimal"}, kRunning);
        CHECK(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j.at("minimal") == false);
        CHECK(j.at("violating") == json::array({1, 2, 3}));
        CHECK(set_system_of(j.at("reduced")) == sys(4, {{3, 4}, {1, 2}, {2, 3}}));
    }
    SUBCASE("interval-rank reproduces the printed matrix") {
        const CliResult r =
            invoke({"interval-rank"}, R"({"n":6,"sets":[[1,2,4,5],[2,3],[5,6]]})");
        CHECK(r.code == 0);
        const json expected = {{"n", 6},
                               {"rows", json::array({json::array({1, 2, 2, 2, 3, 3}),
                                                     json::array({1, 2, 2, 3, 3}),
                                                     json::array({1, 2, 3, 3}),
                                                     json::array({1, 2, 2}), json::array({1, 2}),
                                                     json::array({1})})}};
        CHECK(json::parse(r.out) == expected);
    }
    SUBCASE("interval-envelope round trip through the rank matrix") {
        const CliResult rank =
            invoke({"interval-rank"}, R"({"n":6,"sets":[[1,2,4,5],[2,3],[5,6]]})");
        const CliResult env = invoke({"interval-envelope", "--k", "3"}, rank.out);
        CHECK(env.code == 0);
        const Matroid m = matroid_of(json::parse(env.out));
        CHECK(m.bases().size() == 15);
        CHECK(m.is_basis(gs({1, 4, 5})));
    }
    SUBCASE("is-positroid accepts both input shapes") {
        const CliResult by_system = invoke({"is-positroid"}, R"({"n":4,"sets":[[1,3,4],[2,4]]})");
        CHECK(json::parse(by_system.out) == json{{"positroid", false}});
        const CliResult by_matroid =
            invoke({"is-positroid"}, json_of(Matroid::uniform(2, 4)).dump());
        CHECK(json::parse(by_matroid.out) == json{{"positroid", true}});
    }
    SUBCASE("crossings") {
        const CliResult r = invoke({"crossings"}, R"({"n":4,"sets":[[1,3,4],[2,4]]})");
        const json j = json::parse(r.out);
        REQUIRE(j.at("crossings").size() == 1);
        CHECK(j.at("crossings")[0] ==
              json{{"i", 1}, {"j", 2}, {"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}});
    }
    SUBCASE("ec") {
        CHECK(json::parse(invoke({"ec"}, R"({"n":4,"sets":[[3,4],[1,2],[2,3]]})").out) ==
              json{{"ec", 0}});
    }
    SUBCASE("gale-minimal with a=4") {
        const CliResult r =
            invoke({"gale-minimal", "--a", "4"}, R"({"n":6,"sets":[[1,2,3,4],[1,2,3,5],[4,5,6]]})");
        CHECK(set_system_of(json::parse(r.out)) ==
              sys(6, {{1, 2, 4, 5}, {1, 3, 4, 5}, {4, 5, 6}}));
    }
    SUBCASE("pivot-targets") {
        const CliResult r = invoke({"pivot-targets", "--set", "1"},
                                   R"({"n":4,"sets":[[1,2],[2,3],[3,4]]})");
        CHECK(json::parse(r.out) ==
              json{{"targets", json::array({json::array({1, 2}), json::array({1, 3}),
                                            json::array({1, 4})})}});
    }
    SUBCASE("is-transversal on a non-transversal positroid") {
        std::vector<GroundSubset> bases;
        for_each_k_subset(6, 2, [&](GroundSubset b) {
            if (b == gs({1, 2}) || b == gs({3, 4}) || b == gs({5, 6})) return;
            bases.push_back(b);
        });
        const CliResult r = invoke({"is-transversal"}, json_of(Matroid(6, 2, bases)).dump());
        CHECK(json::parse(r.out) == json{{"transversal", false}});
    }
    SUBCASE("wld subcommands") {
        const std::string diagram = R"({"n":6,"propagators":[[2,4],[4,6]]})";
        CHECK(json::parse(invoke({"wld", "check"}, diagram).out).at("admissible") == true);
        CHECK(set_system_of(json::parse(invoke({"wld", "convert"}, diagram).out)) ==
              sys(6, {{2, 3, 4, 5}, {1, 4, 5, 6}}));
        const CliResult eq = invoke(
            {"wld", "equiv"},
            R"({"first":{"n":6,"propagators":[[2,4],[4,6]]},"second":{"n":6,"propagators":[[2,4],[4,6]]}})");
        CHECK(json::parse(eq.out) == json{{"equivalent", true}});
        CHECK(json::parse(invoke({"wld", "catalan", "--vertices", "6"}).out) ==
              json{{"vertices", 6}, {"count", 5}});
        const CliResult crossing_check =
            invoke({"wld", "check"}, R"({"n":6,"propagators":[[1,3],[2,4]]})");
        const json cj = json::parse(crossing_check.out);
        CHECK(cj.at("admissible") == false);
        CHECK(cj.at("crossing_pair") ==
              json::array({json::array({1, 3}), json::array({2, 4})}));
        const CliResult unx = invoke({"wld", "uncross"}, R"({"n":6,"propagators":[[1,3],[2,4]]})");
        CHECK(unx.code == 0);
        const WilsonLoopDiagram fixed = wld_of(json::parse(unx.out));
        CHECK(is_admissible(fixed).admissible);
    }
    SUBCASE("oracle") {
        const CliResult r = invoke({"oracle", "--seed", "5"}, kRunning);
        const json j = json::parse(r.out);
        CHECK(j.at("agrees_with_matching") == true);
        CHECK(matroid_of(j.at("matroid")) == Matroid::uniform(3, 4));
    }
}

TEST_CASE("cli: verify-conjecture") {
    const CliResult r = invoke({"verify-conjecture", "--max-n", "5", "--max-k", "2"});
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string line, last;
    long long records = 0;
    while (std::getline(lines, line)) {
        REQUIRE(!json::parse(line).is_discarded());
        last = line;
        ++records;
    }
    const json summary = json::parse(last);
    CHECK(summary.at("summary") == true);
    CHECK(summary.at("counterexamples") == 0);
    CHECK(records == summary.at("systems").get<long long>() + 1);

    SUBCASE("resume skips already-reported systems") {
        std::ostringstream report;
        report << r.out;
        const std::string path = "/tmp/shapeloci_resume_test.jsonl";
        {
            std::ofstream f(path);
            f << r.out;
        }
        const CliResult resumed =
            invoke({"verify-conjecture", "--max-n", "5", "--max-k", "2", "--resume", path});
        const json resumed_summary = json::parse(resumed.out.substr(resumed.out.rfind('\n', resumed.out.size() - 2) + 1));
        CHECK(resumed_summary.at("systems") == 0);
    }
}

TEST_CASE("cli: round trips and determinism") {
    SUBCASE("emitted JSON re-parses to an equal value") {
        std::mt19937_64 rng(199);
        for (int trial = 0; trial < 20; ++trial) {
            const SetSystem s = random_full_rank_system(rng, 6, 3);
            CHECK(set_system_of(json::parse(json_of(s).dump())) == s);
            const Matroid m = transversal_matroid(s);
            CHECK(matroid_of(json::parse(json_of(m).dump())) == m);
            const IntervalRankMatrix r = interval_rank_matrix(s);
            CHECK(interval_rank_matrix_of(json::parse(json_of(r).dump())) == r);
        }
        const WilsonLoopDiagram w(6, {{2, 4}, {4, 6}});
        CHECK(wld_of(json::parse(json_of(w).dump())) == w);
    }
    SUBCASE("identical invocations produce byte-identical output") {
        for (const auto& args : std::vector<std::vector<std::string>>{
                 {"matroid"}, {"minimal"}, {"dim"}, {"oracle", "--seed", "11"}}) {
            const CliResult a = invoke(args, kRunning);
            const CliResult b = invoke(args, kRunning);
            CHECK(a.code == b.code);
            CHECK(a.out == b.out);
        }
        // The conjecture report is deterministic except for the summary's wall-time
        // field; records must match byte for byte across thread counts.
        const CliResult a = invoke({"verify-conjecture", "--max-n", "5", "--max-k", "2",
                                    "--threads", "2"});
        const CliResult b = invoke({"verify-conjecture", "--max-n", "5", "--max-k", "2",
                                    "--threads", "1"});
        std::istringstream la(a.out), lb(b.out);
        std::string linea, lineb;
        while (std::getline(la, linea)) {
            REQUIRE(std::getline(lb, lineb));
            json ja = json::parse(linea), jb = json::parse(lineb);
            if (ja.contains("wall_ms")) {
                ja.erase("wall_ms");
                jb.erase("wall_ms");
                CHECK(ja == jb);
            } else {
                CHECK(linea == lineb);
            }
        }
        CHECK(!std::getline(lb, lineb));
    }
}

TEST_CASE("cli: errors and exit codes") {
    SUBCASE("malformed JSON reports the position and exits 1") {
        const CliResult r = invoke({"dim"}, "{\"n\": 4, ");
        CHECK(r.code == 1);
        CHECK(r.err.find("error") != std::string::npos);
    }
    SUBCASE("unknown verb exits 1 with usage") {
        const CliResult r = invoke({"frobnicate"});
        CHECK(r.code == 1);
        CHECK(!r.err.empty());
    }
    SUBCASE("domain errors exit 1") {
        CHECK(invoke({"dim"}, R"({"n":2,"sets":[[1],[1]]})").code == 1);          // rank deficient
        CHECK(invoke({"gale-minimal", "--a", "1"}, kRunning).code == 1);           // not minimal
        CHECK(invoke({"wld", "check"}, R"({"n":6,"propagators":[[2,3]]})").code == 1);
    }
    SUBCASE("pretty printing is still valid JSON") {
        const CliResult r = invoke({"--pretty", "dim"}, kRunning);
        CHECK(r.code == 0);
        CHECK(json::parse(r.out) == json{{"dimension", 3}});
        CHECK(r.out.find('\n') != std::string::npos);
    }
}
