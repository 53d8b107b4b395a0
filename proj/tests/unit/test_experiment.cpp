#include <doctest.h>

#include "pvl/experiment.hpp"
#include "set_oracles.hpp"
#include "test_support.hpp"

using namespace pvl;

TEST_CASE("wire formats round-trip") {
    Mix64 rng(701);
    for (int iter = 0; iter < 200; ++iter) {
        PadicApprox x = pvl::test::random_padic(rng, 3, 1 + rng.below(6), 2);
        CHECK(padic_from_json(padic_to_json(x)) == x);
    }
    for (int iter = 0; iter < 100; ++iter) {
        WindowSet s = pvl::test::random_window(rng, 3, 1, 3, 2);
        WindowSet back = window_from_json(window_to_json(s));
        CHECK(back.scale == s.scale);
        CHECK(back.core.residues == s.core.residues);
        CHECK(back.tail == s.tail);
        CHECK(back.punctures_removed.size() == s.punctures_removed.size());
    }

    Json j = Json::parse(R"({"p":3,"n":1,"scale":0,"level":2,"residues":[[0]],
                             "punctures_removed":[],"points_added":[],"tail":false})");
    WindowSet s = window_from_json(j);
    CHECK(s.core.residues == std::vector<ResiduePoint>{{0}});
    CHECK(measure(s.core) == Rat(1, 9));

    QuotientDescriptor d =
        quotient_descriptor_from_json(Json::parse(R"({"kind":"units","p":3,"level":2})"));
    CHECK(d.scheme.kind == GroupKind::Units);
    CHECK(d.level == 2);

    CHECK_THROWS_AS(padic_from_json(Json::parse(R"({"p":3,"digits":[0]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        padic_from_json(Json::parse(R"({"p":3,"shift":0,"digits":[1],"precision":7})")),
        std::invalid_argument);
}

TEST_CASE("set system json") {
    FiniteQuotient units(GroupScheme{GroupKind::Units, 3, 1}, 2);
    SetSystem fam = ball_coset_system(units);
    SetSystem back = set_system_from_json(set_system_to_json(fam));
    CHECK(back.ground == fam.ground);
    CHECK(back.family.size() == fam.family.size());
    CHECK(back.translation_closed == fam.translation_closed);
}

TEST_CASE("config validation diagnoses fields") {
    CHECK_THROWS_WITH_AS(parse_config(Json::parse(R"({})")), "pipeline: missing", ConfigError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"pipeline":3})")), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(Json::parse(R"({"pipeline":[{}]})")),
                         "pipeline[0].op: missing", ConfigError);

    RunConfig empty = parse_config(Json::parse(R"({"pipeline":[],"seed":42})"));
    RunOutputs out = run_experiment(empty);
    CHECK(out.report.at("steps").empty());
    CHECK(out.report.at("schema") == 1);
    CHECK(out.csvs.empty());

    RunConfig bad_step = parse_config(
        Json::parse(R"({"pipeline":[{"op":"net_experiment"}],"seed":1})"));
    CHECK_THROWS_AS(run_experiment(bad_step), ConfigError);
    RunConfig bad_op = parse_config(Json::parse(R"({"pipeline":[{"op":"nope"}]})"));
    CHECK_THROWS_AS(run_experiment(bad_op), ConfigError);
}

TEST_CASE("pipelines are deterministic across reruns and worker counts") {
    Json config_json = Json::parse(R"({
        "pipeline": [
            {"op": "net_size_sweep", "k": [1, 2], "epsilon": ["1/2", "1/4"]},
            {"op": "net_experiment",
             "group": {"kind": "units", "p": 3, "level": 3},
             "epsilon": "1/4", "trials": 40, "sample_size_override": 100},
            {"op": "cover_study",
             "group": {"kind": "additive", "p": 3, "level": 2},
             "count": 25},
            {"op": "fsg_witness",
             "group": {"kind": "additive", "p": 3, "level": 2},
             "epsilon": "1/3"}
        ],
        "seed": 42,
        "workers": 1
    })");
    RunConfig one = parse_config(config_json);
    config_json["workers"] = 4;
    RunConfig four = parse_config(config_json);

    RunOutputs a = run_experiment(one);
    RunOutputs b = run_experiment(one);
    RunOutputs c = run_experiment(four);
    CHECK(a.report.dump() == b.report.dump());
    CHECK(a.report.dump() == c.report.dump());
    CHECK(a.csvs == b.csvs);
    CHECK(a.csvs == c.csvs);

    config_json["seed"] = 43;
    RunOutputs d = run_experiment(parse_config(config_json));
    CHECK(a.report.dump() != d.report.dump());
}

TEST_CASE("net size sweep rows match the oracle grid") {
    RunConfig config = parse_config(Json::parse(R"({
        "pipeline": [{"op": "net_size_sweep", "k": [1, 2, 3],
                      "epsilon": ["1/2", "1/4", "1/10"]}],
        "seed": 0
    })"));
    RunOutputs out = run_experiment(config);
    const Json& rows = out.report.at("steps").at(0).at("rows");
    REQUIRE(rows.size() == 9);
    CHECK(rows.at(0).at("n") == 1270);
    CHECK(rows.at(1).at("n") == 6250);
    CHECK(rows.at(2).at("n") == 48552);
    CHECK(rows.at(3).at("n") == 2242);
    CHECK(rows.at(4).at("n") == 10944);
    CHECK(rows.at(5).at("n") == 84402);
    CHECK(rows.at(6).at("n") == 3229);
    CHECK(rows.at(7).at("n") == 15697);
    CHECK(rows.at(8).at("n") == 120613);
    CHECK(out.csvs.count("step0_net_size_sweep.csv") == 1);
}

TEST_CASE("per-trial csv format") {
    FiniteQuotient add9(GroupScheme{GroupKind::Additive, 3, 1}, 2);
    SetSystem fam = ball_coset_system(add9);
    NetExperimentOptions opts;
    opts.sample_size_override = 4;
    NetReport rep = net_experiment(add9, fam, NetRequest::standard(2, Rat(1, 4)), 3, 9, opts);
    std::string csv = net_report_to_csv(rep);
    CHECK(csv.rfind("trial,N,missed_count,max_discrepancy\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
    CHECK(csv.find("0,4,") != std::string::npos);
}

TEST_CASE("compact locus step") {
    Json sets = Json::array();
    for (int t = 0; t < 3; ++t) {
        Json s = Json::parse(R"({"p":3,"n":1,"scale":0,"level":1,
                                 "residues":[[0],[1],[2]],
                                 "punctures_removed":[],"points_added":[],"tail":false})");
        if (t == 0) {
            s["punctures_removed"] = Json::array(
                {Json::array({Json{{"p", 3}, {"shift", 0}, {"digits", {0, 0, 0}}}})});
        }
        sets.push_back(s);
    }
    Json config = Json{{"pipeline", Json::array({Json{{"op", "compact_locus"}, {"sets", sets}}})},
                       {"seed", 0}};
    RunOutputs out = run_experiment(parse_config(config));
    CHECK(out.report.at("steps").at(0).at("indices") == Json::array({1, 2}));
}
