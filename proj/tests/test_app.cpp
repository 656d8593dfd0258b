#include "wedgelab/suites.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace wedgelab;
using namespace wedgelab::app;

TEST_CASE("config parsing", "[app]")
{
    const std::string text = R"(
# comment
[run]
seed = 7
suites = geometry, warp

[model]
name = sinh_gordon
g = 1.5     # inline comment

[grid]
points = 8
theta_max = 4.5
)";
    const auto kv = KeyValueConfig::parse(text);
    CHECK(kv.get("model.name", "") == "sinh_gordon");
    CHECK(kv.get_double("model.g", 0.0) == Catch::Approx(1.5));
    CHECK(kv.get_int("run.seed", 0) == 7);
    CHECK(kv.get_list("run.suites") == std::vector<std::string>{"geometry", "warp"});

    const auto cfg = RunConfig::from(kv);
    CHECK(cfg.grid_points == 8);
    CHECK(cfg.grid_theta_max == Catch::Approx(4.5));
    CHECK(cfg.build_model().name() == "sinh_gordon");

    CHECK_THROWS_AS(KeyValueConfig::parse("[broken\nkey = 1"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("novalue"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from(KeyValueConfig::parse("[grid]\npoints = 1")), ConfigError);
    CHECK_THROWS_AS(RunConfig::from(KeyValueConfig::parse("[model]\nname = nosuch")), ConfigError);
    CHECK_THROWS_AS(RunConfig::from(KeyValueConfig::parse("[model]\ng = abc")), ConfigError);
}

TEST_CASE("report serialization round-trip", "[app]")
{
    Report rep;
    rep.timestamp = "2000-01-01T00:00:00Z";
    rep.config_echo = {{"model.name", "ising"}};
    rep.records.push_back(make_record("smatrix", "unitarity", "Def. 3.1 a", 1e-14, 1e-10));
    rep.records.push_back(make_flag_record("geometry", "flag", "Prop. 2.2", true));
    Table t;
    t.header = {"s", "total"};
    t.rows = {{0.5, 1.25}, {1.0, 1.0}};
    rep.tables["nuclearity_scan"] = t;

    const auto j = to_json(rep);
    const auto back = report_from_json(j);
    CHECK(back.records.size() == 2);
    CHECK(back.records[0].check == "unitarity");
    CHECK(back.records[0].anchor == "Def. 3.1 a");
    CHECK(back.records[0].pass);
    CHECK(back.tables.at("nuclearity_scan").rows[1][1] == 1.0);
    CHECK(to_json(back).dump() == j.dump());

    // empty report is valid JSON
    const Report empty;
    CHECK_FALSE(to_json(empty).dump().empty());
}

TEST_CASE("csv export layout", "[app]")
{
    Report rep;
    rep.timestamp = "2000-01-01T00:00:00Z";
    rep.records.push_back(make_record("nuclearity", "scan", "Sec. 3.3", 0.0, 1.0));
    Table t;
    t.header = {"s", "total", "n0", "n1"};
    t.rows = {{0.5, 2.0, 1.0, 1.0}};
    rep.tables["nuclearity_scan"] = t;

    const auto dir = std::filesystem::temp_directory_path() / "wedgelab_csv_test";
    std::filesystem::remove_all(dir);
    const auto files = export_csv(rep, dir.string());
    REQUIRE(files.size() == 2);
    std::ifstream in(dir / "nuclearity_scan.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "s,total,n0,n1");
}

TEST_CASE("suite battery passes for the default Ising config and is deterministic", "[app][suites]")
{
    RunConfig cfg;
    cfg.model_name = "ising";
    cfg.seed = 42;
    Report rep1 = run_all(cfg);
    for (const auto& r : rep1.records) {
        INFO(r.suite << " / " << r.check << " residual " << r.residual << " tol " << r.tolerance);
        CHECK((r.pass || r.informational));
    }
    CHECK(rep1.overall_pass());
    CHECK(rep1.skipped.empty());

    Report rep2 = run_all(cfg);
    CHECK(to_json(rep1, false).dump() == to_json(rep2, false).dump());

    // a different seed still passes (property, not a fixture)
    cfg.seed = 1234;
    CHECK(run_all(cfg).overall_pass());
}

TEST_CASE("broken-S fixture fails the smatrix suite and gates dependents", "[app][suites]")
{
    RunConfig cfg;
    cfg.model_name = "broken";
    cfg.suites = {"smatrix", "zf", "wedgefield"};
    const Report rep = run_all(cfg);
    bool smatrix_failed = false;
    for (const auto& r : rep.records)
        if (r.suite == "smatrix" && !r.pass && !r.informational) smatrix_failed = true;
    CHECK(smatrix_failed);
    CHECK_FALSE(rep.overall_pass());
    bool zf_skipped = false;
    for (const auto& s : rep.skipped)
        if (s.find("zf") == 0) zf_skipped = true;
    CHECK(zf_skipped);
    for (const auto& r : rep.records) CHECK(r.suite != "zf");
}

TEST_CASE("nc_exp is informational-fail in the regularity suite", "[app][suites]")
{
    RunConfig cfg;
    cfg.model_name = "nc_exp";
    cfg.kappa = 1.0;
    cfg.suites = {"smatrix", "regularity"};
    const Report rep = run_all(cfg);
    bool info_fail = false;
    for (const auto& r : rep.records)
        if (r.suite == "regularity" && r.informational) info_fail = true;
    CHECK(info_fail);
    // the S-matrix axioms themselves pass (crossing via sinh(i pi - z) = sinh z)
    for (const auto& r : rep.records)
        if (r.suite == "smatrix") CHECK(r.pass);
    CHECK(rep.overall_pass()); // informational records do not fail the run
}

TEST_CASE("every record carries a source anchor", "[app][suites]")
{
    RunConfig cfg;
    cfg.model_name = "sinh_gordon";
    cfg.g = 1.0;
    const Report rep = run_all(cfg);
    for (const auto& r : rep.records) {
        INFO(r.suite << " / " << r.check);
        CHECK_FALSE(r.anchor.empty());
    }
    CHECK(rep.overall_pass());
}
