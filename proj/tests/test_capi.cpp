#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "torcode.h"

namespace {

// small, fast run: a few orbits, short windows, no period-4 points
void small_config(tc_run* r) {
    REQUIRE(tc_set(r, "n_orbits", "6") == TC_OK);
    REQUIRE(tc_set(r, "n_neg", "12") == TC_OK);
    REQUIRE(tc_set(r, "n_pos", "12") == TC_OK);
    REQUIRE(tc_set(r, "periodic_max_n", "3") == TC_OK);
    REQUIRE(tc_set(r, "periodic_n_pos", "24") == TC_OK);
    REQUIRE(tc_set(r, "loops_n_max", "8") == TC_OK);
    REQUIRE(tc_set(r, "out_dir", "capi_out") == TC_OK);
}

}  // namespace

TEST_CASE("handle lifecycle and option validation") {
    tc_run* r = tc_run_new();
    REQUIRE(r != nullptr);
    CHECK(std::string(tc_last_error(r)).empty());

    CHECK(tc_set(r, "map", "cat") == TC_OK);
    CHECK(tc_set(r, "no_such_option", "1") == TC_CONFIG_ERROR);
    CHECK(!std::string(tc_last_error(r)).empty());
    CHECK(tc_set(r, "eps", "not_a_number") == TC_CONFIG_ERROR);

    std::string text = tc_config_text(r);
    CHECK(text.find("map = cat") != std::string::npos);
    CHECK(text.find("rng_seed") != std::string::npos);
    tc_run_free(r);
}

TEST_CASE("config file loading") {
    tc_run* r = tc_run_new();
    CHECK(tc_load_config(r, "/nonexistent/torcode.cfg") == TC_CONFIG_ERROR);

    const char* path = "capi_test.cfg";
    {
        std::ofstream f(path);
        f << "# comment\n[run]\nmap = cat\nchi = 0.5\nn_orbits = 4\n";
    }
    CHECK(tc_load_config(r, path) == TC_OK);
    std::string text = tc_config_text(r);
    CHECK(text.find("n_orbits = 4") != std::string::npos);
    std::remove(path);
    tc_run_free(r);
}

TEST_CASE("stage runs, artifacts, and report") {
    tc_run* r = tc_run_new();
    small_config(r);

    CHECK(tc_run_stage(r, "no_such_stage") == TC_CONFIG_ERROR);
    REQUIRE(tc_run_stage(r, "cover") == TC_OK);

    // options are frozen once the pipeline has started
    CHECK(tc_set(r, "n_orbits", "7") == TC_CONFIG_ERROR);

    std::string report = tc_report_json(r);
    CHECK(report.find("\"reached\": \"cover\"") != std::string::npos);
    CHECK(report.find("\"epsilon_ledger\"") != std::string::npos);

    std::ifstream csv("capi_out/cover.csv");
    CHECK(csv.good());

    // running further on the same handle extends the same state
    REQUIRE(tc_run_stage(r, "count") == TC_OK);
    report = tc_report_json(r);
    CHECK(report.find("\"reached\": \"count\"") != std::string::npos);
    tc_run_free(r);
}

TEST_CASE("svg rendering") {
    tc_run* r = tc_run_new();
    small_config(r);
    const char* svg = tc_render_svg(r);
    REQUIRE(svg != nullptr);
    std::string s(svg);
    CHECK(s.rfind("<svg", 0) == 0);
    CHECK(s.find("</svg>") != std::string::npos);
    tc_run_free(r);
}

TEST_CASE("ledger-rejected configuration fails at stage time with a config error") {
    tc_run* r = tc_run_new();
    REQUIRE(tc_set(r, "map", "standard:6") == TC_OK);
    CHECK(tc_run_stage(r, "sample") == TC_CONFIG_ERROR);
    CHECK(!std::string(tc_last_error(r)).empty());
    tc_run_free(r);
}
