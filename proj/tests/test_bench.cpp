#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "edgefaas/bench/drivers.hpp"
#include "edgefaas/bench/report.hpp"
#include "edgefaas/bench/scenario.hpp"
#include "edgefaas/overlay/latency.hpp"

using namespace edgefaas;
using namespace edgefaas::bench;

TEST_CASE("summary of constant samples") {
    Summary s = summarize({5, 5, 5});
    CHECK(s.mean == 5);
    CHECK(s.min == 5);
    CHECK(s.max == 5);
    CHECK(s.std == 0);
    CHECK(s.p25 == 5);
    CHECK(s.p50 == 5);
    CHECK(s.p75 == 5);
}

TEST_CASE("summary of 1..5 by hand") {
    Summary s = summarize({1, 2, 3, 4, 5});
    CHECK(s.mean == doctest::Approx(3.0));
    CHECK(s.min == 1);
    CHECK(s.max == 5);
    CHECK(s.std == doctest::Approx(std::sqrt(2.5)));  // ~1.5811, n-1 denominator
    CHECK(s.p25 == doctest::Approx(2.0));
    CHECK(s.p50 == doctest::Approx(3.0));
    CHECK(s.p75 == doctest::Approx(4.0));
}

TEST_CASE("empty samples are rejected") {
    CHECK_THROWS_AS(summarize({}), EmptySamples);
    CHECK_THROWS_AS(percentile({}, 50), EmptySamples);
}

TEST_CASE("percentiles interpolate linearly and ignore input order") {
    CHECK(percentile({4, 1, 3, 2}, 50) == doctest::Approx(2.5));
    CHECK(percentile({4, 1, 3, 2}, 0) == doctest::Approx(1.0));
    CHECK(percentile({4, 1, 3, 2}, 100) == doctest::Approx(4.0));
    CHECK(percentile({10, 20}, 25) == doctest::Approx(12.5));
}

TEST_CASE("summary ordering invariant on random samples") {
    overlay::Rng rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> samples;
        std::size_t n = 1 + rng.next_below(200);
        for (std::size_t i = 0; i < n; ++i) samples.push_back(rng.next_double() * 100);
        Summary s = summarize(samples);
        REQUIRE(s.min <= s.p25);
        REQUIRE(s.p25 <= s.p50);
        REQUIRE(s.p50 <= s.p75);
        REQUIRE(s.p75 <= s.max);
        REQUIRE(s.std >= 0);
    }
}

TEST_CASE("csv has the exact header and one row per report") {
    BenchReport r = BenchReport::make("latency", "OP", "OP-test", {1, 2, 3});
    std::string csv = reports_to_csv({r});
    CHECK(csv.starts_with("test,scenario,param,n,mean,min,max,std,p25,p50,p75\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.find("latency,OP,OP-test,3,2,") != std::string::npos);
}

TEST_CASE("csv round-trips the statistics") {
    BenchReport r = BenchReport::make("t", "AS", "threads=8", {0.5, 1.25, 9.75, 3.125});
    auto back = reports_from_csv(reports_to_csv({r}));
    REQUIRE(back.size() == 1);
    CHECK(back[0].test == r.test);
    CHECK(back[0].scenario == r.scenario);
    CHECK(back[0].param == r.param);
    CHECK(back[0].n() == r.n());
    CHECK(back[0].summary.mean == r.summary.mean);
    CHECK(back[0].summary.std == r.summary.std);
    CHECK(back[0].summary.p75 == r.summary.p75);
}

TEST_CASE("json round-trips the statistics") {
    BenchReport r = BenchReport::make("t", "CD", "5:5", {100.25, 220.5, 301.75});
    auto back = reports_from_json(reports_to_json({r}));
    REQUIRE(back.size() == 1);
    CHECK(back[0].n() == 3);
    CHECK(back[0].summary.mean == r.summary.mean);
    CHECK(back[0].summary.min == r.summary.min);
    CHECK(back[0].summary.max == r.summary.max);
}

TEST_CASE("unwritable output path raises IoError") {
    BenchReport r = BenchReport::make("t", "OP", "x", {1});
    CHECK_THROWS_AS(emit_report({r}, ReportFormat::Csv, "/nonexistent-dir/report.csv"), IoError);
}

TEST_CASE("format names") {
    CHECK(format_from_name("csv") == ReportFormat::Csv);
    CHECK(format_from_name("json") == ReportFormat::Json);
    CHECK_THROWS(format_from_name("xml"));
}

TEST_CASE("link keys are order independent") {
    CHECK(link_key("OP", "test") == "OP-test");
    CHECK(link_key("test", "OP") == "OP-test");
    CHECK(link_key("CD", "RS") == "RS-CD");
    CHECK_THROWS(link_key("XX", "OP"));
}

TEST_CASE("builtin scenarios match the declared testbed") {
    Scenario op = builtin_scenario("OP");
    CHECK(op.nodes.size() == 3);  // master + 2 workers
    int workers = 0;
    for (const auto& n : op.nodes)
        if (!n.control_plane) ++workers;
    CHECK(workers == 2);
    CHECK(op.tester_link(Site::OP).mean_ms == doctest::Approx(1.17));

    Scenario as = builtin_scenario("AS");
    CHECK(as.nodes.size() == 9);
    CHECK(as.sites_present().size() == 3);
    CHECK(as.link("RS", "CD").mean_ms == doctest::Approx(232.1));

    CHECK_THROWS_AS(builtin_scenario("XX"), ParseError);
}

TEST_CASE("scenario json round trip") {
    Scenario as = builtin_scenario("AS", 7);
    Scenario back = scenario_from_json_text(scenario_to_json_text(as));
    CHECK(back.name == as.name);
    CHECK(back.seed == as.seed);
    REQUIRE(back.nodes.size() == as.nodes.size());
    for (std::size_t i = 0; i < as.nodes.size(); ++i) {
        CHECK(back.nodes[i].name == as.nodes[i].name);
        CHECK(back.nodes[i].compute_factor == as.nodes[i].compute_factor);
    }
    CHECK(back.links == as.links);
}

TEST_CASE("missing cross-site link is reported as IncompleteLinks") {
    Scenario as = builtin_scenario("AS");
    as.links.erase("RS-CD");
    std::string text = scenario_to_json_text(as);
    CHECK_THROWS_AS(scenario_from_json_text(text), IncompleteLinks);
}

TEST_CASE("malformed scenario text is a ParseError") {
    CHECK_THROWS_AS(scenario_from_json_text("this is not json"), ParseError);
    CHECK_THROWS_AS(scenario_from_json_text("{\"name\":\"x\"}"), ParseError);
    CHECK_THROWS_AS(load_scenario("/no/such/file.json"), ParseError);
}

TEST_CASE("derived sub-seeds separate purposes") {
    CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
    CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
    CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
}

TEST_CASE("zero-profile latency probe over loopback stays under a millisecond") {
    Scenario s = builtin_scenario("OP", 3);
    for (auto& [key, profile] : s.links) profile = overlay::LatencyProfile{0, 0, 0, 0};
    BenchReport r = run_latency_bench(s, "OP", "OP", 50);
    CHECK(r.n() == 50);
    CHECK(r.summary.mean < 1.0);
}

TEST_CASE("latency bench on an undefined link is LinkDown") {
    Scenario s = builtin_scenario("OP", 3);
    s.links.erase("OP-OP");
    CHECK_THROWS_AS(run_latency_bench(s, "OP", "OP", 10), LinkDown);
}

TEST_CASE("function sweep conserves requests and is deterministic") {
    Scenario s = builtin_scenario("OP", 11);
    FaasBenchOptions opt;
    opt.thread_counts = {1, 4};
    opt.total_requests = 200;
    auto run1 = run_faas_bench(s, faas::sentiment_spec(), opt);
    auto run2 = run_faas_bench(s, faas::sentiment_spec(), opt);
    REQUIRE(run1.size() == 2);
    for (std::size_t i = 0; i < run1.size(); ++i) {
        CHECK(run1[i].issued == 200);
        CHECK(run1[i].issued == run1[i].valid + run1[i].invalid);
        REQUIRE(run1[i].report.samples == run2[i].report.samples);
    }
    CHECK(reports_to_csv({run1[0].report, run1[1].report}) ==
          reports_to_csv({run2[0].report, run2[1].report}));
}

TEST_CASE("pubsub bench completes with finite positive throughput and repeats exactly") {
    Scenario s = builtin_scenario("OP", 5);
    auto r1 = run_pubsub_bench(s, 1, 1, 64, 500, 3);
    auto r2 = run_pubsub_bench(s, 1, 1, 64, 500, 3);
    REQUIRE(r1.pub_msgs_per_s.size() == 3);
    for (double v : r1.pub_msgs_per_s) {
        CHECK(std::isfinite(v));
        CHECK(v > 0);
    }
    for (double v : r1.sub_msgs_per_s) CHECK(v > 0);
    CHECK(reports_to_csv(r1.reports(s.name)) == reports_to_csv(r2.reports(s.name)));
}

TEST_CASE("fan-out configurations deliver every message to every subscriber") {
    Scenario s = builtin_scenario("RS", 6);
    auto r = run_pubsub_bench(s, 5, 5, 64, 1'000, 2);
    CHECK(r.pub_msgs_per_s.size() == 2);  // BenchIncomplete would have thrown
    auto reports = r.reports(s.name);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].param == "5:5");
}

TEST_CASE("percolate bench is deterministic and scoring slows the slow site more") {
    Scenario s = builtin_scenario("RS", 9);
    auto on1 = run_percolate_bench(s, 200, 300, true);
    auto on2 = run_percolate_bench(s, 200, 300, true);
    CHECK(on1.report.samples == on2.report.samples);
    CHECK(on1.total_matches == on2.total_matches);

    auto off = run_percolate_bench(s, 200, 300, false);
    // Same corpus, same matches; scoring only adds service time.
    CHECK(off.total_matches == on1.total_matches);
    CHECK(on1.report.summary.mean > off.report.summary.mean);
}

TEST_CASE("multi-node percolate accrues index sync cost, single node none") {
    auto multi = run_percolate_bench(builtin_scenario("RS", 4), 100, 50, false);
    CHECK(multi.index_sync_ms > 0.0);
    Scenario one = builtin_scenario("OP", 4);
    one.nodes.erase(one.nodes.begin() + 2);  // drop one worker, keep master + worker-1
    auto single = run_percolate_bench(one, 100, 50, false);
    CHECK(single.index_sync_ms == 0.0);
}
