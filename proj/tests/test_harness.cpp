#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "pmm/sim/runner.hpp"

using namespace pmm;
using namespace pmm::sim;

static std::string scen_dir() {
    const char* dir = std::getenv("PMM_SCENARIO_DIR");
    REQUIRE_MESSAGE(dir != nullptr, "PMM_SCENARIO_DIR must point at the bundled scenarios");
    return dir;
}

static Scenario bundled(const std::string& file) {
    return load_scenario(scen_dir() + "/" + file);
}

static const char* kInline = R"(# comment lines vanish
backend opaque-sealed
network
nodes 3
horizon 30
edge 0 1 affine 1 0.1
edge 1 2 affine 1 0.1
edge 2 0 affine 1 0.1
end
request 0 2 0
requests random 4 tmax 9
receipts 1 3
mp fare 20
mp wage 2 3
strategy tamper 5 fare 1 dropoff 8
ara 0.25 dropout 0.1
rra 0.5 4 2
fine rider 75
econ 100 80 0.1
query trip-count
query regulation wait 6 emissions 40
)";

TEST_CASE("scenario text parses into the run configuration") {
    const Scenario sc = Scenario::parse(kInline, "inline");
    CHECK(sc.backend == protocol::Backend::OpaqueSealed);
    CHECK(sc.network.n == 3);
    CHECK(sc.network.edges.size() == 3);
    CHECK(sc.requests.size() == 1);
    CHECK(sc.random_requests == 4);
    CHECK(sc.random_tmax == 9);
    CHECK(sc.receipts == Scenario::Receipts::Listed);
    CHECK(sc.receipt_ids == std::vector<uint64_t>{1, 3});
    CHECK(sc.mp.trip_fare == 20);
    CHECK(sc.mp.wage_alpha == 2);
    CHECK(sc.mp.wage_beta == 3);

    const auto* tamper = std::get_if<protocol::TamperTrip>(&sc.strategy);
    REQUIRE(tamper != nullptr);
    CHECK(tamper->trip_id == 5);
    CHECK(tamper->trip_fare == 1);
    CHECK(tamper->dropoff_time == 8);
    CHECK(!tamper->driver_wage.has_value());

    CHECK(sc.use_ara);
    CHECK(sc.ara.eps == doctest::Approx(0.25));
    CHECK(sc.ara.gps_dropout == doctest::Approx(0.1));
    CHECK(sc.use_rra);
    CHECK(sc.rra.p == doctest::Approx(0.5));
    CHECK(sc.rra.rounds == 2);
    CHECK(sc.fines.rider_witness_fine == 75);
    CHECK(sc.econ.u_dishonest == 100);
    CHECK(sc.econ.detect_p == doctest::Approx(0.1));

    REQUIRE(sc.queries.size() == 2);
    CHECK(sc.queries[0].kind == protocol::QueryKind::TripCount);
    CHECK(sc.queries[1].kind == protocol::QueryKind::RegulationBundle);
    REQUIRE(sc.queries[1].predicates.size() == 2);
    CHECK(sc.queries[1].predicates[0].kind == protocol::RegPredicate::Kind::WaitTimeEquity);
    CHECK(sc.queries[1].predicates[0].tau == 6);
    CHECK(sc.queries[1].predicates[1].kind == protocol::RegPredicate::Kind::EmissionsLimit);
    CHECK(sc.queries[1].predicates[1].emission_limit == 40);
}

TEST_CASE("malformed scenarios fail with the offending line") {
    CHECK_THROWS_AS(Scenario::parse("strategy honest\n"), DecodeError);  // no network
    try {
        Scenario::parse("backend transparent\nstrategy nonsense\n");
        FAIL("expected a parse error");
    } catch (const DecodeError& err) {
        CHECK(std::string(err.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(Scenario::parse("network\nnodes 2\n"), DecodeError);  // unterminated block
    CHECK_THROWS_AS(Scenario::parse(R"(backend transparent
network
nodes 2
horizon 10
edge 0 1 affine 1 0
end
strategy honest
request 0 1 0
query wait-equity 3 regions 0
)"),
                    DecodeError);  // region map too short for the network
}

TEST_CASE("every bundled scenario loads and is runnable") {
    size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(scen_dir())) {
        if (entry.path().extension() != ".scn") continue;
        count++;
        const Scenario sc = load_scenario(entry.path().string());
        CHECK(sc.network.n > 0);
        CHECK(!sc.queries.empty());
        CHECK((!sc.requests.empty() || sc.random_requests > 0));
    }
    CHECK(count >= 20);
}

TEST_CASE("one seed replays to the byte, another seed does not") {
    const Scenario sc = bundled("26-dual-audit.scn");
    const RunResult a = run_scenario(sc, 9);
    const RunResult b = run_scenario(sc, 9);
    CHECK(a.to_text() == b.to_text());
    CHECK(a.sigma == b.sigma);
    CHECK(run_scenario(sc, 10).to_text() != a.to_text());
}

TEST_CASE("the honest baseline is accepted with no fines") {
    const RunResult run = run_scenario(bundled("01-honest-count.scn"), 4);
    CHECK(run.served == 3);
    CHECK(run.unserved == 0);
    CHECK(run.committed == 3);
    CHECK(run.riders.passed);
    CHECK(run.ran_ara);
    CHECK(run.ara_ok);
    REQUIRE(run.queries.size() == 1);
    CHECK(run.queries[0].answered);
    CHECK(run.queries[0].proof_ok);
    CHECK(run.queries[0].verdict.accepted);
    CHECK(run.total_fines == 0);
    CHECK(run.to_text().find("query trip-count answered z=count=3") != std::string::npos);
}

TEST_CASE("the sealed twin reaches the same verdict and leaks nothing") {
    const RunResult open = run_scenario(bundled("01-honest-count.scn"), 4);
    const RunResult sealed = run_scenario(bundled("02-honest-count-sealed.scn"), 4);
    CHECK(open.sigma == sealed.sigma);  // same service, same commitment
    REQUIRE(sealed.queries.size() == open.queries.size());
    CHECK(sealed.queries[0].verdict.accepted == open.queries[0].verdict.accepted);
    CHECK(sealed.queries[0].verdict.fine == open.queries[0].verdict.fine);
    CHECK(sealed.plaintext_windows == 0);
    CHECK(open.plaintext_windows > 0);  // the open backend ships the records
}

TEST_CASE("omission is caught by receipt holders and the roadside total") {
    const RunResult run = run_scenario(bundled("13-omit-caught.scn"), 11);
    CHECK(run.committed == run.served - 1);
    CHECK(!run.riders.passed);
    CHECK(run.riders.refused == std::vector<uint64_t>{2});
    CHECK(!run.ara_ok);
    REQUIRE(run.queries.size() == 1);
    CHECK(!run.queries[0].verdict.accepted);
    CHECK(run.queries[0].verdict.failure == "rider-witness");
    // one receipt fine plus the deterrent for econ (100, 80, 0.1)
    CHECK(run.queries[0].verdict.fine == 50 + 101);
    CHECK(run.total_fines == 151);
}

TEST_CASE("without receipts the roadside total still rejects, sealed sees only the bit") {
    const RunResult open = run_scenario(bundled("14-omit-no-receipts.scn"), 5);
    CHECK(open.riders.passed);
    CHECK(!open.ara_ok);
    CHECK(open.queries[0].verdict.failure == "audit");
    CHECK(open.queries[0].circuit.commit_ok);  // root honestly covers the pruned set
    CHECK(!open.queries[0].circuit.audits_ok);

    const RunResult sealed = run_scenario(bundled("15-omit-sealed.scn"), 5);
    CHECK(!sealed.queries[0].verdict.accepted);
    CHECK(sealed.queries[0].verdict.failure == "proof");
    CHECK(sealed.queries[0].circuit.detail.empty());
    CHECK(sealed.queries[0].verdict.fine == open.queries[0].verdict.fine);
}

TEST_CASE("fabricated trips swell the dataset and fail the roadside total") {
    const RunResult run = run_scenario(bundled("16-inject-caught.scn"), 6);
    CHECK(run.committed == run.served + 2);
    CHECK(!run.ara_ok);
    REQUIRE(run.queries.size() == 1);
    CHECK(run.queries[0].answered);  // count of 5 is consistent with the padded set
    CHECK(!run.queries[0].verdict.accepted);
    CHECK(run.queries[0].verdict.failure == "audit");
}

TEST_CASE("inadmissible and off-whitelist queries are refused without penalty") {
    const RunResult raw = run_scenario(bundled("11-raw-demand-refused.scn"), 8);
    REQUIRE(raw.queries.size() == 2);
    CHECK(raw.queries[0].answered);
    CHECK(raw.queries[0].verdict.accepted);
    CHECK(!raw.queries[1].answered);
    CHECK(raw.total_fines == 0);
    CHECK(raw.to_text().find("query raw-demand refused") != std::string::npos);

    const RunResult narrow = run_scenario(bundled("12-whitelist-narrow.scn"), 8);
    REQUIRE(narrow.queries.size() == 2);
    CHECK(narrow.queries[0].answered);
    CHECK(!narrow.queries[1].answered);
    CHECK(narrow.total_fines == 0);
}

TEST_CASE("the two-route pricing scenario answers the known toll vector") {
    const RunResult run = run_scenario(bundled("08-honest-pricing.scn"), 2);
    REQUIRE(run.queries.size() == 1);
    REQUIRE(run.queries[0].answered);
    const auto tolls = protocol::decode_z_tolls(run.queries[0].z);
    REQUIRE(tolls.has_value());
    REQUIRE(tolls->size() == 2);
    CHECK((*tolls)[0] == doctest::Approx(0.0).epsilon(1e-4));
    CHECK((*tolls)[1] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(run.queries[0].verdict.accepted);
}

TEST_CASE("misreported approach driving passes the books but not the road") {
    const RunResult run = run_scenario(bundled("20-misreport-approach.scn"), 3);
    REQUIRE(run.queries.size() == 1);
    CHECK(run.queries[0].answered);
    CHECK(protocol::decode_z_bit(run.queries[0].z) == true);  // books internally consistent
    CHECK(!run.ara_ok);                                       // traversals went missing
    CHECK(run.queries[0].verdict.failure == "audit");
}

TEST_CASE("sampled-round detection is partial at partial coverage") {
    const Scenario sc = bundled("22-rra-p03.scn");
    uint64_t flagged = 0;
    for (uint64_t seed = 1; seed <= 30; seed++) {
        const RunResult run = run_scenario(sc, seed);
        REQUIRE(run.queries.size() == 1);
        flagged += !run.queries[0].verdict.accepted;
    }
    CHECK(flagged > 0);
    CHECK(flagged < 30);  // a 30% sample must also miss sometimes
}

TEST_CASE("leak windows count exactly the shared 16-byte runs") {
    Bytes needle(24);
    for (size_t i = 0; i < needle.size(); i++) needle[i] = uint8_t(0xA0 + i);
    Bytes clean(64, 0x00);
    CHECK(count_leak_windows({needle}, clean) == 0);

    Bytes hay(64, 0x00);
    std::copy(needle.begin() + 4, needle.begin() + 20, hay.begin() + 10);  // one window
    CHECK(count_leak_windows({needle}, hay) == 1);

    CHECK(count_leak_windows({needle}, needle) == needle.size() - 15);
    CHECK(count_leak_windows({Bytes(8, 0xFF)}, hay) == 0);  // too short to matter
    CHECK(count_leak_windows({needle}, Bytes(4, 0xA0)) == 0);
}

TEST_CASE("stored transcripts verify against a replayed instance") {
    const Scenario sc = bundled("02-honest-count-sealed.scn");
    const RunResult run = run_scenario(sc, 7);
    REQUIRE(run.queries.size() == 1);
    const Bytes wire = run.queries[0].transcript.serialize();

    CHECK(verify_transcript_bytes(sc, 7, 0, wire));

    Bytes bent = wire;
    bent[bent.size() - 1] ^= 0x40;  // inside the attestation signature
    CHECK(!verify_transcript_bytes(sc, 7, 0, bent));

    CHECK_THROWS_AS(verify_transcript_bytes(sc, 7, 0, std::span(wire.data(), 10)), DecodeError);
    CHECK_THROWS_AS(verify_transcript_bytes(sc, 7, 5, wire), std::runtime_error);
}

TEST_CASE("run reports carry the audit trail in order") {
    const RunResult run = run_scenario(bundled("26-dual-audit.scn"), 2);
    CHECK(!run.events.empty());
    bool saw_leader = false, saw_round = false;
    for (const auto& line : run.events) {
        saw_leader |= line.find("leader elected") != std::string::npos;
        saw_round |= line.find("round 0:") != std::string::npos;
    }
    CHECK(saw_leader);
    CHECK(saw_round);
    const std::string text = run.to_text();
    CHECK(text.find("audit-total") < text.find("audit-rounds"));
    CHECK(text.find("audit-rounds") < text.find("query trip-count"));
}
