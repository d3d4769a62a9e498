#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "pmm/protocol/audits.hpp"
#include "pmm/rng.hpp"

using namespace pmm;
using namespace pmm::protocol;

static net::Network ring(uint32_t n) {
    net::Network netw;
    netw.n = n;
    netw.horizon = 24;
    for (uint32_t v = 0; v < n; v++)
        netw.edges.push_back({v, (v + 1) % n, net::DelayFn::affine(1.0, 0.0), 1.0});
    netw.finalize();
    return netw;
}

/* Loose records with random trajectories; the counting audits never
 * look at routing validity. */
static std::vector<net::TripRecord> random_trips(Rng& rng, uint32_t num_edges, size_t count) {
    std::vector<net::TripRecord> trips;
    for (size_t i = 0; i < count; i++) {
        net::TripRecord trip;
        trip.trip_id = i + 1;
        trip.vehicle.vehicle_id = 100 + i;
        const int64_t len = rng.int_range(1, 6);
        for (int64_t k = 0; k < len; k++)
            trip.trajectory.push_back({uint32_t(rng.below(num_edges)), k});
        trip.pickup_time = rng.int_range(0, len);
        trip.dropoff_time = len;
        trips.push_back(trip);
    }
    return trips;
}

/* k records that each cross edge 0 exactly once. */
static std::vector<net::TripRecord> unit_trips(size_t k) {
    std::vector<net::TripRecord> trips;
    for (size_t i = 0; i < k; i++) {
        net::TripRecord trip;
        trip.trip_id = i + 1;
        trip.vehicle.vehicle_id = 100 + i;
        trip.trajectory = {{0, 0}};
        trip.pickup_time = 0;
        trip.dropoff_time = 1;
        trips.push_back(trip);
    }
    return trips;
}

TEST_CASE("traversal indicators match a brute-force count") {
    Rng rng(41);
    const auto trips = random_trips(rng, 6, 40);
    uint64_t sum = 0;
    for (uint32_t e = 0; e < 6; e++) {
        uint64_t brute = 0;
        for (const auto& trip : trips) {
            bool hit = false;
            for (const auto& tv : trip.trajectory) hit = hit || tv.edge == e;
            brute += hit;
        }
        CHECK(phi(e, trips) == brute);
        sum += brute;
    }
    CHECK(phi_total(trips) == sum);
}

TEST_CASE("round windows split on entry steps") {
    net::TripRecord trip;
    trip.trip_id = 1;
    trip.trajectory = {{0, 3}, {0, 4}, {1, 8}};
    trip.pickup_time = 0;
    trip.dropoff_time = 9;
    const std::vector<net::TripRecord> trips = {trip};
    CHECK(phi_round(0, 0, 4, trips) == 1);  // entry 3 lands in [0,4)
    CHECK(phi_round(0, 1, 4, trips) == 1);  // entry 4 lands in [4,8)
    CHECK(phi_round(1, 1, 4, trips) == 0);  // entry 8 is the next round
    CHECK(phi_round(1, 2, 4, trips) == 1);
    CHECK_THROWS_AS(phi_round(0, 0, 0, trips), std::invalid_argument);
}

TEST_CASE("an invented trip raises the roadside total by its edge count") {
    Rng rng(17);
    const auto truth = random_trips(rng, 6, 12);
    auto committed = truth;
    net::TripRecord fake;
    fake.trip_id = 999;
    fake.vehicle.vehicle_id = 999;
    fake.trajectory = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};  // four distinct edges
    fake.pickup_time = 0;
    fake.dropoff_time = 4;
    committed.push_back(fake);

    CHECK(phi_total(committed) == phi_total(truth) + 4);
    const uint64_t observed = phi_total(truth);
    CHECK(ara_test(observed, truth, 0.0));
    CHECK(!ara_test(observed, committed, 0.0));
}

TEST_CASE("tolerance admits exactly the counts within eps of the observation") {
    CHECK(ara_test(100, unit_trips(95), 0.05));   // off by 5 == 0.05 * 100
    CHECK(!ara_test(100, unit_trips(94), 0.05));  // off by 6
    CHECK(ara_test(100, unit_trips(105), 0.05));
    CHECK(!ara_test(100, unit_trips(106), 0.05));
    CHECK(ara_test(100, unit_trips(100), 0.0));
    CHECK(!ara_test(100, unit_trips(101), 0.0));
}

TEST_CASE("sensor permissions need both operators") {
    Rng rng(5);
    SensorState sensor;
    sensor.sig = crypto::sig_keygen(rng);
    sensor.box = crypto::box_keygen(rng);
    const auto reader = crypto::box_keygen(rng);

    CHECK(!sensor_allows_read(sensor, reader.pk));  // collecting: nobody reads
    CHECK(!sensor_whitelist_add(sensor, reader.pk, true, false));
    CHECK(!sensor_whitelist_add(sensor, reader.pk, false, true));
    CHECK(sensor.phase == SensorPhase::Collecting);
    CHECK(sensor.receivers.empty());

    CHECK(sensor_whitelist_add(sensor, reader.pk, true, true));
    CHECK(sensor.phase == SensorPhase::Reporting);
    CHECK(sensor_allows_read(sensor, reader.pk));
    const auto stranger = crypto::box_keygen(rng);
    CHECK(!sensor_allows_read(sensor, stranger.pk));

    sensor.phase = SensorPhase::Erased;
    CHECK(!sensor_whitelist_add(sensor, stranger.pk, true, true));
    CHECK(!sensor_allows_read(sensor, reader.pk));
}

TEST_CASE("the anonymous audit reports one total and nothing readable") {
    const auto netw = ring(6);
    Rng trip_rng(23);
    const auto truth = random_trips(trip_rng, 6, 20);

    Rng ma(1), mp(2), sensors(3);
    const auto out = ara_run(netw, truth, {0.0, 0.0}, ma, mp, sensors);
    CHECK(out.phi == phi_total(truth));
    CHECK(out.election.ok);
    CHECK(out.leader < 6);
    CHECK(out.ciphertexts.size() == 6);

    // scripted access checks happened and were refused
    auto has_event = [&](const char* needle) {
        return std::any_of(out.events.begin(), out.events.end(), [&](const std::string& e) {
            return e.find(needle) != std::string::npos;
        });
    };
    CHECK(has_event("early read request rejected"));
    CHECK(has_event("one-sided whitelist request refused"));
    CHECK(has_event("sensors erased"));

    // an eavesdropper with its own key opens none of the reports
    Rng eve_rng(55);
    const auto eve = crypto::box_keygen(eve_rng);
    for (const auto& ct : out.ciphertexts) CHECK(!crypto::pke_decrypt(eve, ct).has_value());

    // bit-for-bit replay under the same seeds
    Rng ma2(1), mp2(2), sensors2(3);
    const auto again = ara_run(netw, truth, {0.0, 0.0}, ma2, mp2, sensors2);
    CHECK(again.phi == out.phi);
    CHECK(again.leader == out.leader);
    CHECK(again.ciphertexts == out.ciphertexts);

    // full dropout observes nothing
    Rng ma3(1), mp3(2), sensors3(3);
    const auto blind = ara_run(netw, truth, {0.0, 1.0}, ma3, mp3, sensors3);
    CHECK(blind.phi == 0);
}

TEST_CASE("audit sampling draws the scheduled number of edges uniformly") {
    const Rng base(77);
    CHECK(rra_sample(base, 10, 0.1, 0).size() == 1);
    CHECK(rra_sample(base, 10, 0.3, 0).size() == 3);
    CHECK(rra_sample(base, 10, 0.5, 0).size() == 5);
    CHECK(rra_sample(base, 10, 0.3, 4) == rra_sample(base, 10, 0.3, 4));

    for (uint32_t e : rra_sample(base, 10, 0.5, 1)) CHECK(e < 10);
    const auto picked = rra_sample(base, 10, 0.5, 2);
    CHECK(std::set<uint32_t>(picked.begin(), picked.end()).size() == picked.size());

    // inclusion frequency of one edge across many authority seeds
    int hits = 0;
    const int n = 600;
    for (int seed = 0; seed < n; seed++) {
        const Rng authority(1000 + seed);
        const auto sample = rra_sample(authority, 10, 0.3, 0);
        hits += std::find(sample.begin(), sample.end(), 3u) != sample.end();
    }
    const double freq = double(hits) / n;
    CHECK(std::fabs(freq - 0.3) < 0.1);  // > 5 sigma slack at n = 600
}

TEST_CASE("sampled sensors measure distinct vehicles per window") {
    const auto netw = ring(4);
    // A and B cross edge 0 in the first window, C crosses in the second
    std::vector<net::TripRecord> truth;
    net::TripRecord a;
    a.trip_id = 1;
    a.vehicle.vehicle_id = 101;
    a.trajectory = {{0, 1}, {1, 2}};
    a.pickup_time = 1;
    a.dropoff_time = 3;
    net::TripRecord b = a;
    b.trip_id = 2;
    b.vehicle.vehicle_id = 102;
    b.trajectory = {{0, 2}, {1, 3}};
    net::TripRecord c = a;
    c.trip_id = 3;
    c.vehicle.vehicle_id = 103;
    c.trajectory = {{0, 5}, {1, 6}};
    c.pickup_time = 5;
    c.dropoff_time = 7;
    truth = {a, b, c};

    RraConfig config;
    config.p = 1.0;  // audit everything
    config.round_len = 4;
    config.rounds = 2;
    const Rng ma(9);
    Rng sensors(10);
    const auto out = rra_run(netw, truth, config, ma, sensors);
    CHECK(out.audited.size() == 8);

    CHECK(phi_round(0, 0, 4, truth) == 2);
    CHECK(phi_round(0, 1, 4, truth) == 1);
    CHECK(rra_test(out, truth, config.round_len).passed);

    // booking the approach late removes a measured crossing
    auto committed = truth;
    committed[0].trajectory.erase(committed[0].trajectory.begin());  // edge 0 at t=1 gone
    committed[0].match_time = 2;
    const auto caught = rra_test(out, committed, config.round_len);
    CHECK(!caught.passed);
    REQUIRE(!caught.mismatches.empty());
    CHECK(caught.mismatches[0].find("edge 0 round 0") != std::string::npos);

    // an audit that happens to skip the doctored window sees nothing wrong
    RraOutcome partial = out;
    std::erase_if(partial.audited, [](const auto& er) { return er.first == 0 && er.second == 0; });
    std::erase_if(partial.measurements,
                  [](const Measurement& m) { return m.edge == 0 && m.round == 0; });
    CHECK(rra_test(partial, committed, config.round_len).passed);
}

TEST_CASE("relayed and unsigned measurements are ignored") {
    // synthetic audit record with keys the test controls
    Rng rng(13);
    std::vector<crypto::SigKeyPair> keys;
    RraOutcome out;
    for (int e = 0; e < 3; e++) {
        keys.push_back(crypto::sig_keygen(rng));
        out.sensor_pk.push_back(keys.back().pk);
    }
    out.audited = {{0, 0}};

    Measurement honest;
    honest.edge = 0;
    honest.round = 0;
    honest.vehicle_id = 500;
    honest.period = 3;
    honest.timestamp = 1;
    honest.location = 0;
    honest.signature = crypto::sign(keys[0].sk, measurement_payload(honest));
    out.measurements.push_back(honest);

    // properly signed, but the reading was taken on the wrong road
    Measurement relayed = honest;
    relayed.vehicle_id = 501;
    relayed.location = 2;
    relayed.signature = crypto::sign(keys[0].sk, measurement_payload(relayed));
    out.measurements.push_back(relayed);

    // garbage signature
    Measurement forged = honest;
    forged.vehicle_id = 502;
    forged.signature[5] ^= 0xFF;
    out.measurements.push_back(forged);

    // only the honest reading counts: one distinct vehicle
    net::TripRecord trip;
    trip.trip_id = 1;
    trip.vehicle.vehicle_id = 500;
    trip.trajectory = {{0, 1}};
    trip.pickup_time = 1;
    trip.dropoff_time = 2;
    CHECK(rra_test(out, {trip}, 4).passed);

    // were the relay or the forgery admitted, the count would be off
    net::TripRecord second = trip;
    second.trip_id = 2;
    second.vehicle.vehicle_id = 501;
    CHECK(!rra_test(out, {trip, second}, 4).passed);
}
