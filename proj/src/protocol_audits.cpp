#include "pmm/protocol/audits.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pmm::protocol {

uint64_t phi(uint32_t edge, const std::vector<net::TripRecord>& trips) {
    uint64_t count = 0;
    for (const auto& trip : trips)
        for (const auto& tv : trip.trajectory)
            if (tv.edge == edge) {
                count++;
                break;
            }
    return count;
}

uint64_t phi_round(uint32_t edge, uint64_t round, int64_t round_len,
                   const std::vector<net::TripRecord>& trips) {
    if (round_len <= 0) throw std::invalid_argument("phi_round: round_len must be positive");
    const int64_t lo = int64_t(round) * round_len, hi = lo + round_len;
    uint64_t count = 0;
    for (const auto& trip : trips)
        for (const auto& tv : trip.trajectory)
            if (tv.edge == edge && tv.entry >= lo && tv.entry < hi) {
                count++;
                break;
            }
    return count;
}

uint64_t phi_total(const std::vector<net::TripRecord>& trips) {
    uint64_t total = 0;
    for (const auto& trip : trips) {
        std::set<uint32_t> edges;
        for (const auto& tv : trip.trajectory) edges.insert(tv.edge);
        total += edges.size();
    }
    return total;
}

std::vector<std::string> RiderWitnessResult::describe() const {
    std::vector<std::string> lines;
    for (uint64_t id : discarded)
        lines.push_back("report for trip " + std::to_string(id) + " discarded: bad signature");
    for (uint64_t id : refused)
        lines.push_back("trip " + std::to_string(id) + ": inclusion proof refused");
    for (uint64_t id : bad_proof)
        lines.push_back("trip " + std::to_string(id) + ": inclusion proof failed");
    return lines;
}

RiderWitnessResult rider_witness_test(const std::vector<RiderReport>& reports,
                                      const ProviderState& provider, const crypto::Digest& sigma,
                                      const crypto::SigPublicKey& pk_mp) {
    RiderWitnessResult result;
    for (const auto& report : reports) {
        const Receipt& receipt = report.receipt;
        if (!crypto::verify_sig(pk_mp, crypto::as_span(receipt.commitment), receipt.signature)) {
            result.discarded.push_back(receipt.trip_id);
            continue;
        }
        const auto proof = respond_merkle_request(provider, receipt.commitment);
        if (!proof) {
            result.refused.push_back(receipt.trip_id);
            result.passed = false;
        } else if (!crypto::merkle_verify_leaf(sigma, receipt.commitment, *proof)) {
            result.bad_proof.push_back(receipt.trip_id);
            result.passed = false;
        }
    }
    return result;
}

bool sensor_whitelist_add(SensorState& sensor, const crypto::BoxPublicKey& receiver, bool ma_ok,
                          bool mp_ok) {
    if (!ma_ok || !mp_ok || sensor.phase == SensorPhase::Erased) return false;
    sensor.receivers.push_back(receiver);
    sensor.phase = SensorPhase::Reporting;
    return true;
}

bool sensor_allows_read(const SensorState& sensor, const crypto::BoxPublicKey& who) {
    return sensor.phase == SensorPhase::Reporting &&
           std::find(sensor.receivers.begin(), sensor.receivers.end(), who) !=
               sensor.receivers.end();
}

AraOutcome ara_run(const net::Network& net, const std::vector<net::TripRecord>& truth,
                   const AraConfig& config, Rng& ma_rng, Rng& mp_rng, Rng& sensor_rng) {
    AraOutcome out;
    std::vector<SensorState> sensors(net.edges.size());
    for (uint32_t i = 0; i < sensors.size(); i++) {
        sensors[i].id = i;
        sensors[i].edge = i;
        sensors[i].sig = crypto::sig_keygen(sensor_rng);
        sensors[i].box = crypto::box_keygen(sensor_rng);
    }

    for (const auto& trip : truth)
        for (const auto& tv : trip.trajectory) {
            const bool missed = sensor_rng.chance(config.gps_dropout);
            if (missed || tv.edge >= sensors.size()) continue;
            auto& seen = sensors[tv.edge].observed;
            if (std::find(seen.begin(), seen.end(), trip.trip_id) == seen.end())
                seen.push_back(trip.trip_id);
        }

    /* The authority trying to peek before the leader exists gets turned
     * away: collection-phase sensors serve nobody. */
    const auto ma_box = crypto::box_keygen(ma_rng);
    if (!sensors.empty() && !sensor_allows_read(sensors[0], ma_box.pk))
        out.events.push_back("sensor 0: early read request rejected, still collecting");
    if (!sensors.empty() && !sensor_whitelist_add(sensors[0], ma_box.pk, true, false))
        out.events.push_back("sensor 0: one-sided whitelist request refused");

    out.election = crypto::coin_flip(ma_rng, mp_rng);
    if (!out.election.ok) {  // honest parties; defensive only
        out.events.push_back("leader election aborted");
        return out;
    }
    out.leader = sensors.empty()
                     ? 0
                     : static_cast<uint32_t>(crypto::coin_index(out.election.bits, sensors.size()));
    out.events.push_back("leader elected: sensor " + std::to_string(out.leader));

    for (auto& sensor : sensors)
        sensor_whitelist_add(sensor, sensors[out.leader].box.pk, true, true);

    uint64_t total = 0;
    for (auto& sensor : sensors) {
        ByteWriter w;
        w.u64(sensor.observed.size());
        const Bytes ct = crypto::pke_encrypt(sensors[out.leader].box.pk, w.bytes(), sensor_rng);
        out.ciphertexts.push_back(ct);
        const auto pt = crypto::pke_decrypt(sensors[out.leader].box, ct);
        if (!pt) continue;  // cannot happen for honest sensors
        ByteReader r(*pt);
        total += r.u64();
    }
    out.phi = total;
    out.events.push_back("leader report: phi = " + std::to_string(total));

    for (auto& sensor : sensors) {
        sensor.observed.clear();
        sensor.receivers.clear();
        sensor.phase = SensorPhase::Erased;
    }
    out.events.push_back("sensors erased");
    return out;
}

bool ara_test(uint64_t phi, const std::vector<net::TripRecord>& trips, double eps) {
    const double expect = double(phi_total(trips));
    return std::fabs(double(phi) - expect) <= eps * double(phi);
}

Bytes measurement_payload(const Measurement& m) {
    ByteWriter w;
    w.u32(m.edge);
    w.u64(m.round);
    w.u64(m.vehicle_id);
    w.u8(static_cast<uint8_t>(m.period));
    w.i64(m.timestamp);
    w.u32(m.location);
    return w.take();
}

std::vector<uint32_t> rra_sample(const Rng& ma_rng, uint32_t m, double p, uint64_t round) {
    if (p < 0 || p > 1) throw std::invalid_argument("rra_sample: p outside [0,1]");
    Rng round_rng = ma_rng.derive("rra.round." + std::to_string(round));
    const auto k = static_cast<uint32_t>(std::llround(double(m) * p));
    auto picked = round_rng.sample_without_replacement(m, k);
    std::sort(picked.begin(), picked.end());
    return picked;
}

RraOutcome rra_run(const net::Network& net, const std::vector<net::TripRecord>& truth,
                   const RraConfig& config, const Rng& ma_rng, Rng& sensor_rng) {
    RraOutcome out;
    std::vector<crypto::SigKeyPair> keys;
    for (size_t e = 0; e < net.edges.size(); e++) {
        keys.push_back(crypto::sig_keygen(sensor_rng));
        out.sensor_pk.push_back(keys.back().pk);
    }

    for (uint64_t round = 0; round < config.rounds; round++) {
        const auto edges =
            rra_sample(ma_rng, static_cast<uint32_t>(net.edges.size()), config.p, round);
        const int64_t lo = int64_t(round) * config.round_len, hi = lo + config.round_len;
        std::string line = "round " + std::to_string(round) + ": edges";
        size_t taken = 0;
        for (uint32_t e : edges) {
            out.audited.emplace_back(e, round);
            line += " " + std::to_string(e);
            for (const auto& trip : truth)
                for (const auto& tv : trip.trajectory) {
                    if (tv.edge != e || tv.entry < lo || tv.entry >= hi) continue;
                    Measurement m;
                    m.edge = e;
                    m.round = round;
                    m.vehicle_id = trip.vehicle.vehicle_id;
                    m.period = net::period_of(trip, tv.entry);
                    m.timestamp = tv.entry;
                    m.location = e;
                    m.signature = crypto::sign(keys[e].sk, measurement_payload(m));
                    out.measurements.push_back(m);
                    taken++;
                }
        }
        out.events.push_back(line + ", " + std::to_string(taken) + " measurements");
    }
    return out;
}

RraReport rra_test(const RraOutcome& outcome, const std::vector<net::TripRecord>& trips,
                   int64_t round_len) {
    RraReport report;
    for (const auto& [edge, round] : outcome.audited) {
        std::set<uint64_t> vehicles;
        for (const auto& m : outcome.measurements) {
            if (m.edge != edge || m.round != round) continue;
            if (m.location != m.edge) continue;  // relayed reading, taken elsewhere
            if (edge >= outcome.sensor_pk.size() ||
                !crypto::verify_sig(outcome.sensor_pk[edge], measurement_payload(m), m.signature))
                continue;
            vehicles.insert(m.vehicle_id);
        }
        const uint64_t expect = phi_round(edge, round, round_len, trips);
        if (vehicles.size() != expect) {
            report.passed = false;
            report.mismatches.push_back(
                "edge " + std::to_string(edge) + " round " + std::to_string(round) + ": measured " +
                std::to_string(vehicles.size()) + ", committed " + std::to_string(expect));
        }
    }
    return report;
}

}  // namespace pmm::protocol
