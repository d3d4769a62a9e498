#include "pmm/sim/runner.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace pmm::sim {

namespace {

void log_event(RunResult& out, std::string text) {
    static const bool live = std::getenv("PMM_LOG") != nullptr;
    if (live) std::cerr << "[pmm] " << text << "\n";
    out.events.push_back(std::move(text));
}

/* Fabricated records for the injection strategy. Each fake starts at
 * its pickup vertex (no approach leg), rides a free-flow shortest path,
 * and carries a properly signed match notice — internally flawless, so
 * only the roadside record can contradict it. */
std::vector<net::TripRecord> fabricate_trips(const net::Network& net,
                                             const protocol::ProviderState& mp, uint32_t count,
                                             Rng& rng) {
    std::vector<net::TripRecord> fakes;
    const auto weights = net::free_flow_weights(net);
    uint64_t next_id = 1;
    for (const auto& trip : mp.ground_truth) next_id = std::max(next_id, trip.trip_id + 1);

    for (uint32_t i = 0; i < count; i++) {
        uint32_t origin = uint32_t(rng.below(net.n));
        net::ShortestPaths sp;
        std::vector<uint32_t> dests;
        for (uint32_t tries = 0; tries < net.n; tries++) {
            sp = net::shortest_paths(net, origin, weights);
            for (uint32_t v = 0; v < net.n; v++)
                if (v != origin && sp.reachable(v)) dests.push_back(v);
            if (!dests.empty()) break;
            origin = (origin + 1) % net.n;
        }
        if (dests.empty()) throw std::runtime_error("fabricate_trips: network has no routes");
        const uint32_t dest = dests[rng.below(dests.size())];

        net::TripRecord fake;
        fake.trip_id = next_id++;
        fake.pickup_loc = origin;
        fake.dropoff_loc = dest;
        fake.request_time = rng.int_range(0, std::max<int64_t>(net.horizon / 2, 0));
        fake.match_time = fake.request_time;
        fake.pickup_time = fake.request_time;  // staged at the pickup, no approach
        int64_t entry = fake.pickup_time;
        for (uint32_t e : sp.path_to(dest, net)) {
            fake.trajectory.push_back({e, entry});
            entry += net.edges[e].free_flow_steps();
        }
        fake.dropoff_time = entry;
        fake.trip_fare = mp.config.trip_fare;
        fake.driver_wage = mp.config.wage_beta * int64_t(fake.trajectory.size());
        fake.vehicle = {700000 + fake.trip_id, "Comet 3", rng.int_range(1, 4)};
        fake.notice.message = net::MatchNotice::format(fake.vehicle.vehicle_id, fake.match_time);
        fake.notice.signature = crypto::sign(
            mp.keys.sk, {reinterpret_cast<const uint8_t*>(fake.notice.message.data()),
                         fake.notice.message.size()});
        fakes.push_back(std::move(fake));
    }
    return fakes;
}

size_t scan_surface(RunResult& out, const std::vector<Bytes>& needles, const Bytes& surface) {
    out.surface_bytes += surface.size();
    return count_leak_windows(needles, surface);
}

std::string hex8(const crypto::Digest& digest) {
    return to_hex({digest.data(), 8});
}

}  // namespace

size_t count_leak_windows(const std::vector<Bytes>& needles, const Bytes& haystack) {
    constexpr size_t W = 16;
    if (haystack.size() < W) return 0;
    const std::string_view hay(reinterpret_cast<const char*>(haystack.data()), haystack.size());
    size_t found = 0;
    for (const Bytes& needle : needles) {
        if (needle.size() < W) continue;
        const char* base = reinterpret_cast<const char*>(needle.data());
        for (size_t off = 0; off + W <= needle.size(); off++) {
            const std::string_view window(base + off, W);
            /* A run of one repeated byte (zeroed timestamps, padding)
             * collides with zero fields in legitimate answers and says
             * nothing about the record; only mixed windows count. */
            if (window.find_first_not_of(window[0]) == std::string_view::npos) continue;
            if (hay.find(window) != std::string_view::npos) found++;
        }
    }
    return found;
}

RunResult run_scenario(const Scenario& sc, uint64_t seed) {
    const Rng master(seed);
    Rng mp_rng = master.derive("mp");
    Rng rider_rng = master.derive("riders");
    Rng ma_rng = master.derive("ma");
    Rng sensor_rng = master.derive("sensors");
    Rng prover_rng = master.derive("prover");
    Rng oracle_rng = master.derive("oracle");
    Rng request_rng = master.derive("requests");

    RunResult out;
    out.scenario = sc.name;
    out.seed = seed;
    out.backend = sc.backend;

    std::vector<net::Request> requests = sc.requests;
    for (uint32_t i = 0; i < sc.random_requests; i++) {
        net::Request req;
        req.origin = uint32_t(request_rng.below(sc.network.n));
        req.dest = uint32_t(request_rng.below(sc.network.n));
        req.t = request_rng.int_range(0, sc.random_tmax);
        requests.push_back(req);
    }

    protocol::ProviderState mp = protocol::make_provider(sc.mp, sc.strategy, mp_rng);
    protocol::serve_and_record(mp, sc.network, requests, mp_rng);
    out.served = uint32_t(mp.ground_truth.size());
    out.unserved = uint32_t(mp.unserved.size());
    log_event(out, "served " + std::to_string(out.served) + " of " +
                       std::to_string(requests.size()) + " requests");

    if (std::holds_alternative<protocol::InjectTrips>(sc.strategy) && sc.inject_count > 0)
        mp.strategy = protocol::InjectTrips{fabricate_trips(sc.network, mp, sc.inject_count, mp_rng)};
    log_event(out, std::string("strategy ") + protocol::strategy_name(mp.strategy));

    std::vector<protocol::RiderReport> reports;
    for (const auto& trip : mp.ground_truth) {
        bool wants = sc.receipts == Scenario::Receipts::All;
        if (sc.receipts == Scenario::Receipts::Listed)
            for (uint64_t id : sc.receipt_ids) wants |= id == trip.trip_id;
        if (!wants) continue;
        const crypto::Nonce nonce = rider_rng.block32();
        reports.push_back({protocol::issue_receipt(mp, trip.trip_id, nonce)});
    }

    out.sigma = protocol::commit_demand(mp, mp_rng);
    out.committed = uint32_t(mp.committed.size());
    log_event(out, "committed " + std::to_string(out.committed) + " records, root " + hex8(out.sigma));

    out.riders = protocol::rider_witness_test(reports, mp, mp.sigma, mp.keys.pk);
    for (const auto& line : out.riders.describe()) log_event(out, line);

    protocol::AuditData audit;
    if (sc.use_ara) {
        protocol::AraOutcome ara = protocol::ara_run(sc.network, mp.ground_truth, sc.ara, ma_rng,
                                                     mp_rng, sensor_rng);
        out.ran_ara = true;
        out.ara_phi = ara.phi;
        out.ara_ok = protocol::ara_test(ara.phi, mp.committed, sc.ara.eps);
        audit.has_ara = true;
        audit.ara_phi = ara.phi;
        audit.ara_eps = sc.ara.eps;
        for (auto& line : ara.events) log_event(out, std::move(line));
        log_event(out, std::string("roadside total check ") + (out.ara_ok ? "passed" : "FAILED"));
        for (const Bytes& ct : ara.ciphertexts) out.surface_bytes += ct.size();
        out.surface_bytes += sizeof(ara.phi);
    }
    if (sc.use_rra) {
        protocol::RraOutcome rra = protocol::rra_run(sc.network, mp.ground_truth, sc.rra, ma_rng,
                                                     sensor_rng);
        out.ran_rra = true;
        protocol::RraReport report = protocol::rra_test(rra, mp.committed, sc.rra.round_len);
        out.rra_ok = report.passed;
        audit.has_rra = true;
        audit.rra_round_len = sc.rra.round_len;
        for (auto& line : rra.events) log_event(out, std::move(line));
        for (auto& line : report.mismatches) log_event(out, std::move(line));
        log_event(out, std::string("sampled rounds check ") + (out.rra_ok ? "passed" : "FAILED"));
        for (const auto& m : rra.measurements)
            out.surface_bytes += protocol::measurement_payload(m).size() + m.signature.size();
        audit.rra = std::move(rra);
    }

    protocol::QueryContext ctx;
    ctx.network = &sc.network;
    ctx.econ = sc.routing_econ;
    ctx.background_flow = sc.background;

    const protocol::VerifierOracle oracle(oracle_rng);
    const bool sealed = sc.backend == protocol::Backend::OpaqueSealed;

    std::vector<Bytes> needles;
    for (const auto& trip : mp.ground_truth) needles.push_back(net::encode_trip(trip));
    out.plaintext_windows += scan_surface(out, needles, Bytes(out.sigma.begin(), out.sigma.end()));
    for (const auto& report : reports)
        out.plaintext_windows += scan_surface(out, needles, protocol::encode_receipt(report.receipt));

    const int64_t rider_fines =
        int64_t(out.riders.refused.size() + out.riders.bad_proof.size()) * sc.fines.rider_witness_fine;
    out.total_fines = rider_fines;

    for (const protocol::Query& query : sc.queries) {
        QueryRun qr;
        qr.query = query;
        protocol::QueryAnswer answer = protocol::answer_query(mp, query, ctx);
        if (answer.status == protocol::AnswerStatus::Rejected) {
            log_event(out, std::string("query ") + to_string(query.kind) + " refused");
            out.queries.push_back(std::move(qr));
            continue;
        }
        qr.answered = true;
        qr.z = answer.z;

        qr.instance = {mp.keys.pk, mp.sigma, audit, reports, query, answer.z};
        qr.params = protocol::psys_setup(sc.backend, qr.instance, sealed ? &oracle : nullptr);
        qr.transcript = protocol::psys_prove(qr.params, qr.instance, answer.witness, ctx,
                                             sealed ? &oracle : nullptr, prover_rng);
        qr.proof_ok = protocol::psys_verify(qr.params, qr.instance, qr.transcript, ctx);

        if (sealed) {
            /* The authority sees one attested bit; every check inherits it. */
            qr.circuit.audits_ok = qr.circuit.commit_ok = qr.circuit.answer_ok = qr.proof_ok;
            qr.verdict = protocol::adjudicate(qr.circuit, qr.proof_ok, out.riders, sc.fines, sc.econ);
        } else {
            bool wellformed = qr.transcript.backend == sc.backend &&
                              qr.transcript.params == protocol::params_digest(qr.params);
            if (wellformed) {
                try {
                    const protocol::Witness w = protocol::decode_witness(qr.transcript.payload);
                    qr.circuit = protocol::eval_circuit(qr.instance, w, ctx);
                } catch (const DecodeError&) {
                    wellformed = false;
                }
            }
            qr.verdict = protocol::adjudicate(qr.circuit, wellformed, out.riders, sc.fines, sc.econ);
        }
        out.total_fines += qr.verdict.fine - rider_fines;

        out.plaintext_windows += scan_surface(out, needles, qr.z);
        out.plaintext_windows += scan_surface(out, needles, qr.transcript.serialize());
        out.plaintext_windows += scan_surface(out, needles, protocol::encode_public_params(qr.params));

        log_event(out, std::string("query ") + to_string(query.kind) + " -> " +
                           (qr.verdict.accepted ? "accepted" : "rejected (" + qr.verdict.failure + ")"));
        out.queries.push_back(std::move(qr));
    }

    return out;
}

std::string RunResult::to_text() const {
    std::ostringstream text;
    text << "scenario " << scenario << "\n";
    text << "seed " << seed << "\n";
    text << "backend " << protocol::to_string(backend) << "\n";
    text << "trips served=" << served << " unserved=" << unserved << " committed=" << committed
         << "\n";
    text << "sigma " << to_hex(sigma) << "\n";
    text << "rider-witness " << (riders.passed ? "pass" : "FAIL")
         << " discarded=" << riders.discarded.size() << " refused=" << riders.refused.size()
         << " bad-proof=" << riders.bad_proof.size() << "\n";
    if (ran_ara) text << "audit-total phi=" << ara_phi << " " << (ara_ok ? "pass" : "FAIL") << "\n";
    if (ran_rra) text << "audit-rounds " << (rra_ok ? "pass" : "FAIL") << "\n";
    for (const QueryRun& qr : queries) {
        text << "query " << protocol::to_string(qr.query.kind);
        if (!qr.answered) {
            text << " refused\n";
            continue;
        }
        text << " answered z=" << protocol::z_to_text(qr.query.kind, qr.z)
             << " proof=" << (qr.proof_ok ? "ok" : "FAIL")
             << " verdict=" << (qr.verdict.accepted ? "accept" : "reject");
        if (!qr.verdict.accepted) text << " failure=" << qr.verdict.failure;
        text << " fine=" << qr.verdict.fine << "\n";
    }
    text << "total-fines " << total_fines << "\n";
    text << "surface bytes=" << surface_bytes << " trip-plaintext-windows=" << plaintext_windows
         << "\n";
    return text.str();
}

bool verify_transcript_bytes(const Scenario& sc, uint64_t seed, size_t query_index,
                             std::span<const uint8_t> transcript_bytes) {
    const RunResult run = run_scenario(sc, seed);
    if (query_index >= run.queries.size())
        throw std::runtime_error("verify_transcript_bytes: run has no query " +
                                 std::to_string(query_index));
    const QueryRun& qr = run.queries[query_index];
    if (!qr.answered) return false;

    protocol::QueryContext ctx;
    ctx.network = &sc.network;
    ctx.econ = sc.routing_econ;
    ctx.background_flow = sc.background;

    const protocol::ProofTranscript proof = protocol::ProofTranscript::deserialize(transcript_bytes);
    return protocol::psys_verify(qr.params, qr.instance, proof, ctx);
}

}  // namespace pmm::sim
