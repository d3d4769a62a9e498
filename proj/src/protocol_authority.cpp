#include "pmm/protocol/authority.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pmm::protocol {

namespace {

void put_f64(ByteWriter& w, double v) { w.u64(std::bit_cast<uint64_t>(v)); }

void put_query(ByteWriter& w, const Query& query) {
    w.u8(static_cast<uint8_t>(query.kind));
    w.u32(static_cast<uint32_t>(query.predicates.size()));
    for (const auto& pred : query.predicates) {
        w.u8(static_cast<uint8_t>(pred.kind));
        w.i64(pred.tau);
        put_f64(w, pred.share_limit);
        w.u32(static_cast<uint32_t>(pred.speed_limit.size()));
        for (double s : pred.speed_limit) put_f64(w, s);
        w.i64(pred.max_match_delay);
        w.i64(pred.emission_limit);
    }
    w.i64(query.wage_alpha);
    w.i64(query.wage_beta);
    w.u32(static_cast<uint32_t>(query.region_of.size()));
    for (uint32_t r : query.region_of) w.u32(r);
    w.i64(query.wait_tau);
    w.lp_string(flow::projects_to_text(query.projects));
    put_f64(w, query.share_limit);
    w.i64(query.emission_limit);
}

}  // namespace

Bytes encode_circuit(const EvaluationCircuit& circuit) {
    ByteWriter w;
    w.raw(circuit.pk_mp);
    w.raw(circuit.sigma);
    w.u8(circuit.audit.has_ara ? 1 : 0);
    w.u64(circuit.audit.ara_phi);
    put_f64(w, circuit.audit.ara_eps);
    w.u8(circuit.audit.has_rra ? 1 : 0);
    w.u32(static_cast<uint32_t>(circuit.audit.rra.audited.size()));
    for (const auto& [edge, round] : circuit.audit.rra.audited) {
        w.u32(edge);
        w.u64(round);
    }
    w.u32(static_cast<uint32_t>(circuit.audit.rra.measurements.size()));
    for (const auto& m : circuit.audit.rra.measurements) {
        w.raw(measurement_payload(m));
        w.raw(m.signature);
    }
    w.u32(static_cast<uint32_t>(circuit.audit.rra.sensor_pk.size()));
    for (const auto& pk : circuit.audit.rra.sensor_pk) w.raw(pk);
    w.i64(circuit.audit.rra_round_len);
    w.u32(static_cast<uint32_t>(circuit.reports.size()));
    for (const auto& report : circuit.reports) w.lp_bytes(encode_receipt(report.receipt));
    put_query(w, circuit.query);
    w.lp_bytes(circuit.z);
    return w.take();
}

CircuitResult eval_circuit(const EvaluationCircuit& circuit, const Witness& w,
                           const QueryContext& ctx) {
    CircuitResult res;
    if (w.trips.size() != w.nonces.size()) {
        res.detail.push_back("witness: trips and nonces misaligned");
        return res;
    }

    std::vector<Bytes> items;
    std::vector<crypto::Digest> leaves;
    for (size_t i = 0; i < w.trips.size(); i++) {
        items.push_back(net::encode_trip(w.trips[i]));
        leaves.push_back(crypto::commit(w.nonces[i], items.back()));
    }

    res.audits_ok = true;
    for (const auto& report : circuit.reports) {
        const Receipt& receipt = report.receipt;
        if (!crypto::verify_sig(circuit.pk_mp, crypto::as_span(receipt.commitment),
                                receipt.signature))
            continue;  // unendorsed receipt, no evidence either way
        if (std::find(leaves.begin(), leaves.end(), receipt.commitment) == leaves.end()) {
            res.audits_ok = false;
            res.detail.push_back("receipt for trip " + std::to_string(receipt.trip_id) +
                                 " opens no witness leaf");
        }
    }
    if (circuit.audit.has_ara &&
        !ara_test(circuit.audit.ara_phi, w.trips, circuit.audit.ara_eps)) {
        res.audits_ok = false;
        res.detail.push_back("roadside total " + std::to_string(circuit.audit.ara_phi) +
                             " disagrees with witness total " +
                             std::to_string(phi_total(w.trips)));
    }
    if (circuit.audit.has_rra) {
        const auto rra = rra_test(circuit.audit.rra, w.trips, circuit.audit.rra_round_len);
        if (!rra.passed) {
            res.audits_ok = false;
            res.detail.insert(res.detail.end(), rra.mismatches.begin(), rra.mismatches.end());
        }
    }

    res.commit_ok = commitment_root(items, w.nonces) == circuit.sigma;
    if (!res.commit_ok) res.detail.push_back("witness does not hash to the published root");

    res.answer_ok =
        check_answer(circuit.query, w.trips, circuit.z, w.cert, ctx, &res.detail);
    return res;
}

bool check_answer(const Query& query, const std::vector<net::TripRecord>& trips, const Bytes& z,
                  const Bytes& cert, const QueryContext& ctx, std::vector<std::string>* detail) {
    auto note = [&](std::string line) {
        if (detail) detail->push_back(std::move(line));
    };
    if (query.kind == QueryKind::RawDemand) {
        note("raw demand is never answerable");
        return false;
    }
    if (!is_optimization_kind(query.kind)) {
        Bytes expect;
        try {
            expect = eval_query_direct(query, trips, ctx);
        } catch (const std::exception& e) {
            note(std::string("answer recomputation failed: ") + e.what());
            return false;
        }
        if (!z_matches(query.kind, z, expect, ctx.eps_z)) {
            note("answer does not match the witness dataset");
            return false;
        }
        return true;
    }

    if (!ctx.network) {
        note("optimization query without a network");
        return false;
    }
    const net::Network& base = *ctx.network;
    const auto demand = trip_od_demand(trips, base.n);

    if (query.kind == QueryKind::CongestionPricing) {
        flow::KktCertificate kc;
        try {
            kc = decode_kkt_certificate(cert);
        } catch (const DecodeError& e) {
            note(std::string("pricing certificate undecodable: ") + e.what());
            return false;
        }
        const auto report = flow::check_kkt(base, demand, kc);
        if (!report.ok(ctx.kkt_tol)) {
            note("first-order certificate rejected");
            return false;
        }
        std::vector<double> aggregate(base.edges.size(), 0.0);
        for (const auto& row : kc.passenger)
            for (size_t e = 0; e < row.size(); e++) aggregate[e] += row[e];
        const Bytes expect = encode_z_tolls(flow::compute_tolls(base, aggregate));
        if (!z_matches(query.kind, z, expect, ctx.eps_z)) {
            note("tolls do not match the certified flow");
            return false;
        }
        return true;
    }

    // SopSelection: one routing certificate per candidate project
    if (query.projects.empty()) {
        note("selection query without candidates");
        return false;
    }
    std::vector<flow::LpSolution> sols;
    try {
        sols = decode_lp_solutions(cert);
    } catch (const DecodeError& e) {
        note(std::string("routing certificates undecodable: ") + e.what());
        return false;
    }
    if (sols.size() != query.projects.size()) {
        note("expected one routing certificate per project");
        return false;
    }
    std::vector<double> utility(sols.size(), -std::numeric_limits<double>::infinity());
    for (size_t i = 0; i < sols.size(); i++) {
        net::Network mod;
        try {
            mod = flow::apply_project(base, query.projects[i]);
        } catch (const std::exception& e) {
            note(std::string("project does not apply: ") + e.what());
            return false;
        }
        const auto prog = flow::build_steady_program(mod, demand, ctx.econ);
        if (sols[i].status != flow::LpStatus::Optimal) {
            /* An unroutability claim has no certificate to audit; solve
             * this one candidate ourselves to confirm it. */
            if (flow::lp_solve(prog.lp).status == flow::LpStatus::Optimal) {
                note("project " + std::to_string(i) + " claimed unroutable but routes fine");
                return false;
            }
            continue;
        }
        if (sols[i].x.size() != prog.lp.c.size() || sols[i].eq_dual.size() != prog.lp.eq_rhs.size() ||
            sols[i].ub_dual.size() != prog.lp.ub_rhs.size()) {
            note("routing certificate for project " + std::to_string(i) + " has the wrong shape");
            return false;
        }
        const auto resid =
            flow::certificate_residuals(prog.lp, sols[i].x, sols[i].eq_dual, sols[i].ub_dual);
        if (resid.worst() > ctx.lp_cert_tol) {
            note("routing certificate for project " + std::to_string(i) + " rejected");
            return false;
        }
        const auto result = flow::extract_steady_result(prog, sols[i], demand, ctx.econ);
        utility[i] = flow::neg_total_travel_time(mod, result.flow);
    }
    size_t win = SIZE_MAX;
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < utility.size(); i++)
        if (utility[i] > best) {
            best = utility[i];
            win = i;
        }
    const uint32_t winner = win == SIZE_MAX ? UINT32_MAX : static_cast<uint32_t>(win);
    if (!z_matches(query.kind, z, encode_z_sop(winner, utility), ctx.eps_z)) {
        note("selection does not match the certified routings");
        return false;
    }
    return true;
}

int64_t deterrent_fine(const FineInputs& in, const FineSchedule& fs) {
    if (in.detect_p <= 0 || in.detect_p > 1)
        throw std::invalid_argument("deterrent_fine: detection probability outside (0,1]");
    const double gain = double(in.u_dishonest - in.u_honest);
    const int64_t breakeven = std::llround(gain / in.detect_p) - in.u_dishonest;
    return std::max(fs.floor, breakeven + fs.margin);
}

Verdict adjudicate(const CircuitResult& circuit, bool proof_verified,
                   const RiderWitnessResult& riders, const FineSchedule& fines,
                   const FineInputs& econ) {
    Verdict verdict;
    verdict.accepted = proof_verified && circuit.ok() && riders.passed;
    if (verdict.accepted) return verdict;

    if (!riders.passed)
        verdict.failure = "rider-witness";
    else if (!proof_verified)
        verdict.failure = "proof";
    else if (!circuit.audits_ok)
        verdict.failure = "audit";
    else if (!circuit.commit_ok)
        verdict.failure = "commitment";
    else
        verdict.failure = "answer";

    const int64_t offenses = int64_t(riders.refused.size() + riders.bad_proof.size());
    verdict.fine = offenses * fines.rider_witness_fine;
    if (!proof_verified || !circuit.ok()) verdict.fine += deterrent_fine(econ, fines);
    return verdict;
}

}  // namespace pmm::protocol
