#include "pmm/protocol/provider.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace pmm::protocol {

const char* strategy_name(const Strategy& strategy) {
    struct Namer {
        const char* operator()(const Honest&) { return "honest"; }
        const char* operator()(const OmitTrips&) { return "omit_trips"; }
        const char* operator()(const InjectTrips&) { return "inject_trips"; }
        const char* operator()(const TamperTrip&) { return "tamper_trip"; }
        const char* operator()(const MisreportPeriod&) { return "misreport_period"; }
    };
    return std::visit(Namer{}, strategy);
}

Bytes encode_receipt(const Receipt& receipt) {
    ByteWriter w;
    w.u64(receipt.trip_id);
    w.raw(receipt.commitment);
    w.raw(receipt.signature);
    return w.take();
}

Receipt decode_receipt(std::span<const uint8_t> data) {
    ByteReader r(data);
    Receipt receipt;
    receipt.trip_id = r.u64();
    Bytes c = r.raw(32);
    std::copy(c.begin(), c.end(), receipt.commitment.begin());
    Bytes s = r.raw(64);
    std::copy(s.begin(), s.end(), receipt.signature.begin());
    r.expect_end();
    return receipt;
}

std::vector<QueryKind> default_whitelist() {
    return {QueryKind::TripCount,       QueryKind::RegulationBundle,
            QueryKind::Wage,            QueryKind::WaitEquity,
            QueryKind::CongestionPricing, QueryKind::SopSelection,
            QueryKind::CongestionContribution, QueryKind::Emissions};
}

ProviderState make_provider(const ProviderConfig& config, Strategy strategy, Rng& rng) {
    ProviderState state;
    state.keys = crypto::sig_keygen(rng);
    state.config = config;
    if (state.config.whitelist.empty()) state.config.whitelist = default_whitelist();
    state.strategy = std::move(strategy);
    return state;
}

crypto::Digest commitment_root(const std::vector<Bytes>& items,
                               const std::vector<crypto::Nonce>& nonces) {
    if (items.empty()) return crypto::commit(crypto::Nonce{}, {});
    return crypto::mcommit(items, nonces);
}

namespace {

net::TripRecord* find_trip(std::vector<net::TripRecord>& trips, uint64_t trip_id) {
    for (auto& trip : trips)
        if (trip.trip_id == trip_id) return &trip;
    throw std::out_of_range("provider: unknown trip id");
}

void sign_notice(net::TripRecord& trip, const crypto::SigKeyPair& keys) {
    trip.notice.message = net::MatchNotice::format(trip.vehicle.vehicle_id, trip.match_time);
    trip.notice.signature =
        crypto::sign(keys.sk, {reinterpret_cast<const uint8_t*>(trip.notice.message.data()),
                               trip.notice.message.size()});
}

}  // namespace

void serve_and_record(ProviderState& state, const net::Network& net,
                      const std::vector<net::Request>& requests, Rng& rng) {
    const auto weights = net::free_flow_weights(net);
    std::vector<net::ShortestPaths> from;  // all-pairs free-flow distances
    from.reserve(net.n);
    for (uint32_t v = 0; v < net.n; v++) from.push_back(net::shortest_paths(net, v, weights));

    uint64_t next_trip = 1;
    for (const auto& trip : state.ground_truth) next_trip = std::max(next_trip, trip.trip_id + 1);

    static const char* kModels[] = {"Falcon EV", "Metro S", "Comet 3", "Dart LX", "Pelican"};

    for (const auto& req : requests) {
        if (req.origin >= net.n || req.dest >= net.n || req.origin == req.dest ||
            !from[req.origin].reachable(req.dest)) {
            state.unserved.push_back(req);
            continue;
        }
        std::vector<uint32_t> staging;  // anywhere the vehicle can reach the rider from
        for (uint32_t v = 0; v < net.n; v++)
            if (from[v].reachable(req.origin)) staging.push_back(v);

        net::TripRecord trip;
        trip.trip_id = next_trip++;
        trip.pickup_loc = req.origin;
        trip.dropoff_loc = req.dest;
        trip.request_time = req.t;
        trip.match_time = req.t;  // dispatch is immediate; the drive is not

        const uint32_t start = staging[rng.below(staging.size())];
        trip.vehicle.vehicle_id = 100 + trip.trip_id;
        trip.vehicle.make_model = kModels[rng.below(std::size(kModels))];
        trip.vehicle.emission_rate = rng.int_range(1, 4);

        const auto approach = from[start].path_to(req.origin, net);
        const auto ride = from[req.origin].path_to(req.dest, net);
        int64_t t = trip.match_time;
        for (uint32_t e : approach) {
            trip.trajectory.push_back({e, t});
            t += net.edges[e].free_flow_steps();
        }
        trip.pickup_time = t;
        for (uint32_t e : ride) {
            trip.trajectory.push_back({e, t});
            t += net.edges[e].free_flow_steps();
        }
        trip.dropoff_time = t;

        trip.trip_fare = state.config.trip_fare;
        trip.driver_wage = state.config.wage_alpha * int64_t(approach.size()) +
                           state.config.wage_beta * int64_t(ride.size());
        sign_notice(trip, state.keys);
        state.ground_truth.push_back(std::move(trip));
    }
}

std::vector<net::TripRecord> apply_strategy(const std::vector<net::TripRecord>& truth,
                                            const Strategy& strategy,
                                            const ProviderConfig& config,
                                            const crypto::SigKeyPair& keys) {
    std::vector<net::TripRecord> out = truth;
    if (std::holds_alternative<Honest>(strategy)) return out;

    if (const auto* omit = std::get_if<OmitTrips>(&strategy)) {
        std::erase_if(out, [&](const net::TripRecord& trip) {
            return std::find(omit->trip_ids.begin(), omit->trip_ids.end(), trip.trip_id) !=
                   omit->trip_ids.end();
        });
        return out;
    }
    if (const auto* inject = std::get_if<InjectTrips>(&strategy)) {
        out.insert(out.end(), inject->trips.begin(), inject->trips.end());
        return out;
    }
    if (const auto* tamper = std::get_if<TamperTrip>(&strategy)) {
        net::TripRecord* trip = find_trip(out, tamper->trip_id);
        if (tamper->trip_fare) trip->trip_fare = *tamper->trip_fare;
        if (tamper->driver_wage) trip->driver_wage = *tamper->driver_wage;
        if (tamper->dropoff_time) trip->dropoff_time = *tamper->dropoff_time;
        return out;
    }
    const auto& mis = std::get<MisreportPeriod>(strategy);
    net::TripRecord* trip = find_trip(out, mis.trip_id);
    /* Push the declared match toward the pickup and drop the approach
     * driving that now predates it; the suffix still walks edge to edge
     * into the ride, so the record stays self-consistent. */
    const int64_t target = std::min(trip->match_time + mis.delay, trip->pickup_time);
    std::erase_if(trip->trajectory, [&](const net::Traverse& tv) { return tv.entry < target; });
    trip->match_time = trip->trajectory.empty() ? trip->pickup_time : trip->trajectory.front().entry;
    int64_t approach = 0, ride = 0;
    for (const auto& tv : trip->trajectory) (tv.entry < trip->pickup_time ? approach : ride)++;
    trip->driver_wage = config.wage_alpha * approach + config.wage_beta * ride;
    sign_notice(*trip, keys);
    return out;
}

Receipt issue_receipt(ProviderState& state, uint64_t trip_id, const crypto::Nonce& rider_nonce) {
    const net::TripRecord* trip = find_trip(state.ground_truth, trip_id);
    state.rider_nonces[trip_id] = rider_nonce;
    Receipt receipt;
    receipt.trip_id = trip_id;
    receipt.commitment = crypto::commit(rider_nonce, net::encode_trip(*trip));
    receipt.signature = crypto::sign(state.keys.sk, crypto::as_span(receipt.commitment));
    return receipt;
}

crypto::Digest commit_demand(ProviderState& state, Rng& rng) {
    state.committed = apply_strategy(state.ground_truth, state.strategy, state.config, state.keys);
    state.nonces.clear();
    std::vector<Bytes> items;
    for (const auto& trip : state.committed) {
        auto it = state.rider_nonces.find(trip.trip_id);
        state.nonces.push_back(it != state.rider_nonces.end() ? it->second : rng.block32());
        items.push_back(net::encode_trip(trip));
    }
    if (items.empty()) {
        state.tree.reset();
        state.sigma = commitment_root(items, state.nonces);
    } else {
        state.tree.emplace(items, state.nonces);
        state.sigma = state.tree->root();
    }
    return state.sigma;
}

std::optional<crypto::MerkleProof> respond_merkle_request(const ProviderState& state,
                                                          const crypto::Digest& leaf_commitment) {
    if (!state.tree) return std::nullopt;
    const size_t index = state.tree->find_leaf(leaf_commitment);
    if (index == crypto::MerkleTree::npos) return std::nullopt;
    return state.tree->prove(index);
}

QueryAnswer answer_query(const ProviderState& state, const Query& query, const QueryContext& ctx) {
    QueryAnswer answer;
    const auto& wl = state.config.whitelist;
    if (query.kind == QueryKind::RawDemand ||
        std::find(wl.begin(), wl.end(), query.kind) == wl.end())
        return answer;  // Rejected

    answer.witness.trips = state.committed;
    answer.witness.nonces = state.nonces;

    if (query.kind == QueryKind::CongestionPricing) {
        if (!ctx.network) throw std::invalid_argument("answer_query: context needs a network");
        const auto demand = trip_od_demand(state.committed, ctx.network->n);
        const auto res = flow::solve_social_optimum_tt(*ctx.network, demand);
        if (!res.feasible) return QueryAnswer{};  // no certificate exists, refuse
        answer.z = encode_z_tolls(flow::compute_tolls(*ctx.network, res.flow.aggregate));
        answer.witness.cert = encode_kkt_certificate(
            {res.flow.commodities, res.flow.passenger, res.potentials});
    } else if (query.kind == QueryKind::SopSelection) {
        if (!ctx.network) throw std::invalid_argument("answer_query: context needs a network");
        if (query.projects.empty()) return QueryAnswer{};
        const auto demand = trip_od_demand(state.committed, ctx.network->n);
        const auto outcome = flow::solve_sop(*ctx.network, query.projects, demand, ctx.econ);
        const uint32_t winner =
            outcome.winner == SIZE_MAX ? UINT32_MAX : static_cast<uint32_t>(outcome.winner);
        answer.z = encode_z_sop(winner, outcome.utility);
        answer.witness.cert = encode_lp_solutions(outcome.solutions);
    } else {
        answer.z = eval_query_direct(query, state.committed, ctx);
    }
    answer.status = AnswerStatus::Answered;
    return answer;
}

}  // namespace pmm::protocol
