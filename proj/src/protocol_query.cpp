#include "pmm/protocol/query.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace pmm::protocol {

const char* to_string(QueryKind kind) {
    switch (kind) {
        case QueryKind::TripCount: return "trip-count";
        case QueryKind::RegulationBundle: return "regulation-bundle";
        case QueryKind::Wage: return "wage";
        case QueryKind::WaitEquity: return "wait-equity";
        case QueryKind::CongestionPricing: return "congestion-pricing";
        case QueryKind::SopSelection: return "sop-selection";
        case QueryKind::CongestionContribution: return "congestion-contribution";
        case QueryKind::Emissions: return "emissions";
        case QueryKind::RawDemand: return "raw-demand";
    }
    return "?";
}

std::optional<QueryKind> query_kind_from_string(const std::string& name) {
    for (int k = 0; k <= static_cast<int>(QueryKind::RawDemand); k++) {
        QueryKind kind = static_cast<QueryKind>(k);
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

bool is_optimization_kind(QueryKind kind) {
    return kind == QueryKind::CongestionPricing || kind == QueryKind::SopSelection;
}

net::DemandMatrix trip_od_demand(const std::vector<net::TripRecord>& trips, uint32_t n) {
    net::DemandMatrix demand(n);
    for (const auto& trip : trips) {
        if (trip.pickup_loc >= n || trip.dropoff_loc >= n)
            throw std::invalid_argument("trip_od_demand: vertex out of range");
        if (trip.pickup_loc != trip.dropoff_loc) demand.at(trip.pickup_loc, trip.dropoff_loc) += 1.0;
    }
    return demand;
}

PeriodCounts period_counts(const net::TripRecord& trip) {
    PeriodCounts counts;
    for (const auto& tv : net::traversals(trip)) (tv.period == 2 ? counts.approach : counts.ride)++;
    return counts;
}

static bool wait_equity_holds(const std::vector<net::TripRecord>& trips,
                              const std::vector<uint32_t>& region_of, int64_t tau) {
    std::map<uint32_t, std::pair<int64_t, int64_t>> acc;  // region -> (sum, count)
    for (const auto& trip : trips) {
        if (trip.pickup_loc >= region_of.size())
            throw std::invalid_argument("wait equity: region map does not cover vertex");
        auto& [sum, count] = acc[region_of[trip.pickup_loc]];
        sum += trip.wait_time();
        count++;
    }
    for (auto it = acc.begin(); it != acc.end(); ++it)
        for (auto jt = std::next(it); jt != acc.end(); ++jt) {
            auto [si, ni] = it->second;
            auto [sj, nj] = jt->second;
            // |si/ni - sj/nj| <= tau, cleared of divisions
            if (std::llabs(si * nj - sj * ni) > tau * ni * nj) return false;
        }
    return true;
}

static bool speed_limits_hold(const std::vector<net::TripRecord>& trips,
                              const std::vector<double>& limits, const net::Network& net) {
    for (const auto& trip : trips) {
        for (size_t k = 0; k < trip.trajectory.size(); k++) {
            uint32_t e = trip.trajectory[k].edge;
            if (e >= limits.size() || limits[e] <= 0) continue;
            int64_t leave = (k + 1 < trip.trajectory.size()) ? trip.trajectory[k + 1].entry
                                                             : trip.dropoff_time;
            double duration = static_cast<double>(leave - trip.trajectory[k].entry);
            if (net.edges[e].length > limits[e] * duration + 1e-9) return false;
        }
    }
    return true;
}

static bool contribution_holds(const std::vector<net::TripRecord>& trips, double share_limit,
                               const QueryContext& ctx) {
    if (ctx.background_flow.empty()) return true;  // no reference traffic supplied
    std::vector<int64_t> count(ctx.background_flow.size(), 0);
    for (const auto& trip : trips)
        for (const auto& tv : trip.trajectory)
            if (tv.edge < count.size()) count[tv.edge]++;
    for (size_t e = 0; e < count.size(); e++) {
        if (ctx.background_flow[e] <= 0) continue;
        if (count[e] > share_limit * ctx.background_flow[e] + 1e-12) return false;
    }
    return true;
}

static int64_t total_emissions(const std::vector<net::TripRecord>& trips) {
    int64_t total = 0;
    for (const auto& trip : trips)
        total += trip.vehicle.emission_rate * static_cast<int64_t>(trip.trajectory.size());
    return total;
}

bool eval_predicate(const RegPredicate& pred, const std::vector<net::TripRecord>& trips,
                    const QueryContext& ctx) {
    switch (pred.kind) {
        case RegPredicate::Kind::WaitTimeEquity: {
            if (!ctx.network) throw std::invalid_argument("eval_predicate: no network");
            std::vector<uint32_t> all(ctx.network->n, 0);  // single region unless told otherwise
            return wait_equity_holds(trips, all, pred.tau);
        }
        case RegPredicate::Kind::CongestionContribution:
            return contribution_holds(trips, pred.share_limit, ctx);
        case RegPredicate::Kind::SpeedLimit:
            if (!ctx.network) throw std::invalid_argument("eval_predicate: no network");
            return speed_limits_hold(trips, pred.speed_limit, *ctx.network);
        case RegPredicate::Kind::Period2Accuracy:
            for (const auto& trip : trips)
                if (trip.match_time - trip.request_time > pred.max_match_delay) return false;
            return true;
        case RegPredicate::Kind::EmissionsLimit:
            return total_emissions(trips) <= pred.emission_limit;
    }
    return false;
}

Bytes eval_query_direct(const Query& query, const std::vector<net::TripRecord>& trips,
                        const QueryContext& ctx) {
    switch (query.kind) {
        case QueryKind::TripCount: return encode_z_count(trips.size());
        case QueryKind::RegulationBundle: {
            bool all = true;
            for (const auto& pred : query.predicates) all = all && eval_predicate(pred, trips, ctx);
            return encode_z_bit(all);
        }
        case QueryKind::Wage: {
            for (const auto& trip : trips) {
                PeriodCounts pc = period_counts(trip);
                if (trip.driver_wage != query.wage_alpha * pc.approach + query.wage_beta * pc.ride)
                    return encode_z_bit(false);
            }
            return encode_z_bit(true);
        }
        case QueryKind::WaitEquity:
            return encode_z_bit(wait_equity_holds(trips, query.region_of, query.wait_tau));
        case QueryKind::CongestionContribution:
            return encode_z_bit(contribution_holds(trips, query.share_limit, ctx));
        case QueryKind::Emissions:
            return encode_z_bit(total_emissions(trips) <= query.emission_limit);
        case QueryKind::CongestionPricing:
        case QueryKind::SopSelection:
        case QueryKind::RawDemand:
            break;
    }
    throw std::invalid_argument("eval_query_direct: kind needs a solver or is inadmissible");
}

static void write_f64(ByteWriter& w, double v) { w.u64(std::bit_cast<uint64_t>(v)); }
static double read_f64(ByteReader& r) { return std::bit_cast<double>(r.u64()); }

Bytes encode_z_bit(bool bit) {
    ByteWriter w;
    w.u8(bit ? 1 : 0);
    return w.take();
}

Bytes encode_z_count(uint64_t count) {
    ByteWriter w;
    w.u64(count);
    return w.take();
}

Bytes encode_z_tolls(const std::vector<double>& tolls) {
    ByteWriter w;
    w.u32(static_cast<uint32_t>(tolls.size()));
    for (double t : tolls) write_f64(w, t);
    return w.take();
}

Bytes encode_z_sop(uint32_t winner, const std::vector<double>& utility) {
    ByteWriter w;
    w.u32(winner);
    w.u32(static_cast<uint32_t>(utility.size()));
    for (double u : utility) write_f64(w, u);
    return w.take();
}

std::optional<bool> decode_z_bit(const Bytes& z) {
    try {
        ByteReader r(z);
        uint8_t b = r.u8();
        r.expect_end();
        if (b > 1) return std::nullopt;
        return b == 1;
    } catch (const DecodeError&) {
        return std::nullopt;
    }
}

std::optional<uint64_t> decode_z_count(const Bytes& z) {
    try {
        ByteReader r(z);
        uint64_t v = r.u64();
        r.expect_end();
        return v;
    } catch (const DecodeError&) {
        return std::nullopt;
    }
}

std::optional<std::vector<double>> decode_z_tolls(const Bytes& z) {
    try {
        ByteReader r(z);
        uint32_t n = r.u32();
        std::vector<double> tolls(n);
        for (auto& t : tolls) t = read_f64(r);
        r.expect_end();
        return tolls;
    } catch (const DecodeError&) {
        return std::nullopt;
    }
}

std::optional<SopAnswer> decode_z_sop(const Bytes& z) {
    try {
        ByteReader r(z);
        SopAnswer ans;
        ans.winner = r.u32();
        uint32_t n = r.u32();
        ans.utility.resize(n);
        for (auto& u : ans.utility) u = read_f64(r);
        r.expect_end();
        return ans;
    } catch (const DecodeError&) {
        return std::nullopt;
    }
}

bool z_matches(QueryKind kind, const Bytes& a, const Bytes& b, double eps) {
    if (kind == QueryKind::CongestionPricing) {
        auto ta = decode_z_tolls(a), tb = decode_z_tolls(b);
        if (!ta || !tb || ta->size() != tb->size()) return false;
        for (size_t i = 0; i < ta->size(); i++)
            if (std::fabs((*ta)[i] - (*tb)[i]) > eps * std::max(1.0, std::fabs((*tb)[i])))
                return false;
        return true;
    }
    if (kind == QueryKind::SopSelection) {
        auto sa = decode_z_sop(a), sb = decode_z_sop(b);
        if (!sa || !sb || sa->winner != sb->winner || sa->utility.size() != sb->utility.size())
            return false;
        for (size_t i = 0; i < sa->utility.size(); i++) {
            double ua = sa->utility[i], ub = sb->utility[i];
            if (std::isinf(ua) && std::isinf(ub) && ua * ub > 0) continue;
            if (std::fabs(ua - ub) > eps * std::max(1.0, std::fabs(ub))) return false;
        }
        return true;
    }
    return a == b;
}

std::string z_to_text(QueryKind kind, const Bytes& z) {
    char buf[64];
    if (kind == QueryKind::TripCount) {
        if (auto v = decode_z_count(z)) {
            std::snprintf(buf, sizeof buf, "count=%llu", static_cast<unsigned long long>(*v));
            return buf;
        }
    } else if (kind == QueryKind::CongestionPricing) {
        if (auto tolls = decode_z_tolls(z)) {
            std::string out = "tolls=";
            for (size_t i = 0; i < tolls->size(); i++) {
                std::snprintf(buf, sizeof buf, "%s%.6f", i ? "," : "", (*tolls)[i]);
                out += buf;
            }
            return out;
        }
    } else if (kind == QueryKind::SopSelection) {
        if (auto sop = decode_z_sop(z)) {
            std::string out;
            std::snprintf(buf, sizeof buf, "winner=%u utility=", sop->winner);
            out = buf;
            for (size_t i = 0; i < sop->utility.size(); i++) {
                std::snprintf(buf, sizeof buf, "%s%.6f", i ? "," : "", sop->utility[i]);
                out += buf;
            }
            return out;
        }
    } else if (auto bit = decode_z_bit(z)) {
        return *bit ? "bit=1" : "bit=0";
    }
    return "raw=" + to_hex(z);
}

Bytes encode_witness(const Witness& w) {
    ByteWriter out;
    out.lp_bytes(net::encode_trips(w.trips));
    out.u32(static_cast<uint32_t>(w.nonces.size()));
    for (const auto& nonce : w.nonces) out.raw(nonce);
    out.lp_bytes(w.cert);
    return out.take();
}

Witness decode_witness(std::span<const uint8_t> data) {
    ByteReader r(data);
    Witness w;
    Bytes trips = r.lp_bytes();
    w.trips = net::decode_trips(trips);
    uint32_t n = r.u32();
    if (n > r.remaining() / 32) throw DecodeError("witness: nonce count exceeds payload");
    w.nonces.resize(n);
    for (auto& nonce : w.nonces) {
        Bytes raw = r.raw(nonce.size());
        std::copy(raw.begin(), raw.end(), nonce.begin());
    }
    w.cert = r.lp_bytes();
    r.expect_end();
    return w;
}

Bytes encode_kkt_certificate(const flow::KktCertificate& cert) {
    ByteWriter w;
    w.u32(static_cast<uint32_t>(cert.commodities.size()));
    for (auto [i, j] : cert.commodities) {
        w.u32(i);
        w.u32(j);
    }
    auto matrix = [&w](const std::vector<std::vector<double>>& rows) {
        w.u32(static_cast<uint32_t>(rows.size()));
        for (const auto& row : rows) {
            w.u32(static_cast<uint32_t>(row.size()));
            for (double v : row) write_f64(w, v);
        }
    };
    matrix(cert.passenger);
    matrix(cert.potentials);
    return w.take();
}

flow::KktCertificate decode_kkt_certificate(std::span<const uint8_t> data) {
    ByteReader r(data);
    flow::KktCertificate cert;
    uint32_t k = r.u32();
    if (k > r.remaining() / 8) throw DecodeError("certificate: commodity count exceeds payload");
    cert.commodities.resize(k);
    for (auto& [i, j] : cert.commodities) {
        i = r.u32();
        j = r.u32();
    }
    auto matrix = [&r](std::vector<std::vector<double>>& rows) {
        uint32_t n = r.u32();
        if (n > r.remaining()) throw DecodeError("certificate: row count exceeds payload");
        rows.resize(n);
        for (auto& row : rows) {
            uint32_t m = r.u32();
            if (m > r.remaining() / 8) throw DecodeError("certificate: row length exceeds payload");
            row.resize(m);
            for (auto& v : row) v = read_f64(r);
        }
    };
    matrix(cert.passenger);
    matrix(cert.potentials);
    r.expect_end();
    return cert;
}

Bytes encode_lp_solutions(const std::vector<flow::LpSolution>& sols) {
    ByteWriter w;
    w.u32(static_cast<uint32_t>(sols.size()));
    auto vec = [&w](const std::vector<double>& v) {
        w.u32(static_cast<uint32_t>(v.size()));
        for (double x : v) write_f64(w, x);
    };
    for (const auto& sol : sols) {
        w.u8(static_cast<uint8_t>(sol.status));
        write_f64(w, sol.objective);
        vec(sol.x);
        vec(sol.eq_dual);
        vec(sol.ub_dual);
    }
    return w.take();
}

std::vector<flow::LpSolution> decode_lp_solutions(std::span<const uint8_t> data) {
    ByteReader r(data);
    uint32_t count = r.u32();
    if (count > r.remaining()) throw DecodeError("lp solutions: count exceeds payload");
    std::vector<flow::LpSolution> sols(count);
    auto vec = [&r](std::vector<double>& v) {
        uint32_t n = r.u32();
        if (n > r.remaining() / 8) throw DecodeError("lp solutions: vector exceeds payload");
        v.resize(n);
        for (auto& x : v) x = read_f64(r);
    };
    for (auto& sol : sols) {
        uint8_t status = r.u8();
        if (status > 2) throw DecodeError("lp solution: bad status byte");
        sol.status = static_cast<flow::LpStatus>(status);
        sol.objective = read_f64(r);
        vec(sol.x);
        vec(sol.eq_dual);
        vec(sol.ub_dual);
    }
    r.expect_end();
    return sols;
}

}  // namespace pmm::protocol
