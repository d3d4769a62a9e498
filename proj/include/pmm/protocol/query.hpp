#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmm/bytes.hpp"
#include "pmm/crypto/hash.hpp"
#include "pmm/flow/project.hpp"
#include "pmm/flow/social.hpp"
#include "pmm/flow/steady.hpp"
#include "pmm/net/trip.hpp"

namespace pmm::protocol {

/* The regulator's query menu. Each kind is a deterministic function of
 * the committed trip set; the two optimization kinds additionally carry
 * an optimality certificate in the witness so the verifier never has to
 * re-solve. RawDemand is the inadmissible probe — "hand over the raw
 * records" — which a provider must refuse. */
enum class QueryKind : uint8_t {
    TripCount = 0,
    RegulationBundle = 1,
    Wage = 2,
    WaitEquity = 3,
    CongestionPricing = 4,
    SopSelection = 5,
    CongestionContribution = 6,
    Emissions = 7,
    RawDemand = 8,
};

const char* to_string(QueryKind kind);
std::optional<QueryKind> query_kind_from_string(const std::string& name);
bool is_optimization_kind(QueryKind kind);

/* One 0/1 regulation clause; a bundle multiplies its clauses. */
struct RegPredicate {
    enum class Kind : uint8_t {
        WaitTimeEquity = 0,
        CongestionContribution = 1,
        SpeedLimit = 2,
        Period2Accuracy = 3,
        EmissionsLimit = 4,
    };
    Kind kind = Kind::WaitTimeEquity;
    int64_t tau = 0;                  // WaitTimeEquity: max gap between region means
    double share_limit = 0;           // CongestionContribution: max fraction of background
    std::vector<double> speed_limit;  // SpeedLimit: per edge, <= 0 means unposted
    int64_t max_match_delay = 0;      // Period2Accuracy: max steps from request to match
    int64_t emission_limit = 0;       // EmissionsLimit: max total emitted units
};

struct Query {
    QueryKind kind = QueryKind::TripCount;
    std::vector<RegPredicate> predicates;  // RegulationBundle
    int64_t wage_alpha = 1;                // Wage: pay per approach traversal
    int64_t wage_beta = 2;                 // Wage: pay per ride traversal
    std::vector<uint32_t> region_of;       // WaitEquity: vertex -> region id
    int64_t wait_tau = 0;                  // WaitEquity
    std::vector<flow::Project> projects;   // SopSelection
    double share_limit = 0;                // CongestionContribution
    int64_t emission_limit = 0;            // Emissions
};

/* Environment both parties evaluate against: the road network, the
 * provider's routing economics, and the regulator's tolerances. */
struct QueryContext {
    const net::Network* network = nullptr;
    flow::MpEconomics econ;
    std::vector<double> background_flow;  // per edge, congestion-contribution denominator
    double eps_z = 1e-9;      // numeric slack when comparing real-valued answers
    double kkt_tol = 1e-4;    // first-order certificate acceptance
    double lp_cert_tol = 1e-6;  // duality-gap acceptance for routing certificates
};

/* Origin-destination trip counts as demand rates. */
net::DemandMatrix trip_od_demand(const std::vector<net::TripRecord>& trips, uint32_t n);

/* Per-trip traversal counts split by period. */
struct PeriodCounts {
    int64_t approach = 0;  // period 2
    int64_t ride = 0;      // period 3
};
PeriodCounts period_counts(const net::TripRecord& trip);

bool eval_predicate(const RegPredicate& pred, const std::vector<net::TripRecord>& trips,
                    const QueryContext& ctx);

/* Deterministic evaluation for every kind except the two optimization
 * queries (those need a solve or a certificate; see provider/authority).
 * Throws std::invalid_argument for CongestionPricing/SopSelection/RawDemand. */
Bytes eval_query_direct(const Query& query, const std::vector<net::TripRecord>& trips,
                        const QueryContext& ctx);

/* Answer payload codecs. Answers travel as canonical bytes so circuit
 * check 3 is a plain comparison for exact kinds and an eps-ball for the
 * real-valued ones. */
Bytes encode_z_bit(bool bit);
Bytes encode_z_count(uint64_t count);
Bytes encode_z_tolls(const std::vector<double>& tolls);
Bytes encode_z_sop(uint32_t winner, const std::vector<double>& utility);

std::optional<bool> decode_z_bit(const Bytes& z);
std::optional<uint64_t> decode_z_count(const Bytes& z);
std::optional<std::vector<double>> decode_z_tolls(const Bytes& z);
struct SopAnswer {
    uint32_t winner = 0;
    std::vector<double> utility;
};
std::optional<SopAnswer> decode_z_sop(const Bytes& z);

/* Equality up to eps on the real-valued payloads, exact elsewhere. */
bool z_matches(QueryKind kind, const Bytes& a, const Bytes& b, double eps);

/* Human-readable answer for run reports. */
std::string z_to_text(QueryKind kind, const Bytes& z);

/* Witness w = (trips, nonces, certificate payload), in committed leaf
 * order so the root recomputation is exact. */
struct Witness {
    std::vector<net::TripRecord> trips;
    std::vector<crypto::Nonce> nonces;
    Bytes cert;
};

Bytes encode_witness(const Witness& w);
Witness decode_witness(std::span<const uint8_t> data);  // throws DecodeError

Bytes encode_kkt_certificate(const flow::KktCertificate& cert);
flow::KktCertificate decode_kkt_certificate(std::span<const uint8_t> data);

Bytes encode_lp_solutions(const std::vector<flow::LpSolution>& sols);
std::vector<flow::LpSolution> decode_lp_solutions(std::span<const uint8_t> data);

}  // namespace pmm::protocol
