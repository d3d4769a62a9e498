#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "pmm/crypto/keys.hpp"
#include "pmm/crypto/merkle.hpp"
#include "pmm/protocol/query.hpp"
#include "pmm/rng.hpp"

namespace pmm::protocol {

/* What the provider commits versus what actually happened. Every
 * adversarial variant rewrites only the committed dataset; the served
 * ground truth stays untouched so audits have something to catch. */
struct Honest {};
struct OmitTrips {
    std::vector<uint64_t> trip_ids;
};
struct InjectTrips {
    std::vector<net::TripRecord> trips;  // fabricated records, must validate
};
struct TamperTrip {
    uint64_t trip_id = 0;
    std::optional<int64_t> trip_fare;
    std::optional<int64_t> driver_wage;
    std::optional<int64_t> dropoff_time;
};
/* Declare the match later than it happened and drop the approach
 * driving that preceded it — period-2 work booked as off-duty. The
 * wage field is recomputed so the committed record stays internally
 * consistent; only roadside observation can tell. */
struct MisreportPeriod {
    uint64_t trip_id = 0;
    int64_t delay = 1;  // steps to push match_time toward pickup_time
};
using Strategy = std::variant<Honest, OmitTrips, InjectTrips, TamperTrip, MisreportPeriod>;

const char* strategy_name(const Strategy& strategy);

struct ProviderConfig {
    int64_t trip_fare = 12;
    int64_t wage_alpha = 1;  // pay per approach traversal
    int64_t wage_beta = 2;   // pay per ride traversal
    std::vector<QueryKind> whitelist;  // admissible queries; defaulted by make_provider
};

struct Receipt {
    uint64_t trip_id = 0;
    crypto::Digest commitment{};  // commit(rider nonce, trip encoding)
    crypto::Signature signature{};
};

Bytes encode_receipt(const Receipt& receipt);
Receipt decode_receipt(std::span<const uint8_t> data);  // throws DecodeError

struct ProviderState {
    crypto::SigKeyPair keys;
    ProviderConfig config;
    Strategy strategy;

    std::vector<net::TripRecord> ground_truth;  // served trips, in service order
    std::vector<net::Request> unserved;
    std::map<uint64_t, crypto::Nonce> rider_nonces;  // from receipt requests

    std::vector<net::TripRecord> committed;  // strategy-transformed dataset
    std::vector<crypto::Nonce> nonces;       // aligned with committed
    std::optional<crypto::MerkleTree> tree;
    crypto::Digest sigma{};
};

ProviderState make_provider(const ProviderConfig& config, Strategy strategy, Rng& rng);

/* Merkle root over the committed leaves; the degenerate empty dataset
 * commits to commit(0^32, "") so there is always a well-defined root to
 * publish and to check against. */
crypto::Digest commitment_root(const std::vector<Bytes>& items,
                               const std::vector<crypto::Nonce>& nonces);

/* Serve each request along shortest free-flow paths: the vehicle is
 * staged at a random reachable vertex, matched the instant the request
 * arrives, drives to the pickup (period 2) and on to the destination
 * (period 3). One fresh vehicle per trip. Unreachable requests are
 * recorded unserved. */
void serve_and_record(ProviderState& state, const net::Network& net,
                      const std::vector<net::Request>& requests, Rng& rng);

/* The committed dataset a strategy produces from the ground truth.
 * Exposed separately so tests can pin down each variant's exact edit. */
std::vector<net::TripRecord> apply_strategy(const std::vector<net::TripRecord>& truth,
                                            const Strategy& strategy,
                                            const ProviderConfig& config,
                                            const crypto::SigKeyPair& keys);

/* Rider hands over their hiding nonce; provider answers with the signed
 * leaf commitment of the true record. Throws std::out_of_range for an
 * unknown trip. */
Receipt issue_receipt(ProviderState& state, uint64_t trip_id, const crypto::Nonce& rider_nonce);

/* Builds the commitment tree over the strategy-transformed dataset and
 * publishes its root. Rider nonces cover surviving real trips; leaves
 * the provider invented get nonces from its own stream. */
crypto::Digest commit_demand(ProviderState& state, Rng& rng);

/* Merkle inclusion proof for a receipt's commitment, or refusal
 * (nullopt) when the leaf is not in the committed tree. */
std::optional<crypto::MerkleProof> respond_merkle_request(const ProviderState& state,
                                                          const crypto::Digest& leaf_commitment);

enum class AnswerStatus { Answered, Rejected };

struct QueryAnswer {
    AnswerStatus status = AnswerStatus::Rejected;
    Bytes z;
    Witness witness;
};

/* Stage-4/5 work: evaluate the query on the committed dataset and
 * assemble the witness. Optimization kinds solve and attach their
 * optimality certificates; queries off the whitelist are rejected
 * outright. */
QueryAnswer answer_query(const ProviderState& state, const Query& query, const QueryContext& ctx);

std::vector<QueryKind> default_whitelist();

}  // namespace pmm::protocol
