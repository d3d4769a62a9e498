#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pmm/crypto/coinflip.hpp"
#include "pmm/crypto/keys.hpp"
#include "pmm/protocol/provider.hpp"

namespace pmm::protocol {

/* Physical-world counts the provider cannot rewrite. phi(e) is the
 * number of trips whose vehicle crossed edge e at least once; the
 * round-windowed variant buckets by traversal entry step. */
uint64_t phi(uint32_t edge, const std::vector<net::TripRecord>& trips);
uint64_t phi_round(uint32_t edge, uint64_t round, int64_t round_len,
                   const std::vector<net::TripRecord>& trips);
/* Sum of phi over every edge == per-trip distinct-edge counts summed. */
uint64_t phi_total(const std::vector<net::TripRecord>& trips);

/* ---- rider witness ----
 * A rider who kept their receipt can force the provider to prove the
 * matching leaf is under the published root. Refusal or a proof that
 * does not fold to sigma is the provider caught red-handed; a report
 * whose receipt signature fails is discarded as noise, not evidence. */
struct RiderReport {
    Receipt receipt;
};

struct RiderWitnessResult {
    bool passed = true;
    std::vector<uint64_t> discarded;  // bad receipt signature
    std::vector<uint64_t> refused;    // no inclusion proof offered
    std::vector<uint64_t> bad_proof;  // proof offered, does not verify

    std::vector<std::string> describe() const;
};

RiderWitnessResult rider_witness_test(const std::vector<RiderReport>& reports,
                                      const ProviderState& provider, const crypto::Digest& sigma,
                                      const crypto::SigPublicKey& pk_mp);

/* ---- anonymous roadside audit ----
 * One sensor per edge counts distinct vehicles during collection, then
 * the operators jointly elect a leader by coin flip, whitelist it on
 * every sensor, and the sensors hand over encrypted per-edge counts.
 * Only the summed total leaves the enclave; everything else is erased. */
enum class SensorPhase { Collecting, Reporting, Erased };

struct SensorState {
    uint32_t id = 0;
    uint32_t edge = 0;
    SensorPhase phase = SensorPhase::Collecting;
    crypto::SigKeyPair sig;
    crypto::BoxKeyPair box;
    std::vector<crypto::BoxPublicKey> receivers;  // who may read, once reporting
    std::vector<uint64_t> observed;               // distinct trip ids seen
};

/* Receiver changes need both operators' sign-off; one-sided requests
 * leave the whitelist untouched. */
bool sensor_whitelist_add(SensorState& sensor, const crypto::BoxPublicKey& receiver, bool ma_ok,
                          bool mp_ok);
bool sensor_allows_read(const SensorState& sensor, const crypto::BoxPublicKey& who);

struct AraConfig {
    double eps = 0;          // relative slack granted to the reported total
    double gps_dropout = 0;  // chance one traversal goes unobserved
};

struct AraOutcome {
    uint64_t phi = 0;    // leader-reported total, the only number disclosed
    uint32_t leader = 0;
    crypto::CoinFlip election;
    std::vector<Bytes> ciphertexts;  // per-sensor reports as sent on the wire
    std::vector<std::string> events;
};

AraOutcome ara_run(const net::Network& net, const std::vector<net::TripRecord>& truth,
                   const AraConfig& config, Rng& ma_rng, Rng& mp_rng, Rng& sensor_rng);

/* Accept the committed dataset iff its total traversal indicator lands
 * within eps of the observed one: |phi - phi_total(trips)| <= eps*phi. */
bool ara_test(uint64_t phi, const std::vector<net::TripRecord>& trips, double eps);

/* ---- randomized roadside audit ----
 * Each round the authority samples a secret subset of sensors; those
 * sign per-vehicle measurements for their own edge. A measurement taken
 * anywhere but the sensor's assigned edge is a relay and is ignored, as
 * is any signature that fails. */
struct Measurement {
    uint32_t edge = 0;       // assignment the reading claims to serve
    uint64_t round = 0;
    uint64_t vehicle_id = 0;
    int period = 2;
    int64_t timestamp = 0;   // traversal entry step
    uint32_t location = 0;   // where the reading was actually taken
    crypto::Signature signature{};
};

Bytes measurement_payload(const Measurement& m);  // signed bytes, signature excluded

struct RraConfig {
    double p = 0.5;         // per-round inclusion probability of each sensor
    int64_t round_len = 4;  // steps per audit round
    uint64_t rounds = 1;
};

/* The audited edge set for one round, derived from the authority's
 * stream so reruns agree: a uniform sample of round(m*p) edges. When
 * m*p is whole, each edge is included with probability exactly p. */
std::vector<uint32_t> rra_sample(const Rng& ma_rng, uint32_t m, double p, uint64_t round);

struct RraOutcome {
    std::vector<std::pair<uint32_t, uint64_t>> audited;  // (edge, round) pairs sampled
    std::vector<Measurement> measurements;
    std::vector<crypto::SigPublicKey> sensor_pk;  // per edge
    std::vector<std::string> events;
};

RraOutcome rra_run(const net::Network& net, const std::vector<net::TripRecord>& truth,
                   const RraConfig& config, const Rng& ma_rng, Rng& sensor_rng);

/* Per audited (edge, round): the distinct vehicles measured on the road
 * must match the committed dataset's phi_round exactly. */
struct RraReport {
    bool passed = true;
    std::vector<std::string> mismatches;
};

RraReport rra_test(const RraOutcome& outcome, const std::vector<net::TripRecord>& trips,
                   int64_t round_len);

}  // namespace pmm::protocol
