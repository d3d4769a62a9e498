#pragma once

#include <string>
#include <vector>

#include "pmm/sim/scenario.hpp"

namespace pmm::sim {

/* One query's full round trip: announce, answer (or refusal), prove,
 * verify, adjudicate. `circuit` is the result as the authority saw it —
 * under the sealed backend that is just the attested bit fanned out,
 * with no per-check detail. */
struct QueryRun {
    protocol::Query query;
    bool answered = false;  // false: the provider refused the query
    Bytes z;
    bool proof_ok = false;
    protocol::CircuitResult circuit;
    protocol::Verdict verdict;
    protocol::PublicParams params;
    protocol::ProofTranscript transcript;
    protocol::EvaluationCircuit instance;
};

struct RunResult {
    std::string scenario;
    uint64_t seed = 0;
    protocol::Backend backend = protocol::Backend::Transparent;

    uint32_t served = 0;
    uint32_t unserved = 0;
    uint32_t committed = 0;
    crypto::Digest sigma{};

    protocol::RiderWitnessResult riders;
    bool ran_ara = false;
    bool ara_ok = true;
    uint64_t ara_phi = 0;
    bool ran_rra = false;
    bool rra_ok = true;

    std::vector<QueryRun> queries;
    int64_t total_fines = 0;

    /* Disclosure accounting over every byte string that crosses to the
     * authority or the wire: how many 16-byte windows of the true trip
     * encodings appear verbatim. Sealed runs must score zero. */
    size_t surface_bytes = 0;
    size_t plaintext_windows = 0;

    std::vector<std::string> events;

    std::string to_text() const;  // deterministic report, byte-stable per (scenario, seed)
};

/* Plays the whole protocol for one seed: serve demand, apply the
 * strategy, commit, audit, then answer/prove/verify each query in
 * order. Set PMM_LOG to stream events to stderr as they happen. */
RunResult run_scenario(const Scenario& sc, uint64_t seed);

/* Occurrences of any aligned-at-any-offset 16-byte window of a needle
 * inside the haystack; the disclosure metric above. */
size_t count_leak_windows(const std::vector<Bytes>& needles, const Bytes& haystack);

/* Replays (scenario, seed) to rebuild the public instance for the
 * indexed query, then verifies an externally stored transcript against
 * it. Throws DecodeError if the bytes do not parse. */
bool verify_transcript_bytes(const Scenario& sc, uint64_t seed, size_t query_index,
                             std::span<const uint8_t> transcript_bytes);

}  // namespace pmm::sim
