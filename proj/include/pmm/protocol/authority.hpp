#pragma once

#include <string>
#include <vector>

#include "pmm/protocol/audits.hpp"
#include "pmm/protocol/query.hpp"

namespace pmm::protocol {

/* Audit results entering the evaluation as public data. */
struct AuditData {
    bool has_ara = false;
    uint64_t ara_phi = 0;
    double ara_eps = 0;
    bool has_rra = false;
    RraOutcome rra;
    int64_t rra_round_len = 4;
};

/* The relation the proof system decides. Everything here is public —
 * the provider's key, the published root, the roadside audit record,
 * the riders' receipts, the query, and the announced answer. The trip
 * data only ever appears inside the witness. */
struct EvaluationCircuit {
    crypto::SigPublicKey pk_mp{};
    crypto::Digest sigma{};
    AuditData audit;
    std::vector<RiderReport> reports;
    Query query;
    Bytes z;
};

/* Canonical bytes of the public instance; proofs bind to its hash. */
Bytes encode_circuit(const EvaluationCircuit& circuit);

struct CircuitResult {
    bool audits_ok = false;  // witness dataset consistent with the physical record
    bool commit_ok = false;  // witness hashes to the published root
    bool answer_ok = false;  // witness dataset maps to the announced answer
    std::vector<std::string> detail;

    bool ok() const { return audits_ok && commit_ok && answer_ok; }
};

/* The whole three-way check as a pure function of instance and witness;
 * both backends decide exactly this. */
CircuitResult eval_circuit(const EvaluationCircuit& circuit, const Witness& w,
                           const QueryContext& ctx);

/* The answer check alone. Counting and predicate queries are simply
 * re-evaluated; the optimization queries are checked against the
 * witness certificate — first-order conditions for the pricing query,
 * per-project duality gaps for the selection query — so the verifier
 * never re-runs the provider's solver on a claimed-optimal instance. */
bool check_answer(const Query& query, const std::vector<net::TripRecord>& trips, const Bytes& z,
                  const Bytes& cert, const QueryContext& ctx, std::vector<std::string>* detail);

struct FineSchedule {
    int64_t rider_witness_fine = 50;  // per receipt the provider cannot prove
    int64_t floor = 10;               // no violation is cheaper than this
    int64_t margin = 1;               // headroom above the break-even fine
};

/* Economics of the deviation a fine must deter: the utility of lying,
 * of staying honest, and the chance a lie is caught. */
struct FineInputs {
    int64_t u_dishonest = 0;
    int64_t u_honest = 0;
    double detect_p = 1.0;
};

/* Smallest scheduled fine that makes honesty the better bet. A caught
 * provider forfeits the period's gain and pays F, so lying pays off in
 * expectation only while (1-p) u_d - p F exceeds u_h; any F above
 * (u_d - u_h)/p - u_d closes that window, and the margin keeps the
 * comparison strict. */
int64_t deterrent_fine(const FineInputs& in, const FineSchedule& fs);

struct Verdict {
    bool accepted = false;
    std::string failure;  // empty when accepted
    int64_t fine = 0;
};

/* Final ruling from the verifier's observations. Failure classes are
 * only as fine-grained as what the caller could actually see: a sealed
 * backend yields just "proof". */
Verdict adjudicate(const CircuitResult& circuit, bool proof_verified,
                   const RiderWitnessResult& riders, const FineSchedule& fines,
                   const FineInputs& econ);

}  // namespace pmm::protocol
