#pragma once

#include <optional>
#include <string>

#include "pmm/protocol/authority.hpp"

namespace pmm::protocol {

/* Two interchangeable ways to convince the verifier that some witness
 * satisfies the evaluation circuit.
 *
 * Transparent ships the witness itself and the verifier re-runs the
 * circuit — simple, but it discloses every record. OpaqueSealed hands
 * the witness to a sealed evaluator that replies with one attested bit,
 * so the verifier learns the verdict, a hiding commitment to the
 * witness, and nothing else. Same decision procedure, different
 * disclosure; scenarios must verdict identically under either. */
enum class Backend : uint32_t { Transparent = 1, OpaqueSealed = 2 };

const char* to_string(Backend backend);
std::optional<Backend> backend_from_string(const std::string& name);

struct PublicParams {
    Backend backend = Backend::Transparent;
    crypto::Digest circuit_digest{};   // hash of the public instance
    crypto::SigPublicKey oracle_pk{};  // all zero for the transparent backend
};

Bytes encode_public_params(const PublicParams& pp);
crypto::Digest params_digest(const PublicParams& pp);

struct ProofTranscript {
    Backend backend = Backend::Transparent;
    crypto::Digest params{};  // binds the proof to its parameters
    Bytes payload;

    Bytes serialize() const;
    static ProofTranscript deserialize(std::span<const uint8_t> data);  // throws DecodeError
};

/* The sealed evaluator. It alone can attest a circuit run; a witness
 * handed to `attest` influences nothing observable but the verdict bit
 * and the caller-chosen commitment it countersigns. */
class VerifierOracle {
  public:
    explicit VerifierOracle(Rng& rng);
    const crypto::SigPublicKey& pk() const { return keys_.pk; }

    struct Attestation {
        bool accept = false;
        crypto::Signature sig{};
    };
    Attestation attest(const PublicParams& pp, const EvaluationCircuit& circuit, const Witness& w,
                       const QueryContext& ctx, const crypto::Digest& wcommit) const;

  private:
    crypto::SigKeyPair keys_;
};

/* Parameters for one instance. The sealed backend needs the oracle the
 * verifier trusts; the transparent one takes none. */
PublicParams psys_setup(Backend backend, const EvaluationCircuit& circuit,
                        const VerifierOracle* oracle);

ProofTranscript psys_prove(const PublicParams& pp, const EvaluationCircuit& circuit,
                           const Witness& w, const QueryContext& ctx, const VerifierOracle* oracle,
                           Rng& prover_rng);

bool psys_verify(const PublicParams& pp, const EvaluationCircuit& circuit,
                 const ProofTranscript& proof, const QueryContext& ctx);

}  // namespace pmm::protocol
