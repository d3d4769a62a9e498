#include "pmm/protocol/proofsys.hpp"

#include <algorithm>
#include <stdexcept>

namespace pmm::protocol {

const char* to_string(Backend backend) {
    return backend == Backend::Transparent ? "transparent" : "opaque-sealed";
}

std::optional<Backend> backend_from_string(const std::string& name) {
    if (name == "transparent") return Backend::Transparent;
    if (name == "opaque-sealed") return Backend::OpaqueSealed;
    return std::nullopt;
}

Bytes encode_public_params(const PublicParams& pp) {
    ByteWriter w;
    w.u32(static_cast<uint32_t>(pp.backend));
    w.raw(pp.circuit_digest);
    w.raw(pp.oracle_pk);
    return w.take();
}

crypto::Digest params_digest(const PublicParams& pp) {
    return crypto::sha256(encode_public_params(pp));
}

Bytes ProofTranscript::serialize() const {
    ByteWriter w;
    w.u32(static_cast<uint32_t>(backend));
    w.raw(params);
    w.lp_bytes(payload);
    return w.take();
}

ProofTranscript ProofTranscript::deserialize(std::span<const uint8_t> data) {
    ByteReader r(data);
    ProofTranscript t;
    const uint32_t b = r.u32();
    if (b != static_cast<uint32_t>(Backend::Transparent) &&
        b != static_cast<uint32_t>(Backend::OpaqueSealed))
        throw DecodeError("transcript: unknown backend id");
    t.backend = static_cast<Backend>(b);
    Bytes d = r.raw(32);
    std::copy(d.begin(), d.end(), t.params.begin());
    t.payload = r.lp_bytes();
    r.expect_end();
    return t;
}

namespace {

Bytes attestation_message(const crypto::Digest& params, const Bytes& z, bool accept,
                          const crypto::Digest& wcommit) {
    ByteWriter w;
    w.raw(params);
    w.lp_bytes(z);
    w.u8(accept ? 1 : 0);
    w.raw(wcommit);
    return w.take();
}

}  // namespace

VerifierOracle::VerifierOracle(Rng& rng) : keys_(crypto::sig_keygen(rng)) {}

VerifierOracle::Attestation VerifierOracle::attest(const PublicParams& pp,
                                                   const EvaluationCircuit& circuit,
                                                   const Witness& w, const QueryContext& ctx,
                                                   const crypto::Digest& wcommit) const {
    Attestation att;
    att.accept = eval_circuit(circuit, w, ctx).ok();
    const Bytes msg = attestation_message(params_digest(pp), circuit.z, att.accept, wcommit);
    att.sig = crypto::sign(keys_.sk, msg);
    return att;
}

PublicParams psys_setup(Backend backend, const EvaluationCircuit& circuit,
                        const VerifierOracle* oracle) {
    PublicParams pp;
    pp.backend = backend;
    pp.circuit_digest = crypto::sha256(encode_circuit(circuit));
    if (backend == Backend::OpaqueSealed) {
        if (!oracle) throw std::invalid_argument("psys_setup: sealed backend needs an oracle");
        pp.oracle_pk = oracle->pk();
    }
    return pp;
}

ProofTranscript psys_prove(const PublicParams& pp, const EvaluationCircuit& circuit,
                           const Witness& w, const QueryContext& ctx, const VerifierOracle* oracle,
                           Rng& prover_rng) {
    if (pp.circuit_digest != crypto::sha256(encode_circuit(circuit)))
        throw std::invalid_argument("psys_prove: parameters bind a different instance");
    ProofTranscript t;
    t.backend = pp.backend;
    t.params = params_digest(pp);
    if (pp.backend == Backend::Transparent) {
        t.payload = encode_witness(w);
        return t;
    }
    if (!oracle) throw std::invalid_argument("psys_prove: sealed backend needs an oracle");
    const crypto::Nonce nonce = prover_rng.block32();
    const crypto::Digest wcommit = crypto::commit(nonce, encode_witness(w));
    const auto att = oracle->attest(pp, circuit, w, ctx, wcommit);
    ByteWriter payload;
    payload.u8(att.accept ? 1 : 0);
    payload.raw(wcommit);
    payload.raw(att.sig);
    t.payload = payload.take();
    return t;
}

bool psys_verify(const PublicParams& pp, const EvaluationCircuit& circuit,
                 const ProofTranscript& proof, const QueryContext& ctx) {
    if (proof.backend != pp.backend) return false;
    if (proof.params != params_digest(pp)) return false;
    if (pp.circuit_digest != crypto::sha256(encode_circuit(circuit))) return false;

    if (pp.backend == Backend::Transparent) {
        Witness w;
        try {
            w = decode_witness(proof.payload);
        } catch (const DecodeError&) {
            return false;
        }
        return eval_circuit(circuit, w, ctx).ok();
    }

    ByteReader r(proof.payload);
    bool accept = false;
    crypto::Digest wcommit{};
    crypto::Signature sig{};
    try {
        accept = r.u8() == 1;
        Bytes c = r.raw(32);
        std::copy(c.begin(), c.end(), wcommit.begin());
        Bytes s = r.raw(64);
        std::copy(s.begin(), s.end(), sig.begin());
        r.expect_end();
    } catch (const DecodeError&) {
        return false;
    }
    const Bytes msg = attestation_message(proof.params, circuit.z, accept, wcommit);
    if (!crypto::verify_sig(pp.oracle_pk, msg, sig)) return false;
    return accept;
}

}  // namespace pmm::protocol
