#include "first/common/bigint.hpp"
#include "first/protocol/roles.hpp"

namespace first {

std::string_view to_string(Refusal r) {
    switch (r) {
        case Refusal::ReusedEll: return "ReusedEll";
        case Refusal::UnknownEll: return "UnknownEll";
        case Refusal::MalformedEll: return "MalformedEll";
        case Refusal::BadUserSignature: return "BadUserSignature";
        case Refusal::ProofRejected: return "ProofRejected";
    }
    return "?";
}

bool ell_well_formed(const PublicParams& pp, const mpz_class& ell) {
    const unsigned bits = 2 * pp.vdf.security_k;
    if (ell <= 1 || ell >= pp.vdf.modulus_N) return false;
    if (mpz_sizeinbase(ell.get_mpz_t(), 2) != bits) return false;
    return miller_rabin(ell, 64);
}

EndorseResult verifier_endorse_challenge(VerifierState& v, const Digest& h, const mpz_class& ell,
                                         const Signature& sigma_A, const PublicKey& pk_A, std::uint64_t block_curr) {
    EndorseResult out;
    if (v.issued_list_D.contains(ell) || v.used_list_U.contains(ell)) {
        out.refusal = Refusal::ReusedEll;
        return out;
    }
    if (!ell_well_formed(v.current_pp, ell)) {
        out.refusal = Refusal::MalformedEll;
        return out;
    }
    if (!verify(pk_A, h, sigma_A)) {
        out.refusal = Refusal::BadUserSignature;
        return out;
    }
    ChallengeMessage m{ell, h, v.id, block_curr};
    Response r{v.id, m.encode(), {}};
    r.sig = sign(v.keypair, r.message);
    v.issued_list_D.insert(ell);
    out.response = std::move(r);
    return out;
}

EndorseResult verifier_endorse_proof(VerifierState& v, const mpz_class& ell, const VdfProof& proof) {
    EndorseResult out;
    if (v.used_list_U.contains(ell)) {
        out.refusal = Refusal::ReusedEll;
        return out;
    }
    if (!v.issued_list_D.contains(ell)) {
        out.refusal = Refusal::UnknownEll;
        return out;
    }
    v.used_list_U.insert(ell);
    if (proof.input_x != ell || !vdf_verify(v.current_pp.vdf, proof)) {
        out.refusal = Refusal::ProofRejected;
        return out;
    }
    AcceptMessage m{v.id, ell};
    Response r{v.id, m.encode(), {}};
    r.sig = sign(v.keypair, r.message);
    out.response = std::move(r);
    return out;
}

}  // namespace first
