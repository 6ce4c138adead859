#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "first/aggsig.hpp"
#include "first/common/drbg.hpp"
#include "first/protocol/messages.hpp"

namespace first {

struct VerifierState {
    std::uint32_t id = 0;
    KeyPair keypair;
    std::set<mpz_class> issued_list_D;
    std::set<mpz_class> used_list_U;
    PublicParams current_pp;
    mpz_class modulus_share_s;

    void reset_lists() {
        issued_list_D.clear();
        used_list_U.clear();
    }
};

/// Why a verifier returned bottom.
enum class Refusal { ReusedEll, UnknownEll, MalformedEll, BadUserSignature, ProofRejected };
std::string_view to_string(Refusal r);

/// A signed (M_i, sigma_i) or (M'_i, sigma'_i) as it travels to the coordinator.
struct Response {
    std::uint32_t verifier_id = 0;
    Bytes message;
    Signature sig;
};

struct EndorseResult {
    std::optional<Response> response;
    std::optional<Refusal> refusal;
    explicit operator bool() const { return response.has_value(); }
};

/// ell must be a prime of exactly 2k bits below N to be a usable VDF input.
bool ell_well_formed(const PublicParams& pp, const mpz_class& ell);

EndorseResult verifier_endorse_challenge(VerifierState& v, const Digest& h, const mpz_class& ell,
                                         const Signature& sigma_A, const PublicKey& pk_A, std::uint64_t block_curr);

/// ell moves to U before the proof is checked, so a failed proof burns it.
EndorseResult verifier_endorse_proof(VerifierState& v, const mpz_class& ell, const VdfProof& proof);

/// Samples a fresh 2k-bit prime outside the coordinator's own D and U and
/// outside everything it issued before.
ChallengeRecord coordinator_issue(const VerifierState& self, std::set<mpz_class>& issued, const Digest& h,
                                  std::uint64_t block_now, Drbg& rng);

using ContentCheck = std::function<bool(const Response&)>;

/// Keeps responses whose signature verifies under the registered key and
/// whose content passes `content_ok`, one per verifier, sorted by id.
/// Bottom unless more than half of the roster survives.
std::optional<SignedBundle> coordinator_aggregate(std::span<const Response> responses,
                                                  const std::vector<PublicKey>& roster,
                                                  const ContentCheck& content_ok);

ContentCheck challenge_content(const mpz_class& ell, const Digest& h);
ContentCheck accept_content(const mpz_class& ell);

UserTxIntent user_prepare_intent(const std::string& addr, const std::string& f_name, const std::string& sc_addr,
                                 const KeyPair& keypair);

struct ChallengeAnchor {
    mpz_class ell;
    std::uint64_t block_curr = 0;
    std::size_t j = 0;
};

/// Everything the user checks before spending VDF time: the aggregate, that
/// all M_i carry her h with one (ell, block), distinct registered signers,
/// j > |V|/2, and sigma_pp from every signer.
std::optional<ChallengeAnchor> user_check_challenge_bundle(const UserTxIntent& intent, const SignedBundle& m_agg,
                                                           const PublicParams& pp,
                                                           std::span<const Signature> sigma_pp,
                                                           const std::vector<PublicKey>& roster);

std::optional<VdfProof> user_eval_and_submit_proof(const UserTxIntent& intent, const SignedBundle& m_agg,
                                                   const PublicParams& pp, std::span<const Signature> sigma_pp,
                                                   const std::vector<PublicKey>& roster);

std::optional<FirstTransaction> user_build_tx(const UserTxIntent& intent, const SignedBundle& m_agg,
                                              const SignedBundle& m_agg_prime, const std::vector<PublicKey>& roster,
                                              std::uint32_t tip_pct);

}  // namespace first
