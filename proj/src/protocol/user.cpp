#include <set>

#include "first/protocol/roles.hpp"

namespace first {

namespace {

// Signer ids behind a bundle, provided each key is the registered key of the
// id its message names and no id repeats.
template <class Msg>
std::optional<std::vector<Msg>> registered_messages(const SignedBundle& b, const std::vector<PublicKey>& roster) {
    if (b.messages.size() != b.public_keys.size()) return std::nullopt;
    std::vector<Msg> out;
    std::set<std::uint32_t> ids;
    for (std::size_t i = 0; i < b.messages.size(); ++i) {
        auto m = Msg::decode(b.messages[i]);
        if (!m || m->verifier_id >= roster.size()) return std::nullopt;
        if (roster[m->verifier_id] != b.public_keys[i]) return std::nullopt;
        if (!ids.insert(m->verifier_id).second) return std::nullopt;
        out.push_back(*m);
    }
    return out;
}

}  // namespace

UserTxIntent user_prepare_intent(const std::string& addr, const std::string& f_name, const std::string& sc_addr,
                                 const KeyPair& keypair) {
    UserTxIntent intent;
    intent.details = TxDetails{addr, f_name, sc_addr};
    intent.digest_h = intent.details.digest();
    intent.user_sig = sign(keypair, intent.digest_h);
    intent.user_keypair = keypair;
    return intent;
}

std::optional<ChallengeAnchor> user_check_challenge_bundle(const UserTxIntent& intent, const SignedBundle& m_agg,
                                                           const PublicParams& pp,
                                                           std::span<const Signature> sigma_pp,
                                                           const std::vector<PublicKey>& roster) {
    if (m_agg.messages.empty() || 2 * m_agg.messages.size() <= roster.size()) return std::nullopt;
    auto msgs = registered_messages<ChallengeMessage>(m_agg, roster);
    if (!msgs) return std::nullopt;
    const auto& first = msgs->front();
    for (const auto& m : *msgs) {
        if (m.digest_h != intent.digest_h || m.ell != first.ell || m.block_curr != first.block_curr)
            return std::nullopt;
    }
    if (!aggregate_verify(m_agg)) return std::nullopt;
    const Bytes pp_bytes = pp.encode();
    for (const auto& m : *msgs) {
        if (m.verifier_id >= sigma_pp.size()) return std::nullopt;
        if (!verify(roster[m.verifier_id], pp_bytes, sigma_pp[m.verifier_id])) return std::nullopt;
    }
    return ChallengeAnchor{first.ell, first.block_curr, msgs->size()};
}

std::optional<VdfProof> user_eval_and_submit_proof(const UserTxIntent& intent, const SignedBundle& m_agg,
                                                   const PublicParams& pp, std::span<const Signature> sigma_pp,
                                                   const std::vector<PublicKey>& roster) {
    auto anchor = user_check_challenge_bundle(intent, m_agg, pp, sigma_pp, roster);
    if (!anchor) return std::nullopt;
    if (anchor->ell <= 1 || anchor->ell >= pp.vdf.modulus_N || !vdf_element_ok(pp.vdf, anchor->ell))
        return std::nullopt;
    return vdf_eval(pp.vdf, anchor->ell);
}

std::optional<FirstTransaction> user_build_tx(const UserTxIntent& intent, const SignedBundle& m_agg,
                                              const SignedBundle& m_agg_prime, const std::vector<PublicKey>& roster,
                                              std::uint32_t tip_pct) {
    if (m_agg.messages.empty() || m_agg_prime.messages.empty()) return std::nullopt;
    if (2 * m_agg_prime.messages.size() <= roster.size()) return std::nullopt;
    auto anchor = ChallengeMessage::decode(m_agg.messages.front());
    auto accepts = registered_messages<AcceptMessage>(m_agg_prime, roster);
    if (!anchor || !accepts) return std::nullopt;
    for (const auto& a : *accepts) {
        if (a.ell != anchor->ell) return std::nullopt;
    }
    if (!aggregate_verify(m_agg_prime)) return std::nullopt;

    FirstTransaction tx;
    tx.details = intent.details;
    tx.m_agg = m_agg;
    tx.m_agg_prime = m_agg_prime;
    tx.user_pk = intent.user_keypair.public_v;
    tx.declared_tip_pct = tip_pct;
    tx.user_sig_prime = sign(intent.user_keypair, tx.payload_m_prime());
    return tx;
}

}  // namespace first
