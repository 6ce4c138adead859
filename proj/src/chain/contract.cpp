#include "first/chain/contract.hpp"

#include <set>

namespace first {

std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::BadUserSignature: return "BadUserSignature";
        case RejectReason::HashMismatch: return "HashMismatch";
        case RejectReason::MissingChallenge: return "MissingChallenge";
        case RejectReason::MissingAccept: return "MissingAccept";
        case RejectReason::NoMajority: return "NoMajority";
        case RejectReason::BadAggregate: return "BadAggregate";
        case RejectReason::Stale: return "Stale";
        case RejectReason::ChallengeReused: return "ChallengeReused";
    }
    return "?";
}

namespace {

ContractVerdict reject(ContractVerdict v, RejectReason r, std::string detail) {
    v.reason = r;
    v.detail = std::move(detail);
    return v;
}

// Distinct verifier ids whose message matches and whose listed key is the
// registered key for that id.
template <class Msg, class Pred>
std::size_t count_matching(const SignedBundle& b, const std::vector<PublicKey>& set, Pred matches) {
    std::set<std::uint32_t> ids;
    for (std::size_t i = 0; i < b.messages.size() && i < b.public_keys.size(); ++i) {
        auto m = Msg::decode(b.messages[i]);
        if (!m || !matches(*m) || m->verifier_id >= set.size()) continue;
        if (set[m->verifier_id] != b.public_keys[i]) continue;
        ids.insert(m->verifier_id);
    }
    return ids.size();
}

}  // namespace

ContractVerdict contract_validate(const FirstTransaction& tx, std::uint64_t block_now, std::uint64_t threshold,
                                  const std::vector<PublicKey>& verifier_set) {
    ContractVerdict v;
    if (!verify(tx.user_pk, tx.payload_m_prime(), tx.user_sig_prime))
        return reject(v, RejectReason::BadUserSignature, "sigma'_A does not verify under pk_A");

    const Digest h = tx.details.digest();
    std::optional<ChallengeMessage> anchor;
    for (const auto& raw : tx.m_agg.messages) {
        auto m = ChallengeMessage::decode(raw);
        if (!m) continue;
        if (m->digest_h != h) return reject(v, RejectReason::HashMismatch, "H(M_A) differs from h in M_agg");
        if (!anchor) anchor = m;
    }
    if (!anchor) return reject(v, RejectReason::MissingChallenge, "no (ell, h, V_i, block_curr) in M_agg");
    v.ell = anchor->ell;
    v.block_curr = anchor->block_curr;

    bool accepted = false;
    for (const auto& raw : tx.m_agg_prime.messages) {
        auto m = AcceptMessage::decode(raw);
        if (m && m->ell == anchor->ell) accepted = true;
    }
    if (!accepted) return reject(v, RejectReason::MissingAccept, "no (\"accept\", V_i, ell) in M'_agg");

    const std::size_t n = verifier_set.size();
    const std::size_t j = count_matching<ChallengeMessage>(tx.m_agg, verifier_set, [&](const ChallengeMessage& m) {
        return m.ell == anchor->ell && m.digest_h == h && m.block_curr == anchor->block_curr;
    });
    const std::size_t j_prime = count_matching<AcceptMessage>(
        tx.m_agg_prime, verifier_set, [&](const AcceptMessage& m) { return m.ell == anchor->ell; });
    if (2 * j <= n || 2 * j_prime <= n)
        return reject(v, RejectReason::NoMajority,
                      "j = " + std::to_string(j) + ", j' = " + std::to_string(j_prime) + " of " + std::to_string(n));

    if (!aggregate_verify(tx.m_agg_prime)) return reject(v, RejectReason::BadAggregate, "M'_agg does not verify");
    if (!aggregate_verify(tx.m_agg)) return reject(v, RejectReason::BadAggregate, "M_agg does not verify");

    if (block_now < anchor->block_curr || block_now - anchor->block_curr > threshold)
        return reject(v, RejectReason::Stale,
                      "issued at " + std::to_string(anchor->block_curr) + ", now " + std::to_string(block_now) +
                          ", threshold " + std::to_string(threshold));
    return v;
}

ContractVerdict FirstContract::execute(const FirstTransaction& tx, std::uint64_t block_now) {
    auto v = contract_validate(tx, block_now, descriptor_.freshness_threshold, descriptor_.verifier_keys);
    if (!v.executes()) return v;
    std::lock_guard lock(mu_);
    if (!consumed_.insert(v.ell).second) {
        v.reason = RejectReason::ChallengeReused;
        v.detail = "ell already backed an executed transaction";
    }
    return v;
}

std::size_t FirstContract::executed() const {
    std::lock_guard lock(mu_);
    return consumed_.size();
}

}  // namespace first
