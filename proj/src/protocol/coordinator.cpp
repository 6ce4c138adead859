#include <algorithm>

#include "first/common/bigint.hpp"
#include "first/protocol/roles.hpp"

namespace first {

ChallengeRecord coordinator_issue(const VerifierState& self, std::set<mpz_class>& issued, const Digest& h,
                                  std::uint64_t block_now, Drbg& rng) {
    const unsigned bits = 2 * self.current_pp.vdf.security_k;
    mpz_class ell;
    do {
        ell = random_prime(rng, bits);
    } while (issued.contains(ell) || self.issued_list_D.contains(ell) || self.used_list_U.contains(ell) ||
             ell >= self.current_pp.vdf.modulus_N);
    issued.insert(ell);
    return ChallengeRecord{ell, h, block_now, ChallengeState::Issued};
}

std::optional<SignedBundle> coordinator_aggregate(std::span<const Response> responses,
                                                  const std::vector<PublicKey>& roster,
                                                  const ContentCheck& content_ok) {
    std::vector<const Response*> valid;
    std::vector<bool> taken(roster.size(), false);
    for (const auto& r : responses) {
        if (r.verifier_id >= roster.size() || taken[r.verifier_id]) continue;
        if (!content_ok(r)) continue;
        if (!verify(roster[r.verifier_id], r.message, r.sig)) continue;
        taken[r.verifier_id] = true;
        valid.push_back(&r);
    }
    if (2 * valid.size() <= roster.size()) return std::nullopt;
    std::sort(valid.begin(), valid.end(), [](auto* a, auto* b) { return a->verifier_id < b->verifier_id; });

    std::vector<Bytes> messages;
    std::vector<Signature> sigs;
    for (auto* r : valid) {
        messages.push_back(r->message);
        sigs.push_back(r->sig);
    }
    SignedBundle bundle = aggregate(messages, sigs);
    for (auto* r : valid) bundle.public_keys.push_back(roster[r->verifier_id]);
    return bundle;
}

ContentCheck challenge_content(const mpz_class& ell, const Digest& h) {
    return [ell, h](const Response& r) {
        auto m = ChallengeMessage::decode(r.message);
        return m && m->ell == ell && m->digest_h == h && m->verifier_id == r.verifier_id;
    };
}

ContentCheck accept_content(const mpz_class& ell) {
    return [ell](const Response& r) {
        auto m = AcceptMessage::decode(r.message);
        return m && m->ell == ell && m->verifier_id == r.verifier_id;
    };
}

}  // namespace first
