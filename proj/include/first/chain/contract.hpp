#pragma once

#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "first/protocol/messages.hpp"

namespace first {

enum class RejectReason {
    BadUserSignature,
    HashMismatch,
    MissingChallenge,
    MissingAccept,
    NoMajority,
    BadAggregate,
    Stale,
    ChallengeReused,
};
std::string_view to_string(RejectReason r);

struct ContractVerdict {
    std::optional<RejectReason> reason;  // empty: execute
    std::string detail;
    mpz_class ell;                 // challenge the tx is bound to, when found
    std::uint64_t block_curr = 0;  // issuance height, when found

    bool executes() const { return !reason.has_value(); }
};

/// Checks, in order: sigma'_A over M'; H(M_A) against the h inside M_agg;
/// a challenge message (ell, h, ., block_curr); an ("accept", ., ell);
/// more than |V|/2 matching messages from registered keys in each bundle;
/// both aggregates; 0 <= block_now - block_curr <= threshold.
ContractVerdict contract_validate(const FirstTransaction& tx, std::uint64_t block_now, std::uint64_t threshold,
                                  const std::vector<PublicKey>& verifier_set);

/// The deployed contract: stateless validation plus a record of consumed
/// challenges so an ell can back at most one executed transaction.
class FirstContract {
public:
    explicit FirstContract(ContractDescriptor descriptor) : descriptor_(std::move(descriptor)) {}

    ContractVerdict execute(const FirstTransaction& tx, std::uint64_t block_now);
    const ContractDescriptor& descriptor() const { return descriptor_; }
    std::size_t executed() const;

private:
    ContractDescriptor descriptor_;
    mutable std::mutex mu_;
    std::set<mpz_class> consumed_;
};

}  // namespace first
