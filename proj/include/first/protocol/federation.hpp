#pragma once

#include <functional>
#include <string>
#include <vector>

#include "first/chain/ledger.hpp"
#include "first/common/drbg.hpp"
#include "first/protocol/roles.hpp"

namespace first {

struct SystemSetup {
    ContractDescriptor contract;
    std::vector<VerifierState> verifiers;
};

/// Deploys the contract on `chain` and gives every verifier a fresh keypair.
/// Throws EvenVerifierCount for even or < 3 counts.
SystemSetup system_setup(std::uint32_t verifier_count, unsigned security_k, Drbg& rng, Chain& chain,
                         const std::string& contract_address = "0xf1257c0de",
                         std::uint64_t freshness_threshold = 5);

/// Share proposed by verifier `id` in restart round `round`.
using ShareSource = std::function<mpz_class(std::uint32_t id, unsigned round)>;

struct ParamGenOptions {
    unsigned share_bits = 256;
    unsigned max_rounds = 8;
    ShareSource share_source;  // empty: each verifier samples a random prime
};

struct ParamGenResult {
    PublicParams pp;
    std::vector<Signature> sigma_pp;  // indexed by verifier id
    unsigned restarts = 0;
    std::vector<std::string> events;
};

/// Lists D and U are reset, every verifier checks every share, N is their
/// sum, and each verifier signs pp. A composite share restarts the round;
/// SetupFailed after `max_rounds`. T = 0 is refused here (InvalidDifficulty).
ParamGenResult param_gen(std::vector<VerifierState>& verifiers, std::uint64_t difficulty_T, std::uint64_t epoch_id,
                         Drbg& rng, const ParamGenOptions& options = {});

/// A deployed federation at some epoch.
struct Deployment {
    ContractDescriptor contract;
    std::vector<VerifierState> verifiers;
    PublicParams pp;
    std::vector<Signature> sigma_pp;
    EpochConfig epoch;
    std::uint32_t coordinator_index = 0;

    std::vector<PublicKey> roster() const { return contract.verifier_keys; }
};

struct EpochConstraints {
    std::size_t pending_pool_size = 0;
    double vdf_seconds_per_step = 1e-6;
    double t2_seconds = 0;
    double recommended_tip_pct = 20;
    std::uint64_t freshness_threshold = 5;
    ParamGenOptions param_gen;
};

struct DeploymentOptions {
    std::uint32_t verifier_count = 3;
    unsigned security_k = 64;
    std::uint64_t difficulty_T = 64;
    std::uint32_t coordinator_index = 0;
    std::string contract_address = "0xf1257c0de";
    EpochConstraints epoch;
};

/// system_setup followed by param_gen for epoch 1.
Deployment deploy(const DeploymentOptions& options, Drbg& rng, Chain& chain);

/// New parameters for the next epoch. Throws PendingPoolNotEmpty when T
/// would decrease while the dApp still has pending transactions.
EpochConfig epoch_rotate(Deployment& d, std::uint64_t new_T, const EpochConstraints& c, Drbg& rng);

}  // namespace first
