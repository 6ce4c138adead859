#pragma once

#include <string>
#include <vector>

#include "first/chain/contract.hpp"
#include "first/chain/ledger.hpp"
#include "first/protocol/runtime.hpp"

namespace first::testing {

inline DeploymentOptions small_options(std::uint32_t n, std::uint64_t T = 32) {
    DeploymentOptions o;
    o.verifier_count = n;
    o.security_k = 64;
    o.difficulty_T = T;
    o.epoch.param_gen.share_bits = 160;
    o.epoch.freshness_threshold = 5;
    return o;
}

struct Federation {
    Chain chain;
    Deployment d;

    explicit Federation(std::uint32_t n, std::uint64_t seed = 1, std::uint64_t T = 32) {
        Drbg rng(seed, "fixture");
        d = deploy(small_options(n, T), rng, chain);
        chain.set_height(100);
    }

    std::function<std::uint64_t()> clock() {
        return [this] { return chain.height(); };
    }
};

inline UserSpec user(const std::string& name, UserBehavior b = UserBehavior::Honest) {
    UserSpec u;
    u.addr = "0xa11ce-" + name;
    u.function_name = "swap_" + name;
    u.keypair = keygen(as_bytes("user/" + name));
    u.behavior = b;
    return u;
}

inline SessionOutcome run_one(Federation& f, const UserSpec& u, PipelineOptions o = {}) {
    if (!o.block_clock) o.block_clock = f.clock();
    std::vector<UserSpec> us{u};
    return run_pipeline(f.d, us, o).front();
}

}  // namespace first::testing
