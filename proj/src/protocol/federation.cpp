#include "first/protocol/federation.hpp"

#include "first/common/bigint.hpp"
#include "first/common/error.hpp"

namespace first {

SystemSetup system_setup(std::uint32_t verifier_count, unsigned security_k, Drbg& rng, Chain& chain,
                         const std::string& contract_address, std::uint64_t freshness_threshold) {
    if (verifier_count < 3 || verifier_count % 2 == 0)
        throw Error("EvenVerifierCount",
                    "an odd number of at least 3 verifiers is required, got " + std::to_string(verifier_count));
    SystemSetup out;
    out.contract.address = contract_address;
    out.contract.freshness_threshold = freshness_threshold;
    for (std::uint32_t i = 0; i < verifier_count; ++i) {
        Drbg vrng = rng.fork("verifier/" + std::to_string(i) + "/keygen");
        VerifierState v;
        v.id = i;
        v.keypair = keygen(vrng);
        v.current_pp.vdf.security_k = security_k;
        out.contract.verifier_keys.push_back(v.keypair.public_v);
        out.verifiers.push_back(std::move(v));
    }
    chain.register_contract(out.contract);
    return out;
}

ParamGenResult param_gen(std::vector<VerifierState>& verifiers, std::uint64_t difficulty_T, std::uint64_t epoch_id,
                         Drbg& rng, const ParamGenOptions& options) {
    if (verifiers.empty()) throw Error("SetupFailed", "no verifiers");
    if (difficulty_T == 0) throw Error("InvalidDifficulty", "T must be positive at the protocol layer");
    const unsigned k = verifiers.front().current_pp.vdf.security_k;

    ParamGenResult out;
    for (unsigned round = 0; round < options.max_rounds; ++round) {
        for (auto& v : verifiers) v.reset_lists();

        std::vector<mpz_class> shares;
        for (auto& v : verifiers) {
            mpz_class s;
            if (options.share_source) {
                s = options.share_source(v.id, round);
            } else {
                Drbg srng = rng.fork("share/" + std::to_string(epoch_id) + "/" + std::to_string(round) + "/" +
                                     std::to_string(v.id));
                s = random_prime(srng, options.share_bits);
            }
            v.modulus_share_s = s;
            shares.push_back(s);
        }

        // every verifier checks every share; any failure restarts all of them
        bool all_prime = true;
        for (std::size_t checker = 0; checker < verifiers.size() && all_prime; ++checker) {
            for (std::size_t i = 0; i < shares.size(); ++i) {
                if (!miller_rabin(shares[i], 64)) {
                    out.events.push_back("round " + std::to_string(round) + ": verifier " + std::to_string(checker) +
                                         " rejected share " + shares[i].get_str() + " of verifier " +
                                         std::to_string(i) + "; restart");
                    all_prime = false;
                    break;
                }
            }
        }
        if (!all_prime) {
            ++out.restarts;
            continue;
        }

        mpz_class n = 0;
        for (const auto& s : shares) n += s;
        VdfParams vdf;
        try {
            vdf = vdf_setup(k, from_u64(difficulty_T), n);
        } catch (const Error& e) {
            out.events.push_back("round " + std::to_string(round) + ": " + e.what() + "; restart");
            ++out.restarts;
            continue;
        }
        out.pp = PublicParams{epoch_id, vdf};
        const Bytes pp_bytes = out.pp.encode();
        for (auto& v : verifiers) {
            v.current_pp = out.pp;
            out.sigma_pp.push_back(sign(v.keypair, pp_bytes));
        }
        out.events.push_back("round " + std::to_string(round) + ": N = " + n.get_str() + " from " +
                             std::to_string(shares.size()) + " prime shares");
        return out;
    }
    throw Error("SetupFailed", "no valid modulus after " + std::to_string(options.max_rounds) + " rounds");
}

namespace {

EpochConfig make_epoch(const Deployment& d, const EpochConstraints& c) {
    EpochConfig e;
    e.epoch_id = d.pp.epoch_id;
    e.difficulty_T = d.pp.vdf.difficulty_T;
    e.modulus_N = d.pp.vdf.modulus_N;
    e.recommended_tip_pct = c.recommended_tip_pct;
    e.freshness_threshold = c.freshness_threshold;
    e.t1_seconds = static_cast<double>(e.difficulty_T) * c.vdf_seconds_per_step;
    e.t2_seconds = c.t2_seconds;
    e.verifier_count = static_cast<std::uint32_t>(d.verifiers.size());
    validate_epoch(e);
    return e;
}

}  // namespace

Deployment deploy(const DeploymentOptions& options, Drbg& rng, Chain& chain) {
    auto setup = system_setup(options.verifier_count, options.security_k, rng, chain, options.contract_address,
                              options.epoch.freshness_threshold);
    if (options.coordinator_index >= options.verifier_count)
        throw Error("ConfigInvalid", "coordinator index out of range");
    Deployment d;
    d.contract = std::move(setup.contract);
    d.verifiers = std::move(setup.verifiers);
    d.coordinator_index = options.coordinator_index;
    auto pg = param_gen(d.verifiers, options.difficulty_T, 1, rng, options.epoch.param_gen);
    d.pp = pg.pp;
    d.sigma_pp = std::move(pg.sigma_pp);
    d.epoch = make_epoch(d, options.epoch);
    return d;
}

EpochConfig epoch_rotate(Deployment& d, std::uint64_t new_T, const EpochConstraints& c, Drbg& rng) {
    if (new_T < d.pp.vdf.difficulty_T && c.pending_pool_size > 0)
        throw Error("PendingPoolNotEmpty", std::to_string(c.pending_pool_size) +
                                               " pending transactions; T may only decrease on an empty pool");
    EpochConfig check;
    check.verifier_count = static_cast<std::uint32_t>(d.verifiers.size());
    check.t1_seconds = static_cast<double>(new_T) * c.vdf_seconds_per_step;
    check.t2_seconds = c.t2_seconds;
    validate_epoch(check);
    auto pg = param_gen(d.verifiers, new_T, d.pp.epoch_id + 1, rng, c.param_gen);
    d.pp = pg.pp;
    d.sigma_pp = std::move(pg.sigma_pp);
    d.epoch = make_epoch(d, c);
    return d.epoch;
}

}  // namespace first
