#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "first/protocol/federation.hpp"
#include "first/protocol/transcript.hpp"

namespace first {

using ActorId = std::uint32_t;

enum class MsgKind : std::uint8_t {
    Intent,           // user -> every verifier: (h, sigma_A, pk_A)
    Challenge,        // coordinator -> every verifier: (h, ell)
    ChallengeReply,   // verifier -> coordinator: signed M_i or a refusal
    ChallengeBundle,  // coordinator -> user: M_agg
    Proof,            // user -> every verifier: (ell, pi, y)
    AcceptReply,      // verifier -> coordinator: signed M'_i or a refusal
    AcceptBundle,     // coordinator -> user: M'_agg
    Bottom,           // coordinator -> user: the round failed
};
std::string_view to_string(MsgKind k);

struct Envelope {
    ActorId from = 0;
    ActorId to = 0;
    MsgKind kind = MsgKind::Bottom;
    Bytes payload;
};

using Outbox = std::vector<Envelope>;

/// A single-threaded state machine. Routers never call one actor from two
/// threads at once.
class Actor {
public:
    virtual ~Actor() = default;
    virtual std::string label() const = 0;
    virtual void start(Outbox&) {}
    virtual void on_message(const Envelope& e, Outbox& out) = 0;
    /// Called when nothing is in flight; lets actors give up on silent peers.
    virtual void on_idle(Outbox&) {}
};

enum class Schedule { Deterministic, Threaded };

/// Runs actors until quiescent with no idle handler producing work. On
/// quiescence idle handlers are tried in `idle_order`, stopping at the first
/// one that sends something. Deterministic mode picks the next channel with
/// a seeded draw; per-channel FIFO order holds in both modes.
void route(std::span<Actor* const> actors, std::span<const ActorId> idle_order, Schedule schedule,
           std::uint64_t seed, Transcript* transcript);

enum class VerifierBehavior { Honest, Drop, GarbageSign, ReplayEll, FalseAccept };
enum class CoordinatorBehavior { Honest, ReplayEll, GarbageAggregate, ShortBundle, NonPrimeEll };
enum class UserBehavior { Honest, BadIntentSig, BadProof, AlteredMA };

std::string_view to_string(VerifierBehavior b);

struct UserSpec {
    std::string addr;
    std::string function_name;
    KeyPair keypair;
    std::uint32_t tip_pct = 20;
    UserBehavior behavior = UserBehavior::Honest;
};

struct PipelineOptions {
    Schedule schedule = Schedule::Deterministic;
    std::uint64_t seed = 0;
    std::uint64_t interleave_seed = 0;  // perturbs message order only
    std::vector<VerifierBehavior> verifier_behaviors;  // empty: all honest
    CoordinatorBehavior coordinator = CoordinatorBehavior::Honest;
    unsigned max_retries = 3;
    Transcript* transcript = nullptr;
    std::function<std::uint64_t()> block_clock;  // empty: always 0
};

struct SessionOutcome {
    std::optional<FirstTransaction> tx;
    unsigned attempts = 0;
    std::optional<mpz_class> ell;  // challenge of the last attempt that got one
    std::vector<std::string> events;
};

/// One full run of the intent, challenge, proof and accept rounds for every
/// user against the deployment's verifiers. Verifier lists in `d` persist.
std::vector<SessionOutcome> run_pipeline(Deployment& d, std::span<const UserSpec> users,
                                         const PipelineOptions& options);

}  // namespace first
