#include "first/protocol/runtime.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <thread>

#include "first/common/bigint.hpp"

namespace first {

std::string_view to_string(MsgKind k) {
    switch (k) {
        case MsgKind::Intent: return "Intent";
        case MsgKind::Challenge: return "Challenge";
        case MsgKind::ChallengeReply: return "ChallengeReply";
        case MsgKind::ChallengeBundle: return "ChallengeBundle";
        case MsgKind::Proof: return "Proof";
        case MsgKind::AcceptReply: return "AcceptReply";
        case MsgKind::AcceptBundle: return "AcceptBundle";
        case MsgKind::Bottom: return "Bottom";
    }
    return "?";
}

std::string_view to_string(VerifierBehavior b) {
    switch (b) {
        case VerifierBehavior::Honest: return "honest";
        case VerifierBehavior::Drop: return "drop";
        case VerifierBehavior::GarbageSign: return "garbage-sign";
        case VerifierBehavior::ReplayEll: return "replay-ell";
        case VerifierBehavior::FalseAccept: return "false-accept";
    }
    return "?";
}

// ---------------------------------------------------------------- routing

namespace {

void record(Transcript* t, std::span<Actor* const> actors, const Envelope& e) {
    if (t) t->append(actors[e.from]->label(), actors[e.to]->label(), std::string(to_string(e.kind)), e.payload);
}

void route_deterministic(std::span<Actor* const> actors, std::span<const ActorId> idle_order, std::uint64_t seed,
                         Transcript* transcript) {
    std::map<std::pair<ActorId, ActorId>, std::deque<Envelope>> channels;
    auto post = [&](Outbox& out) {
        for (auto& e : out) {
            record(transcript, actors, e);
            channels[{e.from, e.to}].push_back(std::move(e));
        }
        out.clear();
    };
    Outbox out;
    for (auto* a : actors) {
        a->start(out);
        post(out);
    }
    Drbg rng(seed, "schedule");
    std::vector<std::pair<ActorId, ActorId>> ready;
    for (;;) {
        ready.clear();
        for (auto& [key, q] : channels)
            if (!q.empty()) ready.push_back(key);
        if (ready.empty()) {
            bool woke = false;
            for (ActorId id : idle_order) {
                actors[id]->on_idle(out);
                if (!out.empty()) {
                    post(out);
                    woke = true;
                    break;
                }
            }
            if (!woke) return;
            continue;
        }
        auto& q = channels[ready[rng.uniform(ready.size())]];
        Envelope e = std::move(q.front());
        q.pop_front();
        actors[e.to]->on_message(e, out);
        post(out);
    }
}

struct Mailbox {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Envelope> queue;
};

void route_threaded(std::span<Actor* const> actors, std::span<const ActorId> idle_order, Transcript* transcript) {
    std::vector<Mailbox> boxes(actors.size());
    std::atomic<std::int64_t> in_flight{0};
    std::atomic<bool> stop{false};
    std::mutex idle_mu;
    std::condition_variable idle_cv;

    auto post = [&](Outbox& out) {
        for (auto& e : out) {
            record(transcript, actors, e);
            in_flight.fetch_add(1);
            auto& box = boxes[e.to];
            {
                std::lock_guard lock(box.mu);
                box.queue.push_back(std::move(e));
            }
            box.cv.notify_one();
        }
        out.clear();
    };

    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < actors.size(); ++i) {
        workers.emplace_back([&, i] {
            Outbox out;
            for (;;) {
                Envelope e;
                {
                    std::unique_lock lock(boxes[i].mu);
                    boxes[i].cv.wait(lock, [&] { return stop.load() || !boxes[i].queue.empty(); });
                    if (boxes[i].queue.empty()) return;
                    e = std::move(boxes[i].queue.front());
                    boxes[i].queue.pop_front();
                }
                actors[i]->on_message(e, out);
                post(out);
                if (in_flight.fetch_sub(1) == 1) {
                    std::lock_guard lock(idle_mu);
                    idle_cv.notify_all();
                }
            }
        });
    }

    Outbox out;
    for (auto* a : actors) {
        a->start(out);
        post(out);
    }
    for (;;) {
        {
            std::unique_lock lock(idle_mu);
            idle_cv.wait(lock, [&] { return in_flight.load() == 0; });
        }
        bool woke = false;
        for (ActorId id : idle_order) {
            actors[id]->on_idle(out);
            if (!out.empty()) {
                post(out);
                woke = true;
                break;
            }
        }
        if (!woke) break;
    }
    stop.store(true);
    for (auto& b : boxes) {
        std::lock_guard lock(b.mu);
        b.cv.notify_all();
    }
    for (auto& w : workers) w.join();
}

}  // namespace

void route(std::span<Actor* const> actors, std::span<const ActorId> idle_order, Schedule schedule,
           std::uint64_t seed, Transcript* transcript) {
    if (schedule == Schedule::Deterministic)
        route_deterministic(actors, idle_order, seed, transcript);
    else
        route_threaded(actors, idle_order, transcript);
}

// ---------------------------------------------------------------- payloads

namespace {

using SessionKey = std::pair<ActorId, std::uint32_t>;  // (user, attempt)

struct IntentData {
    Digest h{};
    Signature sigma_A;
    PublicKey pk_A;
};

Digest to_digest(ByteView v) {
    Digest d{};
    if (v.size() == d.size()) std::copy(v.begin(), v.end(), d.begin());
    return d;
}

Bytes encode_intent(std::uint32_t attempt, const IntentData& d) {
    ByteWriter w;
    w.field("intent").u32(attempt).field(d.h).field(d.sigma_A.bytes).field(d.pk_A.bytes);
    return std::move(w).take();
}

std::optional<std::pair<std::uint32_t, IntentData>> decode_intent(ByteView in) {
    ByteReader r(in);
    auto tag = r.string_field();
    auto attempt = r.u32();
    auto h = r.field();
    auto s = r.field();
    auto k = r.field();
    if (!tag || *tag != "intent" || !attempt || !h || h->size() != 32 || !s || !k || !r.done()) return std::nullopt;
    auto sig = Signature::from_bytes(*s);
    auto pk = PublicKey::from_bytes(*k);
    if (!sig || !pk) return std::nullopt;
    return std::make_pair(*attempt, IntentData{to_digest(*h), *sig, *pk});
}

struct ChallengeData {
    ActorId user = 0;
    std::uint32_t attempt = 0;
    Digest h{};
    mpz_class ell;
};

Bytes encode_challenge(const ChallengeData& c) {
    ByteWriter w;
    w.field("challenge").u32(c.user).u32(c.attempt).field(c.h).field(to_bytes(c.ell));
    return std::move(w).take();
}

std::optional<ChallengeData> decode_challenge(ByteView in) {
    ByteReader r(in);
    auto tag = r.string_field();
    auto u = r.u32();
    auto a = r.u32();
    auto h = r.field();
    auto ell = r.field();
    if (!tag || *tag != "challenge" || !u || !a || !h || h->size() != 32 || !ell || !r.done()) return std::nullopt;
    return ChallengeData{*u, *a, to_digest(*h), from_bytes(*ell)};
}

struct ReplyData {
    ActorId user = 0;
    std::uint32_t attempt = 0;
    std::optional<Response> response;
    std::string refusal;
};

Bytes encode_reply(const ReplyData& r) {
    ByteWriter w;
    w.field("reply").u32(r.user).u32(r.attempt).u32(r.response ? 1 : 0);
    if (r.response)
        w.u32(r.response->verifier_id).field(r.response->message).field(r.response->sig.bytes);
    else
        w.field(r.refusal);
    return std::move(w).take();
}

std::optional<ReplyData> decode_reply(ByteView in) {
    ByteReader r(in);
    auto tag = r.string_field();
    auto u = r.u32();
    auto a = r.u32();
    auto ok = r.u32();
    if (!tag || *tag != "reply" || !u || !a || !ok) return std::nullopt;
    ReplyData out{*u, *a, std::nullopt, {}};
    if (*ok) {
        auto id = r.u32();
        auto m = r.field();
        auto s = r.field();
        if (!id || !m || !s) return std::nullopt;
        auto sig = Signature::from_bytes(*s);
        if (!sig) return std::nullopt;
        out.response = Response{*id, Bytes(m->begin(), m->end()), *sig};
    } else {
        auto why = r.string_field();
        if (!why) return std::nullopt;
        out.refusal = *why;
    }
    if (!r.done()) return std::nullopt;
    return out;
}

Bytes encode_bundle_msg(std::uint32_t attempt, const SignedBundle& b) {
    ByteWriter w;
    w.field("bundle-msg").u32(attempt).field(encode_bundle(b));
    return std::move(w).take();
}

std::optional<std::pair<std::uint32_t, SignedBundle>> decode_bundle_msg(ByteView in) {
    ByteReader r(in);
    auto tag = r.string_field();
    auto a = r.u32();
    auto b = r.field();
    if (!tag || *tag != "bundle-msg" || !a || !b || !r.done()) return std::nullopt;
    auto bundle = decode_bundle(*b);
    if (!bundle) return std::nullopt;
    return std::make_pair(*a, std::move(*bundle));
}

Bytes encode_proof_msg(std::uint32_t attempt, const mpz_class& ell, const VdfProof& p) {
    ByteWriter w;
    w.field("proof").u32(attempt).field(to_bytes(ell)).field(encode_proof(p));
    return std::move(w).take();
}

std::optional<std::tuple<std::uint32_t, mpz_class, VdfProof>> decode_proof_msg(ByteView in) {
    ByteReader r(in);
    auto tag = r.string_field();
    auto a = r.u32();
    auto ell = r.field();
    auto p = r.field();
    if (!tag || *tag != "proof" || !a || !ell || !p || !r.done()) return std::nullopt;
    auto proof = decode_proof(*p);
    if (!proof) return std::nullopt;
    return std::make_tuple(*a, from_bytes(*ell), std::move(*proof));
}

Bytes encode_bottom(std::uint32_t attempt, std::string_view reason) {
    ByteWriter w;
    w.field("bottom").u32(attempt).field(reason);
    return std::move(w).take();
}

std::optional<std::pair<std::uint32_t, std::string>> decode_bottom(ByteView in) {
    ByteReader r(in);
    auto tag = r.string_field();
    auto a = r.u32();
    auto why = r.string_field();
    if (!tag || *tag != "bottom" || !a || !why || !r.done()) return std::nullopt;
    return std::make_pair(*a, *why);
}

// ---------------------------------------------------------------- actors

struct Context {
    std::uint32_t verifier_count = 0;
    ActorId coordinator = 0;
    std::vector<PublicKey> roster;
    PublicParams pp;
    std::vector<Signature> sigma_pp;
    std::uint64_t seed = 0;
    unsigned max_retries = 3;
    std::function<std::uint64_t()> block_clock;

    std::uint64_t block_now() const { return block_clock ? block_clock() : 0; }
};

class CoordinatorRole {
public:
    CoordinatorRole(const Context& ctx, VerifierState& self, CoordinatorBehavior behavior)
        : ctx_(ctx), self_(self), behavior_(behavior) {}

    void on_intent(ActorId user, std::uint32_t attempt, const IntentData& intent, Outbox& out) {
        const ActorId me = ctx_.coordinator;
        if (!verify(intent.pk_A, intent.h, intent.sigma_A)) {
            out.push_back({me, user, MsgKind::Bottom, encode_bottom(attempt, "BadUserSignature")});
            return;
        }
        Drbg rng = Drbg(ctx_.seed, "coordinator")
                       .fork("ell/" + to_hex(intent.h) + "/" + std::to_string(user) + "/" + std::to_string(attempt));
        auto rec = coordinator_issue(self_, issued_, intent.h, ctx_.block_now(), rng);
        mpz_class ell = rec.ell;
        if (behavior_ == CoordinatorBehavior::ReplayEll && first_issued_) ell = *first_issued_;
        if (behavior_ == CoordinatorBehavior::NonPrimeEll) ell += 1;
        if (!first_issued_) first_issued_ = rec.ell;

        auto& s = sessions_[{user, attempt}];
        s.h = intent.h;
        s.ell = ell;
        s.challenge_open = true;
        const Bytes payload = encode_challenge({user, attempt, intent.h, ell});
        for (ActorId v = 0; v < ctx_.verifier_count; ++v) out.push_back({me, v, MsgKind::Challenge, payload});
    }

    void on_proof(ActorId user, std::uint32_t attempt) {
        auto it = sessions_.find({user, attempt});
        if (it != sessions_.end() && !it->second.accept_done) it->second.accept_open = true;
    }

    void on_reply(bool accept_phase, const ReplyData& r, Outbox& out) {
        auto it = sessions_.find({r.user, r.attempt});
        if (it == sessions_.end()) return;
        auto& s = it->second;
        auto& phase = accept_phase ? s.accept : s.challenge;
        if (accept_phase) {
            if (s.accept_done) return;
            s.accept_open = true;
        } else if (s.challenge_done) {
            return;
        }
        ++phase.count;
        if (r.response) phase.responses.push_back(*r.response);
        if (phase.count == ctx_.verifier_count) finalize(it->first, s, accept_phase, out);
    }

    bool on_idle(Outbox& out) {
        for (auto& [key, s] : sessions_) {
            if (s.challenge_open && !s.challenge_done) {
                finalize(key, s, false, out);
                return true;
            }
            if (s.accept_open && !s.accept_done) {
                finalize(key, s, true, out);
                return true;
            }
        }
        return false;
    }

private:
    struct Phase {
        std::vector<Response> responses;
        std::uint32_t count = 0;
    };
    struct Session {
        Digest h{};
        mpz_class ell;
        Phase challenge, accept;
        bool challenge_open = false, challenge_done = false;
        bool accept_open = false, accept_done = false;
    };

    void finalize(const SessionKey& key, Session& s, bool accept_phase, Outbox& out) {
        const ActorId me = ctx_.coordinator;
        auto& phase = accept_phase ? s.accept : s.challenge;
        (accept_phase ? s.accept_done : s.challenge_done) = true;
        ContentCheck check = accept_phase ? accept_content(s.ell) : challenge_content(s.ell, s.h);

        std::optional<SignedBundle> bundle;
        if (behavior_ == CoordinatorBehavior::ShortBundle) {
            std::vector<Response> valid;
            for (const auto& r : phase.responses)
                if (r.verifier_id < ctx_.roster.size() && check(r) && verify(ctx_.roster[r.verifier_id], r.message, r.sig))
                    valid.push_back(r);
            valid.resize(std::min<std::size_t>(valid.size(), ctx_.verifier_count / 2));
            if (!valid.empty()) {
                std::vector<Bytes> msgs;
                std::vector<Signature> sigs;
                for (auto& r : valid) {
                    msgs.push_back(r.message);
                    sigs.push_back(r.sig);
                }
                bundle = aggregate(msgs, sigs);
                for (auto& r : valid) bundle->public_keys.push_back(ctx_.roster[r.verifier_id]);
            }
        } else {
            bundle = coordinator_aggregate(phase.responses, ctx_.roster, check);
        }
        if (bundle && behavior_ == CoordinatorBehavior::GarbageAggregate)
            bundle->agg_sigma = sign(self_.keypair, as_bytes("not an aggregate"));

        if (bundle)
            out.push_back({me, key.first, accept_phase ? MsgKind::AcceptBundle : MsgKind::ChallengeBundle,
                           encode_bundle_msg(key.second, *bundle)});
        else
            out.push_back({me, key.first, MsgKind::Bottom, encode_bottom(key.second, "NoMajority")});
    }

    const Context& ctx_;
    VerifierState& self_;
    CoordinatorBehavior behavior_;
    std::set<mpz_class> issued_;
    std::optional<mpz_class> first_issued_;
    std::map<SessionKey, Session> sessions_;
};

class VerifierActor : public Actor {
public:
    VerifierActor(const Context& ctx, VerifierState& state, VerifierBehavior behavior,
                  std::optional<CoordinatorBehavior> coordinator)
        : ctx_(ctx), state_(state), behavior_(behavior) {
        if (coordinator) coord_.emplace(ctx, state, *coordinator);
    }

    std::string label() const override {
        return (coord_ ? "coordinator:" : "verifier:") + std::to_string(state_.id);
    }

    void on_message(const Envelope& e, Outbox& out) override {
        switch (e.kind) {
            case MsgKind::Intent: {
                auto in = decode_intent(e.payload);
                if (!in) return;
                auto& p = pending_[{e.from, in->first}];
                if (!p.intent) p.intent = in->second;
                if (coord_) coord_->on_intent(e.from, in->first, in->second, out);
                try_endorse({e.from, in->first}, out);
                break;
            }
            case MsgKind::Challenge: {
                if (e.from != ctx_.coordinator) return;
                auto c = decode_challenge(e.payload);
                if (!c) return;
                auto& p = pending_[{c->user, c->attempt}];
                if (!p.challenge) p.challenge = *c;
                try_endorse({c->user, c->attempt}, out);
                break;
            }
            case MsgKind::Proof: {
                auto pm = decode_proof_msg(e.payload);
                if (!pm) return;
                auto& [attempt, ell, proof] = *pm;
                if (coord_) coord_->on_proof(e.from, attempt);
                endorse_proof(e.from, attempt, ell, proof, out);
                break;
            }
            case MsgKind::ChallengeReply:
            case MsgKind::AcceptReply: {
                if (!coord_) return;
                auto r = decode_reply(e.payload);
                if (!r) return;
                if (r->response) r->response->verifier_id = e.from;  // the channel is authenticated
                coord_->on_reply(e.kind == MsgKind::AcceptReply, *r, out);
                break;
            }
            default:
                break;
        }
    }

    void on_idle(Outbox& out) override {
        if (coord_) coord_->on_idle(out);
    }

private:
    struct Pending {
        std::optional<IntentData> intent;
        std::optional<ChallengeData> challenge;
        bool done = false;
    };

    const mpz_class& replay_target(const mpz_class& ell) {
        for (const auto& old : state_.issued_list_D)
            if (old != ell) return old;
        scratch_ = ell + 2;
        return scratch_;
    }

    void reply(MsgKind kind, const SessionKey& key, std::optional<Response> r, std::string_view refusal,
               Outbox& out) {
        ReplyData d{key.first, key.second, std::move(r), std::string(refusal)};
        out.push_back({state_.id, ctx_.coordinator, kind, encode_reply(d)});
    }

    Response signed_response(Bytes message) {
        Response r{state_.id, std::move(message), {}};
        r.sig = sign(state_.keypair, r.message);
        return r;
    }

    void try_endorse(const SessionKey& key, Outbox& out) {
        auto& p = pending_[key];
        if (p.done || !p.intent || !p.challenge) return;
        p.done = true;
        const auto& c = *p.challenge;
        const auto& in = *p.intent;
        const std::uint64_t block = ctx_.block_now();
        switch (behavior_) {
            case VerifierBehavior::Drop:
                return;
            case VerifierBehavior::GarbageSign: {
                Response r{state_.id, ChallengeMessage{c.ell, c.h, state_.id, block}.encode(), {}};
                r.sig = sign(state_.keypair, as_bytes("garbage"));
                reply(MsgKind::ChallengeReply, key, r, "", out);
                return;
            }
            case VerifierBehavior::ReplayEll: {
                const mpz_class old = replay_target(c.ell);
                reply(MsgKind::ChallengeReply, key,
                      signed_response(ChallengeMessage{old, c.h, state_.id, block}.encode()), "", out);
                return;
            }
            case VerifierBehavior::FalseAccept: {
                state_.issued_list_D.insert(c.ell);
                reply(MsgKind::ChallengeReply, key,
                      signed_response(ChallengeMessage{c.ell, c.h, state_.id, block}.encode()), "", out);
                return;
            }
            case VerifierBehavior::Honest:
                break;
        }
        if (c.h != in.h) {
            reply(MsgKind::ChallengeReply, key, std::nullopt, "DigestMismatch", out);
            return;
        }
        auto res = verifier_endorse_challenge(state_, c.h, c.ell, in.sigma_A, in.pk_A, block);
        reply(MsgKind::ChallengeReply, key, res.response, res.refusal ? to_string(*res.refusal) : "", out);
    }

    void endorse_proof(ActorId user, std::uint32_t attempt, const mpz_class& ell, const VdfProof& proof,
                       Outbox& out) {
        const SessionKey key{user, attempt};
        switch (behavior_) {
            case VerifierBehavior::Drop:
                return;
            case VerifierBehavior::GarbageSign: {
                Response r{state_.id, AcceptMessage{state_.id, ell}.encode(), {}};
                r.sig = sign(state_.keypair, as_bytes("garbage"));
                reply(MsgKind::AcceptReply, key, r, "", out);
                return;
            }
            case VerifierBehavior::ReplayEll: {
                const mpz_class old = replay_target(ell);
                reply(MsgKind::AcceptReply, key, signed_response(AcceptMessage{state_.id, old}.encode()), "", out);
                return;
            }
            case VerifierBehavior::FalseAccept:
                state_.used_list_U.insert(ell);
                reply(MsgKind::AcceptReply, key, signed_response(AcceptMessage{state_.id, ell}.encode()), "", out);
                return;
            case VerifierBehavior::Honest:
                break;
        }
        auto res = verifier_endorse_proof(state_, ell, proof);
        reply(MsgKind::AcceptReply, key, res.response, res.refusal ? to_string(*res.refusal) : "", out);
    }

    const Context& ctx_;
    VerifierState& state_;
    VerifierBehavior behavior_;
    std::optional<CoordinatorRole> coord_;
    std::map<SessionKey, Pending> pending_;
    mpz_class scratch_;
};

class UserActor : public Actor {
public:
    UserActor(const Context& ctx, ActorId id, const UserSpec& spec, const std::string& contract_addr)
        : ctx_(ctx), id_(id), spec_(spec) {
        intent_ = user_prepare_intent(spec.addr, spec.function_name, contract_addr, spec.keypair);
    }

    std::string label() const override { return "user:" + std::to_string(id_ - ctx_.verifier_count); }

    void start(Outbox& out) override { send_intent(out); }

    void on_message(const Envelope& e, Outbox& out) override {
        if (e.from != ctx_.coordinator) return;
        switch (e.kind) {
            case MsgKind::ChallengeBundle: {
                auto m = decode_bundle_msg(e.payload);
                if (!m || m->first != attempt_ || phase_ != Phase::Challenge) return;
                on_challenge_bundle(std::move(m->second), out);
                break;
            }
            case MsgKind::AcceptBundle: {
                auto m = decode_bundle_msg(e.payload);
                if (!m || m->first != attempt_ || phase_ != Phase::Accept) return;
                on_accept_bundle(m->second, out);
                break;
            }
            case MsgKind::Bottom: {
                auto b = decode_bottom(e.payload);
                if (!b || b->first != attempt_ || (phase_ != Phase::Challenge && phase_ != Phase::Accept)) return;
                retry("coordinator returned bottom: " + b->second, out);
                break;
            }
            default:
                break;
        }
    }

    void on_idle(Outbox& out) override {
        if (phase_ == Phase::Challenge || phase_ == Phase::Accept) retry("no answer from coordinator", out);
    }

    SessionOutcome outcome() const { return outcome_; }

private:
    enum class Phase { Challenge, Accept, Done, Failed };

    void send_intent(Outbox& out) {
        phase_ = Phase::Challenge;
        outcome_.attempts = attempt_ + 1;
        IntentData d{intent_.digest_h, intent_.user_sig, intent_.user_keypair.public_v};
        if (spec_.behavior == UserBehavior::BadIntentSig) d.sigma_A = sign(spec_.keypair, as_bytes("not h"));
        const Bytes payload = encode_intent(attempt_, d);
        for (ActorId v = 0; v < ctx_.verifier_count; ++v) out.push_back({id_, v, MsgKind::Intent, payload});
    }

    void retry(const std::string& why, Outbox& out) {
        outcome_.events.push_back("attempt " + std::to_string(attempt_) + ": " + why);
        if (attempt_ >= ctx_.max_retries) {
            phase_ = Phase::Failed;
            outcome_.events.push_back("giving up after " + std::to_string(attempt_ + 1) + " attempts");
            return;
        }
        ++attempt_;
        send_intent(out);
    }

    void on_challenge_bundle(SignedBundle m_agg, Outbox& out) {
        auto anchor = user_check_challenge_bundle(intent_, m_agg, ctx_.pp, ctx_.sigma_pp, ctx_.roster);
        if (!anchor) {
            retry("challenge bundle rejected", out);
            return;
        }
        auto proof = user_eval_and_submit_proof(intent_, m_agg, ctx_.pp, ctx_.sigma_pp, ctx_.roster);
        if (!proof) {
            retry("challenge unusable as VDF input", out);
            return;
        }
        outcome_.ell = anchor->ell;
        if (spec_.behavior == UserBehavior::BadProof) proof->proof_pi = proof->proof_pi % ctx_.pp.vdf.modulus_N + 1;
        m_agg_ = std::move(m_agg);
        phase_ = Phase::Accept;
        const Bytes payload = encode_proof_msg(attempt_, anchor->ell, *proof);
        for (ActorId v = 0; v < ctx_.verifier_count; ++v) out.push_back({id_, v, MsgKind::Proof, payload});
    }

    void on_accept_bundle(const SignedBundle& m_agg_prime, Outbox& out) {
        auto tx = user_build_tx(intent_, m_agg_, m_agg_prime, ctx_.roster, spec_.tip_pct);
        if (!tx) {
            retry("accept bundle rejected", out);
            return;
        }
        if (spec_.behavior == UserBehavior::AlteredMA) {
            tx->details.function_name += "_altered";
            tx->user_sig_prime = sign(spec_.keypair, tx->payload_m_prime());
        }
        outcome_.tx = std::move(*tx);
        phase_ = Phase::Done;
        outcome_.events.push_back("attempt " + std::to_string(attempt_) + ": transaction built");
    }

    const Context& ctx_;
    ActorId id_;
    UserSpec spec_;
    UserTxIntent intent_;
    std::uint32_t attempt_ = 0;
    Phase phase_ = Phase::Challenge;
    SignedBundle m_agg_;
    SessionOutcome outcome_;
};

}  // namespace

std::vector<SessionOutcome> run_pipeline(Deployment& d, std::span<const UserSpec> users,
                                         const PipelineOptions& options) {
    Context ctx;
    ctx.verifier_count = static_cast<std::uint32_t>(d.verifiers.size());
    ctx.coordinator = d.coordinator_index;
    ctx.roster = d.roster();
    ctx.pp = d.pp;
    ctx.sigma_pp = d.sigma_pp;
    ctx.seed = options.seed;
    ctx.max_retries = options.max_retries;
    ctx.block_clock = options.block_clock;

    std::vector<std::unique_ptr<Actor>> owned;
    std::vector<UserActor*> user_actors;
    for (std::uint32_t i = 0; i < ctx.verifier_count; ++i) {
        auto b = i < options.verifier_behaviors.size() ? options.verifier_behaviors[i] : VerifierBehavior::Honest;
        std::optional<CoordinatorBehavior> cb;
        if (i == ctx.coordinator) cb = options.coordinator;
        owned.push_back(std::make_unique<VerifierActor>(ctx, d.verifiers[i], b, cb));
    }
    for (std::size_t u = 0; u < users.size(); ++u) {
        auto a = std::make_unique<UserActor>(ctx, static_cast<ActorId>(ctx.verifier_count + u), users[u],
                                             d.contract.address);
        user_actors.push_back(a.get());
        owned.push_back(std::move(a));
    }
    std::vector<Actor*> actors;
    for (auto& a : owned) actors.push_back(a.get());
    std::vector<ActorId> idle_order{ctx.coordinator};
    for (std::size_t u = 0; u < users.size(); ++u) idle_order.push_back(static_cast<ActorId>(ctx.verifier_count + u));

    route(actors, idle_order, options.schedule, options.seed ^ (options.interleave_seed * 0x9e3779b97f4a7c15ULL),
          options.transcript);

    std::vector<SessionOutcome> out;
    for (auto* u : user_actors) out.push_back(u->outcome());
    return out;
}

}  // namespace first
