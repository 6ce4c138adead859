#include "first/protocol/messages.hpp"

#include "first/common/bigint.hpp"
#include "first/common/error.hpp"

namespace first {

namespace {

bool expect_tag(ByteReader& r, std::string_view tag) {
    auto t = r.field();
    return t && std::equal(t->begin(), t->end(), tag.begin(), tag.end());
}

template <class T>
std::optional<T> from_view(std::optional<ByteView> v) {
    if (!v) return std::nullopt;
    return T::from_bytes(*v);
}

std::optional<Digest> digest_field(ByteReader& r) {
    auto f = r.field();
    if (!f || f->size() != 32) return std::nullopt;
    Digest d;
    std::copy(f->begin(), f->end(), d.begin());
    return d;
}

std::optional<mpz_class> int_field(ByteReader& r) {
    auto f = r.field();
    if (!f) return std::nullopt;
    return from_bytes(*f);
}

}  // namespace

Bytes TxDetails::encode() const {
    ByteWriter w;
    w.field("M_A").field(user_addr).field(function_name).field(contract_addr);
    return std::move(w).take();
}

std::optional<TxDetails> TxDetails::decode(ByteView in) {
    ByteReader r(in);
    if (!expect_tag(r, "M_A")) return std::nullopt;
    TxDetails d;
    auto a = r.string_field(), f = r.string_field(), c = r.string_field();
    if (!a || !f || !c || !r.done()) return std::nullopt;
    d.user_addr = *a;
    d.function_name = *f;
    d.contract_addr = *c;
    return d;
}

Bytes ChallengeMessage::encode() const {
    ByteWriter w;
    w.field("M_i").field(to_bytes(ell)).field(digest_h).u32(verifier_id).u64(block_curr);
    return std::move(w).take();
}

std::optional<ChallengeMessage> ChallengeMessage::decode(ByteView in) {
    ByteReader r(in);
    if (!expect_tag(r, "M_i")) return std::nullopt;
    ChallengeMessage m;
    auto ell = int_field(r);
    auto h = digest_field(r);
    auto v = r.u32();
    auto b = r.u64();
    if (!ell || !h || !v || !b || !r.done()) return std::nullopt;
    m.ell = *ell;
    m.digest_h = *h;
    m.verifier_id = *v;
    m.block_curr = *b;
    return m;
}

Bytes AcceptMessage::encode() const {
    ByteWriter w;
    w.field("M'_i").field("accept").u32(verifier_id).field(to_bytes(ell));
    return std::move(w).take();
}

std::optional<AcceptMessage> AcceptMessage::decode(ByteView in) {
    ByteReader r(in);
    if (!expect_tag(r, "M'_i") || !expect_tag(r, "accept")) return std::nullopt;
    AcceptMessage m;
    auto v = r.u32();
    auto ell = int_field(r);
    if (!v || !ell || !r.done()) return std::nullopt;
    m.verifier_id = *v;
    m.ell = *ell;
    return m;
}

Bytes PublicParams::encode() const {
    ByteWriter w;
    w.field("pp").u64(epoch_id).field(to_bytes(vdf.modulus_N)).u64(vdf.difficulty_T).u32(vdf.security_k);
    return std::move(w).take();
}

Bytes encode_bundle(const SignedBundle& b) {
    ByteWriter w;
    w.field("bundle").field(b.agg_sigma.bytes).u32(static_cast<std::uint32_t>(b.messages.size()));
    for (const auto& m : b.messages) w.field(m);
    w.u32(static_cast<std::uint32_t>(b.public_keys.size()));
    for (const auto& k : b.public_keys) w.field(k.bytes);
    return std::move(w).take();
}

std::optional<SignedBundle> decode_bundle(ByteView in) {
    ByteReader r(in);
    if (!expect_tag(r, "bundle")) return std::nullopt;
    SignedBundle b;
    auto sig = from_view<Signature>(r.field());
    auto n = r.u32();
    if (!sig || !n || *n > in.size()) return std::nullopt;
    b.agg_sigma = *sig;
    for (std::uint32_t i = 0; i < *n; ++i) {
        auto m = r.field();
        if (!m) return std::nullopt;
        b.messages.emplace_back(m->begin(), m->end());
    }
    auto nk = r.u32();
    if (!nk || *nk > in.size()) return std::nullopt;
    for (std::uint32_t i = 0; i < *nk; ++i) {
        auto k = from_view<PublicKey>(r.field());
        if (!k) return std::nullopt;
        b.public_keys.push_back(*k);
    }
    if (!r.done()) return std::nullopt;
    return b;
}

Bytes encode_proof(const VdfProof& p) {
    ByteWriter w;
    w.field("vdf-proof")
        .field(to_bytes(p.input_x))
        .field(to_bytes(p.output_y))
        .field(to_bytes(p.proof_pi))
        .field(to_bytes(p.fs_challenge_prime));
    return std::move(w).take();
}

std::optional<VdfProof> decode_proof(ByteView in) {
    ByteReader r(in);
    if (!expect_tag(r, "vdf-proof")) return std::nullopt;
    auto x = int_field(r), y = int_field(r), pi = int_field(r), l = int_field(r);
    if (!x || !y || !pi || !l || !r.done()) return std::nullopt;
    return VdfProof{*x, *y, *pi, *l};
}

bool ChallengeRecord::advance(ChallengeState next) {
    if (static_cast<int>(next) <= static_cast<int>(state)) return false;
    state = next;
    return true;
}

Bytes FirstTransaction::payload_m_prime() const {
    ByteWriter w;
    w.field("M'").field(details.encode()).field(encode_bundle(m_agg)).field(encode_bundle(m_agg_prime));
    return std::move(w).take();
}

Bytes FirstTransaction::encode() const {
    ByteWriter w;
    w.field("tx_A").field(user_sig_prime.bytes).field(payload_m_prime()).field(user_pk.bytes).u32(declared_tip_pct);
    return std::move(w).take();
}

std::optional<FirstTransaction> FirstTransaction::decode(ByteView in) {
    ByteReader r(in);
    if (!expect_tag(r, "tx_A")) return std::nullopt;
    FirstTransaction tx;
    auto sig = from_view<Signature>(r.field());
    auto mp = r.field();
    auto pk = from_view<PublicKey>(r.field());
    auto tip = r.u32();
    if (!sig || !mp || !pk || !tip || !r.done()) return std::nullopt;
    tx.user_sig_prime = *sig;
    tx.user_pk = *pk;
    tx.declared_tip_pct = *tip;

    ByteReader m(*mp);
    if (!expect_tag(m, "M'")) return std::nullopt;
    auto d = m.field(), a = m.field(), ap = m.field();
    if (!d || !a || !ap || !m.done()) return std::nullopt;
    auto details = TxDetails::decode(*d);
    auto agg = decode_bundle(*a);
    auto aggp = decode_bundle(*ap);
    if (!details || !agg || !aggp) return std::nullopt;
    tx.details = *details;
    tx.m_agg = *agg;
    tx.m_agg_prime = *aggp;
    return tx;
}

void validate_epoch(const EpochConfig& e) {
    if (e.verifier_count % 2 == 0)
        throw Error("EvenVerifierCount", "verifier count must be odd, got " + std::to_string(e.verifier_count));
    if (!(e.t1_seconds > e.t2_seconds))
        throw Error("InvalidEpoch", "VDF delay t1 must exceed the expected mempool wait t2");
}

}  // namespace first
