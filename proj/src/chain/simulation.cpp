#include "first/chain/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "first/chain/contract.hpp"
#include "first/chain/fee.hpp"
#include "first/chain/ledger.hpp"
#include "first/common/error.hpp"
#include "first/protocol/runtime.hpp"

namespace first {

std::string_view to_string(AdversaryStrategy s) {
    switch (s) {
        case AdversaryStrategy::None: return "none";
        case AdversaryStrategy::Reactive: return "reactive";
        case AdversaryStrategy::OfflinePrecompute: return "offline_precompute";
    }
    return "?";
}

std::optional<AdversaryStrategy> parse_strategy(std::string_view s) {
    for (auto v : {AdversaryStrategy::None, AdversaryStrategy::Reactive, AdversaryStrategy::OfflinePrecompute})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

std::string_view to_string(TxStatus s) {
    switch (s) {
        case TxStatus::Confirmed: return "confirmed";
        case TxStatus::Rejected: return "rejected";
        case TxStatus::Pending: return "pending";
    }
    return "?";
}

void validate(const SimConfig& c) {
    auto bad = [](const std::string& what) { throw Error("ConfigInvalid", what); };
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0; };
    if (!finite_pos(c.block_interval_s)) bad("block_interval_s must be positive");
    if (c.block_gas_target == 0) bad("block_gas_target must be positive");
    if (c.block_gas_limit < c.block_gas_target) bad("block_gas_limit must be at least block_gas_target");
    if (c.base_fee_init == 0) bad("base_fee_init must be positive");
    if (!std::isfinite(c.tx_arrival_rate) || c.tx_arrival_rate < 0) bad("tx_arrival_rate must be non-negative");
    if (!std::isfinite(c.vdf_seconds_per_step) || c.vdf_seconds_per_step < 0)
        bad("vdf_seconds_per_step must be non-negative");
    if (c.block_qty == 0) bad("block_qty must be positive");
    if (!finite_pos(c.duration_s)) bad("duration_s must be positive");
    if (!std::isfinite(c.victim_start_s) || c.victim_start_s < 0 || c.victim_start_s >= c.duration_s)
        bad("victim_start_s must lie in [0, duration_s)");
    if (!std::isfinite(c.victim_tip_pct) || c.victim_tip_pct < 0) bad("victim_tip_pct must be non-negative");
    if (!std::isfinite(c.adversary_tip_bump_pct) || c.adversary_tip_bump_pct < 0)
        bad("adversary_tip_bump_pct must be non-negative");
    if (c.background_gas == 0 || c.background_gas > c.block_gas_limit) bad("background_gas must fit a block");
    if (c.first_gas == 0 || c.first_gas > c.block_gas_limit) bad("first_gas must fit a block");
    if (c.verifier_count < 3 || c.verifier_count % 2 == 0) bad("verifier_count must be odd and at least 3");
    if (c.security_k < 16) bad("security_k must be at least 16");
    if (c.real_vdf && c.difficulty_T == 0) bad("difficulty_T must be positive with real_vdf");
    const auto& t = c.tip_distribution;
    if (!std::isfinite(t.a) || !std::isfinite(t.b)) bad("tip_distribution parameters must be finite");
    if (t.kind == TipDistribution::Kind::Uniform && (t.a < 0 || t.b < t.a))
        bad("uniform tip_distribution needs 0 <= min_pct <= max_pct");
    if (t.kind == TipDistribution::Kind::Normal && t.b < 0) bad("normal tip_distribution needs stddev_pct >= 0");
}

namespace {

// Stand-in difficulty for the protocol run when the delay is only modeled.
constexpr std::uint64_t kStandInT = 16;

double unit(Drbg& rng) { return static_cast<double>(rng.next_u64() >> 11) * 0x1.0p-53; }

double exponential(Drbg& rng, double rate) { return -std::log1p(-unit(rng)) / rate; }

double tip_pct(Drbg& rng, const TipDistribution& t) {
    if (t.kind == TipDistribution::Kind::Uniform) return t.a + (t.b - t.a) * unit(rng);
    double u1 = unit(rng), u2 = unit(rng);
    double z = std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * M_PI * u2);
    return std::max(0.0, t.a + t.b * z);
}

// Fee units per gas for a percentage of the base fee, in thousandths of a percent.
std::uint64_t tip_units(std::uint64_t base_fee, double pct) {
    const auto milli = static_cast<unsigned __int128>(std::llround(pct * 1000.0));
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(base_fee) * milli / 100000);
}

enum class EventType { Background, Victim, Adversary, Block };

struct Event {
    double t;
    int cls;  // arrivals before a block mined at the same instant
    std::uint64_t seq;
    EventType type;
    std::size_t index;

    bool operator>(const Event& o) const {
        if (t != o.t) return t > o.t;
        if (cls != o.cls) return cls > o.cls;
        return seq > o.seq;
    }
};

class Simulation {
public:
    Simulation(const SimConfig& c, Transcript* t) : c_(c), root_(c.seed, "sim"), transcript_(t) {}

    SimReport run() {
        deploy_federation();
        draw_background();
        draw_victims();
        if (c_.adversary_strategy == AdversaryStrategy::OfflinePrecompute) precompute_stockpile();

        const auto blocks = static_cast<std::uint64_t>(std::floor(c_.duration_s / c_.block_interval_s));
        for (std::uint64_t k = 1; k <= blocks; ++k)
            push(static_cast<double>(k) * c_.block_interval_s, 1, EventType::Block, k);

        base_fee_ = c_.base_fee_init;
        report_.base_fee_min = report_.base_fee_max = base_fee_;
        while (!events_.empty()) {
            Event e = events_.top();
            events_.pop();
            switch (e.type) {
                case EventType::Background: arrive_background(e); break;
                case EventType::Victim: arrive_victim(e); break;
                case EventType::Adversary: arrive_adversary(e); break;
                case EventType::Block: mine(e); break;
            }
        }
        return finish();
    }

private:
    struct Background {
        double t;
        double pct;
    };
    struct Victim {
        double reveal;
        std::optional<FirstTransaction> tx;
        std::uint64_t tip = 0;
        std::optional<std::size_t> record;
    };
    struct Attack {
        std::size_t victim;
        FirstTransaction tx;
        std::uint64_t tip = 0;
    };

    std::uint64_t height_at(double t) const {
        if (t <= 0) return 0;
        return static_cast<std::uint64_t>(std::ceil(t / c_.block_interval_s)) - 1;
    }

    void push(double t, int cls, EventType type, std::size_t index) {
        events_.push(Event{t, cls, seq_++, type, index});
    }

    void deploy_federation() {
        DeploymentOptions o;
        o.verifier_count = c_.verifier_count;
        o.security_k = c_.security_k;
        o.difficulty_T = c_.real_vdf ? c_.difficulty_T : kStandInT;
        o.epoch.freshness_threshold = c_.freshness_threshold;
        o.epoch.param_gen.share_bits = 2 * c_.security_k + 32;
        Drbg rng = root_.fork("federation");
        d_ = deploy(o, rng, chain_);
        contract_.emplace(d_.contract);
        report_.modulus_hex = d_.pp.vdf.modulus_N.get_str(16);
    }

    std::optional<FirstTransaction> run_protocol(const std::string& name, std::uint64_t block) {
        UserSpec u;
        u.addr = "0x" + name;
        u.function_name = "swap";
        Drbg key_rng = root_.fork("user/" + name);
        u.keypair = keygen(key_rng);
        u.tip_pct = static_cast<std::uint32_t>(std::llround(c_.victim_tip_pct));
        PipelineOptions o;
        o.seed = root_.fork("pipeline/" + name).next_u64();
        o.block_clock = [block] { return block; };
        o.transcript = transcript_;
        std::vector<UserSpec> us{u};
        return run_pipeline(d_, us, o).front().tx;
    }

    void draw_background() {
        if (c_.tx_arrival_rate <= 0) return;
        Drbg rng = root_.fork("background");
        double t = 0;
        while (true) {
            t += exponential(rng, c_.tx_arrival_rate);
            if (t >= c_.duration_s) break;
            background_.push_back({t, tip_pct(rng, c_.tip_distribution)});
            push(t, 0, EventType::Background, background_.size() - 1);
        }
    }

    // Victims are placed by reveal time; each started its protocol run t1
    // earlier, so the pool sees the same victims whatever the difficulty.
    void draw_victims() {
        Drbg rng = root_.fork("victims");
        std::vector<double> reveals;
        for (std::uint32_t i = 0; i < c_.victim_count; ++i)
            reveals.push_back(c_.victim_start_s + (c_.duration_s - c_.victim_start_s) * unit(rng));
        std::sort(reveals.begin(), reveals.end());
        for (std::size_t i = 0; i < reveals.size(); ++i) {
            Victim v{reveals[i], std::nullopt, 0, std::nullopt};
            v.tx = run_protocol("victim-" + std::to_string(i), height_at(reveals[i] - c_.t1()));
            victims_.push_back(std::move(v));
            if (victims_.back().tx) push(reveals[i], 0, EventType::Victim, i);
        }
    }

    void precompute_stockpile() {
        for (std::size_t i = 0; i < victims_.size(); ++i)
            stockpile_.push_back(run_protocol("offline-" + std::to_string(i), height_at(0)));
    }

    std::size_t add_record(TxRecord r) {
        report_.txs.push_back(std::move(r));
        ++report_.submitted;
        return report_.txs.size() - 1;
    }

    void enter_pool(MempoolEntry e, std::size_t record) {
        record_of_[e.id] = record;
        pool_.push_back(std::move(e));
    }

    void arrive_background(const Event& ev) {
        const auto& b = background_[ev.index];
        MempoolEntry e;
        e.id = "bg-" + std::to_string(ev.index);
        e.kind = TxKind::Background;
        e.tip = tip_units(base_fee_, b.pct);
        e.submit_time = ev.t;
        e.gas = c_.background_gas;
        e.hash = sha256(as_bytes(e.id));
        TxRecord r;
        r.id = e.id;
        r.submit_s = ev.t;
        r.tip = e.tip;
        enter_pool(std::move(e), add_record(std::move(r)));
    }

    void arrive_victim(const Event& ev) {
        auto& v = victims_[ev.index];
        MempoolEntry e;
        e.id = "victim-" + std::to_string(ev.index);
        e.kind = TxKind::Victim;
        e.tx = v.tx;
        e.tip = v.tip = tip_units(base_fee_, c_.victim_tip_pct);
        e.submit_time = ev.t;
        e.gas = c_.first_gas;
        e.hash = v.tx->hash();
        TxRecord r;
        r.id = e.id;
        r.kind = TxKind::Victim;
        r.submit_s = ev.t;
        r.tip = e.tip;
        v.record = add_record(std::move(r));
        enter_pool(std::move(e), *v.record);
        ++report_.victims;
        observe(ev.index, ev.t);
    }

    // The adversary watches the pool and learns of the victim on arrival.
    void observe(std::size_t victim, double t) {
        const std::uint64_t tip = outbid(victims_[victim].tip);
        switch (c_.adversary_strategy) {
            case AdversaryStrategy::None:
                return;
            case AdversaryStrategy::Reactive: {
                const double ready = t + c_.t1();
                if (ready >= c_.duration_s) return;
                auto tx = run_protocol("reactive-" + std::to_string(victim), height_at(t));
                if (!tx) return;
                attacks_.push_back({victim, std::move(*tx), tip});
                push(ready, 0, EventType::Adversary, attacks_.size() - 1);
                return;
            }
            case AdversaryStrategy::OfflinePrecompute: {
                if (!stockpile_[victim]) return;
                attacks_.push_back({victim, *stockpile_[victim], tip});
                push(t, 0, EventType::Adversary, attacks_.size() - 1);
                return;
            }
        }
    }

    std::uint64_t outbid(std::uint64_t victim_tip) const {
        const auto bump = tip_units(victim_tip, c_.adversary_tip_bump_pct);
        return victim_tip + std::max<std::uint64_t>(1, bump);
    }

    void arrive_adversary(const Event& ev) {
        const auto& a = attacks_[ev.index];
        MempoolEntry e;
        e.id = "adv-" + std::to_string(ev.index);
        e.kind = TxKind::Adversary;
        e.tx = a.tx;
        e.tip = a.tip;
        e.submit_time = ev.t;
        e.gas = c_.first_gas;
        e.hash = a.tx.hash();
        TxRecord r;
        r.id = e.id;
        r.kind = TxKind::Adversary;
        r.submit_s = ev.t;
        r.tip = e.tip;
        r.target = static_cast<std::uint32_t>(a.victim);
        enter_pool(std::move(e), add_record(std::move(r)));
        ++report_.adversary_submitted;
    }

    void mine(const Event& ev) {
        const std::uint64_t k = ev.index;
        auto block = mine_block(pool_, c_.block_gas_limit, c_.block_qty);
        std::uint64_t gas = 0;
        for (std::size_t p = 0; p < block.size(); ++p) {
            const auto& e = block[p];
            gas += e.gas;
            auto& r = report_.txs[record_of_.at(e.id)];
            r.confirm_s = ev.t;
            r.block = k;
            r.position = static_cast<std::uint32_t>(p);
            r.waited_s = ev.t - r.submit_s;
            r.status = TxStatus::Confirmed;
            if (e.tx) {
                auto verdict = contract_->execute(*e.tx, k);
                if (!verdict.executes()) {
                    r.status = TxStatus::Rejected;
                    r.reject_reason = std::string(to_string(*verdict.reason));
                }
            }
        }
        chain_.set_height(k);
        ++report_.blocks;
        base_fee_ = base_fee_update(base_fee_, gas, c_.block_gas_target);
        report_.base_fee_min = std::min(report_.base_fee_min, base_fee_);
        report_.base_fee_max = std::max(report_.base_fee_max, base_fee_);
    }

    SimReport finish() {
        for (auto& r : report_.txs) {
            if (r.status == TxStatus::Pending) r.waited_s = c_.duration_s - r.submit_s;
            switch (r.status) {
                case TxStatus::Confirmed: ++report_.confirmed; break;
                case TxStatus::Rejected: ++report_.rejected; break;
                case TxStatus::Pending: ++report_.pending; break;
            }
        }
        for (auto& v : victims_)
            if (v.record) report_.max_victim_wait_s = std::max(report_.max_victim_wait_s, report_.txs[*v.record].waited_s);

        for (const auto& r : report_.txs) {
            if (r.kind != TxKind::Adversary) continue;
            if (r.status == TxStatus::Rejected && r.reject_reason == "Stale") ++report_.adversary_stale;
            if (r.status != TxStatus::Confirmed) continue;
            ++report_.adversary_executed;
            auto& victim = report_.txs[*victims_[*r.target].record];
            const bool ahead = !victim.block || std::pair(*r.block, *r.position) < std::pair(*victim.block, *victim.position);
            if (ahead && !victim.frontrun) {
                victim.frontrun = true;
                ++report_.frontrun_count;
            }
        }
        report_.frontrun_rate =
            report_.victims ? static_cast<double>(report_.frontrun_count) / static_cast<double>(report_.victims) : 0.0;
        report_.config = c_;
        report_.t1_s = c_.t1();
        report_.base_fee_final = base_fee_;
        return std::move(report_);
    }

    const SimConfig& c_;
    Drbg root_;
    Transcript* transcript_;
    Chain chain_;
    Deployment d_;
    std::optional<FirstContract> contract_;

    std::vector<Background> background_;
    std::vector<Victim> victims_;
    std::vector<std::optional<FirstTransaction>> stockpile_;
    std::vector<Attack> attacks_;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::uint64_t seq_ = 0;
    std::vector<MempoolEntry> pool_;
    std::map<std::string, std::size_t> record_of_;
    std::uint64_t base_fee_ = 0;
    SimReport report_;
};

}  // namespace

SimReport run_simulation(const SimConfig& config, Transcript* transcript) {
    validate(config);
    return Simulation(config, transcript).run();
}

}  // namespace first
