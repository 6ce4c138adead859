#include "first/protocol/transcript.hpp"

#include <nlohmann/json.hpp>

namespace first {

void Transcript::append(std::string from, std::string to, std::string kind, ByteView payload) {
    std::lock_guard lock(mu_);
    TranscriptRecord r;
    r.seq = records_.size();
    r.from = std::move(from);
    r.to = std::move(to);
    r.kind = std::move(kind);
    r.payload_sha256 = sha256(payload);
    r.payload.assign(payload.begin(), payload.end());
    records_.push_back(std::move(r));
}

std::vector<TranscriptRecord> Transcript::records() const {
    std::lock_guard lock(mu_);
    return records_;
}

std::size_t Transcript::size() const {
    std::lock_guard lock(mu_);
    return records_.size();
}

void Transcript::write_jsonl(std::ostream& out) const {
    std::lock_guard lock(mu_);
    for (const auto& r : records_) {
        nlohmann::ordered_json j;
        j["seq"] = r.seq;
        j["from"] = r.from;
        j["to"] = r.to;
        j["kind"] = r.kind;
        j["payload_sha256"] = to_hex(r.payload_sha256);
        out << j.dump() << '\n';
    }
}

}  // namespace first
