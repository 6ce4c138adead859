#pragma once

#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "first/common/bytes.hpp"
#include "first/common/hash.hpp"

namespace first {

struct TranscriptRecord {
    std::uint64_t seq = 0;
    std::string from;
    std::string to;
    std::string kind;
    Digest payload_sha256{};
    Bytes payload;  // kept in memory only, never written out
};

/// Append-only message log shared by every actor of a run.
class Transcript {
public:
    void append(std::string from, std::string to, std::string kind, ByteView payload);
    std::vector<TranscriptRecord> records() const;
    std::size_t size() const;

    /// One JSON object per line: seq, from, to, kind, payload_sha256.
    void write_jsonl(std::ostream& out) const;

private:
    mutable std::mutex mu_;
    std::vector<TranscriptRecord> records_;
};

}  // namespace first
