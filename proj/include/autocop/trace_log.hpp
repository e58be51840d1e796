#pragma once

// Append-only execution trace of primitive actions.
//
// On disk: one record per line,
//   step<TAB>episode<TAB>state<TAB>action<TAB>nextState<TAB>reward
// with `-` in the episode column for continuing (non-episodic) runs.

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "autocop/core.hpp"

namespace autocop {

struct TraceRecord {
    std::uint64_t step = 0;
    std::optional<std::uint64_t> episode;
    StateKey state;
    ActionId action;
    StateKey next_state;
    double reward = 0.0;

    bool operator==(const TraceRecord&) const = default;
};

struct TraceCursor {
    std::size_t last_batch_end = 0;
    bool operator==(const TraceCursor&) const = default;
};

/// A batch of consecutive records: the first `primary` entries are the
/// batch proper, the remainder is read-only lookahead past the batch end.
struct TraceBatch {
    std::span<const TraceRecord> records;
    std::size_t primary = 0;

    std::span<const TraceRecord> primary_records() const { return records.first(primary); }
};

class Trace {
public:
    void append(TraceRecord record) {
        if (record.step != records_.size())
            throw Error(Errc::SequenceError, "expected step " + std::to_string(records_.size()) + ", got " +
                                                 std::to_string(record.step));
        records_.push_back(std::move(record));
    }

    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const TraceRecord& operator[](std::size_t i) const { return records_[i]; }
    std::span<const TraceRecord> records() const noexcept { return records_; }

    /// Returns records [cursor, cursor + batch_size) clipped to the trace,
    /// plus up to `lookahead` following records, and advances the cursor to
    /// the batch end.
    TraceBatch read_batch(TraceCursor& cursor, std::size_t batch_size, std::size_t lookahead) const {
        if (batch_size == 0) throw Error(Errc::ConfigError, "batch size must be positive");
        const std::size_t begin = std::min(cursor.last_batch_end, records_.size());
        const std::size_t end = std::min(begin + batch_size, records_.size());
        const std::size_t tail = std::min(end + lookahead, records_.size());
        cursor.last_batch_end = end;
        return TraceBatch{std::span<const TraceRecord>(records_).subspan(begin, tail - begin), end - begin};
    }

    void write(std::ostream& out) const {
        for (const auto& r : records_) write_record(out, r);
    }

    static void write_record(std::ostream& out, const TraceRecord& r) {
        out << r.step << '\t';
        if (r.episode)
            out << *r.episode;
        else
            out << '-';
        out << '\t' << r.state.canonical() << '\t' << r.action << '\t' << r.next_state.canonical() << '\t'
            << format_real(r.reward) << '\n';
    }

    static TraceRecord parse_record(std::string_view line) {
        auto cols = split(line, '\t');
        if (cols.size() != 6) throw Error(Errc::ParseError, "trace line needs 6 columns: " + std::string(line));
        TraceRecord r;
        r.step = parse_int<std::uint64_t>(cols[0]);
        if (cols[1] != "-") r.episode = parse_int<std::uint64_t>(cols[1]);
        r.state = StateKey(std::string(cols[2]));
        r.action = std::string(cols[3]);
        r.next_state = StateKey(std::string(cols[4]));
        r.reward = parse_real(cols[5]);
        if (r.state.empty() || r.action.empty() || r.next_state.empty())
            throw Error(Errc::ParseError, "empty field in trace line: " + std::string(line));
        return r;
    }

    static Trace read(std::istream& in) {
        Trace t;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            t.append(parse_record(line));
        }
        return t;
    }

    bool operator==(const Trace&) const = default;

private:
    std::vector<TraceRecord> records_;
};

}  // namespace autocop
