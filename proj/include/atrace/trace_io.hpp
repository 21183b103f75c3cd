#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "atrace/marking.hpp"
#include "atrace/sim.hpp"

namespace atrace {

// Trace dump format: header (magic "ATRC", version u16, p u32), then one
// 11-byte record per packet: flag u8, hop u16, x u32, y u32. All fields
// little-endian.
inline constexpr std::uint16_t kTraceVersion = 1;

void write_trace(std::ostream& out, std::uint64_t p, const std::vector<Packet>& packets);

struct TraceFile {
    std::uint64_t p = 0;
    std::vector<Packet> packets;
};

// Throws FormatError on bad magic, version, or a truncated record.
TraceFile read_trace(std::istream& in);

// Scenario JSON:
//   {"p": int, "path": [int...],
//    "events": [{"kind": "add"|"delete"|"none", "position": int,
//                "id": int, "at_packet": int}...]}
// Optional keys: "seed", "n_packets", "delta",
//   "mode": "deterministic"|"randomized",
//   "scheme": "uniform"|"cutoff"|"geometric"|"deterministic",
//   "q", "alpha", "h0".
// Throws FormatError with the offending key in the message.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& scenario);

} // namespace atrace
