#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sortcell/sim/engine.hpp"

namespace sortcell::io {

inline constexpr const char* kTraceFormat = "sortcell-trace";
inline constexpr int kTraceVersion = 1;

struct TraceHeader {
  std::string format = kTraceFormat;
  int version = kTraceVersion;
  std::string scenario_name;
  std::string scenario_hash;
  std::uint64_t seed = 0;
  std::string tool_version;

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct TraceFooter {
  std::string status = "completed";
  std::uint64_t events = 0;
  nlohmann::ordered_json metrics;
  std::string trace_hash;

  friend bool operator==(const TraceFooter&, const TraceFooter&) = default;
};

struct TraceFile {
  TraceHeader header;
  std::vector<sim::TraceEvent> events;
  TraceFooter footer;

  friend bool operator==(const TraceFile&, const TraceFile&) = default;
};

/// One compact JSON record; the trace hash is taken over these lines.
std::string event_line(const sim::TraceEvent& e);
std::string trace_hash(const std::vector<sim::TraceEvent>& events);

TraceFile make_trace(const sim::Engine& engine, std::string status = "completed");
void write_trace(std::ostream& out, const TraceFile& trace);
/// Throws FormatError (bad record, hash mismatch, missing header/footer).
TraceFile read_trace(std::istream& in);

struct TraceDiff {
  bool equal = true;
  std::size_t index = 0;  // first divergent position
  std::optional<sim::TraceEvent> a;
  std::optional<sim::TraceEvent> b;
};

/// Throws HeaderMismatch when the scenario hashes differ, or when the seeds
/// differ and `ignore_seed` is false.
TraceDiff compare_traces(const TraceFile& a, const TraceFile& b, bool ignore_seed = false);

}  // namespace sortcell::io
