#include "sortcell/io/trace.hpp"

#include <istream>
#include <ostream>

#include "sortcell/errors.hpp"
#include "sortcell/io/scenario_json.hpp"

namespace sortcell::io {

using nlohmann::ordered_json;

namespace {

ordered_json event_json(const sim::TraceEvent& e) {
  return {{"type", "event"}, {"seq", e.seq}, {"t_us", e.t_us}, {"src", e.src}, {"kind", e.kind}, {"data", e.data}};
}

template <class T>
T need(const ordered_json& j, const char* key, std::size_t line_no) {
  if (!j.contains(key)) throw FormatError("trace line " + std::to_string(line_no) + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError("trace line " + std::to_string(line_no) + ": bad '" + key + "'");
  }
}

}  // namespace

std::string event_line(const sim::TraceEvent& e) { return event_json(e).dump(); }

std::string trace_hash(const std::vector<sim::TraceEvent>& events) {
  std::string all;
  for (const auto& e : events) {
    all += event_line(e);
    all += '\n';
  }
  return sha256_hex(all);
}

TraceFile make_trace(const sim::Engine& engine, std::string status) {
  TraceFile t;
  t.header.scenario_name = engine.scenario().name;
  t.header.scenario_hash = scenario_hash(engine.scenario());
  t.header.seed = engine.scenario().seed;
  t.header.tool_version = SORTCELL_VERSION;
  t.events = engine.trace();
  t.footer.status = std::move(status);
  t.footer.events = t.events.size();
  t.footer.metrics = sim::to_json(engine.metrics());
  t.footer.trace_hash = trace_hash(t.events);
  return t;
}

void write_trace(std::ostream& out, const TraceFile& t) {
  const ordered_json header = {{"type", "header"},
                               {"format", t.header.format},
                               {"version", t.header.version},
                               {"scenario", t.header.scenario_name},
                               {"scenario_hash", t.header.scenario_hash},
                               {"seed", t.header.seed},
                               {"tool_version", t.header.tool_version}};
  out << header.dump() << '\n';
  for (const auto& e : t.events) out << event_line(e) << '\n';
  const ordered_json footer = {{"type", "footer"},
                               {"status", t.footer.status},
                               {"events", t.footer.events},
                               {"metrics", t.footer.metrics},
                               {"trace_hash", t.footer.trace_hash}};
  out << footer.dump() << '\n';
}

TraceFile read_trace(std::istream& in) {
  TraceFile t;
  bool have_header = false;
  bool have_footer = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (have_footer) throw FormatError("trace line " + std::to_string(line_no) + ": record after footer");
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw FormatError("trace line " + std::to_string(line_no) + ": not valid JSON");
    }
    const auto type = need<std::string>(j, "type", line_no);
    if (type == "header") {
      if (have_header) throw FormatError("trace line " + std::to_string(line_no) + ": second header");
      t.header.format = need<std::string>(j, "format", line_no);
      t.header.version = need<int>(j, "version", line_no);
      if (t.header.format != kTraceFormat || t.header.version != kTraceVersion)
        throw FormatError("unsupported trace format " + t.header.format + " v" + std::to_string(t.header.version));
      t.header.scenario_name = j.value("scenario", "");
      t.header.scenario_hash = need<std::string>(j, "scenario_hash", line_no);
      t.header.seed = need<std::uint64_t>(j, "seed", line_no);
      t.header.tool_version = need<std::string>(j, "tool_version", line_no);
      have_header = true;
    } else if (type == "event") {
      if (!have_header) throw FormatError("trace line " + std::to_string(line_no) + ": event before header");
      sim::TraceEvent e;
      e.seq = need<std::uint64_t>(j, "seq", line_no);
      e.t_us = need<std::int64_t>(j, "t_us", line_no);
      e.src = need<std::string>(j, "src", line_no);
      e.kind = need<std::string>(j, "kind", line_no);
      if (!j.contains("data")) throw FormatError("trace line " + std::to_string(line_no) + ": missing 'data'");
      e.data = j.at("data");
      t.events.push_back(std::move(e));
    } else if (type == "footer") {
      t.footer.status = need<std::string>(j, "status", line_no);
      t.footer.events = need<std::uint64_t>(j, "events", line_no);
      t.footer.metrics = j.value("metrics", ordered_json::object());
      t.footer.trace_hash = need<std::string>(j, "trace_hash", line_no);
      have_footer = true;
    } else {
      throw FormatError("trace line " + std::to_string(line_no) + ": unknown record type '" + type + "'");
    }
  }
  if (!have_header) throw FormatError("trace has no header");
  if (!have_footer) throw FormatError("trace has no footer (truncated?)");
  if (t.footer.events != t.events.size()) throw FormatError("trace footer event count does not match");
  if (trace_hash(t.events) != t.footer.trace_hash) throw FormatError("trace hash does not match its events");
  return t;
}

TraceDiff compare_traces(const TraceFile& a, const TraceFile& b, bool ignore_seed) {
  if (a.header.scenario_hash != b.header.scenario_hash)
    throw HeaderMismatch("traces come from different scenarios (" + a.header.scenario_hash.substr(0, 12) + " vs " +
                         b.header.scenario_hash.substr(0, 12) + ")");
  if (!ignore_seed && a.header.seed != b.header.seed)
    throw HeaderMismatch("traces use different seeds (" + std::to_string(a.header.seed) + " vs " +
                         std::to_string(b.header.seed) + ")");
  TraceDiff d;
  const std::size_t n = std::min(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.events[i] == b.events[i]) continue;
    d.equal = false;
    d.index = i;
    d.a = a.events[i];
    d.b = b.events[i];
    return d;
  }
  if (a.events.size() != b.events.size()) {
    d.equal = false;
    d.index = n;
    if (n < a.events.size()) d.a = a.events[n];
    if (n < b.events.size()) d.b = b.events[n];
  }
  return d;
}

}  // namespace sortcell::io
