#include "sortcell/plc/ladder_json.hpp"

#include "sortcell/errors.hpp"

namespace sortcell::plc {

using nlohmann::json;

namespace {

constexpr std::pair<Output::Kind, const char*> kOutputKeys[] = {
    {Output::Kind::Ote, "ote"}, {Output::Kind::Otl, "otl"}, {Output::Kind::Otu, "otu"}, {Output::Kind::Ton, "ton"}};

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* what) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) throw FormatError(std::string("unknown key '") + k + "' in " + what);
  }
}

template <class T>
T field(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw FormatError(std::string(what) + " is missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string(what) + ": '" + key + "' has the wrong type");
  }
}

std::vector<Network> children_from(const json& arr) {
  if (!arr.is_array()) throw FormatError("network group must be an array");
  std::vector<Network> out;
  out.reserve(arr.size());
  for (const auto& c : arr) out.push_back(network_from_json(c));
  return out;
}

}  // namespace

json network_to_json(const Network& n) {
  switch (n.kind) {
    case Network::Kind::Xic: return {{"xic", n.tag}};
    case Network::Kind::Xio: return {{"xio", n.tag}};
    case Network::Kind::Ons: return {{"ons", n.tag}};
    case Network::Kind::Parallel: {
      json arr = json::array();
      for (const auto& c : n.children) arr.push_back(network_to_json(c));
      return {{"parallel", arr}};
    }
    case Network::Kind::Series: {
      json arr = json::array();
      for (const auto& c : n.children) arr.push_back(network_to_json(c));
      return arr;
    }
  }
  return json::array();
}

Network network_from_json(const json& j) {
  if (j.is_array()) return Network::series(children_from(j));
  if (!j.is_object() || j.size() != 1) throw FormatError("network node must be an array or a one-key object");
  const auto& [key, val] = *j.items().begin();
  if (key == "series") return Network::series(children_from(val));
  if (key == "parallel") return Network::parallel(children_from(val));
  if (!val.is_string()) throw FormatError("contact '" + key + "' needs a tag name");
  if (key == "xic") return Network::xic(val.get<std::string>());
  if (key == "xio") return Network::xio(val.get<std::string>());
  if (key == "ons") return Network::ons(val.get<std::string>());
  throw FormatError("unknown network element '" + key + "'");
}

json to_json(const LadderProgram& p) {
  json tags = json::array();
  for (const auto& t : p.tags) {
    json o = {{"name", t.name}, {"address", t.address}, {"kind", std::string(to_string(t.kind))}};
    if (!t.alias.empty()) o["alias"] = t.alias;
    tags.push_back(std::move(o));
  }
  json timers = json::array();
  for (const auto& t : p.timers) timers.push_back({{"name", t.name}, {"preset_ms", t.preset_ms}});
  json rungs = json::array();
  for (const auto& r : p.rungs) {
    json outs = json::array();
    for (const auto& o : r.outputs) {
      json jo;
      for (const auto& [k, key] : kOutputKeys)
        if (k == o.kind) jo[key] = o.tag;
      if (o.when) jo["when"] = network_to_json(*o.when);
      outs.push_back(std::move(jo));
    }
    rungs.push_back({{"number", r.number},
                     {"comment", r.comment},
                     {"condition", network_to_json(r.condition)},
                     {"outputs", outs}});
  }
  return {{"name", p.name}, {"tags", tags}, {"timers", timers}, {"rungs", rungs}};
}

LadderProgram ladder_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("ladder document must be an object");
  only_keys(j, {"name", "tags", "timers", "rungs"}, "ladder document");
  LadderProgram p;
  p.name = field<std::string>(j, "name", "ladder document");
  for (const auto& t : j.value("tags", json::array())) {
    only_keys(t, {"name", "address", "kind", "alias"}, "tag");
    TagDef d;
    d.name = field<std::string>(t, "name", "tag");
    d.address = t.value("address", "");
    const auto kind = parse_tag_kind(field<std::string>(t, "kind", "tag"));
    if (!kind) throw FormatError("tag '" + d.name + "' has an unknown kind");
    d.kind = *kind;
    d.alias = t.value("alias", "");
    p.tags.push_back(std::move(d));
  }
  for (const auto& t : j.value("timers", json::array())) {
    only_keys(t, {"name", "preset_ms"}, "timer");
    p.timers.push_back({field<std::string>(t, "name", "timer"), field<int>(t, "preset_ms", "timer")});
  }
  for (const auto& r : j.value("rungs", json::array())) {
    only_keys(r, {"number", "comment", "condition", "outputs"}, "rung");
    Rung rung;
    rung.number = field<int>(r, "number", "rung");
    rung.comment = r.value("comment", "");
    if (r.contains("condition")) rung.condition = network_from_json(r.at("condition"));
    for (const auto& o : r.value("outputs", json::array())) {
      Output out;
      bool have_kind = false;
      for (const auto& [k, v] : o.items()) {
        if (k == "when") {
          out.when = network_from_json(v);
          continue;
        }
        bool known = false;
        for (const auto& [kind, key] : kOutputKeys) {
          if (k != key) continue;
          if (have_kind) throw FormatError("output has more than one instruction");
          if (!v.is_string()) throw FormatError("output '" + k + "' needs a tag name");
          out.kind = kind;
          out.tag = v.get<std::string>();
          have_kind = known = true;
        }
        if (!known) throw FormatError("unknown output instruction '" + k + "'");
      }
      if (!have_kind) throw FormatError("rung " + std::to_string(rung.number) + " has an empty output");
      rung.outputs.push_back(std::move(out));
    }
    p.rungs.push_back(std::move(rung));
  }
  return p;
}

LadderProgram load_ladder(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("ladder document is not valid JSON: ") + e.what());
  }
  LadderProgram p = ladder_from_json(j);
  validate(p);
  return p;
}

}  // namespace sortcell::plc
