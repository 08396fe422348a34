#include "vcoop/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vcoop {
namespace {

using nlohmann::json;

json parse_object(const std::string& text, const char* what) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string(what) + " is not valid JSON: " + e.what()});
  }
  if (!doc.is_object()) throw ValidationError({std::string(what) + " must be a JSON object"});
  return doc;
}

// Reads numeric fields of a model sub-object, rejecting unknown keys.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string where, std::vector<std::string>& problems)
      : obj_(obj), where_(std::move(where)), problems_(problems) {}

  void number(const char* key, double& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    if (!it->is_number()) {
      problems_.push_back(where_ + "." + key + " must be a number");
      return;
    }
    out = it->get<double>();
  }

  void integer(const char* key, int& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    if (!it->is_number_integer()) {
      problems_.push_back(where_ + "." + key + " must be an integer");
      return;
    }
    out = it->get<int>();
  }

  void finish() {
    seen_.insert("type");
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) problems_.push_back("unknown key " + where_ + "." + it.key());
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

std::string kind_of(const json& v, const char* where, std::vector<std::string>& problems) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("type") && v["type"].is_string()) return v["type"].get<std::string>();
  problems.push_back(std::string(where) + " must be a name or an object with a \"type\"");
  return {};
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({"cannot read " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Scenario parse_scenario_json(const std::string& text) {
  const json doc = parse_object(text, "scenario");
  RawParams raw;
  std::vector<std::string> problems;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it->is_number()) {
      problems.push_back(it.key() + " must be a number");
      continue;
    }
    raw[it.key()] = it->get<double>();
  }
  try {
    Scenario s = validate_scenario(raw);
    if (!problems.empty()) throw ValidationError(problems);
    return s;
  } catch (const ValidationError& e) {
    auto all = problems;
    for (const auto& v : e.violations()) {
      if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
    }
    // a non-numeric key also shows up as missing; keep both messages
    throw ValidationError(all);
  }
}

Scenario load_scenario_file(const std::string& path) { return parse_scenario_json(read_text_file(path)); }

std::string scenario_to_json(const Scenario& s) {
  json doc = json::object();
  for (const auto& [k, v] : serialize(s)) {
    if (k == "num_infra") {
      doc[k] = static_cast<int>(v);
    } else {
      doc[k] = v;
    }
  }
  return doc.dump(2);
}

ModelConfig parse_models_json(const std::string& text) {
  const json doc = parse_object(text, "models");
  ModelConfig m;
  std::vector<std::string> problems;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    const json& v = *it;
    if (key == "mobility") {
      const std::string kind = kind_of(v, "mobility", problems);
      if (kind == "constant") {
        m.mobility = ConstantSpeed{};
        if (v.is_object()) FieldReader(v, "mobility", problems).finish();
      } else if (kind == "gaussian") {
        GaussianSpeed g;
        if (v.is_object()) {
          FieldReader r(v, "mobility", problems);
          r.number("sigma1", g.sigma1);
          r.number("sigma2", g.sigma2);
          r.number("tau", g.tau);
          r.finish();
        }
        m.mobility = g;
      } else if (!kind.empty()) {
        problems.push_back("unknown mobility model " + kind + " (expected constant or gaussian)");
      }
    } else if (key == "connection") {
      const std::string kind = kind_of(v, "connection", problems);
      if (kind == "unit_disk") {
        m.connection = UnitDisk{};
        if (v.is_object()) FieldReader(v, "connection", problems).finish();
      } else if (kind == "log_normal") {
        LogNormal l;
        if (v.is_object()) {
          FieldReader r(v, "connection", problems);
          r.number("alpha", l.alpha);
          r.number("sigma", l.sigma);
          r.number("tau", l.tau);
          r.finish();
        }
        m.connection = l;
      } else if (!kind.empty()) {
        problems.push_back("unknown connection model " + kind + " (expected unit_disk or log_normal)");
      }
    } else if (key == "channel") {
      const std::string kind = kind_of(v, "channel", problems);
      if (kind == "constant_rate") {
        m.channel = ConstantRate{};
        if (v.is_object()) FieldReader(v, "channel", problems).finish();
      } else if (kind == "rayleigh_path_loss") {
        RayleighPathLoss c;
        if (v.is_object()) {
          FieldReader r(v, "channel", problems);
          r.number("B_I_hz", c.B_I);
          r.number("P_I_dbm", c.P_I_dbm);
          r.number("B_V_hz", c.B_V);
          r.number("P_V_dbm", c.P_V_dbm);
          r.integer("segments", c.segments);
          r.finish();
        }
        m.channel = c;
      } else if (!kind.empty()) {
        problems.push_back("unknown channel model " + kind +
                           " (expected constant_rate or rayleigh_path_loss)");
      }
    } else {
      problems.push_back("unknown key " + key);
    }
  }
  for (auto& v : model_violations(m)) problems.push_back(std::move(v));
  if (!problems.empty()) throw ValidationError(problems);
  return m;
}

ModelConfig load_models_file(const std::string& path) { return parse_models_json(read_text_file(path)); }

std::string models_to_json(const ModelConfig& m) {
  json doc = json::object();
  if (const auto* g = std::get_if<GaussianSpeed>(&m.mobility)) {
    doc["mobility"] = {{"type", "gaussian"}, {"sigma1", g->sigma1}, {"sigma2", g->sigma2}, {"tau", g->tau}};
  } else {
    doc["mobility"] = "constant";
  }
  if (const auto* l = std::get_if<LogNormal>(&m.connection)) {
    doc["connection"] = {{"type", "log_normal"}, {"alpha", l->alpha}, {"sigma", l->sigma}, {"tau", l->tau}};
  } else {
    doc["connection"] = "unit_disk";
  }
  if (const auto* c = std::get_if<RayleighPathLoss>(&m.channel)) {
    doc["channel"] = {{"type", "rayleigh_path_loss"}, {"B_I_hz", c->B_I},    {"P_I_dbm", c->P_I_dbm},
                      {"B_V_hz", c->B_V},             {"P_V_dbm", c->P_V_dbm}, {"segments", c->segments}};
  } else {
    doc["channel"] = "constant_rate";
  }
  return doc.dump(2);
}

}  // namespace vcoop
