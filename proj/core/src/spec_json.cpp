#include "scenerylab/spec_json.hpp"

#include <memory>
#include <set>

#include "json.hpp"
#include "scenerylab/errors.hpp"

namespace scenerylab {

using json = nlohmann::json;

namespace {

void requireKeys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

Real number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

WeightFamily weightsFromJson(const json& j) {
  if (j.is_array()) {
    std::vector<Real> p;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError("weights: list entries must be numbers");
      p.push_back(v.get<double>());
    }
    return WeightFamily::finite(std::move(p));
  }
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw ConfigError("weights: expected a list or an object with 'family'");
  }
  const std::string family = j.at("family");
  if (family == "dyadic_lebesgue") {
    requireKeys(j, {"family"}, "weights");
    return WeightFamily::dyadicLebesgue();
  }
  if (family == "pN") {
    requireKeys(j, {"family", "N"}, "weights");
    if (!j.contains("N") || !j.at("N").is_number_integer()) throw ConfigError("weights: pN needs an integer 'N'");
    return WeightFamily::pN(j.at("N").get<int>());
  }
  throw ConfigError("weights: unknown family '" + family + "'");
}

json weightsToJson(const WeightFamily& w) {
  switch (w.kind()) {
    case WeightFamily::Kind::DyadicLebesgue: return {{"family", "dyadic_lebesgue"}};
    case WeightFamily::Kind::PN: return {{"family", "pN"}, {"N", w.N()}};
    default: {
      json a = json::array();
      for (Real p : w.list()) a.push_back(toDouble(p));
      return a;
    }
  }
}

MeasurePtr fromJson(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError("measure spec: expected an object with a string 'type'");
  }
  const std::string type = j.at("type");
  const std::string where = "measure '" + type + "'";
  try {
    if (type == "geometric_atoms") {
      requireKeys(j, {"type", "base", "weight_ratio"}, where);
      return std::make_shared<GeometricAtoms>(number(j, "base", where), number(j, "weight_ratio", where));
    }
    if (type == "exp_cdf" || type == "one_sided_exp_cdf" || type == "double_exp_pair" || type == "lebesgue") {
      requireKeys(j, {"type"}, where);
      if (type == "exp_cdf") return std::make_shared<ExpCdf>();
      if (type == "one_sided_exp_cdf") return std::make_shared<OneSidedExpCdf>();
      if (type == "double_exp_pair") return std::make_shared<DoubleExpPair>();
      return std::make_shared<LebesgueCdf>();
    }
    if (type == "atom_list") {
      requireKeys(j, {"type", "atoms"}, where);
      if (!j.contains("atoms") || !j.at("atoms").is_array()) throw ConfigError(where + ": 'atoms' must be a list");
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
          throw ConfigError(where + ": atoms are [position, weight] pairs");
        }
        const double w = a[1].get<double>();
        if (!(w > 0)) throw ConfigError(where + ": atom weights must be positive");
        atoms.push_back({a[0].get<double>(), LogMass::fromMass(w)});
      }
      return std::make_shared<AtomList>(std::move(atoms));
    }
    if (type == "bernoulli") {
      requireKeys(j, {"type", "weights"}, where);
      if (!j.contains("weights")) throw ConfigError(where + ": missing 'weights'");
      return std::make_shared<BernoulliMeasure>(weightsFromJson(j.at("weights")));
    }
    if (type == "pushforward") {
      requireKeys(j, {"type", "base", "diffeo"}, where);
      if (!j.contains("base") || !j.contains("diffeo") || !j.at("diffeo").is_string()) {
        throw ConfigError(where + ": needs 'base' and a string 'diffeo'");
      }
      return std::make_shared<Pushforward>(fromJson(j.at("base")), makeCatalogDiffeo(j.at("diffeo")));
    }
    if (type == "mixture") {
      requireKeys(j, {"type", "components"}, where);
      if (!j.contains("components") || !j.at("components").is_array()) {
        throw ConfigError(where + ": 'components' must be a list");
      }
      std::vector<std::pair<LogMass, MeasurePtr>> comps;
      for (const auto& c : j.at("components")) {
        requireKeys(c, {"log_weight", "measure"}, where + " component");
        if (!c.contains("measure")) throw ConfigError(where + ": component without 'measure'");
        comps.emplace_back(LogMass::fromLog(number(c, "log_weight", where)), fromJson(c.at("measure")));
      }
      return std::make_shared<Mixture>(std::move(comps));
    }
  } catch (const NumericError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError("measure spec: unknown type '" + type + "'");
}

json toJson(const MeasureModel& m) {
  if (const auto* g = dynamic_cast<const GeometricAtoms*>(&m)) {
    return {{"type", "geometric_atoms"}, {"base", toDouble(g->base())}, {"weight_ratio", toDouble(g->weightRatio())}};
  }
  if (const auto* a = dynamic_cast<const AtomList*>(&m)) {
    json atoms = json::array();
    for (const Atom& at : a->atoms()) atoms.push_back({toDouble(at.position), at.weight.toDouble()});
    return {{"type", "atom_list"}, {"atoms", atoms}};
  }
  if (const auto* b = dynamic_cast<const BernoulliMeasure*>(&m)) {
    return {{"type", "bernoulli"}, {"weights", weightsToJson(b->weights())}};
  }
  if (const auto* p = dynamic_cast<const Pushforward*>(&m)) {
    return {{"type", "pushforward"}, {"base", toJson(*p->base())}, {"diffeo", p->map().name()}};
  }
  if (const auto* x = dynamic_cast<const Mixture*>(&m)) {
    json comps = json::array();
    for (const auto& [w, c] : x->components()) {
      comps.push_back({{"log_weight", toDouble(w.logValue())}, {"measure", toJson(*c)}});
    }
    return {{"type", "mixture"}, {"components", comps}};
  }
  return {{"type", m.type()}};
}

json parseText(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

MeasurePtr parseMeasureSpec(const std::string& text) { return fromJson(parseText(text, "measure spec")); }

std::string measureSpecToJson(const MeasureModel& m) { return toJson(m).dump(); }

WeightFamily parseWeightSpec(const std::string& text) { return weightsFromJson(parseText(text, "weight spec")); }

std::string weightSpecToJson(const WeightFamily& w) { return weightsToJson(w).dump(); }

MeasurePtr resolveMeasure(const std::string& nameOrJson) {
  const auto first = nameOrJson.find_first_not_of(" \t\n");
  if (first != std::string::npos && nameOrJson[first] == '{') return parseMeasureSpec(nameOrJson);
  const std::string& n = nameOrJson;
  if (n == "lebesgue") return std::make_shared<LebesgueCdf>();
  if (n == "exp_cdf" || n == "ex3") return std::make_shared<ExpCdf>();
  if (n == "one_sided_exp_cdf" || n == "ex4") return std::make_shared<OneSidedExpCdf>();
  if (n == "double_exp_pair" || n == "ex5") return std::make_shared<DoubleExpPair>();
  if (n == "geometric_atoms" || n == "ex1") return std::make_shared<GeometricAtoms>(Real(1) / 2, 2);
  if (n == "bernoulli") return std::make_shared<BernoulliMeasure>(WeightFamily::dyadicLebesgue());
  throw ConfigError("unknown measure '" + n + "'");
}

}  // namespace scenerylab
