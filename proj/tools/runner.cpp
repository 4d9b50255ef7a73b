#include "runner.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "scenerylab/errors.hpp"
#include "scenerylab/parallel.hpp"
#include "scenerylab/scaling.hpp"
#include "scenerylab/scenery.hpp"
#include "scenerylab/shift_bernoulli.hpp"
#include "scenerylab/spec_json.hpp"

#ifndef SCENERYLAB_VERSION
#define SCENERYLAB_VERSION "unknown"
#endif

namespace scenerylab::cli {

namespace {

using nlohmann::json;

// Every field is a string (or list of strings) so numbers keep full
// precision until parsed; empty means "use the subcommand default".
struct Config {
  std::string measure, diffeo, weights;
  std::string x, t, step, rmin, rmax, points;
  std::vector<std::string> T, gamma, K, phi;
  std::string seed, tol, samples, depth, m, n;
  std::string out;
  bool dryRun = false;
};

using StringField = std::string Config::*;
using ListField = std::vector<std::string> Config::*;

const std::vector<std::pair<const char*, StringField>>& stringFields() {
  static const std::vector<std::pair<const char*, StringField>> f{
      {"measure", &Config::measure}, {"diffeo", &Config::diffeo},   {"weights", &Config::weights},
      {"x", &Config::x},             {"t", &Config::t},             {"step", &Config::step},
      {"rmin", &Config::rmin},       {"rmax", &Config::rmax},       {"points", &Config::points},
      {"seed", &Config::seed},       {"tol", &Config::tol},         {"samples", &Config::samples},
      {"depth", &Config::depth},     {"m", &Config::m},             {"n", &Config::n},
      {"out", &Config::out}};
  return f;
}

const std::vector<std::pair<const char*, ListField>>& listFields() {
  static const std::vector<std::pair<const char*, ListField>> f{
      {"T", &Config::T}, {"gamma", &Config::gamma}, {"K", &Config::K}, {"phi", &Config::phi}};
  return f;
}

std::string scalarText(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  if (v.is_object() || v.is_array()) {
    if (key == "measure" || key == "weights") return v.dump();
  }
  throw ConfigError("config key '" + key + "' has an unsupported value");
}

Config loadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  Config c;
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, field] : stringFields()) {
      if (key == name) {
        c.*field = scalarText(value, key);
        known = true;
      }
    }
    for (const auto& [name, field] : listFields()) {
      if (key == name) {
        if (value.is_array()) {
          for (const auto& item : value) (c.*field).push_back(scalarText(item, key));
        } else {
          (c.*field).push_back(scalarText(value, key));
        }
        known = true;
      }
    }
    if (key == "dry_run") {
      if (!value.is_boolean()) throw ConfigError("config key 'dry_run' must be a boolean");
      c.dryRun = value.get<bool>();
      known = true;
    }
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

json configToJson(const Config& c) {
  json j = json::object();
  for (const auto& [name, field] : stringFields()) {
    if (!(c.*field).empty()) j[name] = c.*field;
  }
  for (const auto& [name, field] : listFields()) {
    if (!(c.*field).empty()) j[name] = c.*field;
  }
  return j;
}

// ---------------------------------------------------------------- parsing

Real number(const std::string& text, const char* what) {
  try {
    const Real v = parseReal(text);
    if (!risfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": '" + text + "' is not a finite number");
  }
}

Real positive(const std::string& text, const char* what) {
  const Real v = number(text, what);
  if (!(v > 0)) throw ConfigError(std::string(what) + " must be positive");
  return v;
}

long integer(const std::string& text, const char* what, long minValue) {
  long v = 0;
  try {
    std::size_t used = 0;
    v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": '" + text + "' is not an integer");
  }
  if (v < minValue) throw ConfigError(std::string(what) + " must be at least " + std::to_string(minValue));
  return v;
}

std::string orDefault(const std::string& v, const char* fallback) { return v.empty() ? fallback : v; }

std::vector<Real> numberList(const std::vector<std::string>& v, const std::vector<std::string>& fallback,
                             const char* what) {
  std::vector<Real> out;
  for (const auto& s : v.empty() ? fallback : v) out.push_back(positive(s, what));
  return out;
}

std::vector<TestFunction> functions(const std::vector<std::string>& ids, const std::vector<std::string>& fallback) {
  std::vector<TestFunction> out;
  for (const auto& id : ids.empty() ? fallback : ids) {
    if (id == "standard") {
      for (auto& f : standardFamily()) out.push_back(f);
    } else if (id == "left_half") {
      out.push_back(leftHalfTrapezoid());
    } else {
      out.push_back(parseTestFunction(id));
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(Real v) { return toString(v, 17); }

// ---------------------------------------------------------------- output

struct Table {
  std::string header;
  std::vector<std::string> rows;
  json summary = json::object();

  template <class... Cols>
  void add(const Cols&... cols) {
    std::string line;
    ((line += (line.empty() ? "" : ",") + cell(cols)), ...);
    rows.push_back(std::move(line));
  }

 private:
  // RFC 4180 quoting; ids such as trap:c,eps contain commas.
  static std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  static std::string cell(const char* s) { return cell(std::string(s)); }
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(Real v) { return fmt(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
};

std::string isoNow() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void emit(const Table& table, const Config& cfg, const std::string& command, const std::string& started,
          double seconds) {
  std::ostringstream body;
  body << table.header << '\n';
  for (const auto& r : table.rows) body << r << '\n';
  if (cfg.out.empty()) {
    std::cout << body.str();
    if (!table.summary.empty()) std::cerr << table.summary.dump(2) << '\n';
    return;
  }
  std::ofstream csv(cfg.out, std::ios::binary);
  if (!csv) throw ConfigError("cannot write " + cfg.out);
  csv << body.str();
  json manifest{{"tool", "scenerylab"},
                {"version", SCENERYLAB_VERSION},
                {"command", command},
                {"config", configToJson(cfg)},
                {"threads", threadCount()},
                {"started", started},
                {"wall_seconds", seconds},
                {"csv", cfg.out},
                {"rows", table.rows.size()},
                {"summary", table.summary}};
  std::ofstream(cfg.out + ".manifest.json") << manifest.dump(2) << '\n';
}

// ---------------------------------------------------------------- commands

struct Plan {
  std::function<Table()> compute;
};

Plan sceneryCommand(const Config& c) {
  const MeasurePtr m = resolveMeasure(orDefault(c.measure, "lebesgue"));
  const Real x = number(orDefault(c.x, "0"), "x");
  const Real t = number(orDefault(c.t, "0"), "t");
  if (t < 0) throw ConfigError("t must be nonnegative");
  const double tol = toDouble(positive(orDefault(c.tol, "1e-9"), "tol"));
  const auto phis = functions(c.phi, {"const1"});
  return {[=] {
    const SceneryMeasure nu(m, x, t);
    Table tab{"x,t,phi_id,value,normalizer_value,normalizer_level", {}};
    for (const auto& phi : phis) {
      tab.add(x, t, phi.id(), nu.integrate(phi, tol), nu.normalizer().value(), nu.normalizer().level());
    }
    return tab;
  }};
}

Plan pathCommand(const Config& c, const std::string& defMeasure, const std::string& defDiffeo,
                 const std::vector<std::string>& defPhi, const char* defStep, const char* defT) {
  const MeasurePtr m = resolveMeasure(orDefault(c.measure, defMeasure.c_str()));
  const Diffeo f = makeCatalogDiffeo(orDefault(c.diffeo, defDiffeo.c_str()));
  const Real x = number(orDefault(c.x, "0"), "x");
  const Real step = c.step.empty() ? parseReal(defStep) : positive(c.step, "step");
  if (c.T.size() > 1) throw ConfigError("path takes a single T");
  const Real T = positive(c.T.empty() ? defT : c.T.front(), "T");
  const double tol = toDouble(positive(orDefault(c.tol, "1e-9"), "tol"));
  const auto phis = functions(c.phi, defPhi);
  return {[=] {
    const Real s = f.timeShift(x);
    std::vector<Real> grid;
    for (Real t : timeGrid(T, step)) {
      if (t >= s) grid.push_back(t);
    }
    if (grid.empty()) throw DomainError("every grid time lies below the shift " + toString(s, 17));
    std::vector<std::vector<PathRow>> per;
    for (const auto& phi : phis) per.push_back(sceneryDifferencePath(m, f, x, grid, phi, tol));
    Table tab{"t,phi_id,value_mu,value_fmu,gap", {}};
    double worst = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (std::size_t p = 0; p < phis.size(); ++p) {
        const PathRow& r = per[p][k];
        tab.add(r.t, phis[p].id(), r.valueMu, r.valueFmu, r.gap);
        worst = std::max(worst, r.gap);
      }
    }
    tab.summary["time_shift"] = fmt(s);
    tab.summary["max_gap"] = worst;
    return tab;
  }};
}

Plan generateCommand(const Config& c, const std::string& defMeasure, const std::string& defDiffeo,
                     const std::vector<std::string>& defPhi, const std::vector<std::string>& defT) {
  const MeasurePtr m = resolveMeasure(orDefault(c.measure, defMeasure.c_str()));
  const Diffeo f = makeCatalogDiffeo(orDefault(c.diffeo, defDiffeo.c_str()));
  const Real x = number(orDefault(c.x, "0"), "x");
  const Real step = positive(orDefault(c.step, "0.01"), "step");
  const auto Ts = numberList(c.T, defT, "T");
  const double tol = toDouble(positive(orDefault(c.tol, "1e-9"), "tol"));
  const auto phis = functions(c.phi, defPhi);
  return {[=] {
    Table tab{"T,phi_id,mean_mu,mean_fmu,gap", {}};
    json gaps = json::array();
    for (Real T : Ts) {
      const ScalingDistribution a(m, x, T, step);
      const ScalingDistribution b = pushforwardScaling(m, f, x, T, step);
      std::vector<GapRow> rows;
      const double g = distributionGap(a, b, phis, &rows, tol);
      for (const auto& r : rows) tab.add(T, r.phiId, r.meanMu, r.meanFmu, r.gap);
      gaps.push_back({{"T", fmt(T)}, {"gap", g}});
    }
    tab.summary["gaps"] = gaps;
    return tab;
  }};
}

Plan tcCommand(const Config& c) {
  const MeasurePtr m = resolveMeasure(orDefault(c.measure, "lebesgue"));
  const Real x = number(orDefault(c.x, "0"), "x");
  const Real step = positive(orDefault(c.step, "0.01"), "step");
  const auto gammas = numberList(c.gamma, {"1.5"}, "gamma");
  const auto Ks = numberList(c.K, {"10"}, "K");
  const auto Ts = numberList(c.T, {"40"}, "T");
  for (Real g : gammas) {
    if (!(g > 1)) throw ConfigError("gamma must exceed 1");
  }
  for (Real k : Ks) {
    if (!(k > 1)) throw ConfigError("K must exceed 1");
  }
  return {[=] {
    Table tab{"gamma,K,T,density", {}};
    for (const auto& r : tcReport(m, x, gammas, Ks, Ts, step)) tab.add(r.gamma, r.K, r.T, r.density);
    return tab;
  }};
}

Plan dimensionCommand(const Config& c) {
  const MeasurePtr m = resolveMeasure(orDefault(c.measure, "lebesgue"));
  const Real x = number(orDefault(c.x, "0"), "x");
  const Real rMin = positive(orDefault(c.rmin, "1e-12"), "rmin");
  const Real rMax = positive(orDefault(c.rmax, "0.5"), "rmax");
  if (!(rMax > rMin) || !(rMax < 1)) throw ConfigError("need rmin < rmax < 1");
  const int points = static_cast<int>(integer(orDefault(c.points, "64"), "points", 2));
  return {[=] {
    Table tab{"r,log_mass,level,ratio", {}};
    Real best = -kRealInf;
    for (const auto& r : dimensionProfile(m, x, rMin, rMax, points)) {
      tab.add(r.r, r.mass.value(), r.mass.level(), r.ratio);
      best = rmax(best, r.ratio);
    }
    tab.summary["upper_local_dimension"] = fmt(best);
    return tab;
  }};
}

Plan bernoulliCommand(const Config& c, const std::string& defWeights, const std::vector<std::string>& defPhi) {
  const WeightFamily w = parseWeightSpec(orDefault(c.weights, defWeights.c_str()));
  MonteCarloConfig mc;
  mc.samples = integer(orDefault(c.samples, "100000"), "samples", 2);
  mc.depth = static_cast<int>(integer(orDefault(c.depth, "60"), "depth", 2));
  mc.tStep = toDouble(positive(orDefault(c.step, "0.005"), "step"));
  mc.seed = static_cast<std::uint64_t>(integer(orDefault(c.seed, "1"), "seed", 0));
  const int em = static_cast<int>(integer(orDefault(c.m, "2"), "m", 0));
  const int en = static_cast<int>(integer(orDefault(c.n, "20"), "n", 1));
  const auto phis = functions(c.phi, defPhi);
  return {[=] {
    const BernoulliMeasure measure(w);
    const MomentReport rep = generatedDistributionMoments(measure, phis, mc);
    Table tab{"phi_id,moment,stderr,n_samples", {}};
    for (const auto& e : rep.moments) tab.add(e.phiId, e.moment, e.stderr_, e.nSamples);
    tab.summary["weights"] = w.name();
    tab.summary["mean_return_gap"] = rep.meanReturnGap;
    tab.summary["mean_T0"] = rep.meanT0;
    tab.summary["stderr_T0"] = rep.stderrT0;
    tab.summary["integrability_warning"] = rep.integrabilityWarning;
    tab.summary["dimension_formula"] = dimensionFormula(w);
    if (w.isSigned()) {
      tab.summary["endpoint_mass"] = {{"m", em}, {"n", en}, {"value", endpointMass(w, em, en)}};
    }
    if (rep.integrabilityWarning) {
      std::cerr << "IntegrabilityWarning: mean of T1 - T0 moved by more than 1% over the last doubling\n";
    }
    return tab;
  }};
}

// mu_{0,30} below 0.9 and W1 to delta_1 for the one-sided model and its
// ex3 pushforward.
Plan ex4Command(const Config& c) {
  const MeasurePtr m = resolveMeasure(orDefault(c.measure, "ex4"));
  const Real t = positive(orDefault(c.t, "30"), "t");
  const std::vector<std::string> names = c.diffeo.empty() ? std::vector<std::string>{"identity", "ex3"}
                                                          : std::vector<std::string>{c.diffeo};
  std::vector<Diffeo> maps;
  for (const auto& n : names) maps.push_back(makeCatalogDiffeo(n));
  return {[=] {
    Table tab{"diffeo,t,mass_below_0.9,w1_to_delta1", {}};
    const WindowCdf delta1 = cdfOf(std::vector<std::pair<Real, double>>{{1, 1.0}});
    for (const Diffeo& f : maps) {
      const MeasurePtr fm = std::make_shared<Pushforward>(m, f);
      const Real s = f.timeShift(0);
      const SceneryMeasure nu(fm, f.forward(0), t - s);
      tab.add(f.name(), t, nu.mass(Interval::closed(-1, Real(9) / 10)), w1Distance(cdfOf(nu), delta1));
    }
    return tab;
  }};
}

// (f mu)([-x, 0]) against the H side mu([0, x]) in the level-2 domain.
Plan ex5Command(const Config& c) {
  const MeasurePtr m = resolveMeasure(orDefault(c.measure, "ex5"));
  const Diffeo f = makeCatalogDiffeo(orDefault(c.diffeo, "ex5"));
  const long count = integer(orDefault(c.samples, "50"), "samples", 1);
  const auto seed = static_cast<std::uint64_t>(integer(orDefault(c.seed, "1"), "seed", 0));
  // Small enough that both masses are doubly exponentially small.
  const Real eps = Real(1) / 1000;
  const Real t = positive(orDefault(c.t, "6"), "t");
  return {[=] {
    const auto fm = std::make_shared<Pushforward>(m, f);
    Table tab{"x,push_level,push_value,h_level,h_value,abs_diff", {}};
    double worst = 0;
    for (long i = 0; i < count; ++i) {
      SplitMix64 rng(seed, static_cast<std::uint64_t>(i));
      const Real x = eps * (1 - Real(rng.uniform()));  // (0, eps]
      const LogMass a = fm->logMass(Interval::closed(-x, 0));
      const LogMass b = m->logMass(Interval::closed(0, x));
      const double d = toDouble(rabs(a.level2Value() - b.level2Value()));
      worst = std::max(worst, d);
      tab.add(x, a.level(), a.value(), b.level(), b.value(), d);
    }
    tab.summary["max_abs_diff"] = worst;
    tab.summary["t"] = fmt(t);
    tab.summary["scenery_mu_mass_left"] = SceneryMeasure(m, 0, t).mass(Interval::closed(-1, 0));
    tab.summary["scenery_fmu_mass_right"] =
        SceneryMeasure(fm, f.forward(0), t - f.timeShift(0)).mass(Interval::closed(0, 1));
    return tab;
  }};
}

Plan examplePlan(const std::string& name, const Config& c) {
  if (name == "ex1") {
    return pathCommand(c, "ex1", "ex1", {"trap:0.75,0.01"}, "0.34657359027997265470861606072908828", "200");
  }
  if (name == "ex3") return generateCommand(c, "ex3", "ex3", {"left_half", "standard"}, {"40"});
  if (name == "ex4") return ex4Command(c);
  if (name == "ex5") return ex5Command(c);
  if (name == "bernoulli") {
    return bernoulliCommand(c, R"({"family": "pN", "N": 3})", {"const1", "ident", "trap:0.984375,0.00390625"});
  }
  throw ConfigError("unknown example '" + name + "' (expected ex1, ex3, ex4, ex5 or bernoulli)");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Scenery flow experiments on measures of the real line", "scenerylab"};
  app.require_subcommand(1);
  app.fallthrough();

  Config flags;
  std::string configPath;
  std::vector<std::pair<CLI::Option*, std::function<void(Config&)>>> given;
  auto str = [&](const std::string& flag, StringField field, const std::string& help) {
    CLI::Option* o = app.add_option(flag, flags.*field, help);
    given.emplace_back(o, [&flags, field](Config& c) { c.*field = flags.*field; });
  };
  auto list = [&](const std::string& flag, ListField field, const std::string& help, bool commas) {
    CLI::Option* o = app.add_option(flag, flags.*field, help);
    if (commas) o->delimiter(',');
    given.emplace_back(o, [&flags, field](Config& c) { c.*field = flags.*field; });
  };
  app.add_option("--config", configPath, "JSON config file; flags override its keys");
  str("--measure", &Config::measure, "catalog name or JSON measure spec");
  str("--diffeo", &Config::diffeo, "ex1, ex3, ex5, identity, affine:a,b, separating:T1,...");
  str("--weights", &Config::weights, "Bernoulli weight spec (JSON)");
  str("--x", &Config::x, "center");
  str("--t", &Config::t, "zoom time");
  list("--T", &Config::T, "horizon(s), comma separated", true);
  str("--step", &Config::step, "time grid step");
  list("--gamma", &Config::gamma, "window enlargement(s), comma separated", true);
  list("--K", &Config::K, "mass ratio threshold(s), comma separated", true);
  list("--phi", &Config::phi, "test function: const1, ident, trap:c,eps, standard, left_half (repeatable)", false);
  str("--seed", &Config::seed, "Monte Carlo seed");
  str("--tol", &Config::tol, "integration tolerance");
  str("--samples", &Config::samples, "Monte Carlo samples");
  str("--depth", &Config::depth, "digit depth");
  str("--rmin", &Config::rmin, "smallest radius");
  str("--rmax", &Config::rmax, "largest radius");
  str("--points", &Config::points, "radii in the dimension profile");
  str("--m", &Config::m, "endpoint mass parameter m");
  str("--n", &Config::n, "endpoint mass parameter n");
  str("--out", &Config::out, "CSV path; a manifest is written to <out>.manifest.json");
  CLI::Option* dry = app.add_flag("--dry-run", flags.dryRun, "validate the config and exit");

  app.add_subcommand("scenery", "functional values of one scenery");
  app.add_subcommand("path", "scenery difference path against a pushforward");
  app.add_subcommand("generate", "scaling distribution gap against a pushforward");
  app.add_subcommand("tc", "(TC) densities on a gamma, K, T grid");
  app.add_subcommand("dimension", "local dimension profile");
  app.add_subcommand("bernoulli", "generated distribution moments and closed forms");
  std::string exampleName;
  CLI::App* example = app.add_subcommand("example", "bundled reproductions: ex1, ex3, ex4, ex5, bernoulli");
  example->add_option("name", exampleName, "example name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Config cfg = configPath.empty() ? Config{} : loadConfigFile(configPath);
    for (auto& [opt, apply] : given) {
      if (opt->count() > 0) apply(cfg);
    }
    if (dry->count() > 0) cfg.dryRun = true;

    Plan plan;
    if (command == "scenery") plan = sceneryCommand(cfg);
    else if (command == "path") plan = pathCommand(cfg, "ex1", "identity", {"const1"}, "0.01", "40");
    else if (command == "generate") plan = generateCommand(cfg, "ex1", "identity", {"standard"}, {"40"});
    else if (command == "tc") plan = tcCommand(cfg);
    else if (command == "dimension") plan = dimensionCommand(cfg);
    else if (command == "bernoulli") plan = bernoulliCommand(cfg, R"({"family": "dyadic_lebesgue"})", {"const1", "ident"});
    else plan = examplePlan(exampleName, cfg);

    if (cfg.dryRun) {
      std::cerr << "config ok\n";
      return 0;
    }
    const std::string started = isoNow();
    const auto t0 = std::chrono::steady_clock::now();
    const Table table = plan.compute();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(table, cfg, command == "example" ? "example " + exampleName : command, started, seconds);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "ConfigError: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"scenerylab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace scenerylab::cli
