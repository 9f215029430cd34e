#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "hsplab/algorithms.hpp"
#include "hsplab/errors.hpp"
#include "hsplab/numtheory.hpp"
#include "hsplab/serialization.hpp"

namespace hsplab::cli {

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::set<std::string> kSolverCommands = {
    "deutsch", "simon", "order", "period", "hsp",
    "dlog", "robust-period", "robust-hsp", "factor"};

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> control_bits;
  std::string json_out;
  std::optional<std::size_t> cap;
  // Shortcuts that fill in an instance descriptor without a config file.
  std::optional<std::uint64_t> modulus, a, b, r, n, instance_seed;
  std::optional<int> f0, f1;
  std::string bits;
  std::vector<std::uint64_t> moduli;
  std::string generators;
  // dump
  std::string kind;
  std::optional<double> phi;
  std::optional<unsigned> nbits;
};

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

// Fills config["instance"] from shortcut flags where the command allows it.
void apply_shortcuts(const std::string& cmd, const Flags& f, Json& config) {
  Json inst = config.value("instance", Json::object());
  // A config that already names another kind (a many-to-one wrapper, a
  // stabiliser) is used as written.
  if (inst.contains("kind") && cmd != "factor" && inst["kind"] != cmd) return;
  auto set = [&](const char* key, const auto& opt) {
    if (opt) inst[key] = *opt;
  };
  if (cmd == "deutsch") {
    inst["kind"] = "deutsch";
    set("f0", f.f0);
    set("f1", f.f1);
  } else if (cmd == "simon") {
    inst["kind"] = "simon";
    if (!f.bits.empty()) inst["s"] = f.bits;
  } else if (cmd == "order") {
    inst["kind"] = "order";
    set("modulus", f.modulus);
    set("a", f.a);
  } else if (cmd == "period") {
    inst["kind"] = "period";
    set("r", f.r);
  } else if (cmd == "dlog") {
    inst["kind"] = "dlog";
    set("modulus", f.modulus);
    set("a", f.a);
    set("b", f.b);
    set("r", f.r);
  } else if (cmd == "hsp") {
    inst["kind"] = "hsp";
    if (!f.moduli.empty()) inst["moduli"] = f.moduli;
    if (!f.generators.empty()) {
      try {
        inst["generators"] = Json::parse(f.generators);
      } catch (const Json::exception&) {
        throw ConfigError("--generators must be a JSON array of arrays");
      }
    }
  } else if (cmd == "factor") {
    if (f.n) config["n"] = *f.n;
    return;
  } else {
    return;
  }
  set("seed", f.instance_seed);
  if (cmd == "dlog" && !inst.contains("r") && inst.contains("modulus")) {
    inst["r"] = inst["modulus"].get<std::uint64_t>() - 1;
  }
  config["instance"] = inst;
}

SolverParams params_for(const std::string& solver, const Json& config,
                        const PlantedInstance* planted) {
  SolverParams p;
  if (config.contains("params")) {
    try {
      from_json(config.at("params"), p);
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("bad params: ") + e.what());
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("bad params: ") + e.what());
    }
  }
  const Json inst = config.value("instance", Json::object());
  if ((solver == "robust-period" || solver == "robust-hsp") &&
      !config.value("params", Json::object()).contains("multiplicity")) {
    p.multiplicity = inst.value("multiplicity", std::uint64_t{1});
  }
  if (planted && p.control_bits == 0 && p.period_bound == 0) {
    // Public bounds only: an injective labelling bounds the period by the
    // codomain size, and an m-to-one labelling by m times it.
    const std::uint64_t x = planted->oracle.codomain_size();
    if (solver == "order") {
      p.period_bound = x;
      p.control_bits = ceil_log2(x * x);
    } else if (solver == "period") {
      p.period_bound = x;
    } else if (solver == "robust-period") {
      p.period_bound = x * p.multiplicity;
    }
  }
  return p;
}

// Subgroup of a finite-domain instance found by checking every element
// against every point. Independent of the solvers and of the planted truth.
std::optional<SubgroupGenerators> brute_force_subgroup(const OracleInstance& f) {
  if (!f.domain().is_finite()) return std::nullopt;
  const GroupSpec spec = f.domain().finite_spec();
  const std::uint64_t order = spec.order();
  if (order > 1024) return std::nullopt;
  std::vector<std::uint64_t> values(order);
  std::vector<GroupElement> elems(order);
  for (std::uint64_t i = 0; i < order; ++i) {
    elems[i] = element_at(spec, i);
    values[i] = f.evaluate_in_superposition(elems[i].coords);
  }
  SubgroupGenerators k{spec, {}};
  for (std::uint64_t h = 1; h < order; ++h) {
    bool ok = true;
    for (std::uint64_t i = 0; i < order && ok; ++i) {
      ok = values[element_index(spec, add(spec, elems[i], elems[h]))] == values[i];
    }
    if (ok) k.gens.push_back(elems[h]);
  }
  return canonical_subgroup(k);
}

std::optional<std::uint64_t> brute_force_period(const OracleInstance& f) {
  for (std::uint64_t d = 1; d <= 1'000'000; ++d) {
    bool ok = true;
    for (std::uint64_t t = 0; t < 64 + 2 * d && ok; ++t) {
      ok = f.evaluate_in_superposition(std::vector<std::int64_t>{static_cast<std::int64_t>(t)}) ==
           f.evaluate_in_superposition(
               std::vector<std::int64_t>{static_cast<std::int64_t>(t + d)});
    }
    if (ok) return d;
  }
  return std::nullopt;
}

struct TrialOutcome {
  Json report;
  bool failed = false;
  bool match = false;
};

TrialOutcome run_trial(const std::string& solver, const Json& config,
                       std::uint64_t seed, bool brute_force) {
  TrialOutcome out;
  out.report["seed"] = seed;
  try {
    if (solver == "factor") {
      SolverParams p = params_for(solver, config, nullptr);
      p.seed = seed;
      const auto n = config.at("n").get<std::uint64_t>();
      const FactorResult res = factor_via_order(n, p);
      out.report["result"] = res;
      out.match = res.factor > 1 && res.factor < n && n % res.factor == 0;
      out.report["match"] = out.match;
      return out;
    }
    const PlantedInstance planted = build_instance(config.at("instance"));
    SolverParams p = params_for(solver, config, &planted);
    p.seed = seed;
    const OracleInstance& f = planted.oracle;
    const GroundTruth& truth = planted.truth;

    if (solver == "order" || solver == "period" || solver == "robust-period") {
      OrderResult res = solver == "order"    ? find_order(f, p)
                        : solver == "period" ? find_period(f, p)
                                             : robust_period(f, p);
      out.report["result"] = res;
      std::optional<std::uint64_t> expected = truth.effective_period;
      if (brute_force) expected = brute_force_period(f);
      out.match = expected && res.r == *expected;
    } else if (solver == "dlog") {
      const std::uint64_t r = f.domain().moduli.at(0);
      const DlogResult res = solve_dlog(f, r, p);
      out.report["result"] = res;
      const std::int64_t xm[2] = {static_cast<std::int64_t>(res.m), 0};
      const std::int64_t xb[2] = {0, 1};
      out.match = f.evaluate_in_superposition(xm) == f.evaluate_in_superposition(xb);
      if (brute_force) {
        const auto k = brute_force_subgroup(f);
        out.match = out.match && k &&
                    subgroup_contains(*k, make_element(k->spec,
                                                       {-static_cast<std::int64_t>(res.m), 1}));
      }
    } else {
      const HspResult res =
          solver == "robust-hsp" ? robust_hsp(f, p) : solve_hsp_general(f, p);
      out.report["result"] = res;
      std::optional<SubgroupGenerators> expected;
      if (brute_force) {
        expected = brute_force_subgroup(f);
      } else {
        expected = truth.effective_subgroup();
      }
      out.match = expected && subgroups_equal(res.k, *expected);
    }
    out.report["match"] = out.match;
  } catch (const ConfigError&) {
    throw;
  } catch (const BudgetExhausted& e) {
    out.failed = true;
    out.report["error"] = e.what();
  } catch (const PromiseViolation& e) {
    out.failed = true;
    out.report["error"] = e.what();
  } catch (const ShiftUnavailable& e) {
    out.failed = true;
    out.report["error"] = e.what();
  } catch (const DimensionCapExceeded& e) {
    out.failed = true;
    out.report["error"] = e.what();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  } catch (const DimensionMismatch& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  return out;
}

// Runs job(i) for i in [0, n) on a small worker pool; results keep their
// index so the output does not depend on scheduling.
std::vector<TrialOutcome> run_parallel(
    std::size_t n, const std::function<TrialOutcome(std::size_t)>& job) {
  std::vector<TrialOutcome> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        results[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

Json dump_distribution(const Json& config, const Flags& flags) {
  Json spec = config.value("dump", Json::object());
  if (!flags.kind.empty()) spec["kind"] = flags.kind;
  if (flags.phi) spec["phi"] = *flags.phi;
  if (flags.n) spec["n"] = *flags.n;
  if (flags.nbits) spec["bits"] = *flags.nbits;
  const std::string kind = spec.value("kind", std::string("estimator"));
  Json out{{"schema", kSchemaVersion}, {"command", "dump"}, {"kind", kind}};
  if (kind == "estimator") {
    const auto dist = estimator_distribution(spec.at("phi").get<double>(),
                                             spec.at("n").get<std::uint64_t>());
    out["distribution"] = dist;
    out["closest"] = dist.closest_outcome();
    return out;
  }
  if (!config.contains("instance")) throw ConfigError("dump needs an instance");
  const PlantedInstance planted = build_instance(config.at("instance"));
  const auto generator = spec.value("generator", std::size_t{0});
  if (kind == "register-pe") {
    std::uint64_t n = spec.value("n", std::uint64_t{0});
    if (n == 0 && spec.contains("bits")) n = std::uint64_t{1} << spec.at("bits").get<unsigned>();
    if (n == 0) throw ConfigError("register-pe needs n or bits");
    out["n"] = n;
    out["probs"] = register_outcome_distribution(planted.oracle, generator, n);
    return out;
  }
  if (kind == "semiclassical-pe") {
    const auto bits = spec.at("bits").get<unsigned>();
    out["n"] = std::uint64_t{1} << bits;
    out["probs"] = semiclassical_outcome_distribution(planted.oracle, generator, bits);
    return out;
  }
  throw ConfigError("unknown dump kind \"" + kind + "\"");
}

// Battery of hidden-subgroup configs: every subgroup of the given group with
// a number of seeded relabelings each.
std::vector<Json> expand_battery(const Json& config) {
  const Json& b = config.at("battery");
  const GroupSpec spec(b.at("moduli").get<std::vector<std::uint64_t>>());
  const auto relabelings = b.value("relabelings", std::uint64_t{1});
  std::vector<Json> out;
  for (const auto& k : all_subgroups(spec)) {
    Json gens = Json::array();
    for (const auto& g : k.gens) gens.push_back(g.coords);
    for (std::uint64_t s = 1; s <= relabelings; ++s) {
      Json c = config;
      c.erase("battery");
      c["instance"] = Json{{"kind", "hsp"}, {"moduli", spec.moduli},
                           {"generators", gens}, {"seed", s}};
      out.push_back(std::move(c));
    }
  }
  return out;
}

int execute(const std::string& cmd, const Flags& flags, std::ostream& out) {
  if (flags.cap) set_dimension_cap(*flags.cap);
  Json config = flags.config_path.empty() ? Json::object() : load_config(flags.config_path);
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  if (config.contains("schema") && config.at("schema") != kSchemaVersion) {
    throw ConfigError("unsupported config schema");
  }
  if (flags.control_bits) config["params"]["control_bits"] = *flags.control_bits;

  const auto start = std::chrono::steady_clock::now();
  Json report{{"schema", kSchemaVersion}, {"command", cmd}};
  int status = kExitOk;

  if (cmd == "dump") {
    apply_shortcuts(config.value("solver", std::string()), flags, config);
    report = dump_distribution(config, flags);
  } else {
    const bool verify = cmd == "verify";
    const std::string solver = verify ? config.value("solver", std::string()) : cmd;
    if (!kSolverCommands.count(solver)) {
      throw ConfigError("verify needs \"solver\" set to one of the solver commands");
    }
    apply_shortcuts(solver, flags, config);
    std::vector<Json> configs;
    if (verify && config.contains("battery")) {
      configs = expand_battery(config);
    } else {
      if (solver == "factor" ? !config.contains("n") : !config.contains("instance")) {
        throw ConfigError("missing instance (use --config or the instance flags)");
      }
      configs.push_back(config);
    }
    const std::uint64_t seed = flags.seed.value_or(config.value("seed", std::uint64_t{1}));
    const std::size_t trials = flags.trials.value_or(config.value("trials", std::size_t{1}));
    if (trials == 0) throw ConfigError("trials must be >= 1");
    const std::size_t total = configs.size() * trials;
    const auto results = run_parallel(total, [&](std::size_t i) {
      const std::size_t c = i / trials;
      const std::size_t t = i % trials;
      TrialOutcome o = run_trial(solver, configs[c], seed + t, verify);
      o.report["trial"] = t;
      if (configs.size() > 1) o.report["instance"] = configs[c].at("instance");
      return o;
    });
    bool all_match = true;
    bool any_failed = false;
    Json runs = Json::array();
    for (const auto& r : results) {
      runs.push_back(r.report);
      any_failed = any_failed || r.failed;
      all_match = all_match && (r.failed || r.match);
    }
    if (solver != "factor" && configs.size() == 1) {
      report["instance"] = config.at("instance");
      report["truth"] = build_instance(config.at("instance")).truth;
    }
    if (solver == "factor") report["n"] = config.at("n");
    report["solver"] = solver;
    report["seed"] = seed;
    report["runs"] = runs;
    report["match"] = all_match && !any_failed;
    if (!all_match) {
      status = kExitMismatch;
    } else if (any_failed) {
      status = kExitSolverFailure;
    }
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  // The only field that differs between replays of the same config and seed.
  report["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();

  const std::string text = report.dump(2);
  out << text << "\n";
  if (!flags.json_out.empty()) {
    std::ofstream file(flags.json_out);
    if (!file) throw ConfigError("cannot write " + flags.json_out);
    file << text << "\n";
  }
  return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Abelian hidden subgroup simulator"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "JSON config file");
    sub->add_option("--seed", flags.seed, "master seed; trial i uses seed + i");
    sub->add_option("--trials", flags.trials, "independent runs");
    sub->add_option("--control-bits", flags.control_bits, "control qubits l");
    sub->add_option("--json-out", flags.json_out, "also write the report here");
    sub->add_option("--cap", flags.cap, "joint state dimension cap");
  };
  std::map<std::string, CLI::App*> subs;
  for (const std::string name : {"deutsch", "simon", "order", "period", "hsp", "dlog",
                                 "robust-period", "robust-hsp", "factor", "dump",
                                 "verify"}) {
    subs[name] = app.add_subcommand(name);
    common(subs[name]);
  }
  subs["deutsch"]->add_option("--f0", flags.f0);
  subs["deutsch"]->add_option("--f1", flags.f1);
  subs["simon"]->add_option("--s", flags.bits, "hidden bitstring");
  subs["simon"]->add_option("--instance-seed", flags.instance_seed);
  subs["order"]->add_option("--modulus", flags.modulus);
  subs["order"]->add_option("--a", flags.a);
  subs["period"]->add_option("--r", flags.r);
  subs["period"]->add_option("--instance-seed", flags.instance_seed);
  subs["dlog"]->add_option("--modulus", flags.modulus);
  subs["dlog"]->add_option("--a", flags.a);
  subs["dlog"]->add_option("--b", flags.b);
  subs["dlog"]->add_option("--r", flags.r);
  subs["hsp"]->add_option("--moduli", flags.moduli);
  subs["hsp"]->add_option("--generators", flags.generators, "e.g. [[2,0],[0,1]]");
  subs["hsp"]->add_option("--instance-seed", flags.instance_seed);
  subs["factor"]->add_option("--n", flags.n);
  subs["dump"]->add_option("--kind", flags.kind, "estimator|register-pe|semiclassical-pe");
  subs["dump"]->add_option("--phi", flags.phi);
  subs["dump"]->add_option("--n", flags.n);
  subs["dump"]->add_option("--bits", flags.nbits);

  std::vector<const char*> argv{"hsplab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  std::string cmd;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) cmd = name;
  }
  try {
    return execute(cmd, flags, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

}  // namespace hsplab::cli
