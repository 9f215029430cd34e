#include "hsplab/serialization.hpp"

#include "hsplab/errors.hpp"

namespace hsplab {

namespace {

std::vector<std::vector<std::int64_t>> element_coords(
    const std::vector<GroupElement>& elems) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& e : elems) out.push_back(e.coords);
  return out;
}

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.contains(key)) {
    throw InvalidArgument(std::string("descriptor is missing \"") + key + "\"");
  }
  return j.at(key).get<T>();
}

template <typename T>
T optional_value(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

DlogGroup::Kind dlog_kind(const std::string& name) {
  if (name == "multiplicative") return DlogGroup::Kind::kMultiplicative;
  if (name == "additive") return DlogGroup::Kind::kAdditive;
  throw InvalidArgument("dlog group must be \"multiplicative\" or \"additive\"");
}

}  // namespace

void to_json(Json& j, const GroupSpec& v) { j = Json{{"moduli", v.moduli}}; }

void from_json(const Json& j, GroupSpec& v) {
  v = GroupSpec(j.at("moduli").get<std::vector<std::uint64_t>>());
}

void to_json(Json& j, const DomainSpec& v) { j = Json{{"moduli", v.moduli}}; }

void from_json(const Json& j, DomainSpec& v) {
  v.moduli = j.at("moduli").get<std::vector<std::uint64_t>>();
}

void to_json(Json& j, const SubgroupGenerators& v) {
  j = Json{{"moduli", v.spec.moduli}, {"generators", element_coords(v.gens)}};
}

void from_json(const Json& j, SubgroupGenerators& v) {
  v.spec = GroupSpec(j.at("moduli").get<std::vector<std::uint64_t>>());
  v.gens.clear();
  for (const auto& g : j.at("generators")) {
    v.gens.push_back(make_element(v.spec, g.get<std::vector<std::int64_t>>()));
  }
}

void to_json(Json& j, const Fraction& v) { j = Json{{"num", v.num}, {"den", v.den}}; }

void to_json(Json& j, const PhaseSample& v) {
  j = Json{{"x", v.observed}, {"n", v.n}, {"estimate", v.estimate}, {"seed", v.seed}};
}

void to_json(Json& j, const CharacterSample& v) { j = Json(v.t); }

void to_json(Json& j, const EstimatorDistribution& v) {
  j = Json{{"n", v.n}, {"phi", v.phi}, {"probs", v.probs}};
}

void to_json(Json& j, const SemiclassicalStep& v) {
  j = Json{{"power", v.power}, {"angle", v.angle}, {"bit", v.bit}};
}

void to_json(Json& j, const SemiclassicalTranscript& v) {
  j = Json{{"steps", v.steps},
           {"x", v.x},
           {"peak_dimension", v.peak_dimension},
           {"seed", v.seed}};
}

void to_json(Json& j, const QueryCounts& v) {
  j = Json{{"quantum", v.quantum}, {"classical", v.classical}};
}

void to_json(Json& j, const GroundTruth& v) {
  j = Json{{"domain", v.domain.moduli},
           {"planted", v.planted},
           {"effective", v.effective},
           {"multiplicity", v.multiplicity},
           {"warnings", v.warnings}};
  if (v.period) j["period"] = *v.period;
  if (v.effective_period) j["effective_period"] = *v.effective_period;
  if (v.dlog_exponent) j["dlog_exponent"] = *v.dlog_exponent;
}

void to_json(Json& j, const OrderResult& v) {
  j = Json{{"r", v.r},
           {"trials", v.trials},
           {"samples", v.samples},
           {"verified", v.verified},
           {"queries", v.queries}};
  if (v.tail_scan_evaluations > 0 || !v.accepted_candidates.empty() ||
      !v.rejected_candidates.empty()) {
    j["tail_scan_evaluations"] = v.tail_scan_evaluations;
    j["accepted_candidates"] = v.accepted_candidates;
    j["rejected_candidates"] = v.rejected_candidates;
    j["factors"] = v.factors;
  }
}

void to_json(Json& j, const HspResult& v) {
  j = Json{{"subgroup", v.k},
           {"trials", v.trials},
           {"samples", v.samples},
           {"verified", v.verified},
           {"queries", v.queries},
           {"tail_scan_evaluations", v.tail_scan_evaluations}};
}

void to_json(Json& j, const DlogResult& v) {
  j = Json{{"m", v.m},
           {"r", v.r},
           {"trials", v.trials},
           {"zero_retries", v.zero_retries},
           {"stage_one", v.stage_one},
           {"stage_two", v.stage_two},
           {"verified", v.verified},
           {"target_reused", v.target_reused},
           {"live_control_registers", v.live_control_registers},
           {"control_size", v.control_size},
           {"queries", v.queries}};
}

void to_json(Json& j, const FactorResult& v) {
  j = Json{{"n", v.n},
           {"factor", v.factor},
           {"witness", v.witness},
           {"order", v.order},
           {"attempts", v.attempts},
           {"classical_shortcut", v.classical_shortcut}};
}

void to_json(Json& j, const SolverParams& v) {
  j = Json{{"control_bits", v.control_bits},
           {"period_bound", v.period_bound},
           {"doubling", v.doubling},
           {"trial_budget", v.trial_budget},
           {"epsilon", v.epsilon},
           {"seed", v.seed},
           {"multiplicity", v.multiplicity},
           {"zero_run_threshold", v.zero_run_threshold},
           {"spot_checks", v.spot_checks},
           {"hsp_samples", v.hsp_samples}};
}

void from_json(const Json& j, SolverParams& v) {
  v.control_bits = optional_value(j, "control_bits", v.control_bits);
  v.period_bound = optional_value(j, "period_bound", v.period_bound);
  v.doubling = optional_value(j, "doubling", v.doubling);
  v.trial_budget = optional_value(j, "trial_budget", v.trial_budget);
  v.epsilon = optional_value(j, "epsilon", v.epsilon);
  v.seed = optional_value(j, "seed", v.seed);
  v.multiplicity = optional_value(j, "multiplicity", v.multiplicity);
  v.zero_run_threshold = optional_value(j, "zero_run_threshold", v.zero_run_threshold);
  v.spot_checks = optional_value(j, "spot_checks", v.spot_checks);
  v.hsp_samples = optional_value(j, "hsp_samples", v.hsp_samples);
  v.validate();
}

PlantedInstance build_instance(const Json& d) {
  if (!d.is_object()) throw InvalidArgument("instance descriptor must be an object");
  if (d.contains("schema") && d.at("schema").get<int>() != kSchemaVersion) {
    throw InvalidArgument("unsupported descriptor schema");
  }
  try {
    const auto kind = required<std::string>(d, "kind");
    if (kind == "deutsch") {
      return make_deutsch_instance(required<int>(d, "f0"), required<int>(d, "f1"));
    }
    if (kind == "simon") {
      return make_simon_instance(required<std::string>(d, "s"),
                                 optional_value(d, "allow_zero", false),
                                 optional_value<std::uint64_t>(d, "seed", 0));
    }
    if (kind == "order") {
      return make_order_instance(required<std::uint64_t>(d, "modulus"),
                                 required<std::uint64_t>(d, "a"));
    }
    if (kind == "period") {
      const auto r = required<std::uint64_t>(d, "r");
      if (d.contains("relabeling")) {
        return make_period_instance(
            r, d.at("relabeling").get<std::vector<std::uint64_t>>());
      }
      return make_period_instance(r, optional_value<std::uint64_t>(d, "seed", 0));
    }
    if (kind == "dlog") {
      DlogGroup group{dlog_kind(optional_value<std::string>(d, "group", "multiplicative")),
                      required<std::uint64_t>(d, "modulus")};
      return make_dlog_instance(required<std::uint64_t>(d, "r"), group,
                                required<std::uint64_t>(d, "a"),
                                required<std::uint64_t>(d, "b"));
    }
    if (kind == "hsp") {
      DomainSpec domain{required<std::vector<std::uint64_t>>(d, "moduli")};
      return make_hidden_subgroup_instance(
          domain,
          optional_value<std::vector<std::vector<std::int64_t>>>(d, "generators", {}),
          optional_value<std::uint64_t>(d, "seed", 0),
          optional_value(d, "expose_shift", true));
    }
    if (kind == "stabiliser") {
      // g . x = (x + sum_j w_j g_j) mod points
      const GroupSpec spec(required<std::vector<std::uint64_t>>(d, "moduli"));
      const auto points = required<std::uint64_t>(d, "points");
      auto weights = required<std::vector<std::int64_t>>(d, "weights");
      if (weights.size() != spec.rank() || points == 0) {
        throw InvalidArgument("stabiliser needs one weight per factor and points >= 1");
      }
      GroupAction action = [weights, points](const GroupElement& g, std::uint64_t x) {
        std::int64_t acc = static_cast<std::int64_t>(x);
        for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * g.coords[i];
        const auto p = static_cast<std::int64_t>(points);
        return static_cast<std::uint64_t>(((acc % p) + p) % p);
      };
      return make_stabiliser_instance(spec, action, points,
                                      optional_value<std::uint64_t>(d, "x0", 0));
    }
    if (kind == "many_to_one") {
      const PlantedInstance inner = build_instance(d.at("inner"));
      ManyToOnePolicy policy{optional_value(d, "reject_unsolvable", false)};
      return wrap_many_to_one(inner, required<std::vector<std::uint64_t>>(d, "merge"),
                              required<std::uint64_t>(d, "multiplicity"), policy);
    }
    throw InvalidArgument("unknown instance kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed descriptor: ") + e.what());
  }
}

}  // namespace hsplab
