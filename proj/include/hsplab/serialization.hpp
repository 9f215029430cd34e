#pragma once

// JSON forms of the library types and of instance descriptors. Descriptors
// and reports carry "schema": 1.

#include <json.hpp>

#include "hsplab/algorithms.hpp"
#include "hsplab/estimation.hpp"
#include "hsplab/groups.hpp"
#include "hsplab/oracles.hpp"
#include "hsplab/postprocess.hpp"
#include "hsplab/qft.hpp"

namespace hsplab {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

void to_json(Json& j, const GroupSpec& v);
void from_json(const Json& j, GroupSpec& v);
void to_json(Json& j, const DomainSpec& v);
void from_json(const Json& j, DomainSpec& v);
void to_json(Json& j, const SubgroupGenerators& v);
void from_json(const Json& j, SubgroupGenerators& v);
void to_json(Json& j, const Fraction& v);
void to_json(Json& j, const PhaseSample& v);
void to_json(Json& j, const CharacterSample& v);
void to_json(Json& j, const EstimatorDistribution& v);
void to_json(Json& j, const SemiclassicalStep& v);
void to_json(Json& j, const SemiclassicalTranscript& v);
void to_json(Json& j, const QueryCounts& v);
void to_json(Json& j, const GroundTruth& v);
void to_json(Json& j, const OrderResult& v);
void to_json(Json& j, const HspResult& v);
void to_json(Json& j, const DlogResult& v);
void to_json(Json& j, const FactorResult& v);
void to_json(Json& j, const SolverParams& v);
// Missing keys keep their defaults.
void from_json(const Json& j, SolverParams& v);

// Builds an instance from a descriptor such as
//   {"schema": 1, "kind": "order", "modulus": 15, "a": 2}
// Kinds: deutsch, simon, order, period, dlog, hsp, stabiliser, many_to_one.
// Throws InvalidArgument on malformed descriptors.
PlantedInstance build_instance(const Json& descriptor);

}  // namespace hsplab
