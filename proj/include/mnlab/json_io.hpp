#pragma once

#include <json.hpp>

#include "mnlab/classify.hpp"
#include "mnlab/multinorms.hpp"
#include "mnlab/torus_geometry.hpp"
#include "mnlab/weak_summing.hpp"

namespace mnlab {

using json = nlohmann::json;

// {"field":"real"|"complex","r":number,"m":int,"n":int,"vectors":[[...]]}
// where an entry is a bare number (real) or an [re, im] pair.
VectorTuple tuple_from_json(const json& j);
json tuple_to_json(const VectorTuple& x);

// {"field":..,"from":u,"to":s,"to_lorentz_second"?:q2,"m":..,"n":..,"entries":[[..]]}
OperatorMatrix matrix_from_json(const json& j);

json estimate_to_json(const NormEstimate& e);
json witness_to_json(const Witness& w);

json verdict_to_json(const EquivalenceVerdict& v);

json mu1_to_json(const Mu1Result& r);
json classification_to_json(const TorusClassification& c);
json extreme_report_to_json(const ExtremeTestReport& r);

// Re-evaluate the plain objective of a multi-norm at an emitted witness
// (dual tuple / partition / frame); used by the round-trip checks.
double witness_objective(const VectorTuple& x, const MultiNormKind& kind, const Witness& w);

}  // namespace mnlab
