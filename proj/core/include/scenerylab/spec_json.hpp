#pragma once

#include <string>

#include "scenerylab/measure.hpp"
#include "scenerylab/shift_bernoulli.hpp"

namespace scenerylab {

// Measure specs:
//   {"type": "geometric_atoms", "base": b, "weight_ratio": w}
//   {"type": "exp_cdf"} | {"type": "one_sided_exp_cdf"} | {"type": "double_exp_pair"}
//   {"type": "lebesgue"}
//   {"type": "atom_list", "atoms": [[position, weight], ...]}
//   {"type": "bernoulli", "weights": <weight spec>}
//   {"type": "pushforward", "base": <measure spec>, "diffeo": "<diffeo name>"}
//   {"type": "mixture", "components": [{"log_weight": w, "measure": <spec>}, ...]}
// Weight specs: {"family": "dyadic_lebesgue"} | {"family": "pN", "N": n} | [p_0, ..., p_{m-1}]
// Unknown keys and malformed values throw ConfigError.
MeasurePtr parseMeasureSpec(const std::string& json);
std::string measureSpecToJson(const MeasureModel& m);

WeightFamily parseWeightSpec(const std::string& json);
std::string weightSpecToJson(const WeightFamily& w);

// A JSON spec, or a catalog name: lebesgue, exp_cdf, one_sided_exp_cdf,
// double_exp_pair, geometric_atoms (b = 1/2, w = 2), bernoulli (dyadic),
// and the example aliases ex1, ex3, ex4, ex5.
MeasurePtr resolveMeasure(const std::string& nameOrJson);

}  // namespace scenerylab
