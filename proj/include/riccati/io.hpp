#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "riccati/criteria.hpp"
#include "riccati/errors.hpp"
#include "riccati/instances.hpp"
#include "riccati/integrate.hpp"
#include "riccati/verify.hpp"

namespace riccati::io {

using json = nlohmann::json;

/// Malformed instance file or trajectory CSV; the message names the field.
class SchemaError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Complex scalars are [re, im] pairs (a bare number is read as real);
// matrices are row-major nested arrays of such scalars.
json to_json(Complex z);
json to_json(const CMatrix& m);
Complex complex_from_json(const json& j, const std::string& field);
CMatrix matrix_from_json(const json& j, Eigen::Index n, const std::string& field);

/// {"kind": "constant", "value": M}
/// {"kind": "polynomial", "origin": t, "coefficients": [M, ...]}
/// {"kind": "sampled", "times": [...], "values": [M, ...], "order": 1 | 3}
json to_json(const CoefficientFunction& f);
json to_json(const ScalarFunction& f);
CoefficientFunction coefficient_function_from_json(const json& j, Eigen::Index n, double origin,
                                                   const std::string& field);
ScalarFunction scalar_function_from_json(const json& j, double origin, const std::string& field);

json to_json(const Instance& inst);
Instance instance_from_json(const json& j);
Instance read_instance(const std::string& path);
void write_instance(const std::string& path, const Instance& inst);

json to_json(const ConditionRecord& rec);
json to_json(const CriterionReport& report);
json to_json(const BoundReport& report);
json to_json(const SandwichReport& report);

/// Extra per-row columns appended after the Y entries.
struct CsvColumn {
    std::string name;
    std::vector<std::optional<double>> values;  // one per trajectory sample; empty -> "nan"
};

/// Header: t, y_<i>_<j>_re, y_<i>_<j>_im (row-major), then the extra columns.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<CsvColumn>& extra);
/// Reads t and the Y columns; other columns are ignored.
Trajectory read_trajectory_csv(std::istream& in);

} // namespace riccati::io
