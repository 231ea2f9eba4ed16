#include "riccati/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace riccati::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw SchemaError(field + ": " + message);
}

const json& require(const json& j, const char* key, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(field.empty() ? key : field + "." + key, "missing");
    return *it;
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(field, "non-finite number");
    return v;
}

std::string child(const std::string& field, const char* key) {
    return field.empty() ? key : field + "." + key;
}

std::string index(const std::string& field, std::size_t i) {
    return field + "[" + std::to_string(i) + "]";
}

json condition_values(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(x);
    return out;
}

// %.17g keeps the round trip exact; NaN is written as "nan".
std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

template <typename V>
json function_json(const TimeFunction<V>& f) {
    json j;
    j["kind"] = to_string(f.kind());
    switch (f.kind()) {
    case FunctionKind::constant: j["value"] = to_json(f.constant_value()); break;
    case FunctionKind::polynomial: {
        j["origin"] = f.origin();
        json coeffs = json::array();
        for (const auto& c : f.coefficients()) coeffs.push_back(to_json(c));
        j["coefficients"] = std::move(coeffs);
        break;
    }
    case FunctionKind::sampled: {
        j["times"] = f.times();
        json values = json::array();
        for (const auto& v : f.values()) values.push_back(to_json(v));
        j["values"] = std::move(values);
        j["order"] = f.order();
        break;
    }
    }
    return j;
}

template <typename V, typename ReadValue>
TimeFunction<V> function_from_json(const json& j, double origin, const std::string& field,
                                   ReadValue&& read_value) {
    const json& kind = require(j, "kind", field);
    if (!kind.is_string()) fail(child(field, "kind"), "expected a string");
    const std::string k = kind.get<std::string>();
    try {
        if (k == "constant") return TimeFunction<V>::constant(read_value(require(j, "value", field), child(field, "value")));
        if (k == "polynomial") {
            const double o = j.contains("origin") ? number(j["origin"], child(field, "origin")) : origin;
            const json& coeffs = require(j, "coefficients", field);
            if (!coeffs.is_array() || coeffs.empty())
                fail(child(field, "coefficients"), "expected a non-empty array");
            std::vector<V> values;
            for (std::size_t i = 0; i < coeffs.size(); ++i)
                values.push_back(read_value(coeffs[i], index(child(field, "coefficients"), i)));
            return TimeFunction<V>::polynomial(o, std::move(values));
        }
        if (k == "sampled") {
            const json& times = require(j, "times", field);
            const json& vals = require(j, "values", field);
            if (!times.is_array()) fail(child(field, "times"), "expected an array");
            if (!vals.is_array()) fail(child(field, "values"), "expected an array");
            std::vector<double> ts;
            for (std::size_t i = 0; i < times.size(); ++i)
                ts.push_back(number(times[i], index(child(field, "times"), i)));
            std::vector<V> vs;
            for (std::size_t i = 0; i < vals.size(); ++i)
                vs.push_back(read_value(vals[i], index(child(field, "values"), i)));
            int order = 3;
            if (j.contains("order")) {
                if (!j["order"].is_number_integer()) fail(child(field, "order"), "expected 1 or 3");
                order = j["order"].get<int>();
            }
            return TimeFunction<V>::sampled(std::move(ts), std::move(vs), order);
        }
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        fail(field, e.what());
    }
    fail(child(field, "kind"), "unknown kind '" + k + "'");
}

} // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Complex complex_from_json(const json& j, const std::string& field) {
    if (j.is_number()) return {number(j, field), 0.0};
    if (!j.is_array() || j.size() != 2) fail(field, "expected [re, im] pair or a number");
    return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

CMatrix matrix_from_json(const json& j, Eigen::Index n, const std::string& field) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(n)) {
        std::ostringstream os;
        os << "expected " << n << " rows";
        fail(field, os.str());
    }
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        const std::string rf = index(field, static_cast<std::size_t>(i));
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
            std::ostringstream os;
            os << "expected " << n << " entries";
            fail(rf, os.str());
        }
        for (Eigen::Index k = 0; k < n; ++k)
            m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)],
                                        index(rf, static_cast<std::size_t>(k)));
    }
    return m;
}

json to_json(const CoefficientFunction& f) { return function_json(f); }
json to_json(const ScalarFunction& f) { return function_json(f); }

CoefficientFunction coefficient_function_from_json(const json& j, Eigen::Index n, double origin,
                                                   const std::string& field) {
    return function_from_json<CMatrix>(j, origin, field, [n](const json& v, const std::string& f) {
        return matrix_from_json(v, n, f);
    });
}

ScalarFunction scalar_function_from_json(const json& j, double origin, const std::string& field) {
    return function_from_json<Complex>(j, origin, field, [](const json& v, const std::string& f) {
        return complex_from_json(v, f);
    });
}

json to_json(const Instance& inst) {
    json j;
    j["name"] = inst.name;
    j["n"] = inst.cs.n();
    j["t0"] = inst.cs.t0();
    j["t_end"] = inst.cs.t_end();
    j["P"] = to_json(inst.cs.P());
    j["Q"] = to_json(inst.cs.Q());
    j["R"] = to_json(inst.cs.R());
    j["S"] = to_json(inst.cs.S());
    j["lambda"] = to_json(inst.lambda);
    if (inst.mu) j["mu"] = to_json(*inst.mu);
    if (inst.nu) j["nu"] = to_json(*inst.nu);
    j["Y0"] = to_json(inst.Y0);
    j["grid_points"] = inst.grid_points;
    return j;
}

Instance instance_from_json(const json& j) {
    if (!j.is_object()) fail("(root)", "expected a JSON object");
    const json& jn = require(j, "n", "");
    if (!jn.is_number_integer()) fail("n", "expected an integer");
    const auto n = jn.get<long long>();
    if (n < 1 || n > kMaxDimension) {
        std::ostringstream os;
        os << "must lie in [1, " << kMaxDimension << "], got " << n;
        fail("n", os.str());
    }
    const double t0 = number(require(j, "t0", ""), "t0");
    const double t_end = number(require(j, "t_end", ""), "t_end");
    if (!(t0 < t_end)) fail("t_end", "must exceed t0");

    auto coefficient = [&](const char* key) {
        return coefficient_function_from_json(require(j, key, ""), n, t0, key);
    };
    auto P = coefficient("P");
    auto Q = coefficient("Q");
    auto R = coefficient("R");
    auto S = coefficient("S");
    CoefficientSet cs = [&] {
        try {
            return CoefficientSet::make(t0, t_end, std::move(P), std::move(Q), std::move(R),
                                        std::move(S));
        } catch (const Error& e) {
            fail("coefficients", e.what());
        }
    }();
    CoefficientFunction lambda = zero_function(n);
    if (j.contains("lambda") && !j["lambda"].is_null()) {
        lambda = coefficient_function_from_json(j["lambda"], n, t0, "lambda");
        if (!lambda.covers(t0, t_end)) fail("lambda", "not defined on [t0, t_end]");
    }
    std::optional<ScalarFunction> mu, nu;
    if (j.contains("mu") && !j["mu"].is_null()) mu = scalar_function_from_json(j["mu"], t0, "mu");
    if (j.contains("nu") && !j["nu"].is_null()) nu = scalar_function_from_json(j["nu"], t0, "nu");
    if (mu && !mu->covers(t0, t_end)) fail("mu", "not defined on [t0, t_end]");
    if (nu && !nu->covers(t0, t_end)) fail("nu", "not defined on [t0, t_end]");
    CMatrix Y0 = matrix_from_json(require(j, "Y0", ""), n, "Y0");
    int grid_points = 1001;
    if (j.contains("grid_points")) {
        if (!j["grid_points"].is_number_integer() || j["grid_points"].get<long long>() < 2)
            fail("grid_points", "expected an integer >= 2");
        grid_points = j["grid_points"].get<int>();
    }
    std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>()
                                                                   : std::string("instance");
    return Instance{std::move(name), std::move(cs), std::move(lambda), std::move(mu),
                    std::move(nu),   std::move(Y0), grid_points};
}

Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError(path + ": malformed JSON (" + e.what() + ")");
    }
    return instance_from_json(j);
}

void write_instance(const std::string& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument(path + ": cannot open for writing");
    out << to_json(inst).dump(2) << '\n';
    if (!out) throw InvalidArgument(path + ": write failed");
}

json to_json(const ConditionRecord& rec) {
    json j;
    j["name"] = rec.name;
    j["witness"] = rec.kind == WitnessKind::min_eigenvalue ? "min_eigenvalue" : "residual";
    j["passed"] = rec.passed;
    j["worst_time"] = rec.worst_time;
    j["worst_value"] = rec.worst_value;
    j["times"] = condition_values(rec.times);
    j["values"] = condition_values(rec.values);
    j["thresholds"] = condition_values(rec.thresholds);
    json passed = json::array();
    for (bool b : rec.point_passed) passed.push_back(b);
    j["point_passed"] = std::move(passed);
    return j;
}

json to_json(const CriterionReport& report) {
    json j;
    j["criterion"] = to_string(report.criterion);
    j["holds"] = report.holds;
    j["grid"] = {{"t0", report.grid.t0},
                 {"t_end", report.grid.t_end},
                 {"num_points", report.grid.num_points}};
    json conditions = json::array();
    for (const auto& c : report.conditions) conditions.push_back(to_json(c));
    j["conditions"] = std::move(conditions);
    if (report.extracted_mu) j["extracted_mu"] = to_json(*report.extracted_mu);
    if (report.extracted_nu) j["extracted_nu"] = to_json(*report.extracted_nu);
    if (report.gauge) j["lambda0"] = to_json(*report.gauge);
    j["notes"] = report.notes;
    return j;
}

json to_json(const BoundReport& report) {
    return {{"min_gap", report.min_gap}, {"time_of_min", report.time_of_min},
            {"pass", report.pass},       {"tol", report.tol},
            {"samples", report.samples}};
}

json to_json(const SandwichReport& report) {
    return {{"lower_min", report.lower_min}, {"lower_time", report.lower_time},
            {"upper_min", report.upper_min}, {"upper_time", report.upper_time},
            {"lower_pass", report.lower_pass}, {"upper_pass", report.upper_pass},
            {"pass", report.pass},           {"tol", report.tol}};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<CsvColumn>& extra) {
    const Eigen::Index n = traj.dim();
    out << "t";
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            out << ",y_" << i << '_' << k << "_re,y_" << i << '_' << k << "_im";
    for (const auto& c : extra) out << ',' << c.name;
    out << '\n';
    for (std::size_t r = 0; r < traj.size(); ++r) {
        out << format_number(traj.times[r]);
        const CMatrix& Y = traj.values[r];
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                out << ',' << format_number(Y(i, k).real()) << ',' << format_number(Y(i, k).imag());
        for (const auto& c : extra) {
            const auto v = r < c.values.size() ? c.values[r] : std::nullopt;
            out << ',' << format_number(v ? *v : std::numeric_limits<double>::quiet_NaN());
        }
        out << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("csv: empty file");
    const auto header = split(line);
    if (header.empty() || header[0] != "t") throw SchemaError("csv: first column must be t");
    std::size_t y_columns = 0;
    while (1 + y_columns < header.size() && header[1 + y_columns].rfind("y_", 0) == 0) ++y_columns;
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(y_columns / 2.0)));
    if (n < 1 || static_cast<std::size_t>(2 * n * n) != y_columns)
        throw SchemaError("csv: Y columns do not form a square matrix");

    Trajectory traj;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() < 1 + y_columns)
            throw SchemaError("csv: row " + std::to_string(row) + " is truncated");
        auto parse = [&](std::size_t c) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cells[c], &used);
                if (used != cells[c].size()) throw std::invalid_argument("trailing");
                return v;
            } catch (const std::exception&) {
                throw SchemaError("csv: row " + std::to_string(row) + ", column " + header[c] +
                                  ": not a number");
            }
        };
        traj.times.push_back(parse(0));
        CMatrix Y(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k) {
                const std::size_t c = 1 + 2 * static_cast<std::size_t>(i * n + k);
                Y(i, k) = {parse(c), parse(c + 1)};
            }
        if (!Y.allFinite()) throw SchemaError("csv: row " + std::to_string(row) + ": non-finite Y");
        traj.values.push_back(std::move(Y));
    }
    for (std::size_t k = 1; k < traj.times.size(); ++k)
        if (!(traj.times[k] > traj.times[k - 1]))
            throw SchemaError("csv: times must be strictly increasing");
    return traj;
}

} // namespace riccati::io
