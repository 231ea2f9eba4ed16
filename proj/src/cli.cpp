#include "riccati/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "riccati/criteria.hpp"
#include "riccati/errors.hpp"
#include "riccati/instances.hpp"
#include "riccati/integrate.hpp"
#include "riccati/io.hpp"
#include "riccati/verify.hpp"

namespace riccati {

namespace {

using io::json;

struct CheckArgs {
    std::string instance;
    std::string criterion = "theorem3.1";
    double tol = 1e-9;
    int grid = 0;
};

struct IntegrateArgs {
    std::string instance;
    std::string method = "direct";
    std::string out;
    int samples = 101;
    double rtol = 1e-9;
    double atol = 1e-12;
};

struct VerifyArgs {
    std::string instance;
    std::string csv;
    double tol = 1e-6;
};

struct GenArgs {
    std::string target = "satisfying";
    long long n = 2;
    std::uint64_t seed = 0;
    std::string out;
    double horizon = 5.0;
    double scale = 1.0;
    double rate = 1.0;
    std::string variation = "polynomial";
    bool complex_gauge = false;
};

struct CatalogArgs {
    std::string name;
    std::string out;
};

Criterion parse_criterion(const std::string& s) {
    if (s == "theorem3.1") return Criterion::theorem_3_1;
    if (s == "cor3.1") return Criterion::corollary_3_1;
    if (s == "cor3.2") return Criterion::corollary_3_2;
    if (s == "theorem1.1") return Criterion::theorem_1_1;
    throw InvalidArgument("--criterion: unknown value '" + s + "'");
}

CriterionReport run_criterion(const Instance& inst, Criterion c, const GridSpec& grid,
                              const CriterionTolerance& tol) {
    switch (c) {
    case Criterion::theorem_3_1:
        return check_theorem_3_1(inst.cs, inst.lambda, inst.Y0, grid, tol);
    case Criterion::corollary_3_1: {
        const ScalarFunction mu = inst.mu ? *inst.mu : fit_mu_corollary_3_1(inst.cs, grid, tol);
        return check_corollary_3_1(inst.cs, mu, inst.Y0, grid, tol);
    }
    case Criterion::corollary_3_2: {
        const ScalarFunction nu = inst.nu ? *inst.nu : fit_nu_corollary_3_2(inst.cs, grid, tol);
        return check_corollary_3_2(inst.cs, nu, inst.Y0, grid, tol);
    }
    case Criterion::theorem_1_1:
        return check_theorem_1_1(inst.cs, inst.Y0, grid, tol);
    }
    throw InvalidArgument("unknown criterion");
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
    const Criterion c = parse_criterion(a.criterion);
    const Instance inst = io::read_instance(a.instance);
    const GridSpec grid = GridSpec::over(inst.cs, a.grid > 0 ? a.grid : inst.grid_points);
    grid.validate();
    const auto tol = CriterionTolerance::uniform(a.tol);
    try {
        const CriterionReport report = run_criterion(inst, c, grid, tol);
        out << io::to_json(report).dump(2) << '\n';
        return report.holds ? kExitOk : kExitFailed;
    } catch (const NotPositiveDefiniteError& e) {
        // The corollary needs P > 0; without it the criterion simply does not apply.
        json j;
        j["criterion"] = to_string(c);
        j["holds"] = false;
        j["error"] = e.what();
        j["min_eigenvalue"] = e.min_eigenvalue();
        out << j.dump(2) << '\n';
        return kExitFailed;
    }
}

std::vector<std::optional<double>> as_optional(const std::vector<double>& v) {
    return {v.begin(), v.end()};
}

// Per-sample ||A - B|| / (1 + ||A||) where b has a sample at the same time.
std::vector<std::optional<double>> discrepancy_column(const Trajectory& a, const Trajectory& b) {
    std::vector<std::optional<double>> col(a.size());
    for (std::size_t i = 0, j = 0; i < a.size(); ++i) {
        while (j < b.size() && b.times[j] < a.times[i]) ++j;
        if (j < b.size() && b.times[j] == a.times[i])
            col[i] = (a.values[i] - b.values[j]).norm() / (1.0 + a.values[i].norm());
    }
    return col;
}

std::vector<std::optional<double>> det_phi_column(const LinearFlow& flow, const Trajectory& traj) {
    std::vector<std::optional<double>> col(traj.size());
    for (std::size_t i = 0, j = 0; i < traj.size(); ++i) {
        while (j < flow.times.size() && flow.times[j] < traj.times[i]) ++j;
        if (j < flow.times.size() && flow.times[j] == traj.times[i])
            col[i] = std::abs(flow.phi[j].determinant());
    }
    return col;
}

json trajectory_status(const Trajectory& traj) {
    json j;
    j["method"] = to_string(traj.method);
    j["status"] = to_string(traj.status);
    j["trigger"] = to_string(traj.trigger);
    j["t_escape"] = traj.t_escape ? json(*traj.t_escape) : json(nullptr);
    j["singular_times"] = traj.singular_times;
    j["samples"] = traj.size();
    j["steps_accepted"] = traj.steps_accepted;
    j["steps_rejected"] = traj.steps_rejected;
    return j;
}

int cmd_integrate(const IntegrateArgs& a, std::ostream& out, std::ostream& err) {
    if (a.method != "direct" && a.method != "radon" && a.method != "both" && a.method != "lyapunov")
        throw InvalidArgument("--method: unknown value '" + a.method + "'");
    const Instance inst = io::read_instance(a.instance);
    IntegratorOptions opts;
    opts.num_samples = a.samples;
    opts.rtol = a.rtol;
    opts.atol = a.atol;
    opts.validate();

    Trajectory traj;
    std::vector<io::CsvColumn> extra;
    json sidecar;
    sidecar["instance"] = inst.name;
    std::optional<double> discrepancy;

    if (a.method == "lyapunov") {
        traj = integrate_lyapunov_comparison(inst.cs, inst.Y0, opts);
        extra.push_back({"lambda_min_gap", as_optional(eigen_monitor(traj, inst.lambda))});
        extra.push_back({"residual", lyapunov_residual_series(traj, inst.cs)});
    } else if (a.method == "radon") {
        auto [flow, t] = integrate_linear_system(inst.cs, inst.Y0, opts);
        traj = std::move(t);
        extra.push_back({"lambda_min_gap", as_optional(eigen_monitor(traj, inst.lambda))});
        extra.push_back({"residual", residual_series(traj, inst.cs)});
        extra.push_back({"det_phi_abs", det_phi_column(flow, traj)});
        sidecar["restarts"] = flow.restarts;
    } else {
        traj = integrate_riccati_direct(inst.cs, inst.Y0, opts);
        extra.push_back({"lambda_min_gap", as_optional(eigen_monitor(traj, inst.lambda))});
        extra.push_back({"residual", residual_series(traj, inst.cs)});
        if (a.method == "both") {
            auto [flow, radon] = integrate_linear_system(inst.cs, inst.Y0, opts);
            extra.push_back({"det_phi_abs", det_phi_column(flow, traj)});
            extra.push_back({"radon_discrepancy", discrepancy_column(traj, radon)});
            double worst = 0.0;
            bool any = false;
            for (const auto& v : extra.back().values)
                if (v) {
                    worst = std::max(worst, *v);
                    any = true;
                }
            if (any) discrepancy = worst;
            sidecar["radon"] = trajectory_status(radon);
            sidecar["radon"]["restarts"] = flow.restarts;
        }
    }
    sidecar.update(trajectory_status(traj));
    if (a.method == "both")
        sidecar["max_discrepancy"] = discrepancy ? json(*discrepancy) : json(nullptr);

    if (a.out.empty()) {
        io::write_trajectory_csv(out, traj, extra);
        err << sidecar.dump() << '\n';
    } else {
        std::ofstream csv(a.out);
        if (!csv) throw InvalidArgument(a.out + ": cannot open for writing");
        io::write_trajectory_csv(csv, traj, extra);
        std::ofstream side(a.out + ".json");
        if (!side) throw InvalidArgument(a.out + ".json: cannot open for writing");
        side << sidecar.dump(2) << '\n';
        out << "status " << to_string(traj.status);
        if (traj.t_escape) out << " t_escape " << *traj.t_escape;
        out << '\n';
    }
    if (a.method == "both") {
        out << "max_discrepancy ";
        if (discrepancy)
            out << *discrepancy;
        else
            out << "nan";
        out << '\n';
    }
    return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    const Instance inst = io::read_instance(a.instance);
    std::ifstream in(a.csv);
    if (!in) throw InvalidArgument(a.csv + ": cannot open file");
    Trajectory traj = io::read_trajectory_csv(in);
    if (traj.size() > 0 && traj.dim() != inst.cs.n()) {
        std::ostringstream os;
        os << "trajectory has n = " << traj.dim() << " but the instance has n = " << inst.cs.n();
        throw DimensionError(os.str());
    }
    for (double t : traj.times)
        if (!inst.lambda.covers(t, t)) throw DomainError("trajectory time outside the instance span");

    const BoundReport bound = verify_hermitian_bound(traj, inst.lambda, a.tol);
    json j = io::to_json(bound);
    if (traj.size() >= 3) {
        j["max_residual"] = residual_check(traj, inst.cs);
    } else {
        j["max_residual"] = nullptr;
        err << "warning: fewer than 3 samples, residual check skipped\n";
    }
    out << j.dump(2) << '\n';
    return bound.pass ? kExitOk : kExitFailed;
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
    InstanceSpec spec;
    spec.target = parse_target(a.target);
    if (a.n < 1 || a.n > kMaxDimension) throw InvalidArgument("--n: out of range");
    spec.n = static_cast<Eigen::Index>(a.n);
    spec.seed = a.seed;
    spec.horizon = a.horizon;
    spec.scale = a.scale;
    spec.blowup_rate = a.rate;
    spec.complex_gauge = a.complex_gauge;
    if (a.variation == "constant")
        spec.variation = Variation::constant;
    else if (a.variation == "polynomial")
        spec.variation = Variation::polynomial;
    else
        throw InvalidArgument("--variation: unknown value '" + a.variation + "'");

    const Instance inst = generate(spec);
    io::write_instance(a.out, inst);

    const GridSpec grid = GridSpec::over(inst.cs, inst.grid_points);
    Criterion c = Criterion::theorem_3_1;
    if (spec.target == Target::theorem_1_1) c = Criterion::theorem_1_1;
    if (spec.target == Target::corollary_3_2) c = Criterion::corollary_3_2;
    const CriterionReport report = run_criterion(inst, c, grid, {});
    out << to_string(c) << ' ' << (report.holds ? "holds" : "fails");
    for (const auto& rec : report.conditions)
        if (!rec.passed) out << " [" << rec.name << " at t=" << rec.worst_time << ']';
    out << '\n';
    return kExitOk;
}

int cmd_catalog(const CatalogArgs& a, std::ostream& out) {
    if (a.name.empty()) {
        for (const auto& e : canonical_catalog()) out << e.name << "  " << e.descriptor << '\n';
        return kExitOk;
    }
    const CatalogEntry e = catalog_entry(a.name);
    if (a.out.empty())
        out << io::to_json(e.instance).dump(2) << '\n';
    else
        io::write_instance(a.out, e.instance);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Riccati equation solvability checker and integrator"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* c = app.add_subcommand("check", "Check a solvability criterion on an instance");
    c->add_option("instance", check.instance, "Instance JSON file")->required();
    c->add_option("--criterion", check.criterion, "theorem3.1 | cor3.1 | cor3.2 | theorem1.1")
        ->capture_default_str();
    c->add_option("--tol", check.tol, "Tolerance for every band")->capture_default_str();
    c->add_option("--grid", check.grid, "Grid points (default: from the instance)");

    IntegrateArgs integ;
    auto* i = app.add_subcommand("integrate", "Integrate the equation");
    i->add_option("instance", integ.instance, "Instance JSON file")->required();
    i->add_option("--method", integ.method, "direct | radon | both | lyapunov")
        ->capture_default_str();
    i->add_option("--out", integ.out, "CSV path; the status goes to <out>.json");
    i->add_option("--samples", integ.samples, "Uniform output samples")->capture_default_str();
    i->add_option("--rtol", integ.rtol)->capture_default_str();
    i->add_option("--atol", integ.atol)->capture_default_str();

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Check Y + Y* >= Lambda + Lambda* along a trajectory");
    v->add_option("instance", ver.instance, "Instance JSON file")->required();
    v->add_option("csv", ver.csv, "Trajectory CSV")->required();
    v->add_option("--tol", ver.tol)->capture_default_str();

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a seeded instance");
    g->add_option("--target", gen.target,
                  "satisfying | violating_III | blowup | theorem_1_1 | corollary_3_2")
        ->capture_default_str();
    g->add_option("--n", gen.n)->capture_default_str();
    g->add_option("--seed", gen.seed)->capture_default_str();
    g->add_option("--out", gen.out, "Output path")->required();
    g->add_option("--horizon", gen.horizon)->capture_default_str();
    g->add_option("--scale", gen.scale)->capture_default_str();
    g->add_option("--rate", gen.rate, "c in S = -c I for blowup")->capture_default_str();
    g->add_option("--variation", gen.variation, "constant | polynomial")->capture_default_str();
    g->add_flag("--complex-gauge", gen.complex_gauge, "Draw mu / nu complex");

    CatalogArgs cat;
    auto* k = app.add_subcommand("catalog", "List or export closed-form instances");
    k->add_option("--name", cat.name);
    k->add_option("--out", cat.out);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    try {
        if (c->parsed()) return cmd_check(check, out);
        if (i->parsed()) return cmd_integrate(integ, out, err);
        if (v->parsed()) return cmd_verify(ver, out, err);
        if (g->parsed()) return cmd_gen(gen, out);
        if (k->parsed()) return cmd_catalog(cat, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

} // namespace riccati
