// qdot: analytic and Numerov spectra of the planar two-electron quantum dot.
//
// Exit codes: 0 ok, 1 validation rows failed, 2 usage, 3 inconclusive, 4 numerical failure.

#include "qdot/errors.hpp"
#include "qdot/heun_analytic.hpp"
#include "qdot/numerov.hpp"
#include "qdot/output.hpp"
#include "qdot/validation.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace qdot;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, inconclusive = 3, numerical = 4 };

struct GridFlags {
    std::optional<double> r_min;
    std::optional<double> r_max;
    std::optional<long long> steps;
    std::optional<double> tol;

    void attach(CLI::App* app) {
        app->add_option("--rmin", r_min, "inner grid radius (Bohr)")->envname("QDOT_RMIN");
        app->add_option("--rmax", r_max, "outer grid radius (Bohr), default 40/sqrt(omega)")->envname("QDOT_RMAX");
        app->add_option("--steps", steps, "grid points")->envname("QDOT_STEPS");
        app->add_option("--tol", tol, "eigenvalue tolerance (Ha)")->envname("QDOT_TOL");
    }

    RadialProblem problem(PotentialKind kind, double omega, int l) const {
        auto p = RadialProblem::with_defaults(kind, omega, l);
        if (r_min) {
            p.r_min = *r_min;
        }
        if (r_max) {
            p.r_max = *r_max;
        }
        if (steps) {
            if (*steps < 0) {
                throw ArgumentError(fmt::format("steps must be >= 1000, got {}", *steps));
            }
            p.steps = static_cast<std::size_t>(*steps);
        }
        p.validate();
        return p;
    }

    double tolerance() const { return tol.value_or(default_tol); }
};

std::vector<std::pair<std::string, std::string>> problem_metadata(const RadialProblem& p, double tol) {
    return {{"potential", std::string(to_string(p.potential))},
            {"omega_ha", output::format_number(p.omega)},
            {"l", std::to_string(p.l)},
            {"r_min_bohr", output::format_number(p.r_min)},
            {"r_max_bohr", output::format_number(p.r_max)},
            {"steps", std::to_string(p.steps)},
            {"tol_ha", output::format_number(tol)},
            {"inner", std::string(to_string(p.inner))}};
}

void emit(const std::vector<output::Table>& tables, const std::string& format) {
    if (format == "json") {
        output::write_json(std::cout, tables);
        return;
    }
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i) {
            std::cout << '\n';
        }
        output::write_csv(std::cout, tables[i]);
    }
}

output::Table make_table(output::RecordKind kind, std::vector<std::pair<std::string, std::string>> metadata,
                         std::vector<output::OutputRecord> records) {
    output::Table t{kind, std::move(metadata), {}};
    for (auto& r : records) {
        t.add(std::move(r));
    }
    return t;
}

PotentialKind potential_from(const std::string& name) {
    const auto kind = parse_potential(name);
    if (!kind) {
        throw ArgumentError(fmt::format("unknown potential '{}' (coulomb, log, none)", name));
    }
    return *kind;
}

InnerBoundary inner_from(const std::string& name) {
    const auto inner = parse_inner_boundary(name);
    if (!inner) {
        throw ArgumentError(fmt::format("unknown inner boundary '{}' (regular, cutoff)", name));
    }
    return *inner;
}

std::string polynomial_text(const std::vector<double>& c) {
    std::string s = output::format_number(c.front());
    for (std::size_t p = 1; p < c.size(); ++p) {
        s += fmt::format(" {} {} r{}", c[p] < 0 ? '-' : '+', output::format_number(std::abs(c[p])),
                         p > 1 ? fmt::format("^{}", p) : "");
    }
    return s;
}

struct PolyArgs {
    int n = 0;
    int l = 0;
    std::optional<int> root_index;
    bool samples = false;
    std::size_t stride = 10;
};

int run_poly(const PolyArgs& a, const GridFlags& grid, const std::string& format) {
    const auto roots = heun::admissible_roots(a.n, a.l);
    if (a.root_index && (*a.root_index < 0 || static_cast<std::size_t>(*a.root_index) >= roots.roots.size())) {
        throw ArgumentError(fmt::format("--root-index {} out of range, n={} l={} has {} positive roots", *a.root_index,
                                        a.n, a.l, roots.roots.size()));
    }
    std::vector<heun::HeunSolution> solutions;
    for (std::size_t k = 0; k < roots.roots.size(); ++k) {
        if (!a.root_index || static_cast<std::size_t>(*a.root_index) == k) {
            solutions.push_back(heun::build_solution(a.n, a.l, k));
        }
    }

    std::vector<output::Table> tables;
    if (format == "json") {
        nlohmann::json doc;
        doc["n"] = a.n;
        doc["l"] = a.l;
        doc["asymptotic_root"] = roots.asymptotic;
        doc["roots"] = nlohmann::json::array();
        for (std::size_t k = 0; k < solutions.size(); ++k) {
            const auto& s = solutions[k];
            nlohmann::json r;
            r["index"] = a.root_index.value_or(static_cast<int>(k));
            r["t"] = std::stod(output::format_number(s.t));
            r["omega_ha"] = std::stod(output::format_number(s.omega));
            r["eta_ha"] = std::stod(output::format_number(s.eta));
            r["gaussian_exponent"] = std::stod(output::format_number(s.gaussian_exponent()));
            r["y_coeffs"] = nlohmann::json::array();
            for (double c : s.y_coeffs) {
                r["y_coeffs"].push_back(std::stod(output::format_number(c)));
            }
            doc["roots"].push_back(std::move(r));
        }
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << fmt::format("n={} l={}\n", a.n, a.l);
        if (roots.asymptotic) {
            std::cout << "asymptotic root: t = 0 (omega -> infinity, non-interacting limit, Laguerre solution)\n";
        }
        for (std::size_t k = 0; k < solutions.size(); ++k) {
            const auto& s = solutions[k];
            std::cout << fmt::format("root {}: t={} omega={} Ha eta={} Ha\n", a.root_index.value_or(static_cast<int>(k)),
                                     output::format_number(s.t), output::format_number(s.omega),
                                     output::format_number(s.eta));
            std::cout << fmt::format("  y(r) = {}\n", polynomial_text(s.y_coeffs));
            std::cout << fmt::format("  u(r) = r^{} exp(-{} r^2) y(r)\n", output::format_number(s.l + 0.5),
                                     output::format_number(s.gaussian_exponent()));
        }
    }

    if (a.samples) {
        for (std::size_t k = 0; k < solutions.size(); ++k) {
            const auto& s = solutions[k];
            const auto p = grid.problem(PotentialKind::Coulomb, s.omega, s.l);
            const auto grid_r = p.grid();
            NumericalEigenstate state{s.eta, 0, heun::sample_u(s, grid_r)};
            state.nodes = count_sign_changes(state.wave.values);
            auto meta = problem_metadata(p, grid.tolerance());
            meta.emplace_back("source", "analytic");
            meta.emplace_back("t", output::format_number(s.t));
            tables.push_back(make_table(output::RecordKind::WavefunctionSample, std::move(meta),
                                        output::wavefunction_records(std::span(&state, 1), a.stride)));
        }
        if (format != "json") {
            std::cout << '\n';
        }
        emit(tables, format);
    }
    return ok;
}

struct SpectrumArgs {
    std::string potential;
    double omega = 0.0;
    int l = 0;
    double eta_min = 0.0;
    double eta_max = 0.0;
    int max_states = 64;
    std::string inner = "regular";
    bool wavefunctions = false;
    std::size_t stride = 10;
};

int run_spectrum(const SpectrumArgs& a, const GridFlags& grid, const std::string& format) {
    numerov::SpectrumRequest request;
    request.problem = grid.problem(potential_from(a.potential), a.omega, a.l);
    request.problem.inner = inner_from(a.inner);
    request.eta_min = a.eta_min;
    request.eta_max = a.eta_max;
    request.max_states = a.max_states;
    request.tol = grid.tolerance();
    const auto states = numerov::find_eigenvalues(request);
    if (states.empty()) {
        std::cerr << fmt::format("no eigenvalue in [{}, {}] Ha\n", a.eta_min, a.eta_max);
    }

    auto meta = problem_metadata(request.problem, request.tol);
    std::vector<output::Table> tables;
    tables.push_back(make_table(output::RecordKind::Eigenvalue, meta, output::eigenvalue_records(states)));
    if (a.wavefunctions) {
        tables.push_back(
            make_table(output::RecordKind::WavefunctionSample, meta, output::wavefunction_records(states, a.stride)));
    }
    emit(tables, format);
    return ok;
}

struct BoundArgs {
    std::string potential;
    double omega = 0.01;
    double eta_floor = -1e4;
    std::string inner = "cutoff";
    std::optional<int> l;
    std::size_t stride = 10;
};

int run_bound(const BoundArgs& a, const GridFlags& grid, const std::string& format) {
    if (a.l) {
        throw ArgumentError("bound takes no --l: bound states exist only for l = 0, since for l >= 1 the "
                            "centrifugal term makes the effective potential repulsive");
    }
    auto p = grid.problem(potential_from(a.potential), a.omega, 0);
    p.inner = inner_from(a.inner);
    const auto bound = numerov::bound_states(p, a.eta_floor, grid.tolerance());
    if (bound.states.empty()) {
        std::cerr << fmt::format("no negative-energy state above {} Ha\n", bound.eta_floor);
    }

    auto meta = problem_metadata(p, grid.tolerance());
    meta.emplace_back("eta_floor_ha", output::format_number(bound.eta_floor));
    std::vector<output::Table> tables;
    tables.push_back(make_table(output::RecordKind::Eigenvalue, meta, output::eigenvalue_records(bound.states)));
    if (!bound.states.empty()) {
        tables.push_back(make_table(output::RecordKind::WavefunctionSample, meta,
                                    output::wavefunction_records(std::span(bound.states.data(), 1), a.stride)));
    }
    emit(tables, format);
    return ok;
}

int run_validate(const std::string& which, const std::optional<std::string>& path, const std::string& format) {
    const auto expectations =
        validation::Expectations::load(path ? std::filesystem::path(*path) : validation::Expectations::bundled_path());

    std::vector<validation::ComparisonReport> reports;
    const bool all = which == "all";
    if (all || which == "1") {
        reports.push_back(validation::reproduce_table1(expectations));
    }
    if (all || which == "poly") {
        reports.push_back(validation::reproduce_polynomials(expectations));
    }
    if (all || which == "2") {
        reports.push_back(validation::reproduce_table2(expectations));
    }
    if (all || which == "ladder") {
        reports.push_back(validation::reproduce_ladder(expectations));
    }
    if (all || which == "3") {
        reports.push_back(validation::reproduce_table3(expectations));
    }
    if (all || which == "4") {
        reports.push_back(validation::reproduce_table4(expectations));
    }
    if (all || which == "bound") {
        reports.push_back(validation::reproduce_bound_states(expectations));
    }

    std::vector<output::Table> tables;
    bool any_failed = false;
    bool any_inconclusive = false;
    for (const auto& r : reports) {
        std::vector<std::pair<std::string, std::string>> meta{{"report", r.label},
                                                               {"outcome", std::string(to_string(r.outcome()))}};
        if (r.calibrated_r_min) {
            meta.emplace_back("calibrated_r_min_bohr", output::format_number(*r.calibrated_r_min));
        }
        for (std::size_t i = 0; i < r.scan.size(); ++i) {
            meta.emplace_back(fmt::format("scan_{:02}", i), fmt::format("r_min={} ground={}",
                                                                         output::format_number(r.scan[i].r_min),
                                                                         output::format_number(r.scan[i].ground)));
        }
        tables.push_back(make_table(output::RecordKind::ReportRow, std::move(meta), output::report_records(r)));
        any_failed = any_failed || r.count(validation::RowStatus::Fail) > 0;
        any_inconclusive = any_inconclusive || r.inconclusive;
    }
    emit(tables, format);
    if (any_failed) {
        return failed;
    }
    return any_inconclusive ? inconclusive : ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra of the planar two-electron quantum dot (Hartree units, omega = Omega/2)"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "csv";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    GridFlags grid;

    PolyArgs poly;
    auto* poly_cmd = app.add_subcommand("poly", "exact polynomial solutions at the admissible frequencies");
    poly_cmd->add_option("--n", poly.n, "polynomial degree")->required()->check(CLI::Range(1, heun::max_degree));
    poly_cmd->add_option("--l", poly.l, "angular momentum")->check(CLI::NonNegativeNumber)->capture_default_str();
    poly_cmd->add_option("--root-index", poly.root_index, "only this root (ascending order)");
    poly_cmd->add_flag("--samples", poly.samples, "emit u(r) on the grid");
    poly_cmd->add_option("--stride", poly.stride, "write every stride-th grid point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    grid.attach(poly_cmd);

    SpectrumArgs spec;
    auto* spec_cmd = app.add_subcommand("spectrum", "Numerov eigenvalues in an energy window");
    spec_cmd->add_option("--potential", spec.potential, "coulomb, log or none")->required();
    spec_cmd->add_option("--omega", spec.omega, "confinement omega (Ha)")->required();
    spec_cmd->add_option("--l", spec.l, "angular momentum")->check(CLI::NonNegativeNumber)->capture_default_str();
    spec_cmd->add_option("--eta-min", spec.eta_min, "window start (Ha)")->capture_default_str();
    spec_cmd->add_option("--eta-max", spec.eta_max, "window end (Ha)")->required();
    spec_cmd->add_option("--max-states", spec.max_states)->check(CLI::PositiveNumber)->capture_default_str();
    spec_cmd->add_option("--inner", spec.inner, "inner boundary: regular or cutoff")->capture_default_str();
    spec_cmd->add_flag("--wavefunctions", spec.wavefunctions, "also emit normalized u(r) per state");
    spec_cmd->add_option("--stride", spec.stride)->check(CLI::PositiveNumber)->capture_default_str();
    grid.attach(spec_cmd);

    BoundArgs bound;
    auto* bound_cmd = app.add_subcommand("bound", "negative-energy l = 0 states");
    bound_cmd->add_option("--potential", bound.potential, "coulomb, log or none")->required();
    bound_cmd->add_option("--omega", bound.omega, "confinement omega (Ha)")->capture_default_str();
    bound_cmd->add_option("--eta-floor", bound.eta_floor, "lowest energy searched (Ha)")->capture_default_str();
    bound_cmd->add_option("--inner", bound.inner, "inner boundary: cutoff or regular")->capture_default_str();
    bound_cmd->add_option("--l", bound.l, "rejected: bound states need l = 0");
    bound_cmd->add_option("--stride", bound.stride)->check(CLI::PositiveNumber)->capture_default_str();
    grid.attach(bound_cmd);

    std::string table = "all";
    std::optional<std::string> expectations;
    auto* validate_cmd = app.add_subcommand("validate", "compare against the published reference values");
    validate_cmd->add_option("--table", table)
        ->check(CLI::IsMember({"1", "poly", "2", "ladder", "3", "4", "bound", "all"}))
        ->capture_default_str();
    validate_cmd->add_option("--expectations", expectations, "expectations file")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*poly_cmd) {
            return run_poly(poly, grid, format);
        }
        if (*spec_cmd) {
            return run_spectrum(spec, grid, format);
        }
        if (*bound_cmd) {
            return run_bound(bound, grid, format);
        }
        return run_validate(table, expectations, format);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return numerical;
    }
}
