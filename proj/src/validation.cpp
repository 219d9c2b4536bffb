#include "qdot/validation.hpp"

#include "qdot/errors.hpp"
#include "qdot/heun_analytic.hpp"
#include "qdot/numerov.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>

#ifndef QDOT_EXPECTATIONS_PATH
#define QDOT_EXPECTATIONS_PATH "data/expectations.txt"
#endif

namespace qdot::validation {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double inf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::string_view where) {
    const std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw ArgumentError(fmt::format("{}: cannot read number '{}'", where, text));
    }
    return v;
}

ExpectedValue parse_value(std::string_view token, std::string_view where) {
    ExpectedValue v;
    v.text = std::string(token);
    if (token == "-") {
        v.dash = true;
        v.value = nan;
        return v;
    }
    if (token.starts_with("sqrt(") && token.ends_with(")")) {
        v.value = std::sqrt(parse_number(trim(token.substr(5, token.size() - 6)), where));
        return v;
    }
    v.value = parse_number(token, where);
    return v;
}

// Absolute tolerance for agreement "to the printed digits", never looser than 4 decimals.
double printed_tolerance(const ExpectedValue& v) {
    return 0.5 * std::pow(10.0, -std::max(v.decimals(), 4));
}

int index_of_n(const std::string& key, const std::string& prefix) {
    const auto rest = key.substr(prefix.size() + 3);
    return std::stoi(rest);
}

std::vector<NumericalEigenstate> spectrum(PotentialKind kind, double omega, int l, double eta_min,
                                          double eta_max, int max_states) {
    numerov::SpectrumRequest request;
    request.problem = RadialProblem::with_defaults(kind, omega, l);
    request.eta_min = eta_min;
    request.eta_max = eta_max;
    request.max_states = max_states;
    return numerov::find_eigenvalues(request);
}

double state_eta(const std::vector<NumericalEigenstate>& states, std::size_t k) {
    return k < states.size() ? states[k].eta : nan;
}

std::size_t nearest_root(const std::vector<double>& roots, double target, bool by_omega) {
    std::size_t best = 0;
    double best_err = inf;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double value = by_omega ? 1.0 / (roots[i] * roots[i]) : roots[i];
        const double err = std::abs(value - target);
        if (err < best_err) {
            best_err = err;
            best = i;
        }
    }
    return best;
}

} // namespace

int ExpectedValue::decimals() const {
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        return 0;
    }
    int d = 0;
    for (std::size_t i = dot + 1; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        ++d;
    }
    return d;
}

Expectations Expectations::parse(std::istream& in, std::string_view source) {
    Expectations e;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = trim(line);
        if (s.empty() || s.front() == '#') {
            continue;
        }
        const auto where = fmt::format("{}:{}", source, lineno);
        const auto eq = s.find('=');
        // keys themselves contain '=' (n=3), so split at " = "
        const auto sep = s.find(" = ");
        if (eq == std::string_view::npos || sep == std::string_view::npos) {
            throw ArgumentError(fmt::format("{}: expected 'key = values'", where));
        }
        const std::string key(trim(s.substr(0, sep)));
        std::vector<ExpectedValue> values;
        std::string_view rest = s.substr(sep + 3);
        while (true) {
            const auto comma = rest.find(',');
            const auto token = trim(rest.substr(0, comma));
            if (token.empty()) {
                throw ArgumentError(fmt::format("{}: empty value in '{}'", where, key));
            }
            values.push_back(parse_value(token, where));
            if (comma == std::string_view::npos) {
                break;
            }
            rest = rest.substr(comma + 1);
        }
        if (!e.values_.emplace(key, std::move(values)).second) {
            throw ArgumentError(fmt::format("{}: duplicate key '{}'", where, key));
        }
    }
    return e;
}

Expectations Expectations::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError(fmt::format("cannot open expectations file '{}'", path.string()));
    }
    return parse(in, path.string());
}

std::filesystem::path Expectations::bundled_path() { return QDOT_EXPECTATIONS_PATH; }

const Expectations& Expectations::bundled() {
    static const Expectations e = load(bundled_path());
    return e;
}

const std::vector<ExpectedValue>& Expectations::at(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw ArgumentError(fmt::format("expectations: missing key '{}'", key));
    }
    return it->second;
}

double Expectations::scalar(const std::string& key) const {
    const auto& v = at(key);
    if (v.size() != 1 || v.front().dash) {
        throw ArgumentError(fmt::format("expectations: '{}' must hold one number", key));
    }
    return v.front().value;
}

std::vector<std::string> Expectations::indexed_keys(const std::string& prefix) const {
    const std::string head = prefix + "/n=";
    std::vector<std::string> keys;
    for (const auto& [key, _] : values_) {
        if (key.starts_with(head)) {
            keys.push_back(key);
        }
    }
    std::ranges::stable_sort(keys, [&](const std::string& a, const std::string& b) {
        return index_of_n(a, prefix) < index_of_n(b, prefix);
    });
    return keys;
}

std::string_view to_string(Check check) {
    switch (check) {
    case Check::Relative:
        return "relative";
    case Check::Absolute:
        return "absolute";
    case Check::AtLeast:
        return "at-least";
    case Check::AtMost:
        return "at-most";
    }
    return "?";
}

std::string_view to_string(RowStatus status) {
    switch (status) {
    case RowStatus::Pass:
        return "pass";
    case RowStatus::Fail:
        return "fail";
    case RowStatus::Annotated:
        return "annotated";
    case RowStatus::Info:
        return "info";
    }
    return "?";
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
    case Outcome::Pass:
        return "pass";
    case Outcome::Fail:
        return "fail";
    case Outcome::Inconclusive:
        return "inconclusive";
    }
    return "?";
}

double relative_error(double expected, double computed) {
    return std::abs(computed - expected) / std::max(std::abs(expected), 1e-12);
}

bool within(Check check, double expected, double computed, double tolerance) {
    if (std::isnan(computed)) {
        return false;
    }
    switch (check) {
    case Check::Relative:
        return std::abs(computed - expected) <= tolerance * std::max(std::abs(expected), 1e-12);
    case Check::Absolute:
        return std::abs(computed - expected) <= tolerance;
    case Check::AtLeast:
        return computed >= expected;
    case Check::AtMost:
        return computed <= expected;
    }
    return false;
}

ReportRow& ComparisonReport::add(std::string inputs, double expected, double computed, double tolerance,
                                 Check check, std::string note) {
    ReportRow row;
    row.inputs = std::move(inputs);
    row.expected = expected;
    row.computed = computed;
    row.rel_error = relative_error(expected, computed);
    row.tolerance = tolerance;
    row.check = check;
    row.status = within(check, expected, computed, tolerance) ? RowStatus::Pass : RowStatus::Fail;
    row.note = std::move(note);
    rows.push_back(std::move(row));
    return rows.back();
}

ReportRow& ComparisonReport::add_info(std::string inputs, double expected, double computed, std::string note) {
    auto& row = add(std::move(inputs), expected, computed, 0.0, Check::Absolute, std::move(note));
    row.status = RowStatus::Info;
    return row;
}

ReportRow& ComparisonReport::add_annotated(std::string inputs, double expected, double computed,
                                           double tolerance, Check check, std::string note) {
    auto& row = add(std::move(inputs), expected, computed, tolerance, check, std::move(note));
    if (row.status == RowStatus::Fail) {
        row.status = RowStatus::Annotated;
    }
    return row;
}

int ComparisonReport::count(RowStatus status) const {
    return static_cast<int>(std::ranges::count_if(rows, [&](const ReportRow& r) { return r.status == status; }));
}

Outcome ComparisonReport::outcome() const {
    if (inconclusive) {
        return Outcome::Inconclusive;
    }
    return count(RowStatus::Fail) > 0 ? Outcome::Fail : Outcome::Pass;
}

ComparisonReport reproduce_table1(const Expectations& e) {
    ComparisonReport report;
    report.label = "table1";
    for (const auto& key : e.indexed_keys("table1")) {
        int n = 0;
        int l = 0;
        if (std::sscanf(key.c_str(), "table1/n=%d/l=%d", &n, &l) != 2) {
            throw ArgumentError(fmt::format("expectations: bad key '{}'", key));
        }
        const auto roots = heun::admissible_roots(n, l).roots;
        for (const auto& printed : e.at(key)) {
            const bool fine = printed.decimals() >= 6 || printed.text.starts_with("sqrt");
            const double tol = fine ? 1e-6 : 5e-4;
            const double computed = roots.empty() ? nan : roots[nearest_root(roots, printed.value, false)];
            report.add(fmt::format("n={} l={} t={}", n, l, printed.text), printed.value, computed, tol,
                       Check::Absolute);
        }
    }
    return report;
}

ComparisonReport reproduce_polynomials(const Expectations& e) {
    ComparisonReport report;
    report.label = "polynomials";
    for (const auto& key : e.indexed_keys("ypoly")) {
        const int n = index_of_n(key, "ypoly");
        const auto& exponent = e.at(fmt::format("uexp/n={}", n)).front();
        const auto roots = heun::admissible_roots(n, 0).roots;
        // the printed exponent omega/2 identifies which admissible root was used
        const std::size_t index = nearest_root(roots, 2.0 * exponent.value, true);
        const auto solution = heun::build_solution(n, 0, index);
        const auto note = fmt::format("root index {} (t={:.7f})", index, solution.t);

        const auto& printed = e.at(key);
        for (std::size_t p = 0; p < printed.size(); ++p) {
            const double computed = p < solution.y_coeffs.size() ? solution.y_coeffs[p] : 0.0;
            report.add(fmt::format("y_{}0 r^{}", n, p), printed[p].value, computed, printed_tolerance(printed[p]),
                       Check::Absolute, p == 0 ? note : std::string{});
        }
        report.add(fmt::format("u_{}0 exponent", n), exponent.value, solution.gaussian_exponent(),
                   printed_tolerance(exponent), Check::Absolute, note);
    }
    return report;
}

ComparisonReport reproduce_table2(const Expectations& e) {
    ComparisonReport report;
    report.label = "table2";
    const double omega = e.scalar("table2/omega");
    const auto keys = e.indexed_keys("table2");
    double top = 0.0;
    for (const auto& key : keys) {
        top = std::max(top, e.at(key).at(1).value);
    }
    const auto states = spectrum(PotentialKind::Coulomb, omega, 0, 0.0, 1.2 * top, static_cast<int>(keys.size()));

    for (std::size_t k = 0; k < keys.size(); ++k) {
        const int n = index_of_n(keys[k], "table2");
        const auto& row = e.at(keys[k]);
        report.add(fmt::format("n={} numerical", n), row.at(1).value, state_eta(states, k), 0.01, Check::Relative,
                   fmt::format("state {} of the Numerov spectrum", k));
        const double analytic = heun::quantized_energy(n, 0, omega);
        auto& a = report.add_annotated(fmt::format("n={} analytical", n), row.at(0).value, analytic, 1e-6,
                                       Check::Relative, fmt::format("2(n+1)omega = {:.6g}", analytic));
        if (a.status == RowStatus::Annotated) {
            a.note += "; printed value treated as a misprint";
        }
    }
    return report;
}

ComparisonReport reproduce_ladder(const Expectations& e) {
    ComparisonReport report;
    report.label = "ladder";
    const double omega = e.scalar("table2/omega");
    const auto keys = e.indexed_keys("table2");
    double top = 0.0;
    for (const auto& key : keys) {
        top = std::max(top, e.at(key).at(1).value);
    }
    const auto states = spectrum(PotentialKind::Coulomb, omega, 0, 0.0, 1.2 * top, static_cast<int>(keys.size()));

    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t k = 0; k < keys.size() && k < states.size(); ++k) {
        x.push_back(static_cast<double>(index_of_n(keys[k], "table2")));
        y.push_back(states[k].eta);
    }
    const auto fit = x.size() >= 2 ? fit_line(x, y) : LineFit{nan, nan, nan};
    report.add("R^2 of eta against n", 0.999, fit.r_squared, 0.0, Check::AtLeast,
               fmt::format("{} states", x.size()));
    report.add("slope per unit n", 2.0 * omega, fit.slope, 0.10, Check::Relative);
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const int n = index_of_n(keys[k], "table2");
        const double eta = state_eta(states, k);
        const double mapped = std::isnan(eta) ? nan : std::round(eta / (2.0 * omega) - 1.0);
        report.add(fmt::format("state {} mapped n", k), n, mapped, 0.0, Check::Absolute,
                   fmt::format("eta={:.6g}", eta));
    }
    return report;
}

ComparisonReport reproduce_table3(const Expectations& e) {
    ComparisonReport report;
    report.label = "table3";
    for (const auto& key : e.indexed_keys("table3")) {
        const int n = index_of_n(key, "table3");
        const auto& row = e.at(key);
        const auto& omega_printed = row.at(0);
        const auto roots = heun::admissible_roots(n, 0).roots;
        const auto solution = heun::build_solution(n, 0, nearest_root(roots, omega_printed.value, true));

        report.add(fmt::format("n={} omega", n), omega_printed.value, solution.omega,
                   0.5 * std::pow(10.0, -omega_printed.decimals()), Check::Absolute,
                   fmt::format("omega = 1/t^2, t={:.7f}", solution.t));

        const double analytic = heun::quantized_energy(n, 0, omega_printed.value);
        auto& a = report.add_annotated(fmt::format("n={} analytical", n), row.at(1).value, analytic, 1e-6,
                                       Check::Relative, "2(n+1)omega at the printed omega");
        if (a.status == RowStatus::Annotated) {
            a.note += fmt::format("; at the exact omega it is {:.6g}; printed value treated as a misprint",
                                  solution.eta);
        }

        const auto states = spectrum(PotentialKind::Coulomb, solution.omega, 0, 0.8 * solution.eta,
                                     1.2 * solution.eta, 64);
        double nearest = nan;
        for (const auto& s : states) {
            if (std::isnan(nearest) || std::abs(s.eta - solution.eta) < std::abs(nearest - solution.eta)) {
                nearest = s.eta;
            }
        }
        report.add(fmt::format("n={} numerical", n), row.at(2).value, nearest, 0.03, Check::Relative,
                   fmt::format("exact eta {:.6g}", solution.eta));
    }
    return report;
}

ComparisonReport reproduce_table4(const Expectations& e) {
    ComparisonReport report;
    report.label = "table4";
    const double omega = e.scalar("table4/omega");
    const double ceiling = e.scalar("table4/log_ceiling");
    const auto keys = e.indexed_keys("table4");
    double top = 0.0;
    for (const auto& key : keys) {
        top = std::max(top, e.at(key).at(0).value);
    }
    const auto coulomb = spectrum(PotentialKind::Coulomb, omega, 0, 0.0, 1.2 * top, static_cast<int>(keys.size()));
    const auto log = spectrum(PotentialKind::Log, omega, 0, 0.0, 2.0 * ceiling, 64);

    for (std::size_t k = 0; k < keys.size(); ++k) {
        const int n = index_of_n(keys[k], "table4");
        const auto& row = e.at(keys[k]);
        report.add(fmt::format("n={} 1/r", n), row.at(0).value, state_eta(coulomb, k), 0.01, Check::Relative);
        const double eta = state_eta(log, k);
        if (row.at(1).dash) {
            report.add(fmt::format("n={} ln r", n), ceiling, std::isnan(eta) ? inf : eta, 0.0, Check::AtLeast,
                       fmt::format("no ln r state {} below {} Ha", k, ceiling));
        } else {
            report.add(fmt::format("n={} ln r", n), row.at(1).value, eta, 0.02, Check::Relative,
                       fmt::format("state {} of the ln r spectrum", k));
        }
    }
    return report;
}

namespace {

RadialProblem cutoff_problem(PotentialKind kind, double omega, int l, double r_min) {
    auto p = RadialProblem::with_defaults(kind, omega, l);
    p.inner = InnerBoundary::Cutoff;
    p.r_min = r_min;
    return p;
}

// Lowest l = 0 state: NaN when it lies below the searched floor, +inf when there is none.
double ground_state(PotentialKind kind, double omega, double r_min, double eta_floor) {
    const auto p = cutoff_problem(kind, omega, 0, r_min);
    const auto b = numerov::bound_states(p, eta_floor);
    if (numerov::Shooter(p).count_nodes(b.eta_floor) > 0) {
        return nan;
    }
    return b.states.empty() ? inf : b.states.front().eta;
}

// NaN ranks below every energy.
bool below(double ground, double target) { return std::isnan(ground) || ground < target; }

int negative_count(const RadialProblem& p, double eta_floor) {
    const numerov::Shooter shooter(p);
    const double floor = std::max(eta_floor, shooter.stable_eta_floor());
    if (!(floor < 0.0)) {
        return 0;
    }
    numerov::SpectrumRequest request{p, floor, 0.0, 64};
    const auto states = numerov::find_eigenvalues(request);
    return static_cast<int>(std::ranges::count_if(states, [](const auto& s) { return s.eta < 0.0; }));
}

} // namespace

ComparisonReport reproduce_bound_states(const Expectations& e, const CalibrationOptions& options) {
    ComparisonReport report;
    report.label = "bound";
    const double omega = e.scalar("bound/omega");
    const double target = e.scalar("bound/coulomb");
    const double log_target = e.scalar("bound/log");
    const double hydrogen = e.scalar("reference/hydrogen");

    const int points = std::max(options.points, 2);
    const double log_lo = std::log(options.r_min_lo);
    const double log_hi = std::log(options.r_min_hi);
    for (int k = 0; k < points; ++k) {
        const double r = std::exp(log_lo + (log_hi - log_lo) * k / (points - 1));
        report.scan.push_back({r, ground_state(PotentialKind::Coulomb, omega, r, options.eta_floor)});
    }

    std::optional<std::pair<double, double>> bracket;
    for (std::size_t k = 0; k + 1 < report.scan.size(); ++k) {
        if (below(report.scan[k].ground, target) && !below(report.scan[k + 1].ground, target)) {
            bracket = {std::log(report.scan[k].r_min), std::log(report.scan[k + 1].r_min)};
            break;
        }
    }

    double r_cal = default_r_min;
    if (bracket) {
        auto [a, b] = *bracket;
        for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
            const double m = 0.5 * (a + b);
            const double g = ground_state(PotentialKind::Coulomb, omega, std::exp(m), options.eta_floor);
            if (below(g, target)) {
                a = m;
            } else {
                b = m;
            }
            if (std::isfinite(g) && relative_error(target, g) < 1e-7) {
                a = b = m;
            }
        }
        r_cal = std::exp(0.5 * (a + b));
        report.calibrated_r_min = r_cal;
    } else {
        report.inconclusive = true;
    }
    const auto cutoff_note = fmt::format("cutoff inner boundary, r_min={:.6g}", r_cal);

    const double coulomb = ground_state(PotentialKind::Coulomb, omega, r_cal, options.eta_floor);
    const double log = ground_state(PotentialKind::Log, omega, r_cal, options.eta_floor);
    if (bracket) {
        report.add("1/r ground state", target, coulomb, 1e-3, Check::Relative, "calibration target; " + cutoff_note);
        report.add("ln r ground state", log_target, log, 0.2, Check::Relative, cutoff_note);
        report.add_info("ln r minus 1/r ground", log_target - target, log - coulomb, cutoff_note);
        report.add_info("1/r ground over E_H", target / hydrogen, coulomb / hydrogen, "E_H = -0.5 Ha reference");
    }

    for (auto kind : {PotentialKind::Coulomb, PotentialKind::Log}) {
        const int count = negative_count(cutoff_problem(kind, omega, 0, r_cal), options.eta_floor);
        report.add(fmt::format("{} l=0 negative states", to_string(kind)), 1, count, 0.0, Check::AtLeast,
                   cutoff_note);
    }
    for (auto kind : {PotentialKind::Coulomb, PotentialKind::Log}) {
        for (int l : {1, 2}) {
            report.add(fmt::format("{} l={} negative states", to_string(kind), l), 0,
                       negative_count(cutoff_problem(kind, omega, l, r_cal), options.eta_floor), 0.0, Check::AtMost,
                       cutoff_note);
            report.add(fmt::format("{} l={} negative states, regular", to_string(kind), l), 0,
                       negative_count(RadialProblem::with_defaults(kind, omega, l), options.eta_floor), 0.0,
                       Check::AtMost, "regular inner boundary");
        }
    }
    report.add_info("1/r l=0 negative states, regular", 0,
                    negative_count(RadialProblem::with_defaults(PotentialKind::Coulomb, omega, 0), options.eta_floor),
                    "regular inner boundary: the l=0 negative states above come from the cutoff");
    return report;
}

double overlap(const RadialWaveFunction& a, const RadialWaveFunction& b) {
    for (const auto* w : {&a, &b}) {
        if (w->grid.size() != w->values.size() || w->grid.size() < 3) {
            throw ArgumentError("overlap: each wave function needs >= 3 samples and matching lengths");
        }
    }
    if (a.grid.back() <= b.grid.front() || b.grid.back() <= a.grid.front()) {
        throw ArgumentError("overlap: the two grids do not overlap");
    }
    std::vector<double> product(a.grid.size());
    if (a.grid == b.grid) {
        for (std::size_t i = 0; i < product.size(); ++i) {
            product[i] = a.values[i] * b.values[i];
        }
        return std::abs(simpson(a.grid, product));
    }

    const double h = (b.grid.back() - b.grid.front()) / static_cast<double>(b.grid.size() - 1);
    for (std::size_t i = 1; i < b.grid.size(); ++i) {
        if (std::abs(b.grid[i] - b.grid[i - 1] - h) > 1e-9 * std::max(1.0, h)) {
            throw ArgumentError("overlap: resampling needs a uniform grid for the second argument");
        }
    }
    const boost::math::interpolators::cardinal_cubic_b_spline<double> spline(b.values.begin(), b.values.end(),
                                                                             b.grid.front(), h);
    for (std::size_t i = 0; i < product.size(); ++i) {
        const double r = a.grid[i];
        const double bv = (r < b.grid.front() || r > b.grid.back()) ? 0.0 : spline(r);
        product[i] = a.values[i] * bv;
    }
    return std::abs(simpson(a.grid, product));
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ArgumentError("fit_line: need two or more (x, y) pairs");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw ArgumentError("fit_line: x values are all equal");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    return fit;
}

} // namespace qdot::validation
