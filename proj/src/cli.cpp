#include "lopa/cli.hpp"

#include "lopa/catalog.hpp"
#include "lopa/document.hpp"
#include "lopa/error.hpp"
#include "lopa/report.hpp"

#include <CLI11.hpp>

#include <functional>
#include <map>
#include <ostream>

namespace lopa::cli {

namespace {

struct Config {
    std::string input;
    bool json_output = false;
    // grids
    double gamma_min = 1e-3;
    int resolution = 24;
    double radial_cutoff = 1e3;
    int radial_samples = 7;
    double gamma_max = 1e3;
    double tangential_max = 10.0;
    int gamma_levels = 13;
    int tangential_levels = 9;
    std::string grid_file;
    // single frequency
    double tau = 0.0;
    std::vector<double> eta;
    double gamma = 1.0;
    // data
    std::string f;
    std::string g;
    std::string weights;
    // trials
    int trials = 16;
    std::uint64_t seed = 0;
    int max_power = 1;
    double cap = 1e6;
    bool points = false;
    // tolerances and sampling
    double tol = 1e-8;
    int threads = 1;
    int samples = 64;
    int iterations = 500;
    // catalog
    std::string entry;
    std::string emit;
    std::uint64_t catalog_seed = 7;
    Index n = 5;
    Index d = 2;
    double a = 1.0;
    double b = 1.0;
    double mach = 0.5;
};

struct Outcome {
    std::string verdict;
    std::vector<Check> checks;
    json result = json::object();
    int code = kPass;
};

using Echo = std::vector<std::pair<std::string, std::function<json()>>>;

std::string key_of(const std::string& flag) {
    std::string k = flag.substr(flag.find_first_not_of('-'));
    for (char& c : k)
        if (c == '-') c = '_';
    return k;
}

template <class T>
void option(CLI::App* app, Echo& echo, const std::string& flag, T& var, const std::string& help) {
    app->add_option(flag, var, help)->capture_default_str();
    echo.emplace_back(key_of(flag), [&var] { return json(var); });
}

Outcome from_checks(std::vector<Check> checks, json result) {
    Outcome o;
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    o.verdict = ok ? "pass" : "fail";
    o.code = ok ? kPass : kFail;
    o.checks = std::move(checks);
    o.result = std::move(result);
    return o;
}

json inline_or_file(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::SchemaError, std::string("invalid inline JSON: ") + e.what());
        }
    }
    return read_json_file(text);
}

SystemDocument load_system(const Config& cfg) { return parse_system(read_json_file(cfg.input)); }

const BoundarySymbol& require_boundary(const SystemDocument& doc) {
    if (!doc.boundary) throw Error(ErrorKind::InvalidArgument, "this subcommand needs a boundary in the document");
    return *doc.boundary;
}

const CMatrix& constant_boundary(const SystemDocument& doc) {
    const BoundarySymbol& b = require_boundary(doc);
    if (!b.is_constant()) throw Error(ErrorKind::InvalidArgument, "this subcommand needs a constant boundary matrix");
    return b.matrix();
}

Frequency single_frequency(const Config& cfg, Index d) {
    if (static_cast<Index>(cfg.eta.size()) != d - 1)
        throw Error(ErrorKind::InvalidArgument, "--eta needs d - 1 = " + std::to_string(d - 1) + " values");
    Vector eta(d - 1);
    for (Index j = 0; j + 1 < d; ++j) eta(j) = cfg.eta[static_cast<std::size_t>(j)];
    return Frequency(cfg.tau, eta, cfg.gamma);
}

std::vector<Frequency> bounded_grid(const Config& cfg, Index d) {
    if (!cfg.grid_file.empty()) {
        auto list = parse_frequencies(read_json_file(cfg.grid_file), d);
        if (list.empty()) throw Error(ErrorKind::InvalidGrid, "grid file holds no frequencies");
        return list;
    }
    return box_grid(d, cfg.gamma_min, cfg.gamma_max, cfg.tangential_max, cfg.gamma_levels, cfg.tangential_levels);
}

TrialOptions trial_options(const Config& cfg) {
    TrialOptions o;
    o.trials = cfg.trials;
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    o.cap = cfg.cap;
    o.max_power = cfg.max_power;
    if (o.trials < 1) throw Error(ErrorKind::InvalidArgument, "--trials must be positive");
    if (o.max_power < 0) throw Error(ErrorKind::InvalidArgument, "--max-power must be nonnegative");
    return o;
}

ScanOptions scan_options(const Config& cfg) {
    ScanOptions o;
    o.tolerance = cfg.tol;
    o.threads = cfg.threads;
    return o;
}

Check error_check(const std::string& name, const Error& e) {
    return {name, false, {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}};
}

// ---- subcommands

Outcome cmd_validate(const Config& cfg) {
    const json doc = read_json_file(cfg.input);
    std::vector<Check> checks;
    json result;
    if (doc.is_object() && doc.contains("n1")) {
        const ViscousDocument v = parse_viscous(doc);
        result["kind"] = "second-order";
        try {
            const ViscousValidation r = validate_second_order(v.system, cfg.samples);
            checks.push_back({"second-order structure", true, encode_viscous_validation(r)});
        } catch (const Error& e) {
            if (is_input_error(e.kind())) throw;
            checks.push_back(error_check("second-order structure", e));
        }
        return from_checks(std::move(checks), std::move(result));
    }

    const SystemDocument s = parse_system(doc);
    result["kind"] = "first-order";
    result["n"] = s.system.n();
    result["d"] = s.system.d();
    bool noncharacteristic = true;
    try {
        const ValidationReport r = validate_system(s.system);
        checks.push_back({"noncharacteristic", r.pass(), encode_validation(r)});
    } catch (const Error& e) {
        if (is_input_error(e.kind())) throw;
        checks.push_back(error_check("noncharacteristic", e));
        noncharacteristic = false;
    }
    if (noncharacteristic) {
        const HyperbolicityReport h = check_hyperbolicity(s.system, cfg.samples, cfg.tol);
        checks.push_back({"hyperbolic", h.pass, encode_hyperbolicity(h)});
        const Index incoming = s.system.incoming_count();
        result["incoming"] = incoming;
        if (s.boundary)
            checks.push_back({"boundary rows = incoming characteristics", s.boundary->rows() == incoming,
                              {{"rows", s.boundary->rows()}, {"incoming", incoming}}});
    }
    return from_checks(std::move(checks), std::move(result));
}

SymmetrizerSearch search(const FirstOrderSystem& sys, const Config& cfg) {
    SymmetrizerOptions o;
    o.iterations = cfg.iterations;
    return find_symmetrizer(sys, o);
}

Outcome cmd_symmetrizer(const Config& cfg) {
    const SystemDocument s = load_system(cfg);
    const SymmetrizerSearch found = search(s.system, cfg);
    std::vector<Check> checks{{"symmetrizable", found.feasible, {{"best_lambda_min", encode_number(found.best_lambda_min)}}}};
    json result = encode_search(found);
    if (found.feasible && s.boundary && s.boundary->is_constant()) {
        try {
            const auto cert = check_maximal_dissipativity(*found.symmetrizer, s.system, s.boundary->matrix());
            result["certificate"] = encode_certificate(cert);
            result["sampled_certificate_minimum"] = encode_number(
                sample_certificate(cert, *found.symmetrizer, s.system, s.boundary->matrix(), cfg.samples,
                                   static_cast<unsigned>(cfg.seed)));
            checks.push_back({"maximally dissipative", true, {}});
        } catch (const Error& e) {
            if (is_input_error(e.kind())) throw;
            checks.push_back(error_check("maximally dissipative", e));
        }
    }
    return from_checks(std::move(checks), std::move(result));
}

Outcome cmd_dissipative_bc(const Config& cfg) {
    const SystemDocument s = load_system(cfg);
    const SymmetrizerSearch found = search(s.system, cfg);
    if (!found.feasible)
        return from_checks({{"symmetrizable", false, {{"best_lambda_min", encode_number(found.best_lambda_min)}}}},
                           encode_search(found));
    const Symmetrizer& sym = *found.symmetrizer;
    const CMatrix reference = build_dissipative_bc(sym, s.system).cast<Complex>();
    const auto cert = check_maximal_dissipativity(sym, s.system, reference);
    json result = {{"S", encode_matrix(sym.S)},
                   {"gamma_tilde", encode_matrix(reference)},
                   {"certificate", encode_certificate(cert)},
                   {"energy_constant", encode_number(energy_constant(s.system, sym, reference))},
                   {"document", serialize_system(s.system, BoundarySymbol::constant(reference))}};
    const double scale = std::max(1.0, cert.C);
    return from_checks({{"symmetrizable", true, {}},
                        {"certificate", cert.c > 0.0 && cert.exact_residual >= -1e-9 * scale,
                         {{"c", encode_number(cert.c)}, {"C", encode_number(cert.C)}}}},
                       std::move(result));
}

ScanGrid scan_grid(const Config& cfg) {
    ScanGrid g;
    g.gamma_min = cfg.gamma_min;
    g.resolution = cfg.resolution;
    g.radial_cutoff = cfg.radial_cutoff;
    g.radial_samples = cfg.radial_samples;
    return g;
}

Outcome cmd_adjoint(const Config& cfg) {
    const SystemDocument s = load_system(cfg);
    const CMatrix& boundary = constant_boundary(s);
    const AdjointProblem adj = adjoint_forward_form(s.system, boundary);
    const AdjointProblem back = adjoint_forward_form(adj.system, adj.boundary);
    bool exact = true;
    for (Index j = 0; j < s.system.d(); ++j)
        exact = exact && (back.system.coefficient(j).array() == s.system.coefficient(j).array()).all();

    const ScanResult forward = uniform_scan(s.system, *s.boundary, scan_grid(cfg), scan_options(cfg));
    const ScanResult backward =
        uniform_scan(adj.system, BoundarySymbol::constant(adj.boundary), scan_grid(cfg), scan_options(cfg));
    const bool coherent = forward.verdict != ScanVerdict::Holds || backward.verdict == ScanVerdict::Holds;
    json result = {{"document", serialize_system(adj.system, BoundarySymbol::constant(adj.boundary))},
                   {"forward_scan", encode_scan(forward)},
                   {"adjoint_scan", encode_scan(backward)}};
    return from_checks({{"double reversal restores the operator", exact, {}},
                        {"forward holds implies adjoint holds", coherent,
                         {{"forward", to_string(forward.verdict)}, {"adjoint", to_string(backward.verdict)}}}},
                       std::move(result));
}

Outcome cmd_lopatinski(const Config& cfg) {
    const SystemDocument s = load_system(cfg);
    const ScanResult scan = uniform_scan(s.system, require_boundary(s), scan_grid(cfg), scan_options(cfg));
    Outcome o;
    o.checks.push_back({"uniform Lopatinski condition", scan.verdict == ScanVerdict::Holds,
                        {{"inf_sigma", encode_number(scan.inf_sigma)}, {"inconclusive", scan.inconclusive}}});
    o.verdict = to_string(scan.verdict);
    o.code = scan.verdict == ScanVerdict::Holds ? kPass : kFail;
    o.result = encode_scan(scan);
    if (scan.worst) {
        try {
            o.result["worst_point"] = encode_lopatinski_value(lopatinski_value(s.system, *s.boundary, *scan.worst));
        } catch (const Error&) {
            // the split failed here as well; the scan already records it
        }
    }
    return o;
}

ExponentialProfile forcing_arg(const Config& cfg, Index n) {
    if (cfg.f.empty()) return ExponentialProfile(n);
    return parse_profile(inline_or_file(cfg.f), n);
}

CVector data_arg(const Config& cfg, Index k) {
    if (cfg.g.empty()) return CVector::Zero(k);
    CVector g = decode_complex_vector(inline_or_file(cfg.g), "g");
    if (g.size() != k) throw Error(ErrorKind::DimensionMismatch, "g must have k = " + std::to_string(k) + " entries");
    return g;
}

Outcome cmd_solve(const Config& cfg) {
    const SystemDocument s = load_system(cfg);
    const Frequency lambda = single_frequency(cfg, s.system.d());
    const CMatrix boundary = require_boundary(s)(lambda);
    const ExponentialProfile f = forcing_arg(cfg, s.system.n());
    const CVector g = data_arg(cfg, boundary.rows());
    const ResolventMatrix gm = resolvent_matrix(s.system, lambda);
    const ResolventSolution sol = solve_resolvent(gm, boundary, f, g);
    const double residual = profile_norm(resolvent_residual(gm, sol.u, f));
    const RatioParts parts = kreiss_parts(hyperbolic_problem(s.system, lambda).weights, sol.u, f, g);
    const double scale = std::max({1.0, profile_norm(f), g.norm()});
    json result = {{"frequency", serialize_frequency(lambda)},
                   {"u", serialize_profile(sol.u)},
                   {"norm_u", encode_number(profile_norm(sol.u))},
                   {"trace_norm", encode_number(sol.u.trace().norm())},
                   {"sigma", encode_number(sol.sigma)},
                   {"equation_residual", encode_number(residual)},
                   {"boundary_residual", encode_number(sol.boundary_residual)},
                   {"kreiss_ratio", encode_number(parts.ratio())}};
    return from_checks({{"equation residual", residual <= 1e-8 * scale, {}},
                        {"boundary residual", sol.boundary_residual <= 1e-8 * scale, {}}},
                       std::move(result));
}

Outcome cmd_kreiss(const Config& cfg) {
    const SystemDocument s = load_system(cfg);
    const auto freqs = bounded_grid(cfg, s.system.d());
    const StabilityReport r = kreiss_constant(s.system, require_boundary(s), freqs, trial_options(cfg));
    json result = encode_stability(r, cfg.points);
    result["grid"] = cfg.grid_file.empty() ? "box grid" : "grid file";
    return from_checks({{"uniformly stable on grid", r.stable_on_grid,
                         {{"max_ratio", encode_number(r.max_ratio)}, {"cap", encode_number(r.cap)}}}},
                       std::move(result));
}

Outcome cmd_decompose(const Config& cfg) {
    const SystemDocument s = load_system(cfg);
    const Frequency lambda = single_frequency(cfg, s.system.d());
    const CMatrix boundary = require_boundary(s)(lambda);
    const SymmetrizerSearch found = search(s.system, cfg);
    if (!found.feasible) return from_checks({{"symmetrizable", false, {}}}, encode_search(found));

    ExponentialProfile f = forcing_arg(cfg, s.system.n());
    CVector g = data_arg(cfg, boundary.rows());
    if (cfg.f.empty() && cfg.g.empty()) {
        std::mt19937_64 rng(frequency_seed(cfg.seed ^ 0x5bd1e995ULL, lambda));
        f = random_forcing(hyperbolic_problem(s.system, lambda), rng, cfg.max_power);
        g = random_vector(boundary.rows(), rng);
    }
    const TrialOptions options = trial_options(cfg);
    const DecompositionTrace trace =
        proposition_main_decompose(s.system, *found.symmetrizer, boundary, f, g, lambda, options);
    const DirectComparison cmp = direct_vs_decomposed(s.system, *found.symmetrizer, boundary, f, g, lambda);

    std::vector<Check> checks{{"symmetrizable", true, {}}};
    for (const auto& c : trace.chain)
        checks.push_back({c.name, c.residual >= -kChainTolerance * std::max({1.0, std::abs(c.lhs), std::abs(c.rhs)}),
                          {{"residual", encode_number(c.residual)}}});
    checks.push_back({"direct agreement", cmp.relative_error <= 1e-8,
                      {{"relative_error", encode_number(cmp.relative_error)}}});
    json result = encode_trace(trace);
    result["f"] = serialize_profile(f);
    result["g"] = encode_vector(g);
    result["symmetrizer"] = encode_matrix(found.symmetrizer->S);
    return from_checks(std::move(checks), std::move(result));
}

ViscousDocument load_viscous(const Config& cfg) { return parse_viscous(read_json_file(cfg.input)); }

CMatrix viscous_boundary(const ViscousDocument& v) {
    if (v.boundary) return *v.boundary;
    if (v.system.n1 == 0) return rousset_bc(v.system, CMatrix(0, 0));
    const FirstOrderSystem block = hyperbolic_block(v.system);
    const Matrix a011 = v.system.a0.topLeftCorner(v.system.n1, v.system.n1);
    const Symmetrizer sym = make_symmetrizer(a011, block);
    return rousset_bc(v.system, build_dissipative_bc(sym, block).cast<Complex>());
}

Outcome cmd_viscous_evans(const Config& cfg) {
    const ViscousDocument v = load_viscous(cfg);
    const ViscousValidation val = validate_second_order(v.system, cfg.samples);
    const CMatrix boundary = viscous_boundary(v);
    const ScanResult scan = evans_scan(v.system, boundary, bounded_grid(cfg, v.system.d()), scan_options(cfg));
    Outcome o;
    o.checks.push_back({"second-order structure", true, encode_viscous_validation(val)});
    o.checks.push_back({"uniform Evans condition", scan.verdict == ScanVerdict::Holds,
                        {{"inf_sigma", encode_number(scan.inf_sigma)}}});
    o.verdict = to_string(scan.verdict);
    o.code = scan.verdict == ScanVerdict::Holds ? kPass : kFail;
    o.result = encode_scan(scan);
    o.result["boundary"] = encode_matrix(boundary);
    return o;
}

Outcome cmd_viscous_kreiss(const Config& cfg) {
    const ViscousDocument v = load_viscous(cfg);
    const ViscousValidation val = validate_second_order(v.system, cfg.samples);
    const ViscousWeights weights = cfg.weights.empty() ? ViscousWeights{} : parse_weights(inline_or_file(cfg.weights));
    const CMatrix boundary = viscous_boundary(v);
    const StabilityReport r = viscous_stability_check(v.system, boundary, bounded_grid(cfg, v.system.d()),
                                                      trial_options(cfg), weights);
    json result = encode_stability(r, cfg.points);
    result["weight_config"] = serialize_weights(weights);
    result["boundary"] = encode_matrix(boundary);
    return from_checks({{"second-order structure", true, encode_viscous_validation(val)},
                        {"uniformly stable on grid (weighted)", r.stable_on_grid,
                         {{"max_ratio", encode_number(r.max_ratio)}, {"cap", encode_number(r.cap)}}}},
                       std::move(result));
}

CatalogEntry configured_entry(const Config& cfg) {
    if (cfg.entry == "scalar-transport") return scalar_transport_entry(cfg.a);
    if (cfg.entry == "acoustics-2d") return acoustics_entry(cfg.mach);
    if (cfg.entry == "random-symmetrizable") return random_symmetrizable_entry(cfg.catalog_seed, cfg.n, cfg.d);
    if (cfg.entry == "scalar-viscous") return scalar_viscous_entry(cfg.a, cfg.b);
    return catalog_entry(cfg.entry);
}

json entry_document(const CatalogEntry& e, const CatalogBoundary* b) {
    if (e.system) return serialize_system(*e.system, b ? std::optional<BoundarySymbol>(b->symbol) : std::nullopt);
    return serialize_viscous(*e.viscous, b ? std::optional<CMatrix>(b->symbol.matrix()) : std::nullopt);
}

json describe_entry(const CatalogEntry& e) {
    json boundaries = json::array();
    for (const auto& b : e.boundaries)
        boundaries.push_back({{"label", b.label}, {"expect", b.expect_holds ? "holds" : "fails"}, {"rows", b.symbol.rows()}});
    return {{"name", e.name},
            {"description", e.description},
            {"kind", e.system ? "first-order" : "second-order"},
            {"boundaries", boundaries},
            {"expected",
             {{"noncharacteristic", e.expected.noncharacteristic},
              {"hyperbolic", e.expected.hyperbolic},
              {"symmetrizable", e.expected.symmetrizable},
              {"incoming", e.expected.incoming}}}};
}

// Returns true when a bare document was written instead of a report.
bool cmd_catalog(const Config& cfg, Outcome& o, std::ostream& out) {
    if (cfg.entry.empty()) {
        json list = json::array();
        for (const auto& e : catalog())
            list.push_back({{"name", e.name},
                            {"kind", e.system ? "first-order" : "second-order"},
                            {"boundaries", e.boundaries.size()},
                            {"description", e.description}});
        o = from_checks({}, {{"entries", list}});
        return false;
    }
    const CatalogEntry e = configured_entry(cfg);
    if (!cfg.emit.empty()) {
        const CatalogBoundary* chosen = nullptr;
        for (const auto& b : e.boundaries)
            if (b.label == cfg.emit) chosen = &b;
        if (!chosen && cfg.emit != "none")
            throw Error(ErrorKind::InvalidArgument, "entry '" + e.name + "' has no boundary '" + cfg.emit + "'");
        out << entry_document(e, chosen).dump(2) << '\n';
        return true;
    }
    json result = describe_entry(e);
    json docs = json::object();
    docs["none"] = entry_document(e, nullptr);
    for (const auto& b : e.boundaries) docs[b.label] = entry_document(e, &b);
    result["documents"] = std::move(docs);
    if (e.symmetrizer) result["symmetrizer"] = encode_matrix(*e.symmetrizer);
    o = from_checks({}, std::move(result));
    return false;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Uniform Lopatinski / Kreiss stability analysis for half-space hyperbolic problems", "lopa"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    std::map<const CLI::App*, Echo> echoes;

    auto sub = [&](const std::string& name, const std::string& help) {
        CLI::App* s = app.add_subcommand(name, help);
        Echo& echo = echoes[s];
        if (name == "catalog") {
            s->add_option("entry", cfg.entry, "catalog entry (omit to list entries)");
            echo.emplace_back("entry", [&] { return json(cfg.entry); });
        } else {
            s->add_option("input", cfg.input, "JSON document")->required();
            echo.emplace_back("input", [&] { return json(cfg.input); });
        }
        s->add_flag("--json", cfg.json_output, "emit JSON instead of a table");
        return s;
    };
    auto grid = [&](CLI::App* s) {
        Echo& e = echoes[s];
        option(s, e, "--gamma-min", cfg.gamma_min, "smallest gamma of the hemisphere grid");
        option(s, e, "--resolution", cfg.resolution, "hemisphere grid resolution");
        option(s, e, "--radial-cutoff", cfg.radial_cutoff, "radial cutoff for frequency-dependent symbols");
        option(s, e, "--radial-samples", cfg.radial_samples, "radii per direction for frequency-dependent symbols");
        option(s, e, "--tol", cfg.tol, "declared tolerance for the infimum");
        option(s, e, "--threads", cfg.threads, "worker threads");
    };
    auto box = [&](CLI::App* s) {
        Echo& e = echoes[s];
        option(s, e, "--gamma-min", cfg.gamma_min, "smallest gamma");
        option(s, e, "--gamma-max", cfg.gamma_max, "largest gamma");
        option(s, e, "--gamma-levels", cfg.gamma_levels, "log-spaced gamma levels");
        option(s, e, "--tangential-max", cfg.tangential_max, "tau and eta range [-max, max]");
        option(s, e, "--tangential-levels", cfg.tangential_levels, "values per tangential axis");
        option(s, e, "--grid-file", cfg.grid_file, "explicit frequency list (JSON)");
        option(s, e, "--threads", cfg.threads, "worker threads");
    };
    auto trials = [&](CLI::App* s) {
        Echo& e = echoes[s];
        option(s, e, "--trials", cfg.trials, "random trials per frequency");
        option(s, e, "--seed", cfg.seed, "random seed");
        option(s, e, "--max-power", cfg.max_power, "largest x^m power in random forcing");
    };
    auto point = [&](CLI::App* s) {
        Echo& e = echoes[s];
        option(s, e, "--tau", cfg.tau, "tau");
        s->add_option("--eta", cfg.eta, "eta (d - 1 values, comma separated)")->delimiter(',')->allow_extra_args(false);
        e.emplace_back("eta", [&] { return json(cfg.eta); });
        option(s, e, "--gamma", cfg.gamma, "gamma > 0");
        option(s, e, "--f", cfg.f, "forcing terms: inline JSON or file");
        option(s, e, "--g", cfg.g, "boundary datum: inline JSON or file");
    };

    CLI::App* validate = sub("validate", "structural checks of a system document");
    option(validate, echoes[validate], "--samples", cfg.samples, "sphere samples");
    option(validate, echoes[validate], "--tol", cfg.tol, "hyperbolicity tolerance");

    CLI::App* symmetrizer = sub("symmetrizer", "search for a Friedrichs symmetrizer");
    option(symmetrizer, echoes[symmetrizer], "--iterations", cfg.iterations, "subgradient iterations");
    option(symmetrizer, echoes[symmetrizer], "--samples", cfg.samples, "random samples of the certificate");
    option(symmetrizer, echoes[symmetrizer], "--seed", cfg.seed, "random seed");

    CLI::App* dissipative = sub("dissipative-bc", "build a maximally dissipative reference condition");
    option(dissipative, echoes[dissipative], "--iterations", cfg.iterations, "subgradient iterations");

    CLI::App* adjoint = sub("adjoint", "time-reversed adjoint problem and its scan");
    grid(adjoint);

    CLI::App* lopatinski = sub("lopatinski", "uniform Lopatinski scan");
    grid(lopatinski);

    CLI::App* solve = sub("solve", "exact resolvent solve at one frequency");
    point(solve);

    CLI::App* kreiss = sub("kreiss", "Kreiss ratio trials over a frequency grid");
    box(kreiss);
    trials(kreiss);
    option(kreiss, echoes[kreiss], "--cap", cfg.cap, "ratio cap for the stability verdict");
    kreiss->add_flag("--points", cfg.points, "include per-frequency values");

    CLI::App* decompose = sub("decompose", "auxiliary/residual decomposition with explicit constants");
    point(decompose);
    trials(decompose);
    option(decompose, echoes[decompose], "--iterations", cfg.iterations, "subgradient iterations");

    CLI::App* evans = sub("viscous-evans", "uniform Evans scan of the reduced viscous problem");
    box(evans);
    option(evans, echoes[evans], "--tol", cfg.tol, "declared tolerance for the infimum");
    option(evans, echoes[evans], "--samples", cfg.samples, "sphere samples for ellipticity");

    CLI::App* vkreiss = sub("viscous-kreiss", "weighted Kreiss trials for the viscous problem");
    box(vkreiss);
    trials(vkreiss);
    option(vkreiss, echoes[vkreiss], "--weights", cfg.weights, "weight configuration: inline JSON or file");
    option(vkreiss, echoes[vkreiss], "--cap", cfg.cap, "ratio cap for the stability verdict");
    option(vkreiss, echoes[vkreiss], "--samples", cfg.samples, "sphere samples for ellipticity");
    vkreiss->add_flag("--points", cfg.points, "include per-frequency values");

    CLI::App* cat = sub("catalog", "list catalog entries or emit one");
    option(cat, echoes[cat], "--emit", cfg.emit, "print the bare document with this boundary label");
    option(cat, echoes[cat], "--seed", cfg.catalog_seed, "seed (random-symmetrizable)");
    option(cat, echoes[cat], "--n", cfg.n, "size (random-symmetrizable)");
    option(cat, echoes[cat], "--d", cfg.d, "dimension (random-symmetrizable)");
    option(cat, echoes[cat], "--a", cfg.a, "speed (scalar-transport, scalar-viscous)");
    option(cat, echoes[cat], "--b", cfg.b, "viscosity (scalar-viscous)");
    option(cat, echoes[cat], "--mach", cfg.mach, "normal Mach number (acoustics-2d)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kInvalid;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    try {
        Outcome o;
        if (name == "validate") o = cmd_validate(cfg);
        else if (name == "symmetrizer") o = cmd_symmetrizer(cfg);
        else if (name == "dissipative-bc") o = cmd_dissipative_bc(cfg);
        else if (name == "adjoint") o = cmd_adjoint(cfg);
        else if (name == "lopatinski") o = cmd_lopatinski(cfg);
        else if (name == "solve") o = cmd_solve(cfg);
        else if (name == "kreiss") o = cmd_kreiss(cfg);
        else if (name == "decompose") o = cmd_decompose(cfg);
        else if (name == "viscous-evans") o = cmd_viscous_evans(cfg);
        else if (name == "viscous-kreiss") o = cmd_viscous_kreiss(cfg);
        else if (cmd_catalog(cfg, o, out)) return kPass;

        json config = json::object();
        for (const auto& [key, value] : echoes[chosen]) config[key] = value();
        config["format"] = cfg.json_output ? "json" : "table";
        const json report = make_report(name, config, o.verdict, o.checks, o.result);
        out << (cfg.json_output ? report.dump(2) : render_table(report)) << '\n';
        return o.code;
    } catch (const Error& e) {
        err << "lopa " << name << ": " << e.what() << '\n';
        if (is_input_error(e.kind())) return kInvalid;
        json config = json::object();
        for (const auto& [key, value] : echoes[chosen]) config[key] = value();
        const json report = make_report(name, config, "fail", {error_check(std::string(to_string(e.kind())), e)},
                                        json::object());
        out << (cfg.json_output ? report.dump(2) : render_table(report)) << '\n';
        return kFail;
    } catch (const json::exception& e) {
        err << "lopa " << name << ": SchemaError: " << e.what() << '\n';
        return kInvalid;
    }
}

}  // namespace lopa::cli
