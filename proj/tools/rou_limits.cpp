// rou-limits: command-line front end for the rou library.
//
// Exit codes: 0 ok, 2 validation error, 3 numerical failure, 64 unknown subcommand.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rou/rou.hpp"

using nlohmann::json;
using namespace rou;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 64;

const std::vector<std::pair<std::string, std::string>> kCommands{
    {"decay-rate", "closed-form decay rate of P(X_T >= b) and its most likely path"},
    {"mlp", "most likely path as CSV (t,value)"},
    {"rate-functional", "rate functional I, Iplus or Iplusplus of a path"},
    {"simulate", "one simulated path as CSV (t,value or t,z,l,u)"},
    {"tail", "Monte Carlo P(state_T >= b) with Clopper-Pearson interval"},
    {"empirical-decay", "eps log p_hat over a decreasing eps grid"},
    {"steady-state", "q_U, q_L, eta_U^2, eta_L^2 of the doubly reflected process"},
    {"density", "stationary density as CSV (x,pi)"},
    {"clt-check", "CLT check of the loss/idleness processes"},
    {"qv-check", "ergodic quadratic-variation check"},
    {"cumulant", "limiting cumulant psi(theta) as CSV (theta,psi)"},
    {"loss-ld", "long-time decay rate of P(U_t > c t)"},
};

std::string usage() {
    std::string s = "usage: rou-limits <subcommand> [options]\n\nsubcommands:\n";
    for (const auto& [name, help] : kCommands) {
        s += "  " + name + std::string(18 - name.size(), ' ') + help + "\n";
    }
    s += "\ncommon options: --config file.json --alpha --gamma --sigma --epsilon --x0 --boundary --d\n"
         "                --T --b --a --dt --seed --scheme --reps --out\n"
         "run 'rou-limits <subcommand> --help' for details\n";
    return s;
}

// Values given on the command line; unset ones fall back to the config file, then to defaults.
struct Flags {
    std::optional<std::string> config;
    std::optional<double> alpha, gamma, sigma, epsilon, x0, d;
    std::optional<std::string> boundary;
    std::optional<double> T, b, a;
    std::optional<double> dt;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::optional<std::size_t> reps;
    std::optional<std::string> out;

    std::optional<std::string> regime, variant, path, which, eps;
    std::optional<double> c, theta_min, theta_max, boundary_tol;
    std::optional<std::size_t> points;
};

struct RunConfig {
    ModelParams params;
    SimConfig sim;
    QueryParams query;
    json options = json::object();
};

void add_model_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON run configuration (flags override it)");
    app->add_option("--alpha", f.alpha, "drift level alpha");
    app->add_option("--gamma", f.gamma, "mean-reversion rate gamma");
    app->add_option("--sigma", f.sigma, "diffusion coefficient sigma");
    app->add_option("--epsilon", f.epsilon, "noise scale epsilon");
    app->add_option("--x0", f.x0, "initial state");
    app->add_option("--boundary", f.boundary, "free | lower | double");
    app->add_option("--d", f.d, "upper level d (implies --boundary double)");
}

void add_query_flags(CLI::App* app, Flags& f, bool with_a = false) {
    app->add_option("--T", f.T, "horizon T");
    app->add_option("--b", f.b, "target level b");
    if (with_a) app->add_option("--a", f.a, "terminal level a (defaults to b)");
}

void add_sim_flags(CLI::App* app, Flags& f, bool with_reps) {
    app->add_option("--dt", f.dt, "time step");
    app->add_option("--seed", f.seed, "64-bit seed");
    app->add_option("--scheme", f.scheme, "projection | bridge");
    if (with_reps) app->add_option("--reps", f.reps, "replications");
}

void add_out_flag(CLI::App* app, Flags& f) { app->add_option("--out", f.out, "path for the CSV artifact"); }

Boundary parse_boundary(const std::string& s, std::optional<double> d) {
    if (s == "free" || s == "ou") return Boundary::free();
    if (s == "lower" || s == "rou") return Boundary::lower_at_zero();
    if (s == "double" || s == "drou") {
        if (!d) throw ValidationError("--boundary double needs --d");
        return Boundary::two_sided(*d);
    }
    throw ValidationError("unknown boundary '" + s + "' (free | lower | double)");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "projection") return Scheme::Projection;
    if (s == "bridge") return Scheme::BridgeExtremum;
    throw ValidationError("unknown scheme '" + s + "' (projection | bridge)");
}

SimConfig sim_from_json(const json& j, SimConfig s) {
    if (j.contains("dt")) s.dt = j.at("dt").get<double>();
    if (j.contains("horizon_T")) s.horizon_T = j.at("horizon_T").get<double>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("scheme")) s.scheme = parse_scheme(j.at("scheme").get<std::string>());
    return s;
}

RunConfig resolve(const Flags& f, Scheme default_scheme) {
    RunConfig rc;
    rc.sim.scheme = default_scheme;
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw ValidationError("cannot open config file " + *f.config);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ValidationError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (j.contains("params")) rc.params = j.at("params").get<ModelParams>();
        if (j.contains("sim")) rc.sim = sim_from_json(j.at("sim"), rc.sim);
        if (j.contains("query")) rc.query = j.at("query").get<QueryParams>();
        if (j.contains("options")) rc.options = j.at("options");
    }
    auto& p = rc.params;
    if (f.alpha) p.alpha = *f.alpha;
    if (f.gamma) p.gamma = *f.gamma;
    if (f.sigma) p.sigma = *f.sigma;
    if (f.epsilon) p.epsilon = *f.epsilon;
    if (f.x0) p.x0 = *f.x0;
    const std::optional<double> d = f.d ? f.d : (p.boundary.has_upper() ? std::optional(p.boundary.upper) : std::nullopt);
    if (f.boundary) p.boundary = parse_boundary(*f.boundary, d);
    else if (f.d) p.boundary = Boundary::two_sided(*f.d);
    if (f.T) rc.query.horizon_T = *f.T;
    if (f.b) rc.query.level_b = *f.b;
    if (f.a) rc.query.level_a = *f.a;
    if (f.dt) rc.sim.dt = *f.dt;
    if (f.seed) rc.sim.seed = *f.seed;
    if (f.scheme) rc.sim.scheme = parse_scheme(*f.scheme);
    return rc;
}

template <class T>
T option(const RunConfig& rc, const std::optional<T>& flag, const char* key, T fallback) {
    if (flag) return *flag;
    if (rc.options.contains(key)) return rc.options.at(key).get<T>();
    return fallback;
}

json envelope(const std::string& command, const RunConfig& rc) {
    return {{"schema_version", kSchemaVersion}, {"command", command}, {"params", rc.params}};
}

json sim_json(const SimConfig& s) {
    return {{"dt", s.dt}, {"horizon_T", s.realized_T()}, {"seed", s.seed}, {"scheme", to_string(s.scheme)}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void emit_json(const json& j) { std::cout << j.dump(2) << '\n'; }

// CSV goes to --out when given, else to stdout.
template <class Writer>
void emit_csv(const std::optional<std::string>& out, Writer&& write) {
    if (out) {
        std::ofstream f(*out);
        if (!f) throw ValidationError("cannot open output file " + *out);
        write(f);
        if (!f) throw ValidationError("failed writing " + *out);
    } else {
        write(std::cout);
    }
}

Regime parse_regime(const std::string& s) {
    if (s == "ou") return Regime::OU;
    if (s == "rou") return Regime::ROU;
    if (s == "drou") return Regime::DROU;
    throw ValidationError("unknown regime '" + s + "' (ou | rou | drou)");
}

Regime regime_of(const Boundary& b) {
    switch (b.kind) {
    case BoundaryKind::Free: return Regime::OU;
    case BoundaryKind::LowerAtZero: return Regime::ROU;
    case BoundaryKind::Double: return Regime::DROU;
    }
    return Regime::OU;
}

RateVariant parse_variant(const std::string& s) {
    if (s == "I") return RateVariant::I;
    if (s == "Iplus") return RateVariant::Iplus;
    if (s == "Iplusplus") return RateVariant::Iplusplus;
    throw ValidationError("unknown variant '" + s + "' (I | Iplus | Iplusplus)");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            v.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ValidationError("bad number '" + cell + "' in list");
        }
    }
    if (v.empty()) throw ValidationError("empty list");
    return v;
}

std::vector<double> eps_grid(const RunConfig& rc, const Flags& f) {
    if (f.eps) return parse_list(*f.eps);
    if (rc.options.contains("eps")) return rc.options.at("eps").get<std::vector<double>>();
    return {0.2, 0.1, 0.05};
}

json mlp_json(const MostLikelyPath& m) { return {{"a", m.a}, {"T", m.T}, {"C", m.C}}; }

int cmd_decay_rate(const Flags& f) {
    RunConfig rc = resolve(f, Scheme::Projection);
    const Regime regime = f.regime ? parse_regime(*f.regime)
                          : rc.options.contains("regime") ? parse_regime(rc.options.at("regime").get<std::string>())
                                                          : regime_of(rc.params.boundary);
    if (regime == Regime::ROU && rc.params.boundary.kind == BoundaryKind::Free)
        rc.params.boundary = Boundary::lower_at_zero();
    validate(rc.query);
    const auto r = decay_rate(rc.params, rc.query.horizon_T, rc.query.level_b, regime);
    json j = envelope("decay-rate", rc);
    j["query"] = rc.query;
    j["regime"] = to_string(regime);
    j["rate"] = r.rate;
    j["zeroth_order_at_T"] = zeroth_order_path(rc.params, rc.query.horizon_T);
    j["stationary_limit_rate"] = stationary_decay_rate(rc.params, rc.query.level_b);
    j["mlp"] = mlp_json(r.mlp);
    if (f.out) {
        emit_csv(f.out, [&](std::ostream& os) { csv::write_path(os, r.mlp.sample(rc.sim.dt)); });
        j["mlp_csv"] = *f.out;
    }
    emit_json(j);
    std::cerr << "decay rate " << r.rate << " (" << to_string(regime) << ")\n";
    return 0;
}

int cmd_mlp(const Flags& f) {
    const RunConfig rc = resolve(f, Scheme::Projection);
    validate(rc.query);
    validate(rc.params);
    const double a = rc.query.level_a.value_or(rc.query.level_b);
    const auto m = most_likely_path(rc.params, rc.query.horizon_T, a);
    emit_csv(f.out, [&](std::ostream& os) { csv::write_path(os, m.sample(rc.sim.dt)); });
    if (f.out) {
        json j = envelope("mlp", rc);
        j["mlp"] = mlp_json(m);
        j["csv"] = *f.out;
        emit_json(j);
    }
    return 0;
}

int cmd_rate_functional(const Flags& f) {
    const RunConfig rc = resolve(f, Scheme::Projection);
    validate(rc.params);
    const RateVariant variant = parse_variant(option<std::string>(rc, f.variant, "variant", "I"));
    const double tol = option<double>(rc, f.boundary_tol, "boundary_tol", kBoundaryTol);
    const std::string source = option<std::string>(rc, f.path, "path", "");
    std::optional<DiscretePath> path;
    std::string origin;
    if (!source.empty()) {
        std::ifstream in(source);
        if (!in) throw ValidationError("cannot open path file " + source);
        path = csv::read_path(in);
        origin = source;
    } else {
        validate(rc.query);
        const double a = rc.query.level_a.value_or(rc.query.level_b);
        path = most_likely_path(rc.params, rc.query.horizon_T, a).sample(rc.sim.dt);
        origin = "most_likely_path";
    }
    const double v = rate_functional(*path, rc.params, variant, tol);
    json j = envelope("rate-functional", rc);
    j["variant"] = variant == RateVariant::I ? "I" : variant == RateVariant::Iplus ? "Iplus" : "Iplusplus";
    j["path"] = origin;
    j["value"] = finite_or_null(v);
    j["infinite"] = std::isinf(v);
    emit_json(j);
    return 0;
}

int cmd_simulate(const Flags& f) {
    RunConfig rc = resolve(f, Scheme::Projection);
    if (f.T) rc.sim.horizon_T = *f.T;
    else if (rc.query.horizon_T > 0) rc.sim.horizon_T = rc.query.horizon_T;
    json j = envelope("simulate", rc);
    j["sim"] = sim_json(rc.sim);
    if (rc.params.boundary.kind == BoundaryKind::Free) {
        const auto path = simulate_free(rc.params, rc.sim);
        emit_csv(f.out, [&](std::ostream& os) { csv::write_path(os, path); });
        j["terminal"] = {{"state", path.back()}};
    } else {
        const auto tr = simulate_reflected(rc.params, rc.sim);
        emit_csv(f.out, [&](std::ostream& os) { csv::write_triple(os, tr); });
        j["terminal"] = {{"state", tr.state.back()}, {"lower", tr.lower.back()}, {"upper", tr.upper.back()}};
    }
    if (f.out) {
        j["csv"] = *f.out;
        emit_json(j);
    }
    return 0;
}

int cmd_tail(const Flags& f) {
    const RunConfig rc = resolve(f, Scheme::Projection);
    validate(rc.query);
    const auto reps = option<std::size_t>(rc, f.reps, "reps", 10000);
    const auto e = tail_probability(rc.params, rc.sim, rc.query.horizon_T, rc.query.level_b, reps);
    SimConfig used = rc.sim;
    used.horizon_T = rc.query.horizon_T;
    json j = envelope("tail", rc);
    j["query"] = rc.query;
    j["sim"] = sim_json(used);
    j["reps"] = e.reps;
    j["hits"] = e.hits;
    j["p_hat"] = e.p_hat;
    j["ci_low"] = e.ci_low;
    j["ci_high"] = e.ci_high;
    j["confidence"] = 0.95;
    if (rc.params.boundary.kind == BoundaryKind::Free)
        j["exact_gaussian"] = ou_exact_tail(rc.params, rc.query.horizon_T, rc.query.level_b);
    emit_json(j);
    return 0;
}

int cmd_empirical_decay(const Flags& f) {
    const RunConfig rc = resolve(f, Scheme::Projection);
    validate(rc.query);
    const auto reps = option<std::size_t>(rc, f.reps, "reps", 10000);
    const auto eps = eps_grid(rc, f);
    const auto pts = empirical_decay_rate(rc.params, rc.query.horizon_T, rc.query.level_b, eps, reps, rc.sim);
    const auto gauss = gaussian_decay_sequence(rc.params, rc.query.horizon_T, rc.query.level_b, eps);
    json arr = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        arr.push_back({{"epsilon", p.epsilon},
                       {"hits", p.hits},
                       {"reps", p.reps},
                       {"p_hat", p.p_hat},
                       {"value", finite_or_null(p.value)},
                       {"std_error", finite_or_null(p.std_error)},
                       {"below_resolution", p.below_resolution},
                       {"upper_bound_value", p.bound},
                       {"ou_gaussian_value", gauss[i]}});
    }
    json j = envelope("empirical-decay", rc);
    j["query"] = rc.query;
    SimConfig used = rc.sim;
    used.horizon_T = rc.query.horizon_T;
    j["sim"] = sim_json(used);
    j["regime"] = to_string(regime_of(rc.params.boundary));
    j["points"] = arr;
    try {
        j["decay_rate"] = decay_rate(rc.params, rc.query.horizon_T, rc.query.level_b, Regime::OU).rate;
    } catch (const ValidationError&) {
        j["decay_rate"] = nullptr;
    }
    emit_json(j);
    return 0;
}

int cmd_steady_state(const Flags& f) {
    const RunConfig rc = resolve(f, Scheme::Projection);
    validate(rc.params);
    const auto s = loss_statistics(rc.params);
    json j = envelope("steady-state", rc);
    j["q_upper"] = s.q_upper;
    j["q_lower"] = s.q_lower;
    j["eta2_upper"] = s.eta2_upper;
    j["eta2_lower"] = s.eta2_lower;
    j["quad_tol"] = s.quad_tol;
    j["W_d"] = weight_W(rc.params, rc.params.boundary.upper);
    emit_json(j);
    return 0;
}

int cmd_density(const Flags& f) {
    const RunConfig rc = resolve(f, Scheme::Projection);
    validate(rc.params);
    if (!rc.params.boundary.has_upper()) throw ValidationError("density requires a Double boundary (--d)");
    const auto n = option<std::size_t>(rc, f.points, "points", 201);
    if (n < 2) throw ValidationError("--points must be >= 2");
    const double d = rc.params.boundary.upper;
    std::vector<double> xs(n), pis(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = d * static_cast<double>(i) / static_cast<double>(n - 1);
        pis[i] = stationary_density(rc.params, xs[i]);
    }
    emit_csv(f.out, [&](std::ostream& os) { csv::write_columns(os, {"x", "pi"}, {xs, pis}); });
    if (f.out) {
        json j = envelope("density", rc);
        j["points"] = n;
        j["csv"] = *f.out;
        emit_json(j);
    }
    return 0;
}

json clt_json(const CltReport& r) {
    return {{"which", to_string(r.which)},     {"t_horizon", r.t_horizon},   {"reps", r.reps},
            {"rate", r.rate},                  {"mean_rate", r.mean_rate},   {"sample_mean", r.sample_mean},
            {"sample_var", r.sample_var},      {"target_var", r.target_var}, {"ks_distance", r.ks_distance}};
}

int cmd_clt_check(const Flags& f) {
    RunConfig rc = resolve(f, Scheme::BridgeExtremum);
    rc.sim.horizon_T = f.T ? *f.T : (rc.query.horizon_T != QueryParams{}.horizon_T ? rc.query.horizon_T : 1e4);
    const auto reps = option<std::size_t>(rc, f.reps, "reps", 500);
    const std::string which = option<std::string>(rc, f.which, "which", "both");
    if (which != "upper" && which != "lower" && which != "both")
        throw ValidationError("--which must be upper, lower or both");
    const auto both = clt_check_both(rc.params, rc.sim, reps);
    json j = envelope("clt-check", rc);
    j["sim"] = sim_json(rc.sim);
    if (which != "lower") j["upper"] = clt_json(both.upper);
    if (which != "upper") j["lower"] = clt_json(both.lower);
    if (f.out) {
        emit_csv(f.out, [&](std::ostream& os) {
            std::vector<double> idx(reps);
            for (std::size_t i = 0; i < reps; ++i) idx[i] = static_cast<double>(i);
            csv::write_columns(os, {"replication", "upper", "lower"},
                               {idx, both.upper.normalized_samples, both.lower.normalized_samples});
        });
        j["samples_csv"] = *f.out;
    }
    emit_json(j);
    return 0;
}

int cmd_qv_check(const Flags& f) {
    RunConfig rc = resolve(f, Scheme::BridgeExtremum);
    rc.sim.horizon_T = f.T ? *f.T : (rc.query.horizon_T != QueryParams{}.horizon_T ? rc.query.horizon_T : 1e4);
    const auto r = qv_ergodic_check(rc.params, rc.sim);
    json j = envelope("qv-check", rc);
    j["sim"] = sim_json(rc.sim);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["relative_error"] = r.relative_error();
    emit_json(j);
    return 0;
}

int cmd_cumulant(const Flags& f) {
    const RunConfig rc = resolve(f, Scheme::Projection);
    validate(rc.params);
    const double lo = option<double>(rc, f.theta_min, "theta_min", -0.5);
    const double hi = option<double>(rc, f.theta_max, "theta_max", 2.0);
    const auto n = option<std::size_t>(rc, f.points, "points", 41);
    if (n < 2 || !(hi > lo)) throw ValidationError("need theta_max > theta_min and at least two points");
    std::vector<double> thetas(n);
    for (std::size_t i = 0; i < n; ++i) thetas[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const auto curve = cumulant_curve(rc.params, thetas);
    emit_csv(f.out, [&](std::ostream& os) { csv::write_columns(os, {"theta", "psi"}, {curve.theta_grid, curve.psi_values}); });
    if (f.out) {
        json j = envelope("cumulant", rc);
        j["points"] = n;
        j["shoot_tol"] = curve.shoot_tol;
        j["csv"] = *f.out;
        emit_json(j);
    }
    return 0;
}

int cmd_loss_ld(const Flags& f) {
    const RunConfig rc = resolve(f, Scheme::Projection);
    validate(rc.params);
    if (!f.c && !rc.options.contains("c")) throw ValidationError("loss-ld needs --c");
    const double c = option<double>(rc, f.c, "c", 0.0);
    const auto r = loss_ld_rate(rc.params, c);
    json j = envelope("loss-ld", rc);
    j["c"] = r.c;
    j["rate"] = r.rate;
    j["argmax_theta"] = r.argmax_theta;
    emit_json(j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << usage();
        return kExitUsage;
    }
    const std::string first = argv[1];
    if (first == "--help" || first == "-h") {
        std::cout << usage();
        return 0;
    }
    bool known = false;
    for (const auto& [name, help] : kCommands) known |= name == first;
    if (!known) {
        std::cerr << "unknown subcommand '" << first << "'\n\n" << usage();
        return kExitUsage;
    }

    CLI::App app{"Limit theorems for reflected Ornstein-Uhlenbeck processes", "rou-limits"};
    app.require_subcommand(1);
    Flags f;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : kCommands) subs[name] = app.add_subcommand(name, help);

    for (auto& [name, sub] : subs) add_model_flags(sub, f);

    add_query_flags(subs["decay-rate"], f);
    subs["decay-rate"]->add_option("--regime", f.regime, "ou | rou | drou (default: from boundary)");
    subs["decay-rate"]->add_option("--dt", f.dt, "grid step of the MLP CSV");
    add_out_flag(subs["decay-rate"], f);

    add_query_flags(subs["mlp"], f, true);
    subs["mlp"]->add_option("--dt", f.dt, "grid step");
    add_out_flag(subs["mlp"], f);

    add_query_flags(subs["rate-functional"], f, true);
    subs["rate-functional"]->add_option("--dt", f.dt, "grid step when evaluating the MLP");
    subs["rate-functional"]->add_option("--variant", f.variant, "I | Iplus | Iplusplus");
    subs["rate-functional"]->add_option("--path", f.path, "CSV file with columns t,value (default: the MLP)");
    subs["rate-functional"]->add_option("--boundary-tol", f.boundary_tol, "boundary indicator tolerance");

    subs["simulate"]->add_option("--T", f.T, "horizon");
    add_sim_flags(subs["simulate"], f, false);
    add_out_flag(subs["simulate"], f);

    add_query_flags(subs["tail"], f);
    add_sim_flags(subs["tail"], f, true);

    add_query_flags(subs["empirical-decay"], f);
    add_sim_flags(subs["empirical-decay"], f, true);
    subs["empirical-decay"]->add_option("--eps", f.eps, "comma-separated decreasing eps grid");

    subs["density"]->add_option("--points", f.points, "number of grid points on [0, d]");
    add_out_flag(subs["density"], f);

    subs["clt-check"]->add_option("--T", f.T, "horizon (default 1e4)");
    add_sim_flags(subs["clt-check"], f, true);
    subs["clt-check"]->add_option("--which", f.which, "upper | lower | both");
    add_out_flag(subs["clt-check"], f);

    subs["qv-check"]->add_option("--T", f.T, "horizon (default 1e4)");
    add_sim_flags(subs["qv-check"], f, false);

    subs["cumulant"]->add_option("--theta-min", f.theta_min, "grid start");
    subs["cumulant"]->add_option("--theta-max", f.theta_max, "grid end");
    subs["cumulant"]->add_option("--points", f.points, "grid points");
    add_out_flag(subs["cumulant"], f);

    subs["loss-ld"]->add_option("--c", f.c, "loss rate level c > 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    using Handler = int (*)(const Flags&);
    const std::map<std::string, Handler> handlers{
        {"decay-rate", cmd_decay_rate},   {"mlp", cmd_mlp},
        {"rate-functional", cmd_rate_functional}, {"simulate", cmd_simulate},
        {"tail", cmd_tail},               {"empirical-decay", cmd_empirical_decay},
        {"steady-state", cmd_steady_state}, {"density", cmd_density},
        {"clt-check", cmd_clt_check},     {"qv-check", cmd_qv_check},
        {"cumulant", cmd_cumulant},       {"loss-ld", cmd_loss_ld},
    };
    try {
        return handlers.at(first)(f);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const json::exception& e) {
        std::cerr << "error: bad configuration value: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
