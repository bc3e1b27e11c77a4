#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tempo/chsh.hpp"
#include "tempo/errors.hpp"
#include "tempo/functionals.hpp"
#include "tempo/protocol.hpp"

namespace tempo::cli {
namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_number(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string plain_value(const json& v) {
    if (v.is_number_float()) return format_number(v.get<double>(), 12);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) {
            if (!s.empty()) s += ",";
            s += plain_value(e);
        }
        return s;
    }
    return v.dump();
}

std::string csv_field(const json& v) {
    std::string s = v.is_number_float() ? format_number(v.get<double>(), 17)
                    : v.is_string()     ? v.get<std::string>()
                    : v.is_array()      ? [&] {
                          std::string a;
                          for (const auto& e : v) a += (a.empty() ? "" : " ") + csv_field(e);
                          return a;
                      }()
                                        : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return s;
}

bool is_table(const json& v) { return v.is_array() && !v.empty() && v.front().is_object(); }

void write_csv_table(const json& rows, std::ostream& out) {
    std::string header;
    for (const auto& [k, _] : rows.front().items()) header += (header.empty() ? "" : ",") + csv_field(k);
    out << header << '\n';
    for (const auto& row : rows) {
        std::string line;
        bool first = true;
        for (const auto& [_, v] : row.items()) {
            line += (first ? "" : ",") + csv_field(v);
            first = false;
        }
        out << line << '\n';
    }
}

// ---------------------------------------------------------------------------
// Argument parsing helpers

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": '" + item + "' is not a number");
        }
    }
    if (expected && values.size() != expected) {
        throw UsageError(std::string(what) + ": expected " + std::to_string(expected) + " comma-separated values, got " +
                         std::to_string(values.size()));
    }
    for (double v : values)
        if (!std::isfinite(v)) throw UsageError(std::string(what) + ": values must be finite");
    return values;
}

BlochAngles preset_angles(const std::string& name) {
    const double pi = std::numbers::pi;
    if (name == "z+") return {0.0, 0.0};
    if (name == "z-") return {pi / 2, 0.0};
    if (name == "x+") return {pi / 4, 0.0};
    if (name == "x-") return {3 * pi / 4, 0.0};
    throw UsageError("unknown state preset '" + name + "' (use z+, z-, x+, x-)");
}

/// Scenario options shared by tchsh, vfunc, sweep and optimize.
struct ScenarioArgs {
    std::string kind = "entangled-history";
    std::string psi, t1, t2;
    double theta = 0.0, phi = 0.0, theta_prime = 0.0, phi_prime = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--scenario", kind, "initial | product-history | entangled-history")
            ->check(CLI::IsMember({"initial", "product-history", "entangled-history"}));
        cmd->add_option("--psi", psi, "initial-state preset (z+, z-, x+, x-)");
        cmd->add_option("--t1", t1, "product-history preset at t1");
        cmd->add_option("--t2", t2, "product-history preset at t2");
        cmd->add_option("--theta", theta, "theta of the initial state / t1 state (radians)");
        cmd->add_option("--phi,--t-phi", phi, "phi of the initial state / t1 state (radians)");
        cmd->add_option("--theta-prime", theta_prime, "theta of the t2 state (radians)");
        cmd->add_option("--phi-prime,--t-phi-prime", phi_prime, "phi of the t2 state (radians)");
    }

    /// Applies presets, so theta/phi fields hold the effective angles.
    void resolve() {
        if (!psi.empty()) {
            const BlochAngles a = preset_angles(psi);
            theta = a.theta;
            phi = a.phi;
        }
        if (!t1.empty()) {
            const BlochAngles a = preset_angles(t1);
            theta = a.theta;
            phi = a.phi;
        }
        if (!t2.empty()) {
            const BlochAngles a = preset_angles(t2);
            theta_prime = a.theta;
            phi_prime = a.phi;
        }
    }

    Family family() const {
        if (kind == "initial") return Family::EvolvedInitial;
        if (kind == "product-history") return Family::ProductHistory;
        return Family::EntangledZz;
    }

    Scenario build() const {
        switch (family()) {
            case Family::EvolvedInitial: return evolved_initial_scenario(theta, phi);
            case Family::ProductHistory: return product_history_scenario(theta, phi, theta_prime, phi_prime);
            case Family::EntangledZz: break;
        }
        return entangled_zz_history();
    }

    json describe() const {
        json j;
        j["scenario"] = kind;
        switch (family()) {
            case Family::EvolvedInitial:
                j["theta"] = theta;
                j["phi"] = phi;
                break;
            case Family::ProductHistory:
                j["theta"] = theta;
                j["phi"] = phi;
                j["theta_prime"] = theta_prime;
                j["phi_prime"] = phi_prime;
                break;
            case Family::EntangledZz: break;
        }
        return j;
    }

    std::optional<double> oracle_v() const {
        switch (family()) {
            case Family::EvolvedInitial: return analytic_v_oracle(Family::EvolvedInitial, theta);
            case Family::ProductHistory: return analytic_v_oracle(Family::ProductHistory, theta, theta_prime);
            case Family::EntangledZz: return analytic_v_oracle(Family::EntangledZz);
        }
        return std::nullopt;
    }
};

AngleQuad parse_quad(const std::string& text) {
    if (text.empty()) return tsirelson_quad();
    const auto v = parse_list(text, 8, "--angles");
    return AngleQuad::from_flat(std::span<const double, 8>(v.data(), 8));
}

json quad_json(const AngleQuad& q) {
    json a = json::array();
    for (double v : q.flatten()) a.push_back(v);
    return a;
}

std::string verdict(double s) {
    return within_classical_bound(s) ? "within classical bound" : "violates classical bound";
}

TwoQubitKet parse_state(const std::string& spec) {
    if (spec == "bell-phi-plus") return bell_phi_plus();
    if (spec == "product-zz") return product_zz();
    const auto v = parse_list(spec, 8, "--state");
    std::array<Complex, 4> amps{};
    for (std::size_t i = 0; i < 4; ++i) amps[i] = {v[2 * i], v[2 * i + 1]};
    const Ket raw = Ket::residual(amps);
    if (raw.norm_squared() == 0.0) throw UsageError("--state: zero vector");
    return TwoQubitKet(raw.renormalized());
}

BellLabel parse_bell(const std::string& s) {
    for (BellLabel l : kBellOrder)
        if (to_string(l) == s) return l;
    throw UsageError("unknown Bell outcome '" + s + "'");
}

std::vector<double> linspace(double from, double to, int steps) {
    if (steps < 2) throw UsageError("--steps must be at least 2");
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) v[static_cast<std::size_t>(k)] = from + (to - from) * k / (steps - 1);
    return v;
}

/// Writes `value` into the sweep parameter `name`.
void set_param(const std::string& name, double value, ScenarioArgs& sc, std::array<double, 8>& quad) {
    static const std::array<std::string, 8> quad_names{"theta1", "phi1", "theta2", "phi2",
                                                       "theta3", "phi3", "theta4", "phi4"};
    for (std::size_t i = 0; i < quad_names.size(); ++i) {
        if (name == quad_names[i]) {
            quad[i] = value;
            return;
        }
    }
    if (name == "theta") sc.theta = value;
    else if (name == "phi") sc.phi = value;
    else if (name == "theta-prime") sc.theta_prime = value;
    else if (name == "phi-prime") sc.phi_prime = value;
    else throw UsageError("unknown sweep parameter '" + name + "'");
}

Format parse_format(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    return Format::Plain;
}

json base_metadata() {
    json m;
    m["version"] = kToolVersion;
    return m;
}

}  // namespace

json OutputRecord::to_json() const {
    json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["result"] = result;
    j["metadata"] = metadata;
    return j;
}

void render(const OutputRecord& record, Format format, std::ostream& out) {
    switch (format) {
        case Format::Json: out << record.to_json().dump() << '\n'; return;
        case Format::Csv: {
            bool wrote_table = false;
            for (const auto& [k, v] : record.result.items()) {
                if (is_table(v)) {
                    write_csv_table(v, out);
                    wrote_table = true;
                }
            }
            if (wrote_table) return;
            out << "key,value\n";
            for (const auto& [k, v] : record.result.items()) out << csv_field(k) << ',' << csv_field(v) << '\n';
            return;
        }
        case Format::Plain: {
            out << record.command << '\n';
            for (const auto& [k, v] : record.inputs.items()) out << "  " << k << " = " << plain_value(v) << '\n';
            for (const auto& [k, v] : record.result.items()) {
                if (is_table(v)) {
                    out << k << ":\n";
                    for (const auto& row : v) {
                        std::string line;
                        for (const auto& [rk, rv] : row.items()) line += "  " + rk + "=" + plain_value(rv);
                        out << line << '\n';
                    }
                } else {
                    out << k << ": " << plain_value(v) << '\n';
                }
            }
            return;
        }
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temporal CHSH and history-state functionals"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kToolVersion);

    std::string format_name = "plain";
    std::uint64_t seed = 0;
    app.add_option("--format", format_name, "plain | json | csv")->check(CLI::IsMember({"plain", "json", "csv"}));
    app.add_option("--seed", seed, "seed for Monte Carlo sampling and optimizer restarts");

    // chsh
    auto* chsh_cmd = app.add_subcommand("chsh", "spatial CHSH value S of a two-qubit state");
    std::string state_spec = "bell-phi-plus";
    std::string angles;
    chsh_cmd->add_option("--state", state_spec, "bell-phi-plus | product-zz | 8 comma-separated re,im components");
    chsh_cmd->add_option("--angles", angles, "t1,p1,t2,p2,t3,p3,t4,p4 in radians")->required();

    // tchsh
    auto* tchsh_cmd = app.add_subcommand("tchsh", "temporal CHSH value S~ of a scenario");
    ScenarioArgs tchsh_sc;
    tchsh_sc.attach(tchsh_cmd);
    tchsh_cmd->add_option("--angles", angles, "t1,p1,t2,p2,t3,p3,t4,p4 in radians (default: 0, pi/8, pi/4, 3pi/8)");

    // vfunc
    auto* vfunc_cmd = app.add_subcommand("vfunc", "mean (M) and variance (V) functionals with classification");
    ScenarioArgs vfunc_sc;
    vfunc_sc.attach(vfunc_cmd);
    int grid_n = QuadratureGrid::kDefaultPoints;
    std::uint64_t mc_samples = 0;
    double class_tol = kClassifyTolerance;
    vfunc_cmd->add_option("--grid", grid_n, "quadrature points per angle");
    vfunc_cmd->add_option("--monte-carlo", mc_samples, "also estimate by uniform sampling with this many samples");
    vfunc_cmd->add_option("--classify-tol", class_tol, "tolerance for the entanglement criterion");

    // protocol
    auto* protocol_cmd = app.add_subcommand("protocol", "gate-by-gate post-selected history protocol");
    std::string p_t1 = "0,0", p_t2 = "0,0", postselect = "phi+";
    bool perp_t1 = false, perp_t2 = false;
    protocol_cmd->add_option("--t1", p_t1, "theta,phi of the t1 projection");
    protocol_cmd->add_option("--t2", p_t2, "theta,phi of the t2 projection");
    protocol_cmd->add_flag("--perp-t1", perp_t1, "project onto chi_perp at t1");
    protocol_cmd->add_flag("--perp-t2", perp_t2, "project onto chi_perp at t2");
    protocol_cmd->add_option("--postselect", postselect, "Bell outcome kept on the auxiliary pair")
        ->check(CLI::IsMember({"phi+", "phi-", "psi+", "psi-"}));

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "CSV table of a quantity over one or two parameters");
    ScenarioArgs sweep_sc;
    sweep_sc.attach(sweep_cmd);
    std::string quantity = "s-temporal", param1, param2;
    double from1 = 0.0, to1 = 2 * std::numbers::pi, from2 = 0.0, to2 = 2 * std::numbers::pi;
    int steps1 = 0, steps2 = 0;
    sweep_cmd->add_option("--quantity", quantity, "s-temporal | v | correlator")
        ->check(CLI::IsMember({"s-temporal", "v", "correlator"}));
    sweep_cmd->add_option("--angles", angles, "base quad; correlator uses its first two settings");
    sweep_cmd->add_option("--grid", grid_n, "quadrature points per angle (quantity v)");
    sweep_cmd->add_option("--param", param1, "swept parameter")->required();
    sweep_cmd->add_option("--from", from1);
    sweep_cmd->add_option("--to", to1);
    sweep_cmd->add_option("--steps", steps1)->required();
    sweep_cmd->add_option("--param2", param2, "second swept parameter (varies fastest)");
    sweep_cmd->add_option("--from2", from2);
    sweep_cmd->add_option("--to2", to2);
    sweep_cmd->add_option("--steps2", steps2);

    // optimize
    auto* optimize_cmd = app.add_subcommand("optimize", "multi-start search for the largest |S~|");
    ScenarioArgs opt_sc;
    opt_sc.attach(optimize_cmd);
    int restarts = 32;
    double opt_tol = 1e-9;
    optimize_cmd->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
    optimize_cmd->add_option("--tol", opt_tol)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        (e.get_name() == "CallForVersion" ? out << kToolVersion << '\n' : out << app.help());
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    // Sweeps are tables; their natural format is CSV.
    if (*sweep_cmd && app.count("--format") == 0) format_name = "csv";
    const Format format = parse_format(format_name);

    OutputRecord rec;
    rec.metadata = base_metadata();
    rec.metadata["seed"] = seed;

    try {
        if (*chsh_cmd) {
            rec.command = "chsh";
            const TwoQubitKet psi = parse_state(state_spec);
            const AngleQuad q = parse_quad(angles);
            rec.inputs["state"] = state_spec;
            rec.inputs["angles"] = quad_json(q);
            const double s = s_spatial(psi, q);
            rec.result["E12"] = correlator_spatial(psi, q.a1, q.a2);
            rec.result["E14"] = correlator_spatial(psi, q.a1, q.a4);
            rec.result["E32"] = correlator_spatial(psi, q.a3, q.a2);
            rec.result["E34"] = correlator_spatial(psi, q.a3, q.a4);
            rec.result["S"] = s;
            rec.result["verdict"] = verdict(s);
            rec.metadata["bound_tolerance"] = kBoundTolerance;
        } else if (*tchsh_cmd) {
            rec.command = "tchsh";
            tchsh_sc.resolve();
            const AngleQuad q = parse_quad(angles);
            rec.inputs = tchsh_sc.describe();
            rec.inputs["angles"] = quad_json(q);
            const Scenario s = tchsh_sc.build();
            const double st = s_temporal(s, q);
            rec.result["E12"] = correlator_temporal(s, q.a1, q.a2);
            rec.result["E14"] = correlator_temporal(s, q.a1, q.a4);
            rec.result["E32"] = correlator_temporal(s, q.a3, q.a2);
            rec.result["E34"] = correlator_temporal(s, q.a3, q.a4);
            rec.result["S_temporal"] = st;
            rec.result["verdict"] = verdict(st);
            rec.metadata["bound_tolerance"] = kBoundTolerance;
        } else if (*vfunc_cmd) {
            rec.command = "vfunc";
            vfunc_sc.resolve();
            const QuadratureGrid grid(grid_n);
            rec.inputs = vfunc_sc.describe();
            const Scenario s = vfunc_sc.build();
            const FunctionalValues f = grid_functionals(s, grid);
            rec.result["M"] = f.m;
            rec.result["V"] = f.v;
            if (const auto oracle = vfunc_sc.oracle_v()) {
                rec.result["V_analytic"] = *oracle;
                rec.result["V_abs_deviation"] = std::abs(f.v - *oracle);
            }
            rec.result["classification"] = to_string(classify(f.v, class_tol));
            if (mc_samples > 0) {
                const MonteCarloEstimate mc = monte_carlo_functionals(s, mc_samples, seed);
                rec.result["M_monte_carlo"] = mc.m;
                rec.result["M_stderr"] = mc.m_stderr;
                rec.result["V_monte_carlo"] = mc.v;
                rec.result["V_stderr"] = mc.v_stderr;
                rec.metadata["samples"] = mc.samples;
            }
            rec.metadata["grid"] = grid_n;
            rec.metadata["tolerance"] = class_tol;
        } else if (*protocol_cmd) {
            rec.command = "protocol";
            const auto a = parse_list(p_t1, 2, "--t1");
            const auto b = parse_list(p_t2, 2, "--t2");
            const BlochAngles at1{a[0], a[1]}, at2{b[0], b[1]};
            const BellLabel label = parse_bell(postselect);
            rec.inputs["t1"] = json::array({a[0], a[1]});
            rec.inputs["t2"] = json::array({b[0], b[1]});
            rec.inputs["perp_t1"] = perp_t1;
            rec.inputs["perp_t2"] = perp_t2;
            rec.inputs["postselect"] = postselect;
            const RunRecord r = run_postselected_protocol(at1, at2, perp_t1, perp_t2, {label, 0.0});
            json steps = json::array();
            int idx = 0;
            for (const auto& st : r.step_log) {
                json row;
                row["step"] = ++idx;
                row["gate"] = describe(st.gate);
                row["probability"] = st.outcome_probability;
                steps.push_back(row);
            }
            // The closed form for phi+/phi- is the matching two-term z history;
            // psi+/psi- have no support.
            double analytic = 0.0;
            if (label == BellLabel::PhiPlus || label == BellLabel::PhiMinus) {
                const double sign = label == BellLabel::PhiPlus ? 1.0 : -1.0;
                const Scenario h = HistoryState({{kInvSqrt2, z_plus(), z_plus()}, {sign * kInvSqrt2, z_minus(), z_minus()}});
                analytic = std::norm(proj_amplitude(h, at1, at2, perp_t1, perp_t2));
            }
            const double renorm = std::norm(r.renormalized_amplitude);
            rec.result["steps"] = steps;
            rec.result["joint_probability"] = r.joint_probability;
            rec.result["postselection_probability"] = r.postselection_probability();
            rec.result["renormalized_probability"] = renorm;
            rec.result["analytic_probability"] = analytic;
            rec.result["abs_difference"] = std::abs(renorm - analytic);
        } else if (*sweep_cmd) {
            rec.command = "sweep";
            sweep_sc.resolve();
            const auto xs = linspace(from1, to1, steps1);
            const bool two = !param2.empty();
            const auto ys = two ? linspace(from2, to2, steps2) : std::vector<double>{0.0};
            const AngleQuad base = parse_quad(angles);
            const QuadratureGrid grid(grid_n);
            rec.inputs = sweep_sc.describe();
            rec.inputs["quantity"] = quantity;
            rec.inputs["angles"] = quad_json(base);
            rec.inputs["param"] = param1;
            if (two) rec.inputs["param2"] = param2;

            json rows = json::array();
            for (double x : xs) {
                for (double y : ys) {
                    ScenarioArgs sc = sweep_sc;
                    std::array<double, 8> flat = base.flatten();
                    set_param(param1, x, sc, flat);
                    if (two) set_param(param2, y, sc, flat);
                    const AngleQuad q = AngleQuad::from_flat(flat);
                    const Scenario s = sc.build();
                    double value = 0.0;
                    if (quantity == "s-temporal") value = s_temporal(s, q);
                    else if (quantity == "correlator") value = correlator_temporal(s, q.a1, q.a2);
                    else value = v_functional(s, grid);
                    json row;
                    row[param1] = x;
                    if (two) row[param2] = y;
                    row[quantity] = value;
                    rows.push_back(row);
                }
            }
            rec.result["rows"] = rows;
            if (quantity == "v") rec.metadata["grid"] = grid_n;
        } else if (*optimize_cmd) {
            rec.command = "optimize";
            opt_sc.resolve();
            rec.inputs = opt_sc.describe();
            rec.inputs["restarts"] = restarts;
            const ViolationSearch v = maximize_violation(opt_sc.build(), restarts, opt_tol, seed);
            const auto [lo, hi] = std::minmax_element(v.restart_values.begin(), v.restart_values.end());
            double mean = 0.0;
            int hits = 0;
            for (double r : v.restart_values) {
                mean += r;
                hits += v.value - r < 1e-6 ? 1 : 0;
            }
            mean /= static_cast<double>(v.restart_values.size());
            rec.result["best_abs_S_temporal"] = v.value;
            rec.result["best_angles"] = quad_json(v.best);
            rec.result["restart_min"] = *lo;
            rec.result["restart_mean"] = mean;
            rec.result["restart_max"] = *hi;
            rec.result["restarts_reaching_best"] = hits;
            rec.metadata["tolerance"] = opt_tol;
        }
    } catch (const NullHistory& e) {
        err << "error: null history: " << e.what() << '\n';
        return kExitDomain;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    render(rec, format, out);
    return kExitOk;
}

}  // namespace tempo::cli
