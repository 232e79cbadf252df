// qgate: design and verify driving pulses that implement single-qubit
// rotation gates at any speed, from a fraction of a qubit period up to the
// many-cycle resonant regime. Subcommands cover analytic seeds, fidelity
// optimization sweeps, pulse spectra, Bloch trajectories, the transition
// duration table, and delayed-pulse gate-set construction.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qgate/dynamics.hpp"
#include "qgate/envelope.hpp"
#include "qgate/errors.hpp"
#include "qgate/format.hpp"
#include "qgate/gateset.hpp"
#include "qgate/magnus.hpp"
#include "qgate/optimizer.hpp"
#include "qgate/pulse.hpp"
#include "qgate/seeders.hpp"
#include "qgate/su2.hpp"

namespace {

using json = nlohmann::json;
using namespace qgate;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSeedFailure = 3;
constexpr int kExitUnconverged = 4;

// Ties CLI options to JSON config keys: values from --config fill every
// option the command line did not set, so explicit flags always win, and a
// snapshot of the effective values is embedded in each output file.
class ConfigBinding {
public:
    template <typename T>
    void bind(CLI::Option* opt, std::string key, T& ref) {
        items_.push_back({opt, std::move(key),
                          [&ref](const json& j) { ref = j.get<T>(); },
                          [&ref] { return json(ref); }});
    }

    void apply(const json& cfg) const {
        for (const auto& item : items_)
            if (item.opt->count() == 0 && cfg.contains(item.key)) item.load(cfg.at(item.key));
    }

    json snapshot(const std::string& command) const {
        json out;
        out["command"] = command;
        for (const auto& item : items_) out[item.key] = item.save();
        return out;
    }

private:
    struct Item {
        CLI::Option* opt;
        std::string key;
        std::function<void(const json&)> load;
        std::function<json()> save;
    };
    std::vector<Item> items_;
};

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    json doc = json::parse(in);
    // Accept both bare configs and previously written output files.
    if (doc.is_object() && doc.contains("config")) return doc.at("config");
    return doc;
}

std::string default_out(const std::string& filename) {
    const char* dir = std::getenv("QGATE_OUT_DIR");
    if (dir != nullptr && *dir != '\0') return std::string(dir) + "/" + filename;
    return filename;
}

struct Table {
    std::vector<std::string> meta; // comment lines, without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& line : table.meta) out << "# " << line << "\n";
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_json(const std::string& path, const std::string& schema, const json& config,
                const Table& table) {
    json doc;
    doc["schema"] = schema;
    doc["config"] = config;
    json records = json::array();
    for (const auto& row : table.rows) {
        json rec;
        for (std::size_t i = 0; i < table.header.size(); ++i) rec[table.header[i]] = row[i];
        records.push_back(std::move(rec));
    }
    doc["records"] = std::move(records);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

void write_table(const std::string& path, const std::string& format, const std::string& schema,
                 const json& config, Table table) {
    table.meta.insert(table.meta.begin(), "schema: " + schema);
    if (format == "csv") {
        write_csv(path, table);
    } else if (format == "json") {
        write_json(path, schema, config, table);
    } else {
        throw std::invalid_argument("format: expected csv or json, got '" + format + "'");
    }
}

// Flags shared by every subcommand that takes a pulse family.
struct CommonFlags {
    std::string envelope = "gaussian";
    double ratio = 0; // 0 means the per-envelope default window
    std::string theta = "pi";
    std::string out;
    std::string format = "csv";
    std::string config_path;
};

struct ParsedCommon {
    EnvelopeKind kind;
    double ratio;
    double theta;
};

ParsedCommon resolve(const CommonFlags& flags) {
    ParsedCommon p{};
    p.kind = parse_envelope(flags.envelope);
    p.ratio = flags.ratio > 0 ? flags.ratio : default_window_ratio<double>(p.kind);
    if (!(p.ratio > 0)) throw std::invalid_argument("ratio: window ratio must be positive");
    p.theta = parse_angle(flags.theta);
    return p;
}

void bind_common(CLI::App* cmd, CommonFlags& flags, ConfigBinding& binding, bool with_output = true) {
    binding.bind(cmd->add_option("--envelope", flags.envelope,
                                 "envelope: gaussian, sech, triangular, constant"),
                 "envelope", flags.envelope);
    binding.bind(cmd->add_option("--ratio", flags.ratio,
                                 "window ratio T/tau_d (default: per-envelope)"),
                 "ratio", flags.ratio);
    binding.bind(cmd->add_option("--theta", flags.theta, "gate angle (radians, or pi forms like pi/2)"),
                 "theta", flags.theta);
    if (with_output) {
        binding.bind(cmd->add_option("--out", flags.out, "output file path"), "out", flags.out);
        binding.bind(cmd->add_option("--format", flags.format, "output format: csv or json"),
                     "format", flags.format);
    }
    cmd->add_option("--config", flags.config_path, "JSON config (or prior JSON output) to load");
}

void print_kv(const std::string& key, const std::string& value) {
    std::cout << "  " << key;
    for (std::size_t i = key.size(); i < 22; ++i) std::cout << ' ';
    std::cout << value << "\n";
}

void print_seed(const SeedResult<double>& seed, double tau_d) {
    std::cout << "regime " << to_string(seed.regime) << "\n";
    print_kv("Omega_tau_d", format_g(seed.Omega_tau_d));
    print_kv("omega_tau_d", format_g(seed.omega_tau_d));
    print_kv("Omega_over_omega0", format_g(seed.Omega_tau_d / (two_pi_v<double> * tau_d)));
    print_kv("omega_over_omega0", format_g(seed.omega_tau_d / (two_pi_v<double> * tau_d)));
    if (seed.regime == SeedRegime::subcycle) {
        print_kv("phi", format_g(seed.phi));
        print_kv("tau0_over_T0", format_g(seed.phi / two_pi_v<double>));
        print_kv("s1s_residual", format_g(seed.s1s_residual));
        print_kv("skipped_roots", std::to_string(seed.skipped_roots));
    }
    print_kv("s0", format_g(seed.s0));
    print_kv("s", format_g(seed.s));
}

std::vector<std::string> seed_row(const SeedResult<double>& seed, double tau_d) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool sub = seed.regime == SeedRegime::subcycle;
    return {to_string(seed.regime),
            format_g(seed.Omega_tau_d),
            format_g(seed.omega_tau_d),
            format_g(seed.Omega_tau_d / (two_pi_v<double> * tau_d)),
            format_g(seed.omega_tau_d / (two_pi_v<double> * tau_d)),
            format_g(sub ? seed.phi : nan),
            format_g(sub ? seed.phi / two_pi_v<double> : nan),
            format_g(seed.s0),
            format_g(seed.s),
            format_g(sub ? seed.s1s_residual : nan),
            std::to_string(seed.skipped_roots)};
}

// Seed-or-optimize parameter source used by spectra/trajectory/gateset: the
// analytic seed for the side of the transition tau_d falls on, optionally
// polished by the numerical optimizer.
struct PulseSource {
    PulseSpec<double> spec;
    std::string origin;
    SweepRecord<double> record; // filled when optimized
    bool optimized = false;
};

PulseSource seeded_pulse(EnvelopeKind kind, double ratio, double theta, double tau_d,
                         const ScanPolicy<double>& scan, bool optimize,
                         const OptimizeSettings<double>& settings) {
    const SeedResult<double> sub = seed_subcycle(kind, ratio, theta, scan);
    const double tau0 = sub.phi / two_pi_v<double>;
    PulseSource source;
    if (tau_d < tau0) {
        source.spec = to_pulse_spec(sub, kind, ratio, tau_d);
        source.origin = "subcycle";
    } else {
        source.spec = to_pulse_spec(seed_rwa(kind, ratio, theta, tau_d), kind, ratio, tau_d);
        source.origin = "rwa";
    }
    if (optimize) {
        const std::pair<double, double> init{source.spec.Omega_tau_d(), source.spec.omega_tau_d()};
        source.record = optimize_point(kind, ratio, theta, tau_d, init, settings);
        source.record.seed_source = source.origin;
        source.spec.Omega = source.record.Omega_tau_d / (two_pi_v<double> * tau_d);
        source.spec.omega = source.record.omega;
        source.origin = "optimize:" + source.origin;
        source.optimized = true;
    }
    return source;
}

int run_seed(const CommonFlags& flags, const ConfigBinding& binding, double tau_d,
             const std::string& regime, double scan_max) {
    const ParsedCommon p = resolve(flags);
    if (!(tau_d > 0)) throw std::invalid_argument("tau-d: duration must be positive");
    if (regime != "rwa" && regime != "subcycle" && regime != "both")
        throw std::invalid_argument("regime: expected rwa, subcycle, or both");
    ScanPolicy<double> scan;
    if (scan_max > 0) scan.hi = scan_max;

    std::vector<SeedResult<double>> seeds;
    if (regime == "rwa" || regime == "both") seeds.push_back(seed_rwa(p.kind, p.ratio, p.theta, tau_d));
    if (regime == "subcycle" || regime == "both")
        seeds.push_back(seed_subcycle(p.kind, p.ratio, p.theta, scan));
    for (const auto& seed : seeds) print_seed(seed, tau_d);

    if (!flags.out.empty()) {
        Table table;
        table.meta = {"command: seed", "envelope: " + flags.envelope, "ratio: " + format_g(p.ratio),
                      "theta: " + format_g(p.theta), "tau_d_over_T0: " + format_g(tau_d)};
        table.header = {"regime", "Omega_tau_d", "omega_tau_d", "Omega_over_omega0",
                        "omega_over_omega0", "phi", "tau0_over_T0", "s0", "s",
                        "s1s_residual", "skipped_roots"};
        for (const auto& seed : seeds) table.rows.push_back(seed_row(seed, tau_d));
        write_table(flags.out, flags.format, "seed-v1", binding.snapshot("seed"), table);
    }
    return kExitOk;
}

struct SweepFlags {
    double tau_min = 0.01, tau_max = 10;
    int points = 60;
    int max_iter = 500;
    double tolerance = 1e-14;
    double threshold = 1e-10;
    bool emit_fourier = false;
    bool reverse = false;
    int magnus_order = 0;
    double scan_max = 0;
};

int run_sweep(const CommonFlags& flags, const ConfigBinding& binding, const SweepFlags& sf) {
    const ParsedCommon p = resolve(flags);
    if (sf.magnus_order != 0 && sf.magnus_order != 2 && sf.magnus_order != 3)
        throw std::invalid_argument("magnus-order: expected 2 or 3");
    OptimizeSettings<double> settings;
    settings.tau_min = sf.tau_min;
    settings.tau_max = sf.tau_max;
    settings.grid_points = sf.points;
    settings.max_iterations = sf.max_iter;
    settings.tolerance = sf.tolerance;
    settings.converged_threshold = sf.threshold;
    settings.emit_fourier = sf.emit_fourier;
    settings.reverse = sf.reverse;
    ScanPolicy<double> scan;
    if (sf.scan_max > 0) scan.hi = sf.scan_max;

    const std::vector<SweepRecord<double>> records = sweep(p.kind, p.ratio, p.theta, settings, scan);

    Table table;
    table.meta = {"command: sweep", "envelope: " + flags.envelope, "ratio: " + format_g(p.ratio),
                  "theta: " + format_g(p.theta),
                  "converged_threshold: " + format_g(settings.converged_threshold)};
    table.header = {"tau_d_over_T0", "omega_over_omega0", "Omega_tau_d", "infidelity",
                    "g_res_over_theta", "converged", "seed_source"};
    std::string schema = "sweep-v1";
    if (sf.magnus_order != 0) {
        schema = "sweep-magnus-v1";
        table.meta.push_back("magnus_order: " + std::to_string(sf.magnus_order));
        table.header.push_back("magnus_Omega_tau_d");
        table.header.push_back("magnus_omega_over_omega0");
    }

    double worst = 0;
    bool all_converged = true;
    for (const auto& r : records) {
        worst = std::max(worst, r.infidelity);
        all_converged = all_converged && r.converged;
        std::vector<std::string> row = {format_g(r.tau_d),       format_g(r.omega),
                                        format_g(r.Omega_tau_d), format_g(r.infidelity),
                                        format_g(r.g_res_over_theta),
                                        r.converged ? "1" : "0", r.seed_source};
        if (sf.magnus_order != 0) {
            const MagnusSolution<double> sol =
                sf.magnus_order == 2 ? solve_second_order(p.kind, p.ratio, p.theta, r.tau_d)
                                     : solve_third_order(p.kind, p.ratio, p.theta, r.tau_d);
            row.push_back(format_g(sol.Omega_tau_d));
            row.push_back(format_g(sol.omega_tau_d / (two_pi_v<double> * r.tau_d)));
        }
        table.rows.push_back(std::move(row));
    }

    const std::string path = flags.out.empty()
                                 ? default_out(flags.format == "json" ? "sweep.json" : "sweep.csv")
                                 : flags.out;
    write_table(path, flags.format, schema, binding.snapshot("sweep"), table);
    std::cout << records.size() << " points, max infidelity " << format_g(worst) << ", wrote "
              << path << "\n";
    return all_converged ? kExitOk : kExitUnconverged;
}

struct SpectraFlags {
    double tau_d = 0.1;
    double wmin = 0, wmax = 3;
    int points = 301;
    std::string source = "optimize"; // optimize | seed | manual
    double Omega = -1, carrier = -1;
};

int run_spectra(const CommonFlags& flags, const ConfigBinding& binding, const SpectraFlags& sp) {
    const ParsedCommon p = resolve(flags);
    if (!(sp.tau_d > 0)) throw std::invalid_argument("tau-d: duration must be positive");

    PulseSpec<double> spec;
    std::string origin = sp.source;
    if (sp.source == "manual") {
        if (sp.Omega < 0 || sp.carrier < 0)
            throw std::invalid_argument("manual source needs --Omega and --carrier");
        spec.envelope = p.kind;
        spec.window_ratio = p.ratio;
        spec.tau_d = sp.tau_d;
        spec.Omega = sp.Omega;
        spec.omega = sp.carrier;
    } else if (sp.source == "seed" || sp.source == "optimize") {
        PulseSource src = seeded_pulse(p.kind, p.ratio, p.theta, sp.tau_d, {},
                                       sp.source == "optimize", {});
        spec = src.spec;
        origin = src.origin;
    } else {
        throw std::invalid_argument("source: expected optimize, seed, or manual");
    }

    const std::vector<SpectrumRecord<double>> records = spectrum(spec, sp.wmin, sp.wmax, sp.points);
    Table table;
    table.meta = {"command: spectra", "envelope: " + flags.envelope, "ratio: " + format_g(p.ratio),
                  "theta: " + format_g(p.theta), "tau_d_over_T0: " + format_g(sp.tau_d),
                  "source: " + origin, "Omega_over_omega0: " + format_g(spec.Omega),
                  "omega_over_omega0: " + format_g(spec.omega)};
    table.header = {"omega_tilde_over_omega0", "g_rad", "g_over_theta"};
    for (const auto& r : records)
        table.rows.push_back({format_g(r.omega_tilde), format_g(r.g), format_g(r.g / p.theta)});

    const std::string path = flags.out.empty()
                                 ? default_out(flags.format == "json" ? "spectra.json" : "spectra.csv")
                                 : flags.out;
    write_table(path, flags.format, "spectra-v1", binding.snapshot("spectra"), table);
    std::cout << records.size() << " points, g(omega0)/theta "
              << format_g(fourier_component(spec, 1.0) / p.theta) << ", wrote " << path << "\n";
    return kExitOk;
}

struct TrajectoryFlags {
    double tau_d = 0.1;
    int samples = 401;
    std::string source = "seed"; // seed | optimize
    double omega = -1;   // drive strength override, units of omega0
    double carrier = -1; // carrier frequency override, units of omega0
    bool have_omega = false, have_carrier = false;
};

int run_trajectory(const CommonFlags& flags, const ConfigBinding& binding, const TrajectoryFlags& tf) {
    const ParsedCommon p = resolve(flags);
    if (!(tf.tau_d > 0)) throw std::invalid_argument("tau-d: duration must be positive");
    if (tf.source != "seed" && tf.source != "optimize")
        throw std::invalid_argument("source: expected seed or optimize");

    PulseSpec<double> spec;
    std::string origin;
    if (tf.have_omega && tf.have_carrier) {
        spec.envelope = p.kind; // both parameters given: no seeding needed
        spec.window_ratio = p.ratio;
        spec.tau_d = tf.tau_d;
        origin = "manual";
    } else {
        PulseSource src =
            seeded_pulse(p.kind, p.ratio, p.theta, tf.tau_d, {}, tf.source == "optimize", {});
        spec = src.spec;
        origin = src.origin;
    }
    if (tf.have_omega) {
        if (tf.omega < 0) throw std::invalid_argument("omega: drive strength must be nonnegative");
        spec.Omega = tf.omega;
    }
    if (tf.have_carrier) {
        if (tf.carrier < 0) throw std::invalid_argument("carrier: frequency must be nonnegative");
        spec.omega = tf.carrier;
    }

    Spinor<double> ground;
    ground << 1, 0;
    const auto samples = propagate_lab(spec, ground, tf.samples);

    Table table;
    table.meta = {"command: trajectory", "envelope: " + flags.envelope,
                  "ratio: " + format_g(p.ratio), "tau_d_over_T0: " + format_g(tf.tau_d),
                  "source: " + origin, "Omega_over_omega0: " + format_g(spec.Omega),
                  "omega_over_omega0: " + format_g(spec.omega)};
    table.header = {"t_over_T0", "bloch_x", "bloch_y", "bloch_z"};
    for (const auto& [t, r] : samples)
        table.rows.push_back({format_g(t / spec.qubit_period()), format_g(r[0]), format_g(r[1]),
                              format_g(r[2])});

    const std::string path =
        flags.out.empty() ? default_out(flags.format == "json" ? "trajectory.json" : "trajectory.csv")
                          : flags.out;
    write_table(path, flags.format, "trajectory-v1", binding.snapshot("trajectory"), table);
    std::cout << samples.size() << " samples, wrote " << path << "\n";
    return kExitOk;
}

int run_table1(const std::string& out, const std::string& format, const ConfigBinding& binding) {
    struct Row {
        EnvelopeKind kind;
        const char* name;
        double ratio;
        const char* theta_label;
        double theta;
    };
    const Row rows[] = {
        {EnvelopeKind::constant, "constant", 1, "pi", pi_v<double>},
        {EnvelopeKind::triangular, "triangular", 2, "pi", pi_v<double>},
        {EnvelopeKind::sech, "sech", 5, "pi", pi_v<double>},
        {EnvelopeKind::gaussian, "gaussian", 5, "pi", pi_v<double>},
        {EnvelopeKind::gaussian, "gaussian", 5, "pi/2", pi_v<double> / 2},
        {EnvelopeKind::gaussian, "gaussian", 5, "pi/4", pi_v<double> / 4},
    };

    Table table;
    table.meta = {"command: table1"};
    table.header = {"envelope", "window_ratio", "theta_g_rad", "tau0_over_T0"};
    std::cout << "envelope     T/tau_d  theta    tau0/T0\n";
    for (const Row& row : rows) {
        const double tau0 = transition_duration(row.kind, row.ratio, row.theta);
        std::printf("%-12s %-8g %-8s %.6f\n", row.name, row.ratio, row.theta_label, tau0);
        table.rows.push_back({row.name, format_g(row.ratio), format_g(row.theta), format_g(tau0)});
    }
    if (!out.empty()) write_table(out, format, "table1-v1", binding.snapshot("table1"), table);
    return kExitOk;
}

struct GatesetFlags {
    std::string target = "rx:pi";
    double tau_d = 0.1;
    int max_iter = 500;
    double threshold = 1e-10;
};

int run_gateset(const CommonFlags& flags, const ConfigBinding& binding, const GatesetFlags& gf) {
    const ParsedCommon p = resolve(flags);
    const GateTarget<double> target = parse_target(gf.target);
    if (!(gf.tau_d > 0)) throw std::invalid_argument("tau-d: duration must be positive");

    GateLibrary<double> library;
    SweepRecord<double> base{};
    bool base_converged = true;
    if (target.axis != Axis::z && target.angle != 0) {
        OptimizeSettings<double> settings;
        settings.max_iterations = gf.max_iter;
        settings.converged_threshold = gf.threshold;
        const double mag = std::abs(target.angle);
        PulseSource src = seeded_pulse(p.kind, p.ratio, mag, gf.tau_d, {}, true, settings);
        base = src.record;
        base_converged = base.converged;
        library.add(mag, src.spec);
    }

    const GatePlan<double> plan = plan_gate(target, library);
    const VerifyReport<double> report = verify_plan(plan);

    std::cout << "target " << gf.target << "\n";
    if (plan.has_pulse) {
        print_kv("t0_over_T0", format_g(plan.t0 / plan.base.qubit_period()));
        print_kv("quarter_multiple", std::to_string(plan.quarter_multiple));
        print_kv("k", std::to_string(plan.k));
        print_kv("base_Omega_tau_d", format_g(plan.base.Omega_tau_d()));
        print_kv("base_omega_over_omega0", format_g(plan.base.omega));
        print_kv("base_infidelity", format_g(base.infidelity));
        print_kv("entanglement_fidelity", format_g(report.entanglement_fidelity));
    } else {
        print_kv("virtual_z_rad", format_g(plan.virtual_z));
        print_kv("entanglement_fidelity", format_g(report.entanglement_fidelity));
    }

    if (!flags.out.empty()) {
        Table table;
        table.meta = {"command: gateset", "envelope: " + flags.envelope,
                      "ratio: " + format_g(p.ratio), "tau_d_over_T0: " + format_g(gf.tau_d)};
        table.header = {"target", "has_pulse", "t0_over_T0", "quarter_multiple", "k",
                        "virtual_z_rad", "base_Omega_tau_d", "base_omega_over_omega0",
                        "base_infidelity", "entanglement_fidelity"};
        table.rows.push_back({gf.target, plan.has_pulse ? "1" : "0",
                              format_g(plan.has_pulse ? plan.t0 / plan.base.qubit_period() : 0.0),
                              std::to_string(plan.quarter_multiple), std::to_string(plan.k),
                              format_g(plan.virtual_z), format_g(plan.base.Omega_tau_d()),
                              format_g(plan.base.omega), format_g(base.infidelity),
                              format_g(report.entanglement_fidelity)});
        write_table(flags.out, flags.format, "gateset-v1", binding.snapshot("gateset"), table);
    }
    return base_converged ? kExitOk : kExitUnconverged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulse design for single-qubit rotation gates at any speed"};
    app.require_subcommand(1);

    // seed
    CommonFlags seed_common;
    ConfigBinding seed_binding;
    double seed_tau_d = 0.1;
    std::string seed_regime = "subcycle";
    double seed_scan_max = 0;
    CLI::App* seed_cmd = app.add_subcommand("seed", "analytic pulse parameters for a target gate");
    bind_common(seed_cmd, seed_common, seed_binding);
    seed_binding.bind(seed_cmd->add_option("--tau-d", seed_tau_d, "pulse duration, units of T0"),
                      "tau_d", seed_tau_d);
    seed_binding.bind(seed_cmd->add_option("--regime", seed_regime, "rwa, subcycle, or both"),
                      "regime", seed_regime);
    seed_binding.bind(seed_cmd->add_option("--scan-max", seed_scan_max,
                                           "carrier-phase scan upper bound (radians)"),
                      "scan_max", seed_scan_max);

    // sweep
    CommonFlags sweep_common;
    ConfigBinding sweep_binding;
    SweepFlags sweep_flags;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "fidelity-optimized continuation over tau_d");
    bind_common(sweep_cmd, sweep_common, sweep_binding);
    sweep_binding.bind(sweep_cmd->add_option("--tau-min", sweep_flags.tau_min, "grid start, units of T0"),
                       "tau_min", sweep_flags.tau_min);
    sweep_binding.bind(sweep_cmd->add_option("--tau-max", sweep_flags.tau_max, "grid end, units of T0"),
                       "tau_max", sweep_flags.tau_max);
    sweep_binding.bind(sweep_cmd->add_option("--points", sweep_flags.points, "grid size"),
                       "points", sweep_flags.points);
    sweep_binding.bind(sweep_cmd->add_option("--max-iter", sweep_flags.max_iter,
                                             "simplex iteration cap per point"),
                       "max_iter", sweep_flags.max_iter);
    sweep_binding.bind(sweep_cmd->add_option("--tolerance", sweep_flags.tolerance,
                                             "simplex value-spread stop"),
                       "tolerance", sweep_flags.tolerance);
    sweep_binding.bind(sweep_cmd->add_option("--threshold", sweep_flags.threshold,
                                             "infidelity below this counts as converged"),
                       "threshold", sweep_flags.threshold);
    sweep_binding.bind(sweep_cmd->add_flag("--emit-fourier", sweep_flags.emit_fourier,
                                           "fill the g_res_over_theta column"),
                       "emit_fourier", sweep_flags.emit_fourier);
    sweep_binding.bind(sweep_cmd->add_flag("--reverse", sweep_flags.reverse,
                                           "sweep large-to-small (consistency check)"),
                       "reverse", sweep_flags.reverse);
    sweep_binding.bind(sweep_cmd->add_option("--magnus-order", sweep_flags.magnus_order,
                                             "append expansion-solver columns (2 or 3)"),
                       "magnus_order", sweep_flags.magnus_order);
    sweep_binding.bind(sweep_cmd->add_option("--scan-max", sweep_flags.scan_max,
                                             "carrier-phase scan upper bound (radians)"),
                       "scan_max", sweep_flags.scan_max);

    // spectra
    CommonFlags spectra_common;
    ConfigBinding spectra_binding;
    SpectraFlags spectra_flags;
    CLI::App* spectra_cmd = app.add_subcommand("spectra", "Fourier component over a frequency grid");
    bind_common(spectra_cmd, spectra_common, spectra_binding);
    spectra_binding.bind(spectra_cmd->add_option("--tau-d", spectra_flags.tau_d,
                                                 "pulse duration, units of T0"),
                         "tau_d", spectra_flags.tau_d);
    spectra_binding.bind(spectra_cmd->add_option("--wmin", spectra_flags.wmin,
                                                 "grid start, units of omega0"),
                         "wmin", spectra_flags.wmin);
    spectra_binding.bind(spectra_cmd->add_option("--wmax", spectra_flags.wmax,
                                                 "grid end, units of omega0"),
                         "wmax", spectra_flags.wmax);
    spectra_binding.bind(spectra_cmd->add_option("--points", spectra_flags.points, "grid size"),
                         "points", spectra_flags.points);
    spectra_binding.bind(spectra_cmd->add_option("--source", spectra_flags.source,
                                                 "pulse parameters: optimize, seed, or manual"),
                         "source", spectra_flags.source);
    spectra_binding.bind(spectra_cmd->add_option("--Omega", spectra_flags.Omega,
                                                 "drive strength for --source manual"),
                         "Omega", spectra_flags.Omega);
    spectra_binding.bind(spectra_cmd->add_option("--carrier", spectra_flags.carrier,
                                                 "carrier frequency for --source manual"),
                         "carrier", spectra_flags.carrier);

    // trajectory
    CommonFlags traj_common;
    ConfigBinding traj_binding;
    TrajectoryFlags traj_flags;
    CLI::App* traj_cmd = app.add_subcommand("trajectory", "lab-frame Bloch trajectory from the ground state");
    bind_common(traj_cmd, traj_common, traj_binding);
    traj_binding.bind(traj_cmd->add_option("--tau-d", traj_flags.tau_d, "pulse duration, units of T0"),
                      "tau_d", traj_flags.tau_d);
    traj_binding.bind(traj_cmd->add_option("--samples", traj_flags.samples, "output sample count"),
                      "samples", traj_flags.samples);
    traj_binding.bind(traj_cmd->add_option("--source", traj_flags.source,
                                           "pulse parameters: seed or optimize"),
                      "source", traj_flags.source);
    CLI::Option* omega_opt = traj_cmd->add_option("--omega", traj_flags.omega,
                                                  "drive strength override, units of omega0");
    traj_binding.bind(omega_opt, "omega", traj_flags.omega);
    CLI::Option* carrier_opt = traj_cmd->add_option("--carrier", traj_flags.carrier,
                                                    "carrier frequency override, units of omega0");
    traj_binding.bind(carrier_opt, "carrier", traj_flags.carrier);

    // table1
    ConfigBinding table1_binding;
    std::string table1_out, table1_format = "csv";
    std::string table1_config;
    CLI::App* table1_cmd = app.add_subcommand("table1", "transition durations for the standard envelopes");
    table1_binding.bind(table1_cmd->add_option("--out", table1_out, "output file path"),
                        "out", table1_out);
    table1_binding.bind(table1_cmd->add_option("--format", table1_format, "output format: csv or json"),
                        "format", table1_format);
    table1_cmd->add_option("--config", table1_config, "JSON config to load");

    // gateset
    CommonFlags gateset_common;
    ConfigBinding gateset_binding;
    GatesetFlags gateset_flags;
    CLI::App* gateset_cmd = app.add_subcommand("gateset", "plan and verify a delayed-pulse gate");
    bind_common(gateset_cmd, gateset_common, gateset_binding);
    gateset_binding.bind(gateset_cmd->add_option("--target", gateset_flags.target,
                                                 "gate as axis:angle, e.g. ry:pi/2"),
                         "target", gateset_flags.target);
    gateset_binding.bind(gateset_cmd->add_option("--tau-d", gateset_flags.tau_d,
                                                 "base pulse duration, units of T0"),
                         "tau_d", gateset_flags.tau_d);
    gateset_binding.bind(gateset_cmd->add_option("--max-iter", gateset_flags.max_iter,
                                                 "simplex iteration cap"),
                         "max_iter", gateset_flags.max_iter);
    gateset_binding.bind(gateset_cmd->add_option("--threshold", gateset_flags.threshold,
                                                 "infidelity below this counts as converged"),
                         "threshold", gateset_flags.threshold);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (seed_cmd->parsed()) {
            if (!seed_common.config_path.empty())
                seed_binding.apply(load_config_file(seed_common.config_path));
            return run_seed(seed_common, seed_binding, seed_tau_d, seed_regime, seed_scan_max);
        }
        if (sweep_cmd->parsed()) {
            if (!sweep_common.config_path.empty())
                sweep_binding.apply(load_config_file(sweep_common.config_path));
            return run_sweep(sweep_common, sweep_binding, sweep_flags);
        }
        if (spectra_cmd->parsed()) {
            if (!spectra_common.config_path.empty())
                spectra_binding.apply(load_config_file(spectra_common.config_path));
            return run_spectra(spectra_common, spectra_binding, spectra_flags);
        }
        if (traj_cmd->parsed()) {
            if (!traj_common.config_path.empty())
                traj_binding.apply(load_config_file(traj_common.config_path));
            traj_flags.have_omega = omega_opt->count() > 0;
            traj_flags.have_carrier = carrier_opt->count() > 0;
            if (!traj_common.config_path.empty()) {
                const json cfg = load_config_file(traj_common.config_path);
                traj_flags.have_omega = traj_flags.have_omega || cfg.contains("omega");
                traj_flags.have_carrier = traj_flags.have_carrier || cfg.contains("carrier");
            }
            return run_trajectory(traj_common, traj_binding, traj_flags);
        }
        if (table1_cmd->parsed()) {
            if (!table1_config.empty()) table1_binding.apply(load_config_file(table1_config));
            return run_table1(table1_out, table1_format, table1_binding);
        }
        if (gateset_cmd->parsed()) {
            if (!gateset_common.config_path.empty())
                gateset_binding.apply(load_config_file(gateset_common.config_path));
            return run_gateset(gateset_common, gateset_binding, gateset_flags);
        }
    } catch (const SeedError& e) {
        std::cerr << "seed failure: " << e.what() << "\n";
        return kExitSeedFailure;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSeedFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
