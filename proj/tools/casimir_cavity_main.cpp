// casimir-cavity: command line front end over the cavity force library.
// Subcommands map one-to-one onto the library drivers; every output file
// carries the constants, tolerances, sign convention and material digests
// it was produced under, and reruns of the same configuration are
// byte-identical regardless of the worker count.

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/force.hpp"
#include "casimir/multilayer.hpp"
#include "casimir/oscillator.hpp"
#include "casimir/runconfig.hpp"
#include "casimir/validation.hpp"

namespace {

using nlohmann::ordered_json;
using Row = ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_digest(std::uint64_t d) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016" PRIx64, d);
    return buf;
}

// ---------------------------------------------------------------------------
// output document

struct OutputDoc {
    ordered_json meta = ordered_json::object();
    std::vector<std::string> columns;
    std::vector<Row> rows;
};

std::string csv_field(const ordered_json& v) {
    std::string s;
    if (v.is_string())
        s = v.get<std::string>();
    else if (v.is_number_float())
        s = format_double(v.get<double>());
    else
        s = v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

void write_csv(std::ostream& os, const OutputDoc& doc) {
    for (auto it = doc.meta.begin(); it != doc.meta.end(); ++it)
        os << "# " << it.key() << " = " << csv_field(it.value()) << "\n";
    for (std::size_t i = 0; i < doc.columns.size(); ++i)
        os << (i ? "," : "") << doc.columns[i];
    os << "\n";
    for (const Row& row : doc.rows) {
        for (std::size_t i = 0; i < doc.columns.size(); ++i)
            os << (i ? "," : "") << csv_field(row.at(doc.columns[i]));
        os << "\n";
    }
}

void write_json(std::ostream& os, const OutputDoc& doc) {
    ordered_json j;
    j["meta"] = doc.meta;
    j["rows"] = doc.rows;
    os << j.dump(2) << "\n";
}

void emit(const OutputDoc& doc, casimir::OutputFormat format, const std::string& out_path) {
    std::ostringstream buf;
    if (format == casimir::OutputFormat::csv)
        write_csv(buf, doc);
    else
        write_json(buf, doc);
    if (out_path.empty()) {
        std::cout << buf.str();
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw casimir::ConfigError(out_path + ": cannot open for writing");
    f << buf.str();
    if (!f) throw casimir::ConfigError(out_path + ": write failed");
}

ordered_json base_meta(const casimir::RunConfig& cfg, const char* command,
                       double tolerance_scale) {
    ordered_json m;
    m["tool"] = "casimir-cavity";
    m["tool_version"] = casimir::tool_version;
    m["command"] = command;
    m["sign_convention"] = casimir::pressure_sign_convention;
    m["hbar_J_s"] = casimir::hbar;
    m["c_m_per_s"] = casimir::c_light;
    m["k_B_J_per_K"] = casimir::k_boltzmann;
    m["h_nm"] = cfg.h * 1e9;
    m["b_nm"] = cfg.b * 1e9;
    m["wall_material"] = cfg.wall.name;
    m["wall_digest"] = format_digest(cfg.wall.digest);
    m["slab_material"] = cfg.slab.name;
    m["slab_digest"] = format_digest(cfg.slab.digest);
    m["gap_material"] = cfg.gap.name;
    m["gap_digest"] = format_digest(cfg.gap.digest);
    m["rel_tol"] = cfg.quad.rel_tol;
    m["abs_tol"] = cfg.quad.abs_tol;
    m["tolerance_scale"] = tolerance_scale;
    m["strict"] = cfg.strict;
    return m;
}

// ---------------------------------------------------------------------------
// row-level worker pool; results land in input order so the output bytes do
// not depend on the worker count

std::vector<Row> run_jobs(int workers, std::size_t n_jobs,
                          const std::function<std::vector<Row>(std::size_t)>& job) {
    std::vector<std::vector<Row>> slots(n_jobs);
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_jobs) return;
            try {
                slots[i] = job(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int n = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(std::max(workers, 1)), std::max<std::size_t>(n_jobs, 1)));
    if (n <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<Row> rows;
    for (auto& s : slots)
        for (Row& r : s) rows.push_back(std::move(r));
    return rows;
}

std::mutex warn_mutex;

void warn(const std::string& context, const std::exception& e) {
    const std::lock_guard<std::mutex> lock(warn_mutex);
    std::cerr << "warning: " << context << ": " << e.what() << "\n";
}

std::string failure_kind(const std::exception& e) {
    if (dynamic_cast<const casimir::ConvergenceError*>(&e)) return "convergence_error";
    if (dynamic_cast<const casimir::InstabilityError*>(&e)) return "instability_error";
    if (dynamic_cast<const casimir::NumericalDegeneracyError*>(&e)) return "numerical_degeneracy";
    if (dynamic_cast<const casimir::ConfigError*>(&e)) return "config_error";
    if (dynamic_cast<const std::domain_error*>(&e)) return "domain_error";
    return "error";
}

bool all_rows_ok(const std::vector<Row>& rows) {
    for (const Row& r : rows)
        if (r.contains("status") && r.at("status") != "ok") return false;
    return true;
}

struct Common {
    std::string config;
    std::string out;
    std::string format;  // empty = take the configured one
    int workers = 1;
    double tolerance_scale = 1.0;
};

casimir::OutputFormat effective_format(const casimir::RunConfig& cfg, const Common& c) {
    if (c.format.empty()) return cfg.format;
    return c.format == "json" ? casimir::OutputFormat::json : casimir::OutputFormat::csv;
}

int finish_run(OutputDoc& doc, const casimir::RunConfig& cfg, const Common& c,
               const std::vector<Row>& rows) {
    const bool ok = all_rows_ok(rows);
    emit(doc, effective_format(cfg, c), c.out);
    return !ok && cfg.strict ? 3 : 0;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_force_sweep(const casimir::RunConfig& cfg, const Common& c) {
    OutputDoc doc;
    doc.meta = base_meta(cfg, "force-sweep", c.tolerance_scale);
    doc.columns = {"delta_nm",        "T_K",
                   "pressure_N_per_m2", "ratio_to_ideal",
                   "error_estimate_N_per_m2", "matsubara_terms",
                   "status"};
    struct Job {
        double T, delta;
    };
    std::vector<Job> jobs;
    for (double T : cfg.temperatures)
        for (double delta : cfg.delta_grid) jobs.push_back({T, delta});
    const casimir::MaterialSet mats = cfg.materials();

    doc.rows = run_jobs(c.workers, jobs.size(), [&](std::size_t i) -> std::vector<Row> {
        const Job& job = jobs[i];
        Row r;
        r["delta_nm"] = job.delta * 1e9;
        r["T_K"] = job.T;
        double pressure = 0.0, err = 0.0;
        int terms = 0;
        std::string status = "ok";
        try {
            const casimir::CavityGeometry geom =
                casimir::CavityGeometry::from_h_delta(cfg.h, cfg.b, job.delta);
            const casimir::ForceResult res =
                job.T == 0.0
                    ? casimir::pressure_zero_temperature(geom, mats, cfg.quad)
                    : casimir::pressure_finite_temperature(geom, mats, job.T, cfg.quad);
            pressure = res.pressure;
            err = res.quadrature_error;
            terms = res.matsubara_terms;
        } catch (const casimir::ConvergenceError& e) {
            pressure = e.partial_value;
            err = e.error_estimate;
            status = failure_kind(e);
            warn("force-sweep row " + std::to_string(i), e);
        } catch (const std::exception& e) {
            status = failure_kind(e);
            warn("force-sweep row " + std::to_string(i), e);
        }
        const double ideal = casimir::ideal_pressure(cfg.h, job.delta);
        r["pressure_N_per_m2"] = pressure;
        r["ratio_to_ideal"] = ideal == 0.0 ? 0.0 : pressure / ideal;
        r["error_estimate_N_per_m2"] = err;
        r["matsubara_terms"] = terms;
        r["status"] = status;
        return {r};
    });
    return finish_run(doc, cfg, c, doc.rows);
}

int cmd_taylor(const casimir::RunConfig& cfg, const Common& c) {
    const double step = cfg.h / 1000.0;
    OutputDoc doc;
    doc.meta = base_meta(cfg, "taylor", c.tolerance_scale);
    doc.meta["fd_step_nm"] = step * 1e9;
    doc.columns = {"T_K",
                   "a1_N_per_m3",
                   "a1_ideal_N_per_m3",
                   "fd_estimate_N_per_m3",
                   "fd_rel_dev",
                   "error_estimate_N_per_m3",
                   "matsubara_terms",
                   "status"};
    const casimir::MaterialSet mats = cfg.materials();
    const double a1_ideal = casimir::ideal_taylor_coefficient(cfg.h);

    doc.rows = run_jobs(c.workers, cfg.temperatures.size(), [&](std::size_t i) -> std::vector<Row> {
        const double T = cfg.temperatures[i];
        Row r;
        r["T_K"] = T;
        double a1 = 0.0, fd = 0.0, err = 0.0;
        int terms = 0;
        std::string status = "ok";
        try {
            const casimir::TaylorCoefficient tc =
                casimir::taylor_coefficient(cfg.h, cfg.b, mats, T, cfg.quad);
            a1 = tc.a1;
            err = tc.quadrature_error;
            terms = tc.matsubara_terms;
            auto force_at = [&](double delta) {
                const casimir::CavityGeometry geom =
                    casimir::CavityGeometry::from_h_delta(cfg.h, cfg.b, delta);
                return (T == 0.0
                            ? casimir::pressure_zero_temperature(geom, mats, cfg.quad)
                            : casimir::pressure_finite_temperature(geom, mats, T, cfg.quad))
                    .pressure;
            };
            // Richardson pair: the plain ratio carries an O(step^2) bias from
            // the cubic force term
            fd = (8.0 * force_at(step / 2.0) - force_at(step)) / (3.0 * step);
        } catch (const std::exception& e) {
            status = failure_kind(e);
            warn("taylor row " + std::to_string(i), e);
        }
        r["a1_N_per_m3"] = a1;
        r["a1_ideal_N_per_m3"] = a1_ideal;
        r["fd_estimate_N_per_m3"] = fd;
        r["fd_rel_dev"] = a1 == 0.0 ? 0.0 : std::abs(fd - a1) / std::abs(a1);
        r["error_estimate_N_per_m3"] = err;
        r["matsubara_terms"] = terms;
        r["status"] = status;
        return {r};
    });
    return finish_run(doc, cfg, c, doc.rows);
}

int cmd_freq_shift(const casimir::RunConfig& cfg, const Common& c) {
    if (!cfg.has_oscillator)
        throw casimir::ConfigError(c.config + ": freq-shift needs the oscillator block");
    OutputDoc doc;
    doc.meta = base_meta(cfg, "freq-shift", c.tolerance_scale);
    doc.meta["k_spring_N_per_m3"] = cfg.k_spring;
    doc.meta["m_area_kg_per_m2"] = cfg.m_area;
    doc.columns = {"T_K",
                   "a1_N_per_m3",
                   "omega_free_rad_per_s",
                   "omega_rad_per_s",
                   "shift_exact_rad_per_s",
                   "shift_first_order_rad_per_s",
                   "first_order_reliable",
                   "status"};
    const casimir::MaterialSet mats = cfg.materials();

    doc.rows = run_jobs(c.workers, cfg.temperatures.size(), [&](std::size_t i) -> std::vector<Row> {
        const double T = cfg.temperatures[i];
        Row r;
        r["T_K"] = T;
        casimir::FrequencyShift fs;
        std::string status = "ok";
        try {
            const casimir::OscillatorSetup setup{cfg.k_spring, cfg.m_area, cfg.h,
                                                 cfg.b,        mats,       T};
            fs = casimir::frequency_shift(setup, cfg.quad);
        } catch (const std::exception& e) {
            fs = casimir::FrequencyShift{};
            status = failure_kind(e);
            warn("freq-shift row " + std::to_string(i), e);
        }
        r["a1_N_per_m3"] = fs.a1;
        r["omega_free_rad_per_s"] = fs.omega_free;
        r["omega_rad_per_s"] = fs.omega;
        r["shift_exact_rad_per_s"] = fs.shift;
        r["shift_first_order_rad_per_s"] = fs.shift_first_order;
        r["first_order_reliable"] = fs.first_order_reliable;
        r["status"] = status;
        return {r};
    });
    return finish_run(doc, cfg, c, doc.rows);
}

int cmd_thickness(const casimir::RunConfig& cfg, const Common& c) {
    const double delta = cfg.delta_grid.front();
    const std::vector<double> b_values = cfg.b_grid.empty() ? std::vector<double>{cfg.b}
                                                            : cfg.b_grid;
    OutputDoc doc;
    doc.meta = base_meta(cfg, "thickness", c.tolerance_scale);
    doc.meta["delta_nm"] = delta * 1e9;
    doc.columns = {"b_nm",
                   "T_K",
                   "pressure_N_per_m2",
                   "lifshitz_difference_N_per_m2",
                   "thickness_correction_N_per_m2",
                   "f_minus_lifshitz_N_per_m2",
                   "residual_vs_model_N_per_m2",
                   "status"};
    struct Job {
        double T, b;
    };
    std::vector<Job> jobs;
    for (double T : cfg.temperatures)
        for (double b : b_values) jobs.push_back({T, b});
    const casimir::MaterialSet mats = cfg.materials();

    doc.rows = run_jobs(c.workers, jobs.size(), [&](std::size_t i) -> std::vector<Row> {
        const Job& job = jobs[i];
        Row r;
        r["b_nm"] = job.b * 1e9;
        r["T_K"] = job.T;
        double pressure = 0.0, lif = 0.0, corr = 0.0;
        std::string status = "ok";
        try {
            const casimir::CavityGeometry geom =
                casimir::CavityGeometry::from_h_delta(cfg.h, job.b, delta);
            pressure =
                (job.T == 0.0
                     ? casimir::pressure_zero_temperature(geom, mats, cfg.quad)
                     : casimir::pressure_finite_temperature(geom, mats, job.T, cfg.quad))
                    .pressure;
            lif = casimir::pressure_lifshitz_difference(cfg.h, delta, mats, job.T, cfg.quad)
                      .pressure;
            corr = casimir::thickness_correction(cfg.h, job.b, delta, mats, job.T, cfg.quad)
                       .pressure;
        } catch (const std::exception& e) {
            status = failure_kind(e);
            warn("thickness row " + std::to_string(i), e);
        }
        r["pressure_N_per_m2"] = pressure;
        r["lifshitz_difference_N_per_m2"] = lif;
        r["thickness_correction_N_per_m2"] = corr;
        r["f_minus_lifshitz_N_per_m2"] = pressure - lif;
        r["residual_vs_model_N_per_m2"] = pressure - lif - corr;
        r["status"] = status;
        return {r};
    });
    return finish_run(doc, cfg, c, doc.rows);
}

int cmd_compare_geometries(const casimir::RunConfig& cfg, const Common& c) {
    if (!cfg.has_oscillator)
        throw casimir::ConfigError(c.config +
                                   ": compare-geometries needs the oscillator block");
    const double a = cfg.open_gap;
    OutputDoc doc;
    doc.meta = base_meta(cfg, "compare-geometries", c.tolerance_scale);
    doc.meta["open_gap_nm"] = a * 1e9;
    doc.meta["k_spring_N_per_m3"] = cfg.k_spring;
    doc.columns = {"T_K",
                   "delta_nm",
                   "delta_over_a",
                   "closed_powerlaw_correction",
                   "open_powerlaw_correction",
                   "closed_dispersive_correction",
                   "open_dispersive_correction",
                   "lifshitz_pressure_N_per_m2",
                   "stiffness_closed_N_per_m3",
                   "stiffness_open_N_per_m3",
                   "status"};
    const casimir::MaterialSet mats = cfg.materials();

    doc.rows = run_jobs(c.workers, cfg.temperatures.size(), [&](std::size_t i) -> std::vector<Row> {
        const double T = cfg.temperatures[i];
        std::vector<Row> rows;
        try {
            const casimir::GeometryComparison cmp =
                casimir::open_vs_closed(a, cfg.k_spring, mats, T, cfg.delta_grid, cfg.quad);
            for (std::size_t j = 0; j < cmp.delta_over_a.size(); ++j) {
                Row r;
                r["T_K"] = T;
                r["delta_nm"] = cfg.delta_grid[j] * 1e9;
                r["delta_over_a"] = cmp.delta_over_a[j];
                r["closed_powerlaw_correction"] = cmp.closed_powerlaw_correction[j];
                r["open_powerlaw_correction"] = cmp.open_powerlaw_correction[j];
                r["closed_dispersive_correction"] = cmp.closed_dispersive_correction[j];
                r["open_dispersive_correction"] = cmp.open_dispersive_correction[j];
                r["lifshitz_pressure_N_per_m2"] = cmp.lifshitz_pressure;
                r["stiffness_closed_N_per_m3"] = cmp.stiffness_closed;
                r["stiffness_open_N_per_m3"] = cmp.stiffness_open;
                r["status"] = "ok";
                rows.push_back(std::move(r));
            }
        } catch (const std::exception& e) {
            Row r;
            r["T_K"] = T;
            r["delta_nm"] = 0.0;
            r["delta_over_a"] = 0.0;
            r["closed_powerlaw_correction"] = 0.0;
            r["open_powerlaw_correction"] = 0.0;
            r["closed_dispersive_correction"] = 0.0;
            r["open_dispersive_correction"] = 0.0;
            r["lifshitz_pressure_N_per_m2"] = 0.0;
            r["stiffness_closed_N_per_m3"] = 0.0;
            r["stiffness_open_N_per_m3"] = 0.0;
            r["status"] = failure_kind(e);
            warn("compare-geometries row " + std::to_string(i), e);
            rows.push_back(std::move(r));
        }
        return rows;
    });
    return finish_run(doc, cfg, c, doc.rows);
}

struct ValidateFlags {
    int draws = 20;
    std::uint64_t seed = casimir::ValidationOptions{}.seed;
    bool flip_delta_sign = false;
};

int cmd_validate(const casimir::RunConfig& cfg, const Common& c, const ValidateFlags& vf) {
    casimir::ValidationOptions opt;
    opt.draws = vf.draws;
    opt.seed = vf.seed;
    opt.flip_delta_sign = vf.flip_delta_sign;
    opt.tolerance_scale = c.tolerance_scale;
    const casimir::ValidationReport report =
        casimir::run_validation(cfg.h, cfg.b, cfg.materials(), opt);

    for (const casimir::ValidationCheck& check : report.checks)
        std::printf("[%s] %-28s worst %.3e  bound %.3e  samples %d\n",
                    check.passed ? "PASS" : "FAIL", check.name.c_str(), check.worst,
                    check.bound, check.samples);
    std::printf("validation %s\n", report.all_passed() ? "passed" : "FAILED");

    if (!c.out.empty()) {
        OutputDoc doc;
        doc.meta = base_meta(cfg, "validate", c.tolerance_scale);
        doc.meta["draws"] = vf.draws;
        doc.meta["seed"] = std::to_string(vf.seed);
        doc.meta["inject_delta_sign_flip"] = vf.flip_delta_sign;
        doc.columns = {"check", "passed", "worst", "bound", "samples"};
        for (const casimir::ValidationCheck& check : report.checks) {
            Row r;
            r["check"] = check.name;
            r["passed"] = check.passed;
            r["worst"] = check.worst;
            r["bound"] = check.bound;
            r["samples"] = check.samples;
            doc.rows.push_back(std::move(r));
        }
        emit(doc, effective_format(cfg, c), c.out);
    }
    return report.all_passed() ? 0 : 2;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("config,--config", c.config, "JSON run configuration")->required();
    cmd->add_option("--out", c.out, "write the output here instead of stdout");
    cmd->add_option("--format", c.format, "override the configured output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", c.workers, "worker threads for row evaluation")
        ->check(CLI::Range(1, 64));
    cmd->add_option("--tolerance-scale", c.tolerance_scale,
                    "scale the spectral tolerances (validate: the check bounds)")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir force on a slab inside a planar five-zone cavity"};
    app.require_subcommand(1);

    Common c;
    ValidateFlags vf;

    CLI::App* sweep = app.add_subcommand(
        "force-sweep", "net pressure over the delta and temperature grids");
    add_common(sweep, c);
    CLI::App* taylor = app.add_subcommand(
        "taylor", "leading force coefficient a1 with a finite-difference cross check");
    add_common(taylor, c);
    CLI::App* freq = app.add_subcommand(
        "freq-shift", "suspended-slab eigenfrequency and its cavity-induced shift");
    add_common(freq, c);
    CLI::App* thickness = app.add_subcommand(
        "thickness", "finite-thickness correction against the infinite-slab limit");
    add_common(thickness, c);
    CLI::App* compare = app.add_subcommand(
        "compare-geometries", "closed cavity versus single-wall suspension");
    add_common(compare, c);
    CLI::App* validate = app.add_subcommand(
        "validate", "run the dual-route self checks against this configuration");
    add_common(validate, c);
    validate->add_option("--draws", vf.draws, "random spectral points per check")
        ->check(CLI::Range(1, 100000));
    validate->add_option("--seed", vf.seed, "RNG seed for the draws");
    validate
        ->add_flag("--inject-delta-sign-flip", vf.flip_delta_sign,
                   "fault injection: flip the rebuilt reflection-sign convention")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        casimir::RunConfig cfg = casimir::load_run_config(c.config);
        cfg.quad.rel_tol *= c.tolerance_scale;
        cfg.quad.abs_tol *= c.tolerance_scale;
        if (sweep->parsed()) return cmd_force_sweep(cfg, c);
        if (taylor->parsed()) return cmd_taylor(cfg, c);
        if (freq->parsed()) return cmd_freq_shift(cfg, c);
        if (thickness->parsed()) return cmd_thickness(cfg, c);
        if (compare->parsed()) return cmd_compare_geometries(cfg, c);
        if (validate->parsed()) return cmd_validate(cfg, c, vf);
    } catch (const casimir::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
