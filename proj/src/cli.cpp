#include "qmem/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "qmem/errors.hpp"
#include "qmem/io.hpp"
#include "qmem/schmidt.hpp"

namespace qmem::cli {

namespace fs = std::filesystem;
using io::Json;
using kernels::GridPolicy;
using kernels::MemoryConfig;
using protocols::MemoryModel;
using source::LaserSource;
using source::SourceMode;

namespace {

// ---------------------------------------------------------------------------
// Configuration

struct Flags {
    double length = 0.0;
    double write_time = 0.0;
    double p = 0.0;
    double kappa = 0.0;
    double mu = 0.0;
    double p2 = 0.0;
    double kappa2 = 0.0;
    double mu2 = 0.0;
    std::size_t grid = 0;
    std::size_t modes = 0;
    long half = 0;
    double delay = 0.0;
    std::string protocol;
    std::string out;
    std::string config;
    std::string kernel_csv;
    bool exact = false;

    std::map<std::string, CLI::Option*> options;

    bool given(const std::string& name) const {
        const auto it = options.find(name);
        return it != options.end() && it->second->count() > 0;
    }
};

void add_common(CLI::App& app, Flags& f) {
    f.options["L"] = app.add_option("--L", f.length, "cell length (dimensionless)");
    f.options["Tw"] = app.add_option("--Tw", f.write_time, "write time = read time (dimensionless)");
    f.options["p"] = app.add_option("--p", f.p, "pump statistics parameter of the source");
    f.options["kappa"] = app.add_option("--kappa", f.kappa, "laser linewidth");
    f.options["mu"] = app.add_option("--mu", f.mu, "synchronization parameter");
    f.options["grid"] = app.add_option("--grid", f.grid, "grid points per axis (2^k + 1)");
    f.options["modes"] = app.add_option("--modes", f.modes, "Schmidt modes kept");
    f.options["out"] = app.add_option("--out", f.out, "output directory");
    f.options["config"] = app.add_option("--config", f.config, "JSON configuration file");
    f.options["exact-source"] = app.add_flag("--exact-source", f.exact, "use the exact exponential correlator");
    f.options["half-width"] = app.add_option("--half-width", f.half, "curve spans -n..n grain points");
    f.options["delay"] = app.add_option("--delay", f.delay, "delay between successive read pulses");
}

void add_second_source(CLI::App& app, Flags& f) {
    f.options["p2"] = app.add_option("--p2", f.p2, "pump statistics of the second pulse (two-pulse)");
    f.options["kappa2"] = app.add_option("--kappa2", f.kappa2, "linewidth of the second pulse");
    f.options["mu2"] = app.add_option("--mu2", f.mu2, "synchronization of the second pulse");
}

void apply_source_json(const Json& j, LaserSource& src) {
    if (j.contains("p")) src.p = j.at("p").get<double>();
    if (j.contains("kappa")) src.kappa = j.at("kappa").get<double>();
    if (j.contains("mu")) src.mu = j.at("mu").get<double>();
}

void apply_config_file(const fs::path& path, RunConfig& rc) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config '" + path.string() + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    try {
        if (j.contains("memory")) {
            const Json& m = j.at("memory");
            if (m.contains("L")) rc.memory.length = m.at("L").get<double>();
            if (m.contains("Tw")) rc.memory.write_time = m.at("Tw").get<double>();
            if (m.contains("grid")) rc.memory.n_z = rc.memory.n_t = m.at("grid").get<std::size_t>();
            if (m.contains("n_z")) rc.memory.n_z = m.at("n_z").get<std::size_t>();
            if (m.contains("n_t")) rc.memory.n_t = m.at("n_t").get<std::size_t>();
            if (m.contains("readout_delay")) rc.memory.readout_delay = m.at("readout_delay").get<double>();
        }
        if (j.contains("source")) apply_source_json(j.at("source"), rc.source);
        if (j.contains("source2")) apply_source_json(j.at("source2"), rc.second_source);
        if (j.contains("protocol")) rc.protocol = protocols::parse_protocol(j.at("protocol").get<std::string>());
        if (j.contains("modes")) rc.modes = j.at("modes").get<std::size_t>();
        if (j.contains("out")) rc.out = j.at("out").get<std::string>();
        if (j.contains("exact_source")) rc.exact_source = j.at("exact_source").get<bool>();
        if (j.contains("half_width")) rc.half_width = j.at("half_width").get<long>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
}

RunConfig resolve(const Flags& f) {
    RunConfig rc;
    if (f.given("config")) apply_config_file(f.config, rc);
    if (f.given("L")) rc.memory.length = f.length;
    if (f.given("Tw")) rc.memory.write_time = f.write_time;
    rc.memory.read_time = rc.memory.write_time;
    if (f.given("grid")) rc.memory.n_z = rc.memory.n_t = f.grid;
    if (f.given("delay")) {
        rc.memory.readout_delay = f.delay;
    } else {
        rc.memory.readout_delay = std::max(rc.memory.readout_delay, 10.0 * rc.memory.read_time);
    }
    if (f.given("p")) rc.source.p = f.p;
    if (f.given("kappa")) rc.source.kappa = f.kappa;
    if (f.given("mu")) rc.source.mu = f.mu;
    if (f.given("p2")) rc.second_source.p = f.p2;
    if (f.given("kappa2")) rc.second_source.kappa = f.kappa2;
    if (f.given("mu2")) rc.second_source.mu = f.mu2;
    if (f.given("protocol")) rc.protocol = protocols::parse_protocol(f.protocol);
    if (f.given("out")) rc.out = f.out;
    if (f.given("modes")) rc.modes = f.modes;
    if (f.given("exact-source")) rc.exact_source = f.exact;
    if (f.given("half-width")) rc.half_width = f.half;
    if (f.given("kernel-csv")) rc.kernel_csv = fs::path(f.kernel_csv);
    // Exact-source runs default to kappa * T_W = 200.
    if (rc.exact_source && !f.given("kappa")) rc.source.kappa = 200.0 / rc.memory.write_time;
    if (rc.exact_source && !f.given("kappa2")) rc.second_source.kappa = 200.0 / rc.memory.write_time;
    rc.source.validate();
    rc.second_source.validate();
    if (rc.half_width < 0) throw DomainError("--half-width must be non-negative");
    return rc;
}

Json resolved_json(const RunConfig& rc) {
    return Json{{"memory", io::to_json(rc.memory)},
                {"source", io::to_json(rc.source)},
                {"source2", io::to_json(rc.second_source)},
                {"protocol", protocols::protocol_name(rc.protocol)},
                {"modes", rc.modes},
                {"exact_source", rc.exact_source},
                {"half_width", rc.half_width}};
}

protocols::CurveOptions curve_options(const RunConfig& rc) {
    protocols::CurveOptions o;
    o.indices = protocols::centered_indices(rc.half_width);
    o.mode = rc.exact_source ? SourceMode::exact : SourceMode::white_noise;
    return o;
}

MemoryConfig with_set(MemoryConfig cfg, ParameterSet s) {
    cfg.length = s.length;
    cfg.write_time = cfg.read_time = s.write_time;
    cfg.readout_delay = std::max(cfg.readout_delay, 10.0 * s.write_time);
    return cfg;
}

std::string fmt(double x) { return io::format_number(x); }

// ---------------------------------------------------------------------------
// Commands

int cmd_spectrum(const RunConfig& rc, std::ostream& out) {
    rc.memory.validate();
    const MemoryModel model(rc.memory, rc.modes);
    protocols::RunOptions opts;
    opts.curve = curve_options(rc);
    opts.second_source = rc.second_source;
    const protocols::ProtocolResult result = protocols::run_protocol(rc.protocol, model, rc.source, opts);
    const std::string stem = protocols::protocol_name(rc.protocol);
    io::write_curve_csv(rc.out / (stem + ".csv"), result.curves.front());
    Json j = io::to_json(result);
    j["resolved_config"] = resolved_json(rc);
    io::write_json(rc.out / (stem + ".json"), j);
    for (const auto& [name, value] : result.headline) out << name << " = " << fmt(value) << '\n';
    for (const auto& [name, value] : result.flags) out << name << " = " << (value ? "true" : "false") << '\n';
    return kOk;
}

Json set_json(ParameterSet s) { return Json{{"L", s.length}, {"Tw", s.write_time}}; }

int figure_spin(const std::string& name, const RunConfig& rc, ParameterSet other, std::ostream& out) {
    const auto opts = curve_options(rc);
    Json j;
    j["figure"] = name;
    j["resolved_config"] = resolved_json(rc);
    Json sets = Json::array();
    std::vector<double> zero;
    int i = 1;
    for (ParameterSet s : {kMatched, other}) {
        const MemoryModel model(with_set(rc.memory, s), rc.modes);
        const auto curve = protocols::spin_wave_spectrum(model, rc.source, opts);
        io::write_curve_csv(rc.out / (name + "_set" + std::to_string(i) + ".csv"), curve);
        zero.push_back(curve.at(0));
        Json sj = set_json(s);
        sj["zero_argument_value"] = curve.at(0);
        sets.push_back(sj);
        out << name << " set " << i << " (L=" << fmt(s.length) << ", Tw=" << fmt(s.write_time)
            << "): value at k=0 = " << fmt(curve.at(0)) << '\n';
        ++i;
    }
    j["sets"] = sets;
    j["curve2_above_curve1_at_zero"] = zero[1] > zero[0];
    io::write_json(rc.out / (name + ".json"), j);
    return kOk;
}

int figure_readout(const std::string& name, const RunConfig& rc, ParameterSet other, std::ostream& out) {
    const auto opts = curve_options(rc);
    protocols::CurveOptions zero_only = opts;
    zero_only.indices = {0};
    Json j;
    j["figure"] = name;
    j["resolved_config"] = resolved_json(rc);
    Json sets = Json::array();
    std::vector<double> sim;
    std::vector<double> spin;
    int i = 1;
    for (ParameterSet s : {kMatched, other}) {
        const MemoryModel model(with_set(rc.memory, s), rc.modes);
        const auto simultaneous = protocols::simultaneous_readout_spectrum(model, rc.source, opts);
        const auto successive = protocols::successive_readout_spectrum(model, rc.source, opts);
        const auto spin_zero = protocols::spin_wave_spectrum(model, rc.source, zero_only);
        const std::string base = name + "_set" + std::to_string(i);
        io::write_curve_csv(rc.out / (base + "_simultaneous.csv"), simultaneous);
        io::write_curve_csv(rc.out / (base + "_successive.csv"), successive);
        sim.push_back(simultaneous.at(0));
        spin.push_back(spin_zero.at(0));
        Json sj = set_json(s);
        sj["simultaneous_zero"] = simultaneous.at(0);
        sj["successive_zero"] = successive.at(0);
        sj["spin_wave_zero"] = spin_zero.at(0);
        sets.push_back(sj);
        out << name << " set " << i << " (L=" << fmt(s.length) << ", Tw=" << fmt(s.write_time)
            << "): simultaneous " << fmt(simultaneous.at(0)) << ", successive " << fmt(successive.at(0))
            << " at w=0\n";
        ++i;
    }
    j["sets"] = sets;
    const double readout_change = std::fabs(sim[1] - sim[0]);
    const double spin_change = std::fabs(spin[1] - spin[0]);
    j["readout_change_at_zero"] = readout_change;
    j["spin_wave_change_at_zero"] = spin_change;
    j["readout_less_sensitive"] = readout_change < spin_change;
    io::write_json(rc.out / (name + ".json"), j);
    return kOk;
}

int figure_modes(const RunConfig& rc, std::ostream& out) {
    const MemoryModel model(with_set(rc.memory, kMatched), rc.modes);
    const auto& sd = model.schmidt();
    io::write_mode_table_csv(rc.out / "fig3.csv", sd);
    Json j = io::to_json(sd);
    j["figure"] = "fig3";
    j["resolved_config"] = resolved_json(rc);
    io::write_json(rc.out / "fig3.json", j);
    for (std::size_t i = 0; i < sd.n_modes_kept; ++i) {
        out << "mode " << (i + 1) << ": lambda = " << fmt(sd.lambdas[i])
            << ", |phi(0)| = " << fmt(std::abs(schmidt::mode_spectrum(sd, i, 0.0))) << '\n';
    }
    return kOk;
}

int cmd_figure(const std::string& name, const RunConfig& rc, std::ostream& out, std::ostream& err) {
    if (name == "fig2a") return figure_spin(name, rc, kLongWrite, out);
    if (name == "fig2b") return figure_spin(name, rc, kLongCell, out);
    if (name == "fig45a") return figure_readout(name, rc, kLongWrite, out);
    if (name == "fig45b") return figure_readout(name, rc, kLongCell, out);
    if (name == "fig3") return figure_modes(rc, out);
    err << "unknown figure '" << name << "' (fig2a, fig2b, fig45a, fig45b, fig3)\n";
    return kUsageError;
}

int cmd_schmidt(const RunConfig& rc, std::ostream& out) {
    rc.memory.validate();
    const MemoryModel model(rc.memory, rc.modes);
    const auto& sd = model.schmidt();
    Json j = io::to_json(sd);
    j["resolved_config"] = resolved_json(rc);
    io::write_json(rc.out / "schmidt.json", j);
    io::write_mode_table_csv(rc.out / "schmidt_table.csv", sd);
    io::write_modes_csv(rc.out / "schmidt_temporal_modes.csv", "t", sd.temporal_modes);
    io::write_modes_csv(rc.out / "schmidt_spatial_modes.csv", "z", sd.spatial_modes);
    for (std::size_t i = 0; i < sd.n_modes_kept; ++i) {
        out << "mode " << (i + 1) << ": lambda = " << fmt(sd.lambdas[i]) << '\n';
    }
    return kOk;
}

int cmd_kernel(const RunConfig& rc, std::ostream& out) {
    rc.memory.validate();
    const auto wk = kernels::sample_write_kernel(rc.memory);
    const auto ck = kernels::cycle_kernel(wk);
    io::write_grid_csv(rc.out / "write_kernel.csv", io::table_of(wk));
    io::write_grid_csv(rc.out / "cycle_kernel.csv", io::table_of(ck));
    out << "write kernel " << wk.z_grid().count() << "x" << wk.t_grid().count() << ", cycle kernel asymmetry "
        << fmt(ck.asymmetry()) << '\n';
    return kOk;
}

int cmd_validate(const RunConfig& rc, std::ostream& out) {
    const std::vector<CheckResult> checks = run_validation(rc);
    bool ok = true;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok = ok && c.passed;
    }
    out << (ok ? "all checks passed\n" : "validation failed\n");
    return ok ? kOk : kValidationFailure;
}

// ---------------------------------------------------------------------------
// Validation suite

struct Suite {
    std::vector<CheckResult> results;

    void check(const std::string& name, bool passed, const std::string& detail) {
        results.push_back({name, passed, detail});
    }
    // Runs `body`; a thrown error becomes a failed item.
    void guarded(const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            check(name, false, std::string("error: ") + e.what());
        }
    }
};

std::string le(double value, double bound) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", bound);
    return fmt(value) + " (limit " + buf + ")";
}

}  // namespace

std::vector<CheckResult> run_validation(const RunConfig& rc) {
    Suite s;
    MemoryConfig cfg = rc.memory;
    cfg.validate(GridPolicy::diagnostic);
    const MemoryModel model(cfg, std::min(rc.modes, cfg.n_t), GridPolicy::diagnostic);
    const auto& wk = model.write_kernel();
    const auto& ck = model.cycle_kernel();
    const auto& sd = model.schmidt();
    const auto tg = cfg.t_grid();

    s.guarded("kernel z=0 row", [&] {
        double worst = 0.0;
        for (std::size_t m = 0; m < tg.count(); ++m) worst = std::max(worst, std::fabs(wk(0, m) - std::sin(tg[m])));
        s.check("kernel z=0 row", worst <= 1e-8, "max |G(0,t) - sin t| = " + le(worst, 1e-8));
    });

    s.guarded("kernel imaginary residue", [&] {
        double worst = 0.0;
        for (double z : {0.0, 0.25 * cfg.length, 0.5 * cfg.length, cfg.length}) {
            for (double t : {0.25 * cfg.write_time, 0.5 * cfg.write_time, cfg.write_time}) {
                const auto v = kernels::write_kernel_point_complex(z, t, cfg);
                worst = std::max(worst, std::fabs(v.imag()) / std::max(std::fabs(v.real()), 1e-300));
            }
        }
        s.check("kernel imaginary residue", worst <= 1e-10, "max |Im|/|Re| = " + le(worst, 1e-10));
    });

    s.check("cycle kernel symmetry", ck.asymmetry() <= 1e-9,
            "asymmetry before symmetrization = " + le(ck.asymmetry(), 1e-9));

    {
        const auto& raw = sd.raw_operator_eigenvalues;
        const double hi = raw.front();
        const double lo = raw.back();
        s.check("passivity", lo >= -1e-6 && hi <= 1.0 + 1e-3,
                "operator eigenvalues in [" + fmt(lo) + ", " + fmt(hi) + "] (limits -1e-6, 1.001)");
    }

    {
        const auto r = schmidt::orthonormality(sd);
        const double temporal = std::max(r.temporal_diagonal, r.temporal_off_diagonal);
        const double spatial = std::max(r.spatial_diagonal, r.spatial_off_diagonal);
        s.check("temporal mode orthonormality", temporal <= 1e-6, "residual = " + le(temporal, 1e-6));
        s.check("spatial mode orthonormality", spatial <= 1e-4, "residual = " + le(spatial, 1e-4));
    }

    s.guarded("full-rank reconstruction", [&] {
        const auto full = schmidt::decompose(ck, wk, tg.count());
        const double err = schmidt::relative_frobenius(schmidt::reconstruct(full, tg.count()).values(), ck.values());
        s.check("full-rank reconstruction", err <= 1e-6, "relative Frobenius error = " + le(err, 1e-6));
    });

    s.guarded("grid convergence", [&] {
        MemoryConfig fine = cfg;
        fine.n_z = fine.n_t = 2 * cfg.n_t - 1;
        if (cfg.n_z != cfg.n_t) throw DomainError("grid convergence needs n_z == n_t");
        const MemoryModel refined(fine, 1, GridPolicy::diagnostic);
        double worst = 0.0;
        for (std::size_t j = 0; j < cfg.n_z; ++j) {
            for (std::size_t m = 0; m < cfg.n_t; ++m) {
                worst = std::max(worst, std::fabs(wk(j, m) - refined.write_kernel()(2 * j, 2 * m)));
            }
        }
        const double shift = std::fabs(sd.lambdas.front() - refined.schmidt().lambdas.front());
        s.check("grid convergence", worst < 1e-7 && shift < 1e-3,
                "kernel change under halving " + fmt(worst) + " (< 1e-7), lambda_1 shift " + fmt(shift) +
                    " (< 1e-3)");
    });

    s.guarded("PDE oracle", [&] {
        const auto pulse = kernels::reference_pulse(cfg);
        const auto kernel_profile = kernels::write_spin_wave(wk, pulse);
        const auto pde = kernels::pde_oracle_write(cfg, pulse);
        const double err = kernels::relative_l2(pde.b_plus, kernel_profile);
        double b_minus = 0.0;
        for (const auto& v : pde.b_minus.values) b_minus = std::max(b_minus, std::abs(v));
        s.check("PDE oracle", err <= 0.01 && b_minus == 0.0,
                "relative L2 distance = " + le(err, 0.01) + ", b- untouched");
    });

    s.guarded("protocol identities", [&] {
        const LaserSource squeezed{-1.0, 100.0, 0.0};
        const auto sim = protocols::simultaneous_readout_spectrum(model, squeezed);
        const auto suc = protocols::successive_readout_spectrum(model, squeezed);
        const auto spin = protocols::spin_wave_spectrum(model, squeezed);
        double identity = 0.0;
        for (std::size_t i = 0; i < sim.points.size(); ++i) {
            identity = std::max(identity, std::fabs(suc.points[i].value - 0.5 * (1.0 + sim.points[i].value)));
        }
        double duan = 0.0;
        const double kgrain = spin.grain;
        for (const auto& p : spin.points) {
            duan = std::max(duan, std::fabs(protocols::spin_wave_duan(model, squeezed, p.index * kgrain) - p.value));
        }
        const LaserSource poisson{0.0, 100.0, 0.0};
        double flat = 0.0;
        for (const auto& curve : {protocols::simultaneous_readout_spectrum(model, poisson),
                                  protocols::successive_readout_spectrum(model, poisson),
                                  protocols::spin_wave_spectrum(model, poisson)}) {
            for (const auto& p : curve.points) flat = std::max(flat, std::fabs(p.value - 1.0));
        }
        s.check("protocol identities", identity <= 1e-12 && duan <= 1e-12 && flat == 0.0,
                "successive vs (1+simultaneous)/2 " + fmt(identity) + ", spin Duan vs spectrum " + fmt(duan) +
                    ", p=0 deviation " + fmt(flat));
    });

    s.guarded("exact vs white source", [&] {
        const LaserSource exact{-1.0, 200.0 / cfg.write_time, 0.0};
        const double z = 0.5 * cfg.length;
        const double white = protocols::spin_wave_covariance(model, exact, z, z, SourceMode::white_noise);
        const double full = protocols::spin_wave_covariance(model, exact, z, z, SourceMode::exact);
        const double rel = std::fabs(full - white) / std::fabs(white);
        s.check("exact vs white source", rel <= 0.02, "relative difference at z=z'=L/2 = " + le(rel, 0.02));
    });

    s.guarded("source evenness", [&] {
        const LaserSource src{-1.0, 100.0, 0.1};
        const double grain = numerics::grain(cfg.write_time);
        double worst = 0.0;
        for (int n = 0; n <= 64; ++n) {
            worst = std::max(worst, std::fabs(source::input_spectrum(src, n * grain) -
                                              source::input_spectrum(src, -n * grain)));
        }
        s.check("source evenness", worst <= 1e-12, "max |S(w) - S(-w)| = " + le(worst, 1e-12));
    });

    s.guarded("Parseval", [&] {
        const double grain = numerics::grain(cfg.length);
        const std::vector<double> wt = numerics::quadrature_weights(tg);
        const std::vector<double> wz = numerics::quadrature_weights(cfg.z_grid());
        // Stay well below the z-grid Nyquist index so every coefficient is resolved.
        const long reach = std::min(64L, static_cast<long>(cfg.n_z - 1) / 8);
        double spectral = 0.0;
        for (long n = -reach; n <= reach; ++n) {
            const auto gk = kernels::spatial_spectrum_kernel(wk, static_cast<double>(n) * grain);
            for (std::size_t m = 0; m < wt.size(); ++m) spectral += wt[m] * std::norm(gk.values[m]);
        }
        double direct = 0.0;
        for (std::size_t j = 0; j < wz.size(); ++j) {
            for (std::size_t m = 0; m < wt.size(); ++m) direct += wz[j] * wt[m] * wk(j, m) * wk(j, m);
        }
        const double rel = std::fabs(spectral - direct) / direct;
        s.check("Parseval", rel <= 0.01, "relative mismatch over |k| <= " + std::to_string(reach) + " grains = " + le(rel, 0.01));
    });

    if (rc.kernel_csv) {
        s.guarded("imported kernel symmetry", [&] {
            const io::GridTable t = io::read_grid_csv(*rc.kernel_csv);
            if (t.values.rows() != t.values.cols()) {
                s.check("imported kernel symmetry", false, "matrix is not square");
                return;
            }
            const double scale = t.values.cwiseAbs().maxCoeff();
            const double asym = scale > 0.0 ? (t.values - t.values.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
            s.check("imported kernel symmetry", asym <= 1e-9, "asymmetry = " + le(asym, 1e-9));
        });
    }
    return s.results;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Broadband quantum memory on a tripod atomic ensemble: kernels, Schmidt modes and squeezing spectra",
                 "qmem"};
    app.require_subcommand(1);

    Flags spectrum_flags;
    CLI::App* spectrum = app.add_subcommand("spectrum", "spectral curve and headline numbers of one protocol");
    add_common(*spectrum, spectrum_flags);
    add_second_source(*spectrum, spectrum_flags);
    spectrum_flags.options["protocol"] =
        spectrum->add_option("--protocol", spectrum_flags.protocol,
                             "write | read-simultaneous | read-successive | two-pulse");

    Flags figure_flags;
    std::string figure_name;
    CLI::App* figure = app.add_subcommand("figure", "data behind one figure: fig2a, fig2b, fig45a, fig45b, fig3");
    figure->add_option("name", figure_name, "figure name")->required();
    add_common(*figure, figure_flags);

    Flags schmidt_flags;
    CLI::App* schmidt_cmd = app.add_subcommand("schmidt", "Schmidt decomposition of the memory channel");
    add_common(*schmidt_cmd, schmidt_flags);

    Flags kernel_flags;
    CLI::App* kernel = app.add_subcommand("kernel", "export the write and cycle kernels as CSV");
    add_common(*kernel, kernel_flags);

    Flags validate_flags;
    CLI::App* validate = app.add_subcommand("validate", "run the property suite");
    add_common(*validate, validate_flags);
    validate_flags.options["kernel-csv"] =
        validate->add_option("--kernel-csv", validate_flags.kernel_csv, "kernel CSV to re-import and check");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(resolve(spectrum_flags), out);
        if (figure->parsed()) return cmd_figure(figure_name, resolve(figure_flags), out, err);
        if (schmidt_cmd->parsed()) return cmd_schmidt(resolve(schmidt_flags), out);
        if (kernel->parsed()) return cmd_kernel(resolve(kernel_flags), out);
        if (validate->parsed()) return cmd_validate(resolve(validate_flags), out);
    } catch (const NumericalQualityError& e) {
        err << "numerical quality error: " << e.what() << '\n';
        return kNumericalQuality;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace qmem::cli
