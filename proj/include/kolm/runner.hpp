#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "kolm/config.hpp"
#include "kolm/ns.hpp"
#include "kolm/random.hpp"
#include "kolm/rigidity.hpp"
#include "kolm/snapshot.hpp"

namespace kolm {

inline constexpr const char* version_string = "0.1.0";

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p);
    if (!os) throw ConfigError("cannot write " + p.string());
    os << text;
}

inline void write_json(const std::filesystem::path& p, const Json& j) {
    write_text(p, j.dump(2) + "\n");
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline Json config_echo(const RunConfig& c) {
    Json j;
    j["command"] = command_name(c.command);
    j["delta"] = c.delta;
    j["n"] = c.n;
    j["epsilons"] = c.epsilons;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["snapshot"] = c.snapshot;
    j["report"] = c.report_path;
    j["nu"] = c.nu;
    j["nus"] = c.nus;
    j["dt"] = c.dt;
    j["t_end"] = c.t_end;
    j["mode"] = c.mode;
    j["initial"] = c.initial;
    j["record_every"] = c.record_every;
    j["snapshot_every"] = c.snapshot_every;
    j["epsilon"] = c.epsilon;
    j["threshold"] = c.min_ratio_threshold;
    j["channel"] = c.channel;
    j["samples"] = c.samples;
    j["kmax"] = c.kmax;
    j["sweep_command"] = c.sweep_command;
    j["jobs"] = c.jobs;
    j["out"] = c.out_dir;
    j["seed"] = c.seed;
    return j;
}

class Manifest {
public:
    Manifest(const RunConfig& cfg, const std::filesystem::path& dir)
        : dir_(dir), start_(std::chrono::steady_clock::now()) {
        j_["command"] = command_name(cfg.command);
        j_["version"] = version_string;
        j_["provenance"] = std::string("kolm ") + version_string + " (" +
#if defined(__clang__)
                           "clang " __clang_version__
#elif defined(__GNUC__)
                           "gcc " __VERSION__
#else
                           "unknown compiler"
#endif
                           + ")";
        j_["seed"] = cfg.seed;
        j_["parameters"] = config_echo(cfg);
        j_["timestamp_utc"] = utc_timestamp();
    }
    void add_artifact(const std::string& name) { artifacts_.push_back(name); }
    void finish(int status) {
        const auto dt = std::chrono::steady_clock::now() - start_;
        j_["wall_time_s"] = std::chrono::duration<double>(dt).count();
        j_["artifacts"] = artifacts_;
        j_["exit_status"] = status;
        write_json(dir_ / "manifest.json", j_);
    }

private:
    std::filesystem::path dir_;
    std::chrono::steady_clock::time_point start_;
    Json j_;
    std::vector<std::string> artifacts_;
};

inline void write_record_csv(const std::filesystem::path& p, const SimulationRecord& rec) {
    std::ofstream os(p);
    if (!os) throw ConfigError("cannot write " + p.string());
    os << "t,l2_PD,l2_PK,heat_dev,alpha,beta,gamma,delta,probe13,probe15\n";
    for (size_t i = 0; i < rec.times.size(); ++i)
        os << fmt17(rec.times[i]) << ',' << fmt17(rec.l2_PD[i]) << ',' << fmt17(rec.l2_PK[i])
           << ',' << fmt17(rec.heat_deviation[i]) << ',' << fmt17(rec.alpha[i]) << ','
           << fmt17(rec.beta[i]) << ',' << fmt17(rec.gamma[i]) << ',' << fmt17(rec.delta[i])
           << ',' << fmt17(rec.probe13[i]) << ',' << fmt17(rec.probe15[i]) << '\n';
}

inline Json certificate_json(const XCertificate& c) {
    return Json{{"h2_norm", c.h2_norm},
                {"ip_cc2", c.ip_cc2},
                {"ip_cc4", c.ip_cc4},
                {"symmetry_defect", c.symmetry_defect},
                {"kernel_orthogonality_defect", c.kernel_orthogonality_defect},
                {"passes", c.passes()}};
}

inline Json report_json(const FixedPointReport& r) {
    Json j;
    j["epsilon"] = r.epsilon;
    j["converged"] = r.converged;
    j["A"] = r.A;
    j["B"] = r.B;
    j["iterations"] = r.iterates.size();
    j["contraction_estimates"] = r.contraction_estimates;
    j["max_contraction"] = r.max_contraction();
    j["warnings"] = r.warnings;
    Json its = Json::array();
    for (const auto& it : r.iterates)
        its.push_back(Json{{"iteration", it.iteration},
                           {"h2_diff", it.h2_diff},
                           {"compat_residual", it.compat_residual},
                           {"certificate", certificate_json(it.certificate)}});
    j["iterates"] = its;
    return j;
}

} // namespace detail

/// Run one construct pipeline for a single epsilon; returns the report JSON
/// and writes the two state snapshots.
inline Json construct_one(const RunConfig& cfg, double eps,
                          const std::filesystem::path& dir, detail::Manifest& man,
                          StationaryState* out_state = nullptr) {
    const DomainSpec d = DomainSpec::square_torus(cfg.n);
    StationaryState st = construct_fixed_point(d, eps, cfg.tol, cfg.max_iter);

    char tag[32];
    std::snprintf(tag, sizeof tag, "eps_%g", eps);
    const std::string psi_name = std::string("psi_") + tag + ".kolm";
    const std::string Psi_name = std::string("Psi_") + tag + ".kolm";
    write_snapshot(st.psi, (dir / psi_name).string());
    write_snapshot(st.Psi, (dir / Psi_name).string());
    man.add_artifact(psi_name);
    man.add_artifact(Psi_name);

    Json j = detail::report_json(st.report);
    j["F_poly"] = st.F.full_poly(eps); // coefficients of F_eps, degree 0..5
    j["psi_snapshot"] = psi_name;
    j["Psi_snapshot"] = Psi_name;

    const double cats = catseye_projection(st.Psi);
    Json cj;
    cj["value"] = cats;
    if (eps > 0.0) {
        const double target = -eps * eps * pi * pi / 128.0;
        cj["target"] = target;
        cj["ratio"] = cats / target;
        cj["pass"] = cats / target >= 0.95 && cats / target <= 1.05;
    }
    j["catseye"] = cj;

    if (eps > 0.0) {
        GevreyFit g = gevrey_radius_fit(st.psi);
        j["gevrey"] = Json{{"lambda", g.lambda},
                           {"fit_residual", g.fit_residual},
                           {"modes_used", g.modes_used},
                           {"pass", g.lambda > 0.0}};
    }
    StationarityResidual sres = stationarity_residual(st.Psi);
    j["stationarity"] = Json{{"l2", sres.l2},
                             {"linf", sres.linf},
                             {"relative", sres.l2_relative},
                             {"pass", sres.l2_relative < 1e-9}};
    j["equation_residual"] = equation_residual(st.Psi, st.F.full_poly(eps));
    if (out_state) *out_state = std::move(st);
    return j;
}

inline int execute_construct(const RunConfig& cfg, const std::filesystem::path& dir,
                             detail::Manifest& man) {
    bool all_pass = true;
    Json runs = Json::array();
    std::vector<SpectralField> psis;
    for (double eps : cfg.epsilons) {
        StationaryState st;
        Json j = construct_one(cfg, eps, dir, man, &st);
        psis.push_back(st.psi);
        if (j.contains("catseye") && j["catseye"].contains("pass") &&
            !j["catseye"]["pass"].get<bool>())
            all_pass = false;
        if (!j["stationarity"]["pass"].get<bool>()) all_pass = false;
        runs.push_back(std::move(j));
    }
    Json top;
    top["runs"] = runs;
    if (cfg.epsilons.size() >= 3) {
        ExpansionFit fit = extrapolate_expansion(cfg.epsilons, psis);
        top["expansion_fit"] = Json{{"c0", fit.c0}, {"c1", fit.c1}, {"c2", fit.c2},
                                    {"c3", fit.c3}, {"c4", fit.c4}, {"b1", fit.b1},
                                    {"max_residual", fit.max_residual}};
    }
    top["all_pass"] = all_pass;
    detail::write_json(dir / "report.json", top);
    man.add_artifact("report.json");
    return all_pass ? 0 : 4;
}

inline int execute_verify(const RunConfig& cfg, const std::filesystem::path& dir,
                          detail::Manifest& man) {
    if (cfg.snapshot.empty()) throw ConfigError("verify: no snapshot given");
    SpectralField Psi = read_snapshot(cfg.snapshot);
    Json j;
    j["snapshot"] = cfg.snapshot;
    bool all_pass = true;

    StationarityResidual sres = stationarity_residual(Psi);
    const bool st_pass = sres.l2_relative < 1e-9;
    j["stationarity"] = Json{{"l2", sres.l2},
                             {"linf", sres.linf},
                             {"relative", sres.l2_relative},
                             {"pass", st_pass}};
    all_pass = all_pass && st_pass;

    double eps = 0.0;
    if (!cfg.report_path.empty()) {
        std::ifstream is(cfg.report_path);
        if (!is) throw ConfigError("verify: cannot read report " + cfg.report_path);
        Json rep = Json::parse(is);
        if (rep.contains("runs")) {
            // combined construct report: pick the run owning this snapshot
            const std::string base = std::filesystem::path(cfg.snapshot).filename().string();
            Json found;
            for (const auto& r : rep["runs"])
                if (r.value("Psi_snapshot", "") == base || r.value("psi_snapshot", "") == base)
                    found = r;
            if (found.is_null() && !rep["runs"].empty()) found = rep["runs"].front();
            if (found.is_null()) throw ConfigError("verify: report has no runs");
            rep = found;
        }
        eps = rep.at("epsilon").get<double>();
        std::vector<double> poly = rep.at("F_poly").get<std::vector<double>>();
        if (poly.size() != 6) throw ConfigError("verify: malformed F_poly in report");
        std::array<double, 6> F;
        std::copy(poly.begin(), poly.end(), F.begin());
        const double eres = equation_residual(Psi, F);
        const bool eq_pass = eres < 1e-10;
        j["equation_residual"] = Json{{"value", eres}, {"pass", eq_pass}};
        all_pass = all_pass && eq_pass;
    } else if (!cfg.epsilons.empty()) {
        eps = cfg.epsilons.front();
    }

    const double cats = catseye_projection(Psi);
    Json cj;
    cj["value"] = cats;
    if (eps > 0.0) {
        const double target = -eps * eps * pi * pi / 128.0;
        cj["target"] = target;
        cj["ratio"] = cats / target;
        const bool cpass = cats / target >= 0.95 && cats / target <= 1.05;
        cj["pass"] = cpass;
        all_pass = all_pass && cpass;
    }
    j["catseye"] = cj;

    if (eps > 0.0) {
        // reconstruct the perturbation and fit its analyticity radius
        SpectralField psi = Psi - make_cos_cos(Psi.domain(), 0, 1) -
                            make_cos_cos(Psi.domain(), 1, 0, eps);
        psi *= 1.0 / eps;
        GevreyFit g = gevrey_radius_fit(psi);
        const bool gpass = g.lambda > 0.0;
        j["gevrey"] = Json{{"lambda", g.lambda},
                           {"fit_residual", g.fit_residual},
                           {"modes_used", g.modes_used},
                           {"pass", gpass}};
        all_pass = all_pass && gpass;
    }
    j["all_pass"] = all_pass;
    detail::write_json(dir / "verification.json", j);
    man.add_artifact("verification.json");
    return all_pass ? 0 : 4;
}

inline int execute_simulate(const RunConfig& cfg, const std::filesystem::path& dir,
                            detail::Manifest& man) {
    SimConfig sc;
    sc.nu = cfg.nu;
    sc.epsilon_diag = cfg.epsilon;
    if (cfg.mode == "nonlinear") sc.mode = SimMode::nonlinear;
    else if (cfg.mode == "linear_bar") sc.mode = SimMode::linear_bar;
    else if (cfg.mode == "heat") sc.mode = SimMode::heat;
    else throw ConfigError("simulate: unknown mode \"" + cfg.mode + "\"");

    SpectralField w0 = [&]() -> SpectralField {
        if (cfg.initial == "bar") {
            sc.domain = DomainSpec::torus(cfg.delta, cfg.n, cfg.n);
            return make_cos_cos(sc.domain, 0, 1, -1.0);
        }
        if (cfg.initial == "tilted") {
            sc.domain = DomainSpec::torus(cfg.delta, cfg.n, cfg.n);
            return make_cos_cos(sc.domain, 0, 1, -1.0) +
                   make_cos_cos(sc.domain, 1, 0, -cfg.epsilon);
        }
        if (cfg.initial == "random") {
            sc.domain = DomainSpec::torus(cfg.delta, cfg.n, cfg.n);
            std::mt19937_64 rng(cfg.seed);
            SpectralField f = random_field(sc.domain, rng, 0.6, cfg.n / 4);
            f *= 1.0 / norm_l2(f);
            return f;
        }
        if (cfg.initial == "state") {
            sc.domain = DomainSpec::square_torus(cfg.n);
            StationaryState st = construct_fixed_point(sc.domain, cfg.epsilon, cfg.tol);
            return apply_multiplier(st.Psi, Multiplier::laplacian);
        }
        SpectralField f = read_snapshot(cfg.initial);
        sc.domain = f.domain();
        return f;
    }();

    sc.t_end = cfg.t_end > 0.0 ? cfg.t_end : (cfg.nu > 0.0 ? 1.0 / cfg.nu : 10.0);
    if (cfg.dt > 0.0) {
        sc.dt = cfg.dt;
    } else if (sc.mode == SimMode::nonlinear) {
        const double h = std::min(2.0 * pi * sc.domain.delta / sc.domain.nx,
                                  2.0 * pi / sc.domain.ny);
        sc.dt = 0.4 * h / std::max(1.0, max_speed(w0));
    } else if (sc.mode == SimMode::linear_bar) {
        sc.dt = std::min(0.02, 2.0 * sc.domain.delta / (0.5 * sc.domain.nx));
    } else {
        sc.dt = sc.t_end / 256.0;
    }
    const long nsteps = long(std::ceil(sc.t_end / sc.dt));
    sc.record_every = cfg.record_every > 0 ? cfg.record_every : int(std::max(1L, nsteps / 512));

    int record_index = 0;
    RecordCallback hook;
    if (cfg.snapshot_every > 0)
        hook = [&](double t, const SpectralField& w) {
            if (record_index++ % cfg.snapshot_every) return;
            char name[48];
            std::snprintf(name, sizeof name, "state_t_%012.4f.kolm", t);
            write_snapshot(w, (dir / name).string());
            man.add_artifact(name);
        };
    SimulationRecord rec = run(w0, sc, hook);
    detail::write_record_csv(dir / "series.csv", rec);
    man.add_artifact("series.csv");
    write_snapshot(w0, (dir / "initial.kolm").string());
    man.add_artifact("initial.kolm");
    Json j;
    j["nu"] = sc.nu;
    j["dt"] = sc.dt;
    j["t_end"] = sc.t_end;
    j["mode"] = cfg.mode;
    j["initial"] = cfg.initial;
    j["records"] = rec.times.size();
    detail::write_json(dir / "run.json", j);
    man.add_artifact("run.json");
    return 0;
}

inline int execute_nodecay(const RunConfig& cfg, const std::filesystem::path& dir,
                           detail::Manifest& man) {
    NoDecayResult r = no_decay_experiment(cfg.epsilon, cfg.nu, cfg.n, cfg.tol);
    detail::write_record_csv(dir / "main.csv", r.record);
    detail::write_record_csv(dir / "control.csv", r.control_record);
    man.add_artifact("main.csv");
    man.add_artifact("control.csv");

    const double dev_budget = r.eps_effective / 100.0;
    const bool pass_ratio = r.min_ratio >= cfg.min_ratio_threshold;
    const bool pass_control = r.control_min_ratio < r.min_ratio;
    const bool pass_heat = r.max_heat_deviation <= dev_budget;
    Json j;
    j["nu"] = cfg.nu;
    j["epsilon_requested"] = cfg.epsilon;
    j["epsilon_effective"] = r.eps_effective;
    j["resolution"] = cfg.n;
    j["min_ratio"] = r.min_ratio;
    j["control_min_ratio"] = r.control_min_ratio;
    j["threshold"] = cfg.min_ratio_threshold;
    j["max_heat_deviation"] = r.max_heat_deviation;
    j["heat_deviation_budget"] = dev_budget;
    j["pass_ratio"] = pass_ratio;
    j["pass_control_ordering"] = pass_control;
    j["pass_heat_deviation"] = pass_heat;
    j["all_pass"] = pass_ratio && pass_control && pass_heat;
    detail::write_json(dir / "report.json", j);
    man.add_artifact("report.json");
    return (pass_ratio && pass_control && pass_heat) ? 0 : 4;
}

inline int execute_ratefit(const RunConfig& cfg, const std::filesystem::path& dir,
                           detail::Manifest& man) {
    const DomainSpec d = DomainSpec::torus(cfg.delta, cfg.n, cfg.n);
    std::vector<SimulationRecord> recs, heat_recs;
    int idx = 0;
    for (double nu : cfg.nus) {
        SimConfig sc;
        sc.nu = nu;
        sc.domain = d;
        sc.mode = SimMode::linear_bar;
        sc.t_end = 1.0 / nu;
        sc.dt = cfg.dt > 0.0 ? cfg.dt : std::min(0.02, 2.0 * d.delta / (0.5 * d.nx));
        const long nsteps = long(std::ceil(sc.t_end / sc.dt));
        sc.record_every = int(std::max(1L, nsteps / 400));
        SimulationRecord rec = run(make_sin_sin(d, 1, 1), sc);
        char name[48];
        std::snprintf(name, sizeof name, "linear_nu_%d.csv", idx);
        detail::write_record_csv(dir / name, rec);
        man.add_artifact(name);
        recs.push_back(std::move(rec));

        SimConfig hc = sc;
        hc.mode = SimMode::heat;
        hc.dt = sc.t_end / 400.0;
        hc.record_every = 1;
        SimulationRecord hrec = run(make_cos_cos(d, 0, 1), hc);
        std::snprintf(name, sizeof name, "heat_nu_%d.csv", idx);
        detail::write_record_csv(dir / name, hrec);
        man.add_artifact(name);
        heat_recs.push_back(std::move(hrec));
        ++idx;
    }
    RateFit lin = decay_rate_fit(recs);
    RateFit heat = decay_rate_fit(heat_recs);
    const bool pass_lin = std::abs(lin.exponent - 0.5) <= 0.15;
    const bool pass_heat = std::abs(heat.exponent - 1.0) <= 0.05;
    Json j;
    j["delta"] = cfg.delta;
    j["nus"] = cfg.nus;
    j["linear_bar"] = Json{{"exponent", lin.exponent},
                           {"c1_fit", lin.c1_fit},
                           {"rates", lin.rates},
                           {"monotone", lin.monotone},
                           {"pass", pass_lin}};
    j["heat_control"] = Json{{"exponent", heat.exponent},
                             {"c1_fit", heat.c1_fit},
                             {"rates", heat.rates},
                             {"pass", pass_heat}};
    j["all_pass"] = pass_lin && pass_heat;
    detail::write_json(dir / "fit.json", j);
    man.add_artifact("fit.json");
    return (pass_lin && pass_heat) ? 0 : 4;
}

inline int execute_coercivity(const RunConfig& cfg, const std::filesystem::path& dir,
                              detail::Manifest& man) {
    Json j;
    if (!cfg.channel) {
        CoercivityConstant r = coercivity_constant(cfg.delta, cfg.kmax);
        j["delta"] = cfg.delta;
        j["kmax"] = cfg.kmax;
        j["c_delta"] = r.c_delta;
        j["attaining_mode"] = Json::array({r.k, r.l});
        j["tail_bound"] = r.tail_bound;
        j["kernel_collision"] = r.kernel_collision;
        detail::write_json(dir / "coercivity.json", j);
        man.add_artifact("coercivity.json");
        return 0;
    }
    CoercivityCampaign camp = coercivity_test(cfg.samples, cfg.epsilon, cfg.seed);
    std::ofstream os(dir / "samples.csv");
    os << "index,A_V,lower_rhs,upper_pairing,dxx_psi_sq,dxy_psi_sq,vp_dx_w_sq,"
          "lower_ok,intermediate_ok,ratio_c1\n";
    for (const auto& s : camp.records)
        os << s.index << ',' << detail::fmt17(s.report.A_V) << ','
           << detail::fmt17(s.report.lower_rhs) << ',' << detail::fmt17(s.report.upper_pairing)
           << ',' << detail::fmt17(s.report.dxx_psi_sq) << ','
           << detail::fmt17(s.report.dxy_psi_sq) << ',' << detail::fmt17(s.report.vp_dx_w_sq)
           << ',' << (s.report.lower_ok ? 1 : 0) << ',' << (s.report.intermediate_ok ? 1 : 0)
           << ',' << detail::fmt17(s.ratio_c1) << '\n';
    os.close();
    man.add_artifact("samples.csv");
    const bool all_pass = camp.lower_violations == 0 && camp.intermediate_violations == 0;
    j["samples"] = camp.samples;
    j["profile_epsilon"] = cfg.epsilon;
    j["lower_violations"] = camp.lower_violations;
    j["intermediate_violations"] = camp.intermediate_violations;
    j["empirical_c1"] = camp.empirical_c1;
    j["max_upper_constant"] = camp.max_upper_constant;
    j["all_pass"] = all_pass;
    detail::write_json(dir / "campaign.json", j);
    man.add_artifact("campaign.json");
    return all_pass ? 0 : 4;
}

inline int execute(const RunConfig& cfg); // forward

inline int execute_sweep(const RunConfig& cfg, const std::filesystem::path& dir,
                         detail::Manifest& man) {
    const Command sub = command_from_name(cfg.sweep_command);
    std::vector<RunConfig> children;
    if (sub == Command::construct) {
        for (double e : cfg.epsilons) {
            RunConfig c = cfg;
            c.command = sub;
            c.epsilons = {e};
            children.push_back(c);
        }
    } else if (sub == Command::nodecay || sub == Command::simulate) {
        for (double nu : cfg.nus) {
            RunConfig c = cfg;
            c.command = sub;
            c.nu = nu;
            children.push_back(c);
        }
    } else {
        throw ConfigError("sweep: unsupported sub-command \"" + cfg.sweep_command + "\"");
    }
    for (size_t i = 0; i < children.size(); ++i)
        children[i].out_dir = (dir / ("run_" + std::to_string(i))).string();

    std::vector<int> status(children.size(), -1);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= children.size()) return;
            try {
                status[i] = execute(children[i]);
            } catch (const std::exception&) {
                status[i] = 3;
            }
        }
    };
    std::vector<std::thread> pool;
    const int jobs = std::min<int>(cfg.jobs, int(children.size()));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    Json j;
    j["sub_command"] = cfg.sweep_command;
    j["runs"] = Json::array();
    int worst = 0;
    for (size_t i = 0; i < children.size(); ++i) {
        j["runs"].push_back(Json{{"out", children[i].out_dir}, {"status", status[i]}});
        worst = std::max(worst, status[i]);
    }
    j["all_pass"] = worst == 0;
    detail::write_json(dir / "sweep.json", j);
    man.add_artifact("sweep.json");
    return worst;
}

/// Run the pipeline selected by cfg.command; artifacts land in cfg.out_dir.
/// Returns 0 on success or 4 when an acceptance threshold fails; throws
/// ConfigError / NumericalError for parameter and solver failures.
inline int execute(const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
    detail::Manifest man(cfg, dir);
    int status = 0;
    try {
        switch (cfg.command) {
        case Command::construct: status = execute_construct(cfg, dir, man); break;
        case Command::verify: status = execute_verify(cfg, dir, man); break;
        case Command::simulate: status = execute_simulate(cfg, dir, man); break;
        case Command::nodecay: status = execute_nodecay(cfg, dir, man); break;
        case Command::ratefit: status = execute_ratefit(cfg, dir, man); break;
        case Command::coercivity: status = execute_coercivity(cfg, dir, man); break;
        case Command::sweep: status = execute_sweep(cfg, dir, man); break;
        }
    } catch (...) {
        man.finish(-1);
        throw;
    }
    man.finish(status);
    return status;
}

} // namespace kolm
