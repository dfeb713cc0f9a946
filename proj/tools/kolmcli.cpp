// Batch front-end for the spectral toolkit: constructs stationary states near
// the Kolmogorov flow, verifies them, runs Navier-Stokes experiments and
// coercivity campaigns. Exit codes: 0 ok, 2 config error, 3 numerical
// failure, 4 acceptance threshold failed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "kolm/runner.hpp"

using namespace kolm;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

RunConfig base_config(const std::string& config_path, Command cmd) {
    if (config_path.empty()) {
        RunConfig c;
        c.command = cmd;
        return c;
    }
    return parse_config(slurp(config_path), cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral toolkit for stationary states near the Kolmogorov flow,"
                 " enhanced-dissipation experiments and coercivity checks"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (sections per subcommand)")
        ->envname("KOLM_CONFIG");

    // construct
    auto* c_cmd = app.add_subcommand("construct", "build stationary states Psi_eps");
    std::vector<double> c_eps;
    double c_tol = -1;
    int c_n = -1, c_maxit = -1;
    std::string c_out;
    uint64_t c_seed = 0;
    bool c_seed_set = false;
    c_cmd->add_option("--epsilon", c_eps, "perturbation sizes");
    c_cmd->add_option("--tol", c_tol, "H2 fixed-point tolerance");
    c_cmd->add_option("--n", c_n, "collocation resolution");
    c_cmd->add_option("--max-iter", c_maxit, "iteration cap");
    c_cmd->add_option("--out", c_out, "output directory");
    c_cmd->add_option("--seed", c_seed, "rng seed")->each([&](const std::string&) { c_seed_set = true; });

    // verify
    auto* v_cmd = app.add_subcommand("verify", "check a stored state snapshot");
    std::string v_snap, v_report, v_out;
    double v_eps = -1;
    v_cmd->add_option("--snapshot", v_snap, "KOLM state file")->required();
    v_cmd->add_option("--report", v_report, "construct report.json with F_poly");
    v_cmd->add_option("--epsilon", v_eps, "epsilon when no report is given");
    v_cmd->add_option("--out", v_out, "output directory");

    // simulate
    auto* s_cmd = app.add_subcommand("simulate", "integrate the vorticity equation");
    double s_nu = -1, s_dt = -1, s_tend = -1, s_eps = -1, s_delta = -1;
    int s_n = -1, s_rec = -1, s_snap = -1;
    std::string s_mode, s_init, s_out;
    uint64_t s_seed = 0;
    bool s_seed_set = false;
    s_cmd->add_option("--nu", s_nu, "kinematic viscosity");
    s_cmd->add_option("--dt", s_dt, "time step (0 = auto)");
    s_cmd->add_option("--t-end", s_tend, "final time (0 = auto)");
    s_cmd->add_option("--mode", s_mode, "nonlinear | linear_bar | heat");
    s_cmd->add_option("--initial", s_init, "bar | tilted | random | state | <file.kolm>");
    s_cmd->add_option("--n", s_n, "resolution");
    s_cmd->add_option("--delta", s_delta, "torus aspect ratio");
    s_cmd->add_option("--epsilon", s_eps, "perturbation scale for diagnostics");
    s_cmd->add_option("--record-every", s_rec, "steps between records");
    s_cmd->add_option("--snapshot-every", s_snap, "records between state snapshots");
    s_cmd->add_option("--out", s_out, "output directory");
    s_cmd->add_option("--seed", s_seed, "rng seed")->each([&](const std::string&) { s_seed_set = true; });

    // nodecay
    auto* n_cmd = app.add_subcommand("nodecay",
                                     "absence of enhanced dissipation near the bar state");
    double n_nu = -1, n_eps = -1, n_thresh = -1;
    int n_n = -1;
    std::string n_out;
    n_cmd->add_option("--nu", n_nu, "kinematic viscosity");
    n_cmd->add_option("--epsilon", n_eps, "requested perturbation size");
    n_cmd->add_option("--threshold", n_thresh, "min-ratio acceptance threshold");
    n_cmd->add_option("--n", n_n, "resolution");
    n_cmd->add_option("--out", n_out, "output directory");

    // ratefit
    auto* r_cmd = app.add_subcommand("ratefit", "enhanced-dissipation scaling in nu");
    std::vector<double> r_nus;
    double r_delta = -1, r_dt = -1;
    int r_n = -1;
    std::string r_out;
    r_cmd->add_option("--delta", r_delta, "torus aspect ratio");
    r_cmd->add_option("--nus", r_nus, "viscosities");
    r_cmd->add_option("--dt", r_dt, "time step (0 = auto)");
    r_cmd->add_option("--n", r_n, "resolution");
    r_cmd->add_option("--out", r_out, "output directory");

    // coercivity
    auto* k_cmd = app.add_subcommand("coercivity", "multiplier bound / Poiseuille campaign");
    double k_delta = -1, k_eps = -1;
    int k_samples = -1, k_kmax = -1;
    bool k_channel = false;
    std::string k_out;
    uint64_t k_seed = 0;
    bool k_seed_set = false;
    k_cmd->add_option("--delta", k_delta, "torus aspect ratio");
    k_cmd->add_flag("--channel", k_channel, "run the Poiseuille coercivity campaign");
    k_cmd->add_option("--samples", k_samples, "campaign size");
    k_cmd->add_option("--kmax", k_kmax, "mode scan bound");
    k_cmd->add_option("--epsilon", k_eps, "profile closeness for the campaign");
    k_cmd->add_option("--out", k_out, "output directory");
    k_cmd->add_option("--seed", k_seed, "rng seed")->each([&](const std::string&) { k_seed_set = true; });

    // sweep
    auto* w_cmd = app.add_subcommand("sweep", "schedule runs from a config file");
    std::string w_config;
    int w_jobs = -1;
    w_cmd->add_option("--config", w_config, "config file with a [sweep] section")->required();
    w_cmd->add_option("--jobs", w_jobs, "worker pool size");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (app.got_subcommand(c_cmd)) {
            cfg = base_config(config_path, Command::construct);
            if (!c_eps.empty()) cfg.epsilons = c_eps;
            if (c_tol >= 0) cfg.tol = c_tol;
            if (c_n > 0) cfg.n = c_n;
            if (c_maxit > 0) cfg.max_iter = c_maxit;
            if (!c_out.empty()) cfg.out_dir = c_out;
            if (c_seed_set) cfg.seed = c_seed;
        } else if (app.got_subcommand(v_cmd)) {
            cfg = base_config(config_path, Command::verify);
            cfg.snapshot = v_snap;
            if (!v_report.empty()) cfg.report_path = v_report;
            if (v_eps >= 0) cfg.epsilons = {v_eps};
            if (!v_out.empty()) cfg.out_dir = v_out;
        } else if (app.got_subcommand(s_cmd)) {
            cfg = base_config(config_path, Command::simulate);
            if (s_nu >= 0) cfg.nu = s_nu;
            if (s_dt >= 0) cfg.dt = s_dt;
            if (s_tend >= 0) cfg.t_end = s_tend;
            if (!s_mode.empty()) cfg.mode = s_mode;
            if (!s_init.empty()) cfg.initial = s_init;
            if (s_n > 0) cfg.n = s_n;
            if (s_delta > 0) cfg.delta = s_delta;
            if (s_eps >= 0) cfg.epsilon = s_eps;
            if (s_rec >= 0) cfg.record_every = s_rec;
            if (s_snap >= 0) cfg.snapshot_every = s_snap;
            if (!s_out.empty()) cfg.out_dir = s_out;
            if (s_seed_set) cfg.seed = s_seed;
        } else if (app.got_subcommand(n_cmd)) {
            cfg = base_config(config_path, Command::nodecay);
            cfg.n = 128; // experiment default
            if (n_nu > 0) cfg.nu = n_nu;
            if (n_eps >= 0) cfg.epsilon = n_eps;
            if (n_thresh >= 0) cfg.min_ratio_threshold = n_thresh;
            if (n_n > 0) cfg.n = n_n;
            if (!n_out.empty()) cfg.out_dir = n_out;
        } else if (app.got_subcommand(r_cmd)) {
            cfg = base_config(config_path, Command::ratefit);
            cfg.delta = 0.5; // rectangular torus default
            if (r_delta > 0) cfg.delta = r_delta;
            if (!r_nus.empty()) cfg.nus = r_nus;
            if (r_dt >= 0) cfg.dt = r_dt;
            if (r_n > 0) cfg.n = r_n;
            if (!r_out.empty()) cfg.out_dir = r_out;
        } else if (app.got_subcommand(k_cmd)) {
            cfg = base_config(config_path, Command::coercivity);
            if (config_path.empty()) cfg.epsilon = 0.0; // exact Poiseuille by default
            if (k_delta > 0) cfg.delta = k_delta;
            if (k_channel) cfg.channel = true;
            if (k_samples > 0) cfg.samples = k_samples;
            if (k_kmax > 0) cfg.kmax = k_kmax;
            if (k_eps >= 0) cfg.epsilon = k_eps;
            if (!k_out.empty()) cfg.out_dir = k_out;
            if (k_seed_set) cfg.seed = k_seed;
        } else if (app.got_subcommand(w_cmd)) {
            cfg = parse_config(slurp(w_config), Command::sweep);
            if (w_jobs > 0) cfg.jobs = w_jobs;
        }
        const int status = execute(cfg);
        if (status != 0)
            std::cerr << "acceptance threshold failed (see " << cfg.out_dir << ")\n";
        return status;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
