#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "kolm/config.hpp"
#include "kolm/runner.hpp"

using namespace kolm;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("kolm_test_" + std::to_string(rand()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("parse_config: minimal construct section fills defaults") {
    RunConfig c = parse_config("[construct]\nepsilon = 0.01\n", Command::construct);
    CHECK(c.epsilons == std::vector<double>{0.01});
    CHECK(c.n == 64);
    CHECK(c.tol == 1e-12);
    CHECK(c.out_dir == "out");
    CHECK(c.seed == 1);
}

TEST_CASE("parse_config: range violation names the key") {
    try {
        parse_config("[construct]\nepsilon = -1\n", Command::construct);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
    }
}

TEST_CASE("parse_config: unknown key rejected with suggestion") {
    try {
        parse_config("[construct]\nepsilonn = 0.01\n", Command::construct);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("epsilonn") != std::string::npos);
        CHECK(msg.find("did you mean \"epsilon\"") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }
}

TEST_CASE("parse_config: malformed line reports position; comments ignored") {
    CHECK_THROWS_AS(parse_config("[construct]\nnot a key value\n", Command::construct),
                    ConfigError);
    RunConfig c = parse_config("# comment\n[common]\nseed = 42\n[construct]\n"
                               "epsilon = 0.005, 0.01 ; two values\n",
                               Command::construct);
    CHECK(c.seed == 42);
    CHECK(c.epsilons == std::vector<double>{0.005, 0.01});
}

TEST_CASE("parse_config: sections for other commands are skipped") {
    const std::string text = "[nodecay]\nnu = 0.01\n[construct]\nepsilon = 0.02\n";
    RunConfig c = parse_config(text, Command::construct);
    CHECK(c.epsilons == std::vector<double>{0.02});
    RunConfig n = parse_config(text, Command::nodecay);
    CHECK(n.nu == 0.01);
}

TEST_CASE("execute construct: artifacts, acceptance flag, determinism") {
    TempDir tmp;
    RunConfig cfg;
    cfg.command = Command::construct;
    cfg.n = 32;
    cfg.epsilons = {0.01};
    cfg.out_dir = (tmp.path / "a").string();
    CHECK(execute(cfg) == 0);
    CHECK(fs::exists(tmp.path / "a" / "report.json"));
    CHECK(fs::exists(tmp.path / "a" / "Psi_eps_0.01.kolm"));
    CHECK(fs::exists(tmp.path / "a" / "manifest.json"));

    // identical config => byte-identical report (timestamps live in manifest)
    cfg.out_dir = (tmp.path / "b").string();
    CHECK(execute(cfg) == 0);
    CHECK(slurp(tmp.path / "a" / "report.json") == slurp(tmp.path / "b" / "report.json"));
}

TEST_CASE("execute verify round trip through the snapshot") {
    TempDir tmp;
    RunConfig cfg;
    cfg.command = Command::construct;
    cfg.n = 32;
    cfg.epsilons = {0.01};
    cfg.out_dir = (tmp.path / "c").string();
    REQUIRE(execute(cfg) == 0);

    RunConfig v;
    v.command = Command::verify;
    v.snapshot = (tmp.path / "c" / "Psi_eps_0.01.kolm").string();
    v.report_path = (tmp.path / "c" / "report.json").string();
    v.out_dir = (tmp.path / "v").string();
    CHECK(execute(v) == 0);
    CHECK(fs::exists(tmp.path / "v" / "verification.json"));
}

TEST_CASE("execute coercivity: scan and campaign") {
    TempDir tmp;
    RunConfig cfg;
    cfg.command = Command::coercivity;
    cfg.delta = 0.5;
    cfg.kmax = 32;
    cfg.out_dir = (tmp.path / "k").string();
    CHECK(execute(cfg) == 0);
    Json j = Json::parse(slurp(tmp.path / "k" / "coercivity.json"));
    CHECK(j["c_delta"].get<double>() == 0.75);

    RunConfig camp;
    camp.command = Command::coercivity;
    camp.channel = true;
    camp.samples = 12;
    camp.epsilon = 0.0;
    camp.seed = 3;
    camp.out_dir = (tmp.path / "camp").string();
    CHECK(execute(camp) == 0);
    CHECK(fs::exists(tmp.path / "camp" / "samples.csv"));
    Json cj = Json::parse(slurp(tmp.path / "camp" / "campaign.json"));
    CHECK(cj["lower_violations"].get<int>() == 0);

    // identical seed => byte-identical campaign CSV
    camp.out_dir = (tmp.path / "camp2").string();
    CHECK(execute(camp) == 0);
    CHECK(slurp(tmp.path / "camp" / "samples.csv") == slurp(tmp.path / "camp2" / "samples.csv"));
}

TEST_CASE("execute simulate: CSV header and snapshot hook") {
    TempDir tmp;
    RunConfig cfg;
    cfg.command = Command::simulate;
    cfg.mode = "nonlinear";
    cfg.initial = "bar";
    cfg.n = 32;
    cfg.nu = 0.05;
    cfg.t_end = 1.0;
    cfg.record_every = 5;
    cfg.snapshot_every = 8;
    cfg.out_dir = (tmp.path / "s").string();
    CHECK(execute(cfg) == 0);
    std::ifstream is(tmp.path / "s" / "series.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,l2_PD,l2_PK,heat_dev,alpha,beta,gamma,delta,probe13,probe15");
    bool have_state = false;
    for (const auto& e : fs::directory_iterator(tmp.path / "s"))
        if (e.path().filename().string().rfind("state_t_", 0) == 0) have_state = true;
    CHECK(have_state);
}

TEST_CASE("execute sweep: construct over epsilons with a worker pool") {
    TempDir tmp;
    const std::string cfgtext = "[sweep]\ncommand = construct\nepsilon = 0.005, 0.01\n"
                                "n = 32\njobs = 2\nout = " +
                                (tmp.path / "sw").string() + "\n";
    RunConfig cfg = parse_config(cfgtext, Command::sweep);
    CHECK(execute(cfg) == 0);
    Json j = Json::parse(slurp(tmp.path / "sw" / "sweep.json"));
    CHECK(j["all_pass"].get<bool>());
    CHECK(fs::exists(tmp.path / "sw" / "run_0" / "report.json"));
    CHECK(fs::exists(tmp.path / "sw" / "run_1" / "report.json"));
}

TEST_CASE("CLI binary: exit statuses distinguish config errors") {
    const char* cli = std::getenv("KOLM_CLI");
    if (!cli) {
        WARN("KOLM_CLI not set; skipping binary smoke test");
        return;
    }
    TempDir tmp;
    const std::string base = std::string(cli);
    auto run_cmd = [](const std::string& c) { return std::system(c.c_str()) >> 8; };
    CHECK(run_cmd(base + " construct --epsilon 0.01 --n 32 --out " +
                  (tmp.path / "ok").string() + " > /dev/null 2>&1") == 0);
    // malformed config file -> 2
    std::ofstream bad(tmp.path / "bad.ini");
    bad << "[construct]\nepsilonn = 0.01\n";
    bad.close();
    CHECK(run_cmd(base + " --config " + (tmp.path / "bad.ini").string() +
                  " construct > /dev/null 2>&1") == 2);
    // missing snapshot file -> 2
    CHECK(run_cmd(base + " verify --snapshot /nonexistent.kolm > /dev/null 2>&1") == 2);
}
