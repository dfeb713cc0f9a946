#pragma once

#include <cstdint>
#include <map>
#include <sstream>

#include "kolm/domain.hpp"

namespace kolm {

enum class Command { construct, verify, simulate, nodecay, ratefit, coercivity, sweep };

inline const char* command_name(Command c) {
    switch (c) {
    case Command::construct: return "construct";
    case Command::verify: return "verify";
    case Command::simulate: return "simulate";
    case Command::nodecay: return "nodecay";
    case Command::ratefit: return "ratefit";
    case Command::coercivity: return "coercivity";
    case Command::sweep: return "sweep";
    }
    return "?";
}

inline Command command_from_name(const std::string& s) {
    for (Command c : {Command::construct, Command::verify, Command::simulate,
                      Command::nodecay, Command::ratefit, Command::coercivity, Command::sweep})
        if (s == command_name(c)) return c;
    throw ConfigError("unknown command: " + s);
}

/// Fully validated parameters of one batch run. Defaults are echoed into the
/// run manifest by the runner.
struct RunConfig {
    Command command = Command::construct;

    // domain
    double delta = 1.0;
    int n = 64;

    // construct / verify
    std::vector<double> epsilons{0.01};
    double tol = 1e-12;
    int max_iter = 200;
    std::string snapshot;      // verify: state file to check
    std::string report_path;   // verify: companion construct report (optional)

    // simulate / nodecay / ratefit
    double nu = 1e-2;
    std::vector<double> nus{1e-2, 2.5e-3, 6.25e-4};
    double dt = 0.0;           // 0 = auto from the CFL bound
    double t_end = 0.0;        // 0 = auto (1/nu)
    std::string mode = "nonlinear";
    std::string initial = "bar";
    int record_every = 0;      // 0 = auto
    int snapshot_every = 0;    // in records; 0 = none
    double epsilon = 1e-3;
    double min_ratio_threshold = 0.5;

    // coercivity
    bool channel = false;
    int samples = 100;
    int kmax = 32;

    // sweep
    std::string sweep_command = "construct";
    int jobs = 1;

    // common
    std::string out_dir = "out";
    uint64_t seed = 1;
};

namespace detail {

inline int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = int(j);
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = int(i);
        for (size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

struct KeyBinding {
    enum Type { real, integer, u64, text, boolean, real_list } type;
    void* target;
    double lo = 0.0, hi = 0.0; // numeric range when lo < hi
};

inline std::map<std::string, KeyBinding> key_table(RunConfig& c, Command cmd) {
    std::map<std::string, KeyBinding> t;
    auto add = [&](const std::string& k, KeyBinding b) { t.emplace(k, b); };
    // keys shared by every section
    add("out", {KeyBinding::text, &c.out_dir});
    add("seed", {KeyBinding::u64, &c.seed});
    add("n", {KeyBinding::integer, &c.n, 8, 4096});
    add("delta", {KeyBinding::real, &c.delta, 1e-6, 64.0});
    switch (cmd) {
    case Command::construct:
        add("epsilon", {KeyBinding::real_list, &c.epsilons, 0.0, 0.05});
        add("tol", {KeyBinding::real, &c.tol, 1e-15, 1e-3});
        add("max_iter", {KeyBinding::integer, &c.max_iter, 1, 100000});
        break;
    case Command::verify:
        add("snapshot", {KeyBinding::text, &c.snapshot});
        add("report", {KeyBinding::text, &c.report_path});
        add("epsilon", {KeyBinding::real_list, &c.epsilons, 0.0, 0.05});
        break;
    case Command::simulate:
        add("nu", {KeyBinding::real, &c.nu, 0.0, 10.0});
        add("dt", {KeyBinding::real, &c.dt, 0.0, 1.0});
        add("t_end", {KeyBinding::real, &c.t_end, 0.0, 1e7});
        add("mode", {KeyBinding::text, &c.mode});
        add("initial", {KeyBinding::text, &c.initial});
        add("record_every", {KeyBinding::integer, &c.record_every, 0, 1 << 30});
        add("snapshot_every", {KeyBinding::integer, &c.snapshot_every, 0, 1 << 30});
        add("epsilon", {KeyBinding::real, &c.epsilon, 0.0, 1.0});
        break;
    case Command::nodecay:
        add("nu", {KeyBinding::real, &c.nu, 1e-8, 10.0});
        add("epsilon", {KeyBinding::real, &c.epsilon, 0.0, 0.05});
        add("threshold", {KeyBinding::real, &c.min_ratio_threshold, 0.0, 1.0});
        add("tol", {KeyBinding::real, &c.tol, 1e-15, 1e-3});
        break;
    case Command::ratefit:
        add("nus", {KeyBinding::real_list, &c.nus, 1e-8, 10.0});
        add("dt", {KeyBinding::real, &c.dt, 0.0, 1.0});
        break;
    case Command::coercivity:
        add("channel", {KeyBinding::boolean, &c.channel});
        add("samples", {KeyBinding::integer, &c.samples, 10, 1000000});
        add("kmax", {KeyBinding::integer, &c.kmax, 16, 100000});
        add("epsilon", {KeyBinding::real, &c.epsilon, 0.0, 0.5});
        break;
    case Command::sweep:
        add("command", {KeyBinding::text, &c.sweep_command});
        add("epsilon", {KeyBinding::real_list, &c.epsilons, 0.0, 0.05});
        add("nus", {KeyBinding::real_list, &c.nus, 1e-8, 10.0});
        add("jobs", {KeyBinding::integer, &c.jobs, 1, 256});
        add("nu", {KeyBinding::real, &c.nu, 0.0, 10.0});
        add("threshold", {KeyBinding::real, &c.min_ratio_threshold, 0.0, 1.0});
        break;
    }
    return t;
}

inline void assign_key(RunConfig& cfg, Command cmd, const std::string& key,
                       const std::string& value, int line, int col) {
    auto table = key_table(cfg, cmd);
    auto where = [&] {
        std::ostringstream os;
        os << "line " << line << ", column " << col << ": ";
        return os.str();
    };
    auto it = table.find(key);
    if (it == table.end()) {
        std::string best;
        int bestd = 3;
        for (const auto& [k, _] : table) {
            const int d = edit_distance(key, k);
            if (d < bestd) {
                bestd = d;
                best = k;
            }
        }
        std::string msg = where() + "unknown key \"" + key + "\" in section [" +
                          command_name(cmd) + "]";
        if (!best.empty()) msg += "; did you mean \"" + best + "\"?";
        throw ConfigError(msg);
    }
    const KeyBinding& b = it->second;
    auto range_err = [&](double v) {
        std::ostringstream os;
        os << where() << "value " << v << " for key \"" << key << "\" outside ["
           << b.lo << ", " << b.hi << "]";
        throw ConfigError(os.str());
    };
    auto parse_real = [&](const std::string& s) {
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(s, &pos);
        } catch (...) {
            throw ConfigError(where() + "cannot parse \"" + s + "\" for key \"" + key + "\"");
        }
        if (pos != s.size())
            throw ConfigError(where() + "trailing junk in value for key \"" + key + "\"");
        return v;
    };
    switch (b.type) {
    case KeyBinding::real: {
        const double v = parse_real(value);
        if (b.lo < b.hi && (v < b.lo || v > b.hi)) range_err(v);
        *static_cast<double*>(b.target) = v;
        break;
    }
    case KeyBinding::integer: {
        const double v = parse_real(value);
        if (v != std::floor(v))
            throw ConfigError(where() + "key \"" + key + "\" expects an integer");
        if (b.lo < b.hi && (v < b.lo || v > b.hi)) range_err(v);
        *static_cast<int*>(b.target) = int(v);
        break;
    }
    case KeyBinding::u64: {
        try {
            size_t pos = 0;
            *static_cast<uint64_t*>(b.target) = std::stoull(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("");
        } catch (...) {
            throw ConfigError(where() + "key \"" + key + "\" expects an unsigned integer");
        }
        break;
    }
    case KeyBinding::text:
        *static_cast<std::string*>(b.target) = value;
        break;
    case KeyBinding::boolean: {
        if (value == "true" || value == "1")
            *static_cast<bool*>(b.target) = true;
        else if (value == "false" || value == "0")
            *static_cast<bool*>(b.target) = false;
        else
            throw ConfigError(where() + "key \"" + key + "\" expects true/false");
        break;
    }
    case KeyBinding::real_list: {
        std::vector<double> vs;
        std::string item;
        std::istringstream is(value);
        while (std::getline(is, item, ',')) {
            while (!item.empty() && std::isspace(item.front())) item.erase(item.begin());
            while (!item.empty() && std::isspace(item.back())) item.pop_back();
            if (item.empty()) continue;
            const double v = parse_real(item);
            if (b.lo < b.hi && (v < b.lo || v > b.hi)) range_err(v);
            vs.push_back(v);
        }
        if (vs.empty())
            throw ConfigError(where() + "key \"" + key + "\" expects a comma-separated list");
        *static_cast<std::vector<double>*>(b.target) = vs;
        break;
    }
    }
}

} // namespace detail

/// Parse the key=value section [command] of a config file into a RunConfig.
/// Unknown keys are rejected with a suggestion, malformed lines with their
/// line and column, out-of-range values with the offending key.
inline RunConfig parse_config(const std::string& text, Command cmd) {
    RunConfig cfg;
    cfg.command = cmd;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    bool in_section = false;
    bool seen_section = false;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        const size_t comment = s.find_first_of("#;");
        if (comment != std::string::npos) s.erase(comment);
        size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t z = s.find_last_not_of(" \t\r");
        s = s.substr(a, z - a + 1);
        if (s.front() == '[') {
            if (s.back() != ']') {
                std::ostringstream os;
                os << "line " << line << ", column " << (z + 1) << ": unterminated section header";
                throw ConfigError(os.str());
            }
            const std::string name = s.substr(1, s.size() - 2);
            in_section = name == command_name(cmd) || name == "common";
            if (name == command_name(cmd)) seen_section = true;
            continue;
        }
        if (!in_section) continue;
        const size_t eq = s.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "line " << line << ", column " << (a + 1) << ": expected key = value";
            throw ConfigError(os.str());
        }
        std::string key = s.substr(0, eq), value = s.substr(eq + 1);
        while (!key.empty() && std::isspace(key.back())) key.pop_back();
        while (!value.empty() && std::isspace(value.front())) value.erase(value.begin());
        while (!value.empty() && std::isspace(value.back())) value.pop_back();
        if (key.empty()) {
            std::ostringstream os;
            os << "line " << line << ", column " << (a + 1) << ": empty key";
            throw ConfigError(os.str());
        }
        detail::assign_key(cfg, cmd, key, value, line, int(a + eq + 1));
    }
    (void)seen_section;
    return cfg;
}

} // namespace kolm
