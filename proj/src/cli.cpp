#include "mmwsec/cli.hpp"
#include "mmwsec/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#ifndef MMWSEC_VERSION
#define MMWSEC_VERSION "0.0.0"
#endif

namespace mmwsec::cli {

namespace {

using Settings = std::map<std::string, std::string>;

// Long flag names that double as config keys.
const std::vector<std::pair<std::string, std::string>> kKeys = {
    {"antennas", "antenna count N, or a comma list for one curve per value"},
    {"paths", "path count L, or a comma list for one curve per value"},
    {"m-main", "antennas aimed at the strongest path under joint selection (default N/2)"},
    {"ls", "strongest paths eligible as the secondary path"},
    {"rho-r-db", "receiver SNR in dB"},
    {"rho-e-db", "eavesdropper SNR in dB, or a list when sweeping it"},
    {"theta-r", "receiver AoD in degrees"},
    {"theta-e", "eavesdropper angle in degrees, or a list when sweeping it"},
    {"symbols", "symbols per channel realization"},
    {"ensemble", "channel realizations per point"},
    {"seed", "base seed"},
    {"strategies", "comma list: conventional,switched,random-path,joint or all"},
    {"output", "CSV output path"},
    {"axis", "sweep axis: theta_e_deg, rho_e_db, n_antennas or n_paths"},
    {"values", "axis values: comma list or start:stop:step"},
    {"spacing", "element spacing in wavelengths"},
    {"threads", "worker threads (0 = all cores)"},
};

// Keys written to the metadata record for information only.
const std::vector<std::string> kInformational = {"tool_version", "command", "figure", "analytic"};

std::string trim(std::string s)
{
    const auto ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos == v.size())
            return d;
    } catch (const std::exception&) {
    }
    throw UsageError("--" + key + ": expected a number, got '" + v + "'");
}

long long to_integer(const std::string& key, const std::string& v)
{
    const double d = to_double(key, v);
    if (std::floor(d) != d)
        throw UsageError("--" + key + ": expected an integer, got '" + v + "'");
    return static_cast<long long>(d);
}

std::vector<double> number_list(const std::string& key, const std::string& v)
{
    const auto range = split(v, ':');
    if (range.size() == 3) {
        const double a = to_double(key, range[0]), b = to_double(key, range[1]), step = to_double(key, range[2]);
        if (!(step > 0.0) || b < a)
            throw UsageError("--" + key + ": range needs start <= stop and step > 0");
        std::vector<double> out;
        const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9));
        for (long long i = 0; i <= count; ++i)
            out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    std::vector<double> out;
    for (const auto& item : split(v, ','))
        out.push_back(to_double(key, item));
    if (out.empty())
        throw UsageError("--" + key + ": empty list");
    return out;
}

std::string join(const std::vector<double>& values)
{
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", values[i]);
        out += (i ? "," : "") + std::string(buf);
    }
    return out;
}

std::vector<StrategyKind> strategy_list(const std::string& v)
{
    if (v == "all")
        return {kAllStrategies.begin(), kAllStrategies.end()};
    std::vector<StrategyKind> out;
    if (trim(v).empty())
        throw UsageError("--strategies: empty list");
    for (const auto& item : split(v, ',')) {
        auto k = parse_strategy(item);
        if (!k)
            throw UsageError("--strategies: unknown strategy '" + item + "'");
        out.push_back(*k);
    }
    return out;
}

// Sets the parameter behind `axis` to a list: the sweep axis takes it whole,
// a single value pins the fixed parameter, and N or L lists become the series.
void apply_list(SweepSpec& spec, SweepAxis axis, const std::vector<double>& values, const std::string& key)
{
    if (spec.axis == axis) {
        spec.axis_values = values;
        return;
    }
    const bool structural = axis == SweepAxis::NAntennas || axis == SweepAxis::NPaths;
    if (structural && (spec.series_axis == axis || (values.size() > 1 && !spec.series_axis))) {
        spec.series_axis = axis;
        spec.series_values.clear();
        for (double v : values) {
            if (std::floor(v) != v)
                throw UsageError("--" + key + ": expected integers");
            spec.series_values.push_back(static_cast<int>(v));
        }
        return;
    }
    if (values.size() != 1)
        throw UsageError("--" + key + " takes a single value unless it is the sweep axis" +
                         std::string(structural ? " or the only series" : ""));
    switch (axis) {
    case SweepAxis::ThetaE: spec.fixed.theta_e_deg = values[0]; break;
    case SweepAxis::RhoE: spec.fixed.rho_e_db = values[0]; break;
    case SweepAxis::NAntennas: spec.fixed.n_antennas = static_cast<int>(values[0]); break;
    case SweepAxis::NPaths: spec.fixed.n_paths = static_cast<int>(values[0]); break;
    }
}

const std::map<std::string, SweepAxis> kAxisKeys = {
    {"theta-e", SweepAxis::ThetaE},
    {"rho-e-db", SweepAxis::RhoE},
    {"antennas", SweepAxis::NAntennas},
    {"paths", SweepAxis::NPaths},
};

void apply_settings(RunConfig& cfg, const Settings& s)
{
    SweepSpec& spec = cfg.spec;
    auto get = [&](const std::string& k) -> const std::string* {
        auto it = s.find(k);
        return it == s.end() ? nullptr : &it->second;
    };

    // A custom sweep picks its axis first so list flags land in the right place.
    if (cfg.command == "sweep") {
        if (auto v = get("axis")) {
            auto axis = parse_axis(*v);
            if (!axis)
                throw UsageError("--axis: unknown axis '" + *v + "'");
            spec.axis = *axis;
        } else {
            spec.axis = SweepAxis::ThetaE;
            if (auto r = get("rho-e-db"); r && number_list("rho-e-db", *r).size() > 1)
                spec.axis = SweepAxis::RhoE;
        }
        if (spec.series_axis == spec.axis) {
            spec.series_axis.reset();
            spec.series_values.clear();
        }
        spec.axis_values.clear();
    } else if (auto v = get("axis")) {
        if (parse_axis(*v) != spec.axis)
            throw UsageError("--axis cannot change a figure preset's axis; use the sweep command");
    }

    for (const auto& [key, axis] : kAxisKeys)
        if (auto v = get(key))
            apply_list(spec, axis, number_list(key, *v), key);
    if (auto v = get("values"))
        spec.axis_values = number_list("values", *v);
    if (spec.axis_values.empty()) {
        // Sweep over a single point at the fixed value.
        switch (spec.axis) {
        case SweepAxis::ThetaE: spec.axis_values = {spec.fixed.theta_e_deg}; break;
        case SweepAxis::RhoE: spec.axis_values = {spec.fixed.rho_e_db}; break;
        case SweepAxis::NAntennas: spec.axis_values = {static_cast<double>(spec.fixed.n_antennas)}; break;
        case SweepAxis::NPaths: spec.axis_values = {static_cast<double>(spec.fixed.n_paths)}; break;
        }
    }

    if (auto v = get("m-main"))
        spec.fixed.m_main = static_cast<int>(to_integer("m-main", *v));
    if (auto v = get("ls"))
        spec.fixed.l_s = static_cast<int>(to_integer("ls", *v));
    if (auto v = get("rho-r-db"))
        spec.fixed.rho_r_db = to_double("rho-r-db", *v);
    if (auto v = get("theta-r"))
        spec.fixed.theta_r_deg = static_cast<int>(to_integer("theta-r", *v));
    if (auto v = get("spacing"))
        spec.fixed.spacing_over_wavelength = to_double("spacing", *v);
    if (auto v = get("symbols")) {
        const auto k = to_integer("symbols", *v);
        if (k < 0)
            throw UsageError("--symbols must be positive");
        spec.symbols = static_cast<std::size_t>(k);
    }
    if (auto v = get("ensemble")) {
        const auto e = to_integer("ensemble", *v);
        if (e < 0)
            throw UsageError("--ensemble must be positive");
        spec.ensemble = static_cast<std::size_t>(e);
    }
    if (auto v = get("seed")) {
        const auto seed = to_integer("seed", *v);
        if (seed < 0)
            throw UsageError("--seed must be non-negative");
        spec.base_seed = static_cast<std::uint64_t>(seed);
    }
    if (auto v = get("strategies"))
        spec.strategies = strategy_list(*v);
    if (auto v = get("output"))
        cfg.output = *v;
    if (auto v = get("threads")) {
        const auto t = to_integer("threads", *v);
        if (t < 0)
            throw UsageError("--threads must be non-negative");
        cfg.threads = static_cast<unsigned>(t);
    }
}

bool is_key(const std::string& k)
{
    return std::any_of(kKeys.begin(), kKeys.end(), [&](const auto& p) { return p.first == k; });
}

} // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

RunConfig parse_args(const std::vector<std::string>& args)
{
    CLI::App app{"Secrecy-rate simulator for mmWave transmit beam strategies", "mmwsec"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MMWSEC_VERSION);

    int figure_id = 0;
    auto* figure = app.add_subcommand("figure", "run a figure preset (1-4)");
    figure->add_option("id", figure_id, "figure number")->required()->check(CLI::Range(1, 4));
    auto* sweep = app.add_subcommand("sweep", "run a custom sweep");

    std::map<std::string, std::string> raw;
    std::string config_path;
    bool analytic = false;
    int verbose = 0;
    for (auto* sub : {figure, sweep}) {
        for (const auto& [key, help] : kKeys)
            sub->add_option("--" + key, raw[std::string(sub->get_name()) + "/" + key], help);
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_flag("--analytic", analytic, "also write closed-form results to <output>.analytic.csv");
        sub->add_flag("-v,--verbose", verbose, "progress on stderr");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::CallForVersion&) {
        throw HelpRequested{std::string(MMWSEC_VERSION) + "\n"};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    RunConfig cfg;
    CLI::App* active = figure->parsed() ? figure : sweep;
    cfg.command = active->get_name();
    if (cfg.command == "figure") {
        cfg.figure_id = figure_id;
        cfg.spec = figure_preset(figure_id);
    } else {
        cfg.spec.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    }
    cfg.output = "results.csv";

    Settings settings;
    if (!config_path.empty()) {
        for (auto& [k, v] : read_config_file(config_path)) {
            if (std::find(kInformational.begin(), kInformational.end(), k) != kInformational.end()) {
                if (k == "analytic")
                    cfg.analytic = v == "1" || v == "true";
                continue;
            }
            if (!is_key(k))
                throw UsageError(config_path + ": unknown key '" + k + "'");
            settings[k] = v;
        }
    }
    for (const auto& [key, help] : kKeys)
        if (active->count("--" + key) > 0)
            settings[key] = raw[cfg.command + "/" + key];

    apply_settings(cfg, settings);
    cfg.analytic = cfg.analytic || analytic;
    cfg.verbosity = verbose;
    cfg.spec.validate();
    return cfg;
}

std::string metadata_record(const RunConfig& cfg)
{
    const SweepSpec& s = cfg.spec;
    std::ostringstream os;
    os << "# mmwsec run record; reusable with --config\n";
    os << "tool_version=" << MMWSEC_VERSION << '\n';
    os << "command=" << cfg.command << '\n';
    if (cfg.figure_id)
        os << "figure=" << *cfg.figure_id << '\n';
    os << "seed=" << s.base_seed << '\n';
    std::string strategies;
    for (auto k : s.strategies)
        strategies += (strategies.empty() ? "" : ",") + std::string(to_string(k));
    os << "strategies=" << strategies << '\n';
    os << "axis=" << to_string(s.axis) << '\n';
    os << "values=" << join(s.axis_values) << '\n';

    auto list_for = [&](SweepAxis a, double fixed) {
        if (s.series_axis == a)
            return join(std::vector<double>(s.series_values.begin(), s.series_values.end()));
        return join({fixed});
    };
    if (s.axis != SweepAxis::NAntennas)
        os << "antennas=" << list_for(SweepAxis::NAntennas, s.fixed.n_antennas) << '\n';
    if (s.axis != SweepAxis::NPaths)
        os << "paths=" << list_for(SweepAxis::NPaths, s.fixed.n_paths) << '\n';
    if (s.axis != SweepAxis::ThetaE)
        os << "theta-e=" << join({s.fixed.theta_e_deg}) << '\n';
    if (s.axis != SweepAxis::RhoE)
        os << "rho-e-db=" << join({s.fixed.rho_e_db}) << '\n';
    os << "m-main=" << s.fixed.m_main << '\n';
    os << "ls=" << s.fixed.l_s << '\n';
    os << "rho-r-db=" << join({s.fixed.rho_r_db}) << '\n';
    os << "theta-r=" << s.fixed.theta_r_deg << '\n';
    os << "spacing=" << join({s.fixed.spacing_over_wavelength}) << '\n';
    os << "symbols=" << s.symbols << '\n';
    os << "ensemble=" << s.ensemble << '\n';
    os << "analytic=" << (cfg.analytic ? 1 : 0) << '\n';
    return os.str();
}

int run(const RunConfig& cfg, std::ostream& log)
{
    auto write_file = [&](const std::string& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << body;
        out.flush();
        if (!out) {
            log << "error: cannot write '" << path << "'\n";
            return false;
        }
        return true;
    };

    if (cfg.verbosity > 0)
        log << "running " << cfg.command << " with " << cfg.spec.axis_values.size() << " axis points, "
            << cfg.spec.ensemble << " channels x " << cfg.spec.symbols << " symbols\n";
    const ResultTable table = run_sweep(cfg.spec, cfg.threads);
    std::ostringstream csv;
    write_csv(csv, table);
    if (!write_file(cfg.output, csv.str()) || !write_file(cfg.output + ".meta", metadata_record(cfg)))
        return kExitIo;

    if (cfg.analytic) {
        SweepSpec closed = cfg.spec;
        std::erase_if(closed.strategies, [](StrategyKind k) {
            return k != StrategyKind::RandomPath && k != StrategyKind::JointPathAntenna;
        });
        if (closed.strategies.empty()) {
            log << "warning: --analytic needs random-path or joint; no closed-form table written\n";
        } else {
            std::ostringstream acsv;
            write_csv(acsv, compare_analytic(closed, cfg.threads));
            if (!write_file(cfg.output + ".analytic.csv", acsv.str()))
                return kExitIo;
        }
    }
    if (cfg.verbosity > 0)
        log << "wrote " << cfg.output << '\n';
    if (table.all_inapplicable()) {
        log << "error: every requested point is inapplicable\n";
        return kExitInapplicable;
    }
    return kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        return run(parse_args(args), err);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for usage\n";
        return kExitUsage;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace mmwsec::cli
