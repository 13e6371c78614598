// cli.hpp - command-line front end: configuration, subcommands, CSV and SVG output.
//
// Exit codes: 0 success, 1 failed self-check, 2 bad flags or unwritable
// output, 3 numerical failure.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wqed/correlation.hpp"
#include "wqed/errors.hpp"
#include "wqed/model.hpp"
#include "wqed/self_check.hpp"
#include "wqed/single_photon.hpp"
#include "wqed/svg.hpp"

namespace wqed::cli {

inline constexpr const char* kVersion = "1.0.0";

enum class ChannelChoice { Trans, Refl, Both };
enum class Format { Csv, Svg };

struct RunConfig {
    std::string subcommand;
    int n_qubits{1};
    double omega0{100.0};
    double k0l{0.5};              // A, in units of pi
    double gamma_prime{0.0};
    Method method{Method::Markov};
    ChannelChoice channel{ChannelChoice::Trans};
    Side side{Side::Red};
    std::optional<double> target_t;
    std::optional<double> omega;
    double t_max{10.0};
    double dt{0.05};
    double trans_from{0.001};
    double trans_to{0.999};
    int trans_points{50};
    std::optional<double> omega_min;   // default w0 - 3 (scan-omega) or w0 - 5 (spectrum)
    std::optional<double> omega_max;
    int points{301};
    bool log_y{false};
    Format format{Format::Csv};
    std::string out;                   // empty: standard output
    int threads{1};

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline const char* to_string(ChannelChoice c) {
    return c == ChannelChoice::Trans ? "trans" : (c == ChannelChoice::Refl ? "refl" : "both");
}

inline const char* to_string(Format f) { return f == Format::Csv ? "csv" : "svg"; }

namespace detail {

template <class E>
E parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> table, const char* what) {
    for (const auto& [name, value] : table) {
        if (s == name) return value;
    }
    throw InvalidParameter(std::string("unknown ") + what + " '" + s + "'");
}

inline Method parse_method(const std::string& s) {
    return parse_enum<Method>(s, {{"markov", Method::Markov}, {"full", Method::Full}}, "method");
}
inline ChannelChoice parse_channel(const std::string& s) {
    return parse_enum<ChannelChoice>(
        s, {{"trans", ChannelChoice::Trans}, {"refl", ChannelChoice::Refl}, {"both", ChannelChoice::Both}}, "channel");
}
inline Side parse_side(const std::string& s) { return parse_enum<Side>(s, {{"red", Side::Red}, {"blue", Side::Blue}}, "side"); }
inline Format parse_format(const std::string& s) {
    return parse_enum<Format>(s, {{"csv", Format::Csv}, {"svg", Format::Svg}}, "format");
}

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> json_opt(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace detail

/// Everything that determines the numbers in an output file. `out` and
/// `threads` are left out on purpose: neither changes the results.
inline nlohmann::json to_json(const RunConfig& c) {
    return nlohmann::json{{"subcommand", c.subcommand},
                          {"n_qubits", c.n_qubits},
                          {"omega0", c.omega0},
                          {"k0l", c.k0l},
                          {"gamma_prime", c.gamma_prime},
                          {"method", to_string(c.method)},
                          {"channel", to_string(c.channel)},
                          {"side", to_string(c.side)},
                          {"target_t", detail::opt_json(c.target_t)},
                          {"omega", detail::opt_json(c.omega)},
                          {"t_max", c.t_max},
                          {"dt", c.dt},
                          {"trans_from", c.trans_from},
                          {"trans_to", c.trans_to},
                          {"trans_points", c.trans_points},
                          {"omega_min", detail::opt_json(c.omega_min)},
                          {"omega_max", detail::opt_json(c.omega_max)},
                          {"points", c.points},
                          {"log_y", c.log_y},
                          {"format", to_string(c.format)}};
}

inline RunConfig from_json(const nlohmann::json& j) {
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.n_qubits = j.at("n_qubits").get<int>();
    c.omega0 = j.at("omega0").get<double>();
    c.k0l = j.at("k0l").get<double>();
    c.gamma_prime = j.at("gamma_prime").get<double>();
    c.method = detail::parse_method(j.at("method").get<std::string>());
    c.channel = detail::parse_channel(j.at("channel").get<std::string>());
    c.side = detail::parse_side(j.at("side").get<std::string>());
    c.target_t = detail::json_opt<double>(j, "target_t");
    c.omega = detail::json_opt<double>(j, "omega");
    c.t_max = j.at("t_max").get<double>();
    c.dt = j.at("dt").get<double>();
    c.trans_from = j.at("trans_from").get<double>();
    c.trans_to = j.at("trans_to").get<double>();
    c.trans_points = j.at("trans_points").get<int>();
    c.omega_min = detail::json_opt<double>(j, "omega_min");
    c.omega_max = detail::json_opt<double>(j, "omega_max");
    c.points = j.at("points").get<int>();
    c.log_y = j.at("log_y").get<bool>();
    c.format = detail::parse_format(j.at("format").get<std::string>());
    return c;
}

/// Shortest text that reads back to the same double (17 significant digits).
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header_lines;   // without the leading "# "
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(std::ostream& os, const Table& t) {
    for (const auto& h : t.header_lines) os << "# " << h << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
        os << '\n';
    }
}

namespace detail {

inline SystemParams system_params(const RunConfig& c) {
    return SystemParams{c.n_qubits, c.omega0, 1.0, c.gamma_prime, c.k0l};
}

inline std::vector<std::string> base_header(const RunConfig& c) {
    return {std::string("wqed ") + kVersion, "config: " + to_json(c).dump(), std::string("method: ") + to_string(c.method)};
}

inline std::vector<double> time_grid(const RunConfig& c) {
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw InvalidParameter("--dt must be positive");
    if (!(c.t_max >= 0.0) || !std::isfinite(c.t_max)) throw InvalidParameter("--t-max must be non-negative");
    const auto n = static_cast<long>(std::floor(c.t_max / c.dt + 1e-9));
    if (n > 10'000'000) throw InvalidParameter("time grid too large");
    std::vector<double> t;
    for (long i = 0; i <= n; ++i) t.push_back(static_cast<double>(i) * c.dt);
    return t;
}

inline std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw InvalidParameter("number of points must be positive");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
}

inline CorrelationOptions corr_options(const RunConfig& c) {
    CorrelationOptions o;
    o.method = c.method;
    o.threads = c.threads;
    return o;
}

inline ChannelSet channel_set(ChannelChoice c) {
    return {c != ChannelChoice::Refl, c != ChannelChoice::Trans};
}

struct Output {
    Table table;
    svg::Plot plot;
};

inline Output run_spectrum(const RunConfig& c, const QubitChain& chain) {
    const double lo = c.omega_min.value_or(chain.omega0() - 5.0);
    const double hi = c.omega_max.value_or(chain.omega0() + 5.0);
    if (!(hi > lo)) throw InvalidParameter("--omega-max must exceed --omega-min");
    const auto grid = linspace(lo, hi, c.points);
    const auto spec = transmission_spectrum(chain, grid, phase_model_for(c.method));
    Output o;
    o.table.header_lines = base_header(c);
    o.table.columns = {"omega_over_gamma", "T", "R"};
    svg::Series t{"T", {}, {}}, r{"R", {}, {}};
    for (const auto& p : spec) {
        o.table.rows.push_back({p.k, p.transmission, p.reflection});
        t.x.push_back(p.k);
        t.y.push_back(p.transmission);
        r.x.push_back(p.k);
        r.y.push_back(p.reflection);
    }
    o.plot = {"Single-photon spectrum, N = " + std::to_string(c.n_qubits), "omega / Gamma", "probability", c.log_y, {t, r}};
    return o;
}

inline Output run_g2(const RunConfig& c, const QubitChain& chain) {
    const PhaseModel model = phase_model_for(c.method);
    double k;
    if (c.omega) {
        k = *c.omega;
    } else {
        const double target = c.target_t.value_or(0.5);
        k = solve_frequency_for_T(chain, target, c.side, model);
    }
    const double achieved_t = transmission(chain, k, model);
    const auto grid = time_grid(c);
    const auto opt = corr_options(c);

    Output o;
    o.table.header_lines = base_header(c);
    o.table.header_lines.push_back("omega_over_gamma: " + fmt(k));
    o.table.header_lines.push_back("T: " + fmt(achieved_t));
    o.plot = {"g2(t), N = " + std::to_string(c.n_qubits) + ", T = " + svg::detail::num(achieved_t), "t Gamma", "g2",
              c.log_y, {}};
    o.plot.reference_y = 1.0;

    std::vector<CorrelationCurve> curves;
    if (c.channel != ChannelChoice::Refl) curves.push_back(g2_curve(chain, k, Channel::Transmission, grid, opt));
    if (c.channel != ChannelChoice::Trans) curves.push_back(g2_curve(chain, k, Channel::Reflection, grid, opt));

    o.table.columns = {"t_over_gamma"};
    if (c.channel == ChannelChoice::Both) {
        o.table.columns.insert(o.table.columns.end(), {"g2_trans", "g2_refl"});
    } else {
        o.table.columns.push_back("g2");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row{grid[i]};
        for (const auto& cv : curves) row.push_back(cv.g2[i]);
        o.table.rows.push_back(row);
    }
    for (const auto& cv : curves) o.plot.series.push_back({cv.channel == Channel::Transmission ? "transmission" : "reflection", cv.t, cv.g2});
    return o;
}

inline Output scan_output(const RunConfig& c, const ScanResult& r, bool t_axis) {
    Output o;
    o.table.header_lines = base_header(c);
    o.table.header_lines.push_back(std::string("side: ") + to_string(r.side));
    o.table.header_lines.push_back("omega_over_gamma, T: per row");
    for (const auto& w : r.warnings) o.table.header_lines.push_back("warning: " + w);
    for (const auto& s : r.segments) {
        o.table.header_lines.push_back("segment: [" + fmt(s.omega_lo) + ", " + fmt(s.omega_hi) + "] " +
                                       (s.increasing ? "increasing" : "decreasing"));
    }
    o.table.columns = {"omega_over_gamma", "T", "g2_0_trans", "g2_0_refl"};
    svg::Series tr{"transmission", {}, {}}, re{"reflection", {}, {}};
    for (const auto& row : r.rows) {
        o.table.rows.push_back({row.omega, row.transmission, row.g2_trans, row.g2_refl});
        const double x = t_axis ? row.transmission : row.omega;
        tr.x.push_back(x);
        tr.y.push_back(row.g2_trans);
        re.x.push_back(x);
        re.y.push_back(row.g2_refl);
    }
    o.plot = {"g2(0), N = " + std::to_string(c.n_qubits), t_axis ? "T" : "omega / Gamma", "g2(0)", true, {}};
    o.plot.reference_y = 1.0;
    if (c.channel != ChannelChoice::Refl) o.plot.series.push_back(tr);
    // Reflection from one qubit is identically zero and is left off the log plot.
    if (c.channel != ChannelChoice::Trans && c.n_qubits > 1) o.plot.series.push_back(re);
    return o;
}

inline Output run_scan_t(const RunConfig& c, const QubitChain& chain) {
    if (c.trans_points < 1) throw InvalidParameter("--trans-points must be positive");
    const auto values = linspace(c.trans_from, c.trans_to, c.trans_points);
    const auto r = scan_vs_T(chain, channel_set(c.channel), values, corr_options(c), c.side);
    return scan_output(c, r, true);
}

inline Output run_scan_omega(const RunConfig& c, const QubitChain& chain) {
    const double lo = c.omega_min.value_or(chain.omega0() - 3.0);
    const double hi = c.omega_max.value_or(chain.omega0() + 3.0);
    if (!(hi > lo)) throw InvalidParameter("--omega-max must exceed --omega-min");
    const auto r = scan_vs_frequency(chain, channel_set(c.channel), linspace(lo, hi, c.points), corr_options(c));
    return scan_output(c, r, false);
}

inline void add_system_flags(CLI::App* sub, RunConfig& c) {
    sub->add_option("--n-qubits", c.n_qubits, "number of qubits N")->capture_default_str();
    sub->add_option("--omega0", c.omega0, "qubit frequency in units of Gamma")->capture_default_str();
    sub->add_option("--k0l", c.k0l, "k0 L in units of pi (e.g. 0.25, 0.5)")->capture_default_str();
    sub->add_option("--gamma-prime", c.gamma_prime, "loss rate in units of Gamma")->capture_default_str();
    sub->add_option("--out", c.out, "output file (default: standard output)");
    sub->add_option("--threads", c.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

}  // namespace detail

/// Parses argv into a config. Throws CLI::ParseError on bad flags.
inline RunConfig parse(int argc, const char* const* argv, std::ostream& out, bool& exit_early, int& exit_code) {
    RunConfig c;
    std::string method = "markov", channel = "trans", side = "red", format = "csv";
    std::optional<double> target_t, omega, omega_min, omega_max;

    CLI::App app{"Photon correlations from qubit chains in a waveguide", "wqed"};
    app.set_version_flag("--version", std::string("wqed ") + kVersion);
    app.require_subcommand(1, 1);

    auto* spectrum = app.add_subcommand("spectrum", "single-photon transmission and reflection spectrum");
    auto* g2 = app.add_subcommand("g2", "g2(t) at one frequency");
    auto* scan_t = app.add_subcommand("scan-t", "g2(0) against single-photon transmission");
    auto* scan_omega = app.add_subcommand("scan-omega", "g2(0) against frequency");
    auto* check = app.add_subcommand("check", "run the invariant self-check");

    const auto methods = CLI::IsMember({"markov", "full"});
    const auto channels = CLI::IsMember({"trans", "refl", "both"});
    const auto formats = CLI::IsMember({"csv", "svg"});
    for (auto* sub : {spectrum, g2, scan_t, scan_omega}) {
        detail::add_system_flags(sub, c);
        sub->add_option("--method", method, "markov | full")->check(methods)->capture_default_str();
        sub->add_option("--format", format, "csv | svg")->check(formats)->capture_default_str();
        sub->add_flag("--log-y", c.log_y, "logarithmic y axis in SVG output");
    }
    for (auto* sub : {g2, scan_t, scan_omega}) {
        sub->add_option("--channel", channel, "trans | refl | both")->check(channels)->capture_default_str();
        sub->add_option("--side", side, "red | blue side of the resonance")
            ->check(CLI::IsMember({"red", "blue"}))
            ->capture_default_str();
    }
    for (auto* sub : {spectrum, scan_omega}) {
        sub->add_option("--omega-min", omega_min, "lower frequency, units of Gamma");
        sub->add_option("--omega-max", omega_max, "upper frequency, units of Gamma");
        sub->add_option("--points", c.points, "number of frequencies")->capture_default_str();
    }
    auto* t_opt = g2->add_option("--target-t", target_t, "single-photon transmission selecting the frequency");
    auto* w_opt = g2->add_option("--omega", omega, "photon frequency, units of Gamma");
    t_opt->excludes(w_opt);
    w_opt->excludes(t_opt);
    g2->add_option("--t-max", c.t_max, "largest delay, units of 1/Gamma")->capture_default_str();
    g2->add_option("--dt", c.dt, "delay step, units of 1/Gamma")->capture_default_str();
    scan_t->add_option("--trans-from", c.trans_from, "first T")->capture_default_str();
    scan_t->add_option("--trans-to", c.trans_to, "last T")->capture_default_str();
    scan_t->add_option("--trans-points", c.trans_points, "number of T values")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        exit_early = true;
        exit_code = 0;
        return c;
    } catch (const CLI::CallForVersion& e) {
        out << "wqed " << kVersion << '\n';
        exit_early = true;
        exit_code = 0;
        return c;
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    c.method = detail::parse_method(method);
    c.channel = detail::parse_channel(channel);
    c.side = detail::parse_side(side);
    c.format = detail::parse_format(format);
    c.target_t = target_t;
    c.omega = omega;
    c.omega_min = omega_min;
    c.omega_max = omega_max;
    (void)check;
    return c;
}

/// Executes a parsed configuration, writing to `out` when no file is given.
inline int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.subcommand == "check") {
        bool ok = true;
        for (const auto& r : self_check()) {
            out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
            ok = ok && r.passed;
        }
        return ok ? 0 : 1;
    }

    const auto chain = validate(detail::system_params(c));
    for (const auto& w : chain.warnings()) err << "warning: " << w << '\n';

    detail::Output o;
    if (c.subcommand == "spectrum") {
        o = detail::run_spectrum(c, chain);
    } else if (c.subcommand == "g2") {
        o = detail::run_g2(c, chain);
    } else if (c.subcommand == "scan-t") {
        o = detail::run_scan_t(c, chain);
    } else if (c.subcommand == "scan-omega") {
        o = detail::run_scan_omega(c, chain);
    } else {
        throw InvalidParameter("unknown subcommand '" + c.subcommand + "'");
    }

    std::ostringstream body;
    if (c.format == Format::Csv) {
        write_csv(body, o.table);
    } else {
        svg::write(body, o.plot);
    }
    if (c.out.empty() || c.out == "-") {
        out << body.str();
        return 0;
    }
    std::ofstream file(c.out, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: cannot open output file '" << c.out << "'\n";
        return 2;
    }
    file << body.str();
    file.flush();
    if (!file) {
        err << "error: failed writing '" << c.out << "'\n";
        return 2;
    }
    return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        bool exit_early = false;
        int code = 0;
        const auto c = parse(argc, argv, out, exit_early, code);
        if (exit_early) return code;
        return execute(c, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const UnreachableTarget& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const NumericalFailure& e) {
        err << "error: numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace wqed::cli
