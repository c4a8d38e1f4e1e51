#pragma once

// Run configurations and the command dispatcher behind the CLI. A run is a
// single JSON config file; the same entry points are used by the test suite,
// so every output file it can produce is exercised without spawning
// processes.
//
// Exit statuses: 0 success, 2 validation failure, 3 numerical abort
// (curvature margin floor), 4 I/O error.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "horoflow/ball_model.hpp"
#include "horoflow/curve.hpp"
#include "horoflow/errors.hpp"
#include "horoflow/families.hpp"
#include "horoflow/flow.hpp"
#include "horoflow/io.hpp"
#include "horoflow/quermass.hpp"

namespace horoflow {

enum class Command { simulate, verify, scan, quermass, rate_fit, ball_map };

inline Command command_from_string(const std::string& s) {
    if (s == "simulate") return Command::simulate;
    if (s == "verify") return Command::verify;
    if (s == "scan") return Command::scan;
    if (s == "quermass") return Command::quermass;
    if (s == "rate-fit") return Command::rate_fit;
    if (s == "ball-map") return Command::ball_map;
    throw ConfigError("unknown command: " + s);
}

struct CurveSpec {
    std::optional<std::string> file;
    int n_nodes = 256;
    double base_radius = 1.0;
    std::vector<FourierMode> modes;

    CurveGrid build(const std::filesystem::path& base_dir) const {
        if (file) return read_curve_csv(base_dir / *file);
        return curve_from_modes(n_nodes, base_radius, modes);
    }
};

struct HypSpec {
    std::optional<std::string> file;
    int n = 2;
    int m_nodes = 128;
    double base_radius = 1.0;
    std::vector<FourierMode> modes;

    AxisymmetricHypersurface build(const std::filesystem::path& base_dir) const {
        if (file) return read_hyp_csv(base_dir / *file, n);
        return hyp_from_modes(n, m_nodes, base_radius, modes);
    }
};

struct ScanSpec {
    std::string family = "amplitude"; // "amplitude" or "random"
    double base_radius = 1.0;
    int mode = 2;
    int n_nodes = 256;
    std::vector<double> amplitudes;
    int count = 100; // random family size
};

struct RunConfig {
    Command command = Command::verify;
    std::optional<CurveSpec> curve;
    std::optional<HypSpec> hyp;
    FlowOptions flow;
    ScanSpec scan;
    std::uint64_t seed = 0;
    int threads = 1;
    std::filesystem::path out_dir = ".";
    std::filesystem::path config_dir = "."; // input paths resolve relative to the config file
};

namespace detail {

inline std::vector<FourierMode> parse_modes(const json& arr) {
    std::vector<FourierMode> modes;
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 2)
            throw ConfigError("modes entries must be [k, amplitude] pairs");
        FourierMode m;
        m.k = item[0].get<int>();
        m.amplitude = item[1].get<double>();
        if (m.k < 1) throw ConfigError("mode index must be >= 1");
        modes.push_back(m);
    }
    return modes;
}

} // namespace detail

inline RunConfig parse_config(const json& j, std::optional<Command> cli_command = std::nullopt) {
    RunConfig cfg;
    if (j.contains("command")) {
        cfg.command = command_from_string(j.at("command").get<std::string>());
        if (cli_command && *cli_command != cfg.command)
            throw ConfigError("config command disagrees with the CLI subcommand");
    } else if (cli_command) {
        cfg.command = *cli_command;
    } else {
        throw ConfigError("no command given (config field or CLI subcommand)");
    }
    if (j.contains("curve")) {
        const json& c = j.at("curve");
        CurveSpec spec;
        if (c.contains("file")) {
            spec.file = c.at("file").get<std::string>();
        } else {
            spec.n_nodes = c.value("n_nodes", 256);
            spec.base_radius = c.at("base_radius").get<double>();
            if (c.contains("modes")) spec.modes = detail::parse_modes(c.at("modes"));
        }
        cfg.curve = spec;
    }
    if (j.contains("hypersurface")) {
        const json& h = j.at("hypersurface");
        HypSpec spec;
        spec.n = h.value("n", 2);
        if (spec.n < 2) throw ConfigError("hypersurface n must be >= 2");
        if (h.contains("file")) {
            spec.file = h.at("file").get<std::string>();
        } else {
            spec.m_nodes = h.value("m_nodes", 128);
            spec.base_radius = h.at("base_radius").get<double>();
            if (h.contains("modes")) spec.modes = detail::parse_modes(h.at("modes"));
            for (const FourierMode& m : spec.modes)
                if (m.k % 2 != 0) throw ConfigError("hypersurface modes must be even");
        }
        cfg.hyp = spec;
    }
    if (j.contains("flow")) {
        const json& f = j.at("flow");
        cfg.flow.cfl = f.value("cfl", cfg.flow.cfl);
        cfg.flow.t_max = f.value("t_max", cfg.flow.t_max);
        cfg.flow.q_tol = f.value("q_tol", cfg.flow.q_tol);
        cfg.flow.sup_tol = f.value("sup_tol", cfg.flow.sup_tol);
        cfg.flow.sample_every = f.value("sample_every", cfg.flow.sample_every);
        if (f.contains("snapshot_every") && !f.at("snapshot_every").is_null())
            cfg.flow.snapshot_every = f.at("snapshot_every").get<int>();
        cfg.flow.margin_floor = f.value("margin_floor", cfg.flow.margin_floor);
        cfg.flow.validate();
    }
    if (j.contains("scan")) {
        const json& s = j.at("scan");
        cfg.scan.family = s.value("family", cfg.scan.family);
        if (cfg.scan.family != "amplitude" && cfg.scan.family != "random")
            throw ConfigError("scan family must be 'amplitude' or 'random'");
        cfg.scan.base_radius = s.value("base_radius", cfg.scan.base_radius);
        cfg.scan.mode = s.value("mode", cfg.scan.mode);
        cfg.scan.n_nodes = s.value("n_nodes", cfg.scan.n_nodes);
        if (s.contains("amplitudes")) cfg.scan.amplitudes = s.at("amplitudes").get<std::vector<double>>();
        cfg.scan.count = s.value("count", cfg.scan.count);
    }
    cfg.seed = j.value("seed", 0);
    cfg.threads = j.value("threads", 1);
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path,
                             std::optional<Command> cli_command = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg = parse_config(j, cli_command);
    cfg.config_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return cfg;
}

namespace detail {

struct ScanRow {
    double param = 0.0;
    double deficit = 0.0;
    double dist = 0.0;
    double ratio = std::numeric_limits<double>::quiet_NaN();
};

inline ScanRow scan_row(double param, const CurveGrid& curve) {
    const InequalityReport rep = inequality_report(derive_fields(curve));
    ScanRow row;
    row.param = param;
    row.deficit = rep.deficit;
    row.dist = rep.circle_dist;
    if (rep.stability_ratio) row.ratio = *rep.stability_ratio;
    return row;
}

inline int run_simulate(const RunConfig& cfg) {
    const CurveGrid curve = cfg.curve->build(cfg.config_dir);
    const FlowTrace trace = evolve(curve, cfg.flow);
    write_trace_csv(cfg.out_dir / "trace.csv", trace);
    if (cfg.flow.snapshot_every) {
        for (size_t i = 0; i < trace.snapshots.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_%06zu.csv",
                          i * static_cast<size_t>(*cfg.flow.snapshot_every));
            write_curve_csv(cfg.out_dir / name, trace.snapshots[i].second);
        }
    }
    write_curve_csv(cfg.out_dir / "final_curve.csv", trace.final_state.curve);
    write_json(cfg.out_dir / "summary.json", trace_summary_json(trace));
    return trace.termination == Termination::aborted_margin ? 3 : 0;
}

inline int run_verify(const RunConfig& cfg) {
    if (cfg.curve && cfg.hyp) throw ConfigError("verify takes a curve or a hypersurface, not both");
    if (cfg.curve) {
        const CurveGrid curve = cfg.curve->build(cfg.config_dir);
        write_json(cfg.out_dir / "report.json",
                   inequality_report_json(inequality_report(derive_fields(curve))));
        return 0;
    }
    if (cfg.hyp) {
        const AxisymmetricHypersurface hyp = cfg.hyp->build(cfg.config_dir);
        json j = deficit_report_json(af_deficits(hyp));
        json ratios = json::array();
        for (int k = 1; k <= hyp.n - 1; ++k) {
            const StabilityRatios sr = sphere_stability_ratio(hyp, k);
            ratios.push_back({{"k", k},
                              {"dist", sr.dist},
                              {"ratio_af", sr.ratio_af ? json(*sr.ratio_af) : json(nullptr)},
                              {"ratio_w", sr.ratio_w ? json(*sr.ratio_w) : json(nullptr)}});
        }
        j["stability_ratios"] = ratios;
        write_json(cfg.out_dir / "deficits.json", j);
        return 0;
    }
    throw ConfigError("verify needs a curve or hypersurface");
}

inline int run_scan(const RunConfig& cfg) {
    std::vector<CurveGrid> family;
    std::vector<double> params;
    if (cfg.scan.family == "amplitude") {
        if (cfg.scan.amplitudes.empty()) throw ConfigError("amplitude scan needs amplitudes");
        for (double eps : cfg.scan.amplitudes) {
            family.push_back(curve_from_modes(cfg.scan.n_nodes, cfg.scan.base_radius,
                                              {{cfg.scan.mode, eps, 0.0}}));
            params.push_back(eps);
        }
    } else {
        RandomFamilyOptions opt;
        opt.count = cfg.scan.count;
        opt.n_nodes = cfg.scan.n_nodes;
        family = random_hconvex_family(cfg.seed, opt);
        for (size_t i = 0; i < family.size(); ++i) params.push_back(static_cast<double>(i));
    }

    std::vector<ScanRow> rows(family.size());
    const int workers = std::max(1, std::min<int>(cfg.threads, static_cast<int>(family.size())));
    if (workers == 1) {
        for (size_t i = 0; i < family.size(); ++i) rows[i] = scan_row(params[i], family[i]);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < family.size(); i = next.fetch_add(1))
                    rows[i] = scan_row(params[i], family[i]);
            });
        for (std::thread& t : pool) t.join();
    }

    std::ofstream out = open_out(cfg.out_dir / "scan.csv");
    out << "param,deficit,dist,ratio\n";
    for (const ScanRow& r : rows)
        out << fmt17(r.param) << ',' << fmt17(r.deficit) << ',' << fmt17(r.dist) << ','
            << fmt17(r.ratio) << '\n';
    return 0;
}

inline int run_quermass(const RunConfig& cfg) {
    if (!cfg.hyp) throw ConfigError("quermass needs a hypersurface");
    const AxisymmetricHypersurface hyp = cfg.hyp->build(cfg.config_dir);
    write_json(cfg.out_dir / "quermass.json", quermass_json(quermass_vector(hyp)));
    return 0;
}

inline int run_rate_fit(const RunConfig& cfg) {
    if (!cfg.curve) throw ConfigError("rate-fit needs a curve");
    const CurveGrid curve = cfg.curve->build(cfg.config_dir);
    const FlowTrace trace = evolve(curve, cfg.flow);
    if (trace.termination == Termination::aborted_margin) {
        write_json(cfg.out_dir / "rate.json", trace_summary_json(trace));
        return 3;
    }
    const DecayRateFit fit = fit_decay_rate(trace);
    json j;
    j["fitted"] = fit.fitted;
    j["predicted"] = fit.predicted;
    j["mode"] = fit.mode;
    j["a_infinity_predicted"] = trace.a_infinity_predicted;
    j["termination"] = to_string(trace.termination);
    write_json(cfg.out_dir / "rate.json", j);
    return 0;
}

inline int run_ball_map(const RunConfig& cfg) {
    if (!cfg.curve) throw ConfigError("ball-map needs a curve");
    const CurveGrid curve = cfg.curve->build(cfg.config_dir);
    const double margin = ball_convexity_margin(curve); // rejects non-h-convex input
    const BallCurve ball = map_curve(curve);
    write_ball_csv(cfg.out_dir / "ball.csv", ball);
    json j;
    j["convexity_margin"] = margin;
    j["rescale_factor"] = rescale_to_unit_sphere(ball);
    j["conformal_residual_max"] = conformal_residual_max(curve);
    write_json(cfg.out_dir / "ball.json", j);
    return 0;
}

} // namespace detail

/// Runs one configuration; returns the process exit status.
inline int execute(const RunConfig& cfg) {
    try {
        std::filesystem::create_directories(cfg.out_dir);
        switch (cfg.command) {
            case Command::simulate:
                if (!cfg.curve) throw ConfigError("simulate needs a curve");
                return detail::run_simulate(cfg);
            case Command::verify: return detail::run_verify(cfg);
            case Command::scan: return detail::run_scan(cfg);
            case Command::quermass: return detail::run_quermass(cfg);
            case Command::rate_fit: return detail::run_rate_fit(cfg);
            case Command::ball_map: return detail::run_ball_map(cfg);
        }
        return 2;
    } catch (const AbortedMarginError& e) {
        std::fprintf(stderr, "numerical abort: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "invalid run: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return 2;
    }
}

} // namespace horoflow
