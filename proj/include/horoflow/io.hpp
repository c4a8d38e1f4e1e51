#pragma once

// CSV and JSON emitters/readers. All floating-point output goes through %.17g
// so files round-trip doubles exactly and rerunning a config is byte-stable.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "horoflow/ball_model.hpp"
#include "horoflow/curve.hpp"
#include "horoflow/errors.hpp"
#include "horoflow/flow.hpp"
#include "horoflow/quermass.hpp"

namespace horoflow {

using json = nlohmann::ordered_json;

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

inline std::vector<std::vector<double>> read_csv_columns(const std::filesystem::path& path,
                                                         const std::string& expect_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expect_header)
        throw IoError("unexpected header in " + path.string() + ": got '" + line + "', want '" +
                      expect_header + "'");
    const size_t ncols = std::count(expect_header.begin(), expect_header.end(), ',') + 1;
    std::vector<std::vector<double>> cols(ncols);
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= ncols) throw IoError("too many columns in " + path.string());
            try {
                cols[c].push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("bad number at " + path.string() + ":" + std::to_string(lineno));
            }
            ++c;
        }
        if (c != ncols) throw IoError("short row in " + path.string());
    }
    return cols;
}

} // namespace detail

inline void write_curve_csv(const std::filesystem::path& path, const CurveGrid& curve) {
    std::ofstream out = detail::open_out(path);
    out << "theta,rho\n";
    for (int j = 0; j < curve.n_nodes; ++j)
        out << fmt17(curve.theta(j)) << ',' << fmt17(curve.rho[j]) << '\n';
}

inline CurveGrid read_curve_csv(const std::filesystem::path& path) {
    const auto cols = detail::read_csv_columns(path, "theta,rho");
    CurveGrid c{static_cast<int>(cols[1].size()), cols[1]};
    c.validate();
    // the theta column is redundant on the uniform grid; insist it matches
    for (int j = 0; j < c.n_nodes; ++j)
        if (std::abs(cols[0][j] - c.theta(j)) > 1e-12)
            throw IoError("curve file is not on the uniform periodic grid: " + path.string());
    return c;
}

inline void write_hyp_csv(const std::filesystem::path& path, const AxisymmetricHypersurface& hyp) {
    std::ofstream out = detail::open_out(path);
    out << "theta,rho\n";
    for (int j = 0; j < hyp.m_nodes; ++j)
        out << fmt17(hyp.theta(j)) << ',' << fmt17(hyp.rho[j]) << '\n';
}

inline AxisymmetricHypersurface read_hyp_csv(const std::filesystem::path& path, int n) {
    const auto cols = detail::read_csv_columns(path, "theta,rho");
    AxisymmetricHypersurface h;
    h.n = n;
    h.m_nodes = static_cast<int>(cols[1].size());
    h.rho = cols[1];
    h.validate();
    for (int j = 0; j < h.m_nodes; ++j)
        if (std::abs(cols[0][j] - h.theta(j)) > 1e-12)
            throw IoError("profile file is not on the staggered polar grid: " + path.string());
    return h;
}

inline void write_ball_csv(const std::filesystem::path& path, const BallCurve& b) {
    std::ofstream out = detail::open_out(path);
    out << "theta,rho_e,kappa_e\n";
    for (int j = 0; j < b.n_nodes; ++j)
        out << fmt17(kTwoPi * j / b.n_nodes) << ',' << fmt17(b.rho_e[j]) << ','
            << fmt17(b.kappa_e[j]) << '\n';
}

inline void write_trace_csv(const std::filesystem::path& path, const FlowTrace& trace) {
    std::ofstream out = detail::open_out(path);
    out << "t,L,A,LA,Q,M,kmin,kmax,rmin,rmax,supdev\n";
    for (const FlowSample& s : trace.samples)
        out << fmt17(s.t) << ',' << fmt17(s.f.length) << ',' << fmt17(s.f.area) << ','
            << fmt17(s.f.la) << ',' << fmt17(s.f.hk_q.value_or(0.0)) << ','
            << fmt17(s.f.weighted_m) << ',' << fmt17(s.f.kappa_min) << ','
            << fmt17(s.f.kappa_max) << ',' << fmt17(s.f.rho_min) << ',' << fmt17(s.f.rho_max)
            << ',' << fmt17(s.sup_dev) << '\n';
}

inline json monitor_json(const MonitorSummary& m) {
    return json{{"kappa_min_drop", m.kappa_min_drop},
                {"kappa_max_rise", m.kappa_max_rise},
                {"rho_min_drop", m.rho_min_drop},
                {"rho_max_rise", m.rho_max_rise},
                {"m_increase", m.m_increase},
                {"hk_q_negativity", m.hk_q_negativity},
                {"la_drift_rel", m.la_drift_rel},
                {"dadt_mismatch_rel", m.dadt_mismatch_rel},
                {"dissipation_mismatch_rel", m.dissipation_mismatch_rel}};
}

inline json trace_summary_json(const FlowTrace& trace) {
    const CurveGrid& fin = trace.final_state.curve;
    double mean = 0.0, lo = 1e300, hi = -1e300;
    for (double r : fin.rho) {
        mean += r;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    mean /= fin.n_nodes;
    json j;
    j["termination"] = to_string(trace.termination);
    if (!trace.abort_reason.empty()) j["abort_reason"] = trace.abort_reason;
    j["steps"] = trace.final_state.step_count;
    j["t_final"] = trace.final_state.t;
    j["samples"] = trace.samples.size();
    j["a_infinity_predicted"] = trace.a_infinity_predicted;
    j["a_infinity_observed_mean"] = mean;
    j["final_rho_spread"] = hi - lo;
    j["dominant_mode"] = trace.dominant_mode;
    j["monitors"] = monitor_json(trace.monitors);
    try {
        const DecayRateFit fit = fit_decay_rate(trace);
        j["decay_rate"] = {{"fitted", fit.fitted}, {"predicted", fit.predicted}, {"mode", fit.mode}};
    } catch (const InsufficientDecayError&) {
        j["decay_rate"] = nullptr;
    }
    return j;
}

inline json inequality_report_json(const InequalityReport& rep) {
    json j;
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["deficit"] = rep.deficit;
    j["stability_ratio"] = rep.stability_ratio ? json(*rep.stability_ratio) : json(nullptr);
    j["circle_radius"] = rep.circle_radius;
    j["circle_dist"] = rep.circle_dist;
    j["circle_mean_radius"] = rep.circle_mean_radius;
    return j;
}

inline json deficit_report_json(const DeficitReport& rep) {
    json j;
    j["n"] = rep.n;
    j["margin"] = rep.margin;
    json af = json::array();
    for (const AFDeficit& d : rep.af)
        af.push_back({{"k", d.k},
                      {"l", d.l},
                      {"deficit", d.deficit},
                      {"scale", d.scale},
                      {"equality", d.equality}});
    j["alexandrov_fenchel"] = af;
    json w = json::array();
    for (const WeightedDeficit& d : rep.weighted)
        w.push_back(
            {{"k", d.k}, {"deficit", d.deficit}, {"scale", d.scale}, {"equality", d.equality}});
    j["weighted"] = w;
    return j;
}

inline json quermass_json(const QuermassVector& q) {
    json j;
    j["n"] = q.n;
    j["area"] = q.area;
    j["margin"] = q.margin;
    j["hconvex"] = q.hconvex;
    j["W"] = q.W;
    j["Wt"] = q.Wt;
    j["Wt_recursion"] = q.Wt_rec;
    j["curvature_integrals"] = q.curv;
    j["shifted_curvature_integrals"] = q.curv_shift;
    j["weighted_bigphi_minus_u"] = q.w_bigphi_minus_u;
    j["weighted_phip_minus_u"] = q.w_phip_minus_u;
    j["weighted_u"] = q.w_u;
    j["shift_relation_residual"] = q.shift_relation_residual;
    return j;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out = detail::open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace horoflow
