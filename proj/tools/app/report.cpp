#include "report.hpp"

#include <chrono>
#include <ctime>

#ifndef UNILAB_VERSION
#define UNILAB_VERSION "0.0.0"
#endif

namespace unilab::app {

std::string version() { return UNILAB_VERSION; }

json make_report(const std::string& command, const json& config, const json& results,
                 const std::string& ref) {
    json payload;
    payload["command"] = command;
    payload["version"] = version();
    payload["ref"] = ref;
    payload["config"] = config;
    payload["results"] = results;

    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return {{"payload", payload}, {"metadata", {{"timestamp", buf}}}};
}

std::string payload_text(const json& report) { return report.at("payload").dump(); }

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const Interval& I) { return {{"x", I.x}, {"H", I.H}}; }

json to_json(const SupCertificate& c) {
    return {{"alpha_star", c.alpha_star}, {"value", c.value},       {"tau", c.tau},
            {"upper_bound", c.upper_bound}, {"lipschitz", c.lipschitz}, {"grid_len", c.grid_len},
            {"refine_steps", c.refine_steps}, {"evaluations", c.evaluations}};
}

json to_json(const UniformityReport& r, bool with_records) {
    json j = {{"X", r.X},     {"H", r.H},     {"M", r.M},     {"seed", r.seed}, {"tau", r.tau},
              {"U", r.U},     {"q10", r.q10}, {"q50", r.q50}, {"q90", r.q90}};
    if (with_records) {
        json rec = json::array();
        for (const auto& x : r.records) rec.push_back({{"x", x.x}, {"alpha", x.alpha}, {"value", x.value}});
        j["records"] = rec;
    }
    return j;
}

json to_json(const FixedAlphaReport& r) {
    return {{"alphas", r.alphas}, {"values", r.values}, {"max", r.max}, {"argmax", r.argmax}};
}

json to_json(const SlotScan& s) {
    return {{"counts", s.counts}, {"best_v", s.best_v}, {"best_count", s.best_count},
            {"guarantee", s.guarantee}};
}

json to_json(const DistanceResult& r) {
    return {{"D", r.D},
            {"D2", r.D2},
            {"argmin_t", r.argmin_t},
            {"argmin_q", r.argmin_q},
            {"argmin_index", r.argmin_index},
            {"t_max", r.t_max},
            {"grid_spacing", r.grid_spacing},
            {"tol", r.tol},
            {"lipschitz", r.lipschitz},
            {"max_d2", r.max_d2},
            {"X", r.X},
            {"Q", r.Q},
            {"evaluations", r.evaluations}};
}

json to_json(const MsdResult& r) {
    return {{"lhs", r.lhs},
            {"normalized", r.normalized},
            {"exceptional", r.exceptional},
            {"exceptional_mass", r.exceptional_mass},
            {"primes", r.primes}};
}

json to_json(const PrimeRatioGraph& g, bool with_edges) {
    json j = {{"vertices", g.vertices},
              {"edge_count", g.edges.size()},
              {"geometric_candidates", g.geometric_candidates},
              {"P1", g.options.P1},
              {"P2", g.options.P2},
              {"geom_tol", g.options.geom_tol},
              {"freq_tol", g.options.freq_tol}};
    if (with_edges) {
        json e = json::array();
        for (const auto& x : g.edges)
            e.push_back({{"i", x.i}, {"j", x.j}, {"p1", x.p1}, {"p2", x.p2}, {"gap", x.gap},
                         {"residual", x.residual}, {"second_primes", x.second_primes}});
        j["edges"] = e;
    }
    return j;
}

json to_json(const WalkCount& w) {
    return {{"walks", w.walks.get_str()},
            {"degree_sum", w.degree_sum.get_str()},
            {"margin", w.margin.get_str()},
            {"margin_nonnegative", sgn(w.margin) >= 0},
            {"n", w.n},
            {"k", w.k}};
}

json to_json(const ProductCount& p) {
    return {{"count", p.count.get_str()}, {"primes", p.primes}, {"window", p.window}};
}

json to_json(const MixingReport& m) {
    return {{"count", m.count},
            {"first_term", m.first_term},
            {"second_term", m.second_term},
            {"fitted_c", m.fitted_c}};
}

json to_json(const ModelFit& f) {
    return {{"T", f.T},
            {"two_pi_T", f.two_pi_T},
            {"q", f.q},
            {"residues", f.residues},
            {"residuals", f.residuals},
            {"used", f.used},
            {"score", f.score},
            {"inlier_fraction", f.inlier_fraction},
            {"ssr", f.ssr},
            {"grid_spacing", f.grid_spacing},
            {"T_max", f.T_max},
            {"cluster_radius", f.cluster_radius},
            {"cluster_size", f.cluster_size},
            {"cluster_center", f.cluster_center},
            {"anchor_offset", f.anchor_offset}};
}

json to_json(const CorrelationReport& r) {
    json j = {{"X", r.X}, {"H", r.H}, {"f", r.f}, {"a", r.a}, {"b", r.b}, {"rel_gap", r.rel_gap},
              {"normalized", to_json(r.normalized)}, {"log_normalized", to_json(r.log_normalized)}};
    j["value_direct"] = r.value_direct ? to_json(*r.value_direct) : json(nullptr);
    j["value_spectral"] = r.value_spectral ? to_json(*r.value_spectral) : json(nullptr);
    return j;
}

json to_json(const ChowlaReport& r, bool with_inner) {
    json j = {{"normalized", r.normalized}};
    if (with_inner) j["inner"] = r.inner;
    return j;
}

json to_json(const L3Report& r) {
    return {{"integral", r.integral}, {"ratio", r.ratio}, {"grid", r.grid}};
}

json to_json(const HolderReport& r) {
    return {{"lhs", r.lhs},
            {"chain", r.chain},
            {"sup_integral", r.sup_integral},
            {"end_bound", r.end_bound},
            {"chain_holds", r.chain_holds}};
}

}  // namespace unilab::app
