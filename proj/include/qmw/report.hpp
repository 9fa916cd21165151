#pragma once

#include <array>
#include <cstdio>
#include <optional>
#include <string>

#include <json.hpp>

#include "qmw/error.hpp"
#include "qmw/graph.hpp"
#include "qmw/integrate.hpp"
#include "qmw/motive.hpp"
#include "qmw/quadric.hpp"
#include "qmw/transversality.hpp"
#include "qmw/version.hpp"

namespace qmw {

inline std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

struct AnalyzeOptions {
    std::optional<Rat> epsilon;       // fixed epsilon; otherwise search
    long epsilon_search_cutoff = 64;
    DeformationSchedule schedule = DeformationSchedule::paper;
    std::optional<long> dimension_override;
    std::optional<long> prym_dim;
    std::optional<long> twist_exponent;
    std::optional<Rat> alpha;         // also run the integrator on the deformed net
    IntegrateOptions integrate;
};

struct AnalyzeOutcome {
    nlohmann::json report;
    Verdict verdict;
};

inline bool is_sunset_template(const FeynmanGraph& g) {
    if (g.vertices.size() != 2 || g.n_internal() != 3) return false;
    const auto& e0 = g.internal_edges[0];
    for (const auto& e : g.internal_edges)
        if (e.self_loop() || e.source != e0.source || e.target != e0.target) return false;
    return true;
}

namespace detail {

inline nlohmann::json graph_summary(const FeynmanGraph& g) {
    nlohmann::json j;
    j["name"] = g.name;
    j["dimension"] = g.dimension;
    j["vertices"] = g.vertices.size();
    j["internal_edges"] = g.n_internal();
    j["external_edges"] = g.external_edges.size();
    j["loop_number"] = loop_number(g);
    nlohmann::json masses = nlohmann::json::array();
    for (const auto& e : g.internal_edges) masses.push_back({{"edge", e.id}, {"mass", rat_str(e.mass)}});
    j["masses"] = masses;
    return j;
}

inline nlohmann::json probes_to_json(const HeuristicRankReport& rep) {
    nlohmann::json j;
    j["heuristic"] = true;
    j["note"] = "sample-based rank checks at exact intersection points; not a certificate";
    j["all_full_rank"] = rep.all_full_rank;
    j["probes"] = nlohmann::json::array();
    for (const auto& p : rep.probes) {
        nlohmann::json q;
        q["forms"] = p.forms;
        q["slots"] = p.slots;
        nlohmann::json sq = nlohmann::json::array();
        for (const auto& s : p.squared) sq.push_back(rat_str(s));
        q["squared_coordinates"] = sq;
        q["full_rank"] = p.full_rank;
        j["probes"].push_back(std::move(q));
    }
    return j;
}

} // namespace detail

/// The analyze pipeline: spanning tree, momentum relations, restriction,
/// deformation (fixed epsilon or search), conditions, certificates, motive
/// class and verdict, all folded into one self-contained report.
inline AnalyzeOutcome analyze_graph(FeynmanGraph g, const AnalyzeOptions& opt = {}) {
    if (opt.dimension_override) {
        g.dimension = *opt.dimension_override;
        validate_graph(g);
    }
    nlohmann::json report;
    report["tool"] = {{"name", "qmw"}, {"version", version}};
    report["input_hash"] = fnv1a64_hex(serialize_graph(g));
    report["graph"] = detail::graph_summary(g);

    SpanningTree tree = first_tree(g);
    MomentumRelations rel = momentum_relations(g, tree);
    QuadricNet base = restrict_to_subspace(g, rel);
    report["spanning_tree"] = {{"tree_edges", tree.tree_edges}, {"loop_edges", tree.complement}};
    report["schedule"] = schedule_name(opt.schedule);

    bool sunset = is_sunset_template(g) && g.dimension >= 2 && opt.schedule == DeformationSchedule::paper;
    Verdict verdict = Verdict::indeterminate("not analyzed");
    QuadricNet net;

    if (sunset) {
        std::array<Rat, 3> masses{g.internal_edges[0].mass, g.internal_edges[1].mass, g.internal_edges[2].mass};
        std::optional<EvidenceBundle> bundle;
        if (opt.epsilon) {
            net = deform_net(base, tree, *opt.epsilon, opt.schedule);
            EvidenceBundle b{*opt.epsilon, verify_conditions(net), pairwise_certificates(net, masses),
                             triple_certificates(net, masses), net};
            report["epsilon"] = rat_str(*opt.epsilon);
            report["epsilon_search"] = nullptr;
            bundle = std::move(b);
        } else {
            EpsilonSearch search;
            search.cutoff = opt.epsilon_search_cutoff;
            EpsilonSearchResult sr = search_admissible_epsilon(masses, g.dimension, search);
            nlohmann::json trace = nlohmann::json::array();
            for (const auto& a : sr.attempts)
                trace.push_back({{"epsilon", rat_str(a.epsilon)}, {"pass", a.pass}, {"failure", a.failure}});
            report["epsilon_search"] = trace;
            if (!sr.found)
                fail(errc::search_exhausted, "analyze",
                     "no admissible epsilon up to 1/" + std::to_string(opt.epsilon_search_cutoff));
            bundle = std::move(sr.found);
            net = bundle->net;
            report["epsilon"] = rat_str(bundle->epsilon);
        }
        report["conditions"] = conditions_to_json(bundle->conditions);
        report["certificates"] = {{"heuristic", false},
                                  {"pairwise", certificates_to_json(bundle->pairwise)},
                                  {"triple", certificates_to_json(bundle->triple)},
                                  {"all_nonzero", bundle->pairwise.all_nonzero && bundle->triple.all_nonzero},
                                  {"pass", bundle->pass()}};

        SunsetPipelineResult pipe = sunset_pipeline(g.dimension, masses, opt.prym_dim, opt.twist_exponent);
        report["motive"] = {{"class", motive_to_json(pipe.cls)},
                            {"class_pretty", motive_str(pipe.cls)},
                            {"union_class", motive_to_json(pipe.union_cls)},
                            {"ledger", ledger_to_json(pipe.ledger)}};
        if (bundle->pass()) {
            verdict = pipe.verdict;
        } else {
            verdict = Verdict::indeterminate(
                "epsilon = " + rat_str(bundle->epsilon) +
                " is not admissible (conditions or certificates failed); the decomposition hypotheses are unverified");
        }
    } else {
        Rat eps = opt.epsilon.value_or(Rat(1, 2));
        net = deform_net(base, tree, eps, opt.schedule);
        report["epsilon"] = rat_str(eps);
        report["conditions"] = conditions_to_json(verify_conditions(net));
        report["certificates"] = detail::probes_to_json(heuristic_rank_report(net));
        report["motive"] = nullptr;
        verdict = Verdict::indeterminate(
            "motivic decompositions are established for the sunset template only");
    }

    if (opt.alpha) {
        IntegrandSpec spec = make_integrand(net, *opt.alpha);
        report["integration"] = integration_to_json(integrate_eta(spec, opt.integrate));
        report["integration"]["alpha"] = rat_str(*opt.alpha);
    }

    report["verdict"] = verdict_to_json(verdict);
    return {std::move(report), verdict};
}

/// Exit-code contract: 0 for NotMixedTate / TateType, 2 for Indeterminate.
inline int verdict_exit_code(const Verdict& v) {
    return v.kind == Verdict::Kind::indeterminate ? 2 : 0;
}

} // namespace qmw
