// qmw: command-line front end for the quadrics-motive workbench.
//
// Subcommands:
//   analyze      full pipeline: deformation, certificates, class, verdict
//   integrate    Monte Carlo / grid evaluation of the regularized integral
//   renormalize  Birkhoff factorization of a character table
//   dump-net     emit the (deformed) quadric net
//
// Exit codes: 0 success (analyze: NotMixedTate or TateType), 1 error,
// 2 analyze verdict Indeterminate.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qmw/qmw.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) qmw::fail(qmw::errc::malformed_document, path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

qmw::Rat parse_rat_flag(const std::string& text, const std::string& flag) {
    return qmw::rat_parse(text, flag);
}

void emit(const nlohmann::json& doc) { std::cout << doc.dump(2) << "\n"; }

std::string pad(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

void render_analyze_human(const nlohmann::json& r) {
    std::cout << "graph      : " << r["graph"]["name"].get<std::string>() << "  (D = " << r["graph"]["dimension"]
              << ", L = " << r["graph"]["loop_number"] << ", n = " << r["graph"]["internal_edges"] << ")\n";
    std::cout << "tree       : ";
    for (const auto& e : r["spanning_tree"]["tree_edges"]) std::cout << e.get<std::string>() << " ";
    std::cout << " | loops: ";
    for (const auto& e : r["spanning_tree"]["loop_edges"]) std::cout << e.get<std::string>() << " ";
    std::cout << "\n";
    if (r.contains("epsilon")) std::cout << "epsilon    : " << r["epsilon"].get<std::string>() << "\n";
    if (r["conditions"].is_object()) {
        const auto& c = r["conditions"];
        std::cout << "conditions : smooth=" << c["smooth"] << " real=" << c["real"]
                  << " positive=" << c["positive_definite"] << " conservation=" << c["momentum_conservation"]
                  << "\n";
    }
    if (r["certificates"].is_object()) {
        const auto& c = r["certificates"];
        if (c.contains("heuristic") && c["heuristic"].get<bool>()) {
            std::cout << "certificates: heuristic rank probes, all_full_rank=" << c["all_full_rank"] << "\n";
        } else {
            std::cout << "certificates: pairwise " << c["pairwise"].size() << ", triple " << c["triple"].size()
                      << ", all nonzero: " << c["all_nonzero"] << "\n";
        }
    }
    if (r["motive"].is_object()) {
        std::cout << "class      : " << r["motive"]["class_pretty"].get<std::string>() << "\n";
        std::cout << "cones      : " << r["motive"]["ledger"]["cone_count"] << "\n";
    }
    std::cout << "verdict    : " << r["verdict"]["kind"].get<std::string>();
    if (r["verdict"].contains("witness"))
        std::cout << "  (witness " << r["verdict"]["witness"].get<std::string>() << ")";
    if (r["verdict"].contains("reason")) std::cout << "  -- " << r["verdict"]["reason"].get<std::string>();
    std::cout << "\n";
    if (r.contains("integration") && r["integration"].is_object())
        std::cout << "integral   : " << r["integration"]["value"] << " +/- " << r["integration"]["std_error"]
                  << "  (" << r["integration"]["samples"] << " samples)\n";
}

int run(int argc, char** argv) {
    CLI::App app{"quadrics-motive workbench"};
    app.require_subcommand(1);

    std::string graph_path, format = "json", scheme = "mc-cauchy", schedule = "paper";
    std::string epsilon_text, alpha_text = "2";
    long epsilon_search_max = 64;
    long dimension = 0, twist = -1000, prym_dim = -1;
    std::uint64_t samples = 1000000, seed = 1;
    int chunks = 0;
    int log_k = 0;

    auto add_common = [&](CLI::App* cmd, bool with_graph = true) {
        if (with_graph) cmd->add_option("graph", graph_path, "graph document (json)")->required();
        cmd->add_option("--format", format, "json|human")->capture_default_str();
    };
    auto add_net_flags = [&](CLI::App* cmd) {
        cmd->add_option("--dimension", dimension, "override the graph's spacetime dimension D");
        cmd->add_option("--epsilon", epsilon_text, "deformation parameter as p/q (default: search)");
        cmd->add_option("--epsilon-search", epsilon_search_max, "harmonic search cutoff k (eps = 1/2..1/k)")
            ->capture_default_str();
        cmd->add_option("--schedule", schedule, "deformation schedule: paper|uniform")->capture_default_str();
    };

    auto* analyze = app.add_subcommand("analyze", "conditions, certificates, class, verdict");
    add_common(analyze);
    add_net_flags(analyze);
    analyze->add_option("--twist-exponent", twist, "override the exotic twist exponent (default D-2)");
    analyze->add_option("--prym-dim", prym_dim, "dimension of the Prym variety (default 5 at D=2)");
    analyze->add_option("--alpha", alpha_text, "also integrate eta_alpha on the deformed net");
    bool analyze_with_integral = false;
    analyze->add_flag("--integrate", analyze_with_integral, "run the integrator as part of the report");
    analyze->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
    analyze->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
    analyze->add_option("--chunks", chunks, "worker threads (QMW_THREADS also caps)");

    auto* integrate = app.add_subcommand("integrate", "evaluate the regularized period integral");
    add_common(integrate);
    add_net_flags(integrate);
    integrate->add_option("--alpha", alpha_text, "exponent alpha as p/q")->capture_default_str();
    integrate->add_option("--samples", samples, "sample budget")->capture_default_str();
    integrate->add_option("--seed", seed, "RNG seed")->capture_default_str();
    integrate->add_option("--scheme", scheme, "mc-cauchy|grid")->capture_default_str();
    integrate->add_option("--chunks", chunks, "worker threads (QMW_THREADS also caps)");
    integrate->add_option("--log-power", log_k, "Laurent coefficient order k (weight by log^k)");

    auto* renorm = app.add_subcommand("renormalize", "Birkhoff factorization of a character table");
    std::string characters_path, fixtures_path;
    renorm->add_option("--characters", characters_path, "character table (json)")->required();
    renorm->add_option("--fixtures", fixtures_path, "subgraph fixture table (json)")->required();
    renorm->add_option("--format", format, "json|human")->capture_default_str();

    auto* dump = app.add_subcommand("dump-net", "emit the (deformed) quadric net");
    add_common(dump);
    add_net_flags(dump);

    CLI11_PARSE(app, argc, argv);

    auto load_graph = [&]() {
        qmw::FeynmanGraph g = qmw::parse_graph(slurp(graph_path));
        if (dimension > 0) {
            g.dimension = dimension;
            qmw::validate_graph(g);
        }
        return g;
    };
    auto build_net = [&](const qmw::FeynmanGraph& g) {
        qmw::SpanningTree tree = qmw::first_tree(g);
        qmw::MomentumRelations rel = qmw::momentum_relations(g, tree);
        qmw::QuadricNet base = qmw::restrict_to_subspace(g, rel);
        qmw::Rat eps = epsilon_text.empty() ? qmw::Rat(1, 2) : parse_rat_flag(epsilon_text, "--epsilon");
        return qmw::deform_net(base, tree, eps, qmw::schedule_from_name(schedule));
    };

    if (analyze->parsed()) {
        qmw::AnalyzeOptions opt;
        if (!epsilon_text.empty()) opt.epsilon = parse_rat_flag(epsilon_text, "--epsilon");
        opt.epsilon_search_cutoff = epsilon_search_max;
        opt.schedule = qmw::schedule_from_name(schedule);
        if (dimension > 0) opt.dimension_override = dimension;
        if (twist != -1000) opt.twist_exponent = twist;
        if (prym_dim >= 0) opt.prym_dim = prym_dim;
        if (analyze_with_integral) {
            opt.alpha = parse_rat_flag(alpha_text, "--alpha");
            opt.integrate.samples = samples;
            opt.integrate.seed = seed;
            opt.integrate.threads = chunks;
        }
        qmw::FeynmanGraph g = qmw::parse_graph(slurp(graph_path));
        qmw::AnalyzeOutcome out = qmw::analyze_graph(std::move(g), opt);
        if (format == "human") render_analyze_human(out.report);
        else emit(out.report);
        return qmw::verdict_exit_code(out.verdict);
    }

    if (integrate->parsed()) {
        qmw::FeynmanGraph g = load_graph();
        qmw::QuadricNet net = build_net(g);
        qmw::Rat alpha = parse_rat_flag(alpha_text, "--alpha");
        qmw::IntegrandSpec spec = qmw::make_integrand(net, alpha);
        qmw::IntegrateOptions opts;
        opts.samples = samples;
        opts.seed = seed;
        opts.scheme = scheme;
        opts.threads = chunks;
        opts.log_power = log_k;
        qmw::IntegrationResult res =
            log_k > 0 ? qmw::laurent_coefficient(spec, log_k, opts) : qmw::integrate_eta(spec, opts);
        nlohmann::json j = qmw::integration_to_json(res);
        j["alpha"] = qmw::rat_str(alpha);
        j["epsilon"] = qmw::rat_str(net.epsilon);
        j["threshold"] = qmw::rat_str(qmw::convergence_threshold(net));
        if (log_k > 0) j["laurent_order"] = log_k;
        if (format == "human")
            std::cout << "value = " << res.value << " +/- " << res.std_error << "  (" << res.samples
                      << " samples, seed " << res.seed << ", " << res.scheme << ")\n";
        else
            emit(j);
        return 0;
    }

    if (renorm->parsed()) {
        qmw::HopfAlgebra h = qmw::parse_fixture_table(nlohmann::json::parse(slurp(fixtures_path)));
        qmw::CharacterMap<qmw::Rat> phi = qmw::parse_character_table(nlohmann::json::parse(slurp(characters_path)));
        qmw::BirkhoffFactors<qmw::Rat> f = qmw::birkhoff_characters(h, phi);
        nlohmann::json j;
        j["center"] = qmw::rat_str(phi.center);
        j["graphs"] = nlohmann::json::object();
        for (const auto& [name, series] : phi.values) {
            nlohmann::json rec;
            rec["phi"] = qmw::laurent_to_json(series);
            rec["phi_minus"] = qmw::laurent_to_json(f.minus.at(name));
            rec["phi_plus"] = qmw::laurent_to_json(f.plus.at(name));
            rec["renormalized"] = qmw::rat_str(f.plus.at(name).at_center());
            j["graphs"][name] = std::move(rec);
        }
        if (format == "human") {
            for (const auto& [name, rec] : j["graphs"].items())
                std::cout << pad(name, 12) << " renormalized = " << rec["renormalized"].get<std::string>()
                          << "   phi- = " << f.minus.at(name).str() << "\n";
        } else {
            emit(j);
        }
        return 0;
    }

    if (dump->parsed()) {
        qmw::FeynmanGraph g = load_graph();
        qmw::QuadricNet net = build_net(g);
        emit(qmw::net_to_json(net));
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qmw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
