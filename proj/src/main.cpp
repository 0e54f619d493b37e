#include "seqcomplex/classes.hpp"
#include "seqcomplex/complexity.hpp"
#include "seqcomplex/covers.hpp"
#include "seqcomplex/errors.hpp"
#include "seqcomplex/games.hpp"
#include "seqcomplex/harness.hpp"
#include "seqcomplex/io.hpp"
#include "seqcomplex/learners.hpp"
#include "seqcomplex/shattering.hpp"
#include "seqcomplex/tailbounds.hpp"
#include "seqcomplex/trees.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace seqcomplex;

// Exit contract: 0 all checks hold, 1 a check failed, 2 usage or capacity.
int exit_status = 0;

nlohmann::json real_tree_to_json(const RealTree& t) {
    nlohmann::json vals = nlohmann::json::array();
    for (const Rat& v : t.values) vals.push_back(rat_to_string(v));
    return nlohmann::json{{"depth", t.depth}, {"values", vals}};
}

std::vector<Rat> parse_labels(const std::string& csv) {
    std::vector<Rat> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(rat_from_string(item));
    }
    if (out.empty()) throw std::domain_error("labels list is empty");
    return out;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

nlohmann::json rad_to_json(const RadResult& r) {
    nlohmann::json j{{"value", r.value},
                     {"mode", rad_mode_name(r.mode)},
                     {"samples", r.sample_count},
                     {"std_error", r.std_error},
                     {"seed", r.seed}};
    if (r.has_exact) j["exact"] = rat_to_string(r.exact_value);
    if (r.argmax_tree) j["argmax_tree"] = tree_to_json(*r.argmax_tree);
    return j;
}

nlohmann::json value_to_json(const GameValue& v) {
    return nlohmann::json{{"form", v.form},
                          {"value", rat_to_string(v.value)},
                          {"value_float", to_double(v.value)},
                          {"exact", v.exact},
                          {"states", v.states}};
}

void print_suite_outcome(const std::string& name, const std::vector<ReportRecord>& rows) {
    std::size_t held = 0;
    for (const auto& r : rows)
        if (r.holds) ++held;
    std::cout << name << ": " << held << "/" << rows.size() << " checks hold\n";
    for (const auto& r : failing_rows(rows))
        std::cout << "  FAIL instance " << r.instance << " " << r.check << " (lhs=" << r.lhs
                  << ", rhs=" << r.rhs << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential complexity measures, exact small online games, and learner runs"};
    app.require_subcommand(1);

    std::string class_path, tree_path, alpha_text, norm_text = "inf", mode_text = "exact";
    std::string form = "both", labels_text = "1,-1", learner_name, adversary_name;
    std::string output, format = "json", config_path, verify_name;
    int horizon = 0, domain = 0, trials = 0, scales = 6, restarts = 8;
    std::uint64_t seed = 0, budget = 0;
    bool greedy = false, exact_flag = false, strong = false, supervised = false;

    auto* dim = app.add_subcommand("dim", "Littlestone or fat-shattering dimension of a class");
    dim->add_option("--class", class_path, "class JSON file")->required();
    dim->add_option("--alpha", alpha_text, "scale p/q; omit for the binary mistake dimension");
    dim->callback([&] {
        FunctionClass cls = load_class(class_path);
        if (alpha_text.empty()) {
            emit({{"kind", "littlestone"}, {"dimension", ldim(cls)}});
            return;
        }
        Rat alpha = rat_from_string(alpha_text);
        int d = fat_dim(cls, alpha);
        nlohmann::json j{{"kind", "fat"}, {"alpha", alpha_text}, {"dimension", d}};
        if (d >= 1) {
            ShatterCertificate cert = extract_shattered_tree(cls, alpha);
            j["certificate"] = {{"tree", tree_to_json(cert.tree)},
                                {"witness", real_tree_to_json(cert.witness)},
                                {"verified", check_certificate(cls, cert)}};
        }
        emit(j);
    });

    auto* cover = app.add_subcommand("cover", "sequential covering number on a fixed tree");
    cover->add_option("--class", class_path)->required();
    cover->add_option("--tree", tree_path)->required();
    cover->add_option("--alpha", alpha_text)->required();
    cover->add_option("--norm", norm_text, "0, 1, 2, or inf");
    cover->add_flag("--greedy", greedy, "greedy upper bound instead of the exact minimum");
    cover->callback([&] {
        FunctionClass cls = load_class(class_path);
        DomainTree x = load_tree(tree_path);
        CoverResult res = cover_number(cls, x, rat_from_string(alpha_text),
                                       norm_from_name(norm_text),
                                       greedy ? CoverMode::Greedy : CoverMode::Exact);
        nlohmann::json trees = nlohmann::json::array();
        for (const RealTree& t : res.cover.trees) trees.push_back(real_tree_to_json(t));
        emit({{"size", res.size},
              {"exact", res.exact},
              {"grid_restricted", res.grid_restricted},
              {"trees", trees}});
    });

    auto* pack = app.add_subcommand("pack", "packing numbers on a fixed tree");
    pack->add_option("--class", class_path)->required();
    pack->add_option("--tree", tree_path)->required();
    pack->add_option("--alpha", alpha_text)->required();
    pack->add_option("--norm", norm_text, "0, 1, 2, or inf");
    pack->add_flag("--strong", strong, "one common separating path for all pairs");
    pack->callback([&] {
        FunctionClass cls = load_class(class_path);
        DomainTree x = load_tree(tree_path);
        Rat alpha = rat_from_string(alpha_text);
        NormP p = norm_from_name(norm_text);
        std::size_t size = strong ? strong_packing_number(cls, x, alpha, p)
                                  : packing_number(cls, x, alpha, p);
        emit({{"size", size}, {"strong", strong}, {"norm", norm_text}});
    });

    auto* rad = app.add_subcommand("rad", "sequential Rademacher complexity");
    rad->add_option("--class", class_path)->required();
    rad->add_option("--tree", tree_path, "fixed tree; omit to optimize over trees");
    rad->add_option("--mode", mode_text, "exact, local, or mc");
    rad->add_option("--domain", domain, "domain size for the tree supremum");
    rad->add_option("--horizon", horizon, "tree depth for the tree supremum");
    rad->add_option("--trials", trials);
    rad->add_option("--seed", seed);
    rad->add_option("--restarts", restarts);
    rad->callback([&] {
        FunctionClass cls = load_class(class_path);
        if (!tree_path.empty()) {
            DomainTree x = load_tree(tree_path);
            if (mode_text == "mc")
                emit(rad_to_json(rad_fixed_tree_mc(
                    cls, x, trials > 0 ? static_cast<std::uint64_t>(trials) : 10000, seed)));
            else
                emit(rad_to_json(rad_fixed_tree(cls, x)));
            return;
        }
        if (horizon <= 0) throw std::domain_error("tree supremum needs --horizon");
        int n = domain > 0 ? domain : cls.domain_size;
        RadMode mode = mode_text == "local" ? RadMode::LocalSearch : RadMode::ExactSup;
        if (mode_text == "mc") throw std::domain_error("mc mode needs --tree");
        emit(rad_to_json(rad_sup(cls, n, horizon, mode, seed, restarts)));
    });

    auto* dudley = app.add_subcommand("dudley", "entropy-integral bound on a fixed tree");
    dudley->add_option("--class", class_path)->required();
    dudley->add_option("--tree", tree_path)->required();
    dudley->add_option("--scales", scales, "geometric grid depth");
    dudley->add_flag("--greedy", greedy, "greedy covers in the integrand");
    dudley->add_flag("--exact", exact_flag, "exact covers in the integrand");
    dudley->callback([&] {
        FunctionClass cls = load_class(class_path);
        DomainTree x = load_tree(tree_path);
        ChainingParams params;
        params.scales = scales;
        params.mode = exact_flag ? CoverMode::Exact : CoverMode::Greedy;
        DudleyReport rep = dudley_bound(cls, x, params);
        nlohmann::json grid = nlohmann::json::array();
        for (const DudleyEntry& e : rep.grid)
            grid.push_back({{"beta", rat_to_string(e.beta)}, {"n2", e.n2}});
        emit({{"value", rep.value}, {"alpha", rat_to_string(rep.alpha)}, {"grid", grid}});
    });

    auto* value = app.add_subcommand("value", "exact minimax value by backward induction");
    value->add_option("--class", class_path)->required();
    value->add_option("--horizon", horizon)->required();
    value->add_option("--form", form, "primal, dual, or both");
    value->add_flag("--supervised", supervised, "wrap the class into its supervised loss game");
    value->add_option("--labels", labels_text, "comma-separated label grid for --supervised");
    value->callback([&] {
        FunctionClass cls = load_class(class_path);
        GameSpec spec;
        if (supervised) {
            spec = supervised_spec(cls, parse_labels(labels_text), horizon);
        } else {
            spec.cls = cls;
            spec.horizon = horizon;
        }
        if (form == "primal") {
            emit(value_to_json(value_primal(spec)));
        } else if (form == "dual") {
            emit(value_to_json(value_dual(spec)));
        } else if (form == "both") {
            GameValue p = value_primal(spec), d = value_dual(spec);
            emit({{"primal", value_to_json(p)},
                  {"dual", value_to_json(d)},
                  {"equal", p.value == d.value}});
            if (p.value != d.value) exit_status = 1;
        } else {
            throw std::domain_error("unknown form \"" + form + "\"");
        }
    });

    auto* simulate_cmd = app.add_subcommand("simulate", "run a learner against an adversary");
    simulate_cmd->add_option("--learner", learner_name, "fatsoa, ewa, agnostic, or const0")
        ->required();
    simulate_cmd->add_option("--adversary", adversary_name, "tree, lowerbound, or stochastic")
        ->required();
    simulate_cmd->add_option("--class", class_path)->required();
    simulate_cmd->add_option("--horizon", horizon)->required();
    simulate_cmd->add_option("--alpha", alpha_text, "scale p/q (default 1/2)");
    simulate_cmd->add_option("--trials", trials);
    simulate_cmd->add_option("--seed", seed);
    simulate_cmd->add_option("--tree", tree_path, "tree file for the tree adversary");
    simulate_cmd->add_option("--labels", labels_text, "label grid for the stochastic adversary");
    simulate_cmd->add_option("--budget", budget, "expert pool budget (0 keeps the default)");
    simulate_cmd->add_option("--out", output, "write per-trial CSV rows to this file");
    simulate_cmd->callback([&] {
        FunctionClass cls = load_class(class_path);
        Rat alpha = alpha_text.empty() ? Rat(1, 2) : rat_from_string(alpha_text);
        int T = horizon;
        int runs = trials > 0 ? trials : 100;

        std::unique_ptr<Learner> learner;
        AgnosticLearner* agnostic = nullptr;
        if (learner_name == "fatsoa") {
            learner = fat_soa_learner(cls, alpha);
        } else if (learner_name == "const0") {
            learner = zero_learner();
        } else if (learner_name == "ewa") {
            auto specs = enumerate_experts(cls, alpha, T, budget);
            std::vector<double> priors(specs.size(), 1.0 / static_cast<double>(specs.size()));
            learner = ewa_learner(cls, alpha, std::move(specs), std::move(priors),
                                  1.0 / std::sqrt(static_cast<double>(T)));
        } else if (learner_name == "agnostic") {
            auto owned = agnostic_learner(cls, T, budget > 0 ? budget : 4096);
            agnostic = owned.get();
            learner = std::move(owned);
        } else {
            throw std::domain_error("unknown learner \"" + learner_name + "\"");
        }

        std::unique_ptr<Adversary> adversary;
        if (adversary_name == "tree") {
            if (tree_path.empty()) throw std::domain_error("tree adversary needs --tree");
            adversary = rad_adversary(load_tree(tree_path));
        } else if (adversary_name == "lowerbound") {
            adversary = lower_bound_adversary(cls, alpha, T);
        } else if (adversary_name == "stochastic") {
            adversary = stochastic_adversary(cls.domain_size, parse_labels(labels_text), T);
        } else {
            throw std::domain_error("unknown adversary \"" + adversary_name + "\"");
        }

        auto traces = simulate(*learner, *adversary, cls, T, runs, seed);
        double sum = 0, sumsq = 0;
        for (const RegretTrace& tr : traces) {
            double r = to_double(tr.regret);
            sum += r;
            sumsq += r * r;
        }
        double mean = sum / runs;
        double var = runs > 1 ? std::max(0.0, sumsq / runs - mean * mean) : 0.0;
        double se = std::sqrt(var / runs);

        if (!output.empty()) {
            std::ofstream csv(output);
            if (!csv) throw StructureError("cannot write \"" + output + "\"");
            csv << "trial,seed,cumulative,comparator,regret\n";
            for (std::size_t i = 0; i < traces.size(); ++i)
                csv << i << "," << traces[i].seed << "," << rat_to_string(traces[i].cumulative)
                    << "," << rat_to_string(traces[i].comparator) << ","
                    << rat_to_string(traces[i].regret) << "\n";
        }
        nlohmann::json j{{"learner", learner->name()},
                         {"adversary", adversary->name()},
                         {"horizon", T},
                         {"trials", runs},
                         {"seed", seed},
                         {"mean_regret", mean},
                         {"stderr_regret", se}};
        if (agnostic != nullptr) {
            j["scale_bound"] = agnostic->best_bound();
            j["within_scale_bound"] = mean <= agnostic->best_bound();
        }
        if (adversary_name == "lowerbound")
            j["forced_regret_floor"] = 2.0 * std::sqrt(static_cast<double>(T) / 8.0);
        emit(j);
    });

    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    verify->add_option("name", verify_name, "suite name, `all`, or `pollard`")->required();
    verify->add_option("--class", class_path, "class file (pollard or tail-bound)");
    verify->add_option("--tree", tree_path, "tree file (pollard or tail-bound)");
    verify->add_option("--alpha", alpha_text);
    verify->add_option("--seed", seed);
    verify->add_option("--trials", trials);
    verify->add_option("--budget", budget);
    verify->add_option("--output", output, "write the report rows to this file");
    verify->add_option("--format", format, "json or csv");
    verify->callback([&] {
        if (verify_name == "pollard") {
            if (class_path.empty() || tree_path.empty())
                throw std::domain_error("verify pollard needs --class and --tree");
            FunctionClass cls = load_class(class_path);
            DomainTree x = load_tree(tree_path);
            Rat alpha = alpha_text.empty() ? Rat(1) : rat_from_string(alpha_text);
            TailReport rep = pollard_check(cls, x, alpha);
            emit({{"alpha", rat_to_string(rep.alpha)},
                  {"lhs", rat_to_string(rep.lhs)},
                  {"lhs_float", to_double(rep.lhs)},
                  {"rhs", rep.rhs},
                  {"weak_rhs", rep.weak_rhs},
                  {"cover_size", rep.cover_size},
                  {"fat", rep.fat},
                  {"holds", rep.holds}});
            if (!rep.holds) exit_status = 1;
            return;
        }
        ExperimentConfig cfg;
        cfg.class_path = class_path;
        cfg.tree_path = tree_path;
        cfg.alpha = alpha_text;
        cfg.seed = seed;
        cfg.trials = trials;
        cfg.budget = budget;
        cfg.output = output;
        cfg.format = format;
        std::vector<std::string> names =
            verify_name == "all" ? suite_names() : std::vector<std::string>{verify_name};
        std::vector<ReportRecord> all_rows;
        for (const std::string& name : names) {
            cfg.suite = name;
            auto rows = run_suite(name, cfg);
            print_suite_outcome(name, rows);
            if (!all_hold(rows)) exit_status = 1;
            all_rows.insert(all_rows.end(), rows.begin(), rows.end());
        }
        cfg.suite = verify_name;
        write_reports(cfg, all_rows);
    });

    auto* report = app.add_subcommand("report", "run the suite described by a config file");
    report->add_option("--config", config_path, "ExperimentConfig JSON")->required();
    report->callback([&] {
        ExperimentConfig cfg = config_from_json(load_json(config_path));
        if (cfg.suite.empty()) throw std::domain_error("config has no suite name");
        auto rows = run_suite(cfg.suite, cfg);
        print_suite_outcome(cfg.suite, rows);
        write_reports(cfg, rows);
        if (!all_hold(rows)) exit_status = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ProtocolError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_status;
}
