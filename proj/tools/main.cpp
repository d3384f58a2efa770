#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bayesclean/cfd.hpp"
#include "bayesclean/cleaner.hpp"
#include "bayesclean/eval.hpp"
#include "bayesclean/noise.hpp"
#include "bayesclean/relation.hpp"
#include "bayesclean/synth.hpp"

using namespace bayesclean;

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

void save_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

nlohmann::json repairs_to_json(const Relation& r, const std::vector<Repair>& repairs) {
    auto row_json = [&](const Row& row) {
        nlohmann::json arr = nlohmann::json::array();
        for (ValueId v : row)
            arr.push_back(v == kNull ? nlohmann::json(nullptr)
                                     : nlohmann::json(r.pool().token(v)));
        return arr;
    };
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < repairs.size(); ++i) {
        const Repair& rep = repairs[i];
        nlohmann::json j;
        j["row"] = i;
        j["original"] = row_json(rep.original);
        j["chosen"] = row_json(rep.chosen);
        j["changed_attributes"] = rep.changed_attributes;
        j["log_posterior"] = rep.log_posterior;
        j["runner_up_margin"] =
            rep.runner_up_margin ? nlohmann::json(*rep.runner_up_margin)
                                 : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian data cleaning for categorical CSV relations"};
    app.require_subcommand(1);

    // --- synth ---
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic car relation");
    SynthConfig synth_cfg;
    std::string synth_out;
    synth_cmd->add_option("--rows", synth_cfg.rows, "number of tuples");
    synth_cmd->add_option("--seed", synth_cfg.seed, "generator seed");
    synth_cmd->add_option("--output", synth_out, "output CSV")->required();

    // --- inject ---
    auto* inject_cmd = app.add_subcommand("inject", "corrupt a relation at rate tau");
    std::string inj_in, inj_out, inj_gt, inj_mix = "1,1,1", inj_null;
    NoiseSpec noise_spec;
    inject_cmd->add_option("--input", inj_in, "clean CSV")->required();
    inject_cmd->add_option("--output", inj_out, "dirty CSV")->required();
    inject_cmd->add_option("--tau", noise_spec.tau, "per-cell corruption probability");
    inject_cmd->add_option("--mix", inj_mix, "spelling,replacement,deletion weights");
    inject_cmd->add_option("--seed", noise_spec.seed, "rng seed");
    inject_cmd->add_option("--ground-truth", inj_gt, "ground truth JSON")->required();
    inject_cmd->add_option("--null-token", inj_null, "token read/written as NULL");

    // --- clean ---
    auto* clean_cmd = app.add_subcommand("clean", "repair a relation by MAP inference");
    std::string cl_in, cl_out, cl_model, cl_repairs, cl_null;
    CleanConfig clean_cfg;
    clean_cmd->add_option("--input", cl_in, "dirty CSV")->required();
    clean_cmd->add_option("--output", cl_out, "repaired CSV")->required();
    clean_cmd->add_option("--model", cl_model, "write the learned generative model JSON here");
    clean_cmd->add_option("--repairs", cl_repairs, "write per-tuple repair records JSON here");
    clean_cmd->add_option("--alpha", clean_cfg.error.alpha, "edit-distance feature weight");
    clean_cmd->add_option("--beta", clean_cfg.error.beta, "distributional feature weight");
    clean_cmd->add_option("--mu", clean_cfg.error.mu, "f_ds Laplace smoothing");
    clean_cmd->add_option("--edit-threshold", clean_cfg.edit_threshold,
                          "tuple-level candidate distance bound");
    clean_cmd->add_option("--smoothing", clean_cfg.smoothing, "CPT Laplace smoothing");
    clean_cmd->add_option("--max-parents", clean_cfg.structure.max_parents,
                          "structure search parent cap");
    clean_cmd->add_option("--restarts", clean_cfg.structure.restarts,
                          "structure search random restarts");
    clean_cmd->add_option("--seed", clean_cfg.structure.seed, "structure search seed");
    clean_cmd->add_option("--null-token", cl_null, "token read/written as NULL");

    // --- eval ---
    auto* eval_cmd = app.add_subcommand("eval", "score a cleaning run against ground truth");
    std::string ev_clean, ev_dirty, ev_rep, ev_gt, ev_report, ev_null;
    eval_cmd->add_option("--clean", ev_clean, "clean CSV")->required();
    eval_cmd->add_option("--dirty", ev_dirty, "dirty CSV")->required();
    eval_cmd->add_option("--repaired", ev_rep, "repaired CSV")->required();
    eval_cmd->add_option("--ground-truth", ev_gt, "ground truth JSON")->required();
    eval_cmd->add_option("--report", ev_report, "report path (.json or .csv)");
    eval_cmd->add_option("--null-token", ev_null, "token read/written as NULL");

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter/scale sweeps, CSV output");
    std::string sw_axis, sw_config, sw_output;
    sweep_cmd->add_option("--axis", sw_axis, "beta | tau | n");
    sweep_cmd->add_option("--config", sw_config, "sweep config JSON")->required();
    sweep_cmd->add_option("--output", sw_output, "CSV output (default stdout)");

    // --- mine-cfd ---
    auto* mine_cmd = app.add_subcommand("mine-cfd", "mine exact CFDs");
    std::string mc_in, mc_out, mc_summary, mc_label, mc_null;
    std::uint32_t mc_minsup = 5;
    std::size_t mc_maxlhs = 3;
    mine_cmd->add_option("--input", mc_in, "input CSV")->required();
    mine_cmd->add_option("--min-support", mc_minsup, "minimum rule support");
    mine_cmd->add_option("--max-lhs", mc_maxlhs, "maximum lhs size");
    mine_cmd->add_option("--output", mc_out, "rules JSON")->required();
    mine_cmd->add_option("--summary", mc_summary, "append a summary CSV row here");
    mine_cmd->add_option("--noise-label", mc_label, "label for the summary row");
    mine_cmd->add_option("--null-token", mc_null, "token read/written as NULL");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth_cmd) {
            Relation r = synth_car_relation(synth_cfg);
            write_csv(r, synth_out);
            std::cout << "wrote " << r.size() << " tuples to " << synth_out << '\n';
        } else if (*inject_cmd) {
            double s, rpl, d;
            if (std::sscanf(inj_mix.c_str(), "%lf,%lf,%lf", &s, &rpl, &d) != 3)
                throw std::runtime_error("--mix expects three comma-separated weights");
            noise_spec.mix = {s, rpl, d};
            Relation r = load_csv(inj_in, inj_null);
            auto [dirty, gt] = inject(r, noise_spec);
            write_csv(dirty, inj_out, inj_null);
            save_json(gt.to_json(), inj_gt);
            std::cout << "corrupted " << gt.entries.size() << " of "
                      << r.size() * r.arity() << " cells\n";
        } else if (*clean_cmd) {
            Relation r = load_csv(cl_in, cl_null);
            auto t0 = std::chrono::steady_clock::now();
            DomainIndex idx = DomainIndex::build(r);
            NetworkStructure s = learn_structure(r, clean_cfg.structure);
            BayesNet bn = BayesNet::learn(r, s, clean_cfg.smoothing);
            TupleCleaner cleaner(r, idx, bn, clean_cfg);
            std::vector<Repair> repairs;
            std::vector<Row> rows;
            std::size_t changed = 0;
            for (const Row& row : r.rows()) {
                Repair rep = cleaner.clean_tuple(row);
                if (!rep.changed_attributes.empty()) ++changed;
                rows.push_back(rep.chosen);
                repairs.push_back(std::move(rep));
            }
            Relation repaired = r.with_rows(std::move(rows));
            auto t1 = std::chrono::steady_clock::now();
            write_csv(repaired, cl_out, cl_null);
            if (!cl_model.empty())
                save_json(bn.to_json(r.schema(), r.pool()), cl_model);
            if (!cl_repairs.empty()) save_json(repairs_to_json(r, repairs), cl_repairs);
            std::cout << "cleaned " << r.size() << " tuples, changed " << changed
                      << ", in " << std::fixed << std::setprecision(2)
                      << std::chrono::duration<double>(t1 - t0).count() << "s\n";
        } else if (*eval_cmd) {
            Relation clean = load_csv(ev_clean, ev_null);
            Relation dirty = load_csv(ev_dirty, ev_null);
            Relation repaired = load_csv(ev_rep, ev_null);
            GroundTruth gt = GroundTruth::from_json(load_json(ev_gt));
            CleaningMetrics metrics = score(clean, dirty, repaired, gt);
            nlohmann::json j = metrics.to_json();
            if (!ev_report.empty()) {
                if (ev_report.size() > 4 &&
                    ev_report.substr(ev_report.size() - 4) == ".csv") {
                    std::ofstream out(ev_report);
                    out << "values_corrected,false_positives,missed,overall_gain,"
                           "correction_rate\n"
                        << metrics.values_corrected << ',' << metrics.false_positives
                        << ',' << metrics.missed << ',' << metrics.overall_gain << ','
                        << metrics.correction_rate << '\n';
                } else {
                    save_json(j, ev_report);
                }
            }
            std::cout << j.dump(2) << '\n';
        } else if (*sweep_cmd) {
            nlohmann::json cfg = load_json(sw_config);
            std::string axis = !sw_axis.empty() ? sw_axis
                                                : cfg.value("axis", std::string("beta"));

            Relation clean = cfg.contains("input")
                                 ? load_csv(cfg["input"].get<std::string>(),
                                            cfg.value("null_token", std::string()))
                                 : synth_car_relation(
                                       {cfg.value("rows", std::size_t{10000}),
                                        cfg.value("seed", std::uint64_t{1}),
                                        cfg.value("makes", std::size_t{8}),
                                        cfg.value("models_per_make", std::size_t{3})});

            NoiseSpec noise;
            noise.tau = cfg.value("tau", 0.01);
            noise.seed = cfg.value("noise_seed", std::uint64_t{17});
            CleanConfig base;
            base.error.alpha = cfg.value("alpha", 2.3);
            base.error.beta = cfg.value("beta", 3.5);
            base.error.mu = cfg.value("mu", 1.0);
            base.edit_threshold = cfg.value("edit_threshold", std::size_t{4});
            base.smoothing = cfg.value("smoothing", 1.0);
            base.structure.max_parents = cfg.value("max_parents", std::size_t{3});
            base.structure.restarts = cfg.value("restarts", std::size_t{5});
            base.structure.seed = cfg.value("structure_seed", std::uint64_t{5});

            SweepResult res;
            if (axis == "beta") {
                auto betas = cfg.value("betas",
                                       std::vector<double>{0.5, 1, 2, 3, 4, 6});
                res = sweep_beta(clean, noise, betas, cfg.value("alpha_ratio", 0.667),
                                 base);
            } else if (axis == "tau") {
                auto taus = cfg.value("taus", std::vector<double>{0.005, 0.02, 0.05});
                res = sweep_scale(clean, taus, {clean.size()}, noise, base);
            } else if (axis == "n") {
                auto sizes = cfg.value(
                    "sizes", std::vector<std::size_t>{1000, 2000, 5000, 10000});
                res = sweep_scale(clean, {noise.tau}, sizes, noise, base);
            } else {
                throw std::runtime_error("unknown sweep axis: " + axis);
            }
            if (!sw_output.empty()) {
                std::ofstream out(sw_output);
                write_sweep_csv(res, out);
            } else {
                write_sweep_csv(res, std::cout);
            }
        } else if (*mine_cmd) {
            Relation r = load_csv(mc_in, mc_null);
            auto t0 = std::chrono::steady_clock::now();
            auto rules = mine_cfds(r, mc_minsup, mc_maxlhs);
            auto t1 = std::chrono::steady_clock::now();
            double secs = std::chrono::duration<double>(t1 - t0).count();
            save_json(rules_to_json(r, rules), mc_out);
            if (!mc_summary.empty()) {
                bool fresh = !std::ifstream(mc_summary).good();
                std::ofstream out(mc_summary, std::ios::app);
                if (fresh) out << "noise,rules,seconds\n";
                out << (mc_label.empty() ? mc_in : mc_label) << ',' << rules.size()
                    << ',' << secs << '\n';
            }
            std::cout << "mined " << rules.size() << " rules in " << std::fixed
                      << std::setprecision(3) << secs << "s\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
