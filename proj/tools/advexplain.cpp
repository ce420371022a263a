// Command-line driver: train / eval / explain / report.
//
// Exit codes: 0 ok, 2 usage or input error, 3 incompatible artifacts,
// 1 internal error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "advexplain/dataset.hpp"
#include "advexplain/error.hpp"
#include "advexplain/explainer.hpp"
#include "advexplain/model.hpp"
#include "advexplain/report.hpp"
#include "advexplain/schema.hpp"
#include "advexplain/serialize.hpp"
#include "advexplain/trainer.hpp"

namespace fs = std::filesystem;
using namespace advexplain;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitIncompatible = 3;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open data file: " + path);
    return in;
}

struct RunArtifacts {
    LoadedModel loaded;
    Preprocess preprocess;
};

RunArtifacts load_run(const fs::path& run_dir, const FeatureSchema& schema) {
    RunArtifacts art{load_model(run_dir / "model.bin"),
                     load_preprocess(run_dir / "preprocess.json")};
    if (art.loaded.schema_fingerprint != schema.fingerprint() ||
        art.preprocess.schema_fingerprint != schema.fingerprint())
        throw CompatError("schema fingerprint mismatch between model and data");
    if (art.loaded.stats_fingerprint != art.preprocess.stats.fingerprint())
        throw CompatError("normalization stats fingerprint mismatch");
    return art;
}

ClassLabel parse_class(const std::string& name) {
    auto label = class_from_name(name);
    if (!label) throw ValueError("unknown class name '" + name + "'");
    return *label;
}

int cmd_train(const std::string& data_path, const std::string& arch,
              const fs::path& out_dir, const TrainConfig& config,
              const std::vector<int>& hidden) {
    const FeatureSchema schema = FeatureSchema::nsl_kdd();
    auto in = open_input(data_path);
    Dataset dataset = build_train_dataset(in, schema);
    ClassifierModel model =
        arch == "linear"
            ? ClassifierModel::linear(static_cast<int>(schema.encoded_dim()))
            : ClassifierModel::mlp(static_cast<int>(schema.encoded_dim()), hidden,
                                   kNumClasses, config.seed);
    TrainHistory history = train(model, dataset, config);
    fs::create_directories(out_dir);
    save_model(out_dir / "model.bin", model, schema.fingerprint(),
               dataset.stats.fingerprint());
    save_preprocess(out_dir / "preprocess.json", schema, dataset.stats,
                    dataset.x_min, dataset.x_max);
    save_history_csv(out_dir / "history.csv", history);
    std::cout << "trained " << arch << " on " << dataset.size() << " samples; "
              << "best validation accuracy "
              << history.val_accuracy[static_cast<std::size_t>(history.best_epoch)]
              << " at epoch " << history.best_epoch << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& data_path, const fs::path& run_dir,
             const std::string& out_path) {
    const FeatureSchema schema = FeatureSchema::nsl_kdd();
    RunArtifacts art = load_run(run_dir, schema);
    auto in = open_input(data_path);
    Dataset dataset = build_eval_dataset(in, schema, art.preprocess.stats,
                                         art.preprocess.x_min, art.preprocess.x_max);
    EvalReport report = evaluate(art.loaded.model, dataset);
    std::cout << "accuracy: " << report.accuracy << "\n";
    std::cout << "confusion (rows = true, cols = predicted):\n";
    for (int t = 0; t < kNumClasses; ++t) {
        std::cout << "  " << class_name(static_cast<ClassLabel>(t)) << ":";
        for (int p = 0; p < kNumClasses; ++p)
            std::cout << " " << report.confusion[t][p];
        std::cout << "\n";
    }
    save_eval_json(out_path.empty() ? run_dir / "eval.json" : fs::path(out_path),
                   report);
    return kExitOk;
}

int cmd_explain(const std::string& data_path, const fs::path& run_dir,
                const std::string& true_name, const std::string& pred_name,
                bool rounding, double alpha, double step_size, int max_iters,
                double tolerance, const std::string& out_path) {
    const FeatureSchema schema = FeatureSchema::nsl_kdd();
    RunArtifacts art = load_run(run_dir, schema);
    const ClassLabel true_class = parse_class(true_name);
    const ClassLabel pred_class = parse_class(pred_name);
    if (true_class == pred_class)
        throw ValueError("--true and --pred must name different classes");

    auto in = open_input(data_path);
    Dataset dataset = build_eval_dataset(in, schema, art.preprocess.stats,
                                         art.preprocess.x_min, art.preprocess.x_max);
    auto misclassified =
        collect_misclassified(art.loaded.model, dataset, true_class, pred_class);

    ExplainConfig config;
    config.q_diag = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(schema.encoded_dim()));
    config.alpha = alpha;
    config.step_size = step_size;
    config.max_iters = max_iters;
    config.tolerance = tolerance;
    config.rounding_enabled = rounding;
    config.x_min = art.preprocess.x_min;
    config.x_max = art.preprocess.x_max;

    // Held-out rows can poke slightly outside the train-fitted box; clamp
    // them in so the corrector's in-bounds precondition holds.
    std::vector<Eigen::VectorXd> samples;
    samples.reserve(misclassified.size());
    for (const auto& m : misclassified)
        samples.push_back(project_box(m.x0, config.x_min, config.x_max));

    if (samples.empty())
        std::cerr << "warning: no samples with true class '" << true_name
                  << "' predicted as '" << pred_name << "'\n";
    auto results = explain_set(art.loaded.model, samples, true_class, config,
                               schema, art.preprocess.stats);
    std::size_t converged = 0;
    for (const auto& r : results) converged += r.converged ? 1 : 0;
    write_results_jsonl(
        out_path.empty() ? run_dir / "results.jsonl" : fs::path(out_path), results,
        art.preprocess.stats);
    std::cout << "explained " << results.size() << " samples, " << converged
              << " converged\n";
    return kExitOk;
}

int cmd_report(const fs::path& run_dir, const std::string& results_path,
               const std::string& out_dir, int top_k) {
    const FeatureSchema schema = FeatureSchema::nsl_kdd();
    Preprocess pre = load_preprocess(run_dir / "preprocess.json");
    if (pre.schema_fingerprint != schema.fingerprint())
        throw CompatError("schema fingerprint mismatch");
    const fs::path results_file =
        results_path.empty() ? run_dir / "results.jsonl" : fs::path(results_path);
    if (!fs::exists(results_file))
        throw IoError("results file not found: " + results_file.string());
    auto results = read_results_jsonl(results_file, pre.stats);
    DeviationSummary summary = mean_deviation(results, schema);
    CategoricalComparison comparison =
        categorical_comparison(results, schema, pre.stats);
    const fs::path out =
        out_dir.empty() ? run_dir / "report" : fs::path(out_dir);
    emit_report(summary, comparison, results, schema, pre.stats, out, top_k);
    std::cout << "report written to " << out.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Train intrusion-detection classifiers and explain their "
                 "misclassifications via minimal adversarial corrections"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags override it");

    std::string data_path, arch = "mlp", out_path, results_path;
    std::string true_name = "normal", pred_name = "dos";
    fs::path run_dir, out_dir;
    TrainConfig train_config;
    std::vector<int> hidden = {64, 64};
    bool rounding = false;
    double alpha = 1.0, step_size = 0.05, tolerance = 1e-6;
    int max_iters = 2000, top_k = 20;

    auto* train_cmd = app.add_subcommand("train", "train a classifier");
    train_cmd->add_option("--data", data_path, "NSL-KDD-format training file")->required();
    train_cmd->add_option("--model", arch, "architecture: linear or mlp")
        ->check(CLI::IsMember({"linear", "mlp"}));
    train_cmd->add_option("--out", out_dir, "output run directory")->required();
    train_cmd->add_option("--seed", train_config.seed, "rng seed");
    train_cmd->add_option("--lr", train_config.learning_rate, "learning rate");
    train_cmd->add_option("--batch-size", train_config.batch_size, "balanced batch size");
    train_cmd->add_option("--max-epochs", train_config.max_epochs, "epoch budget");
    train_cmd->add_option("--weight-decay", train_config.weight_decay, "L2 weight decay");
    train_cmd->add_option("--patience", train_config.early_stop_patience,
                          "early stopping patience (epochs)");
    train_cmd->add_option("--val-fraction", train_config.validation_fraction,
                          "stratified validation fraction");
    train_cmd->add_option("--hidden", hidden, "MLP hidden layer widths");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a trained model");
    eval_cmd->add_option("--data", data_path, "NSL-KDD-format data file")->required();
    eval_cmd->add_option("--run", run_dir, "run directory from train")->required();
    eval_cmd->add_option("--out", out_path, "eval JSON path (default <run>/eval.json)");

    auto* explain_cmd =
        app.add_subcommand("explain", "correct misclassified samples");
    explain_cmd->add_option("--data", data_path, "NSL-KDD-format data file")->required();
    explain_cmd->add_option("--run", run_dir, "run directory from train")->required();
    explain_cmd->add_option("--true", true_name, "true class of the samples");
    explain_cmd->add_option("--pred", pred_name, "predicted (wrong) class");
    explain_cmd->add_flag("--rounding", rounding,
                          "round discrete features inside the indicator");
    explain_cmd->add_option("--alpha", alpha, "cross-entropy scale");
    explain_cmd->add_option("--step-size", step_size, "descent step size");
    explain_cmd->add_option("--max-iters", max_iters, "iteration budget");
    explain_cmd->add_option("--tolerance", tolerance, "movement threshold");
    explain_cmd->add_option("--out", out_path,
                            "results path (default <run>/results.jsonl)");

    auto* report_cmd = app.add_subcommand("report", "emit explanation artifacts");
    report_cmd->add_option("--run", run_dir, "run directory")->required();
    report_cmd->add_option("--results", results_path,
                           "results.jsonl path (default <run>/results.jsonl)");
    report_cmd->add_option("--out", out_path, "report directory (default <run>/report)");
    report_cmd->add_option("--top-k", top_k, "bar chart feature cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (train_cmd->parsed())
            return cmd_train(data_path, arch, out_dir, train_config, hidden);
        if (eval_cmd->parsed()) return cmd_eval(data_path, run_dir, out_path);
        if (explain_cmd->parsed())
            return cmd_explain(data_path, run_dir, true_name, pred_name, rounding,
                               alpha, step_size, max_iters, tolerance, out_path);
        if (report_cmd->parsed())
            return cmd_report(run_dir, results_path, out_path, top_k);
    } catch (const CompatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIncompatible;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ValueError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
