#include "denscls/report.hpp"

#include "json.hpp"

#include <cstdio>
#include <sstream>

namespace denscls {

namespace {

std::string two_decimals_percent(double fraction) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", 100.0 * fraction);
    return buffer;
}

nlohmann::json metrics_json(const MetricsReport& metrics) {
    return {{"accuracy", metrics.accuracy}, {"f1", metrics.f1},
            {"tp", metrics.tp},             {"fp", metrics.fp},
            {"fn", metrics.fn},             {"tn", metrics.tn},
            {"unclassified", metrics.unclassified}};
}

}  // namespace

std::string render_cv_json(const CvResult& result, const std::string& model_name,
                           const ConfigEcho& config, const std::string& tool_version) {
    nlohmann::json report;
    report["tool_version"] = tool_version;
    report["model"] = model_name;

    nlohmann::json echo;
    for (const auto& [key, value] : config) echo[key] = value;
    report["config"] = echo;

    report["fold_plan"] = {{"fold_count", result.plan.fold_count},
                           {"seed", result.plan.seed},
                           {"assignments", result.plan.assignments}};

    nlohmann::json folds = nlohmann::json::array();
    for (const FoldResult& fold : result.folds) {
        nlohmann::json entry;
        entry["fold"] = fold.fold;
        entry["chosen"] = fold.chosen;
        entry["inner_accuracy"] = fold.inner_accuracy;
        entry["train_rows"] = fold.train_rows;
        entry["validation_rows"] = fold.validation_rows;
        entry["test_rows"] = fold.test_rows;
        entry["metrics"] = metrics_json(fold.metrics);
        nlohmann::json traces;
        for (const TraceSeries& series : fold.diagnostics.traces)
            traces[series.name] = series.values;
        entry["traces"] = traces;
        folds.push_back(entry);
    }
    report["folds"] = folds;

    report["mean_accuracy"] = result.mean_accuracy;
    report["mean_f1"] = result.mean_f1;
    report["mean_accuracy_percent"] = two_decimals_percent(result.mean_accuracy);
    report["mean_f1_percent"] = two_decimals_percent(result.mean_f1);
    report["failure"] = result.failure;
    return report.dump(2) + "\n";
}

std::string render_cv_text(const CvResult& result, const std::string& model_name,
                           const ConfigEcho& config, const std::string& tool_version,
                           double total_seconds) {
    std::ostringstream out;
    out << "denscls " << tool_version << " cross-validation report\n\n";
    out << "| Model | Average Accuracy | Average F1-Score |\n";
    out << "|-------|------------------|------------------|\n";
    out << "| " << model_name << " | " << two_decimals_percent(result.mean_accuracy)
        << "% | " << two_decimals_percent(result.mean_f1) << "% |\n\n";

    out << "folds: " << result.config.folds << "  inner split: "
        << two_decimals_percent(1.0 - result.config.inner_validation_fraction) << "/"
        << two_decimals_percent(result.config.inner_validation_fraction)
        << " (train/validation of each fold's remainder)  seed: " << result.config.seed
        << "\n\n";

    for (const FoldResult& fold : result.folds) {
        char line[160];
        std::snprintf(line, sizeof line,
                      "fold %d: accuracy %s%%  f1 %s%%  (%s; inner accuracy %s%%; "
                      "%ld/%ld/%ld train/val/test)\n",
                      fold.fold, two_decimals_percent(fold.metrics.accuracy).c_str(),
                      two_decimals_percent(fold.metrics.f1).c_str(), fold.chosen.c_str(),
                      two_decimals_percent(fold.inner_accuracy).c_str(), fold.train_rows,
                      fold.validation_rows, fold.test_rows);
        out << line;
    }

    if (!result.failure.empty())
        out << "\nFAILED: " << result.failure
            << " (means cover the " << result.folds.size() << " completed folds)\n";

    out << "\nconfiguration:\n";
    for (const auto& [key, value] : config) out << "  " << key << " = " << value << "\n";

    char timing[64];
    std::snprintf(timing, sizeof timing, "\nwall clock: %.1f s\n", total_seconds);
    out << timing;
    return out.str();
}

std::string render_fold_csv(const FoldPlan& plan) {
    std::ostringstream out;
    out << "row_index,fold\n";
    for (std::size_t i = 0; i < plan.assignments.size(); ++i)
        out << i << ',' << plan.assignments[i] << '\n';
    return out.str();
}

}  // namespace denscls
