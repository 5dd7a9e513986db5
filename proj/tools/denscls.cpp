// Command-line front end: toy-data generation, training, prediction,
// cross-validation, and decision-region plots over the denscls library.
//
// Exit codes: 0 success, 2 usage/input error, 3 runtime/training failure.
// Every output file embeds the resolved settings and the tool version.

#include "denscls/cv.hpp"
#include "denscls/model_io.hpp"
#include "denscls/report.hpp"
#include "denscls/svg_plot.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace denscls;

namespace {

constexpr const char* kToolVersion = "0.1.0";

// Shortest decimal form that parses back to exactly the same double.
std::string round_trip(double value) {
    char buffer[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value) break;
    }
    return buffer;
}

std::string comment_block(const ConfigEcho& echo) {
    std::string block = "# denscls " + std::string(kToolVersion) + "\n";
    for (const auto& [key, value] : echo) block += "# " + key + " = " + value + "\n";
    return block;
}

// Densities and model files the subcommands share.

struct ModelOptions {
    std::string model = "gmm";
    int k = 3;
    int em_max_iters = 500;
    double em_tol = 1e-6;
    double reg_epsilon = 1e-6;
    bool pooled_covariance = false;
    int layers = 0;                 // 0 = schema-dependent default
    std::string hidden;             // "" = schema-dependent default
    int epochs = 200;
    int batch_size = 64;
    double learning_rate = 1e-3;
    int patience = 20;
    double val_fraction = 0.2;
};

struct DataOptions {
    std::string path;
    std::string schema = "generic";
    std::string label_column = "label";
};

void add_model_options(CLI::App& cmd, ModelOptions& opts) {
    cmd.add_option("--model", opts.model, "Density family per class")
        ->check(CLI::IsMember({"gmm", "maf"}))
        ->capture_default_str();
    cmd.add_option("--k", opts.k, "Gaussian components per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--em-max-iters", opts.em_max_iters, "EM iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--em-tol", opts.em_tol, "EM mean log-likelihood tolerance")
        ->capture_default_str();
    cmd.add_option("--reg-epsilon", opts.reg_epsilon, "Covariance ridge")
        ->capture_default_str();
    cmd.add_flag("--pooled-covariance", opts.pooled_covariance,
                 "Average class covariances after a k=1 fit (linear rule)");
    cmd.add_option("--layers", opts.layers, "Flow depth (default depends on --schema)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--hidden", opts.hidden,
                   "Conditioner hidden sizes, COUNTxWIDTH or comma list "
                   "(default depends on --schema)");
    cmd.add_option("--epochs", opts.epochs, "Flow training epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--batch-size", opts.batch_size, "Flow minibatch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--learning-rate", opts.learning_rate, "Adam starting step")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--patience", opts.patience, "Early-stop epochs without improvement")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--val-fraction", opts.val_fraction,
                   "Share of training rows the flow holds out to steer its schedule")
        ->capture_default_str();
}

void add_data_options(CLI::App& cmd, DataOptions& opts, const char* what) {
    cmd.add_option("--data", opts.path, what);
    cmd.add_option("--schema", opts.schema,
                   "Column layout: generic uses --label-column, the named "
                   "schemas carry their encodings and shape checks")
        ->check(CLI::IsMember({"generic", "saheart", "haberman"}))
        ->capture_default_str();
    cmd.add_option("--label-column", opts.label_column, "Label column of a generic CSV")
        ->capture_default_str();
}

CsvSchema resolve_schema(const DataOptions& opts, bool want_labels) {
    CsvSchema schema;
    if (opts.schema == "saheart") schema = saheart_schema();
    else if (opts.schema == "haberman") schema = haberman_schema();
    else schema.label_column = opts.label_column;
    if (!want_labels) {
        // Prediction inputs need no labels; a label column present anyway
        // is dropped, and any row count is acceptable.
        if (!schema.label_column.empty()) schema.ignore_columns.push_back(schema.label_column);
        schema.label_column.clear();
        schema.expected_rows = -1;
    }
    return schema;
}

std::vector<Index> parse_hidden(const std::string& text) {
    const auto fail = [&] {
        throw std::invalid_argument("--hidden wants COUNTxWIDTH or a comma list of widths, got '" +
                                    text + "'");
    };
    std::vector<Index> sizes;
    const auto cross = text.find('x');
    if (cross != std::string::npos) {
        char* end = nullptr;
        const long count = std::strtol(text.c_str(), &end, 10);
        if (end != text.c_str() + cross) fail();
        const long width = std::strtol(text.c_str() + cross + 1, &end, 10);
        if (*end != '\0' || count < 1 || width < 1) fail();
        sizes.assign(static_cast<std::size_t>(count), static_cast<Index>(width));
        return sizes;
    }
    std::stringstream stream(text);
    std::string piece;
    while (std::getline(stream, piece, ',')) {
        char* end = nullptr;
        const long width = std::strtol(piece.c_str(), &end, 10);
        if (piece.empty() || *end != '\0' || width < 1) fail();
        sizes.push_back(static_cast<Index>(width));
    }
    if (sizes.empty()) fail();
    return sizes;
}

// The paper's tuned architectures double as per-dataset defaults; a
// generic CSV gets a small general-purpose flow.
void apply_schema_defaults(ModelOptions& opts, const std::string& schema) {
    if (opts.layers == 0)
        opts.layers = schema == "saheart" ? 20 : schema == "haberman" ? 10 : 5;
    if (opts.hidden.empty())
        opts.hidden = schema == "saheart" ? "8x30" : schema == "haberman" ? "9x5" : "2x32";
}

DensitySpec build_spec(const ModelOptions& opts, std::uint64_t seed) {
    DensitySpec spec;
    spec.kind = opts.model == "maf" ? DensityKind::Maf : DensityKind::Gmm;
    spec.gmm.k = opts.k;
    spec.gmm.max_iters = opts.em_max_iters;
    spec.gmm.tol = opts.em_tol;
    spec.gmm.reg_epsilon = opts.reg_epsilon;
    spec.gmm.seed = seed;
    spec.pooled_covariance = opts.pooled_covariance;
    spec.arch.num_layers = opts.layers;
    spec.arch.hidden_sizes = parse_hidden(opts.hidden);
    spec.flow.epochs = opts.epochs;
    spec.flow.batch_size = opts.batch_size;
    spec.flow.learning_rate = opts.learning_rate;
    spec.flow.patience = opts.patience;
    spec.flow.validation_fraction = opts.val_fraction;
    spec.flow.seed = seed;
    return spec;
}

void echo_model_options(ConfigEcho& echo, const ModelOptions& opts) {
    echo.emplace_back("model", opts.model);
    if (opts.model == "gmm") {
        echo.emplace_back("k", std::to_string(opts.k));
        echo.emplace_back("em_max_iters", std::to_string(opts.em_max_iters));
        echo.emplace_back("em_tol", round_trip(opts.em_tol));
        echo.emplace_back("reg_epsilon", round_trip(opts.reg_epsilon));
        echo.emplace_back("pooled_covariance", opts.pooled_covariance ? "true" : "false");
    } else {
        echo.emplace_back("layers", std::to_string(opts.layers));
        echo.emplace_back("hidden", opts.hidden);
        echo.emplace_back("epochs", std::to_string(opts.epochs));
        echo.emplace_back("batch_size", std::to_string(opts.batch_size));
        echo.emplace_back("learning_rate", round_trip(opts.learning_rate));
        echo.emplace_back("patience", std::to_string(opts.patience));
        echo.emplace_back("val_fraction", round_trip(opts.val_fraction));
    }
}

void echo_data_options(ConfigEcho& echo, const DataOptions& opts) {
    echo.emplace_back("data", opts.path);
    echo.emplace_back("schema", opts.schema);
    if (opts.schema == "generic") echo.emplace_back("label_column", opts.label_column);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaMismatch("cannot write '" + path + "'");
    out << content;
    if (!out) throw SchemaMismatch("write to '" + path + "' failed");
}

std::string trimmed(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    return text.substr(first, text.find_last_not_of(" \t\r") - first + 1);
}

// Flat key = value settings; a key names one of the subcommand's options
// without the leading dashes. Values given as flags keep priority.
void apply_config_file(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string entry = trimmed(line);
        if (entry.empty() || entry.front() == '#') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected key = value, got '" + entry + "'");
        const std::string key = trimmed(entry.substr(0, eq));
        const std::string value = trimmed(entry.substr(eq + 1));
        CLI::Option* option = cmd.get_option_no_throw("--" + key);
        if (option == nullptr || key == "config")
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": no setting named '" + key + "' under '" +
                                        cmd.get_name() + "'");
        if (option->count() > 0) continue;  // the command line already set it
        option->add_result(value);
        option->run_callback();
    }
}

// Required-but-configurable settings are validated after the config file
// has had its chance to supply them.
void require_value(const std::string& value, const char* flag) {
    if (value.empty()) throw std::invalid_argument(std::string(flag) + " is required");
}

// ---------------------------------------------------------------- commands

struct GenerateToyArgs {
    std::string kind;
    int n = 400;
    double noise = 0.1;
    double factor = 0.5;
    std::uint64_t seed = 0;
    std::string out;
};

int run_generate_toy(const GenerateToyArgs& args) {
    Rng rng(args.seed);
    const Dataset ds = args.kind == "moons" ? make_moons(args.n, args.noise, rng)
                                            : make_circles(args.n, args.factor, args.noise, rng);
    ConfigEcho echo{{"command", "generate-toy"},
                    {"kind", args.kind},
                    {"n", std::to_string(args.n)},
                    {"noise", round_trip(args.noise)}};
    if (args.kind == "circles") echo.emplace_back("factor", round_trip(args.factor));
    echo.emplace_back("seed", std::to_string(args.seed));
    write_dataset_csv(ds, args.out, "label", comment_block(echo));
    std::cout << "wrote " << ds.n() << " " << args.kind << " rows to " << args.out << "\n";
    return 0;
}

struct TrainArgs {
    DataOptions data;
    ModelOptions model;
    std::uint64_t seed = 0;
    std::string out;
};

int run_train(const TrainArgs& args) {
    const Dataset ds = load_csv(args.data.path, resolve_schema(args.data, true));

    ConfigEcho echo{{"command", "train"}};
    echo_data_options(echo, args.data);
    echo_model_options(echo, args.model);
    echo.emplace_back("seed", std::to_string(args.seed));

    FitDiagnostics diagnostics;
    const GenerativeClassifier model =
        fit(ds.features, ds.labels, build_spec(args.model, args.seed), &diagnostics);
    for (const TraceSeries& trace : diagnostics.traces)
        if (!trace.values.empty())
            std::cout << trace.name << ": " << trace.values.size() << " iterations, final "
                      << round_trip(trace.values.back()) << "\n";

    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw SchemaMismatch("cannot write '" + args.out + "'");
    out << "run-header\n";
    out << "  tool_version " << kToolVersion << "\n";
    for (const auto& [key, value] : echo) out << "  " << key << " " << value << "\n";
    out << "end run-header\n";
    save_classifier(out, model);
    if (!out) throw SchemaMismatch("write to '" + args.out + "' failed");

    std::cout << "wrote " << (model.kind == DensityKind::Gmm ? "gmm" : "maf") << " classifier ("
              << model.prior.num_classes() << " classes, d=" << model.d << ") to " << args.out
              << "\n";
    return 0;
}

struct PredictArgs {
    std::string model_path;
    DataOptions data;
    bool threshold = false;
    std::string out;
};

int run_predict(const PredictArgs& args) {
    const GenerativeClassifier model = load_classifier_file(args.model_path);
    const Dataset ds = load_csv(args.data.path, resolve_schema(args.data, false));
    if (ds.n() > 0 && ds.dim() != model.d)
        throw DimensionMismatch("model wants d=" + std::to_string(model.d) + ", data has d=" +
                                std::to_string(ds.dim()));

    ConfigEcho echo{{"command", "predict"}, {"model_file", args.model_path}};
    echo_data_options(echo, args.data);
    echo.emplace_back("threshold", args.threshold ? "true" : "false");

    std::ostringstream csv;
    csv << comment_block(echo);
    csv << "row_index,predicted_label";
    for (const std::string& label : model.prior.labels) csv << ",log_joint_" << label;
    for (const std::string& label : model.prior.labels) csv << ",log_likelihood_" << label;
    csv << ",unclassified\n";

    if (ds.n() > 0) {
        const auto predictions = predict_batch(model, ds.features, args.threshold);
        const Matrix loglik = class_log_likelihoods_batch(model, ds.features);
        for (Index i = 0; i < ds.n(); ++i) {
            const Prediction& p = predictions[static_cast<std::size_t>(i)];
            csv << i << ',' << (p.label ? *p.label : "");
            for (Index c = 0; c < loglik.cols(); ++c) csv << ',' << round_trip(p.log_joint[c]);
            for (Index c = 0; c < loglik.cols(); ++c) csv << ',' << round_trip(loglik(i, c));
            csv << ',' << (p.label ? 0 : 1) << '\n';
        }
    }
    write_text_file(args.out, csv.str());
    std::cout << "wrote " << ds.n() << " predictions to " << args.out << "\n";
    return 0;
}

struct CrossValidateArgs {
    DataOptions data;
    ModelOptions model;
    std::string positive_class;  // "" = schema-dependent default
    int folds = 5;
    double inner_fraction = 0.2;
    bool tune = false;
    bool threshold = false;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string name;  // display name; "" = upper-cased model kind
};

int run_cross_validate(const CrossValidateArgs& args) {
    const Dataset ds = load_csv(args.data.path, resolve_schema(args.data, true));

    CvConfig config;
    config.folds = args.folds;
    config.inner_validation_fraction = args.inner_fraction;
    config.seed = args.seed;
    config.use_threshold = args.threshold;
    config.positive_class = !args.positive_class.empty() ? args.positive_class
                            : args.data.schema == "haberman" ? "2"
                                                             : "1";
    config.spec = build_spec(args.model, args.seed);
    if (args.tune) {
        if (config.spec.kind == DensityKind::Gmm) {
            config.grid.gmm_ks = {1, 2, 3, 4, 5};
        } else {
            // Depth is the expensive axis; try half the configured depth
            // against the full one.
            MafArch shallow = config.spec.arch;
            shallow.num_layers = std::max(1, config.spec.arch.num_layers / 2);
            config.grid.maf_archs = {shallow, config.spec.arch};
        }
    }

    ConfigEcho echo{{"command", "cross-validate"}};
    echo_data_options(echo, args.data);
    echo_model_options(echo, args.model);
    echo.emplace_back("positive_class", config.positive_class);
    echo.emplace_back("folds", std::to_string(args.folds));
    echo.emplace_back("inner_validation_fraction", round_trip(args.inner_fraction));
    echo.emplace_back("tune", args.tune ? "true" : "false");
    echo.emplace_back("threshold", args.threshold ? "true" : "false");
    echo.emplace_back("seed", std::to_string(args.seed));

    const auto started = std::chrono::steady_clock::now();
    const CvResult result = cross_validate(ds, config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::string name = args.name;
    if (name.empty()) {
        name = args.model.model;
        for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }

    std::filesystem::create_directories(args.out_dir);
    const auto in_dir = [&](const char* file) {
        return (std::filesystem::path(args.out_dir) / file).string();
    };
    write_text_file(in_dir("report.json"), render_cv_json(result, name, echo, kToolVersion));
    const std::string text = render_cv_text(result, name, echo, kToolVersion, seconds);
    write_text_file(in_dir("report.txt"), text);
    write_text_file(in_dir("folds.csv"), comment_block(echo) + render_fold_csv(result.plan));

    std::cout << text;
    std::cout << "wrote report.json, report.txt, folds.csv to " << args.out_dir << "\n";
    if (!result.failure.empty()) {
        std::cerr << "denscls: cross-validation failed at " << result.failure << "\n";
        return 3;
    }
    return 0;
}

struct PlotRegionsArgs {
    std::string model_path;
    DataOptions data;  // optional overlay points
    GridSpec grid;
    bool threshold = false;
    std::string out;
};

int run_plot_regions(const PlotRegionsArgs& args) {
    const GenerativeClassifier model = load_classifier_file(args.model_path);
    Dataset points;
    if (!args.data.path.empty()) points = load_csv(args.data.path, resolve_schema(args.data, true));

    ConfigEcho echo{{"command", "plot-regions"}, {"model_file", args.model_path}};
    if (!args.data.path.empty()) echo_data_options(echo, args.data);
    echo.emplace_back("xmin", round_trip(args.grid.xmin));
    echo.emplace_back("xmax", round_trip(args.grid.xmax));
    echo.emplace_back("ymin", round_trip(args.grid.ymin));
    echo.emplace_back("ymax", round_trip(args.grid.ymax));
    echo.emplace_back("step", round_trip(args.grid.step));
    echo.emplace_back("threshold", args.threshold ? "true" : "false");

    // XML comments must not contain "--"; settings may (paths, negatives).
    std::string stamp = "denscls " + std::string(kToolVersion);
    for (const auto& [key, value] : echo) stamp += "\n  " + key + " = " + value;
    for (auto at = stamp.find("--"); at != std::string::npos; at = stamp.find("--", at))
        stamp.replace(at, 2, "- -");

    const std::string svg = render_regions_svg(model, points, args.grid, args.threshold);
    write_text_file(args.out, "<!-- " + stamp + "\n-->\n" + svg);
    std::cout << "wrote decision regions to " << args.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density-estimation classifiers: per-class GMM or masked "
                 "autoregressive flow likelihoods under Bayes' rule"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    // Each subcommand takes the same flat key=value settings file, applied
    // by hand after parsing so flags keep priority and the file may supply
    // any option, required ones included.
    std::string config_path;
    const auto add_config_option = [&config_path](CLI::App& cmd) {
        cmd.add_option("--config", config_path,
                       "Flat key = value settings file; explicit flags win");
    };

    GenerateToyArgs toy;
    CLI::App* generate_toy =
        app.add_subcommand("generate-toy", "Write a moons or circles CSV");
    add_config_option(*generate_toy);
    generate_toy->add_option("--kind", toy.kind, "moons or circles")
        ->check(CLI::IsMember({"moons", "circles"}));
    generate_toy->add_option("--n", toy.n, "Total points (even, split evenly)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    generate_toy->add_option("--noise", toy.noise, "Coordinate noise standard deviation")
        ->capture_default_str();
    generate_toy->add_option("--factor", toy.factor, "Inner/outer radius ratio (circles)")
        ->capture_default_str();
    generate_toy->add_option("--seed", toy.seed, "Noise seed")->capture_default_str();
    generate_toy->add_option("--out", toy.out, "Output CSV path");

    TrainArgs train;
    CLI::App* train_cmd = app.add_subcommand("train", "Fit a classifier and save it");
    add_config_option(*train_cmd);
    add_data_options(*train_cmd, train.data, "Training CSV");
    add_model_options(*train_cmd, train.model);
    train_cmd->add_option("--seed", train.seed, "Fit seed")->capture_default_str();
    train_cmd->add_option("--out", train.out, "Output model path");

    PredictArgs predict;
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "Label a CSV with a saved classifier");
    add_config_option(*predict_cmd);
    predict_cmd->add_option("--model-file", predict.model_path, "Saved classifier");
    add_data_options(*predict_cmd, predict.data, "Input CSV (labels optional, ignored)");
    predict_cmd->add_flag("--threshold", predict.threshold,
                          "Reject rows below the model's likelihood threshold");
    predict_cmd->add_option("--out", predict.out, "Output predictions CSV");

    CrossValidateArgs cv;
    CLI::App* cv_cmd = app.add_subcommand(
        "cross-validate", "Stratified k-fold evaluation with inner-validation tuning");
    add_config_option(*cv_cmd);
    add_data_options(*cv_cmd, cv.data, "Dataset CSV");
    add_model_options(*cv_cmd, cv.model);
    cv_cmd->add_option("--positive-class", cv.positive_class,
                       "F1 positive label (default: schema's minority event)");
    cv_cmd->add_option("--folds", cv.folds, "Fold count")
        ->check(CLI::Range(2, 100))
        ->capture_default_str();
    cv_cmd->add_option("--inner-fraction", cv.inner_fraction,
                       "Validation share of each fold's remainder")
        ->capture_default_str();
    cv_cmd->add_flag("--tune", cv.tune, "Search the hyperparameter grid per fold");
    cv_cmd->add_flag("--threshold", cv.threshold, "Apply the rejection threshold when scoring");
    cv_cmd->add_option("--seed", cv.seed, "Master seed")->capture_default_str();
    cv_cmd->add_option("--out-dir", cv.out_dir, "Where report.json/report.txt/folds.csv go")
        ->capture_default_str();
    cv_cmd->add_option("--name", cv.name, "Model name shown in the reports");

    PlotRegionsArgs plot;
    CLI::App* plot_cmd =
        app.add_subcommand("plot-regions", "Render 2-D decision regions as SVG");
    add_config_option(*plot_cmd);
    plot_cmd->add_option("--model-file", plot.model_path, "Saved 2-D classifier");
    plot_cmd->add_option("--data", plot.data.path, "Optional labeled CSV to overlay");
    plot_cmd->add_option("--schema", plot.data.schema, "Overlay CSV layout")
        ->check(CLI::IsMember({"generic", "saheart", "haberman"}))
        ->capture_default_str();
    plot_cmd->add_option("--label-column", plot.data.label_column, "Overlay label column")
        ->capture_default_str();
    plot_cmd->add_option("--xmin", plot.grid.xmin)->capture_default_str();
    plot_cmd->add_option("--xmax", plot.grid.xmax)->capture_default_str();
    plot_cmd->add_option("--ymin", plot.grid.ymin)->capture_default_str();
    plot_cmd->add_option("--ymax", plot.grid.ymax)->capture_default_str();
    plot_cmd->add_option("--step", plot.grid.step, "Grid spacing")->capture_default_str();
    plot_cmd->add_flag("--threshold", plot.threshold, "Paint rejected cells");
    plot_cmd->add_option("--out", plot.out, "Output SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) apply_config_file(*active, config_path);

        if (app.got_subcommand(generate_toy)) {
            require_value(toy.kind, "--kind");
            require_value(toy.out, "--out");
            return run_generate_toy(toy);
        }
        if (app.got_subcommand(train_cmd)) {
            require_value(train.data.path, "--data");
            require_value(train.out, "--out");
            apply_schema_defaults(train.model, train.data.schema);
            return run_train(train);
        }
        if (app.got_subcommand(predict_cmd)) {
            require_value(predict.model_path, "--model-file");
            require_value(predict.data.path, "--data");
            require_value(predict.out, "--out");
            return run_predict(predict);
        }
        if (app.got_subcommand(cv_cmd)) {
            require_value(cv.data.path, "--data");
            apply_schema_defaults(cv.model, cv.data.schema);
            return run_cross_validate(cv);
        }
        if (app.got_subcommand(plot_cmd)) {
            require_value(plot.model_path, "--model-file");
            require_value(plot.out, "--out");
            return run_plot_regions(plot);
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "denscls: " << e.what() << "\n";
        return 2;
    } catch (const SchemaMismatch& e) {
        std::cerr << "denscls: " << e.what() << "\n";
        return 2;
    } catch (const UnparseableValue& e) {
        std::cerr << "denscls: " << e.what() << "\n";
        return 2;
    } catch (const MalformedModel& e) {
        std::cerr << "denscls: " << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        std::cerr << "denscls: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "denscls: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "denscls: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
