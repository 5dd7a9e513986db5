#include "denscls/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace denscls {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t start = 0;
        while (start < cell.size() && cell[start] == ' ') ++start;
        cells.push_back(cell.substr(start));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_real(const std::string& cell, long line, const std::string& column) {
    if (cell.empty()) throw UnparseableValue(line, column, "empty cell");
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(value))
        throw UnparseableValue(line, column, "cannot parse '" + cell + "' as a number");
    return value;
}

}  // namespace

CsvSchema saheart_schema() {
    CsvSchema schema;
    schema.label_column = "chd";
    schema.ignore_columns = {"row.names"};
    schema.categorical_encodings["famhist"] = {{"Present", 1.0}, {"Absent", 0.0}};
    schema.provenance = "saheart";
    schema.expected_rows = 462;
    schema.expected_features = 9;
    return schema;
}

CsvSchema haberman_schema() {
    CsvSchema schema;
    schema.label_column = "survival";
    schema.provenance = "haberman";
    schema.expected_rows = 306;
    schema.expected_features = 3;
    return schema;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream file(path);
    if (!file) throw SchemaMismatch("cannot open '" + path + "'");

    // Lines starting with '#' carry provenance (tool version, generator
    // settings) and are skipped; the first real line is the header.
    std::string line;
    long line_no = 0;
    do {
        if (!std::getline(file, line)) throw SchemaMismatch("'" + path + "': empty file");
        ++line_no;
    } while (line.empty() || line == "\r" || line.front() == '#');
    const std::vector<std::string> header = split_line(line);

    // Resolve every header cell to a feature slot, the label, or a drop.
    constexpr Index kLabel = -1, kIgnore = -2;
    std::vector<Index> slot(header.size());
    std::vector<std::string> feature_names;
    Index label_slot = kIgnore;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (!schema.label_column.empty() && header[c] == schema.label_column) {
            slot[c] = kLabel;
            label_slot = static_cast<Index>(c);
        } else if (std::find(schema.ignore_columns.begin(), schema.ignore_columns.end(),
                             header[c]) != schema.ignore_columns.end()) {
            slot[c] = kIgnore;
        } else {
            slot[c] = static_cast<Index>(feature_names.size());
            feature_names.push_back(header[c]);
        }
    }
    if (!schema.label_column.empty() && label_slot == kIgnore)
        throw SchemaMismatch("'" + path + "': header has no label column '" +
                             schema.label_column + "'");
    const Index d = static_cast<Index>(feature_names.size());
    if (schema.expected_features >= 0 && d != schema.expected_features)
        throw SchemaMismatch("'" + path + "': expected " +
                             std::to_string(schema.expected_features) + " features, found " +
                             std::to_string(d));

    std::vector<double> values;
    std::vector<std::string> labels;
    Index n = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        ++n;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            throw SchemaMismatch("'" + path + "': line " + std::to_string(line_no) + " has " +
                                 std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(header.size()));
        values.resize(values.size() + static_cast<std::size_t>(d));
        double* row = values.data() + values.size() - static_cast<std::size_t>(d);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (slot[c] == kIgnore) continue;
            if (slot[c] == kLabel) {
                if (cells[c].empty()) throw UnparseableValue(line_no, header[c], "empty cell");
                labels.push_back(cells[c]);
                continue;
            }
            const auto encoding = schema.categorical_encodings.find(header[c]);
            if (encoding != schema.categorical_encodings.end()) {
                const auto code = encoding->second.find(cells[c]);
                if (code == encoding->second.end())
                    throw UnparseableValue(line_no, header[c],
                                           "'" + cells[c] + "' is not a declared category");
                row[slot[c]] = code->second;
            } else {
                row[slot[c]] = parse_real(cells[c], line_no, header[c]);
            }
        }
    }

    if (schema.expected_rows >= 0 && n != schema.expected_rows)
        throw SchemaMismatch("'" + path + "': expected " + std::to_string(schema.expected_rows) +
                             " rows, found " + std::to_string(n));

    Dataset ds;
    ds.features.resize(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) ds.features(i, j) = values[static_cast<std::size_t>(i * d + j)];
    ds.labels = std::move(labels);
    ds.feature_names = std::move(feature_names);
    ds.provenance = schema.provenance.empty() ? path : schema.provenance;
    return ds;
}

void write_dataset_csv(const Dataset& ds, const std::string& path,
                       const std::string& label_column, const std::string& preamble) {
    std::ofstream file(path);
    if (!file) throw SchemaMismatch("cannot write '" + path + "'");
    file << preamble;
    for (const auto& name : ds.feature_names) file << name << ',';
    file << label_column << '\n';
    char buffer[64];
    for (Index i = 0; i < ds.n(); ++i) {
        for (Index j = 0; j < ds.dim(); ++j) {
            std::snprintf(buffer, sizeof buffer, "%.17g", ds.features(i, j));
            file << buffer << ',';
        }
        file << ds.labels[static_cast<std::size_t>(i)] << '\n';
    }
    if (!file) throw SchemaMismatch("write to '" + path + "' failed");
}

namespace {

Dataset make_two_class_toy(Index n, double noise_std, Rng& rng, const char* provenance,
                           const std::vector<double>& xs, const std::vector<double>& ys) {
    Dataset ds;
    ds.features.resize(n, 2);
    for (Index i = 0; i < n; ++i) {
        ds.features(i, 0) = xs[static_cast<std::size_t>(i)] + noise_std * rng.normal();
        ds.features(i, 1) = ys[static_cast<std::size_t>(i)] + noise_std * rng.normal();
        ds.labels.push_back(i < n / 2 ? "0" : "1");
    }
    ds.feature_names = {"x", "y"};
    ds.provenance = provenance;
    return ds;
}

}  // namespace

Dataset make_moons(Index n, double noise_std, Rng& rng) {
    if (n <= 0 || n % 2 != 0) throw std::invalid_argument("make_moons: n must be even");
    if (noise_std < 0.0) throw std::invalid_argument("make_moons: noise_std must be >= 0");
    const Index m = n / 2;
    std::vector<double> xs, ys;
    for (Index i = 0; i < m; ++i) {  // upper arc, t in [0, pi]
        const double t = m == 1 ? 0.0 : std::numbers::pi * static_cast<double>(i) /
                                            static_cast<double>(m - 1);
        xs.push_back(std::cos(t));
        ys.push_back(std::sin(t));
    }
    for (Index i = 0; i < m; ++i) {  // lower arc, shifted to interleave
        const double t = m == 1 ? 0.0 : std::numbers::pi * static_cast<double>(i) /
                                            static_cast<double>(m - 1);
        xs.push_back(1.0 - std::cos(t));
        ys.push_back(0.5 - std::sin(t));
    }
    return make_two_class_toy(n, noise_std, rng, "moons", xs, ys);
}

Dataset make_circles(Index n, double radius_factor, double noise_std, Rng& rng) {
    if (n <= 0 || n % 2 != 0) throw std::invalid_argument("make_circles: n must be even");
    if (noise_std < 0.0) throw std::invalid_argument("make_circles: noise_std must be >= 0");
    const Index m = n / 2;
    std::vector<double> xs, ys;
    for (Index i = 0; i < m; ++i) {  // outer circle, radius 1
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
        xs.push_back(std::cos(t));
        ys.push_back(std::sin(t));
    }
    for (Index i = 0; i < m; ++i) {  // inner circle, radius radius_factor
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
        xs.push_back(radius_factor * std::cos(t));
        ys.push_back(radius_factor * std::sin(t));
    }
    return make_two_class_toy(n, noise_std, rng, "circles", xs, ys);
}

FoldPlan stratified_kfold(const Dataset& ds, int folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("stratified_kfold: need at least 2 folds");
    FoldPlan plan;
    plan.fold_count = folds;
    plan.seed = seed;
    plan.assignments.assign(static_cast<std::size_t>(ds.n()), -1);

    const ClassPrior prior = estimate_priors(ds.labels);
    Rng rng(seed);
    for (const std::string& label : prior.labels) {
        std::vector<Index> members;
        for (Index i = 0; i < ds.n(); ++i)
            if (ds.labels[static_cast<std::size_t>(i)] == label) members.push_back(i);
        if (static_cast<int>(members.size()) < folds)
            throw ClassTooSmall("class '" + label + "' has " +
                                std::to_string(members.size()) + " rows, need >= " +
                                std::to_string(folds));
        rng.shuffle(members);
        for (std::size_t z = 0; z < members.size(); ++z)
            plan.assignments[static_cast<std::size_t>(members[z])] =
                static_cast<int>(z % static_cast<std::size_t>(folds));
    }
    return plan;
}

MetricsReport compute_metrics(const std::vector<std::optional<std::string>>& predicted,
                              const std::vector<std::string>& labels,
                              const std::string& positive_class) {
    if (predicted.size() != labels.size())
        throw DimensionMismatch("compute_metrics: one prediction per label required");
    MetricsReport report;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool actual_positive = labels[i] == positive_class;
        if (!predicted[i]) {
            ++report.unclassified;
            if (actual_positive) ++report.fn;
            continue;
        }
        const bool predicted_positive = *predicted[i] == positive_class;
        const bool correct = *predicted[i] == labels[i];
        if (predicted_positive)
            ++(actual_positive ? report.tp : report.fp);
        else if (actual_positive)
            ++report.fn;
        else if (correct)
            ++report.tn;
        // A wrong non-positive call in a multiclass setting is neither a
        // true negative nor an F1 event; it only costs accuracy.
    }
    const double n = static_cast<double>(labels.size());
    report.accuracy = n > 0 ? static_cast<double>(report.tp + report.tn) / n : 0.0;
    const long f1_denominator = 2 * report.tp + report.fp + report.fn;
    report.f1 = f1_denominator > 0
                    ? 2.0 * static_cast<double>(report.tp) / static_cast<double>(f1_denominator)
                    : 0.0;
    return report;
}

MetricsReport compute_metrics(const std::vector<Prediction>& predictions,
                              const std::vector<std::string>& labels,
                              const std::string& positive_class) {
    std::vector<std::optional<std::string>> predicted;
    predicted.reserve(predictions.size());
    for (const auto& p : predictions) predicted.push_back(p.label);
    return compute_metrics(predicted, labels, positive_class);
}

}  // namespace denscls
