#pragma once

#include "denscls/classifier.hpp"
#include "denscls/random.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace denscls {

class SchemaMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A cell failed to parse; carries its 1-based file line and column name.
class UnparseableValue : public std::runtime_error {
public:
    UnparseableValue(long line, std::string column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", column '" + column +
                             "': " + what),
          line(line),
          column(std::move(column)) {}
    long line;
    std::string column;
};

class ClassTooSmall : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Dataset {
    Matrix features;                         // n x d
    std::vector<std::string> labels;         // length n
    std::vector<std::string> feature_names;  // length d
    std::string provenance;

    Index n() const { return features.rows(); }
    Index dim() const { return features.cols(); }
};

/// How to read one CSV layout: which column holds the label, which columns
/// to drop, and how declared categorical columns map to numbers. Expected
/// row/feature counts of -1 skip that check.
struct CsvSchema {
    /// Empty means the file carries no labels: every non-ignored column is
    /// a feature and the loaded dataset's labels stay empty.
    std::string label_column;
    std::vector<std::string> ignore_columns;
    std::map<std::string, std::map<std::string, double>> categorical_encodings;
    std::string provenance;
    Index expected_rows = -1;
    Index expected_features = -1;
};

/// Heart-disease data: 9 features, famhist encoded Present=1/Absent=0,
/// label column chd, the row.names index column dropped.
CsvSchema saheart_schema();
/// Survival data: 3 features, label column survival (1 = survived five
/// years, 2 = died within five years).
CsvSchema haberman_schema();

/// Reads a comma-separated file with a header row ('.' decimal, no quoted
/// fields). Categorical cells are mapped through the schema's encodings;
/// everything else must parse as a real number. Lines starting with '#'
/// (provenance stamps) and blank lines are skipped.
Dataset load_csv(const std::string& path, const CsvSchema& schema);

/// Writes header + rows with the label as the last column. Feature values
/// are printed with enough digits to round-trip exactly. The preamble (if
/// any) goes in front verbatim — '#' provenance lines, typically.
void write_dataset_csv(const Dataset& ds, const std::string& path,
                       const std::string& label_column = "label",
                       const std::string& preamble = "");

/// Two interleaved half-circle arcs: class 0 on (cos t, sin t) and class 1
/// on (1 - cos t, 0.5 - sin t) for t evenly spaced over [0, pi], plus
/// isotropic Gaussian noise. n must be even; classes are balanced.
Dataset make_moons(Index n, double noise_std, Rng& rng);

/// Two concentric circles of radius 1 (class 0) and radius_factor
/// (class 1), angles evenly spaced over [0, 2*pi), plus isotropic Gaussian
/// noise. n must be even; classes are balanced.
Dataset make_circles(Index n, double radius_factor, double noise_std, Rng& rng);

struct FoldPlan {
    int fold_count = 5;
    std::vector<int> assignments;  // per-row fold index
    std::uint64_t seed = 0;
};

/// Stratified partition: each class's rows are shuffled and dealt
/// round-robin over folds, so per-class fold counts differ by at most one.
FoldPlan stratified_kfold(const Dataset& ds, int folds, std::uint64_t seed);

/// Binary confusion counts with an explicit rejection tally. Unclassified
/// predictions are always wrong for accuracy and act as negative
/// predictions for F1: on an actual positive they count as FN; on an
/// actual negative they enter neither TN nor FP (TN would call them
/// correct, FP would charge F1 for a positive call never made).
struct MetricsReport {
    double accuracy = 0.0;
    double f1 = 0.0;
    long tp = 0, fp = 0, fn = 0, tn = 0;
    long unclassified = 0;
};

MetricsReport compute_metrics(const std::vector<std::optional<std::string>>& predicted,
                              const std::vector<std::string>& labels,
                              const std::string& positive_class);
MetricsReport compute_metrics(const std::vector<Prediction>& predictions,
                              const std::vector<std::string>& labels,
                              const std::string& positive_class);

}  // namespace denscls
