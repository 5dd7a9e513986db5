#pragma once

#include "denscls/gmm.hpp"
#include "denscls/maf.hpp"
#include "denscls/scaler.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace denscls {

class EmptyClass : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownClass : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A per-class density fit failed; carries the class label it happened in.
class DensityFitError : public std::runtime_error {
public:
    DensityFitError(std::string label, const std::string& msg)
        : std::runtime_error("class '" + label + "': " + msg), class_label(std::move(label)) {}
    std::string class_label;
};

struct ClassPrior {
    std::vector<std::string> labels;  // distinct, sorted
    Vector log_priors;                // ln(n_j / n)

    Index index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return static_cast<Index>(i);
        return -1;
    }
    int num_classes() const { return static_cast<int>(labels.size()); }
};

/// Empirical class frequencies. Labels are collected, deduplicated and
/// sorted so the class order is deterministic for any input order.
ClassPrior estimate_priors(const std::vector<std::string>& labels);

enum class DensityKind { Gmm, Maf };

/// Which likelihood family to fit per class, and with what configuration.
/// pooled_covariance averages the per-class covariances (weighted by class
/// frequency) after a k=1 fit, turning the quadratic rule into the
/// linear-discriminant one.
struct DensitySpec {
    DensityKind kind = DensityKind::Gmm;
    EmConfig gmm;
    bool pooled_covariance = false;
    MafArch arch;
    FlowTrainConfig flow;
};

using ClassDensity = std::variant<GmmModel, MafModel>;

struct Prediction {
    std::optional<std::string> label;  // nullopt = Unclassified
    Vector log_posterior;
    Vector log_joint;
};

/// Bayes-rule generative classifier: one density model per class, shared
/// feature standardization, and argmax of log-likelihood + log-prior. All
/// per-class densities live in the shared standardized space, so the
/// standardization Jacobian cancels in every comparison.
struct GenerativeClassifier {
    ClassPrior prior;
    DensityKind kind = DensityKind::Gmm;
    std::vector<ClassDensity> densities;  // aligned with prior.labels
    Scaler scaler;
    // 0.1st percentile of per-class training log-likelihoods, minimized
    // over classes; predict() rejects below it when asked to.
    std::optional<double> reject_log_threshold;
    Index d = 0;
};

/// One named series of per-iteration values collected while fitting.
struct TraceSeries {
    std::string name;
    std::vector<double> values;
};

/// Per-class optimization traces: the EM mean log-likelihood per iteration
/// for GMM densities, train and validation NLL per epoch for MAF ones.
struct FitDiagnostics {
    std::vector<TraceSeries> traces;
};

GenerativeClassifier fit(const Matrix& data, const std::vector<std::string>& labels,
                         const DensitySpec& spec, FitDiagnostics* diagnostics = nullptr);

/// Per-class log-likelihoods of a raw point (standardized internally).
Vector class_log_likelihoods(const GenerativeClassifier& model, const Vector& x);
Matrix class_log_likelihoods_batch(const GenerativeClassifier& model, const Matrix& x);

/// log_joint_z = log_prior_z + log-likelihood_z(x).
Vector class_scores(const GenerativeClassifier& model, const Vector& x);

Prediction predict(const GenerativeClassifier& model, const Vector& x, bool use_threshold);
std::vector<Prediction> predict_batch(const GenerativeClassifier& model, const Matrix& x,
                                      bool use_threshold);

/// Class-z log-likelihood of x: lower = more anomalous for that class.
double outlier_score(const GenerativeClassifier& model, const Vector& x,
                     const std::string& class_label);

}  // namespace denscls
