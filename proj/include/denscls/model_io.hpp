#pragma once

#include "denscls/classifier.hpp"

#include <iosfwd>
#include <string>

namespace denscls {

class MalformedModel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Versioned whitespace-delimited text records. Every real number is
/// written with 17 significant digits, so a load reproduces the saved
/// model bit for bit; saving the same model twice yields identical bytes.
///
/// GMM record: k, weights, per-component mean and row-major covariance,
/// reg_epsilon, seed. MAF record: architecture, per-layer ordering,
/// weights and biases, clamp, scaler. Classifier record: an envelope with
/// the prior and one kind-tagged density record per class.
void save_gmm(std::ostream& out, const GmmModel& model);
GmmModel load_gmm(std::istream& in);

void save_maf(std::ostream& out, const MafModel& model);
MafModel load_maf(std::istream& in);

void save_classifier(std::ostream& out, const GenerativeClassifier& model);

/// Reads a classifier record. A leading "run-header ... end run-header"
/// block (free-form provenance lines, as stamped by the training tool) is
/// skipped if present.
GenerativeClassifier load_classifier(std::istream& in);

void save_classifier_file(const std::string& path, const GenerativeClassifier& model);
GenerativeClassifier load_classifier_file(const std::string& path);

}  // namespace denscls
