#pragma once

#include "denscls/dataset.hpp"

namespace denscls {

/// Hyperparameter candidates tried on each fold's inner validation split.
/// Empty grids skip the search and use the base spec as-is.
struct TuningGrid {
    std::vector<int> gmm_ks;        // candidate component counts
    std::vector<MafArch> maf_archs; // candidate flow architectures
};

struct CvConfig {
    int folds = 5;
    // Share of each fold's non-test rows held out for hyperparameter
    // selection; the candidate models train on the remaining share.
    double inner_validation_fraction = 0.2;
    std::uint64_t seed = 0;
    bool use_threshold = false;  // benchmark tables use the pure argmax rule
    std::string positive_class = "1";
    DensitySpec spec;
    TuningGrid grid;
};

struct FoldResult {
    int fold = 0;
    MetricsReport metrics;
    std::string chosen;          // winning hyperparameter, e.g. "k=3"
    double inner_accuracy = 0.0; // the winner's inner-validation accuracy
    long train_rows = 0, validation_rows = 0, test_rows = 0;
    FitDiagnostics diagnostics;  // per-class optimization traces
};

struct CvResult {
    CvConfig config;
    FoldPlan plan;
    std::vector<FoldResult> folds;  // the folds that completed, in order
    double mean_accuracy = 0.0;     // arithmetic means over completed folds
    double mean_f1 = 0.0;
    // Empty on success. A failed fold stops the run and leaves its
    // description here; earlier folds' results stay intact.
    std::string failure;
};

/// Renders one grid candidate, e.g. "k=3" or "layers=20 hidden=8x30".
std::string describe_candidate(const DensitySpec& spec);

/// Stratified k-fold evaluation. Each fold: the non-test rows are split
/// stratified into train and inner-validation shares; every grid candidate
/// trains on the train share; the candidate with the best inner-validation
/// accuracy (ties to the earlier grid entry) is evaluated on the test
/// fold. Per-fold seeds are spawned deterministically from config.seed.
CvResult cross_validate(const Dataset& ds, const CvConfig& config);

}  // namespace denscls
