#include "denscls/cv.hpp"

#include <algorithm>
#include <map>

namespace denscls {

std::string describe_candidate(const DensitySpec& spec) {
    if (spec.kind == DensityKind::Gmm)
        return "k=" + std::to_string(spec.gmm.k) +
               (spec.pooled_covariance ? " pooled_covariance" : "");
    const auto& sizes = spec.arch.hidden_sizes;
    std::string hidden;
    const bool uniform =
        !sizes.empty() && std::all_of(sizes.begin(), sizes.end(),
                                      [&](Index h) { return h == sizes.front(); });
    if (uniform) {
        hidden = std::to_string(sizes.size()) + "x" + std::to_string(sizes.front());
    } else {
        for (std::size_t i = 0; i < sizes.size(); ++i)
            hidden += (i ? "," : "") + std::to_string(sizes[i]);
    }
    return "layers=" + std::to_string(spec.arch.num_layers) + " hidden=" + hidden;
}

namespace {

struct Slice {
    Matrix features;
    std::vector<std::string> labels;
};

Slice gather(const Dataset& ds, const std::vector<Index>& rows) {
    Slice slice;
    slice.features.resize(static_cast<Index>(rows.size()), ds.dim());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        slice.features.row(static_cast<Index>(r)) = ds.features.row(rows[r]);
        slice.labels.push_back(ds.labels[static_cast<std::size_t>(rows[r])]);
    }
    return slice;
}

// Stratified split of the given rows into a train and a validation share.
// Every class with at least two rows contributes at least one row to each
// side; single-row classes go to the train share.
std::pair<std::vector<Index>, std::vector<Index>> inner_split(
    const Dataset& ds, const std::vector<Index>& rows, double validation_fraction,
    std::uint64_t seed) {
    std::map<std::string, std::vector<Index>> by_class;
    for (const Index row : rows) by_class[ds.labels[static_cast<std::size_t>(row)]].push_back(row);

    Rng rng(seed);
    std::vector<Index> train, validation;
    for (auto& [label, members] : by_class) {
        rng.shuffle(members);
        const auto n = static_cast<long>(members.size());
        long val_n = std::llround(validation_fraction * static_cast<double>(n));
        val_n = n >= 2 ? std::clamp(val_n, 1L, n - 1) : 0;
        for (long i = 0; i < n; ++i)
            (i < val_n ? validation : train).push_back(members[static_cast<std::size_t>(i)]);
    }
    return {std::move(train), std::move(validation)};
}

double accuracy_of(const GenerativeClassifier& model, const Slice& slice) {
    if (slice.labels.empty()) return 0.0;
    const auto predictions = predict_batch(model, slice.features, false);
    long correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions[i].label && *predictions[i].label == slice.labels[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(slice.labels.size());
}

}  // namespace

CvResult cross_validate(const Dataset& ds, const CvConfig& config) {
    if (config.inner_validation_fraction <= 0.0 || config.inner_validation_fraction >= 1.0)
        throw std::invalid_argument("cross_validate: inner fraction must be in (0,1)");
    if (std::find(ds.labels.begin(), ds.labels.end(), config.positive_class) == ds.labels.end())
        throw UnknownClass("cross_validate: positive class '" + config.positive_class +
                           "' does not occur in the data");

    std::vector<DensitySpec> candidates;
    if (config.spec.kind == DensityKind::Gmm && !config.grid.gmm_ks.empty()) {
        for (const int k : config.grid.gmm_ks) {
            DensitySpec candidate = config.spec;
            candidate.gmm.k = k;
            candidates.push_back(candidate);
        }
    } else if (config.spec.kind == DensityKind::Maf && !config.grid.maf_archs.empty()) {
        for (const MafArch& arch : config.grid.maf_archs) {
            DensitySpec candidate = config.spec;
            candidate.arch = arch;
            candidates.push_back(candidate);
        }
    } else {
        candidates.push_back(config.spec);
    }

    CvResult result;
    result.config = config;
    result.plan = stratified_kfold(ds, config.folds, config.seed);
    const Rng master(config.seed);

    for (int f = 0; f < config.folds; ++f) {
      try {
        std::vector<Index> outer_train, test;
        for (Index i = 0; i < ds.n(); ++i)
            (result.plan.assignments[static_cast<std::size_t>(i)] == f ? test : outer_train)
                .push_back(i);

        const Rng fold_stream = master.spawn(static_cast<std::uint64_t>(f));
        const auto [train_rows, val_rows] = inner_split(
            ds, outer_train, config.inner_validation_fraction, fold_stream.spawn(0).seed());
        const Slice train = gather(ds, train_rows);
        const Slice validation = gather(ds, val_rows);
        const Slice held_out = gather(ds, test);

        // Train every candidate on the train share and keep the one that
        // classifies the inner validation share best.
        GenerativeClassifier best_model;
        FitDiagnostics best_diagnostics;
        double best_accuracy = -1.0;
        std::size_t best_index = 0;
        for (std::size_t candidate = 0; candidate < candidates.size(); ++candidate) {
            DensitySpec spec = candidates[candidate];
            const std::uint64_t fit_seed = fold_stream.spawn(1 + candidate).seed();
            spec.gmm.seed = fit_seed;
            spec.flow.seed = fit_seed;
            FitDiagnostics diagnostics;
            GenerativeClassifier model = fit(train.features, train.labels, spec, &diagnostics);
            const double accuracy = accuracy_of(model, validation);
            if (accuracy > best_accuracy) {
                best_accuracy = accuracy;
                best_index = candidate;
                best_model = std::move(model);
                best_diagnostics = std::move(diagnostics);
            }
        }

        FoldResult fold;
        fold.fold = f;
        fold.chosen = describe_candidate(candidates[best_index]);
        fold.inner_accuracy = best_accuracy;
        fold.train_rows = static_cast<long>(train_rows.size());
        fold.validation_rows = static_cast<long>(val_rows.size());
        fold.test_rows = static_cast<long>(test.size());
        fold.diagnostics = std::move(best_diagnostics);
        fold.metrics = compute_metrics(
            predict_batch(best_model, held_out.features, config.use_threshold),
            held_out.labels, config.positive_class);
        result.folds.push_back(std::move(fold));
      } catch (const std::exception& error) {
        // Keep the folds that finished; the caller surfaces the marker.
        result.failure = "fold " + std::to_string(f) + ": " + error.what();
        break;
      }
    }

    for (const FoldResult& fold : result.folds) {
        result.mean_accuracy += fold.metrics.accuracy;
        result.mean_f1 += fold.metrics.f1;
    }
    const auto completed = static_cast<double>(result.folds.size());
    result.mean_accuracy = completed > 0 ? result.mean_accuracy / completed : 0.0;
    result.mean_f1 = completed > 0 ? result.mean_f1 / completed : 0.0;
    return result;
}

}  // namespace denscls
