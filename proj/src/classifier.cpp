#include "denscls/classifier.hpp"

#include <algorithm>
#include <set>

namespace denscls {

namespace {

Vector density_loglik_batch(const ClassDensity& density, const Matrix& z) {
    if (std::holds_alternative<GmmModel>(density))
        return mixture_logpdf_batch(z, std::get<GmmModel>(density));
    return maf_log_density_batch(std::get<MafModel>(density), z);
}

// Weighted average of the per-class covariances (class frequency weights),
// shared across all k=1 components: the linear-discriminant assumption.
void pool_covariances(GenerativeClassifier& model) {
    const Index d = model.d;
    Matrix pooled = Matrix::Zero(d, d);
    for (std::size_t z = 0; z < model.densities.size(); ++z) {
        const auto& gmm = std::get<GmmModel>(model.densities[z]);
        pooled += std::exp(model.prior.log_priors[static_cast<Index>(z)]) *
                  gmm.components[0].covariance;
    }
    for (auto& density : model.densities) {
        auto& gmm = std::get<GmmModel>(density);
        gmm.components[0] = GaussianComponent::make(gmm.components[0].mean, pooled);
    }
}

}  // namespace

ClassPrior estimate_priors(const std::vector<std::string>& labels) {
    if (labels.empty()) throw EmptyClass("estimate_priors: no labels");
    const std::set<std::string> distinct(labels.begin(), labels.end());
    ClassPrior prior;
    prior.labels.assign(distinct.begin(), distinct.end());
    prior.log_priors.resize(static_cast<Index>(prior.labels.size()));
    const double n = static_cast<double>(labels.size());
    for (std::size_t z = 0; z < prior.labels.size(); ++z) {
        const auto count = std::count(labels.begin(), labels.end(), prior.labels[z]);
        prior.log_priors[static_cast<Index>(z)] = std::log(static_cast<double>(count) / n);
    }
    return prior;
}

GenerativeClassifier fit(const Matrix& data, const std::vector<std::string>& labels,
                         const DensitySpec& spec, FitDiagnostics* diagnostics) {
    if (static_cast<std::size_t>(data.rows()) != labels.size())
        throw DimensionMismatch("fit: one label per data row required");
    if (spec.pooled_covariance && (spec.kind != DensityKind::Gmm || spec.gmm.k != 1))
        throw std::invalid_argument("fit: pooled covariance requires GMM with k=1");

    GenerativeClassifier model;
    model.prior = estimate_priors(labels);
    model.kind = spec.kind;
    model.d = data.cols();
    model.scaler = Scaler::fit(data);

    const Rng seed_source(spec.kind == DensityKind::Gmm ? spec.gmm.seed : spec.flow.seed);
    std::vector<Matrix> class_rows;  // raw rows, per class in label order

    for (int c = 0; c < model.prior.num_classes(); ++c) {
        const std::string& label = model.prior.labels[static_cast<std::size_t>(c)];
        std::vector<Index> rows;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) rows.push_back(static_cast<Index>(i));
        Matrix raw(static_cast<Index>(rows.size()), data.cols());
        for (std::size_t r = 0; r < rows.size(); ++r)
            raw.row(static_cast<Index>(r)) = data.row(rows[r]);
        class_rows.push_back(std::move(raw));

        try {
            if (spec.kind == DensityKind::Gmm) {
                if (class_rows.back().rows() < std::max<Index>(spec.gmm.k, 2))
                    throw InsufficientData("need at least max(k,2) points per class");
                EmConfig cfg = spec.gmm;
                cfg.seed = seed_source.spawn(static_cast<std::uint64_t>(c)).seed();
                EmResult result = em_fit(model.scaler.apply(class_rows.back()), cfg);
                if (diagnostics)
                    diagnostics->traces.push_back(
                        {label + "/em_loglik", std::move(result.loglik_trace)});
                model.densities.emplace_back(std::move(result.model));
            } else {
                if (class_rows.back().rows() < 20)
                    throw InsufficientData("need at least 20 points per class");
                FlowTrainConfig cfg = spec.flow;
                cfg.seed = seed_source.spawn(static_cast<std::uint64_t>(c)).seed();
                MafTrainResult result =
                    maf_train(class_rows.back(), spec.arch, cfg, model.scaler);
                if (diagnostics) {
                    diagnostics->traces.push_back({label + "/train_nll", std::move(result.train_nll)});
                    diagnostics->traces.push_back({label + "/val_nll", std::move(result.val_nll)});
                }
                model.densities.emplace_back(std::move(result.model));
            }
        } catch (const std::exception& e) {
            throw DensityFitError(label, e.what());
        }
    }

    if (spec.pooled_covariance) pool_covariances(model);

    // The rejection cutoff reflects the final densities, so it is computed
    // only after any covariance pooling.
    Vector threshold_per_class(model.prior.num_classes());
    for (int c = 0; c < model.prior.num_classes(); ++c) {
        const Vector own_ll =
            density_loglik_batch(model.densities[static_cast<std::size_t>(c)],
                                 model.scaler.apply(class_rows[static_cast<std::size_t>(c)]));
        threshold_per_class[c] = percentile(own_ll, 0.1);
    }
    model.reject_log_threshold = threshold_per_class.minCoeff();
    return model;
}

Matrix class_log_likelihoods_batch(const GenerativeClassifier& model, const Matrix& x) {
    if (x.cols() != model.d)
        throw DimensionMismatch("class_log_likelihoods: dimension mismatch");
    const Matrix z = model.scaler.apply(x);
    Matrix ll(x.rows(), model.prior.num_classes());
    for (int c = 0; c < model.prior.num_classes(); ++c)
        ll.col(c) = density_loglik_batch(model.densities[static_cast<std::size_t>(c)], z);
    return ll;
}

Vector class_log_likelihoods(const GenerativeClassifier& model, const Vector& x) {
    return class_log_likelihoods_batch(model, x.transpose()).row(0).transpose();
}

Vector class_scores(const GenerativeClassifier& model, const Vector& x) {
    return class_log_likelihoods(model, x) + model.prior.log_priors;
}

namespace {

Prediction make_prediction(const GenerativeClassifier& model, const Vector& loglik,
                           bool use_threshold) {
    Prediction pred;
    pred.log_joint = loglik + model.prior.log_priors;
    pred.log_posterior = pred.log_joint.array() - logsumexp(pred.log_joint);
    Index best = 0;
    for (Index c = 1; c < pred.log_joint.size(); ++c)
        if (pred.log_joint[c] > pred.log_joint[best]) best = c;  // ties keep the lower index
    const bool reject = use_threshold && model.reject_log_threshold &&
                        loglik.maxCoeff() < *model.reject_log_threshold;
    if (!reject) pred.label = model.prior.labels[static_cast<std::size_t>(best)];
    return pred;
}

}  // namespace

Prediction predict(const GenerativeClassifier& model, const Vector& x, bool use_threshold) {
    return make_prediction(model, class_log_likelihoods(model, x), use_threshold);
}

std::vector<Prediction> predict_batch(const GenerativeClassifier& model, const Matrix& x,
                                      bool use_threshold) {
    const Matrix ll = class_log_likelihoods_batch(model, x);
    std::vector<Prediction> preds;
    preds.reserve(static_cast<std::size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i)
        preds.push_back(make_prediction(model, ll.row(i).transpose(), use_threshold));
    return preds;
}

double outlier_score(const GenerativeClassifier& model, const Vector& x,
                     const std::string& class_label) {
    const Index c = model.prior.index_of(class_label);
    if (c < 0) throw UnknownClass("outlier_score: unknown class '" + class_label + "'");
    return class_log_likelihoods(model, x)[c];
}

}  // namespace denscls
