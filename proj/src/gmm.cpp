#include "denscls/gmm.hpp"

#include <algorithm>
#include <cmath>

namespace denscls {

GaussianComponent GaussianComponent::make(Vector mean, Matrix covariance) {
    GaussianComponent c;
    c.mean = std::move(mean);
    c.covariance = std::move(covariance);
    if (c.covariance.rows() != c.mean.size() || c.covariance.cols() != c.mean.size())
        throw DimensionMismatch("GaussianComponent: covariance/mean mismatch");
    c.chol = cholesky_lower(c.covariance);
    c.log_det = log_det_from_cholesky(c.chol);
    return c;
}

double gaussian_logpdf(const Vector& x, const GaussianComponent& comp) {
    if (x.size() != comp.mean.size())
        throw DimensionMismatch("gaussian_logpdf: dimension mismatch");
    const Vector y = comp.chol.triangularView<Eigen::Lower>().solve(x - comp.mean);
    const double d = static_cast<double>(x.size());
    return -0.5 * (d * kLog2Pi + comp.log_det + y.squaredNorm());
}

Vector gaussian_logpdf_batch(const Matrix& data, const GaussianComponent& comp) {
    if (data.cols() != comp.mean.size())
        throw DimensionMismatch("gaussian_logpdf_batch: dimension mismatch");
    Matrix centered = data.rowwise() - comp.mean.transpose();
    Matrix y = comp.chol.triangularView<Eigen::Lower>().solve(centered.transpose());
    const double d = static_cast<double>(data.cols());
    return (-0.5 * (y.colwise().squaredNorm().array() + d * kLog2Pi + comp.log_det)).matrix();
}

double mixture_logpdf(const Vector& x, const GmmModel& model) {
    Vector terms(model.k());
    for (int j = 0; j < model.k(); ++j)
        terms[j] = std::log(model.weights[j]) + gaussian_logpdf(x, model.components[j]);
    return logsumexp(terms);
}

Vector mixture_logpdf_batch(const Matrix& data, const GmmModel& model) {
    Matrix terms(data.rows(), model.k());
    for (int j = 0; j < model.k(); ++j)
        terms.col(j) = gaussian_logpdf_batch(data, model.components[j]).array() +
                       std::log(model.weights[j]);
    return logsumexp_rows(terms);
}

Responsibilities e_step(const Matrix& data, const GmmModel& model) {
    assert(data.rows() >= 1);
    const Index n = data.rows();
    const int k = model.k();

    Matrix log_joint(n, k);
    for (int j = 0; j < k; ++j)
        log_joint.col(j) = gaussian_logpdf_batch(data, model.components[j]).array() +
                           std::log(model.weights[j]);

    Responsibilities r;
    r.point_log_density = logsumexp_rows(log_joint);
    if ((r.point_log_density.array() == -std::numeric_limits<double>::infinity()).any())
        throw AllZeroDensity("e_step: every component assigns zero density to some point");

    r.values = (log_joint.colwise() - r.point_log_density).array().exp();
    return r;
}

GmmModel m_step(const Matrix& data, const Matrix& resp, double reg_epsilon) {
    const Index n = data.rows();
    const Index d = data.cols();
    const Index k = resp.cols();
    if (resp.rows() != n) throw DimensionMismatch("m_step: responsibilities/data mismatch");

    const Vector nj = pairwise_colwise_sum(resp);
    // Eq. (7)'s denominator equals n because every responsibility row sums to 1.
    assert(std::abs(nj.sum() - static_cast<double>(n)) < 1e-6 * static_cast<double>(n) + 1e-9);

    GmmModel model;
    model.weights = nj / static_cast<double>(n);
    model.components.reserve(static_cast<std::size_t>(k));
    for (Index j = 0; j < k; ++j) {
        if (nj[j] < 1e-12)
            throw EmptyComponent(static_cast<int>(j), "m_step: component has no responsibility mass");
        Vector mean = (resp.col(j).transpose() * data).transpose() / nj[j];
        Matrix centered = data.rowwise() - mean.transpose();
        Matrix weighted = centered.array().colwise() * resp.col(j).array();
        Matrix cov = (weighted.transpose() * centered) / nj[j];
        cov = 0.5 * (cov + cov.transpose());  // restore exact symmetry
        cov.diagonal().array() += reg_epsilon;
        model.components.push_back(GaussianComponent::make(std::move(mean), std::move(cov)));
    }
    return model;
}

namespace {

Matrix overall_covariance(const Matrix& data, double reg_epsilon) {
    Vector mean = data.colwise().mean();
    Matrix centered = data.rowwise() - mean.transpose();
    Matrix cov = (centered.transpose() * centered) / static_cast<double>(data.rows());
    cov = 0.5 * (cov + cov.transpose());
    cov.diagonal().array() += std::max(reg_epsilon, 1e-12);
    return cov;
}

std::vector<Index> kmeanspp_rows(const Matrix& data, int k, Rng& rng) {
    const Index n = data.rows();
    std::vector<Index> chosen;
    chosen.push_back(rng.uniform_index(n));
    Vector dist2 = (data.rowwise() - data.row(chosen[0])).rowwise().squaredNorm();
    while (static_cast<int>(chosen.size()) < k) {
        const double total = dist2.sum();
        Index pick;
        if (total <= 0.0) {
            pick = rng.uniform_index(n);
        } else {
            double u = rng.uniform() * total;
            pick = n - 1;
            double acc = 0.0;
            for (Index i = 0; i < n; ++i) {
                acc += dist2[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        }
        chosen.push_back(pick);
        dist2 = dist2.cwiseMin(
            (data.rowwise() - data.row(pick)).rowwise().squaredNorm());
    }
    return chosen;
}

GmmModel initial_model(const Matrix& data, const EmConfig& config, Rng& rng) {
    const Index n = data.rows();
    std::vector<Index> rows;
    if (config.init == EmConfig::Init::KMeansPlusPlus) {
        rows = kmeanspp_rows(data, config.k, rng);
    } else {
        std::vector<Index> all(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
        rng.shuffle(all);
        rows.assign(all.begin(), all.begin() + config.k);
    }

    const Matrix cov = overall_covariance(data, config.reg_epsilon);
    GmmModel model;
    model.weights = Vector::Constant(config.k, 1.0 / config.k);
    for (Index r : rows)
        model.components.push_back(GaussianComponent::make(data.row(r).transpose(), cov));
    return model;
}

}  // namespace

EmResult em_fit(const Matrix& data, const EmConfig& config) {
    const Index n = data.rows();
    if (n < config.k)
        throw InsufficientData("em_fit: fewer points than components");
    assert(config.k >= 1 && config.tol > 0 && config.reg_epsilon >= 0);

    Rng rng(config.seed);
    GmmModel model = initial_model(data, config, rng);

    EmResult result;
    std::vector<bool> reseeded(static_cast<std::size_t>(config.k), false);
    double prev_ll = -std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < config.max_iters; ++iter) {
        Responsibilities resp = e_step(data, model);
        const double mean_ll =
            pairwise_sum(resp.point_log_density) / static_cast<double>(n);
        result.loglik_trace.push_back(mean_ll);
        if (std::abs(mean_ll - prev_ll) < config.tol) break;
        prev_ll = mean_ll;

        try {
            model = m_step(data, resp.values, config.reg_epsilon);
        } catch (const EmptyComponent& e) {
            const auto j = static_cast<std::size_t>(e.component);
            if (reseeded[j]) throw;
            reseeded[j] = true;
            // Re-seed the collapsed component at the point the current
            // mixture explains worst, then resume iterating.
            Index worst;
            resp.point_log_density.minCoeff(&worst);
            model.components[j] = GaussianComponent::make(
                data.row(worst).transpose(), overall_covariance(data, config.reg_epsilon));
            const double rest = 1.0 - model.weights[static_cast<Index>(j)];
            if (rest > 1e-300)
                model.weights *= (1.0 - 1.0 / config.k) / rest;
            model.weights[static_cast<Index>(j)] = 1.0 / config.k;
            model.weights /= model.weights.sum();
            prev_ll = -std::numeric_limits<double>::infinity();
        }
    }

    result.model = std::move(model);
    result.model.reg_epsilon = config.reg_epsilon;
    result.model.seed = config.seed;
    return result;
}

}  // namespace denscls
