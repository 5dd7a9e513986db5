#pragma once

#include "denscls/linalg.hpp"
#include "denscls/random.hpp"

#include <cstdint>
#include <vector>

namespace denscls {

class EmptyComponent : public std::runtime_error {
public:
    EmptyComponent(int component, const std::string& msg)
        : std::runtime_error(msg), component(component) {}
    int component;
};

class InsufficientData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AllZeroDensity : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One Gaussian of the mixture. The Cholesky factor and log-determinant of
/// the covariance are cached at construction.
struct GaussianComponent {
    Vector mean;
    Matrix covariance;
    Matrix chol;     // lower factor of covariance
    double log_det;  // 2 * sum(log(diag(chol)))

    static GaussianComponent make(Vector mean, Matrix covariance);
};

struct GmmModel {
    std::vector<GaussianComponent> components;
    Vector weights;  // nonnegative, sums to 1
    // Fit provenance, carried into the serialized record.
    double reg_epsilon = 0.0;
    std::uint64_t seed = 0;

    Index dim() const { return components.empty() ? 0 : components.front().mean.size(); }
    int k() const { return static_cast<int>(components.size()); }
};

/// Per-point, per-component posterior assignment probabilities. Computed in
/// log-space and exponentiated; every row sums to 1. point_log_density is
/// the mixture log-density of each point under the model that produced the
/// responsibilities (the E-step byproduct driving the convergence check).
struct Responsibilities {
    Matrix values;             // n x k
    Vector point_log_density;  // n
};

struct EmConfig {
    enum class Init { KMeansPlusPlus, RandomPoints };

    int k = 1;
    int max_iters = 500;
    double tol = 1e-6;           // mean log-likelihood change per iteration
    double reg_epsilon = 1e-6;   // ridge added to every covariance
    Init init = Init::KMeansPlusPlus;
    std::uint64_t seed = 0;
};

struct EmResult {
    GmmModel model;
    std::vector<double> loglik_trace;  // mean log-likelihood per iteration
};

/// Gaussian log-density log N(x; mean, covariance); the quadratic form is
/// evaluated through a triangular solve against the cached factor.
double gaussian_logpdf(const Vector& x, const GaussianComponent& comp);

/// Column of per-point log-densities for one component over data rows.
Vector gaussian_logpdf_batch(const Matrix& data, const GaussianComponent& comp);

/// log of the weighted mixture density, accumulated with logsumexp.
double mixture_logpdf(const Vector& x, const GmmModel& model);

Vector mixture_logpdf_batch(const Matrix& data, const GmmModel& model);

Responsibilities e_step(const Matrix& data, const GmmModel& model);

GmmModel m_step(const Matrix& data, const Matrix& resp, double reg_epsilon);

EmResult em_fit(const Matrix& data, const EmConfig& config);

}  // namespace denscls
