#include "denscls/gmm.hpp"

#include "doctest.h"

#include <cmath>

using namespace denscls;

namespace {

GaussianComponent comp1d(double mean, double var) {
    Vector m(1);
    m << mean;
    Matrix c(1, 1);
    c << var;
    return GaussianComponent::make(m, c);
}

// Plain-arithmetic density of a 1-D Gaussian, kept deliberately naive.
double naive_normal_pdf(double x, double mean, double var) {
    return std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
}

Matrix randn_matrix(Rng& rng, Index n, Index d) {
    Matrix m(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) m(i, j) = rng.normal();
    return m;
}

}  // namespace

TEST_CASE("gaussian_logpdf: standard normal at its mean, d=1") {
    const GaussianComponent c = comp1d(0.0, 1.0);
    Vector x(1);
    x << 0.0;
    CHECK(gaussian_logpdf(x, c) == doctest::Approx(-0.9189385).epsilon(1e-6));
}

TEST_CASE("gaussian_logpdf: zero quadratic form, d=2") {
    Vector mu(2);
    mu << 3.5, -1.25;
    const GaussianComponent c = GaussianComponent::make(mu, Matrix::Identity(2, 2));
    CHECK(gaussian_logpdf(mu, c) == doctest::Approx(-std::log(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("gaussian_logpdf: diagonal covariance matches the direct formula") {
    Vector mu = Vector::Zero(2);
    Matrix cov(2, 2);
    cov << 4, 0, 0, 1;
    const GaussianComponent c = GaussianComponent::make(mu, cov);
    Vector x(2);
    x << 1.0, 0.0;
    // Direct scalar evaluation: -(1/2)[d ln 2pi + ln det + quad].
    const double expected = -0.5 * (2.0 * std::log(2.0 * M_PI) + std::log(4.0) + 0.25);
    CHECK(gaussian_logpdf(x, c) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gaussian_logpdf: dimension mismatch is rejected") {
    const GaussianComponent c = comp1d(0.0, 1.0);
    CHECK_THROWS_AS(gaussian_logpdf(Vector::Zero(2), c), DimensionMismatch);
}

TEST_CASE("gaussian_logpdf_batch agrees with per-point evaluation") {
    Rng rng(41);
    const Matrix data = randn_matrix(rng, 13, 3);
    Vector mu(3);
    mu << 0.2, -0.4, 1.0;
    Matrix m = randn_matrix(rng, 3, 3);
    const GaussianComponent c =
        GaussianComponent::make(mu, m.transpose() * m + 0.5 * Matrix::Identity(3, 3));
    const Vector batch = gaussian_logpdf_batch(data, c);
    for (Index i = 0; i < data.rows(); ++i)
        CHECK(batch[i] ==
              doctest::Approx(gaussian_logpdf(data.row(i).transpose(), c)).epsilon(1e-12));
}

TEST_CASE("mixture_logpdf: k=1 equals the component log-density exactly") {
    GmmModel model;
    model.components.push_back(comp1d(0.7, 2.0));
    model.weights = Vector::Ones(1);
    Vector x(1);
    x << -1.3;
    CHECK(mixture_logpdf(x, model) == gaussian_logpdf(x, model.components[0]));
}

TEST_CASE("mixture_logpdf: duplicated component collapses to one") {
    GmmModel model;
    model.components.push_back(comp1d(0.7, 2.0));
    model.components.push_back(comp1d(0.7, 2.0));
    model.weights = Vector::Constant(2, 0.5);
    Vector x(1);
    x << 0.1;
    CHECK(mixture_logpdf(x, model) ==
          doctest::Approx(gaussian_logpdf(x, model.components[0])).epsilon(1e-14));
}

TEST_CASE("mixture_logpdf: two distinct 1-D components match the naive sum") {
    GmmModel model;
    model.components.push_back(comp1d(-1.0, 0.5));
    model.components.push_back(comp1d(2.0, 3.0));
    model.weights = Vector(2);
    model.weights << 0.3, 0.7;
    for (double xv : {-2.0, 0.0, 0.5, 2.5}) {
        Vector x(1);
        x << xv;
        const double direct = 0.3 * naive_normal_pdf(xv, -1.0, 0.5) +
                              0.7 * naive_normal_pdf(xv, 2.0, 3.0);
        CHECK(mixture_logpdf(x, model) == doctest::Approx(std::log(direct)).epsilon(1e-12));
    }
}

TEST_CASE("mixture_logpdf is exactly invariant to component permutation") {
    GmmModel model;
    model.components.push_back(comp1d(-1.0, 0.5));
    model.components.push_back(comp1d(2.0, 3.0));
    model.weights = Vector(2);
    model.weights << 0.3, 0.7;
    GmmModel swapped;
    swapped.components = {model.components[1], model.components[0]};
    swapped.weights = Vector(2);
    swapped.weights << 0.7, 0.3;
    Vector x(1);
    x << 0.42;
    CHECK(mixture_logpdf(x, model) == mixture_logpdf(x, swapped));
}

TEST_CASE("e_step: single component gives unit responsibilities") {
    GmmModel model;
    model.components.push_back(comp1d(0.0, 1.0));
    model.weights = Vector::Ones(1);
    Matrix data(4, 1);
    data << -1, 0, 2, 30;
    const Responsibilities r = e_step(data, model);
    CHECK((r.values.array() == 1.0).all());
}

TEST_CASE("e_step: equidistant point splits 50/50") {
    GmmModel model;
    model.components.push_back(comp1d(-1.0, 1.0));
    model.components.push_back(comp1d(1.0, 1.0));
    model.weights = Vector::Constant(2, 0.5);
    Matrix data(1, 1);
    data << 0.0;
    const Responsibilities r = e_step(data, model);
    CHECK(r.values(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.values(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("e_step: three points against a fixed two-component model") {
    GmmModel model;
    model.components.push_back(comp1d(0.0, 1.0));
    model.components.push_back(comp1d(3.0, 4.0));
    model.weights = Vector(2);
    model.weights << 0.6, 0.4;
    Matrix data(3, 1);
    data << -0.5, 1.0, 4.0;
    const Responsibilities r = e_step(data, model);
    for (Index i = 0; i < 3; ++i) {
        const double p0 = 0.6 * naive_normal_pdf(data(i, 0), 0.0, 1.0);
        const double p1 = 0.4 * naive_normal_pdf(data(i, 0), 3.0, 4.0);
        CHECK(r.values(i, 0) == doctest::Approx(p0 / (p0 + p1)).epsilon(1e-12));
        CHECK(r.values(i, 1) == doctest::Approx(p1 / (p0 + p1)).epsilon(1e-12));
        CHECK(r.point_log_density[i] == doctest::Approx(std::log(p0 + p1)).epsilon(1e-12));
    }
}

TEST_CASE("e_step: rows sum to one even 50 sigma away from every mean") {
    GmmModel model;
    model.components.push_back(comp1d(-1.0, 1.0));
    model.components.push_back(comp1d(1.0, 1.0));
    model.weights = Vector::Constant(2, 0.5);
    Matrix data(1, 1);
    data << 51.0;  // 50 sigma from the nearest mean
    const Responsibilities r = e_step(data, model);
    CHECK(r.values.row(0).sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.values.minCoeff() >= 0.0);
    CHECK(r.values.maxCoeff() <= 1.0);
}

TEST_CASE("e_step: all-zero density is reported") {
    GmmModel model;
    model.components.push_back(comp1d(0.0, 1.0));
    model.weights = Vector::Ones(1);
    Matrix data(1, 1);
    data << 1e200;  // quadratic form overflows to infinity
    CHECK_THROWS_AS(e_step(data, model), AllZeroDensity);
}

TEST_CASE("m_step: unit responsibilities recover sample moments") {
    Rng rng(43);
    const Matrix data = randn_matrix(rng, 25, 2);
    const double eps = 1e-6;
    const GmmModel model = m_step(data, Matrix::Ones(25, 1), eps);
    const Vector mean = data.colwise().mean().transpose();
    Matrix centered = data.rowwise() - mean.transpose();
    Matrix cov = centered.transpose() * centered / 25.0 + eps * Matrix::Identity(2, 2);
    CHECK(model.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((model.components[0].mean - mean).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((model.components[0].covariance - cov).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("m_step: hard assignments center components on their points") {
    Matrix data(2, 1);
    data << -5.0, 5.0;
    Matrix resp(2, 2);
    resp << 1, 0, 0, 1;
    const GmmModel model = m_step(data, resp, 1e-6);
    CHECK(model.components[0].mean[0] == doctest::Approx(-5.0));
    CHECK(model.components[1].mean[0] == doctest::Approx(5.0));
    CHECK(model.weights[0] == doctest::Approx(0.5));
}

TEST_CASE("m_step: random responsibilities match weighted moments") {
    Rng rng(47);
    const Index n = 20, d = 2;
    const int k = 3;
    const Matrix data = randn_matrix(rng, n, d);
    Matrix resp(n, k);
    for (Index i = 0; i < n; ++i) {
        Vector row(k);
        for (int j = 0; j < k; ++j) row[j] = rng.uniform() + 0.05;
        resp.row(i) = (row / row.sum()).transpose();
    }
    const double eps = 1e-6;
    const GmmModel model = m_step(data, resp, eps);
    for (int j = 0; j < k; ++j) {
        double nj = 0.0;
        Vector mean = Vector::Zero(d);
        for (Index i = 0; i < n; ++i) {
            nj += resp(i, j);
            mean += resp(i, j) * data.row(i).transpose();
        }
        mean /= nj;
        Matrix cov = Matrix::Zero(d, d);
        for (Index i = 0; i < n; ++i) {
            const Vector c = data.row(i).transpose() - mean;
            cov += resp(i, j) * (c * c.transpose());
        }
        cov = cov / nj + eps * Matrix::Identity(d, d);
        CHECK(model.weights[j] == doctest::Approx(nj / static_cast<double>(n)).epsilon(1e-10));
        CHECK((model.components[j].mean - mean).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((model.components[j].covariance - cov).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("m_step: empty component is reported with its index") {
    Matrix data(2, 1);
    data << 0.0, 1.0;
    Matrix resp(2, 2);
    resp << 1, 0, 1, 0;  // second column collapses
    try {
        m_step(data, resp, 1e-6);
        FAIL("expected EmptyComponent");
    } catch (const EmptyComponent& e) {
        CHECK(e.component == 1);
    }
}

TEST_CASE("em_fit: repeated single point collapses to that point") {
    Matrix data(5, 2);
    for (Index i = 0; i < 5; ++i) data.row(i) << 2.0, -3.0;
    EmConfig cfg;
    cfg.k = 1;
    cfg.reg_epsilon = 1e-6;
    const EmResult res = em_fit(data, cfg);
    CHECK(res.model.components[0].mean[0] == doctest::Approx(2.0));
    CHECK(res.model.components[0].mean[1] == doctest::Approx(-3.0));
    CHECK((res.model.components[0].covariance - 1e-6 * Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
}

TEST_CASE("em_fit: two well-separated clusters are recovered") {
    Rng rng(53);
    Matrix data(200, 1);
    for (Index i = 0; i < 100; ++i) data(i, 0) = -10.0 + rng.normal();
    for (Index i = 100; i < 200; ++i) data(i, 0) = 10.0 + rng.normal();
    EmConfig cfg;
    cfg.k = 2;
    cfg.seed = 5;
    const EmResult res = em_fit(data, cfg);
    double lo = res.model.components[0].mean[0];
    double hi = res.model.components[1].mean[0];
    if (lo > hi) std::swap(lo, hi);
    // Compare against the actual cluster centroids, not the noiseless centers.
    const double c0 = data.topRows(100).mean();
    const double c1 = data.bottomRows(100).mean();
    CHECK(std::abs(lo - c0) <= 0.5);
    CHECK(std::abs(hi - c1) <= 0.5);
    CHECK(std::abs(res.model.weights[0] - 0.5) <= 0.1);
    CHECK(std::abs(res.model.weights[1] - 0.5) <= 0.1);
}

TEST_CASE("em_fit: k=1 equals the closed-form Gaussian fit") {
    Rng rng(59);
    const Matrix data = randn_matrix(rng, 40, 3);
    EmConfig cfg;
    cfg.k = 1;
    const EmResult res = em_fit(data, cfg);
    const Vector mean = data.colwise().mean().transpose();
    Matrix centered = data.rowwise() - mean.transpose();
    Matrix cov = centered.transpose() * centered / 40.0 +
                 cfg.reg_epsilon * Matrix::Identity(3, 3);
    CHECK((res.model.components[0].mean - mean).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((res.model.components[0].covariance - cov).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("em_fit: log-likelihood trace never decreases materially") {
    Rng rng(61);
    Matrix data(150, 2);
    for (Index i = 0; i < 150; ++i) {
        const double c = (i % 3 == 0) ? -4.0 : (i % 3 == 1 ? 0.0 : 4.0);
        data(i, 0) = c + 0.7 * rng.normal();
        data(i, 1) = 0.5 * c + rng.normal();
    }
    EmConfig cfg;
    cfg.k = 3;
    cfg.seed = 2;
    const EmResult res = em_fit(data, cfg);
    REQUIRE(res.loglik_trace.size() >= 2);
    for (std::size_t t = 1; t < res.loglik_trace.size(); ++t)
        CHECK(res.loglik_trace[t] >= res.loglik_trace[t - 1] - 1e-8);
}

TEST_CASE("em_fit: converged model is a fixed point of e/m steps") {
    Rng rng(67);
    Matrix data(120, 1);
    for (Index i = 0; i < 120; ++i)
        data(i, 0) = (i % 2 == 0 ? -2.0 : 2.0) + 0.8 * rng.normal();
    EmConfig cfg;
    cfg.k = 2;
    cfg.tol = 1e-10;
    cfg.seed = 3;
    const EmResult res = em_fit(data, cfg);
    const Responsibilities r = e_step(data, res.model);
    const GmmModel next = m_step(data, r.values, cfg.reg_epsilon);
    for (int j = 0; j < 2; ++j) {
        CHECK((next.components[j].mean - res.model.components[j].mean).cwiseAbs().maxCoeff() <=
              1e-4);
        CHECK(std::abs(next.weights[j] - res.model.weights[j]) <= 1e-4);
    }
}

TEST_CASE("em_fit: fewer points than components is rejected") {
    Matrix data(2, 1);
    data << 0.0, 1.0;
    EmConfig cfg;
    cfg.k = 3;
    CHECK_THROWS_AS(em_fit(data, cfg), InsufficientData);
}

TEST_CASE("em_fit honors the RandomPoints initializer") {
    Rng rng(71);
    Matrix data(60, 1);
    for (Index i = 0; i < 60; ++i) data(i, 0) = (i % 2 == 0 ? -3.0 : 3.0) + 0.5 * rng.normal();
    EmConfig cfg;
    cfg.k = 2;
    cfg.init = EmConfig::Init::RandomPoints;
    cfg.seed = 8;
    const EmResult res = em_fit(data, cfg);
    double lo = res.model.components[0].mean[0];
    double hi = res.model.components[1].mean[0];
    if (lo > hi) std::swap(lo, hi);
    CHECK(std::abs(lo + 3.0) <= 1.0);
    CHECK(std::abs(hi - 3.0) <= 1.0);
}
