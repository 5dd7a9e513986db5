#include "denscls/maf.hpp"

namespace denscls {

namespace {

// pos[g-1] = dimension whose degree is g under the layer's ordering.
std::vector<Index> degree_positions(const std::vector<Index>& ordering) {
    std::vector<Index> pos(ordering.size());
    for (std::size_t j = 0; j < ordering.size(); ++j)
        pos[static_cast<std::size_t>(ordering[j] - 1)] = static_cast<Index>(j);
    return pos;
}

}  // namespace

MafModel maf_init(Index d, const MafArch& arch, Rng& rng, const Scaler& scaler) {
    assert(arch.num_layers >= 1);
    MafModel model;
    model.d = d;
    model.scaler = scaler;
    for (int l = 0; l < arch.num_layers; ++l) {
        std::vector<Index> ordering;
        if (!arch.orderings.empty())
            ordering = arch.orderings[static_cast<std::size_t>(l) % arch.orderings.size()];
        else
            ordering = (l % 2 == 0) ? identity_ordering(d) : reversed_ordering(d);
        MaskSpec spec = build_masks(d, arch.hidden_sizes, ordering);
        model.layers.push_back(
            MadeNetwork::init(std::move(spec), arch.activation, arch.scale_clamp, rng));
    }
    return model;
}

Matrix layer_forward_batch(const MadeNetwork& net, const Matrix& s_prev) {
    const Index d = net.dim();
    const Matrix out = made_forward_batch(net, s_prev);
    return (out.leftCols(d).array().exp() * s_prev.array() + out.rightCols(d).array())
        .matrix();
}

Vector layer_forward(const MadeNetwork& net, const Vector& s_prev) {
    return layer_forward_batch(net, s_prev.transpose()).row(0).transpose();
}

std::pair<Matrix, Vector> layer_inverse_batch(const MadeNetwork& net, const Matrix& s_next) {
    const Index d = net.dim();
    if (s_next.cols() != d)
        throw DimensionMismatch("layer_inverse: dimension mismatch");
    const Index n = s_next.rows();
    const std::vector<Index> pos = degree_positions(net.spec.ordering);

    Matrix u = Matrix::Zero(n, d);
    Vector logdet = Vector::Zero(n);
    for (Index g = 1; g <= d; ++g) {
        // The masks hide every dimension of degree >= g, so the zeros
        // still sitting in u do not influence this step's conditioner.
        const Matrix out = made_forward_batch(net, u);
        const Index j = pos[static_cast<std::size_t>(g - 1)];
        const auto a = out.col(j).array();
        const auto b = out.col(d + j).array();
        u.col(j) = (s_next.col(j).array() - b) * (-a).exp();
        logdet.array() += a;
    }
    return {std::move(u), std::move(logdet)};
}

std::pair<Vector, double> layer_inverse(const MadeNetwork& net, const Vector& s_next) {
    auto [u, logdet] = layer_inverse_batch(net, s_next.transpose());
    return {u.row(0).transpose(), logdet[0]};
}

Vector maf_log_density_batch(const MafModel& model, const Matrix& x) {
    if (x.cols() != model.d)
        throw DimensionMismatch("maf_log_density: dimension mismatch");
    Matrix s = x;
    Vector total_logdet = Vector::Zero(x.rows());
    for (int l = model.depth() - 1; l >= 0; --l) {
        auto [prev, logdet] = layer_inverse_batch(model.layers[static_cast<std::size_t>(l)], s);
        s = std::move(prev);
        total_logdet += logdet;
    }
    const double dd = static_cast<double>(model.d);
    Vector base = -0.5 * (s.rowwise().squaredNorm().array() + dd * kLog2Pi);
    return base - total_logdet;
}

double maf_log_density(const MafModel& model, const Vector& x) {
    return maf_log_density_batch(model, x.transpose())[0];
}

Matrix maf_sample(const MafModel& model, Rng& rng, Index n) {
    assert(n >= 1);
    Matrix s = sample_standard_normal_matrix(rng, n, model.d);
    for (const MadeNetwork& net : model.layers) s = layer_forward_batch(net, s);
    return model.scaler.invert(s);
}

}  // namespace denscls
