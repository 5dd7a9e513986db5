#include "denscls/made.hpp"

#include <algorithm>

namespace denscls {

MaskSpec build_masks(Index d, const std::vector<Index>& hidden_sizes,
                     const std::vector<Index>& ordering) {
    if (d < 1) throw std::invalid_argument("build_masks: d must be >= 1");
    for (Index h : hidden_sizes)
        if (h < 1) throw std::invalid_argument("build_masks: hidden sizes must be >= 1");

    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    if (static_cast<Index>(ordering.size()) != d)
        throw InvalidOrdering("build_masks: ordering length != d");
    for (Index deg : ordering) {
        if (deg < 1 || deg > d || seen[static_cast<std::size_t>(deg - 1)])
            throw InvalidOrdering("build_masks: ordering is not a permutation of 1..d");
        seen[static_cast<std::size_t>(deg - 1)] = true;
    }

    MaskSpec spec;
    spec.d = d;
    spec.hidden_sizes = hidden_sizes;
    spec.ordering = ordering;

    spec.degrees.push_back(ordering);
    const Index cycle = std::max<Index>(d - 1, 1);
    for (Index h : hidden_sizes) {
        std::vector<Index> degs(static_cast<std::size_t>(h));
        for (Index t = 0; t < h; ++t) degs[static_cast<std::size_t>(t)] = t % cycle + 1;
        spec.degrees.push_back(std::move(degs));
    }

    // Hidden connections: deg(out) >= deg(in).
    for (std::size_t layer = 0; layer + 1 < spec.degrees.size(); ++layer) {
        const auto& in = spec.degrees[layer];
        const auto& out = spec.degrees[layer + 1];
        Matrix mask = Matrix::Zero(static_cast<Index>(in.size()), static_cast<Index>(out.size()));
        for (std::size_t i = 0; i < in.size(); ++i)
            for (std::size_t o = 0; o < out.size(); ++o)
                if (out[o] >= in[i]) mask(static_cast<Index>(i), static_cast<Index>(o)) = 1.0;
        spec.masks.push_back(std::move(mask));
    }

    // Output pairs: (a_j, b_j) sees only strictly lower degrees.
    const auto& last = spec.degrees.back();
    Matrix out_mask = Matrix::Zero(static_cast<Index>(last.size()), 2 * d);
    for (std::size_t i = 0; i < last.size(); ++i)
        for (Index j = 0; j < d; ++j)
            if (ordering[static_cast<std::size_t>(j)] > last[i]) {
                out_mask(static_cast<Index>(i), j) = 1.0;
                out_mask(static_cast<Index>(i), d + j) = 1.0;
            }
    spec.masks.push_back(std::move(out_mask));
    return spec;
}

MadeNetwork MadeNetwork::init(MaskSpec spec, Activation activation, double scale_clamp,
                              Rng& rng) {
    MadeNetwork net;
    net.activation = activation;
    net.scale_clamp = scale_clamp;

    const int layers = spec.num_weight_layers();
    for (int l = 0; l < layers; ++l) {
        const Index fan_in = spec.masks[static_cast<std::size_t>(l)].rows();
        const Index fan_out = spec.masks[static_cast<std::size_t>(l)].cols();
        Matrix w(fan_in, fan_out);
        if (l + 1 == layers) {
            w.setZero();
        } else {
            const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
            for (Index i = 0; i < fan_in; ++i)
                for (Index o = 0; o < fan_out; ++o)
                    w(i, o) = (2.0 * rng.uniform() - 1.0) * bound;
        }
        net.weights.push_back(std::move(w));
        net.biases.push_back(Vector::Zero(fan_out));
    }
    net.spec = std::move(spec);
    return net;
}

Matrix made_forward_batch(const MadeNetwork& net, const Matrix& v) {
    if (v.cols() != net.dim())
        throw DimensionMismatch("made_forward: input dimension mismatch");

    Matrix h = v;
    const int layers = net.spec.num_weight_layers();
    for (int l = 0; l < layers; ++l) {
        const auto idx = static_cast<std::size_t>(l);
        h = h * net.weights[idx].cwiseProduct(net.spec.masks[idx]);
        h.rowwise() += net.biases[idx].transpose();
        if (l + 1 < layers) {
            if (net.activation == Activation::Tanh)
                h = h.array().tanh();
            else
                h = h.cwiseMax(0.0);
        }
    }

    const Index d = net.dim();
    const double c = net.scale_clamp;
    h.leftCols(d) = ((h.leftCols(d) * (1.0 / c)).array().tanh() * c).matrix();
    return h;
}

std::pair<Vector, Vector> made_forward(const MadeNetwork& net, const Vector& v) {
    const Matrix out = made_forward_batch(net, v.transpose());
    const Index d = net.dim();
    return {out.row(0).head(d).transpose(), out.row(0).tail(d).transpose()};
}

}  // namespace denscls
