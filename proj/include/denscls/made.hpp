#pragma once

#include "denscls/linalg.hpp"
#include "denscls/random.hpp"

#include <vector>

namespace denscls {

class InvalidOrdering : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Binary masks enforcing the autoregressive dependency structure of a
/// MADE conditioner. Degrees label every unit with the highest input
/// position (under the given ordering) it is allowed to see:
///
///   - input i carries degree ordering[i];
///   - hidden units cycle through 1..max(d-1, 1);
///   - a hidden connection (in -> out) is kept iff deg(out) >= deg(in);
///   - the output pair (a_j, b_j) carries degree ordering[j] and keeps a
///     connection iff ordering[j] > deg(hidden), so it depends only on
///     inputs of strictly lower degree.
///
/// For d = 1 no connection survives and the conditioner outputs are
/// bias-driven constants.
struct MaskSpec {
    Index d = 0;
    std::vector<Index> hidden_sizes;
    std::vector<Index> ordering;              // degree of each input, a permutation of 1..d
    std::vector<std::vector<Index>> degrees;  // per layer boundary: input, hiddens
    std::vector<Matrix> masks;                // one (in x out) 0/1 matrix per weight layer

    int num_weight_layers() const { return static_cast<int>(masks.size()); }
};

MaskSpec build_masks(Index d, const std::vector<Index>& hidden_sizes,
                     const std::vector<Index>& ordering);

inline std::vector<Index> identity_ordering(Index d) {
    std::vector<Index> o(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) o[static_cast<std::size_t>(i)] = i + 1;
    return o;
}

inline std::vector<Index> reversed_ordering(Index d) {
    std::vector<Index> o(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) o[static_cast<std::size_t>(i)] = d - i;
    return o;
}

enum class Activation { Tanh, Relu };

/// Masked feed-forward conditioner. The final layer emits 2d values read
/// as (a_1..a_d, b_1..b_d); the log-scales a are passed through a smooth
/// clamp c*tanh(a/c) so exp(a) stays bounded. Weights are stored in
/// (in x out) orientation and the masks are applied multiplicatively on
/// every evaluation.
struct MadeNetwork {
    MaskSpec spec;
    std::vector<Matrix> weights;  // per weight layer, in x out
    std::vector<Vector> biases;   // per weight layer, length out
    Activation activation = Activation::Tanh;
    double scale_clamp = 7.0;

    Index dim() const { return spec.d; }

    /// Fan-in scaled uniform init; the output layer starts at zero so a
    /// freshly built flow layer is the identity map.
    static MadeNetwork init(MaskSpec spec, Activation activation, double scale_clamp, Rng& rng);
};

/// Evaluates the conditioner on a batch (rows are samples): returns the
/// n x 2d matrix of clamped log-scales and shifts.
Matrix made_forward_batch(const MadeNetwork& net, const Matrix& v);

/// Single-sample convenience wrapper returning (a, b).
std::pair<Vector, Vector> made_forward(const MadeNetwork& net, const Vector& v);

inline double smooth_clamp(double x, double c) { return std::tanh(x * (1.0 / c)) * c; }

/// Preimage of smooth_clamp; handy for pinning an exact produced scale.
inline double smooth_clamp_inverse(double y, double c) { return c * std::atanh(y / c); }

}  // namespace denscls
