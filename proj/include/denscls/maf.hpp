#pragma once

#include "denscls/made.hpp"
#include "denscls/scaler.hpp"
#include "denscls/tape.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace denscls {

class NonFiniteLoss : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Stack of MADE-conditioned affine autoregressive layers over a standard
/// normal base. Layer l maps s^(l-1) -> s^(l) with
///
///   s^(l)_j = exp(a_j(s^(l-1)_{<j})) * s^(l-1)_j + b_j(s^(l-1)_{<j})
///
/// so sampling is a single pass per layer while density evaluation solves
/// each layer dimension-by-dimension in degree order. The scaler is the
/// standardization applied at fit time; densities are reported in
/// standardized space (the classifier shares one scaler across classes,
/// so the constant Jacobian cancels in the argmax) and sampling un-applies
/// the scaler to return original-space points.
struct MafModel {
    std::vector<MadeNetwork> layers;
    Index d = 0;
    Scaler scaler;

    int depth() const { return static_cast<int>(layers.size()); }
    Index dim() const { return d; }
};

/// Architecture of the stack. When orderings is empty the layers alternate
/// identity / reversed permutations so no dimension stays unconditioned
/// through the whole stack.
struct MafArch {
    int num_layers = 5;
    std::vector<Index> hidden_sizes = {32, 32};
    Activation activation = Activation::Tanh;
    double scale_clamp = 7.0;
    std::vector<std::vector<Index>> orderings;
};

struct FlowTrainConfig {
    int epochs = 200;
    int batch_size = 64;
    double learning_rate = 1e-3;      // starting step of the adaptive schedule
    int patience = 20;                // early-stop epochs without val improvement
    std::uint64_t seed = 0;
    double validation_fraction = 0.2; // used when no explicit validation set is given
};

struct MafTrainResult {
    MafModel model;
    std::vector<double> train_nll;  // per epoch
    std::vector<double> val_nll;    // per epoch
};

/// Fresh identity-initialized flow (no training).
MafModel maf_init(Index d, const MafArch& arch, Rng& rng, const Scaler& scaler);

/// One generation step: s_next = exp(a(s_prev)) .* s_prev + b(s_prev).
Vector layer_forward(const MadeNetwork& net, const Vector& s_prev);
Matrix layer_forward_batch(const MadeNetwork& net, const Matrix& s_prev);

/// Inverts one layer dimension-by-dimension in degree order and returns
/// the recovered input together with the forward log|det J| = sum_j a_j
/// evaluated at the recovered input.
std::pair<Vector, double> layer_inverse(const MadeNetwork& net, const Vector& s_next);
std::pair<Matrix, Vector> layer_inverse_batch(const MadeNetwork& net, const Matrix& s_next);

/// Log-density of already-standardized points: inverts the stack to the
/// base variable u and returns log N(u; 0, I) minus the accumulated layer
/// log-determinants.
double maf_log_density(const MafModel& model, const Vector& x);
Vector maf_log_density_batch(const MafModel& model, const Matrix& x);

/// Draws base noise, pushes it through the stack and un-applies the
/// feature scaler.
Matrix maf_sample(const MafModel& model, Rng& rng, Index n);

/// Tape handles of every weight and bias pushed by maf_batch_nll, indexed
/// [flow layer][weight layer]; gradients are read back through these.
struct MafTapeParams {
    std::vector<std::vector<Var>> w;
    std::vector<std::vector<Var>> b;
};

/// Unrolls the per-dimension inverse of the whole stack on the tape and
/// returns the mean NLL of an already-standardized batch. The graph
/// mirrors layer_inverse_batch operation for operation, so the value being
/// differentiated is the one maf_log_density reports.
Var maf_batch_nll(Tape& tape, const MafModel& model, const Matrix& batch,
                  MafTapeParams& params);

/// Minimizes mean NLL with Adam over mini-batches; holds out validation
/// data for early stopping and halves the step when validation stalls.
/// raw data is standardized internally (with preset_scaler when given, so
/// several per-class flows can share one standardization). explicit_val
/// rows, when given, are used instead of an internal validation split.
MafTrainResult maf_train(const Matrix& data, const MafArch& arch, const FlowTrainConfig& cfg,
                         const std::optional<Scaler>& preset_scaler = std::nullopt,
                         const std::optional<Matrix>& explicit_val = std::nullopt);

}  // namespace denscls
