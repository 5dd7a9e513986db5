#include "denscls/maf.hpp"
#include "denscls/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace denscls {

namespace {

struct AdamState {
    std::vector<std::vector<Matrix>> m_w, v_w;
    std::vector<std::vector<Vector>> m_b, v_b;
    long t = 0;
};

AdamState make_adam_state(const MafModel& model) {
    AdamState s;
    for (const MadeNetwork& net : model.layers) {
        std::vector<Matrix> mw, vw;
        std::vector<Vector> mb, vb;
        for (std::size_t k = 0; k < net.weights.size(); ++k) {
            mw.push_back(Matrix::Zero(net.weights[k].rows(), net.weights[k].cols()));
            vw.push_back(Matrix::Zero(net.weights[k].rows(), net.weights[k].cols()));
            mb.push_back(Vector::Zero(net.biases[k].size()));
            vb.push_back(Vector::Zero(net.biases[k].size()));
        }
        s.m_w.push_back(std::move(mw));
        s.v_w.push_back(std::move(vw));
        s.m_b.push_back(std::move(mb));
        s.v_b.push_back(std::move(vb));
    }
    return s;
}

}  // namespace

Var maf_batch_nll(Tape& tape, const MafModel& model, const Matrix& batch,
                  MafTapeParams& params) {
    const Index n = batch.rows();
    const Index d = model.d;

    params.w.assign(model.layers.size(), {});
    params.b.assign(model.layers.size(), {});
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const MadeNetwork& net = model.layers[l];
        for (std::size_t k = 0; k < net.weights.size(); ++k) {
            params.w[l].push_back(tape.param(net.weights[k]));
            params.b[l].push_back(tape.param(net.biases[k]));
        }
    }

    const Var x = tape.constant(batch);
    const Var zeros = tape.constant(Matrix::Zero(n, 1));
    std::vector<Var> cur(static_cast<std::size_t>(d));
    for (Index j = 0; j < d; ++j) cur[static_cast<std::size_t>(j)] = tape.col(x, j);

    Var logdet_sum = tape.constant(Matrix::Zero(1, 1));
    for (int l = model.depth() - 1; l >= 0; --l) {
        const MadeNetwork& net = model.layers[static_cast<std::size_t>(l)];
        const double c = net.scale_clamp;
        const int weight_layers = net.spec.num_weight_layers();
        std::vector<Index> pos(static_cast<std::size_t>(d));
        for (Index j = 0; j < d; ++j)
            pos[static_cast<std::size_t>(net.spec.ordering[static_cast<std::size_t>(j)] - 1)] = j;

        std::vector<Var> prev(static_cast<std::size_t>(d), zeros);
        for (Index g = 1; g <= d; ++g) {
            // Masks hide every dimension of degree >= g, so the yet
            // unrecovered columns can sit at zero during this evaluation.
            Var h = tape.hstack(prev);
            for (int k = 0; k < weight_layers; ++k) {
                h = tape.linear(h, params.w[l][static_cast<std::size_t>(k)],
                                params.b[l][static_cast<std::size_t>(k)],
                                &net.spec.masks[static_cast<std::size_t>(k)]);
                if (k + 1 < weight_layers)
                    h = net.activation == Activation::Tanh ? tape.tanh(h) : tape.relu(h);
            }
            const Index j = pos[static_cast<std::size_t>(g - 1)];
            const Var a = tape.scale(tape.tanh(tape.scale(tape.col(h, j), 1.0 / c)), c);
            const Var b = tape.col(h, d + j);
            prev[static_cast<std::size_t>(j)] =
                tape.mul(tape.sub(cur[static_cast<std::size_t>(j)], b),
                         tape.exp(tape.scale(a, -1.0)));
            logdet_sum = tape.add(logdet_sum, tape.sum(a));
        }
        cur = std::move(prev);
    }

    const Var u = tape.hstack(cur);
    const Var half_sq = tape.scale(tape.sum(tape.mul(u, u)), 0.5);
    const Var total = tape.add(half_sq, logdet_sum);
    const double dd = static_cast<double>(d);
    return tape.add_const(tape.scale(total, 1.0 / static_cast<double>(n)), 0.5 * dd * kLog2Pi);
}

MafTrainResult maf_train(const Matrix& data, const MafArch& arch, const FlowTrainConfig& cfg,
                         const std::optional<Scaler>& preset_scaler,
                         const std::optional<Matrix>& explicit_val) {
    assert(data.rows() >= 1 && data.cols() >= 1);
    assert(cfg.batch_size >= 1 && cfg.epochs >= 0 && cfg.patience >= 1);
    assert(cfg.validation_fraction > 0.0 && cfg.validation_fraction < 1.0);

    const Index n = data.rows();
    const Index d = data.cols();
    Rng rng(cfg.seed);
    const Scaler scaler = preset_scaler ? *preset_scaler : Scaler::fit(data);

    Matrix train_raw, val_raw;
    if (explicit_val) {
        train_raw = data;
        val_raw = *explicit_val;
    } else if (n >= 2) {
        std::vector<Index> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), Index{0});
        rng.shuffle(idx);
        const Index val_n = std::clamp<Index>(
            static_cast<Index>(std::llround(cfg.validation_fraction * static_cast<double>(n))),
            1, n - 1);
        val_raw.resize(val_n, d);
        train_raw.resize(n - val_n, d);
        for (Index r = 0; r < val_n; ++r) val_raw.row(r) = data.row(idx[static_cast<std::size_t>(r)]);
        for (Index r = val_n; r < n; ++r)
            train_raw.row(r - val_n) = data.row(idx[static_cast<std::size_t>(r)]);
    } else {
        train_raw = data;
        val_raw.resize(0, d);
    }

    const Matrix train = scaler.apply(train_raw);
    const Matrix val = val_raw.rows() > 0 ? scaler.apply(val_raw) : Matrix(0, d);

    MafTrainResult result;
    result.model = maf_init(d, arch, rng, scaler);
    if (cfg.epochs == 0) return result;

    MafModel& model = result.model;
    AdamState adam = make_adam_state(model);
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;
    double lr = cfg.learning_rate;
    double best_val = std::numeric_limits<double>::infinity();
    int stall = 0;
    bool have_best = false;
    std::vector<MadeNetwork> best_layers;

    const Index ntr = train.rows();
    std::vector<Index> order(static_cast<std::size_t>(ntr));
    std::iota(order.begin(), order.end(), Index{0});

    Tape tape;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_weighted = 0.0;
        Index seen = 0;
        for (Index start = 0; start < ntr; start += cfg.batch_size) {
            const Index bsz = std::min<Index>(cfg.batch_size, ntr - start);
            Matrix batch(bsz, d);
            for (Index r = 0; r < bsz; ++r)
                batch.row(r) = train.row(order[static_cast<std::size_t>(start + r)]);

            tape.reset();
            MafTapeParams params;
            const Var nll = maf_batch_nll(tape, model, batch, params);
            const double loss = tape.value(nll)(0, 0);
            if (!std::isfinite(loss)) throw NonFiniteLoss("non-finite training loss");
            tape.backward(nll);

            adam.t += 1;
            const double step = lr * std::sqrt(1.0 - std::pow(kBeta2, adam.t)) /
                                (1.0 - std::pow(kBeta1, adam.t));
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                MadeNetwork& net = model.layers[l];
                for (std::size_t k = 0; k < net.weights.size(); ++k) {
                    const Matrix& gw = tape.grad(params.w[l][k]);
                    adam.m_w[l][k] = kBeta1 * adam.m_w[l][k] + (1.0 - kBeta1) * gw;
                    adam.v_w[l][k] =
                        kBeta2 * adam.v_w[l][k] + (1.0 - kBeta2) * gw.cwiseProduct(gw);
                    net.weights[k].array() -=
                        step * adam.m_w[l][k].array() /
                        (adam.v_w[l][k].array().sqrt() + kAdamEps);

                    const Vector gb = tape.grad(params.b[l][k]).col(0);
                    adam.m_b[l][k] = kBeta1 * adam.m_b[l][k] + (1.0 - kBeta1) * gb;
                    adam.v_b[l][k] =
                        kBeta2 * adam.v_b[l][k] + (1.0 - kBeta2) * gb.cwiseProduct(gb);
                    net.biases[k].array() -= step * adam.m_b[l][k].array() /
                                             (adam.v_b[l][k].array().sqrt() + kAdamEps);
                }
            }
            loss_weighted += loss * static_cast<double>(bsz);
            seen += bsz;
        }
        result.train_nll.push_back(loss_weighted / static_cast<double>(seen));

        double vloss;
        if (val.rows() > 0) {
            const Vector ll = maf_log_density_batch(model, val);
            vloss = -pairwise_sum(ll) / static_cast<double>(ll.size());
            if (!std::isfinite(vloss)) throw NonFiniteLoss("non-finite validation loss");
        } else {
            vloss = result.train_nll.back();
        }
        result.val_nll.push_back(vloss);

        if (vloss < best_val - 1e-12) {
            best_val = vloss;
            best_layers = model.layers;
            have_best = true;
            stall = 0;
        } else {
            ++stall;
            if (stall >= cfg.patience) break;
            // Halve the step midway through a stall; often recovers
            // progress before patience runs out.
            const int half_every = std::max(cfg.patience / 2, 1);
            if (stall % half_every == 0) lr *= 0.5;
        }
    }
    if (have_best) model.layers = std::move(best_layers);
    return result;
}

}  // namespace denscls
