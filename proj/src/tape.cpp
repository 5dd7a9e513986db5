#include "denscls/tape.hpp"

namespace denscls {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch(std::string(what) + ": shape mismatch");
}

}  // namespace

Var Tape::linear(Var x, Var w, Var b, const Matrix* mask) {
    const Matrix& xv = value(x);
    const Matrix& wv = value(w);
    const Matrix& bv = value(b);
    if (xv.cols() != wv.rows())
        throw DimensionMismatch("linear: input/weight mismatch");
    if (bv.rows() != wv.cols() || bv.cols() != 1)
        throw DimensionMismatch("linear: bias must be a length-out column");
    if (mask != nullptr && (mask->rows() != wv.rows() || mask->cols() != wv.cols()))
        throw DimensionMismatch("linear: mask/weight mismatch");

    Matrix out;
    if (mask != nullptr)
        out = xv * wv.cwiseProduct(*mask);
    else
        out = xv * wv;
    out.rowwise() += bv.col(0).transpose();

    Var v = push(Op::Linear, std::move(out), {x.id, w.id, b.id});
    nodes_.back().mask = mask;
    return v;
}

Var Tape::tanh(Var x) {
    return push(Op::Tanh, value(x).array().tanh().matrix(), {x.id});
}

Var Tape::relu(Var x) {
    return push(Op::Relu, value(x).cwiseMax(0.0), {x.id});
}

Var Tape::exp(Var x) {
    return push(Op::Exp, value(x).array().exp().matrix(), {x.id});
}

Var Tape::log(Var x) {
    return push(Op::Log, value(x).array().log().matrix(), {x.id});
}

Var Tape::add(Var a, Var b) {
    require_same_shape(value(a), value(b), "add");
    return push(Op::Add, value(a) + value(b), {a.id, b.id});
}

Var Tape::sub(Var a, Var b) {
    require_same_shape(value(a), value(b), "sub");
    return push(Op::Sub, value(a) - value(b), {a.id, b.id});
}

Var Tape::mul(Var a, Var b) {
    require_same_shape(value(a), value(b), "mul");
    return push(Op::Mul, value(a).cwiseProduct(value(b)), {a.id, b.id});
}

Var Tape::scale(Var x, double c) {
    Var v = push(Op::Scale, value(x) * c, {x.id});
    nodes_.back().scalar = c;
    return v;
}

Var Tape::add_const(Var x, double c) {
    Var v = push(Op::AddConst, value(x).array() + c, {x.id});
    nodes_.back().scalar = c;
    return v;
}

Var Tape::sum(Var x) {
    Matrix s(1, 1);
    s(0, 0) = value(x).sum();
    return push(Op::Sum, std::move(s), {x.id});
}

Var Tape::col(Var x, Index j) {
    if (j < 0 || j >= value(x).cols())
        throw DimensionMismatch("col: index out of range");
    Var v = push(Op::Col, value(x).col(j), {x.id});
    nodes_.back().col = j;
    return v;
}

Var Tape::hstack(const std::vector<Var>& cols) {
    assert(!cols.empty());
    const Index rows = value(cols.front()).rows();
    Matrix out(rows, static_cast<Index>(cols.size()));
    std::vector<int> parents;
    parents.reserve(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const Matrix& cv = value(cols[c]);
        if (cv.cols() != 1 || cv.rows() != rows)
            throw DimensionMismatch("hstack: operands must be equal-length columns");
        out.col(static_cast<Index>(c)) = cv;
        parents.push_back(cols[c].id);
    }
    return push(Op::HStack, std::move(out), std::move(parents));
}

void Tape::backward(Var root) {
    const std::size_t r = check(root);
    if (nodes_[r].value.rows() != 1 || nodes_[r].value.cols() != 1)
        throw std::invalid_argument("backward: root must be scalar");
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        for (int p : nodes_[i].parents)
            if (p < 0 || static_cast<std::size_t>(p) >= i)
                throw CycleDetected("backward: node ordering violated");

    grads_.assign(nodes_.size(), Matrix());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        grads_[i] = Matrix::Zero(nodes_[i].value.rows(), nodes_[i].value.cols());
    grads_[r](0, 0) = 1.0;

    for (std::size_t ii = nodes_.size(); ii-- > 0;) {
        const Node& n = nodes_[ii];
        const Matrix& g = grads_[ii];
        switch (n.op) {
            case Op::Constant:
            case Op::Param:
                break;
            case Op::Linear: {
                const Matrix& xv = nodes_[n.parents[0]].value;
                const Matrix& wv = nodes_[n.parents[1]].value;
                if (n.mask != nullptr) {
                    grads_[n.parents[0]].noalias() += g * wv.cwiseProduct(*n.mask).transpose();
                    grads_[n.parents[1]] += (xv.transpose() * g).cwiseProduct(*n.mask);
                } else {
                    grads_[n.parents[0]].noalias() += g * wv.transpose();
                    grads_[n.parents[1]].noalias() += xv.transpose() * g;
                }
                grads_[n.parents[2]] += g.colwise().sum().transpose();
                break;
            }
            case Op::Tanh:
                grads_[n.parents[0]].array() += g.array() * (1.0 - n.value.array().square());
                break;
            case Op::Relu:
                grads_[n.parents[0]].array() +=
                    g.array() * (nodes_[n.parents[0]].value.array() > 0.0).cast<double>();
                break;
            case Op::Exp:
                grads_[n.parents[0]].array() += g.array() * n.value.array();
                break;
            case Op::Log:
                grads_[n.parents[0]].array() += g.array() / nodes_[n.parents[0]].value.array();
                break;
            case Op::Add:
                grads_[n.parents[0]] += g;
                grads_[n.parents[1]] += g;
                break;
            case Op::Sub:
                grads_[n.parents[0]] += g;
                grads_[n.parents[1]] -= g;
                break;
            case Op::Mul:
                grads_[n.parents[0]].array() += g.array() * nodes_[n.parents[1]].value.array();
                grads_[n.parents[1]].array() += g.array() * nodes_[n.parents[0]].value.array();
                break;
            case Op::Scale:
                grads_[n.parents[0]] += g * n.scalar;
                break;
            case Op::AddConst:
                grads_[n.parents[0]] += g;
                break;
            case Op::Sum:
                grads_[n.parents[0]].array() += g(0, 0);
                break;
            case Op::Col:
                grads_[n.parents[0]].col(n.col) += g;
                break;
            case Op::HStack:
                for (std::size_t c = 0; c < n.parents.size(); ++c)
                    grads_[n.parents[c]] += g.col(static_cast<Index>(c));
                break;
        }
    }
}

}  // namespace denscls
