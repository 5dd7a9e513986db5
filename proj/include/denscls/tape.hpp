#pragma once

#include "denscls/linalg.hpp"

#include <cstdint>
#include <vector>

namespace denscls {

class CycleDetected : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class Tape;

/// Handle to a tape node.
struct Var {
    int id = -1;
};

/// Reverse-mode gradient tape over matrix-valued primitives: masked affine
/// maps, elementwise nonlinearities (tanh, relu, exp, log), elementwise
/// add/sub/mul, scalar scaling, full reduction, column extraction and
/// column concatenation. This closed set covers exactly the flow NLL
/// computation graph; no general autodiff is attempted.
///
/// Nodes are appended in topological order (parents precede children) and
/// backward() differentiates a single designated scalar root. The tape is
/// single-threaded; reset() reuses capacity between training steps.
class Tape {
public:
    enum class Op : std::uint8_t {
        Constant,
        Param,
        Linear,   // x * (w .* mask) + row-broadcast bias
        Tanh,
        Relu,
        Exp,
        Log,
        Add,
        Sub,
        Mul,
        Scale,    // value * scalar constant
        AddConst, // value + scalar constant
        Sum,      // 1x1 full reduction
        Col,      // single-column extraction
        HStack,   // concatenation of single columns
    };

    struct Node {
        Op op;
        Matrix value;
        std::vector<int> parents;
        const Matrix* mask = nullptr;  // Linear only; not owned
        double scalar = 0.0;           // Scale / AddConst
        Index col = -1;                // Col
    };

    Var constant(Matrix v) { return push(Op::Constant, std::move(v), {}); }

    /// Leaf with a gradient slot. The value is copied onto the tape.
    Var param(const Matrix& v) { return push(Op::Param, v, {}); }

    /// value = x * (w .* mask) + 1 b^T.  x is n x in, w is in x out, b is
    /// a length-out column. mask (in x out, may be null for no masking)
    /// must outlive the tape generation; it masks both the forward product
    /// and the weight gradient.
    Var linear(Var x, Var w, Var b, const Matrix* mask = nullptr);

    Var tanh(Var x);
    Var relu(Var x);
    Var exp(Var x);
    Var log(Var x);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var scale(Var x, double c);
    Var add_const(Var x, double c);
    Var sum(Var x);
    Var col(Var x, Index j);
    Var hstack(const std::vector<Var>& cols);

    const Matrix& value(Var v) const { return nodes_[check(v)].value; }

    /// Accumulates gradients of the scalar root into every node. Throws
    /// std::invalid_argument when root is not 1x1 and CycleDetected when
    /// the parent ordering is violated.
    void backward(Var root);

    const Matrix& grad(Var v) const { return grads_[check(v)]; }

    std::size_t size() const { return nodes_.size(); }
    void reset() {
        nodes_.clear();
        grads_.clear();
    }

    /// Raw node access; tests use this to corrupt orderings on purpose.
    Node& node(Var v) { return nodes_[check(v)]; }

private:
    Var push(Op op, Matrix value, std::vector<int> parents) {
        Node n;
        n.op = op;
        n.value = std::move(value);
        n.parents = std::move(parents);
        nodes_.push_back(std::move(n));
        return Var{static_cast<int>(nodes_.size()) - 1};
    }

    std::size_t check(Var v) const {
        assert(v.id >= 0 && static_cast<std::size_t>(v.id) < nodes_.size());
        return static_cast<std::size_t>(v.id);
    }

    std::vector<Node> nodes_;
    std::vector<Matrix> grads_;
};

}  // namespace denscls
