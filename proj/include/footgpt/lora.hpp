#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "footgpt/errors.hpp"
#include "footgpt/util.hpp"

namespace footgpt {

// Row-major dense matrix; at desk scale clarity beats BLAS.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {
        if (r < 1 || c < 1) throw DomainError("matrix dimensions must be positive");
    }

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    bool all_finite() const {
        for (double v : data) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }
};

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DomainError("matmul shape mismatch");
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int l = 0; l < a.cols; ++l) {
            const double v = a.at(i, l);
            if (v == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) {
                out.at(i, j) += v * b.at(l, j);
            }
        }
    }
    return out;
}

inline Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            out.at(j, i) = m.at(i, j);
        }
    }
    return out;
}

inline Matrix add(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DomainError("matrix add shape mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

inline Matrix scale_matrix(const Matrix& a, double s) {
    Matrix out = a;
    for (double& v : out.data) v *= s;
    return out;
}

// Frozen base weights; training never touches these.
struct BaseMatrix {
    Matrix W0;

    explicit BaseMatrix(Matrix w) : W0(std::move(w)) {
        if (!W0.all_finite()) throw DomainError("base matrix has non-finite entries");
    }

    std::uint64_t byte_hash() const {
        return fnv1a64_bytes(W0.data.data(), W0.data.size() * sizeof(double));
    }
};

// Low-rank update pair: delta = B * A, rank r strictly below min(d, k).
struct LoraAdapter {
    Matrix B;  // d x r
    Matrix A;  // r x k
    int rank = 0;
};

inline LoraAdapter init_adapter(int d, int k, int r, std::uint64_t seed) {
    if (d < 1 || k < 1) throw DomainError("adapter dimensions must be positive");
    if (r < 1 || r >= std::min(d, k)) {
        throw DomainError("adapter rank must satisfy 1 <= r < min(d, k)");
    }
    LoraAdapter adapter;
    adapter.rank = r;
    adapter.B = Matrix(d, r);  // zeros, so the initial update is zero
    adapter.A = Matrix(r, k);
    SplitMix64 rng(seed);
    const double sd = 1.0 / std::sqrt(static_cast<double>(r));
    for (double& v : adapter.A.data) v = rng.next_gaussian() * sd;
    return adapter;
}

inline std::int64_t trainable_params(const LoraAdapter& adapter) {
    const std::int64_t d = adapter.B.rows;
    const std::int64_t k = adapter.A.cols;
    return static_cast<std::int64_t>(adapter.rank) * (d + k);
}

inline void check_shapes(const BaseMatrix& base, const LoraAdapter& adapter) {
    if (adapter.B.rows != base.W0.rows || adapter.A.cols != base.W0.cols ||
        adapter.B.cols != adapter.rank || adapter.A.rows != adapter.rank) {
        throw DomainError("adapter shapes do not match base matrix");
    }
}

// Factored application: W0 x + B (A x). The d x k product B*A is never built.
inline std::vector<double> forward(const BaseMatrix& base, const LoraAdapter& adapter,
                                   const std::vector<double>& x) {
    check_shapes(base, adapter);
    const int d = base.W0.rows;
    const int k = base.W0.cols;
    const int r = adapter.rank;
    if (static_cast<int>(x.size()) != k) throw DomainError("input vector length mismatch");

    std::vector<double> ax(r, 0.0);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < k; ++j) ax[i] += adapter.A.at(i, j) * x[j];
    }
    std::vector<double> out(d, 0.0);
    for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        for (int j = 0; j < k; ++j) acc += base.W0.at(i, j) * x[j];
        for (int l = 0; l < r; ++l) acc += adapter.B.at(i, l) * ax[l];
        out[i] = acc;
    }
    return out;
}

inline Matrix forward_batch(const BaseMatrix& base, const LoraAdapter& adapter,
                            const Matrix& X) {
    check_shapes(base, adapter);
    if (X.rows != base.W0.cols) throw DomainError("batch input row count mismatch");
    return add(matmul(base.W0, X), matmul(adapter.B, matmul(adapter.A, X)));
}

inline BaseMatrix merge(const BaseMatrix& base, const LoraAdapter& adapter) {
    check_shapes(base, adapter);
    return BaseMatrix(add(base.W0, matmul(adapter.B, adapter.A)));
}

// Mean squared residual over batch columns: L = ||(W0 + BA) X - Y||_F^2 / n.
inline double lora_loss(const BaseMatrix& base, const LoraAdapter& adapter,
                        const Matrix& X, const Matrix& Y) {
    if (Y.rows != base.W0.rows || Y.cols != X.cols) {
        throw DomainError("target shape mismatch");
    }
    const Matrix pred = forward_batch(base, adapter, X);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double e = pred.data[i] - Y.data[i];
        sum += e * e;
    }
    return sum / X.cols;
}

// One gradient step on A and B only; both gradients are taken at the incoming
// parameters before either factor moves.
inline double train_step(const BaseMatrix& base, LoraAdapter& adapter,
                         const Matrix& X, const Matrix& Y, double lr) {
    if (lr <= 0.0) throw DomainError("learning rate must be positive");
    if (Y.rows != base.W0.rows || Y.cols != X.cols) {
        throw DomainError("target shape mismatch");
    }
    const int n = X.cols;
    const Matrix AX = matmul(adapter.A, X);
    const Matrix pred = add(matmul(base.W0, X), matmul(adapter.B, AX));
    Matrix E = pred;
    double sum = 0.0;
    for (std::size_t i = 0; i < E.data.size(); ++i) {
        E.data[i] -= Y.data[i];
        sum += E.data[i] * E.data[i];
    }
    const double loss = sum / n;
    if (!std::isfinite(loss)) throw DivergenceError("training loss is non-finite");

    const Matrix grad_B = scale_matrix(matmul(E, transpose(AX)), 2.0 / n);
    const Matrix grad_A = scale_matrix(matmul(transpose(adapter.B), matmul(E, transpose(X))), 2.0 / n);
    for (std::size_t i = 0; i < adapter.B.data.size(); ++i) {
        adapter.B.data[i] -= lr * grad_B.data[i];
    }
    for (std::size_t i = 0; i < adapter.A.data.size(); ++i) {
        adapter.A.data[i] -= lr * grad_A.data[i];
    }
    return loss;
}

// Per-tensor affine 8-bit codes: value = scale * code + zero_point.
struct QuantizedMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> codes;
    double scale = 1.0;
    double zero_point = 0.0;
};

inline QuantizedMatrix quantize8(const Matrix& m) {
    if (!m.all_finite()) throw DomainError("cannot quantize non-finite entries");
    double lo = m.data.front();
    double hi = lo;
    for (double v : m.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    QuantizedMatrix q;
    q.rows = m.rows;
    q.cols = m.cols;
    q.scale = hi > lo ? (hi - lo) / 255.0 : 1.0;
    q.zero_point = lo;
    q.codes.reserve(m.data.size());
    for (double v : m.data) {
        double code = std::nearbyint((v - lo) / q.scale);
        code = std::min(255.0, std::max(0.0, code));
        q.codes.push_back(static_cast<std::uint8_t>(code));
    }
    return q;
}

inline Matrix dequantize8(const QuantizedMatrix& q) {
    Matrix out(q.rows, q.cols);
    for (std::size_t i = 0; i < q.codes.size(); ++i) {
        out.data[i] = q.scale * q.codes[i] + q.zero_point;
    }
    return out;
}

}  // namespace footgpt
