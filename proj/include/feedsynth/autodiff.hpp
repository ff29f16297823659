#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "feedsynth/matrix.hpp"

namespace feedsynth {

// Named learnable tensor. Gradients accumulate here across tape backwards
// until the optimizer consumes them.
struct Param {
    std::string name;
    Matrix value;
    Matrix grad;
    Matrix adam_m;
    Matrix adam_v;

    Param() = default;
    Param(std::string n, Matrix v)
        : name(std::move(n)), value(std::move(v)),
          grad(value.rows(), value.cols()),
          adam_m(value.rows(), value.cols()),
          adam_v(value.rows(), value.cols()) {}
};

// Reverse-mode tape over Matrix values. One tape per forward pass; backward()
// walks nodes in reverse creation order and flushes leaf gradients into the
// bound Params.
class Tape {
public:
    using NodeId = int;

    NodeId constant(Matrix v) { return push(std::move(v), nullptr); }

    NodeId leaf(Param& p) {
        auto it = leaf_cache_.find(&p);
        if (it != leaf_cache_.end()) return it->second;
        Param* pp = &p;
        NodeId id = push(p.value, [pp](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            for (std::size_t i = 0; i < g.size(); ++i) pp->grad.raw()[i] += g.raw()[i];
        });
        leaf_cache_[&p] = id;
        return id;
    }

    NodeId matmul(NodeId a, NodeId b) {
        NodeId id = push(feedsynth::matmul(value(a), value(b)), [a, b](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            accumulate(t.grad(a), matmul_nt(g, t.value(b)));
            accumulate(t.grad(b), matmul_tn(t.value(a), g));
        });
        return id;
    }

    // a * b^T
    NodeId matmul_nt(NodeId a, NodeId b) {
        NodeId id = push(feedsynth::matmul_nt(value(a), value(b)), [a, b](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            accumulate(t.grad(a), feedsynth::matmul(g, t.value(b)));
            accumulate(t.grad(b), feedsynth::matmul_tn(g, t.value(a)));
        });
        return id;
    }

    NodeId add(NodeId a, NodeId b) {
        NodeId id = push(feedsynth::add(value(a), value(b)), [a, b](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            accumulate(t.grad(a), g);
            accumulate(t.grad(b), g);
        });
        return id;
    }

    NodeId sub(NodeId a, NodeId b) {
        return add(a, scale(b, -1.0));
    }

    // Broadcast-add a 1 x d row vector to every row.
    NodeId add_rowvec(NodeId a, NodeId v) {
        const Matrix& av = value(a);
        const Matrix& vv = value(v);
        check_shape(vv.rows() == 1 && vv.cols() == av.cols(), "add_rowvec");
        Matrix y = av;
        for (std::size_t r = 0; r < y.rows(); ++r)
            for (std::size_t c = 0; c < y.cols(); ++c) y(r, c) += vv(0, c);
        return push(std::move(y), [a, v](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            accumulate(t.grad(a), g);
            Matrix& gv = t.grad(v);
            for (std::size_t r = 0; r < g.rows(); ++r)
                for (std::size_t c = 0; c < g.cols(); ++c) gv(0, c) += g(r, c);
        });
    }

    // Broadcast-multiply each row by a 1 x d row vector.
    NodeId mul_rowvec(NodeId a, NodeId v) {
        const Matrix& av = value(a);
        const Matrix& vv = value(v);
        check_shape(vv.rows() == 1 && vv.cols() == av.cols(), "mul_rowvec");
        Matrix y = av;
        for (std::size_t r = 0; r < y.rows(); ++r)
            for (std::size_t c = 0; c < y.cols(); ++c) y(r, c) *= vv(0, c);
        return push(std::move(y), [a, v](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            const Matrix& avv = t.value(a);
            const Matrix& vvv = t.value(v);
            Matrix& ga = t.grad(a);
            Matrix& gv = t.grad(v);
            for (std::size_t r = 0; r < g.rows(); ++r)
                for (std::size_t c = 0; c < g.cols(); ++c) {
                    ga(r, c) += g(r, c) * vvv(0, c);
                    gv(0, c) += g(r, c) * avv(r, c);
                }
        });
    }

    NodeId mul(NodeId a, NodeId b) {
        NodeId id = push(hadamard(value(a), value(b)), [a, b](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            accumulate(t.grad(a), hadamard(g, t.value(b)));
            accumulate(t.grad(b), hadamard(g, t.value(a)));
        });
        return id;
    }

    NodeId scale(NodeId a, double s) {
        return push(feedsynth::scale(value(a), s), [a, s](Tape& t, NodeId self) {
            accumulate(t.grad(a), feedsynth::scale(t.grad(self), s));
        });
    }

    NodeId relu(NodeId a) {
        Matrix y = value(a);
        for (double& v : y.raw()) v = std::max(0.0, v);
        return push(std::move(y), [a](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            const Matrix& x = t.value(a);
            Matrix& ga = t.grad(a);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (x.raw()[i] > 0.0) ga.raw()[i] += g.raw()[i];
        });
    }

    NodeId sigmoid(NodeId a) {
        Matrix y = value(a);
        for (double& v : y.raw()) v = 1.0 / (1.0 + std::exp(-v));
        return push(std::move(y), [a](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            const Matrix& y2 = t.value(self);
            Matrix& ga = t.grad(a);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double s = y2.raw()[i];
                ga.raw()[i] += g.raw()[i] * s * (1.0 - s);
            }
        });
    }

    NodeId softmax_rows(NodeId a) {
        return push(feedsynth::softmax_rows(value(a)), [a](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            const Matrix& y = t.value(self);
            Matrix& ga = t.grad(a);
            for (std::size_t r = 0; r < g.rows(); ++r) {
                double dot = 0.0;
                for (std::size_t c = 0; c < g.cols(); ++c) dot += g(r, c) * y(r, c);
                for (std::size_t c = 0; c < g.cols(); ++c)
                    ga(r, c) += y(r, c) * (g(r, c) - dot);
            }
        });
    }

    // Per-row layer norm with learned gain/bias (1 x d each).
    NodeId layer_norm(NodeId a, NodeId gamma, NodeId beta, double eps = 1e-5) {
        const Matrix& x = value(a);
        const Matrix& gm = value(gamma);
        const Matrix& bt = value(beta);
        check_shape(gm.rows() == 1 && gm.cols() == x.cols(), "layer_norm gamma");
        check_shape(bt.rows() == 1 && bt.cols() == x.cols(), "layer_norm beta");
        const std::size_t d = x.cols();
        Matrix y(x.rows(), d);
        std::vector<double> mu(x.rows()), inv_sd(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) {
            double m = 0.0;
            for (std::size_t c = 0; c < d; ++c) m += x(r, c);
            m /= static_cast<double>(d);
            double var = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double dv = x(r, c) - m;
                var += dv * dv;
            }
            var /= static_cast<double>(d);
            mu[r] = m;
            inv_sd[r] = 1.0 / std::sqrt(var + eps);
            for (std::size_t c = 0; c < d; ++c)
                y(r, c) = (x(r, c) - m) * inv_sd[r] * gm(0, c) + bt(0, c);
        }
        return push(std::move(y), [a, gamma, beta, mu, inv_sd](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            const Matrix& x2 = t.value(a);
            const Matrix& gm2 = t.value(gamma);
            Matrix& ga = t.grad(a);
            Matrix& ggm = t.grad(gamma);
            Matrix& gbt = t.grad(beta);
            const std::size_t d = x2.cols();
            for (std::size_t r = 0; r < x2.rows(); ++r) {
                double sum_dxh = 0.0, sum_dxh_xh = 0.0;
                std::vector<double> xh(d), dxh(d);
                for (std::size_t c = 0; c < d; ++c) {
                    xh[c] = (x2(r, c) - mu[r]) * inv_sd[r];
                    dxh[c] = g(r, c) * gm2(0, c);
                    sum_dxh += dxh[c];
                    sum_dxh_xh += dxh[c] * xh[c];
                    ggm(0, c) += g(r, c) * xh[c];
                    gbt(0, c) += g(r, c);
                }
                const double inv_d = 1.0 / static_cast<double>(d);
                for (std::size_t c = 0; c < d; ++c)
                    ga(r, c) += inv_sd[r] * (dxh[c] - inv_d * sum_dxh - xh[c] * inv_d * sum_dxh_xh);
            }
        });
    }

    NodeId concat_cols(NodeId a, NodeId b) {
        const Matrix& av = value(a);
        const Matrix& bv = value(b);
        check_shape(av.rows() == bv.rows(), "concat_cols");
        Matrix y(av.rows(), av.cols() + bv.cols());
        for (std::size_t r = 0; r < av.rows(); ++r) {
            for (std::size_t c = 0; c < av.cols(); ++c) y(r, c) = av(r, c);
            for (std::size_t c = 0; c < bv.cols(); ++c) y(r, av.cols() + c) = bv(r, c);
        }
        const std::size_t split = av.cols();
        return push(std::move(y), [a, b, split](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            Matrix& ga = t.grad(a);
            Matrix& gb = t.grad(b);
            for (std::size_t r = 0; r < g.rows(); ++r) {
                for (std::size_t c = 0; c < split; ++c) ga(r, c) += g(r, c);
                for (std::size_t c = split; c < g.cols(); ++c) gb(r, c - split) += g(r, c);
            }
        });
    }

    NodeId concat_rows(NodeId a, NodeId b) {
        const Matrix& av = value(a);
        const Matrix& bv = value(b);
        if (av.empty()) return b;
        if (bv.empty()) return a;
        check_shape(av.cols() == bv.cols(), "concat_rows");
        const std::size_t split = av.rows();
        return push(feedsynth::concat_rows(av, bv), [a, b, split](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            Matrix& ga = t.grad(a);
            Matrix& gb = t.grad(b);
            for (std::size_t r = 0; r < split; ++r)
                for (std::size_t c = 0; c < g.cols(); ++c) ga(r, c) += g(r, c);
            for (std::size_t r = split; r < g.rows(); ++r)
                for (std::size_t c = 0; c < g.cols(); ++c) gb(r - split, c) += g(r, c);
        });
    }

    // Gather rows of an embedding table; backward scatter-adds straight into
    // the param so the full table never materialises as a node.
    NodeId embedding(Param& table, const std::vector<int>& ids) {
        const std::size_t d = table.value.cols();
        Matrix y(ids.size(), d);
        for (std::size_t t = 0; t < ids.size(); ++t) {
            const int row = ids[t];
            if (row < 0 || static_cast<std::size_t>(row) >= table.value.rows())
                throw std::invalid_argument("embedding: id out of range");
            for (std::size_t c = 0; c < d; ++c) y(t, c) = table.value(row, c);
        }
        Param* pp = &table;
        return push(std::move(y), [pp, ids](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            for (std::size_t r = 0; r < ids.size(); ++r)
                for (std::size_t c = 0; c < g.cols(); ++c)
                    pp->grad(static_cast<std::size_t>(ids[r]), c) += g(r, c);
        });
    }

    // Same-padded 1-D convolution along the row (time) axis.
    // kernel is (width * d_in) x d_out, bias 1 x d_out; width must be odd.
    NodeId conv1d_same(NodeId x, NodeId kernel, NodeId bias, std::size_t width) {
        const Matrix& xv = value(x);
        const Matrix& kv = value(kernel);
        const Matrix& bv = value(bias);
        if (width % 2 == 0) throw std::invalid_argument("conv1d_same: width must be odd");
        const std::size_t d_in = xv.cols();
        check_shape(kv.rows() == width * d_in, "conv1d kernel rows");
        const std::size_t d_out = kv.cols();
        check_shape(bv.rows() == 1 && bv.cols() == d_out, "conv1d bias");
        const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(width / 2);
        const std::ptrdiff_t T = static_cast<std::ptrdiff_t>(xv.rows());
        Matrix y(xv.rows(), d_out);
        for (std::ptrdiff_t t = 0; t < T; ++t)
            for (std::size_t o = 0; o < d_out; ++o) {
                double s = bv(0, o);
                for (std::size_t j = 0; j < width; ++j) {
                    const std::ptrdiff_t src = t + static_cast<std::ptrdiff_t>(j) - half;
                    if (src < 0 || src >= T) continue;
                    for (std::size_t i = 0; i < d_in; ++i)
                        s += xv(src, i) * kv(j * d_in + i, o);
                }
                y(t, o) = s;
            }
        return push(std::move(y), [x, kernel, bias, width, half](Tape& t, NodeId self) {
            const Matrix& g = t.grad(self);
            const Matrix& xv2 = t.value(x);
            const Matrix& kv2 = t.value(kernel);
            Matrix& gx = t.grad(x);
            Matrix& gk = t.grad(kernel);
            Matrix& gb = t.grad(bias);
            const std::size_t d_in = xv2.cols();
            const std::size_t d_out = kv2.cols();
            const std::ptrdiff_t T = static_cast<std::ptrdiff_t>(xv2.rows());
            for (std::ptrdiff_t tt = 0; tt < T; ++tt)
                for (std::size_t o = 0; o < d_out; ++o) {
                    const double go = g(tt, o);
                    gb(0, o) += go;
                    for (std::size_t j = 0; j < width; ++j) {
                        const std::ptrdiff_t src = tt + static_cast<std::ptrdiff_t>(j) - half;
                        if (src < 0 || src >= T) continue;
                        for (std::size_t i = 0; i < d_in; ++i) {
                            gx(src, i) += go * kv2(j * d_in + i, o);
                            gk(j * d_in + i, o) += go * xv2(src, i);
                        }
                    }
                }
        });
    }

    // Inverted dropout; identity when `training` is false.
    NodeId dropout(NodeId a, double p, bool training, std::mt19937_64& rng) {
        if (!training || p <= 0.0) return a;
        const Matrix& av = value(a);
        Matrix mask(av.rows(), av.cols());
        std::bernoulli_distribution keep(1.0 - p);
        const double inv_keep = 1.0 / (1.0 - p);
        for (double& v : mask.raw()) v = keep(rng) ? inv_keep : 0.0;
        NodeId m = constant(std::move(mask));
        return mul(a, m);
    }

    // Mean token-level cross entropy of logits (T x V) against target ids.
    NodeId cross_entropy(NodeId logits, const std::vector<int>& targets) {
        const Matrix& lv = value(logits);
        check_shape(lv.rows() == targets.size(), "cross_entropy targets");
        const Matrix probs = feedsynth::softmax_rows(lv);
        double loss = 0.0;
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const int y = targets[t];
            if (y < 0 || static_cast<std::size_t>(y) >= lv.cols())
                throw std::invalid_argument("cross_entropy: target out of range");
            loss -= std::log(std::max(probs(t, static_cast<std::size_t>(y)), 1e-300));
        }
        loss /= static_cast<double>(targets.size());
        Matrix out(1, 1);
        out(0, 0) = loss;
        return push(std::move(out), [logits, targets, probs](Tape& t, NodeId self) {
            const double up = t.grad(self)(0, 0) / static_cast<double>(targets.size());
            Matrix& gl = t.grad(logits);
            for (std::size_t r = 0; r < probs.rows(); ++r)
                for (std::size_t c = 0; c < probs.cols(); ++c) {
                    double delta = probs(r, c);
                    if (c == static_cast<std::size_t>(targets[r])) delta -= 1.0;
                    gl(r, c) += up * delta;
                }
        });
    }

    NodeId sum_all(NodeId a) {
        const Matrix& av = value(a);
        Matrix out(1, 1);
        for (double v : av.raw()) out(0, 0) += v;
        return push(std::move(out), [a](Tape& t, NodeId self) {
            const double g = t.grad(self)(0, 0);
            Matrix& ga = t.grad(a);
            for (double& v : ga.raw()) v += g;
        });
    }

    NodeId mean_all(NodeId a) {
        const double n = static_cast<double>(value(a).size());
        return scale(sum_all(a), 1.0 / n);
    }

    const Matrix& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].val; }
    Matrix& grad(NodeId id) { return nodes_[static_cast<std::size_t>(id)].grad; }

    // Seed d(root)=1 and propagate to all leaves. root must be scalar.
    void backward(NodeId root) {
        if (value(root).size() != 1)
            throw std::invalid_argument("backward: root must be scalar");
        for (auto& n : nodes_) {
            n.grad = Matrix(n.val.rows(), n.val.cols());
        }
        nodes_[static_cast<std::size_t>(root)].grad(0, 0) = 1.0;
        for (std::ptrdiff_t id = root; id >= 0; --id) {
            auto& n = nodes_[static_cast<std::size_t>(id)];
            if (n.back) n.back(*this, static_cast<NodeId>(id));
        }
    }

    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Matrix val;
        Matrix grad;
        std::function<void(Tape&, NodeId)> back;
    };

    NodeId push(Matrix v, std::function<void(Tape&, NodeId)> back) {
        nodes_.push_back(Node{std::move(v), Matrix(), std::move(back)});
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    static void accumulate(Matrix& into, const Matrix& g) {
        for (std::size_t i = 0; i < into.size(); ++i) into.raw()[i] += g.raw()[i];
    }

    std::vector<Node> nodes_;
    std::map<const Param*, NodeId> leaf_cache_;
};

}  // namespace feedsynth
