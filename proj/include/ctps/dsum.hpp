#pragma once

#include <optional>

#include "ctps/trees.hpp"

namespace ctps {

/// Formal finite direct sum of words.
struct DsObject {
    std::vector<Word> summands;

    bool operator==(const DsObject& o) const { return summands == o.summands; }
    int size() const { return static_cast<int>(summands.size()); }
};

inline DsObject ds_unit() { return DsObject{{Word{}}}; }

inline DsObject ds_tensor(const DsObject& a, const DsObject& b) {
    DsObject out;
    for (const auto& wa : a.summands)
        for (const auto& wb : b.summands) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            out.summands.push_back(std::move(w));
        }
    return out;
}

/// Morphism between direct sums, stored as a block matrix of tree-basis
/// morphisms. Absent blocks are zero.
struct DsMorphism {
    DsObject src, tgt;
    std::vector<std::vector<std::optional<Morphism>>> blk;  // [tgt_i][src_j]

    static DsMorphism zero(DsObject s, DsObject t) {
        DsMorphism m{std::move(s), std::move(t), {}};
        m.blk.assign(m.tgt.size(), std::vector<std::optional<Morphism>>(m.src.size()));
        return m;
    }
};

class DsContext {
public:
    explicit DsContext(const TreeContext& ctx) : ctx_(&ctx) {}

    const TreeContext& trees() const { return *ctx_; }

    DsMorphism identity(const DsObject& o) const {
        DsMorphism m = DsMorphism::zero(o, o);
        for (int i = 0; i < o.size(); ++i) m.blk[i][i] = ctx_->identity(o.summands[i]);
        return m;
    }

    DsMorphism compose(const DsMorphism& a, const DsMorphism& b) const {
        if (!(a.src == b.tgt)) throw StructuralError("direct-sum composition mismatch");
        DsMorphism m = DsMorphism::zero(b.src, a.tgt);
        for (int i = 0; i < a.tgt.size(); ++i)
            for (int j = 0; j < b.src.size(); ++j) {
                std::optional<Morphism> acc;
                for (int k = 0; k < a.src.size(); ++k) {
                    if (!a.blk[i][k] || !b.blk[k][j]) continue;
                    Morphism term = ctx_->compose(*a.blk[i][k], *b.blk[k][j]);
                    acc = acc ? TreeContext::add(*acc, term) : std::move(term);
                }
                m.blk[i][j] = std::move(acc);
            }
        return m;
    }

    DsMorphism adjoint(const DsMorphism& x) const {
        DsMorphism m = DsMorphism::zero(x.tgt, x.src);
        for (int i = 0; i < x.tgt.size(); ++i)
            for (int j = 0; j < x.src.size(); ++j)
                if (x.blk[i][j]) m.blk[j][i] = ctx_->adjoint(*x.blk[i][j]);
        return m;
    }

    static DsMorphism scale(DsMorphism x, Complex s) {
        for (auto& row : x.blk)
            for (auto& b : row)
                if (b) b = TreeContext::scale(*b, s);
        return x;
    }

    static DsMorphism add(const DsMorphism& a, const DsMorphism& b) {
        if (!(a.src == b.src) || !(a.tgt == b.tgt)) throw StructuralError("direct-sum add mismatch");
        DsMorphism m = a;
        for (size_t i = 0; i < m.blk.size(); ++i)
            for (size_t j = 0; j < m.blk[i].size(); ++j) {
                if (!b.blk[i][j]) continue;
                m.blk[i][j] = m.blk[i][j] ? TreeContext::add(*m.blk[i][j], *b.blk[i][j]) : b.blk[i][j];
            }
        return m;
    }

    DsMorphism tensor(const DsMorphism& x, const DsMorphism& y) const {
        DsMorphism m = DsMorphism::zero(ds_tensor(x.src, y.src), ds_tensor(x.tgt, y.tgt));
        for (int i1 = 0; i1 < x.tgt.size(); ++i1)
            for (int j1 = 0; j1 < x.src.size(); ++j1) {
                if (!x.blk[i1][j1]) continue;
                for (int i2 = 0; i2 < y.tgt.size(); ++i2)
                    for (int j2 = 0; j2 < y.src.size(); ++j2) {
                        if (!y.blk[i2][j2]) continue;
                        m.blk[i1 * y.tgt.size() + i2][j1 * y.src.size() + j2] =
                            ctx_->tensor(*x.blk[i1][j1], *y.blk[i2][j2]);
                    }
            }
        return m;
    }

    static double distance(const DsMorphism& a, const DsMorphism& b) {
        if (!(a.src == b.src) || !(a.tgt == b.tgt))
            throw StructuralError("direct-sum distance mismatch");
        double w = 0;
        for (size_t i = 0; i < a.blk.size(); ++i)
            for (size_t j = 0; j < a.blk[i].size(); ++j) {
                const auto& x = a.blk[i][j];
                const auto& y = b.blk[i][j];
                if (x && y)
                    w = std::max(w, TreeContext::distance(*x, *y));
                else if (x)
                    w = std::max(w, TreeContext::norm_inf(*x));
                else if (y)
                    w = std::max(w, TreeContext::norm_inf(*y));
            }
        return w;
    }

    static double norm_inf(const DsMorphism& a) {
        double w = 0;
        for (const auto& row : a.blk)
            for (const auto& b : row)
                if (b) w = std::max(w, TreeContext::norm_inf(*b));
        return w;
    }

    /// Categorical trace of a direct-sum endomorphism.
    Complex trace_cat(const DsMorphism& x) const {
        if (!(x.src == x.tgt)) throw StructuralError("trace of non-endomorphism");
        Complex acc = 0;
        for (int i = 0; i < x.src.size(); ++i)
            if (x.blk[i][i]) acc += ctx_->trace_cat(*x.blk[i][i]);
        return acc;
    }

    /// Stacks every block coefficient into one vector (deterministic order).
    VectorXcd flatten(const DsMorphism& x) const {
        std::vector<Complex> out;
        for (int i = 0; i < x.tgt.size(); ++i)
            for (int j = 0; j < x.src.size(); ++j) {
                int len = 0;
                for (LabelId r = 0; r < ctx_->ring().size(); ++r)
                    len += ctx_->tree_count(x.src.summands[j], r) *
                           ctx_->tree_count(x.tgt.summands[i], r);
                if (x.blk[i][j]) {
                    VectorXcd v = ctx_->flatten(*x.blk[i][j]);
                    for (int t = 0; t < v.size(); ++t) out.push_back(v[t]);
                } else {
                    for (int t = 0; t < len; ++t) out.push_back(0.0);
                }
            }
        return Eigen::Map<VectorXcd>(out.data(), out.size());
    }

private:
    const TreeContext* ctx_;
};

}  // namespace ctps
