#pragma once

#include <map>
#include <tuple>

#include "ctps/skeletal.hpp"

namespace ctps {

/// A product of simple sectors, as an ordered list of labels. The empty word
/// is the monoidal unit. Unit letters are allowed and act trivially in the
/// fixed gauge.
using Word = std::vector<LabelId>;

/// A fusion tree over a word, stored as the chain of intermediate channels
/// x_1 = w_0, x_2 in x_1 w_1, ..., x_m = root (left-associated).
using TreePath = std::vector<LabelId>;

/// A morphism between two words, stored blockwise over the common root:
/// blocks[rho] has one row per tree of Hom(rho, tgt) and one column per tree
/// of Hom(rho, src).
struct Morphism {
    Word src, tgt;
    std::vector<MatrixXcd> blocks;
};

/// Graphical-calculus engine over fixed skeletal data: tree bases, tensor
/// products, braidings, standard cups/caps, left/right inverses and the
/// categorical trace. All operations are pure; caches are per-instance and
/// not synchronized, so use one context per thread.
class TreeContext {
public:
    explicit TreeContext(const SkeletalData& data) : sd_(&data) {
        const FusionRing& ring = data.ring();
        for (LabelId a = 0; a < ring.size(); ++a)
            for (LabelId b = 0; b < ring.size(); ++b)
                for (LabelId c = 0; c < ring.size(); ++c)
                    if (ring.N(a, b, c) > 1)
                        throw StructuralError("tree calculus requires a multiplicity-free ring");
        cups_ = standard_solutions(data);
    }

    const SkeletalData& data() const { return *sd_; }
    const FusionRing& ring() const { return sd_->ring(); }
    const StandardPair& cup_pair(LabelId l) const { return cups_.at(l); }

    const std::vector<TreePath>& trees(const Word& w, LabelId root) const {
        auto key = std::make_pair(w, root);
        auto it = tree_cache_.find(key);
        if (it != tree_cache_.end()) return it->second;
        std::vector<TreePath> out;
        if (w.empty()) {
            if (root == 0) out.push_back({});
        } else if (w.size() == 1) {
            if (w[0] == root) out.push_back({root});
        } else {
            Word prefix(w.begin(), w.end() - 1);
            LabelId last = w.back();
            for (LabelId x = 0; x < ring().size(); ++x) {
                if (!ring().admissible(x, last, root)) continue;
                for (const auto& t : trees(prefix, x)) {
                    TreePath p = t;
                    p.push_back(root);
                    out.push_back(std::move(p));
                }
            }
        }
        return tree_cache_.emplace(std::move(key), std::move(out)).first->second;
    }

    int tree_count(const Word& w, LabelId root) const {
        return static_cast<int>(trees(w, root).size());
    }

    int tree_index(const Word& w, LabelId root, const TreePath& p) const {
        const auto& list = trees(w, root);
        for (size_t i = 0; i < list.size(); ++i)
            if (list[i] == p) return static_cast<int>(i);
        throw StructuralError("tree path not found");
    }

    int hom_dim(const Word& src, const Word& tgt) const {
        int d = 0;
        for (LabelId r = 0; r < ring().size(); ++r) d += tree_count(src, r) * tree_count(tgt, r);
        return d;
    }

    // ---- basic morphism algebra -------------------------------------------

    Morphism zero(const Word& src, const Word& tgt) const {
        Morphism m{src, tgt, {}};
        m.blocks.resize(ring().size());
        for (LabelId r = 0; r < ring().size(); ++r)
            m.blocks[r] = MatrixXcd::Zero(tree_count(tgt, r), tree_count(src, r));
        return m;
    }

    Morphism identity(const Word& w) const {
        Morphism m = zero(w, w);
        for (auto& b : m.blocks) b.setIdentity(b.rows(), b.cols());
        return m;
    }

    /// T^{ab}_c as a morphism (c) -> (a, b).
    Morphism elem_tree(LabelId a, LabelId b, LabelId c) const {
        if (!ring().admissible(a, b, c)) throw StructuralError("inadmissible splitting tree");
        Morphism m = zero({c}, {a, b});
        m.blocks[c](0, 0) = 1.0;
        return m;
    }

    Morphism compose(const Morphism& a, const Morphism& b) const {
        if (a.src != b.tgt) throw StructuralError("composition word mismatch");
        Morphism m{b.src, a.tgt, {}};
        m.blocks.resize(ring().size());
        for (LabelId r = 0; r < ring().size(); ++r) m.blocks[r] = a.blocks[r] * b.blocks[r];
        return m;
    }

    Morphism adjoint(const Morphism& x) const {
        Morphism m{x.tgt, x.src, {}};
        m.blocks.resize(ring().size());
        for (LabelId r = 0; r < ring().size(); ++r) m.blocks[r] = x.blocks[r].adjoint();
        return m;
    }

    static Morphism add(const Morphism& a, const Morphism& b) {
        if (a.src != b.src || a.tgt != b.tgt) throw StructuralError("addition word mismatch");
        Morphism m = a;
        for (size_t r = 0; r < m.blocks.size(); ++r) m.blocks[r] += b.blocks[r];
        return m;
    }

    static Morphism scale(const Morphism& a, Complex s) {
        Morphism m = a;
        for (auto& b : m.blocks) b *= s;
        return m;
    }

    static double norm_inf(const Morphism& a) {
        double w = 0;
        for (const auto& b : a.blocks)
            if (b.size() > 0) w = std::max(w, b.cwiseAbs().maxCoeff());
        return w;
    }

    static double distance(const Morphism& a, const Morphism& b) {
        if (a.src != b.src || a.tgt != b.tgt) throw StructuralError("distance word mismatch");
        double w = 0;
        for (size_t r = 0; r < a.blocks.size(); ++r)
            if (a.blocks[r].size() > 0)
                w = std::max(w, (a.blocks[r] - b.blocks[r]).cwiseAbs().maxCoeff());
        return w;
    }

    /// Categorical trace sum_rho d(rho) tr(block_rho) of an endomorphism.
    Complex trace_cat(const Morphism& x) const {
        if (x.src != x.tgt) throw StructuralError("trace of a non-endomorphism");
        Complex acc = 0;
        for (LabelId r = 0; r < ring().size(); ++r)
            if (x.blocks[r].size() > 0) acc += ring().dim(r) * x.blocks[r].trace();
        return acc;
    }

    /// Frobenius pairing sum_rho tr(x_rho^dagger y_rho) in the tree basis.
    static Complex pair_frob(const Morphism& x, const Morphism& y) {
        Complex acc = 0;
        for (size_t r = 0; r < x.blocks.size(); ++r)
            if (x.blocks[r].size() > 0) acc += (x.blocks[r].adjoint() * y.blocks[r]).trace();
        return acc;
    }

    VectorXcd flatten(const Morphism& x) const {
        int total = 0;
        for (const auto& b : x.blocks) total += static_cast<int>(b.size());
        VectorXcd v(total);
        int at = 0;
        for (const auto& b : x.blocks) {
            if (b.size() == 0) continue;
            v.segment(at, b.size()) = Eigen::Map<const VectorXcd>(b.data(), b.size());
            at += static_cast<int>(b.size());
        }
        return v;
    }

    // ---- tensor structure --------------------------------------------------

    /// x tensor 1_c for a single letter c: block-sparse reindexing, no F data.
    Morphism tensor_right1(const Morphism& x, LabelId c) const {
        Word src = x.src, tgt = x.tgt;
        src.push_back(c);
        tgt.push_back(c);
        Morphism m = zero(src, tgt);
        for (LabelId nu = 0; nu < ring().size(); ++nu) {
            const auto& rows = trees(tgt, nu);
            const auto& cols = trees(src, nu);
            for (size_t i = 0; i < rows.size(); ++i) {
                LabelId xr = rows[i].size() >= 2 ? rows[i][rows[i].size() - 2]
                                                 : (x.tgt.empty() ? 0 : x.tgt[0]);
                TreePath ti(rows[i].begin(), rows[i].end() - 1);
                int it_ = tree_index(x.tgt, xr, ti);
                for (size_t j = 0; j < cols.size(); ++j) {
                    LabelId xc = cols[j].size() >= 2 ? cols[j][cols[j].size() - 2]
                                                     : (x.src.empty() ? 0 : x.src[0]);
                    if (xr != xc) continue;
                    TreePath sj(cols[j].begin(), cols[j].end() - 1);
                    m.blocks[nu](i, j) = x.blocks[xr](it_, tree_index(x.src, xc, sj));
                }
            }
        }
        return m;
    }

    /// Change of basis between grafted trees (1_a x T^u_{rho,s}) T^{a rho}_nu
    /// and the standard trees of Hom(nu, a+u). Unitary whenever the F-blocks
    /// are.
    struct LiftBasis {
        std::vector<std::pair<LabelId, int>> cols;  // (rho, tree index over u)
        std::map<std::pair<LabelId, int>, int> col_index;
        MatrixXcd m;  // rows: standard trees of a+u at root nu
    };

    const LiftBasis& lift(LabelId a, const Word& u, LabelId nu) const {
        auto key = std::make_tuple(a, u, nu);
        auto it = lift_cache_.find(key);
        if (it != lift_cache_.end()) return it->second;

        LiftBasis lb;
        for (LabelId rho = 0; rho < ring().size(); ++rho) {
            if (!ring().admissible(a, rho, nu)) continue;
            for (int s = 0; s < tree_count(u, rho); ++s) {
                lb.col_index[{rho, s}] = static_cast<int>(lb.cols.size());
                lb.cols.push_back({rho, s});
            }
        }
        Word au;
        au.push_back(a);
        au.insert(au.end(), u.begin(), u.end());
        lb.m = MatrixXcd::Zero(tree_count(au, nu), lb.cols.size());

        if (u.empty()) {
            if (nu == a && !lb.cols.empty()) lb.m(0, 0) = 1.0;
        } else if (u.size() == 1) {
            for (size_t j = 0; j < lb.cols.size(); ++j) lb.m(0, j) = 1.0;  // single tree each side
        } else {
            Word uprefix(u.begin(), u.end() - 1);
            LabelId c = u.back();
            const auto& row_trees = trees(au, nu);
            Word auprefix(au.begin(), au.end() - 1);
            for (size_t j = 0; j < lb.cols.size(); ++j) {
                auto [rho, s] = lb.cols[j];
                const TreePath& spath = trees(u, rho)[s];
                LabelId x = spath[spath.size() - 2];
                TreePath sprefix(spath.begin(), spath.end() - 1);
                int sp = tree_index(uprefix, x, sprefix);
                for (LabelId e = 0; e < ring().size(); ++e) {
                    if (!ring().admissible(a, x, e) || !ring().admissible(e, c, nu)) continue;
                    Complex coef = std::conj(sd_->F(a, x, c, nu, e, rho));
                    const LiftBasis& sub = lift(a, uprefix, e);
                    auto cit = sub.col_index.find({x, sp});
                    if (cit == sub.col_index.end()) continue;
                    const auto& sub_rows = trees(auprefix, e);
                    for (size_t q = 0; q < sub_rows.size(); ++q) {
                        Complex v = sub.m(q, cit->second);
                        if (v == Complex(0.0, 0.0)) continue;
                        TreePath full = sub_rows[q];
                        full.push_back(nu);
                        // row index: prefix trees at root e are contiguous in
                        // enumeration order, but look up defensively
                        int ri = -1;
                        for (size_t r = 0; r < row_trees.size(); ++r)
                            if (row_trees[r] == full) {
                                ri = static_cast<int>(r);
                                break;
                            }
                        if (ri < 0) throw StructuralError("lift: tree bookkeeping failure");
                        lb.m(ri, j) += coef * v;
                    }
                }
            }
        }
        return lift_cache_.emplace(std::move(key), std::move(lb)).first->second;
    }

    /// 1_a tensor x for a single letter a, via the lift change of basis.
    Morphism tensor_left1(LabelId a, const Morphism& x) const {
        Word src, tgt;
        src.push_back(a);
        src.insert(src.end(), x.src.begin(), x.src.end());
        tgt.push_back(a);
        tgt.insert(tgt.end(), x.tgt.begin(), x.tgt.end());
        Morphism m = zero(src, tgt);
        for (LabelId nu = 0; nu < ring().size(); ++nu) {
            if (m.blocks[nu].size() == 0) continue;
            const LiftBasis& lw = lift(a, x.tgt, nu);
            const LiftBasis& lu = lift(a, x.src, nu);
            MatrixXcd mid = MatrixXcd::Zero(lw.cols.size(), lu.cols.size());
            for (size_t i = 0; i < lw.cols.size(); ++i)
                for (size_t j = 0; j < lu.cols.size(); ++j) {
                    auto [rt, ti] = lw.cols[i];
                    auto [rs, sj] = lu.cols[j];
                    if (rt == rs) mid(i, j) = x.blocks[rt](ti, sj);
                }
            m.blocks[nu] = lw.m * mid * lu.m.adjoint();
        }
        return m;
    }

    Morphism tensor_left_word(const Word& a, Morphism x) const {
        for (auto it = a.rbegin(); it != a.rend(); ++it) x = tensor_left1(*it, x);
        return x;
    }

    Morphism tensor_right_word(Morphism x, const Word& b) const {
        for (LabelId c : b) x = tensor_right1(x, c);
        return x;
    }

    Morphism tensor(const Morphism& x, const Morphism& y) const {
        return compose(tensor_right_word(x, y.tgt), tensor_left_word(x.src, y));
    }

    // ---- braiding, duality, inverses ---------------------------------------

    /// eps(u, v) in Hom(uv, vu); sign selects the braiding or its opposite.
    Morphism braiding(const Word& u, const Word& v, int sign) const {
        auto key = std::make_tuple(u, v, sign);
        auto it = braid_cache_.find(key);
        if (it != braid_cache_.end()) return it->second;
        Morphism out = braiding_impl(u, v, sign);
        braid_cache_.emplace(std::move(key), out);
        return out;
    }

    /// R_l in Hom(id, dual(l) l); an isometry in the fixed normalization.
    Morphism cup(LabelId l) const {
        LabelId lb = ring().dual(l);
        Morphism m = zero({}, {lb, l});
        m.blocks[0](0, 0) = cups_[l].r;
        return m;
    }

    /// Rbar_l in Hom(id, l dual(l)).
    Morphism cocup(LabelId l) const {
        LabelId lb = ring().dual(l);
        Morphism m = zero({}, {l, lb});
        m.blocks[0](0, 0) = cups_[l].rbar;
        return m;
    }

    /// Standard left inverse Phi_l closing the leftmost strand:
    /// Hom(l rho, l tau) -> Hom(rho, tau), normalized so Phi_l(1) = 1.
    Morphism left_inverse(const Morphism& x) const {
        if (x.src.empty() || x.tgt.empty() || x.src[0] != x.tgt[0])
            throw StructuralError("left inverse needs a common leftmost strand");
        LabelId l = x.src[0];
        LabelId lb = ring().dual(l);
        Word rho(x.src.begin() + 1, x.src.end());
        Word tau(x.tgt.begin() + 1, x.tgt.end());
        Morphism lift_in = tensor_right_word(cup(l), rho);              // rho -> lb l rho
        Morphism mid = tensor_left1(lb, x);                             // lb l rho -> lb l tau
        Morphism lift_out = tensor_right_word(adjoint(cup(l)), tau);    // lb l tau -> tau
        return compose(lift_out, compose(mid, lift_in));
    }

    /// Standard right inverse Psi_l closing the rightmost strand.
    Morphism right_inverse(const Morphism& x) const {
        if (x.src.empty() || x.tgt.empty() || x.src.back() != x.tgt.back())
            throw StructuralError("right inverse needs a common rightmost strand");
        LabelId l = x.src.back();
        Word rho(x.src.begin(), x.src.end() - 1);
        Word tau(x.tgt.begin(), x.tgt.end() - 1);
        Morphism lift_in = tensor_left_word(rho, cocup(l));             // rho -> rho l lb
        Morphism mid = tensor_right1(x, ring().dual(l));                // rho l lb -> tau l lb
        Morphism lift_out = tensor_left_word(tau, adjoint(cocup(l)));   // tau l lb -> tau
        return compose(lift_out, compose(mid, lift_in));
    }

private:
    Morphism braiding_impl(const Word& u, const Word& v, int sign) const {
        if (u.empty()) return identity(v);
        if (v.empty()) return identity(u);
        if (u.size() == 1 && v.size() == 1) {
            LabelId a = u[0], b = v[0];
            Morphism m = zero({a, b}, {b, a});
            for (LabelId c = 0; c < ring().size(); ++c)
                if (ring().admissible(a, b, c)) m.blocks[c](0, 0) = sd_->R_signed(a, b, c, sign);
            return m;
        }
        if (u.size() == 1) {
            // eps(a, b v') = (1_b x eps(a, v')) (eps(a, b) x 1_{v'})
            LabelId a = u[0], b = v[0];
            Word vrest(v.begin() + 1, v.end());
            Morphism first = tensor_right_word(braiding({a}, {b}, sign), vrest);
            Morphism second = tensor_left1(b, braiding({a}, vrest, sign));
            return compose(second, first);
        }
        // eps(a u', v) = (eps(a, v) x 1_{u'}) (1_a x eps(u', v))
        LabelId a = u[0];
        Word urest(u.begin() + 1, u.end());
        Morphism first = tensor_left1(a, braiding(urest, v, sign));
        Morphism second = tensor_right_word(braiding({a}, v, sign), urest);
        return compose(second, first);
    }

    const SkeletalData* sd_;
    std::vector<StandardPair> cups_;
    mutable std::map<std::pair<Word, LabelId>, std::vector<TreePath>> tree_cache_;
    mutable std::map<std::tuple<LabelId, Word, LabelId>, LiftBasis> lift_cache_;
    mutable std::map<std::tuple<Word, Word, int>, Morphism> braid_cache_;
};

/// Unitary relating the standard (left) trees (T_e x 1_kappa) T_f of
/// Hom(nu, lambda mu kappa) to the right trees (1_lambda x T_g) T_h.
/// Rows are indexed by the intermediate channel of the left tree, columns by
/// the right one.
struct RecoupleFusion {
    std::vector<LabelId> rows, cols;
    MatrixXcd m;
};

inline RecoupleFusion recouple_fusion(const TreeContext& ctx, LabelId lambda, LabelId mu,
                                      LabelId kappa, LabelId nu) {
    const FusionRing& ring = ctx.ring();
    RecoupleFusion out;
    Word w = {lambda, mu, kappa};
    for (LabelId e = 0; e < ring.size(); ++e)
        if (ring.admissible(lambda, mu, e) && ring.admissible(e, kappa, nu)) out.rows.push_back(e);
    for (LabelId g = 0; g < ring.size(); ++g)
        if (ring.admissible(mu, kappa, g) && ring.admissible(lambda, g, nu)) out.cols.push_back(g);
    out.m = MatrixXcd::Zero(out.rows.size(), out.cols.size());
    for (size_t j = 0; j < out.cols.size(); ++j) {
        LabelId g = out.cols[j];
        Morphism right = ctx.compose(ctx.tensor_left1(lambda, ctx.elem_tree(mu, kappa, g)),
                                     ctx.elem_tree(lambda, g, nu));
        // right is supported on single-entry standard trees (lambda, e, nu)
        for (size_t i = 0; i < out.rows.size(); ++i) {
            TreePath p = {lambda, out.rows[i], nu};
            out.m(i, j) = right.blocks[nu](ctx.tree_index(w, nu, p), 0);
        }
    }
    return out;
}

/// Unitary of the second recoupling: relates the dressed bases
/// sqrt(d(mu)/d(sigma)) T_e T_f^* and sqrt(d(tau)/d(nu)) (1 x T_g^*)(T_h x 1)
/// of Hom(nu kappa, lambda mu). Rows indexed by sigma, columns by tau.
struct RecoupleFrobenius {
    std::vector<LabelId> rows, cols;
    MatrixXcd m;         // dressed, unitary
    MatrixXcd raw;       // undressed coefficients G with X2_tau = sum G_{sigma tau} X1_sigma
};

inline RecoupleFrobenius recouple_frobenius(const TreeContext& ctx, LabelId nu, LabelId kappa,
                                            LabelId lambda, LabelId mu) {
    const FusionRing& ring = ctx.ring();
    RecoupleFrobenius out;
    for (LabelId s = 0; s < ring.size(); ++s)
        if (ring.admissible(lambda, mu, s) && ring.admissible(nu, kappa, s)) out.rows.push_back(s);
    for (LabelId t = 0; t < ring.size(); ++t)
        if (ring.admissible(lambda, t, nu) && ring.admissible(t, kappa, mu)) out.cols.push_back(t);
    out.m = MatrixXcd::Zero(out.rows.size(), out.cols.size());
    out.raw = MatrixXcd::Zero(out.rows.size(), out.cols.size());
    for (size_t j = 0; j < out.cols.size(); ++j) {
        LabelId tau = out.cols[j];
        Morphism x2 = ctx.compose(ctx.tensor_left1(lambda, ctx.adjoint(ctx.elem_tree(tau, kappa, mu))),
                                  ctx.tensor_right1(ctx.elem_tree(lambda, tau, nu), kappa));
        for (size_t i = 0; i < out.rows.size(); ++i) {
            LabelId sigma = out.rows[i];
            // X1_sigma is the single matrix unit at root sigma
            Complex g = x2.blocks[sigma].size() > 0 ? x2.blocks[sigma](0, 0) : Complex(0, 0);
            out.raw(i, j) = g;
            out.m(i, j) = g * std::sqrt(ring.dim(tau) / ring.dim(nu)) *
                          std::sqrt(ring.dim(sigma) / ring.dim(mu));
        }
    }
    return out;
}

}  // namespace ctps
