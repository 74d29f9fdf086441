#pragma once

#include <random>

#include "ctps/qsystem.hpp"

namespace ctps {

/// An alpha-induced bimodule: underlying object theta (x) word, left action
/// by the Q-system multiplication, right action by multiplication after
/// braiding the incoming theta summand past the word (over for +, under
/// for -).
struct InducedBimodule {
    Word word;
    int sign = +1;
    DsObject object;
    DsMorphism left;   // theta (x) U -> U
    DsMorphism right;  // U (x) theta -> U
};

namespace idetail {

/// Multiplication block sqrt(d(theta)) conj(c^n_{ij}) T^*_{ij;n}.
inline Morphism mult_block(const QSystem& q, const TreeContext& ctx, int i, int j, int n) {
    return TreeContext::scale(
        ctx.adjoint(ctx.elem_tree(q.theta[i], q.theta[j], q.theta[n])),
        std::sqrt(q.dtheta) * std::conj(q.mult(i, j, n)));
}

}  // namespace idetail

inline InducedBimodule alpha_bimodule(const QSystem& q, const DsContext& ds, const Word& word,
                                      int sign) {
    const TreeContext& ctx = ds.trees();
    const FusionRing& ring = ctx.ring();
    const int s = q.summands();

    InducedBimodule bim;
    bim.word = word;
    bim.sign = sign;
    for (int n = 0; n < s; ++n) {
        Word w{q.theta[n]};
        w.insert(w.end(), word.begin(), word.end());
        bim.object.summands.push_back(std::move(w));
    }

    DsObject th = theta_object(q);
    bim.left = DsMorphism::zero(ds_tensor(th, bim.object), bim.object);
    bim.right = DsMorphism::zero(ds_tensor(bim.object, th), bim.object);
    for (int n = 0; n < s; ++n)
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                if (!ring.admissible(q.theta[i], q.theta[j], q.theta[n])) continue;
                Morphism m = idetail::mult_block(q, ctx, i, j, n);
                bim.left.blk[n][i * s + j] = ctx.tensor_right_word(m, word);
                // right action: braid the incoming summand j over/under the word
                Morphism cross = ctx.tensor_left1(
                    q.theta[i], ctx.braiding(word, {q.theta[j]}, sign));
                bim.right.blk[n][i * s + j] =
                    ctx.compose(ctx.tensor_right_word(m, word), cross);
            }
    return bim;
}

/// Unit, associativity and left/right commutation residual of a bimodule.
inline double bimodule_axiom_residual(const QSystem& q, const DsContext& ds,
                                      const InducedBimodule& bim) {
    DsObject th = theta_object(q);
    DsMorphism idu = ds.identity(bim.object);
    DsMorphism idth = ds.identity(th);
    DsMorphism w = w_morphism(q, ds);
    DsMorphism w1 = w1_morphism(q, ds);
    DsMorphism mult = DsContext::scale(ds.adjoint(w1), std::sqrt(q.dtheta));

    double worst = 0;
    worst = std::max(worst, DsContext::distance(ds.compose(bim.left, ds.tensor(w, idu)), idu));
    worst = std::max(worst, DsContext::distance(ds.compose(bim.right, ds.tensor(idu, w)), idu));
    // associativity over the algebra
    worst = std::max(worst,
                     DsContext::distance(ds.compose(bim.left, ds.tensor(mult, idu)),
                                         ds.compose(bim.left, ds.tensor(idth, bim.left))));
    worst = std::max(worst,
                     DsContext::distance(ds.compose(bim.right, ds.tensor(bim.right, idth)),
                                         ds.compose(bim.right, ds.tensor(idu, mult))));
    // left and right actions commute
    worst = std::max(worst,
                     DsContext::distance(ds.compose(bim.right, ds.tensor(bim.left, idth)),
                                         ds.compose(bim.left, ds.tensor(idth, bim.right))));
    return worst;
}

/// Per-root matrix picture of a direct-sum morphism; rows and columns run
/// over (summand, tree) pairs in summand-major order.
inline MatrixXcd ds_root_matrix(const DsContext& ds, const DsMorphism& x, LabelId rho) {
    const TreeContext& ctx = ds.trees();
    int rows = 0, cols = 0;
    std::vector<int> roff(x.tgt.size() + 1, 0), coff(x.src.size() + 1, 0);
    for (int i = 0; i < x.tgt.size(); ++i)
        roff[i + 1] = rows += ctx.tree_count(x.tgt.summands[i], rho);
    for (int j = 0; j < x.src.size(); ++j)
        coff[j + 1] = cols += ctx.tree_count(x.src.summands[j], rho);
    MatrixXcd m = MatrixXcd::Zero(rows, cols);
    for (int i = 0; i < x.tgt.size(); ++i)
        for (int j = 0; j < x.src.size(); ++j) {
            if (!x.blk[i][j]) continue;
            const MatrixXcd& b = x.blk[i][j]->blocks[rho];
            if (b.size() > 0) m.block(roff[i], coff[j], b.rows(), b.cols()) = b;
        }
    return m;
}

inline void ds_set_root_matrix(const DsContext& ds, DsMorphism& x, LabelId rho,
                               const MatrixXcd& m) {
    const TreeContext& ctx = ds.trees();
    int r0 = 0;
    for (int i = 0; i < x.tgt.size(); ++i) {
        int nr = ctx.tree_count(x.tgt.summands[i], rho);
        int c0 = 0;
        for (int j = 0; j < x.src.size(); ++j) {
            int nc = ctx.tree_count(x.src.summands[j], rho);
            if (nr > 0 && nc > 0) {
                if (!x.blk[i][j]) x.blk[i][j] = ctx.zero(x.src.summands[j], x.tgt.summands[i]);
                x.blk[i][j]->blocks[rho] = m.block(r0, c0, nr, nc);
            }
            c0 += nc;
        }
        r0 += nr;
    }
}

/// Orthonormal basis of Hom(alpha^{s1}_src, alpha^{s2}_tgt) as bimodule maps,
/// with the induced-left-inverse scalar product. Dimension decisions are
/// certified by the singular-value gap.
struct HomBasis {
    Word src_word, tgt_word;
    int s1 = +1, s2 = -1;
    std::vector<DsMorphism> vecs;
    double cert_ratio = std::numeric_limits<double>::infinity();
    double gram_residual = 0.0;  // deviation from identity after orthonormalization

    int dim() const { return static_cast<int>(vecs.size()); }
};

/// Scalar product (phi, psi) = Phi^1(phi* psi) = Tr_C(phi* psi)/(d(src) d(theta)).
inline Complex hom_inner(const QSystem& q, const DsContext& ds, const InducedBimodule& srcbim,
                         const DsMorphism& a, const DsMorphism& b) {
    double dsrc = 1.0;
    for (LabelId l : srcbim.word) dsrc *= ds.trees().ring().dim(l);
    return ds.trace_cat(ds.compose(ds.adjoint(a), b)) / (dsrc * q.dtheta);
}

inline HomBasis hom_alpha(const QSystem& q, const DsContext& ds, const InducedBimodule& x,
                          const InducedBimodule& y, const Thresholds& thr = {}) {
    const TreeContext& ctx = ds.trees();
    const FusionRing& ring = ctx.ring();
    const int s = q.summands();
    DsObject th = theta_object(q);

    // unknowns: one scalar per (target summand m, source summand n, root rho)
    struct Slot {
        int m, n;
        LabelId rho;
    };
    std::vector<Slot> slots;
    for (int m = 0; m < s; ++m)
        for (int n = 0; n < s; ++n)
            for (LabelId rho = 0; rho < ring.size(); ++rho) {
                int tr = ctx.tree_count(y.object.summands[m], rho);
                int sc = ctx.tree_count(x.object.summands[n], rho);
                if (tr == 0 || sc == 0) continue;
                if (tr != 1 || sc != 1)
                    throw StructuralError("hom_alpha expects single-letter induced sectors");
                slots.push_back({m, n, rho});
            }

    auto assemble = [&](const VectorXcd& coef) {
        DsMorphism t = DsMorphism::zero(x.object, y.object);
        for (size_t u = 0; u < slots.size(); ++u) {
            const Slot& sl = slots[u];
            if (!t.blk[sl.m][sl.n])
                t.blk[sl.m][sl.n] = ctx.zero(x.object.summands[sl.n], y.object.summands[sl.m]);
            t.blk[sl.m][sl.n]->blocks[sl.rho](0, 0) = coef[u];
        }
        return t;
    };

    HomBasis hb;
    hb.src_word = x.word;
    hb.tgt_word = y.word;
    hb.s1 = x.sign;
    hb.s2 = y.sign;
    if (slots.empty()) return hb;

    DsMorphism idth = ds.identity(th);
    std::vector<VectorXcd> columns;
    for (size_t u = 0; u < slots.size(); ++u) {
        VectorXcd e = VectorXcd::Zero(slots.size());
        e[u] = 1.0;
        DsMorphism t = assemble(e);
        DsMorphism c1 = DsContext::add(
            ds.compose(t, x.left), DsContext::scale(ds.compose(y.left, ds.tensor(idth, t)), -1.0));
        DsMorphism c2 = DsContext::add(
            ds.compose(t, x.right), DsContext::scale(ds.compose(y.right, ds.tensor(t, idth)), -1.0));
        VectorXcd v1 = ds.flatten(c1), v2 = ds.flatten(c2);
        VectorXcd v(v1.size() + v2.size());
        v << v1, v2;
        columns.push_back(std::move(v));
    }
    MatrixXcd constraint(columns[0].size(), slots.size());
    for (size_t u = 0; u < slots.size(); ++u) constraint.col(u) = columns[u];

    Eigen::JacobiSVD<MatrixXcd> svd(constraint, Eigen::ComputeFullV);
    VectorXd sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv[0] : 0.0;
    double zero_tol = 1e-7 * std::max(1.0, smax);
    int nullity = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] <= zero_tol) ++nullity;
    if (nullity > 0 && nullity < sv.size()) {
        double smallest_kept = sv[sv.size() - nullity - 1];
        double largest_zero = sv[sv.size() - nullity];
        hb.cert_ratio = largest_zero > 0 ? smallest_kept / largest_zero
                                         : std::numeric_limits<double>::infinity();
        if (hb.cert_ratio < thr.cert_gap)
            throw CertificationError("uncertified Hom dimension: singular-value gap " +
                                     std::to_string(hb.cert_ratio));
    }

    for (int i = 0; i < nullity; ++i)
        hb.vecs.push_back(assemble(svd.matrixV().col(sv.size() - nullity + i)));

    // orthonormalize in the induced-left-inverse inner product
    for (size_t i = 0; i < hb.vecs.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            Complex ov = hom_inner(q, ds, x, hb.vecs[j], hb.vecs[i]);
            hb.vecs[i] = DsContext::add(hb.vecs[i], DsContext::scale(hb.vecs[j], -ov));
        }
        double nrm = std::sqrt(hom_inner(q, ds, x, hb.vecs[i], hb.vecs[i]).real());
        if (nrm < 1e-12) throw CertificationError("degenerate Hom basis vector");
        hb.vecs[i] = DsContext::scale(hb.vecs[i], 1.0 / nrm);
        // deterministic phase: largest coefficient real positive
        VectorXcd v = ds.flatten(hb.vecs[i]);
        int arg = 0;
        for (int t = 1; t < v.size(); ++t)
            if (std::abs(v[t]) > std::abs(v[arg])) arg = t;
        if (std::abs(v[arg]) > 0)
            hb.vecs[i] = DsContext::scale(hb.vecs[i], std::conj(v[arg]) / std::abs(v[arg]));
    }
    for (size_t i = 0; i < hb.vecs.size(); ++i)
        for (size_t j = 0; j < hb.vecs.size(); ++j) {
            Complex g = hom_inner(q, ds, x, hb.vecs[i], hb.vecs[j]);
            hb.gram_residual =
                std::max(hb.gram_residual, std::abs(g - (i == j ? Complex(1, 0) : Complex(0, 0))));
        }
    return hb;
}

struct InductionReport {
    CouplingMatrix Z;
    double axiom_residual = 0.0;
    double zs_residual = 0.0;        // ||ZS - SZ||_max, when modular data present
    double zt_residual = 0.0;        // ||ZT - TZ||_max
    bool has_modular = false;
    double cert_margin = std::numeric_limits<double>::infinity();
    double gram_residual = 0.0;
};

/// Z_{lambda,mu} = dim Hom(alpha^{s1}_lambda, alpha^{s2}_mu) over the whole
/// system, with modular-invariance residuals. Rejects unverified Q-systems.
inline InductionReport coupling_matrix(const QSystem& q, const DsContext& ds, int s1, int s2,
                                       const Thresholds& thr = {}) {
    QReport qr = verify_qsystem(q, ds.trees(), thr.derived);
    if (!qr.pass)
        throw CertificationError("coupling_matrix: Q-system fails verification (worst residual " +
                                 std::to_string(qr.worst()) + ")");
    const FusionRing& ring = ds.trees().ring();
    const int n = ring.size();
    InductionReport rep;
    rep.Z.Z = Eigen::MatrixXi::Zero(n, n);

    std::vector<InducedBimodule> src(n), tgt(n);
    for (LabelId a = 0; a < n; ++a) {
        src[a] = alpha_bimodule(q, ds, {a}, s1);
        tgt[a] = alpha_bimodule(q, ds, {a}, s2);
        rep.axiom_residual = std::max(rep.axiom_residual, bimodule_axiom_residual(q, ds, src[a]));
        rep.axiom_residual = std::max(rep.axiom_residual, bimodule_axiom_residual(q, ds, tgt[a]));
    }
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b) {
            HomBasis hb = hom_alpha(q, ds, src[a], tgt[b], thr);
            rep.Z.Z(a, b) = hb.dim();
            rep.cert_margin = std::min(rep.cert_margin, hb.cert_ratio);
            rep.gram_residual = std::max(rep.gram_residual, hb.gram_residual);
        }
    if (rep.Z.Z(0, 0) != 1)
        throw CertificationError("coupling matrix postcondition Z_00 = 1 violated");

    if (ring.has_modular()) {
        rep.has_modular = true;
        const auto& md = ring.modular();
        MatrixXcd z = rep.Z.Z.cast<double>().cast<Complex>();
        rep.zs_residual = (z * md.S - md.S * z).cwiseAbs().maxCoeff();
        MatrixXcd t = md.T.asDiagonal();
        rep.zt_residual = (z * t - t * z).cwiseAbs().maxCoeff();
    }
    return rep;
}

// ---- relative tensor product over the Q-system ------------------------------

/// Relative tensor product X (x)_A Y realized inside the plain tensor
/// product: the separability idempotent p built from the multiplication,
/// its certified image, and the canonical evaluation E onto the flattened
/// bimodule over the concatenated word (with X's sign).
struct RelTensor {
    DsMorphism p;        // idempotent on X (x) Y
    DsMorphism E;        // X (x) Y  ->  flat bimodule object
    DsMorphism Lambda;   // section with E Lambda = 1 and Lambda E = p
    InducedBimodule flat;
    double split_residual = 0.0;      // ||p^2 - p||
    double selfadj_residual = 0.0;    // ||p - p*||
};

inline RelTensor rel_tensor(const QSystem& q, const DsContext& ds, const InducedBimodule& x,
                            const InducedBimodule& y, const Thresholds& thr = {}) {
    const TreeContext& ctx = ds.trees();
    const FusionRing& ring = ctx.ring();
    const int s = q.summands();
    if (x.sign != y.sign)
        throw StructuralError("relative tensor product needs matching action signs");

    DsMorphism w = w_morphism(q, ds);
    DsMorphism w1 = w1_morphism(q, ds);
    DsMorphism u = ds.compose(w1, w);  // id -> theta theta, the separability element
    DsMorphism idx = ds.identity(x.object), idy = ds.identity(y.object);

    DsMorphism qmor = ds.compose(ds.tensor(x.right, y.left),
                                 ds.tensor(ds.tensor(idx, u), idy));
    DsMorphism q2 = ds.compose(qmor, qmor);
    VectorXcd vq = ds.flatten(qmor), vq2 = ds.flatten(q2);
    Complex gamma = vq.dot(vq2) / vq.dot(vq);  // Eigen dot conjugates the left factor
    RelTensor rt;
    rt.p = DsContext::scale(qmor, 1.0 / gamma);
    DsMorphism p2 = ds.compose(rt.p, rt.p);
    rt.split_residual = DsContext::distance(p2, rt.p);
    if (rt.split_residual > thr.derived * 100)
        throw StructuralError("relative-tensor idempotent fails to split (non-special Q-system data)");
    rt.selfadj_residual = DsContext::distance(rt.p, ds.adjoint(rt.p));

    Word flat_word = x.word;
    flat_word.insert(flat_word.end(), y.word.begin(), y.word.end());
    rt.flat = alpha_bimodule(q, ds, flat_word, x.sign);

    // E: multiply the two theta legs after braiding y's leg past x's word
    rt.E = DsMorphism::zero(ds_tensor(x.object, y.object), rt.flat.object);
    for (int n = 0; n < s; ++n)
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                if (!ring.admissible(q.theta[i], q.theta[j], q.theta[n])) continue;
                Morphism m = idetail::mult_block(q, ctx, i, j, n);
                Morphism cross = ctx.tensor_left1(
                    q.theta[i],
                    ctx.tensor_right_word(ctx.braiding(x.word, {q.theta[j]}, x.sign), y.word));
                rt.E.blk[n][i * s + j] =
                    ctx.compose(ctx.tensor_right_word(m, flat_word), cross);
            }

    // section Lambda = S (E S)^{-1} from the certified rank factorization of p
    rt.Lambda = DsMorphism::zero(rt.flat.object, rt.p.src);
    for (LabelId rho = 0; rho < ring.size(); ++rho) {
        MatrixXcd pm = ds_root_matrix(ds, rt.p, rho);
        MatrixXcd em = ds_root_matrix(ds, rt.E, rho);
        if (pm.rows() == 0) continue;
        Eigen::JacobiSVD<MatrixXcd> svd(pm, Eigen::ComputeThinU);
        VectorXd sv = svd.singularValues();
        int rank = 0;
        double zero_tol = 1e-7 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
        for (int i = 0; i < sv.size(); ++i)
            if (sv[i] > zero_tol) ++rank;
        if (rank > 0 && rank < sv.size() && sv[rank] > 0 &&
            sv[rank - 1] / sv[rank] < thr.cert_gap)
            throw CertificationError("relative tensor image rank not certified");
        if (rank != em.rows())
            throw StructuralError("relative tensor image does not match the flat bimodule");
        if (rank == 0) continue;
        MatrixXcd basis = svd.matrixU().leftCols(rank);
        MatrixXcd es = em * basis;  // rank x rank
        MatrixXcd lam = basis * es.inverse();
        ds_set_root_matrix(ds, rt.Lambda, rho, lam);
    }
    return rt;
}

/// flatten(f (x)_A g) = E_tgt (f (x) g) Lambda_src for bimodule maps f, g.
inline DsMorphism relative_product(const DsContext& ds, const RelTensor& src, const RelTensor& tgt,
                                   const DsMorphism& f, const DsMorphism& g) {
    return ds.compose(tgt.E, ds.compose(ds.tensor(f, g), src.Lambda));
}

// ---- extension axioms --------------------------------------------------------

struct ExtensionReport {
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;
};

/// The embedded intertwiner 1_theta (x) t as a map between induced bimodules.
inline DsMorphism iota_morphism(const QSystem& q, const DsContext& ds, const Morphism& t) {
    const TreeContext& ctx = ds.trees();
    InducedBimodule src = alpha_bimodule(q, ds, t.src, +1);  // object is sign-independent
    InducedBimodule tgt = alpha_bimodule(q, ds, t.tgt, +1);
    DsMorphism m = DsMorphism::zero(src.object, tgt.object);
    for (int n = 0; n < q.summands(); ++n) m.blk[n][n] = ctx.tensor_left1(q.theta[n], t);
    return m;
}

/// (E2): for every channel isometry T_e in Hom(nu, lambda mu), the embedded
/// map intertwines the induced actions between alpha_nu and the flattened
/// alpha_lambda alpha_mu, for both braiding choices.
inline double check_e2(const QSystem& q, const DsContext& ds) {
    const TreeContext& ctx = ds.trees();
    const FusionRing& ring = ctx.ring();
    DsObject th = theta_object(q);
    DsMorphism idth = ds.identity(th);
    double worst = 0;
    for (int sign : {+1, -1})
        for (LabelId a = 0; a < ring.size(); ++a)
            for (LabelId b = 0; b < ring.size(); ++b)
                for (LabelId nu : ring.channels(a, b)) {
                    Morphism t = ctx.elem_tree(a, b, nu);
                    DsMorphism it = iota_morphism(q, ds, t);
                    InducedBimodule bsrc = alpha_bimodule(q, ds, {nu}, sign);
                    InducedBimodule btgt = alpha_bimodule(q, ds, {a, b}, sign);
                    double dl = DsContext::distance(ds.compose(it, bsrc.left),
                                                    ds.compose(btgt.left, ds.tensor(idth, it)));
                    double dr = DsContext::distance(ds.compose(it, bsrc.right),
                                                    ds.compose(btgt.right, ds.tensor(it, idth)));
                    worst = std::max(worst, std::max(dl, dr));
                }
    return worst;
}

/// (E3): (psi x phi) iota(eps(l1,m1)) = iota(eps(l2,m2)) (phi x psi) for
/// phi, psi running over Hom(alpha^{s1}, alpha^{s2}) bases. Both systems
/// carry the same braiding eps; the signs pick the extension pair, and the
/// criterion is sensitive to that choice: it holds for (+,-) but fails for
/// same-sign pairs in general.
inline double check_e3(const QSystem& q, const DsContext& ds, int s1, int s2,
                       uint64_t seed = 17) {
    const TreeContext& ctx = ds.trees();
    const FusionRing& ring = ctx.ring();
    const int n = ring.size();

    std::vector<InducedBimodule> src(n), tgt(n);
    for (LabelId a = 0; a < n; ++a) {
        src[a] = alpha_bimodule(q, ds, {a}, s1);
        tgt[a] = alpha_bimodule(q, ds, {a}, s2);
    }
    std::vector<std::vector<HomBasis>> homs(n, std::vector<HomBasis>(n));
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b) homs[a][b] = hom_alpha(q, ds, src[a], tgt[b]);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double worst = 0;
    for (LabelId l1 = 0; l1 < n; ++l1)
        for (LabelId l2 = 0; l2 < n; ++l2) {
            if (homs[l1][l2].dim() == 0) continue;
            for (LabelId m1 = 0; m1 < n; ++m1)
                for (LabelId m2 = 0; m2 < n; ++m2) {
                    if (homs[m1][m2].dim() == 0) continue;
                    auto random_in = [&](const HomBasis& hb) {
                        DsMorphism acc = DsContext::scale(hb.vecs[0], Complex(g(rng), g(rng)));
                        for (size_t i = 1; i < hb.vecs.size(); ++i)
                            acc = DsContext::add(
                                acc, DsContext::scale(hb.vecs[i], Complex(g(rng), g(rng))));
                        return acc;
                    };
                    DsMorphism phi = random_in(homs[l1][l2]);
                    DsMorphism psi = random_in(homs[m1][m2]);

                    RelTensor src_ml = rel_tensor(q, ds, src[m1], src[l1]);
                    RelTensor tgt_ml = rel_tensor(q, ds, tgt[m2], tgt[l2]);
                    RelTensor src_lm = rel_tensor(q, ds, src[l1], src[m1]);
                    RelTensor tgt_lm = rel_tensor(q, ds, tgt[l2], tgt[m2]);

                    DsMorphism psiphi = relative_product(ds, src_ml, tgt_ml, psi, phi);
                    DsMorphism phipsi = relative_product(ds, src_lm, tgt_lm, phi, psi);

                    DsMorphism lhs = ds.compose(
                        psiphi, iota_morphism(q, ds, ctx.braiding({l1}, {m1}, +1)));
                    DsMorphism rhs = ds.compose(
                        iota_morphism(q, ds, ctx.braiding({l2}, {m2}, +1)), phipsi);
                    worst = std::max(worst, DsContext::distance(lhs, rhs));
                }
        }
    return worst;
}

inline ExtensionReport check_extension_axioms(const QSystem& q, const DsContext& ds, int s1 = +1,
                                              int s2 = -1, uint64_t seed = 17) {
    ExtensionReport rep;
    rep.e1 = 0.0;  // holds by construction: the theta leg is untouched on the source side
    rep.e2 = check_e2(q, ds);
    rep.e3 = check_e3(q, ds, s1, s2, seed);
    return rep;
}

/// d(alpha_lambda) = d(lambda): underlying-object dimension over d(theta).
inline double check_dimension_preservation(const QSystem& q, const DsContext& ds) {
    const FusionRing& ring = ds.trees().ring();
    double worst = 0;
    for (LabelId a = 0; a < ring.size(); ++a) {
        InducedBimodule bim = alpha_bimodule(q, ds, {a}, +1);
        Complex dim = ds.trace_cat(ds.identity(bim.object));
        worst = std::max(worst, std::abs(dim / q.dtheta - Complex(ring.dim(a), 0)));
    }
    return worst;
}

}  // namespace ctps
