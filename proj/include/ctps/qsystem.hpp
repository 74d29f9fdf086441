#pragma once

#include <functional>
#include <optional>
#include <random>

#include <json.hpp>

#include "ctps/dsum.hpp"
#include "ctps/model_io.hpp"

namespace ctps {

/// A Q-system (theta, w, w1) inside a fixed system: theta = sum of summand
/// labels (index 0 is the unit summand, multiplicity of the unit is 1), and
/// the multiplication coefficients c^n_{lm} of w1 in Hom(theta, theta^2)
/// over the skeletal channel bases. w is pinned to the unit summand with
/// phase +1, which also pins c^n_{0m} = c^n_{m0} = delta_{mn}/sqrt(d(theta)).
struct QSystem {
    std::vector<LabelId> theta;  // summand labels, ascending, theta[0] = 0
    std::vector<Complex> c;      // dense [l][m][n] over summand triples
    double dtheta = 1.0;

    int summands() const { return static_cast<int>(theta.size()); }
    Complex mult(int l, int m, int n) const {
        const int s = summands();
        return c[(static_cast<size_t>(l) * s + m) * s + n];
    }
    Complex& mult(int l, int m, int n) {
        const int s = summands();
        return c[(static_cast<size_t>(l) * s + m) * s + n];
    }
    /// Multiplicity n_lambda of a label in theta.
    int multiplicity(LabelId lam) const {
        int k = 0;
        for (LabelId t : theta) k += (t == lam);
        return k;
    }
};

struct QReport {
    double q1 = 0, q2 = 0, q3 = 0, isometry = 0;
    double threshold = 1e-9;
    bool pass = false;

    double worst() const { return std::max(std::max(q1, q2), std::max(q3, isometry)); }
};

inline QSystem make_qsystem(const FusionRing& ring, std::vector<LabelId> theta_labels) {
    std::sort(theta_labels.begin(), theta_labels.end());
    if (theta_labels.empty() || theta_labels[0] != 0 ||
        (theta_labels.size() > 1 && theta_labels[1] == 0))
        throw StructuralError("theta must contain the unit sector with multiplicity exactly 1");
    for (LabelId l : theta_labels)
        if (l < 0 || l >= ring.size()) throw StructuralError("theta label out of range");
    QSystem q;
    q.theta = std::move(theta_labels);
    const int s = q.summands();
    q.c.assign(static_cast<size_t>(s) * s * s, Complex(0, 0));
    q.dtheta = 0;
    for (LabelId l : q.theta) q.dtheta += ring.dim(l);
    const double pin = 1.0 / std::sqrt(q.dtheta);
    for (int m = 0; m < s; ++m) {
        q.mult(0, m, m) = pin;
        q.mult(m, 0, m) = pin;
    }
    q.mult(0, 0, 0) = pin;
    return q;
}

/// The theta = id extension: Z = 1 case.
inline QSystem trivial_qsystem(const FusionRing& ring) { return make_qsystem(ring, {0}); }

namespace qdetail {

inline void check_shape(const QSystem& q, const FusionRing& ring) {
    const int s = q.summands();
    if (q.c.size() != static_cast<size_t>(s) * s * s)
        throw StructuralError("mult array shape mismatch");
    if (q.theta.empty() || q.theta[0] != 0 || q.multiplicity(0) != 1)
        throw StructuralError("irreducibility convention requires n_0 = 1");
    for (int l = 0; l < s; ++l)
        for (int m = 0; m < s; ++m)
            for (int n = 0; n < s; ++n)
                if (!ring.admissible(q.theta[l], q.theta[m], q.theta[n]) &&
                    std::abs(q.mult(l, m, n)) > 0)
                    throw StructuralError("mult coefficient on an inadmissible channel");
}

/// Visits every Longo-relation equation as a complex difference lhs - rhs.
/// tag: 1 = Q1, 2 = Q2, 3 = Q3, 4 = isometry.
inline void visit_equations(const QSystem& q, const TreeContext& ctx,
                            const std::function<void(int, Complex)>& emit) {
    const FusionRing& ring = ctx.ring();
    const int s = q.summands();
    const double pin = 1.0 / std::sqrt(q.dtheta);

    for (int m = 0; m < s; ++m)
        for (int n = 0; n < s; ++n) {
            if (q.theta[m] == q.theta[n]) {
                Complex want = m == n ? Complex(pin, 0) : Complex(0, 0);
                emit(1, q.mult(0, m, n) - want);
                emit(1, q.mult(m, 0, n) - want);
            }
        }

    // (Q2) per (l,m,k,n) and left-tree channel sigma
    for (int l = 0; l < s; ++l)
        for (int m = 0; m < s; ++m)
            for (int k = 0; k < s; ++k)
                for (int n = 0; n < s; ++n) {
                    LabelId ll = q.theta[l], lm = q.theta[m], lk = q.theta[k], ln = q.theta[n];
                    for (LabelId sig = 0; sig < ring.size(); ++sig) {
                        if (!ring.admissible(ll, lm, sig) || !ring.admissible(sig, lk, ln)) continue;
                        Complex lhs = 0;
                        for (int t = 0; t < s; ++t)
                            if (q.theta[t] == sig) lhs += q.mult(l, m, t) * q.mult(t, k, n);
                        Complex rhs = 0;
                        for (LabelId tau = 0; tau < ring.size(); ++tau) {
                            if (!ring.admissible(lm, lk, tau) || !ring.admissible(ll, tau, ln))
                                continue;
                            Complex b = 0;
                            for (int t = 0; t < s; ++t)
                                if (q.theta[t] == tau) b += q.mult(m, k, t) * q.mult(l, t, n);
                            rhs += std::conj(ctx.data().F(ll, lm, lk, ln, sig, tau)) * b;
                        }
                        emit(2, lhs - rhs);
                    }
                }

    // (Q3) per (l,m,n,k) and channel sigma, transported through the second
    // recoupling
    std::map<std::tuple<LabelId, LabelId, LabelId, LabelId>, RecoupleFrobenius> rf_cache;
    for (int l = 0; l < s; ++l)
        for (int m = 0; m < s; ++m)
            for (int n = 0; n < s; ++n)
                for (int k = 0; k < s; ++k) {
                    LabelId ll = q.theta[l], lm = q.theta[m], ln = q.theta[n], lk = q.theta[k];
                    auto key = std::make_tuple(ln, lk, ll, lm);
                    auto it = rf_cache.find(key);
                    if (it == rf_cache.end())
                        it = rf_cache.emplace(key, recouple_frobenius(ctx, ln, lk, ll, lm)).first;
                    const RecoupleFrobenius& rf = it->second;
                    if (rf.rows.empty() && rf.cols.empty()) continue;
                    for (size_t si = 0; si < rf.rows.size(); ++si) {
                        LabelId sig = rf.rows[si];
                        Complex lhs = 0;
                        for (int t = 0; t < s; ++t)
                            if (q.theta[t] == sig)
                                lhs += q.mult(l, m, t) * std::conj(q.mult(n, k, t));
                        Complex rhs = 0;
                        for (size_t ti = 0; ti < rf.cols.size(); ++ti) {
                            LabelId tau = rf.cols[ti];
                            Complex b = 0;
                            for (int t = 0; t < s; ++t)
                                if (q.theta[t] == tau)
                                    b += q.mult(l, t, n) * std::conj(q.mult(t, k, m));
                            rhs += rf.raw(si, ti) * b;
                        }
                        emit(3, lhs - rhs);
                    }
                }

    // w1* w1 = 1
    for (int n = 0; n < s; ++n)
        for (int t = 0; t < s; ++t) {
            if (q.theta[n] != q.theta[t]) continue;
            Complex acc = 0;
            for (int l = 0; l < s; ++l)
                for (int m = 0; m < s; ++m) acc += std::conj(q.mult(l, m, n)) * q.mult(l, m, t);
            emit(4, acc - (n == t ? Complex(1, 0) : Complex(0, 0)));
        }
}

}  // namespace qdetail

/// Verifies Longo's relations in coefficient form: both sides of (Q2)/(Q3)
/// are assembled channel-wise and transported through the recoupling
/// unitaries; (Q1) and the isometry are direct sums over coefficients.
inline QReport verify_qsystem(const QSystem& q, const TreeContext& ctx, double tol = 1e-9) {
    qdetail::check_shape(q, ctx.ring());
    QReport rep;
    rep.threshold = tol;
    qdetail::visit_equations(q, ctx, [&](int tag, Complex diff) {
        double a = std::abs(diff);
        switch (tag) {
            case 1: rep.q1 = std::max(rep.q1, a); break;
            case 2: rep.q2 = std::max(rep.q2, a); break;
            case 3: rep.q3 = std::max(rep.q3, a); break;
            default: rep.isometry = std::max(rep.isometry, a); break;
        }
    });
    rep.pass = rep.worst() < tol;
    return rep;
}

inline QReport verify_qsystem(const QSystem& q, const SkeletalData& data, double tol = 1e-9) {
    TreeContext ctx(data);
    return verify_qsystem(q, ctx, tol);
}

// ---- dense assembly (second witness) ---------------------------------------

inline DsObject theta_object(const QSystem& q) {
    DsObject o;
    for (LabelId l : q.theta) o.summands.push_back(Word{l});
    return o;
}

inline DsMorphism w_morphism(const QSystem& q, const DsContext& ds) {
    DsMorphism m = DsMorphism::zero(ds_unit(), theta_object(q));
    Morphism e = ds.trees().zero({}, {0});
    e.blocks[0](0, 0) = 1.0;
    m.blk[0][0] = std::move(e);
    return m;
}

inline DsMorphism w1_morphism(const QSystem& q, const DsContext& ds) {
    DsObject th = theta_object(q);
    DsMorphism m = DsMorphism::zero(th, ds_tensor(th, th));
    const int s = q.summands();
    const FusionRing& ring = ds.trees().ring();
    for (int l = 0; l < s; ++l)
        for (int mm = 0; mm < s; ++mm)
            for (int n = 0; n < s; ++n) {
                if (!ring.admissible(q.theta[l], q.theta[mm], q.theta[n])) continue;
                Complex v = q.mult(l, mm, n);
                m.blk[l * s + mm][n] = TreeContext::scale(
                    ds.trees().elem_tree(q.theta[l], q.theta[mm], q.theta[n]), v);
            }
    return m;
}

/// Assembles both sides of every relation as direct-sum morphisms through
/// the tree engine. Slower than the coefficient form and entirely
/// independent of its derivation; intended as a second witness on small
/// models.
inline QReport verify_qsystem_dense(const QSystem& q, const TreeContext& ctx, double tol = 1e-9) {
    qdetail::check_shape(q, ctx.ring());
    DsContext ds(ctx);
    DsObject th = theta_object(q);
    DsMorphism idth = ds.identity(th);
    DsMorphism w = w_morphism(q, ds);
    DsMorphism w1 = w1_morphism(q, ds);
    const double pin = 1.0 / std::sqrt(q.dtheta);

    QReport rep;
    rep.threshold = tol;
    DsMorphism q1a = ds.compose(ds.tensor(ds.adjoint(w), idth), w1);
    DsMorphism q1b = ds.compose(ds.tensor(idth, ds.adjoint(w)), w1);
    DsMorphism want = DsContext::scale(idth, pin);
    rep.q1 = std::max(DsContext::distance(q1a, want), DsContext::distance(q1b, want));

    DsMorphism lhs2 = ds.compose(ds.tensor(w1, idth), w1);
    DsMorphism rhs2 = ds.compose(ds.tensor(idth, w1), w1);
    rep.q2 = DsContext::distance(lhs2, rhs2);

    DsMorphism lhs3 = ds.compose(w1, ds.adjoint(w1));
    DsMorphism rhs3 = ds.compose(ds.tensor(idth, ds.adjoint(w1)), ds.tensor(w1, idth));
    rep.q3 = DsContext::distance(lhs3, rhs3);

    rep.isometry = DsContext::distance(ds.compose(ds.adjoint(w1), w1), idth);
    rep.pass = rep.worst() < tol;
    return rep;
}

// ---- solver -----------------------------------------------------------------

struct SolveOptions {
    int restarts = 200;
    uint64_t seed = 1;
    double tol = 1e-9;
    int max_iter = 120;
};

struct SolveResult {
    std::optional<QSystem> q;
    double best_residual = std::numeric_limits<double>::infinity();
    int restarts_used = 0;
};

namespace qdetail {

inline VectorXd equation_vector(const QSystem& q, const TreeContext& ctx) {
    std::vector<double> out;
    visit_equations(q, ctx, [&](int tag, Complex d) {
        if (tag == 1) return;  // pinned exactly by construction
        out.push_back(d.real());
        out.push_back(d.imag());
    });
    return Eigen::Map<VectorXd>(out.data(), out.size());
}

}  // namespace qdetail

/// Multi-start damped Gauss-Newton solve of (Q1)-(Q3) + isometry over the
/// free mult coefficients (everything not pinned by the unit summand).
/// Returns the solved Q-system, or nothing with the infimum residual found.
inline SolveResult solve_qsystem(const SkeletalData& data, std::vector<LabelId> theta_labels,
                                 const SolveOptions& opts = {}) {
    TreeContext ctx(data);
    const FusionRing& ring = ctx.ring();
    QSystem base = make_qsystem(ring, std::move(theta_labels));
    const int s = base.summands();

    std::vector<std::tuple<int, int, int>> unknowns;
    for (int l = 1; l < s; ++l)
        for (int m = 1; m < s; ++m)
            for (int n = 0; n < s; ++n)
                if (ring.admissible(base.theta[l], base.theta[m], base.theta[n]))
                    unknowns.push_back({l, m, n});

    auto apply = [&](const VectorXd& x) {
        QSystem q = base;
        for (size_t u = 0; u < unknowns.size(); ++u) {
            auto [l, m, n] = unknowns[u];
            q.mult(l, m, n) = Complex(x[2 * u], x[2 * u + 1]);
        }
        return q;
    };

    SolveResult result;
    if (unknowns.empty()) {
        QSystem q = base;
        double res = verify_qsystem(q, ctx, opts.tol).worst();
        result.best_residual = res;
        if (res < opts.tol) result.q = std::move(q);
        return result;
    }

    const int nx = static_cast<int>(2 * unknowns.size());
    for (int restart = 0; restart < opts.restarts; ++restart) {
        ++result.restarts_used;
        std::mt19937_64 rng(opts.seed * 1000003 + restart);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        VectorXd x(nx);
        for (int i = 0; i < nx; ++i) x[i] = uni(rng);

        VectorXd r = qdetail::equation_vector(apply(x), ctx);
        double cost = r.squaredNorm();
        double lambda = 1e-3;
        for (int iter = 0; iter < opts.max_iter; ++iter) {
            MatrixXd jac(r.size(), nx);
            const double h = 1e-7;
            for (int i = 0; i < nx; ++i) {
                VectorXd xp = x;
                xp[i] += h;
                jac.col(i) = (qdetail::equation_vector(apply(xp), ctx) - r) / h;
            }
            MatrixXd jtj = jac.transpose() * jac;
            VectorXd jtr = jac.transpose() * r;
            bool stepped = false;
            for (int tries = 0; tries < 12; ++tries) {
                MatrixXd a = jtj + lambda * MatrixXd::Identity(nx, nx);
                VectorXd dx = a.ldlt().solve(-jtr);
                VectorXd xn = x + dx;
                VectorXd rn = qdetail::equation_vector(apply(xn), ctx);
                double cn = rn.squaredNorm();
                if (cn < cost) {
                    x = xn;
                    r = rn;
                    cost = cn;
                    lambda = std::max(lambda * 0.3, 1e-12);
                    stepped = true;
                    break;
                }
                lambda *= 10.0;
            }
            if (!stepped || r.cwiseAbs().maxCoeff() < 1e-13) break;
        }
        double res = r.cwiseAbs().maxCoeff();
        result.best_residual = std::min(result.best_residual, res);
        if (res < opts.tol) {
            result.q = apply(x);
            result.q->dtheta = base.dtheta;
            break;
        }
    }
    return result;
}

// ---- file format -------------------------------------------------------------

inline Json qsystem_to_json(const QSystem& q) {
    Json j;
    Json th = Json::array();
    for (size_t i = 0; i < q.theta.size();) {
        size_t k = i;
        while (k < q.theta.size() && q.theta[k] == q.theta[i]) ++k;
        th.push_back(Json::array({q.theta[i], static_cast<int>(k - i)}));
        i = k;
    }
    j["theta"] = th;
    Json mult = Json::array();
    const int s = q.summands();
    for (int l = 0; l < s; ++l)
        for (int m = 0; m < s; ++m)
            for (int n = 0; n < s; ++n)
                if (std::abs(q.mult(l, m, n)) > 0)
                    mult.push_back(Json{{"l", l},
                                        {"m", m},
                                        {"n", n},
                                        {"value", io_detail::dump_complex(q.mult(l, m, n))}});
    j["mult"] = mult;
    return j;
}

inline QSystem qsystem_from_json(const Json& j, const FusionRing& ring) {
    io_detail::reject_unknown(j, {"theta", "mult"}, "qsystem");
    if (!j.contains("theta") || !j.contains("mult"))
        throw ParseError("qsystem requires 'theta' and 'mult'");
    std::vector<LabelId> labels;
    for (const auto& row : j["theta"]) {
        if (!row.is_array() || row.size() != 2) throw ParseError("theta rows are [label, mult]");
        int lab = row[0].get<int>(), mult = row[1].get<int>();
        if (mult < 0) throw ParseError("negative multiplicity in theta");
        for (int i = 0; i < mult; ++i) labels.push_back(lab);
    }
    QSystem q = make_qsystem(ring, std::move(labels));
    const int s = q.summands();
    for (const auto& e : j["mult"]) {
        io_detail::reject_unknown(e, {"l", "m", "n", "value"}, "mult entry");
        int l = e["l"].get<int>(), m = e["m"].get<int>(), n = e["n"].get<int>();
        if (l < 0 || l >= s || m < 0 || m >= s || n < 0 || n >= s)
            throw ParseError("mult entry summand index out of range");
        q.mult(l, m, n) = io_detail::parse_complex(e["value"], "mult");
    }
    return q;
}

}  // namespace ctps
