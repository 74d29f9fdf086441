#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "ctps/fusion_ring.hpp"

namespace ctps {

namespace detail {
inline uint64_t pack_key(std::initializer_list<int> ids) {
    uint64_t k = 0;
    for (int v : ids) k = (k << 10) | static_cast<uint64_t>(v + 1);
    return k;
}
}  // namespace detail

/// F- and R-symbols of a multiplicity-free unitary fusion category over a
/// given ring, in a fixed gauge where every entry involving the unit label
/// equals exactly 1.
///
/// Convention. F relates the two tree bases of Hom(d, abc):
///   (T^{ab}_e x 1_c) T^{ec}_d  =  sum_f  F[a,b,c;d](e,f) (1_a x T^{bc}_f) T^{af}_d
/// and the braiding acts on channel bases as
///   eps(a,b) T^{ab}_c = R[a,b;c] T^{ba}_c.
class SkeletalData {
public:
    SkeletalData(FusionRing ring, std::map<uint64_t, Complex> f_entries,
                 std::map<uint64_t, Complex> r_entries, bool has_braiding)
        : ring_(std::move(ring)),
          f_(std::move(f_entries)),
          r_(std::move(r_entries)),
          has_braiding_(has_braiding) {
        for (LabelId a = 0; a < ring_.size(); ++a)
            for (LabelId b = 0; b < ring_.size(); ++b)
                if (ring_.N(a, b, 0) > 0 && ring_.N(a, b, 0) != (b == ring_.dual(a) ? 1 : 0))
                    throw StructuralError("fusion tensor incompatible with dual map");
    }

    const FusionRing& ring() const { return ring_; }
    bool has_braiding() const { return has_braiding_; }

    bool f_admissible(LabelId a, LabelId b, LabelId c, LabelId d, LabelId e, LabelId f) const {
        return ring_.admissible(a, b, e) && ring_.admissible(e, c, d) && ring_.admissible(b, c, f) &&
               ring_.admissible(a, f, d);
    }

    /// F[a,b,c;d](e,f). Unit-involving entries are fixed to 1 by the gauge.
    Complex F(LabelId a, LabelId b, LabelId c, LabelId d, LabelId e, LabelId f) const {
        if (!f_admissible(a, b, c, d, e, f)) {
            std::ostringstream os;
            os << "inadmissible F tuple (" << a << "," << b << "," << c << ";" << d << ")(" << e
               << "," << f << ")";
            throw StructuralError(os.str());
        }
        if (a == 0 || b == 0 || c == 0) return Complex(1.0, 0.0);
        auto it = f_.find(detail::pack_key({a, b, c, d, e, f}));
        if (it == f_.end()) {
            std::ostringstream os;
            os << "missing F entry for admissible tuple (" << a << "," << b << "," << c << ";" << d
               << ")(" << e << "," << f << ")";
            throw StructuralError(os.str());
        }
        return it->second;
    }

    /// F[a,b,c;d](e,f), or 0 when one of the two tree bases does not exist.
    Complex F0(LabelId a, LabelId b, LabelId c, LabelId d, LabelId e, LabelId f) const {
        if (!f_admissible(a, b, c, d, e, f)) return Complex(0.0, 0.0);
        return F(a, b, c, d, e, f);
    }

    /// R[a,b;c] for the reference (+) braiding.
    Complex R(LabelId a, LabelId b, LabelId c) const {
        if (!has_braiding_) throw StructuralError("no R data present");
        if (!ring_.admissible(a, b, c)) {
            std::ostringstream os;
            os << "inadmissible R tuple (" << a << "," << b << ";" << c << ")";
            throw StructuralError(os.str());
        }
        if (a == 0 || b == 0) return Complex(1.0, 0.0);
        auto it = r_.find(detail::pack_key({a, b, c}));
        if (it == r_.end()) {
            std::ostringstream os;
            os << "missing R entry for admissible tuple (" << a << "," << b << ";" << c << ")";
            throw StructuralError(os.str());
        }
        return it->second;
    }

    /// R for a chosen crossing sign: + is the reference braiding, - its opposite.
    Complex R_signed(LabelId a, LabelId b, LabelId c, int sign) const {
        return sign >= 0 ? R(a, b, c) : std::conj(R(b, a, c));
    }

    /// F-block over admissible (e, f) pairs for fixed (a, b, c; d).
    MatrixXcd f_block(LabelId a, LabelId b, LabelId c, LabelId d, std::vector<LabelId>* e_out = nullptr,
                      std::vector<LabelId>* f_out = nullptr) const {
        std::vector<LabelId> es, fs;
        for (LabelId e = 0; e < ring_.size(); ++e)
            if (ring_.admissible(a, b, e) && ring_.admissible(e, c, d)) es.push_back(e);
        for (LabelId f = 0; f < ring_.size(); ++f)
            if (ring_.admissible(b, c, f) && ring_.admissible(a, f, d)) fs.push_back(f);
        MatrixXcd m(es.size(), fs.size());
        for (size_t i = 0; i < es.size(); ++i)
            for (size_t j = 0; j < fs.size(); ++j) m(i, j) = F(a, b, c, d, es[i], fs[j]);
        if (e_out) *e_out = es;
        if (f_out) *f_out = fs;
        return m;
    }

    const std::map<uint64_t, Complex>& f_entries() const { return f_; }
    const std::map<uint64_t, Complex>& r_entries() const { return r_; }

private:
    FusionRing ring_;
    std::map<uint64_t, Complex> f_;
    std::map<uint64_t, Complex> r_;
    bool has_braiding_ = false;
};

inline uint64_t f_key(LabelId a, LabelId b, LabelId c, LabelId d, LabelId e, LabelId f) {
    return detail::pack_key({a, b, c, d, e, f});
}
inline uint64_t r_key(LabelId a, LabelId b, LabelId c) { return detail::pack_key({a, b, c}); }

struct ResidualReport {
    double residual = 0.0;
    bool pass = false;
    long instances = 0;
};

/// Pentagon identity over all admissible label tuples:
///   F[f,c,d;u](g,h) F[a,b,h;u](f,k) =
///     sum_m F[a,b,c;g](f,m) F[a,m,d;u](g,k) F[b,c,d;k](m,h)
inline ResidualReport check_pentagon(const SkeletalData& data, double tol = 1e-10) {
    const FusionRing& ring = data.ring();
    const int n = ring.size();
    ResidualReport rep;
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b)
            for (LabelId c = 0; c < n; ++c)
                for (LabelId d = 0; d < n; ++d)
                    for (LabelId f = 0; f < n; ++f) {
                        if (!ring.admissible(a, b, f)) continue;
                        for (LabelId g = 0; g < n; ++g) {
                            if (!ring.admissible(f, c, g)) continue;
                            for (LabelId u = 0; u < n; ++u) {
                                if (!ring.admissible(g, d, u)) continue;
                                for (LabelId h = 0; h < n; ++h) {
                                    if (!ring.admissible(c, d, h)) continue;
                                    for (LabelId k = 0; k < n; ++k) {
                                        if (!ring.admissible(b, h, k) || !ring.admissible(a, k, u))
                                            continue;
                                        Complex lhs =
                                            data.F0(f, c, d, u, g, h) * data.F0(a, b, h, u, f, k);
                                        Complex rhs = 0;
                                        for (LabelId m = 0; m < n; ++m) {
                                            if (!ring.admissible(b, c, m) || !ring.admissible(a, m, g) ||
                                                !ring.admissible(m, d, k))
                                                continue;
                                            rhs += data.F(a, b, c, g, f, m) * data.F(a, m, d, u, g, k) *
                                                   data.F(b, c, d, k, m, h);
                                        }
                                        rep.residual = std::max(rep.residual, std::abs(lhs - rhs));
                                        ++rep.instances;
                                    }
                                }
                            }
                        }
                    }
    rep.pass = rep.residual < tol;
    return rep;
}

/// Hexagon identity for the chosen crossing:
///   sum_f F[a,b,c;u](e,f) R(a,f;u) F[b,c,a;u](f,g) = R(a,b;e) F[b,a,c;u](e,g) R(a,c;g)
/// with R replaced by the opposite braiding for sign < 0.
inline ResidualReport check_hexagon(const SkeletalData& data, int sign, double tol = 1e-10) {
    const FusionRing& ring = data.ring();
    const int n = ring.size();
    ResidualReport rep;
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b)
            for (LabelId c = 0; c < n; ++c)
                for (LabelId e = 0; e < n; ++e) {
                    if (!ring.admissible(a, b, e)) continue;
                    for (LabelId u = 0; u < n; ++u) {
                        if (!ring.admissible(e, c, u)) continue;
                        for (LabelId g = 0; g < n; ++g) {
                            if (!ring.admissible(c, a, g) || !ring.admissible(b, g, u)) continue;
                            if (!ring.admissible(a, c, g) || !ring.admissible(b, a, e)) continue;
                            Complex lhs = 0;
                            for (LabelId f = 0; f < n; ++f) {
                                if (!ring.admissible(b, c, f) || !ring.admissible(a, f, u)) continue;
                                if (!ring.admissible(f, a, u)) continue;
                                lhs += data.F(a, b, c, u, e, f) * data.R_signed(a, f, u, sign) *
                                       data.F(b, c, a, u, f, g);
                            }
                            Complex rhs = data.R_signed(a, b, e, sign) * data.F(b, a, c, u, e, g) *
                                          data.R_signed(a, c, g, sign);
                            rep.residual = std::max(rep.residual, std::abs(lhs - rhs));
                            ++rep.instances;
                        }
                    }
                }
    rep.pass = rep.residual < tol;
    return rep;
}

/// Unitarity of every F-block and unit modulus of every R coefficient.
inline ResidualReport check_unitarity(const SkeletalData& data, double tol = 1e-10) {
    const FusionRing& ring = data.ring();
    const int n = ring.size();
    ResidualReport rep;
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b)
            for (LabelId c = 0; c < n; ++c)
                for (LabelId d = 0; d < n; ++d) {
                    MatrixXcd blk = data.f_block(a, b, c, d);
                    if (blk.rows() == 0) continue;
                    if (blk.rows() != blk.cols()) {
                        rep.residual = std::max(rep.residual, 1.0);
                        continue;
                    }
                    double r = (blk * blk.adjoint() - MatrixXcd::Identity(blk.rows(), blk.rows()))
                                   .cwiseAbs()
                                   .maxCoeff();
                    rep.residual = std::max(rep.residual, r);
                    ++rep.instances;
                }
    if (data.has_braiding())
        for (LabelId a = 0; a < n; ++a)
            for (LabelId b = 0; b < n; ++b)
                for (LabelId c = 0; c < n; ++c)
                    if (ring.admissible(a, b, c)) {
                        rep.residual = std::max(rep.residual, std::abs(std::abs(data.R(a, b, c)) - 1.0));
                        ++rep.instances;
                    }
    rep.pass = rep.residual < tol;
    return rep;
}

/// Cup/cap normalization for one dual pair: R_l = r T^{conj(l) l}_0 and
/// Rbar_l = rbar T^{l conj(l)}_0, phases fixed so both conjugate-equation
/// scalars come out real positive (= 1/d).
struct StandardPair {
    Complex r = 1.0;     // coefficient of R_lambda in Hom(id, conj(l) l)
    Complex rbar = 1.0;  // coefficient of Rbar_lambda in Hom(id, l conj(l))
};

/// Solves the conjugate-equation normalization for every label. The zig-zag
/// scalars are rbar conj(r) F[l,lb,l;l](0,0) and r conj(rbar) F[lb,l,lb;lb](0,0);
/// both must equal 1/d(l), which requires |F(0,0)| = 1/d and the product of the
/// two corner entries to be 1/d^2. Anything else signals bad F data.
inline std::vector<StandardPair> standard_solutions(const SkeletalData& data, double tol = 1e-8) {
    const FusionRing& ring = data.ring();
    std::vector<StandardPair> out(ring.size());
    for (LabelId l = 0; l < ring.size(); ++l) {
        LabelId lb = ring.dual(l);
        if (lb < l) continue;  // handled together with its partner
        double d = ring.dim(l);
        Complex f1 = data.F(l, lb, l, l, 0, 0);
        Complex f2 = data.F(lb, l, lb, lb, 0, 0);
        if (std::abs(std::abs(f1) - 1.0 / d) > tol || std::abs(f1 * f2 - Complex(1.0 / (d * d), 0)) > tol)
            throw StructuralError("no consistent conjugate-equation normalization for label " +
                                  ring.name(l));
        StandardPair p;
        p.r = 1.0;
        p.rbar = 1.0 / (d * f1);
        out[l] = p;
        if (lb != l) out[lb] = StandardPair{p.rbar, p.r};  // R_{dual} := Rbar, Rbar_{dual} := R
    }
    return out;
}

}  // namespace ctps
