#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include "ctps/common.hpp"

namespace ctps {

struct Label {
    LabelId id = 0;
    std::string name;
};

/// Optional modular data attached to a fusion ring.
struct ModularData {
    MatrixXcd S;   // unitary, symmetric, first row strictly positive
    VectorXcd T;   // diagonal entries, unit modulus
};

/// Nonnegative-integer multiplicity matrix of a canonical tensor product
/// subfactor, indexed by the two label sets. Also used for the sector
/// conjugation matrix C.
struct CouplingMatrix {
    Eigen::MatrixXi Z;

    int rows() const { return static_cast<int>(Z.rows()); }
    int cols() const { return static_cast<int>(Z.cols()); }
};

/// A finite closed system of sectors at the fusion-ring level: labels,
/// fusion multiplicities N^nu_{lambda,mu} = dim Hom(nu, lambda mu),
/// conjugation, quantum dimensions, optional (S, T).
///
/// Immutable after construction; safe for concurrent reads.
class FusionRing {
public:
    FusionRing(std::vector<std::string> names, std::vector<int> fusion_tensor,
               std::vector<LabelId> dual, std::optional<ModularData> modular = std::nullopt)
        : names_(std::move(names)),
          n_(std::move(fusion_tensor)),
          dual_(std::move(dual)),
          modular_(std::move(modular)) {
        size_ = static_cast<int>(names_.size());
        if (size_ == 0) throw StructuralError("fusion ring needs at least the unit label");
        if (n_.size() != static_cast<size_t>(size_) * size_ * size_)
            throw StructuralError("fusion tensor shape does not match label count");
        if (dual_.size() != static_cast<size_t>(size_))
            throw StructuralError("dual map shape does not match label count");
        for (LabelId d : dual_)
            if (d < 0 || d >= size_) throw StructuralError("dual map entry out of range");
        for (int v : n_)
            if (v < 0) throw StructuralError("fusion multiplicities must be nonnegative");
        if (modular_) {
            if (modular_->S.rows() != size_ || modular_->S.cols() != size_)
                throw StructuralError("S matrix shape does not match label count");
            if (modular_->T.size() != size_)
                throw StructuralError("T diagonal shape does not match label count");
        }
        dims_ = pf_dimensions();
    }

    int size() const { return size_; }
    const std::string& name(LabelId a) const { return names_.at(a); }
    const std::vector<std::string>& names() const { return names_; }

    /// N^nu_{lambda,mu}
    int N(LabelId lambda, LabelId mu, LabelId nu) const {
        return n_[(static_cast<size_t>(lambda) * size_ + mu) * size_ + nu];
    }
    bool admissible(LabelId lambda, LabelId mu, LabelId nu) const { return N(lambda, mu, nu) > 0; }

    LabelId dual(LabelId a) const { return dual_[a]; }
    double dim(LabelId a) const { return dims_[a]; }
    const std::vector<double>& dims() const { return dims_; }
    double global_dim_sq() const {
        double s = 0;
        for (double d : dims_) s += d * d;
        return s;
    }

    bool has_modular() const { return modular_.has_value(); }
    const ModularData& modular() const {
        if (!modular_) throw StructuralError("no modular data present");
        return *modular_;
    }

    const std::vector<int>& fusion_tensor() const { return n_; }
    const std::vector<LabelId>& duals() const { return dual_; }

    /// Labels nu with N^nu_{lambda,mu} > 0.
    std::vector<LabelId> channels(LabelId lambda, LabelId mu) const {
        std::vector<LabelId> out;
        for (LabelId nu = 0; nu < size_; ++nu)
            if (N(lambda, mu, nu) > 0) out.push_back(nu);
        return out;
    }

    /// d(lambda) as the Perron eigenvalue of the fusion matrix
    /// (N_lambda)^nu_mu = N^nu_{lambda,mu}.
    std::vector<double> pf_dimensions() const {
        std::vector<double> d(size_, 1.0);
        for (LabelId a = 0; a < size_; ++a) {
            MatrixXd na(size_, size_);
            for (LabelId mu = 0; mu < size_; ++mu)
                for (LabelId nu = 0; nu < size_; ++nu) na(nu, mu) = N(a, mu, nu);
            Eigen::EigenSolver<MatrixXd> es(na, /*computeEigenvectors=*/false);
            double best = 0.0;
            for (int i = 0; i < size_; ++i) best = std::max(best, es.eigenvalues()[i].real());
            d[a] = best;
        }
        return d;
    }

private:
    std::vector<std::string> names_;
    std::vector<int> n_;  // flat [lambda][mu][nu]
    std::vector<LabelId> dual_;
    std::optional<ModularData> modular_;
    std::vector<double> dims_;
    int size_ = 0;
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    bool skipped = false;
    double worst = 0.0;  // worst violation magnitude
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool pass = true;

    void add(std::string name, double worst, double tol) {
        bool ok = worst <= tol;
        checks.push_back({std::move(name), ok, false, worst});
        pass = pass && ok;
    }
    void add_skipped(std::string name) { checks.push_back({std::move(name), true, true, 0.0}); }
};

/// Verlinde formula: N^nu_{lambda,mu} = sum_sigma S_{lambda sigma} S_{mu sigma}
/// conj(S_{nu sigma}) / S_{0 sigma}, rounded to the nearest integer.
/// Returns the rounded tensor and the worst rounding residual.
inline std::pair<std::vector<int>, double> verlinde_fusion(const MatrixXcd& s) {
    const int n = static_cast<int>(s.rows());
    if (s.cols() != n) throw StructuralError("S matrix must be square");
    double unit_res = (s * s.adjoint() - MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    double sym_res = (s - s.transpose()).cwiseAbs().maxCoeff();
    if (unit_res > 1e-6) throw StructuralError("S matrix is not unitary");
    if (sym_res > 1e-6) throw StructuralError("S matrix is not symmetric");
    for (int i = 0; i < n; ++i)
        if (s(0, i).real() <= 0 || std::abs(s(0, i).imag()) > 1e-6)
            throw StructuralError("first row of S must be strictly positive");

    std::vector<int> out(static_cast<size_t>(n) * n * n, 0);
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Complex acc = 0;
                for (int x = 0; x < n; ++x) acc += s(a, x) * s(b, x) * std::conj(s(c, x)) / s(0, x);
                double rounded = std::round(acc.real());
                worst = std::max(worst, std::abs(acc - Complex(rounded, 0.0)));
                out[(static_cast<size_t>(a) * n + b) * n + c] = static_cast<int>(rounded);
            }
    if (worst > 1e-6) throw StructuralError("Verlinde numbers are not integral; modular data rejected");
    return {out, worst};
}

/// Permutation matrix C with C_{lambda,mu} = delta_{mu, conj(lambda)}.
inline CouplingMatrix conjugation_matrix(const FusionRing& ring) {
    CouplingMatrix c;
    c.Z = Eigen::MatrixXi::Zero(ring.size(), ring.size());
    for (LabelId a = 0; a < ring.size(); ++a) c.Z(a, ring.dual(a)) = 1;
    return c;
}

/// Checks every ring-level invariant and reports each with its worst
/// violation. Shape problems throw StructuralError before any check runs.
inline ValidationReport validate_ring(const FusionRing& ring, double tol = 1e-9) {
    ValidationReport rep;
    const int n = ring.size();

    // unit law N^nu_{lambda,0} = N^nu_{0,lambda} = delta
    double worst = 0.0;
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b) {
            worst = std::max(worst, std::abs(double(ring.N(a, 0, b) - (a == b ? 1 : 0))));
            worst = std::max(worst, std::abs(double(ring.N(0, a, b) - (a == b ? 1 : 0))));
        }
    rep.add("unit law", worst, 0.5);

    // associativity sum_s N^s_{ab} N^n_{sc} = sum_s N^s_{bc} N^n_{as}
    worst = 0.0;
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b)
            for (LabelId c = 0; c < n; ++c)
                for (LabelId d = 0; d < n; ++d) {
                    int lhs = 0, rhs = 0;
                    for (LabelId s = 0; s < n; ++s) {
                        lhs += ring.N(a, b, s) * ring.N(s, c, d);
                        rhs += ring.N(b, c, s) * ring.N(a, s, d);
                    }
                    worst = std::max(worst, std::abs(double(lhs - rhs)));
                }
    rep.add("associativity", worst, 0.5);

    // conjugates: N^0_{ab} = delta_{b, dual(a)}, dual involutive
    worst = 0.0;
    for (LabelId a = 0; a < n; ++a) {
        for (LabelId b = 0; b < n; ++b)
            worst = std::max(worst, std::abs(double(ring.N(a, b, 0) - (b == ring.dual(a) ? 1 : 0))));
        worst = std::max(worst, std::abs(double(ring.dual(ring.dual(a)) - a)));
    }
    rep.add("conjugation", worst, 0.5);

    // Frobenius reciprocity N^nu_{lm} = N^mu_{conj(l) nu} = N^lambda_{nu conj(m)}
    worst = 0.0;
    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b)
            for (LabelId c = 0; c < n; ++c) {
                int base = ring.N(a, b, c);
                worst = std::max(worst, std::abs(double(base - ring.N(ring.dual(a), c, b))));
                worst = std::max(worst, std::abs(double(base - ring.N(c, ring.dual(b), a))));
            }
    rep.add("Frobenius reciprocity", worst, 0.5);

    // dimension equation and positivity
    worst = 0.0;
    double worst_pos = 0.0, worst_dual = 0.0;
    for (LabelId a = 0; a < n; ++a) {
        worst_pos = std::max(worst_pos, std::max(0.0, 1.0 - ring.dim(a)));
        worst_dual = std::max(worst_dual, std::abs(ring.dim(a) - ring.dim(ring.dual(a))));
        for (LabelId b = 0; b < n; ++b) {
            double s = 0;
            for (LabelId c = 0; c < n; ++c) s += ring.N(a, b, c) * ring.dim(c);
            worst = std::max(worst, std::abs(ring.dim(a) * ring.dim(b) - s));
        }
    }
    rep.add("dimension equation", worst, tol);
    rep.add("dimensions >= 1", worst_pos, tol);
    rep.add("d(dual) = d", worst_dual, tol);

    // Verlinde consistency when modular data is present
    if (ring.has_modular()) {
        const auto& md = ring.modular();
        double s_unit = (md.S * md.S.adjoint() - MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
        double s_sym = (md.S - md.S.transpose()).cwiseAbs().maxCoeff();
        rep.add("S unitary", s_unit, tol);
        rep.add("S symmetric", s_sym, tol);
        double t_mod = 0.0;
        for (int i = 0; i < n; ++i) t_mod = std::max(t_mod, std::abs(std::abs(md.T[i]) - 1.0));
        rep.add("T unit modulus", t_mod, tol);
        try {
            auto [vn, res] = verlinde_fusion(md.S);
            int mismatch = 0;
            for (LabelId a = 0; a < n; ++a)
                for (LabelId b = 0; b < n; ++b)
                    for (LabelId c = 0; c < n; ++c)
                        if (vn[(static_cast<size_t>(a) * n + b) * n + c] != ring.N(a, b, c)) ++mismatch;
            rep.add("Verlinde", mismatch > 0 ? double(mismatch) : res, 1e-6);
        } catch (const StructuralError&) {
            rep.add("Verlinde", 1.0, 0.5);  // S rejected outright
        }
    } else {
        rep.add_skipped("Verlinde");
    }
    return rep;
}

inline std::string format_report(const ValidationReport& rep) {
    std::ostringstream os;
    for (const auto& c : rep.checks) {
        if (c.skipped)
            os << "  [skip] " << c.name << "\n";
        else
            os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << "  (worst " << c.worst
               << ")\n";
    }
    return os.str();
}

}  // namespace ctps
