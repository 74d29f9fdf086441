#pragma once

// Test-only oracles, independent of the library's induction machinery.

#include <vector>

#include "ctps/common.hpp"

namespace ctps::oracle {

/// Exhaustive enumeration of nonnegative-integer matrices Z with Z(0,0) = 1,
/// entries bounded by `bound`, commuting with S and diag(T). Works inside the
/// real commutant subspace: its basis is found by SVD, candidate matrices are
/// reconstructed from integer assignments on pivot coordinates.
inline std::vector<Eigen::MatrixXi> modular_commutant_integer_matrices(const MatrixXcd& s,
                                                                       const VectorXcd& t,
                                                                       int bound) {
    const int n = static_cast<int>(s.rows());
    const int nn = n * n;
    // real-linear constraints on vec(Z): re/im of ZS - SZ and ZT - TZ
    MatrixXd a(4 * nn, nn);
    a.setZero();
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            int row_s = p * n + q;
            int row_t = 2 * nn + p * n + q;
            for (int r = 0; r < n; ++r) {
                // (ZS)_{pq} = Z_{pr} S_{rq};  (SZ)_{pq} = S_{pr} Z_{rq}
                a(row_s, p * n + r) += s(r, q).real();
                a(nn + row_s, p * n + r) += s(r, q).imag();
                a(row_s, r * n + q) -= s(p, r).real();
                a(nn + row_s, r * n + q) -= s(p, r).imag();
            }
            Complex dt = t[q] - t[p];
            a(row_t, p * n + q) += dt.real();
            a(nn + row_t, p * n + q) += dt.imag();
        }

    Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
    VectorXd sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-9 * std::max(1.0, sv[0])) ++rank;
    const int dim = nn - rank;
    MatrixXd basis = svd.matrixV().rightCols(dim);  // nn x dim

    // pivot rows via column-pivoted QR of basis^T
    Eigen::ColPivHouseholderQR<MatrixXd> qr(basis.transpose());
    std::vector<int> pivots;
    for (int i = 0; i < dim; ++i) pivots.push_back(qr.colsPermutation().indices()[i]);
    MatrixXd bp(dim, dim);
    for (int i = 0; i < dim; ++i) bp.row(i) = basis.row(pivots[i]);
    Eigen::FullPivLU<MatrixXd> lu(bp);
    if (!lu.isInvertible()) throw std::runtime_error("oracle: pivot selection failed");

    std::vector<Eigen::MatrixXi> found;
    std::vector<int> assign(dim, 0);
    while (true) {
        VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = assign[i];
        VectorXd z = basis * lu.solve(v);
        bool ok = true;
        Eigen::MatrixXi zi(n, n);
        for (int p = 0; p < n && ok; ++p)
            for (int q = 0; q < n && ok; ++q) {
                double val = z[p * n + q];
                double r = std::round(val);
                if (std::abs(val - r) > 1e-6 || r < -0.5 || r > bound + 0.5) ok = false;
                zi(p, q) = static_cast<int>(r);
            }
        if (ok && zi(0, 0) == 1) {
            MatrixXcd zc = zi.cast<double>().cast<Complex>();
            double res = (zc * s - s * zc).cwiseAbs().maxCoeff();
            MatrixXcd td = t.asDiagonal();
            res = std::max(res, (zc * td - td * zc).cwiseAbs().maxCoeff());
            if (res < 1e-8) {
                bool dup = false;
                for (const auto& f : found) dup = dup || f == zi;
                if (!dup) found.push_back(zi);
            }
        }
        int at = 0;
        while (at < dim && ++assign[at] > bound) assign[at++] = 0;
        if (at == dim) break;
    }
    return found;
}

}  // namespace ctps::oracle
