#pragma once

#include <optional>

#include "ctps/fusion_ring.hpp"

namespace ctps {

struct N2Result {
    bool holds = false;
    std::optional<std::pair<int, int>> offender;  // first violating entry
};

/// (N2): the coupling matrix couples no non-trivial sector to the trivial
/// one: row 0 and column 0 of Z are unit vectors.
inline N2Result check_n2(const CouplingMatrix& z) {
    if (z.Z(0, 0) != 1) throw StructuralError("coupling matrix must have Z_00 = 1");
    N2Result res;
    res.holds = true;
    for (int b = 1; b < z.cols(); ++b)
        if (z.Z(0, b) != 0) {
            res.holds = false;
            res.offender = {0, b};
            return res;
        }
    for (int a = 1; a < z.rows(); ++a)
        if (z.Z(a, 0) != 0) {
            res.holds = false;
            res.offender = {a, 0};
            return res;
        }
    return res;
}

struct N3Result {
    std::optional<std::vector<LabelId>> witness;         // sigma: Delta_1 -> Delta_2
    std::optional<std::array<LabelId, 3>> violation;     // first violated fusion triple
    bool not_permutation = false;
};

/// (N3): Z is the permutation matrix of a fusion-rule-preserving bijection.
inline N3Result find_n3(const CouplingMatrix& z, const FusionRing& ring1, const FusionRing& ring2) {
    if (z.rows() != ring1.size() || z.cols() != ring2.size())
        throw StructuralError("coupling matrix shape does not match the rings");
    N3Result res;
    std::vector<LabelId> sigma(ring1.size(), -1);
    std::vector<bool> hit(ring2.size(), false);
    for (int a = 0; a < z.rows(); ++a) {
        int ones = 0;
        for (int b = 0; b < z.cols(); ++b) {
            if (z.Z(a, b) == 0) continue;
            if (z.Z(a, b) != 1 || hit[b]) {
                res.not_permutation = true;
                return res;
            }
            sigma[a] = b;
            hit[b] = true;
            ++ones;
        }
        if (ones != 1) {
            res.not_permutation = true;
            return res;
        }
    }
    for (LabelId a = 0; a < ring1.size(); ++a)
        for (LabelId b = 0; b < ring1.size(); ++b)
            for (LabelId c = 0; c < ring1.size(); ++c)
                if (ring1.N(a, b, c) != ring2.N(sigma[a], sigma[b], sigma[c])) {
                    res.violation = {a, b, c};
                    return res;
                }
    res.witness = std::move(sigma);
    return res;
}

struct NormalityVerdict {
    bool n2_holds = false;
    std::optional<std::vector<LabelId>> n3_witness;
    bool normal = false;  // in the sense of the (N2)/(N3) characterization
    std::optional<std::pair<int, int>> offender;
};

/// Runs (N2) and (N3) and asserts their agreement; a disagreement means the
/// input is not the coupling matrix of a CTPS over these rings and is
/// reported loudly rather than resolved silently.
inline NormalityVerdict classify(const CouplingMatrix& z, const FusionRing& ring1,
                                 const FusionRing& ring2) {
    NormalityVerdict v;
    N2Result n2 = check_n2(z);
    N3Result n3 = find_n3(z, ring1, ring2);
    v.n2_holds = n2.holds;
    v.offender = n2.offender;
    v.n3_witness = n3.witness;
    if (n2.holds != n3.witness.has_value())
        throw StructuralError(
            "(N2)/(N3) verdicts disagree: the matrix cannot be the coupling matrix of a CTPS over "
            "these systems");
    v.normal = n2.holds;
    return v;
}

}  // namespace ctps
