#pragma once

#include <cmath>
#include <numbers>
#include <numeric>

#include "ctps/skeletal.hpp"

namespace ctps {

namespace su2 {

/// Quantum integer [n] = sin(n pi/(k+2)) / sin(pi/(k+2)).
inline double qint(int n, int k) {
    const double x = std::numbers::pi / (k + 2);
    return std::sin(n * x) / std::sin(x);
}

inline double qfact(int n, int k) {
    double acc = 1.0;
    for (int m = 1; m <= n; ++m) acc *= qint(m, k);
    return acc;
}

inline bool admissible(int a, int b, int c, int k) {
    return (a + b + c) % 2 == 0 && std::abs(a - b) <= c && c <= a + b && a + b + c <= 2 * k;
}

inline double triangle(int a, int b, int c, int k) {
    return std::sqrt(qfact((-a + b + c) / 2, k) * qfact((a - b + c) / 2, k) *
                     qfact((a + b - c) / 2, k) / qfact((a + b + c) / 2 + 1, k));
}

/// q-deformed 6j symbol at q = exp(i pi/(k+2)), labels in twice-spin units.
/// The z-sum truncates at z <= k because [z+1]! vanishes beyond.
inline double sixj(int a, int b, int e, int c, int d, int f, int k) {
    if (!admissible(a, b, e, k) || !admissible(e, c, d, k) || !admissible(b, c, f, k) ||
        !admissible(a, f, d, k))
        return 0.0;
    const double pre = triangle(a, b, e, k) * triangle(e, c, d, k) * triangle(b, c, f, k) *
                       triangle(a, f, d, k);
    const int zmin = std::max(std::max((a + b + e) / 2, (e + c + d) / 2),
                              std::max((b + c + f) / 2, (a + f + d) / 2));
    const int zmax = std::min(std::min((a + b + c + d) / 2, (a + e + c + f) / 2),
                              std::min((b + e + d + f) / 2, k));
    double acc = 0.0;
    for (int z = zmin; z <= zmax; ++z) {
        double denom = qfact(z - (a + b + e) / 2, k) * qfact(z - (e + c + d) / 2, k) *
                       qfact(z - (b + c + f) / 2, k) * qfact(z - (a + f + d) / 2, k) *
                       qfact((a + b + c + d) / 2 - z, k) * qfact((a + e + c + f) / 2 - z, k) *
                       qfact((b + e + d + f) / 2 - z, k);
        double term = qfact(z + 1, k) / denom;
        acc += (z % 2 == 0 ? term : -term);
    }
    return pre * acc;
}

}  // namespace su2

/// SU(2) level-k model: k+1 labels in twice-spin units, truncated
/// Clebsch-Gordan fusion, q-6j F-symbols in the unitary gauge, standard
/// R-phases, and the level-k (S, T).
inline SkeletalData gen_su2k(int k) {
    if (k < 1 || k > 12) throw StructuralError("su2k level must be in [1, 12]");
    const int n = k + 1;
    const double pi = std::numbers::pi;

    std::vector<std::string> names(n);
    for (int a = 0; a < n; ++a) names[a] = std::to_string(a);
    std::vector<int> fusion(static_cast<size_t>(n) * n * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (su2::admissible(a, b, c, k))
                    fusion[(static_cast<size_t>(a) * n + b) * n + c] = 1;
    std::vector<LabelId> dual(n);
    for (int a = 0; a < n; ++a) dual[a] = a;

    ModularData md;
    md.S.resize(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            md.S(a, b) = std::sqrt(2.0 / (k + 2)) * std::sin((a + 1.0) * (b + 1.0) * pi / (k + 2));
    md.T.resize(n);
    const double ccharge = 3.0 * k / (k + 2);
    for (int a = 0; a < n; ++a) {
        double h = a * (a + 2.0) / (4.0 * (k + 2));
        md.T[a] = std::polar(1.0, 2.0 * pi * (h - ccharge / 24.0));
    }

    FusionRing ring(names, fusion, dual, md);

    std::map<uint64_t, Complex> fmap, rmap;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    for (int e = 0; e < n; ++e) {
                        if (!su2::admissible(a, b, e, k) || !su2::admissible(e, c, d, k)) continue;
                        for (int f = 0; f < n; ++f) {
                            if (!su2::admissible(b, c, f, k) || !su2::admissible(a, f, d, k)) continue;
                            double sign = ((a + b + c + d) / 2) % 2 == 0 ? 1.0 : -1.0;
                            double val = sign * std::sqrt(su2::qint(e + 1, k) * su2::qint(f + 1, k)) *
                                         su2::sixj(a, b, e, c, d, f, k);
                            if (a == 0 || b == 0 || c == 0) val = 1.0;  // unit gauge, exact
                            fmap[f_key(a, b, c, d, e, f)] = Complex(val, 0.0);
                        }
                    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                if (!su2::admissible(a, b, c, k)) continue;
                double ph = pi * (c * (c + 2.0) - a * (a + 2.0) - b * (b + 2.0)) / (4.0 * (k + 2));
                Complex val = std::polar(1.0, ph);
                if (((a + b - c) / 2) % 2 != 0) val = -val;
                if (a == 0 || b == 0) val = 1.0;
                rmap[r_key(a, b, c)] = val;
            }
    return SkeletalData(std::move(ring), std::move(fmap), std::move(rmap), true);
}

/// Pointed Z_n model with quadratic form q(a) = exp(2 pi i p a^2 / n^2).
/// Well-definedness on Z_n requires n | 2p. The associator is the standard
/// cocycle from the carry term and the braiding the associated bicharacter;
/// (S, T) are attached when the form is non-degenerate.
inline SkeletalData gen_pointed(int n, int p) {
    if (n < 1) throw StructuralError("group order must be >= 1");
    if ((2 * p) % n != 0)
        throw StructuralError("inconsistent quadratic form: n must divide 2p");
    const double pi = std::numbers::pi;

    std::vector<std::string> names(n);
    for (int a = 0; a < n; ++a) names[a] = std::to_string(a);
    std::vector<int> fusion(static_cast<size_t>(n) * n * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) fusion[(static_cast<size_t>(a) * n + b) * n + (a + b) % n] = 1;
    std::vector<LabelId> dual(n);
    for (int a = 0; a < n; ++a) dual[a] = (n - a) % n;

    std::optional<ModularData> md;
    const int t = (2 * p) / n;
    if (n == 1 || std::gcd(((t % n) + n) % n, n) == 1) {
        ModularData m;
        m.S.resize(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                m.S(a, b) = std::polar(1.0 / std::sqrt(double(n)), 2.0 * pi * t * a * b / n);
        Complex gauss = 0;
        for (int a = 0; a < n; ++a) gauss += std::polar(1.0, 2.0 * pi * p * a * a / double(n) / n);
        double ccharge = n == 1 ? 0.0 : std::arg(gauss) * 8.0 / (2.0 * pi);
        m.T.resize(n);
        for (int a = 0; a < n; ++a)
            m.T[a] = std::polar(1.0, 2.0 * pi * (p * a * a / double(n) / n - ccharge / 24.0));
        md = std::move(m);
    }

    FusionRing ring(names, fusion, dual, md);

    std::map<uint64_t, Complex> fmap, rmap;
    for (int a = 1; a < n; ++a)
        for (int b = 1; b < n; ++b) {
            for (int c = 1; c < n; ++c) {
                int carry = (b + c) - (b + c) % n;  // 0 or n
                Complex val = std::polar(1.0, 2.0 * pi * p * a * carry / double(n) / n);
                int e = (a + b) % n, f = (b + c) % n, d = (a + b + c) % n;
                fmap[f_key(a, b, c, d, e, f)] = val;
            }
            rmap[r_key(a, b, (a + b) % n)] = std::polar(1.0, 2.0 * pi * p * a * b / double(n) / n);
        }
    return SkeletalData(std::move(ring), std::move(fmap), std::move(rmap), true);
}

/// Ising model: labels {1, sigma, psi}, d(sigma) = sqrt(2),
/// Frobenius-Schur indicator +1.
inline SkeletalData gen_ising() {
    const double pi = std::numbers::pi;
    const double s2 = std::sqrt(2.0);
    std::vector<std::string> names = {"1", "sigma", "psi"};
    const int n = 3;
    std::vector<int> fusion(27, 0);
    auto set = [&](int a, int b, int c) { fusion[(static_cast<size_t>(a) * n + b) * n + c] = 1; };
    for (int a = 0; a < n; ++a) { set(0, a, a); set(a, 0, a); }
    set(1, 1, 0); set(1, 1, 2);
    set(1, 2, 1); set(2, 1, 1);
    set(2, 2, 0);
    std::vector<LabelId> dual = {0, 1, 2};

    ModularData md;
    md.S.resize(3, 3);
    md.S << 0.5, 0.5 * s2, 0.5, 0.5 * s2, 0.0, -0.5 * s2, 0.5, -0.5 * s2, 0.5;
    md.T.resize(3);
    const double c = 0.5;
    const double hs[3] = {0.0, 1.0 / 16.0, 0.5};
    for (int a = 0; a < 3; ++a) md.T[a] = std::polar(1.0, 2.0 * pi * (hs[a] - c / 24.0));

    FusionRing ring(names, fusion, dual, md);

    std::map<uint64_t, Complex> fmap, rmap;
    fmap[f_key(1, 1, 1, 1, 0, 0)] = 1.0 / s2;
    fmap[f_key(1, 1, 1, 1, 0, 2)] = 1.0 / s2;
    fmap[f_key(1, 1, 1, 1, 2, 0)] = 1.0 / s2;
    fmap[f_key(1, 1, 1, 1, 2, 2)] = -1.0 / s2;
    fmap[f_key(1, 1, 2, 2, 0, 1)] = 1.0;
    fmap[f_key(1, 1, 2, 0, 2, 1)] = 1.0;
    fmap[f_key(1, 2, 1, 0, 1, 1)] = 1.0;
    fmap[f_key(1, 2, 1, 2, 1, 1)] = -1.0;
    fmap[f_key(1, 2, 2, 1, 1, 0)] = 1.0;
    fmap[f_key(2, 1, 1, 0, 1, 2)] = 1.0;
    fmap[f_key(2, 1, 1, 2, 1, 0)] = 1.0;
    fmap[f_key(2, 1, 2, 1, 1, 1)] = -1.0;
    fmap[f_key(2, 2, 1, 1, 0, 1)] = 1.0;
    fmap[f_key(2, 2, 2, 2, 0, 0)] = 1.0;

    rmap[r_key(1, 1, 0)] = std::polar(1.0, -pi / 8.0);
    rmap[r_key(1, 1, 2)] = std::polar(1.0, 3.0 * pi / 8.0);
    rmap[r_key(1, 2, 1)] = Complex(0.0, -1.0);
    rmap[r_key(2, 1, 1)] = Complex(0.0, -1.0);
    rmap[r_key(2, 2, 0)] = -1.0;
    return SkeletalData(std::move(ring), std::move(fmap), std::move(rmap), true);
}

/// Fibonacci model: labels {1, tau}, d(tau) the golden ratio, h_tau = 2/5.
inline SkeletalData gen_fibonacci() {
    const double pi = std::numbers::pi;
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<std::string> names = {"1", "tau"};
    const int n = 2;
    std::vector<int> fusion(8, 0);
    auto set = [&](int a, int b, int c) { fusion[(static_cast<size_t>(a) * n + b) * n + c] = 1; };
    set(0, 0, 0); set(0, 1, 1); set(1, 0, 1); set(1, 1, 0); set(1, 1, 1);
    std::vector<LabelId> dual = {0, 1};

    ModularData md;
    md.S.resize(2, 2);
    double norm = 1.0 / std::sqrt(2.0 + phi);
    md.S << norm, norm * phi, norm * phi, -norm;
    md.T.resize(2);
    const double c = 14.0 / 5.0;
    md.T[0] = std::polar(1.0, 2.0 * pi * (0.0 - c / 24.0));
    md.T[1] = std::polar(1.0, 2.0 * pi * (0.4 - c / 24.0));

    FusionRing ring(names, fusion, dual, md);

    std::map<uint64_t, Complex> fmap, rmap;
    fmap[f_key(1, 1, 1, 0, 1, 1)] = 1.0;
    fmap[f_key(1, 1, 1, 1, 0, 0)] = 1.0 / phi;
    fmap[f_key(1, 1, 1, 1, 0, 1)] = 1.0 / std::sqrt(phi);
    fmap[f_key(1, 1, 1, 1, 1, 0)] = 1.0 / std::sqrt(phi);
    fmap[f_key(1, 1, 1, 1, 1, 1)] = -1.0 / phi;

    rmap[r_key(1, 1, 0)] = std::polar(1.0, -4.0 * pi / 5.0);
    rmap[r_key(1, 1, 1)] = std::polar(1.0, 3.0 * pi / 5.0);
    return SkeletalData(std::move(ring), std::move(fmap), std::move(rmap), true);
}

inline SkeletalData gen_builtin(const std::string& name) {
    if (name == "ising") return gen_ising();
    if (name == "fibonacci" || name == "fib") return gen_fibonacci();
    throw StructuralError("unknown builtin model: " + name);
}

}  // namespace ctps
