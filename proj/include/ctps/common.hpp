#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ctps {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Index of a simple sector within a finite system. Index 0 is always the unit.
using LabelId = int;

/// Shape or schema problems (malformed tensors, missing entries). Distinct
/// from a validation failure, which is reported, not thrown.
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input file could not be parsed or violates the documented schema.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical rank / integrality decision could not be certified.
struct CertificationError : std::runtime_error {
    explicit CertificationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Residual thresholds used across the library. All CLI-overridable.
struct Thresholds {
    double structural = 1e-10;  // pentagon, hexagon, unitarity
    double derived = 1e-9;      // Q-system relations, Hom solves, dimension identities
    double end_to_end = 1e-8;   // full CTPS verification chains
    double cert_gap = 1e3;      // singular-value gap ratio for integer certification
};

inline double abs2(Complex z) { return std::norm(z); }

}  // namespace ctps
