#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace pvkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thrown when a caller violates a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a numeric routine cannot produce a trustworthy answer
/// (non-convergence, ambiguous residuals).
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an operation is asked for a party structure it does not support.
class UnsupportedShape : public ContractViolation {
 public:
  explicit UnsupportedShape(const std::string& what) : ContractViolation(what) {}
};

/// Numeric cutoffs shared by all modules.
///
/// rank_rel     relative singular-value cutoff: sigma counts toward the rank
///              when sigma > rank_rel * sigma_max
/// psd_abs      eigenvalue floor below which a Hermitian operator is treated
///              as indefinite
/// residual_abs absolute residual for membership/consistency checks
/// dedupe_fid   fidelity gap under which two projective vectors are the same
struct Tolerance {
  double rank_rel = 1e-9;
  double psd_abs = 1e-10;
  double residual_abs = 1e-8;
  double dedupe_fid = 1e-8;

  void validate() const {
    auto ok = [](double v) { return v > 0.0 && v < 1e-2; };
    if (!ok(rank_rel) || !ok(psd_abs) || !ok(residual_abs) || !ok(dedupe_fid))
      throw ContractViolation("Tolerance fields must be strictly positive and < 1e-2");
  }
};

}  // namespace pvkit
