#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace bq {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr cd I_UNIT{0.0, 1.0};

enum class Errc {
  ZeroEigenvalue,
  SingularConfocal,
  IsotropicEncounter,
  OffQuadric,
  NotRulingDirection,
  MultipleRoot,
  ChartSingularity,
  IsotropicNormal,
  PrimeIntegralViolation,
  StepFailure,
  ClosureViolation,
  UNearZero,
  DriftExceeded,
  SingularSuperposition,
  SingularBox,
  DistinctZRequired,
  DegenerateLambda,
  InvalidArgument,
  ConfigError,
  MissingRun,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Max row-sum norm.
inline double inf_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Bilinear square xᵀx (no conjugation).
inline cd bsq(const CVec& x) { return x.transpose() * x; }
inline cd bdot(const CVec& x, const CVec& y) { return x.transpose() * y; }

}  // namespace bq
