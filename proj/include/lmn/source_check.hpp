#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmn/adr1d.hpp"
#include "lmn/cases.hpp"

namespace lmn::harness {

/// Worst residual of one governing equation over the samples.
struct EquationResidual {
  std::string equation;
  double max_residual = 0.0;  // absolute
  double scale = 0.0;         // largest term magnitude seen
  double relative = 0.0;      // max_residual / scale
  Vec3 x = Vec3::Zero();      // sample attaining the maximum
  double t = 0.0;
};

struct SourceReport {
  std::string case_name;
  double tol = 1e-5;
  std::vector<EquationResidual> equations;

  bool passed() const;
  /// Throws SourceInconsistencyError naming the first failing equation and sample.
  void require() const;
};

/// Residual of every governing equation with the case's coded sources, from
/// fourth-order central differences with step 1e-4 of the domain scale.
SourceReport validate_source_terms(const Case3D& c, int samples = 200, double tol = 1e-5,
                                   std::uint64_t seed = 12345);
SourceReport validate_source_terms(const adr1d::Case1D& c, int samples = 200, double tol = 1e-5,
                                   std::uint64_t seed = 12345);

}  // namespace lmn::harness
