#pragma once

// Classical-limit comparison: at α close to 1, ψ = id and r = 2 the discrete operators
// should reproduce −Δ on [0,T]² and −d²/dx² on [0,T].

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hk {

struct ReductionRow {
  std::string quantity;
  double computed = 0.0;
  double exact = 0.0;
  double relative_error = 0.0;
  /// Empty for rows reported for information only.
  std::optional<double> tolerance;
  bool ok = true;
};

struct ReductionOptions {
  double T = 1.0;
  double alpha = 0.999;
  double beta = 0.5;
  std::size_t n2d = 64;     ///< eigenvalue grid
  std::size_t n1d = 255;    ///< torsion grid
  std::size_t napply = 256; ///< operator-apply grid
  /// Nodes closer than this to the edge are left out of the layer-free apply sup-norm.
  double layer = 0.05;
};

/// Rows: lambda1 vs 2π²/T² (1.5%), 1D torsion sup vs T²/8 (1%), apply of
/// sin(πx/T)sin(πy/T) vs 2π²/T²·u in relative L² (3%) and in sup-norm away from the edge
/// layer (3%), plus the sup-norm over all interior nodes (information only).
std::vector<ReductionRow> classical_reduction(const ReductionOptions& opt = {});

}  // namespace hk
