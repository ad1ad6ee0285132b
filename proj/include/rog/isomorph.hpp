#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rog/cone.hpp"
#include "rog/decompose.hpp"

namespace rog {

struct PartialEntry {
  int i = 0;
  int j = 0;
  double v = 0.0;
};

struct PartialMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<PartialEntry> entries;

  /// Throws invalid-input on out-of-range or non-finite entries.
  void validate() const;
};

struct CompletionResult {
  bool feasible = false;
  Vec e;
  Vec f;
  /// On infeasibility: a human-readable reason and the offending entries,
  /// either a zero entry or the (row, col) positions along a cycle.
  std::string violation;
  std::vector<std::pair<int, int>> witness;
};

/// Rank-1 completion C = e f^T of a real partial matrix.
CompletionResult rank1_complete(const PartialMatrix& a, double tol = 1e-9);
/// Same for entries in {-1, +1}; e and f are sign vectors.
CompletionResult rank1_complete_signs(const PartialMatrix& a);

struct IsoWitness {
  Mat s;
  std::vector<int> sigma;
  double max_error = 0.0;
};

enum class IsoStatus { kIsomorphic, kNotIsomorphic, kInconclusive, kIncompatible };
const char* to_string(IsoStatus s);

struct IsoResult {
  IsoStatus status = IsoStatus::kInconclusive;
  std::optional<IsoWitness> witness;
  std::string reason;
  std::vector<int> offending;  // index set for incompatibility
};

/// Index-matched reconstruction: finds S with y_i = sigma_i S x_i.
IsoResult reconstruct_isomorphism(const std::vector<Vec>& x, const std::vector<Vec>& y);

/// Decides K1 ≅ K2 by invariants and generator matching. Witness vectors
/// are matched up to positive scale: y ∝ S x.
IsoResult cones_isomorphic(const SpectrahedralCone& k1, const SpectrahedralCone& k2,
                           int max_candidates = 10000);

/// Cross ratio of the lines at angles phi_1..phi_4 in the plane.
double cross_ratio(const std::array<double, 4>& phi);
std::array<double, 6> s4_orbit(double lambda);
bool same_s4_orbit(double a, double b, double tol = 1e-9);

// Structural fingerprints shared with the classifier.

/// Signature (p, q, z) of the normal form Q of a codimension-1 cone, with
/// p >= q; nullopt unless dim = deg(deg+1)/2 - 1 and the cone is non-degenerate.
std::optional<std::array<int, 3>> codim1_signature(const SpectrahedralCone& k);

/// mates(i,j) = x_i x_j^T + x_j x_i^T ∈ L for generators i != j.
std::vector<std::vector<bool>> mate_matrix(const SpectrahedralCone& k);

/// Distinct 2-planes spanned by mate pairs whose whole span lies in the
/// rank-1 set; each entry is an orthonormal n x 2 basis.
std::vector<Mat> rank1_planes(const SpectrahedralCone& k);

/// When exactly one plane meets four others in distinct lines, returns the
/// cross ratio of those lines.
std::optional<double> hub_cross_ratio(const SpectrahedralCone& k);

}  // namespace rog
