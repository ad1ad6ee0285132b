#pragma once

#include <array>
#include <string>
#include <vector>

#include "rog/cone.hpp"

namespace rog {

enum class ClassTag {
  kFullPsd,
  kDirectSum,
  kCodim1,
  kCodim2FullExt,
  kTri,
  kFullExtDiag3,
  kIntertwineHan3S2,
  kHan4,
  kHan22,
  kFullExtHan3,
  kFullExtDiag2,
  kTernaryQuartic,
  kUnknown,
};

const char* to_string(ClassTag t);

/// Isomorphism class of a simple ROG cone of degree <= 4, or a direct sum
/// of such classes. Han(3) is Codim1 with signature (2,1,0).
struct ClassLabel {
  ClassTag tag = ClassTag::kUnknown;
  int n = 0;                       // FullPsd, Tri
  std::array<int, 3> signature{};  // Codim1
  std::vector<ClassLabel> children;  // DirectSum, sorted by str()
  std::string note;                // diagnostics for Unknown

  std::string str() const;
  bool operator==(const ClassLabel& o) const { return str() == o.str(); }
};

/// Codim1 label with the normalized signature of the defining form.
/// Throws invalid-input unless the cone is non-degenerate of codimension 1.
ClassLabel classify_codim1(const SpectrahedralCone& k);

/// Degree > 4 after reduction throws out-of-catalog. The input is assumed ROG;
/// a certified cone outside the catalog yields Unknown with a note.
ClassLabel classify_small(const SpectrahedralCone& k);

/// The tag name list of simple classes of each degree 1..4.
std::vector<std::string> catalog(int degree);

}  // namespace rog
