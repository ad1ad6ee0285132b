#include "rog/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rog/error.hpp"
#include "rog/isomorph.hpp"

namespace rog {

const char* to_string(ClassTag t) {
  switch (t) {
    case ClassTag::kFullPsd: return "FullPsd";
    case ClassTag::kDirectSum: return "DirectSum";
    case ClassTag::kCodim1: return "Codim1";
    case ClassTag::kCodim2FullExt: return "Codim2FullExt";
    case ClassTag::kTri: return "Tri";
    case ClassTag::kFullExtDiag3: return "FullExtDiag3";
    case ClassTag::kIntertwineHan3S2: return "IntertwineHan3S2";
    case ClassTag::kHan4: return "Han4";
    case ClassTag::kHan22: return "Han22";
    case ClassTag::kFullExtHan3: return "FullExtHan3";
    case ClassTag::kFullExtDiag2: return "FullExtDiag2";
    case ClassTag::kTernaryQuartic: return "TernaryQuartic";
    case ClassTag::kUnknown: return "Unknown";
  }
  return "Unknown";
}

std::string ClassLabel::str() const {
  std::ostringstream s;
  s << to_string(tag);
  switch (tag) {
    case ClassTag::kFullPsd:
    case ClassTag::kTri:
      s << "(" << n << ")";
      break;
    case ClassTag::kCodim1:
      s << "(" << signature[0] << "," << signature[1] << "," << signature[2] << ")";
      break;
    case ClassTag::kDirectSum:
      s << "[";
      for (size_t i = 0; i < children.size(); ++i) s << (i ? "," : "") << children[i].str();
      s << "]";
      break;
    default:
      break;
  }
  return s.str();
}

std::vector<std::string> catalog(int degree) {
  switch (degree) {
    case 1: return {"FullPsd(1)"};
    case 2: return {"FullPsd(2)"};
    case 3: return {"FullPsd(3)", "Codim1(2,1,0)", "Tri(3)"};
    case 4:
      return {"FullPsd(4)",   "FullExtDiag2",  "FullExtHan3",  "Han22",
              "Codim1(3,1,0)", "Codim2FullExt", "Tri(4)",       "FullExtDiag3",
              "IntertwineHan3S2", "Han4"};
    default:
      return {};
  }
}

namespace {

ClassLabel make(ClassTag t, int n = 0) {
  ClassLabel l;
  l.tag = t;
  l.n = n;
  return l;
}

ClassLabel unknown(std::string note) {
  ClassLabel l;
  l.note = std::move(note);
  return l;
}

// Tangent directions at x modulo x.
int tangent_excess(const SpectrahedralCone& k, const Vec& x) {
  return static_cast<int>(tangent_space(k, x).cols()) - 1;
}

// Degree 4, dimension 7.
ClassLabel classify_dim7(const SpectrahedralCone& k) {
  const auto& gens = k.generators();
  // Four independent rank-1 generators.
  Mat p(4, 0);
  for (const Vec& g : gens) {
    Mat trial(4, p.cols() + 1);
    trial << p, g;
    if (matrix_rank(trial, 1e-8) == trial.cols()) p = trial;
    if (p.cols() == 4) break;
  }
  if (p.cols() != 4) return unknown("certificate does not contain 4 independent rays");
  const Mat pinv = p.inverse();

  // Tangents y_i with y_ii = 0, in the coordinates of the basis p.
  std::array<Vec, 4> y;
  bool wide_tangent = false;
  for (int i = 0; i < 4; ++i) {
    Mat t = pinv * tangent_space(k, p.col(i));
    t.row(i).setZero();
    const Mat ti = orth(t, 1e-9);
    if (ti.cols() == 0) return unknown("a ray without tangent directions");
    if (ti.cols() > 1) wide_tangent = true;
    y[i] = ti.col(0);
  }
  // Rows (12, 13, 14, 23, 24, 34), columns y_1..y_4.
  static constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  Mat ym = Mat::Zero(6, 4);
  for (int r = 0; r < 6; ++r) {
    const int a = kPairs[r][0];
    const int b = kPairs[r][1];
    ym(r, a) = y[a](b);
    ym(r, b) = y[b](a);
  }
  bool all_nonzero = !wide_tangent;
  for (int c = 0; c < 4 && all_nonzero; ++c) {
    for (int r = 0; r < 6; ++r) {
      if ((kPairs[r][0] == c || kPairs[r][1] == c) && std::abs(ym(r, c)) <= 1e-8) {
        all_nonzero = false;
      }
    }
  }

  if (all_nonzero) {
    const Mat ker = null_space(ym, 1e-9);
    if (ker.cols() != 1) return unknown("Y has full column rank: the cone is not ROG");
    Vec beta = ker.col(0);
    if (beta.cwiseAbs().minCoeff() <= 1e-9) return unknown("degenerate kernel of Y");
    Mat ys(4, 4);
    for (int i = 0; i < 4; ++i) ys.col(i) = beta(i) * y[i];
    // ys(j, i) is y_ij after normalization; antisymmetry y_ij = -y_ji holds.
    auto yy = [&](int i, int j) { return ys(j - 1, i - 1); };
    const double t1 = 1.0 / (yy(1, 4) * yy(2, 3));
    const double t2 = 1.0 / (yy(1, 3) * yy(2, 4));
    const double t3 = 1.0 / (yy(1, 2) * yy(3, 4));
    const double c = t1 - t2 + t3;
    if (std::abs(c) <= 1e-6 * (std::abs(t1) + std::abs(t2) + std::abs(t3))) {
      return make(ClassTag::kHan4);
    }
    return unknown("Hankel condition fails: the cone is not ROG");
  }

  // Family with an S^2 face: separate by the tangent profile of the rays.
  int max_excess = 0;
  int count3 = 0;
  for (const Vec& g : gens) {
    const int t = tangent_excess(k, g);
    max_excess = std::max(max_excess, t);
    if (t == 2) ++count3;
  }
  if (max_excess >= 3) return make(ClassTag::kFullExtDiag3);
  if (max_excess == 2) {
    return count3 >= 2 ? make(ClassTag::kTri, 4) : make(ClassTag::kIntertwineHan3S2);
  }
  // No distinguished ray in the certificate: fall back to the S^2 planes.
  const auto planes = rank1_planes(k);
  if (planes.size() == 1) return make(ClassTag::kIntertwineHan3S2);
  if (planes.size() == 3) {
    const Mat common = intersect(intersect(planes[0], planes[1], 1e-8), planes[2], 1e-8);
    return common.cols() == 1 ? make(ClassTag::kFullExtDiag3) : make(ClassTag::kTri, 4);
  }
  return unknown("certificate lacks the rays that separate the S^2 family");
}

ClassLabel classify_simple(const SpectrahedralCone& k) {
  const int n = k.n();
  const int d = k.dim();
  const int full = svec_size(n);
  if (n <= 2) {
    if (d == full) return make(ClassTag::kFullPsd, n);
    return unknown("simple degree-2 cone must be full");
  }
  if (d == full) return make(ClassTag::kFullPsd, n);
  if (d == full - 1) {
    const ClassLabel c1 = classify_codim1(k);
    const auto& s = c1.signature;
    if (n == 3) {
      if (s == std::array<int, 3>{2, 1, 0}) return c1;
      if (s == std::array<int, 3>{1, 1, 1}) return make(ClassTag::kTri, 3);
      return unknown("codimension-1 form is semidefinite");
    }
    if (s == std::array<int, 3>{1, 1, 2}) return make(ClassTag::kFullExtDiag2);
    if (s == std::array<int, 3>{2, 1, 1}) return make(ClassTag::kFullExtHan3);
    if (s == std::array<int, 3>{2, 2, 0}) return make(ClassTag::kHan22);
    if (s == std::array<int, 3>{3, 1, 0}) return c1;
    return unknown("codimension-1 form is semidefinite");
  }
  if (n == 4 && d == 8) return make(ClassTag::kCodim2FullExt);
  if (n == 4 && d == 7) return classify_dim7(k);
  std::ostringstream msg;
  msg << "no simple ROG class of degree " << n << " and dimension " << d;
  return unknown(msg.str());
}

ClassLabel classify_nondegenerate(const SpectrahedralCone& k) {
  const auto parts = simplicity_partition(k);
  if (parts.size() == 1) return classify_simple(k);
  ClassLabel sum = make(ClassTag::kDirectSum);
  for (const FaceHandle& h : parts) {
    const ConePtr f = face_of(k, h);
    sum.children.push_back(classify_small(*f));
  }
  std::sort(sum.children.begin(), sum.children.end(),
            [](const ClassLabel& a, const ClassLabel& b) { return a.str() < b.str(); });
  return sum;
}

}  // namespace

ClassLabel classify_codim1(const SpectrahedralCone& k) {
  const auto sig = codim1_signature(k);
  if (!sig) {
    throw Error(ErrorKind::kInvalidInput,
                "classify_codim1: cone must be non-degenerate of codimension 1");
  }
  ClassLabel l = make(ClassTag::kCodim1);
  l.signature = *sig;
  return l;
}

ClassLabel classify_small(const SpectrahedralCone& k) {
  if (k.generators().empty()) {
    throw Error(ErrorKind::kMissingCertificate, "classify_small: cone has no certificate");
  }
  const Reduction red = reduce_nondegenerate(k);
  const int deg = red.cone->n();
  if (deg > 4) {
    throw Error(ErrorKind::kOutOfCatalog,
                "classify_small: degree " + std::to_string(deg) + " is outside the catalog");
  }
  return classify_nondegenerate(*red.cone);
}

}  // namespace rog
