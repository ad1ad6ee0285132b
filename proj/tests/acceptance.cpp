// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rog/classify.hpp"
#include "rog/constructions.hpp"
#include "rog/decompose.hpp"
#include "rog/error.hpp"
#include "rog/isomorph.hpp"
#include "rog/pencil.hpp"
#include "rog/qcqp.hpp"

using namespace rog;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::normal_distribution<double> gauss;

Mat random_mat(Rng& rng, int r, int c) {
  Mat a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = gauss(rng);
  return a;
}

Vec random_vec(Rng& rng, int n) { return random_mat(rng, n, 1).col(0); }

SymMatrix random_sym(Rng& rng, int n) {
  const Mat a = random_mat(rng, n, n);
  return SymMatrix(Mat(a + a.transpose()));
}

// Well-conditioned random matrix: orthogonal times a bounded diagonal.
Mat random_conditioned(Rng& rng, int n) {
  const Mat q = random_mat(rng, n, n).householderQr().householderQ();
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = u(rng);
  return q * d.asDiagonal();
}

int rank_of(const Mat& m, double rel = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  return static_cast<int>((es.eigenvalues().array().abs() > rel * std::max(top, 1e-300)).count());
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ConePtr intertwined_han3_s2() {
  return intertwine(hankel_cone(3), full_psd_cone(2), coordinate_glue(3, {2}, 2, {0}));
}

std::vector<std::pair<std::string, ConePtr>> sample_families() {
  Mat q = Mat::Zero(4, 4);
  q.diagonal() << 1, 1, 1, -1;
  return {
      {"Han4", hankel_cone(4)},
      {"Han(2,2)", hankel_cone(2, 2)},
      {"Tri5", tridiag_cone(5)},
      {"Codim1(3,1,0)", codim1_cone(SymMatrix(q))},
      {"FullExt(Diag3,4)", full_extension(diagonal_cone(3), 4)},
      {"Intertwine(Han3,S2)", intertwined_han3_s2()},
      {"CrossRatio", cross_ratio_cone({0.1, 0.7, 1.3, 2.2})},
      {"Chordal(6)", chordal_cone({6, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {3, 5}}})},
  };
}

// ---------------------------------------------------------------- 1
Outcome dimensions() {
  Outcome o;
  auto expect = [&](const std::string& what, int got, int want) {
    if (got != want) {
      o.pass = false;
      o.detail += what + "=" + std::to_string(got) + " (want " + std::to_string(want) + ") ";
    }
  };
  for (int n = 2; n <= 6; ++n) expect("Han(" + std::to_string(n) + ")", hankel_cone(n)->dim(), 2 * n - 1);
  expect("Han(2,2)", hankel_cone(2, 2)->dim(), 9);
  expect("TernaryQuartic", ternary_quartic_cone()->dim(), 15);
  expect("CrossRatio", cross_ratio_cone({0.1, 0.7, 1.3, 2.2})->dim(), 11);
  for (int n = 2; n <= 8; ++n) expect("Tri(" + std::to_string(n) + ")", tridiag_cone(n)->dim(), 2 * n - 1);
  if (o.pass) o.detail = "Han(2..6), Han(2,2), ternary quartic, cross-ratio, Tri(2..8) exact";
  return o;
}

// ---------------------------------------------------------------- 2
struct Tree {
  ConePtr cone;
  int degree;  // by the composition laws
};

Tree random_tree(Rng& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 5);
  switch (pick(rng)) {
    case 0: {
      const int n = 1 + static_cast<int>(rng() % 2);
      return {full_psd_cone(n), n};
    }
    case 1: {
      const int n = 2 + static_cast<int>(rng() % 2);
      return {diagonal_cone(n), n};
    }
    case 2: return {hankel_cone(3), 3};
    case 3: return {tridiag_cone(3), 3};
    case 4: {
      const Tree a = random_tree(rng, depth - 1);
      const Tree b = random_tree(rng, depth - 1);
      if (a.cone->n() + b.cone->n() > 9) return a;
      return {direct_sum(a.cone, b.cone), a.degree + b.degree};
    }
    default: {
      const Tree a = random_tree(rng, depth - 1);
      const int extra = 1 + static_cast<int>(rng() % 2);
      if (a.cone->n() + extra > 9) return a;
      return {full_extension(a.cone, a.cone->n() + extra), extra + a.degree};
    }
  }
}

int max_rank_of_generators(const SpectrahedralCone& k) {
  Mat s = Mat::Zero(k.n(), k.n());
  for (const Vec& g : k.generators()) s += g * g.transpose();
  return rank_of(s);
}

Outcome degree_laws() {
  Outcome o;
  Rng rng(2024);
  int trees = 0;
  for (const auto& [name, k] : sample_families()) {
    const int d = degree(*k);
    const int want = max_rank_of_generators(*k);
    if (d != want) {
      o.pass = false;
      o.detail += name + ": degree " + std::to_string(d) + " vs max rank " + std::to_string(want) + "; ";
    }
  }
  for (int t = 0; t < 50; ++t) {
    Tree tr = random_tree(rng, 3);
    while (tr.cone->n() < 3) tr = random_tree(rng, 3);
    ++trees;
    const int d = degree(*tr.cone);
    if (d != tr.degree || d != max_rank_of_generators(*tr.cone)) {
      o.pass = false;
      o.detail += "tree " + std::to_string(t) + ": degree " + std::to_string(d) + " vs law " +
                  std::to_string(tr.degree) + "; ";
    }
  }
  if (o.pass) o.detail = "8 families + " + std::to_string(trees) + " random trees, exact";
  return o;
}

// ---------------------------------------------------------------- 3
Outcome caratheodory() {
  Outcome o;
  Rng rng(31);
  int cases = 0;
  double worst = 0.0;
  for (const auto& [name, k] : sample_families()) {
    const int deg = degree(*k);
    int accepted = 0;
    for (int attempt = 0; accepted < 100 && attempt < 1000; ++attempt) {
      const int r = 1 + static_cast<int>(rng() % deg);
      Mat x = Mat::Zero(k->n(), k->n());
      Mat vs(k->n(), r);
      for (int i = 0; i < r; ++i) {
        const Vec v = extreme_ray_oracle(*k, FaceHandle::whole(k->n()), &rng);
        vs.col(i) = v;
        x += (0.5 + std::abs(gauss(rng))) * v * v.transpose();
      }
      if (rank_of(x, 1e-8) != r) continue;  // dependent draw, rank not known
      ++accepted;
      ++cases;
      const Decomposition d = carath_decompose(*k, SymMatrix(x));
      const double resid = (d.sum(k->n()) - x).norm() / x.norm();
      worst = std::max(worst, resid);
      bool members = true;
      for (const RankOneAtom& a : d.atoms) {
        members = members && a.weight >= 0.0 &&
                  membership(*k, SymMatrix(Mat(a.vector * a.vector.transpose())), 1e-7);
      }
      if (static_cast<int>(d.atoms.size()) != r || resid > 1e-7 || !members) {
        if (o.pass) {
          o.detail += name + " rank " + std::to_string(r) + ": " + std::to_string(d.atoms.size()) +
                      " atoms, residual " + fmt("%.2e", resid) + (members ? "" : ", non-member") + "; ";
        }
        o.pass = false;
      }
    }
    if (accepted < 100) {
      o.pass = false;
      o.detail += name + ": only " + std::to_string(accepted) + " members of known rank; ";
    }
  }
  if (o.pass) {
    o.detail = std::to_string(cases) + " members over 8 families, worst residual " + fmt("%.1e", worst);
  }
  return o;
}

// ---------------------------------------------------------------- 4
Outcome iso_roundtrip() {
  Outcome o;
  Rng rng(41);
  std::vector<std::pair<std::string, ConePtr>> fams = sample_families();
  fams.push_back({"Han5", hankel_cone(5)});
  fams.push_back({"Tri6", tridiag_cone(6)});
  fams.push_back({"Han3+S1", direct_sum(hankel_cone(3), full_psd_cone(1))});
  double worst = 0.0;
  for (const auto& [name, k] : fams) {
    const ConePtr k2 = congruence(k, random_conditioned(rng, k->n()));
    const IsoResult r = cones_isomorphic(*k, *k2);
    if (r.status != IsoStatus::kIsomorphic || !r.witness) {
      o.pass = false;
      o.detail += name + ": " + to_string(r.status) + " (" + r.reason + "); ";
      continue;
    }
    // Per-generator error of the witness, measured here.
    const Mat& s = r.witness->s;
    double err = 0.0;
    for (const Vec& x : k->generators()) {
      const Vec y = s * x;
      double best = 1e300;
      for (const Vec& g : k2->generators()) {
        best = std::min(best, std::min((y.normalized() - g).norm(), (y.normalized() + g).norm()));
      }
      err = std::max(err, best);
    }
    worst = std::max(worst, err);
    if (err > 1e-7) {
      o.pass = false;
      o.detail += name + ": witness error " + fmt("%.2e", err) + "; ";
    }
  }
  const auto s_han = codim1_signature(*hankel_cone(3));
  const auto s_tri = codim1_signature(*tridiag_cone(3));
  const IsoResult ht = cones_isomorphic(*hankel_cone(3), *tridiag_cone(3));
  const bool sig_ok = s_han && s_tri && *s_han == std::array<int, 3>{2, 1, 0} &&
                      *s_tri == std::array<int, 3>{1, 1, 1};
  if (!sig_ok || ht.status != IsoStatus::kNotIsomorphic) {
    o.pass = false;
    o.detail += std::string("Han3 vs Tri3: ") + to_string(ht.status) + "; ";
  }
  if (o.pass) {
    o.detail = std::to_string(fams.size()) + " families recovered, worst generator error " +
               fmt("%.1e", worst) + "; Han3 (2,1,0) vs Tri3 (1,1,1) rejected";
  }
  return o;
}

// ---------------------------------------------------------------- 5
bool brute_force_signs(const PartialMatrix& p) {
  for (int mask = 0; mask < (1 << p.rows); ++mask) {
    // e fixed; f_j is forced by the first entry of column j.
    std::vector<int> f(p.cols, 0);
    bool ok = true;
    for (const PartialEntry& e : p.entries) {
      const int ei = (mask >> e.i) & 1 ? -1 : 1;
      const int want = static_cast<int>(e.v) * ei;
      if (f[e.j] == 0) f[e.j] = want;
      ok = ok && f[e.j] == want;
    }
    if (ok) return true;
  }
  return false;
}

// Nonzero entries: log|a_ij| = log|e_i| + log|f_j| and the sign system must
// both be consistent; checked by least squares on the incidence system.
bool loglinear_feasible(const PartialMatrix& p) {
  const int m = static_cast<int>(p.entries.size());
  Mat a = Mat::Zero(m, p.rows + p.cols);
  Vec b(m);
  for (int r = 0; r < m; ++r) {
    a(r, p.entries[r].i) = 1.0;
    a(r, p.rows + p.entries[r].j) = 1.0;
    b(r) = std::log(std::abs(p.entries[r].v));
  }
  const Vec sol = a.completeOrthogonalDecomposition().solve(b);
  if ((a * sol - b).norm() > 1e-7) return false;
  PartialMatrix signs = p;
  for (PartialEntry& e : signs.entries) e.v = e.v > 0 ? 1.0 : -1.0;
  return brute_force_signs(signs);
}

Outcome completion() {
  Outcome o;
  Rng rng(51);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int sign_feasible = 0;
  int sign_mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int m = 1 + static_cast<int>(rng() % 6);
    PartialMatrix p{n, m, {}};
    const double density = 0.2 + 0.6 * unif(rng);
    const bool planted = t % 2 == 0;
    Vec e(n), f(m);
    for (int i = 0; i < n; ++i) e(i) = unif(rng) < 0.5 ? -1 : 1;
    for (int j = 0; j < m; ++j) f(j) = unif(rng) < 0.5 ? -1 : 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (unif(rng) < density) {
          double v = planted ? e(i) * f(j) : (unif(rng) < 0.5 ? -1.0 : 1.0);
          if (planted && unif(rng) < 0.1) v = -v;
          p.entries.push_back({i, j, v});
        }
    const bool want = brute_force_signs(p);
    const CompletionResult got = rank1_complete_signs(p);
    sign_feasible += want;
    if (got.feasible != want) ++sign_mismatch;
    if (got.feasible) {
      for (const PartialEntry& x : p.entries) {
        if (std::abs(got.e(x.i) * got.f(x.j) - x.v) > 1e-12) ++sign_mismatch;
      }
    }
  }
  int real_feasible = 0;
  int real_mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int m = 2 + static_cast<int>(rng() % 5);
    Vec e(n), f(m);
    for (int i = 0; i < n; ++i) e(i) = (unif(rng) < 0.5 ? -1 : 1) * (0.5 + 2 * unif(rng));
    for (int j = 0; j < m; ++j) f(j) = (unif(rng) < 0.5 ? -1 : 1) * (0.5 + 2 * unif(rng));
    PartialMatrix p{n, m, {}};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (unif(rng) < 0.55) p.entries.push_back({i, j, e(i) * f(j)});
    if (p.entries.empty()) continue;
    if (t % 2 == 1) {
      PartialEntry& bad = p.entries[rng() % p.entries.size()];
      bad.v *= unif(rng) < 0.5 ? -1.0 : 1.7;
    }
    const bool want = loglinear_feasible(p);
    const CompletionResult got = rank1_complete(p);
    real_feasible += want;
    if (got.feasible != want) ++real_mismatch;
    if (got.feasible) {
      for (const PartialEntry& x : p.entries) {
        if (std::abs(got.e(x.i) * got.f(x.j) - x.v) > 1e-8 * (1 + std::abs(x.v))) ++real_mismatch;
      }
    }
  }
  o.pass = sign_mismatch == 0 && real_mismatch == 0;
  o.detail = "signs: " + std::to_string(sign_mismatch) + " mismatches over 1000 (" +
             std::to_string(sign_feasible) + " feasible); real: " + std::to_string(real_mismatch) +
             " mismatches over 1000 (" + std::to_string(real_feasible) + " feasible)";
  return o;
}

// ---------------------------------------------------------------- 6
// Lines at angles 0, pi/2, pi/4, atan(1/lambda) have cross ratio lambda
// (points 0, inf, 1, 1/lambda of the projective line).
std::array<double, 4> angles_for(double lambda) {
  return {0.0, std::numbers::pi / 2, std::numbers::pi / 4, std::atan(1.0 / lambda)};
}

std::vector<double> orbit(double l) {
  return {l, 1 / l, 1 - l, 1 / (1 - l), l / (l - 1), (l - 1) / l};
}

std::array<double, 4> moved(const std::array<double, 4>& a, const Mat& g) {
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    const Vec v = g * Vec((Vec(2) << std::cos(a[i]), std::sin(a[i])).finished());
    double t = std::atan2(v(1), v(0));
    if (t < 0) t += std::numbers::pi;
    if (t >= std::numbers::pi) t -= std::numbers::pi;
    out[i] = t;
  }
  return out;
}

Outcome cross_ratio_family() {
  Outcome o;
  Rng rng(61);
  const double l1 = 4.0 / 3.0;
  const double l2 = 5.0 / 2.0;
  bool disjoint = true;
  for (double a : orbit(l1))
    for (double b : orbit(l2)) disjoint = disjoint && std::abs(a - b) > 1e-6;
  if (!disjoint) {
    o.pass = false;
    o.detail += "orbits of 4/3 and 5/2 intersect; ";
  }
  const auto base = moved(angles_for(l1), random_conditioned(rng, 2));
  const ConePtr k1 = cross_ratio_cone(base);
  int accepted = 0;
  // Permuted lines (another orbit member) and projectively moved lines.
  std::vector<std::array<double, 4>> equivalent = {
      {base[1], base[0], base[2], base[3]},
      {base[2], base[3], base[0], base[1]},
      {base[0], base[2], base[1], base[3]},
  };
  for (int t = 0; t < 3; ++t) equivalent.push_back(moved(base, random_conditioned(rng, 2)));
  for (const auto& a : equivalent) {
    const IsoResult r = cones_isomorphic(*k1, *cross_ratio_cone(a));
    if (r.status == IsoStatus::kIsomorphic && r.witness && r.witness->max_error <= 1e-7) {
      ++accepted;
    } else {
      o.pass = false;
      o.detail += std::string("equivalent pair: ") + to_string(r.status) + " " + r.reason + "; ";
    }
  }
  const IsoResult diff = cones_isomorphic(*k1, *cross_ratio_cone(moved(angles_for(l2), random_conditioned(rng, 2))));
  if (diff.status != IsoStatus::kNotIsomorphic) {
    o.pass = false;
    o.detail += std::string("4/3 vs 5/2: ") + to_string(diff.status) + " " + diff.reason;
  }
  if (o.pass) {
    o.detail = std::to_string(accepted) + " equivalent pairs with witnesses; 4/3 vs 5/2 rejected (" +
               diff.reason + ")";
  }
  return o;
}

// ---------------------------------------------------------------- 7
Outcome pencils() {
  Outcome o;
  Rng rng(71);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_rec = 0.0;
  double worst_orth = 0.0;
  int failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int d0 = unif(rng) < 0.25 ? 1 : 0;
    // Block sizes summing to n - d0, at most 4 blocks with separated angles.
    std::vector<int> sizes;
    int left = n - d0;
    while (left > 0) {
      const int s = std::min(left, 1 + static_cast<int>(rng() % 2));
      sizes.push_back(s);
      left -= s;
    }
    const int kb = static_cast<int>(sizes.size());
    std::vector<double> ang(kb);
    const double offset = unif(rng) * std::numbers::pi / kb;
    for (int k = 0; k < kb; ++k) ang[k] = offset + k * std::numbers::pi / kb + 0.2 * unif(rng) / kb;
    Mat e1 = Mat::Zero(n, n);
    Mat e2 = Mat::Zero(n, n);
    int off = d0;
    for (int k = 0; k < kb; ++k) {
      const int s = sizes[k];
      Mat phi = random_conditioned(rng, s);
      phi = phi * Vec::Ones(s).unaryExpr([&](double) { return unif(rng) < 0.5 ? -1.0 : 1.0; }).asDiagonal() *
            phi.transpose();
      e1.block(off, off, s, s) = std::cos(ang[k]) * phi;
      e2.block(off, off, s, s) = std::sin(ang[k]) * phi;
      off += s;
    }
    const Mat p = random_conditioned(rng, n);
    const Mat pinv = p.inverse();
    const Mat q1 = pinv.transpose() * e1 * pinv;
    const Mat q2 = pinv.transpose() * e2 * pinv;
    try {
      const PencilDecomposition pd = pencil_decompose(SymMatrix(q1), SymMatrix(q2), &rng);
      Mat full(n, 0);
      Mat r1 = Mat::Zero(n, n);
      Mat r2 = Mat::Zero(n, n);
      full = pd.h0;
      int o2 = static_cast<int>(pd.h0.cols());
      for (const PencilBlock& b : pd.blocks) {
        const int s = static_cast<int>(b.basis.cols());
        full.conservativeResize(n, full.cols() + s);
        full.rightCols(s) = b.basis;
        r1.block(o2, o2, s, s) = std::cos(b.angle) * b.phi;
        r2.block(o2, o2, s, s) = std::sin(b.angle) * b.phi;
        o2 += s;
      }
      if (full.cols() != n) throw Error(ErrorKind::kNotStructured, "block dimensions do not sum to n");
      const Mat finv = full.inverse();
      const double scale = std::max(q1.norm(), q2.norm());
      const double rec = std::max((finv.transpose() * r1 * finv - q1).norm(),
                                  (finv.transpose() * r2 * finv - q2).norm()) / scale;
      double orth = 0.0;
      for (size_t i = 0; i < pd.blocks.size(); ++i)
        for (size_t j = 0; j < pd.blocks.size(); ++j)
          if (i != j) {
            const Mat& bi = pd.blocks[i].basis;
            const Mat& bj = pd.blocks[j].basis;
            orth = std::max({orth, (bi.transpose() * q1 * bj).norm() / scale,
                             (bi.transpose() * q2 * bj).norm() / scale});
          }
      worst_rec = std::max(worst_rec, rec);
      worst_orth = std::max(worst_orth, orth);
      if (rec > 1e-7 || orth > 1e-7 || static_cast<int>(pd.blocks.size()) != kb) ++failures;
    } catch (const Error& e) {
      ++failures;
      if (o.detail.empty()) o.detail = std::string("first failure: ") + e.what() + "; ";
    }
  }
  o.pass = failures == 0;
  o.detail += std::to_string(failures) + " failures / 1000; worst reconstruction " + fmt("%.1e", worst_rec) +
              ", worst cross-block " + fmt("%.1e", worst_orth);
  return o;
}

// ---------------------------------------------------------------- 8
Outcome biquartic() {
  Rng rng(81);
  int disagreements = 0;
  int negative = 0;
  int deadband = 0;
  for (int t = 0; t < 10000; ++t) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const SymMatrix q1 = random_sym(rng, n);
    const SymMatrix q2 = random_sym(rng, n);
    const Vec x = random_vec(rng, n);
    const Vec y = random_vec(rng, n);
    const double p = biquartic_p(q1, q2, x, y);
    if (std::abs(p) <= 1e-9) {
      ++deadband;
      continue;
    }
    const bool extreme = rank2_extreme_check({q1, q2}, x, y).has_value();
    negative += p < 0;
    if (extreme != (p < 0)) ++disagreements;
  }
  Outcome o;
  o.pass = disagreements == 0;
  o.detail = std::to_string(disagreements) + " disagreements over 10000 (" + std::to_string(negative) +
             " with p < 0, " + std::to_string(deadband) + " in the deadband)";
  return o;
}

// ---------------------------------------------------------------- 9
Outcome classifier() {
  Outcome o;
  Rng rng(91);
  Mat q = Mat::Zero(4, 4);
  q.diagonal() << 1, 1, 1, -1;
  const std::vector<std::pair<std::string, ConePtr>> cones = {
      {"FullPsd(1)", full_psd_cone(1)},
      {"FullPsd(2)", full_psd_cone(2)},
      {"FullPsd(3)", full_psd_cone(3)},
      {"Codim1(2,1,0)", hankel_cone(3)},
      {"Tri(3)", tridiag_cone(3)},
      {"FullPsd(4)", full_psd_cone(4)},
      {"FullExtDiag2", full_extension(diagonal_cone(2), 4)},
      {"FullExtHan3", full_extension(hankel_cone(3), 4)},
      {"Han22", hankel_cone(2, 2)},
      {"Codim1(3,1,0)", codim1_cone(SymMatrix(q))},
      {"Codim2FullExt", full_extension(direct_sum(full_psd_cone(1), full_psd_cone(2)), 4)},
      {"Tri(4)", tridiag_cone(4)},
      {"FullExtDiag3", full_extension(diagonal_cone(3), 4)},
      {"IntertwineHan3S2", intertwined_han3_s2()},
      {"Han4", hankel_cone(4)},
  };
  std::vector<int> counts = {0, 0, 0, 0};
  for (int d = 1; d <= 4; ++d) counts[d - 1] = static_cast<int>(catalog(d).size());
  if (counts != std::vector<int>{1, 1, 3, 10}) {
    o.pass = false;
    o.detail += "catalog sizes differ from 1,1,3,10; ";
  }
  std::vector<std::string> labels;
  for (const auto& [want, k] : cones) {
    const std::string got = classify_small(*k).str();
    labels.push_back(got);
    bool ok = got == want;
    for (int t = 0; t < 10 && ok; ++t) {
      const std::string moved = classify_small(*congruence(k, random_conditioned(rng, k->n()))).str();
      if (moved != want) {
        ok = false;
        o.detail += want + " moved to " + moved + "; ";
      }
    }
    if (got != want) o.detail += want + " labelled " + got + "; ";
    o.pass = o.pass && ok;
  }
  std::vector<std::string> all;
  for (int d = 1; d <= 4; ++d)
    for (const std::string& s : catalog(d)) all.push_back(s);
  std::sort(all.begin(), all.end());
  std::sort(labels.begin(), labels.end());
  if (all != labels) {
    o.pass = false;
    o.detail += "constructions do not cover the catalog; ";
  }
  if (o.pass) o.detail = "15 catalog cones (1,1,3,10) labelled correctly, invariant under 10 congruences each";
  return o;
}

// ---------------------------------------------------------------- 10
struct Oracle {
  std::string name;
  QcqpProblem p;
  std::function<std::vector<Vec>()> rank1_feasible;  // dense sample of {x : x^T A_i x = 0}
};

double sampled_min(const QcqpProblem& p, const std::vector<Vec>& xs) {
  double best = 1e300;
  for (const Vec& x : xs) {
    const double b = x.dot(p.b.mat() * x);
    if (b > 1e-12) best = std::min(best, x.dot(p.s.mat() * x) / b);
  }
  return best;
}

std::vector<Vec> circle(int count, const std::function<Vec(double, double)>& embed) {
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) {
    const double t = std::numbers::pi * i / count;
    out.push_back(embed(std::cos(t), std::sin(t)));
  }
  return out;
}

Outcome qcqp_exactness() {
  Outcome o;
  Rng rng(101);
  std::vector<std::pair<std::string, ConePtr>> fams = sample_families();
  fams.push_back({"Han6", hankel_cone(6)});
  fams.push_back({"Han3", hankel_cone(3)});
  int certified = 0;
  double worst_gap = 0.0;
  double worst_feas = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto& [name, k] = fams[t % fams.size()];
    QcqpProblem p{random_sym(rng, k->n()), SymMatrix::identity(k->n()), k->constraint_basis()};
    if (t % 3 == 1) {
      const Mat a = random_mat(rng, k->n(), k->n());
      p.b = SymMatrix(Mat(a * a.transpose() + 0.5 * Mat::Identity(k->n(), k->n())));
    }
    QcqpOptions opt;
    opt.certificate = k;
    opt.samples = 0;
    const ExactnessCertificate c = certify_exactness(p, opt);
    if (c.status != Exactness::kExactByRog || !c.x_opt) {
      o.pass = false;
      o.detail += name + ": " + to_string(c.status) + " " + c.note + "; ";
      continue;
    }
    const Vec& x = *c.x_opt;
    const double val = x.dot(p.s.mat() * x);
    double feas = std::abs(x.dot(p.b.mat() * x) - 1.0);
    for (const SymMatrix& a : p.a) feas = std::max(feas, std::abs(x.dot(a.mat() * x)));
    const double gap = std::abs(c.relaxed_value - val) / (1.0 + std::abs(c.relaxed_value));
    worst_gap = std::max(worst_gap, gap);
    worst_feas = std::max(worst_feas, feas);
    if (gap > 1e-5 || feas > 1e-6) {
      o.pass = false;
      o.detail += name + ": gap " + fmt("%.2e", gap) + " feasibility " + fmt("%.2e", feas) + "; ";
    } else {
      ++certified;
    }
  }
  // n <= 3: relaxed value against a dense parametrization of the rank-1 feasible set.
  std::vector<Oracle> small;
  {
    Mat a = Mat::Zero(2, 2);
    a.diagonal() << 1, -1;
    small.push_back({"Codim1 n=2", {random_sym(rng, 2), SymMatrix::identity(2), {SymMatrix(a)}}, [] {
                       return std::vector<Vec>{Vec((Vec(2) << 1, 1).finished()),
                                               Vec((Vec(2) << 1, -1).finished())};
                     }});
  }
  for (int t = 0; t < 3; ++t) {
    small.push_back({"Han3", {random_sym(rng, 3), SymMatrix::identity(3), hankel_cone(3)->constraint_basis()}, [] {
                       std::vector<Vec> xs;
                       for (int i = -200000; i <= 200000; ++i) {
                         const double s = i / 2000.0;
                         xs.push_back((Vec(3) << 1, s, s * s).finished());
                       }
                       xs.push_back((Vec(3) << 0, 0, 1).finished());
                       return xs;
                     }});
    small.push_back({"Tri3", {random_sym(rng, 3), SymMatrix::identity(3), tridiag_cone(3)->constraint_basis()}, [] {
                       auto a = circle(20000, [](double c, double s) { return Vec((Vec(3) << c, s, 0).finished()); });
                       auto b = circle(20000, [](double c, double s) { return Vec((Vec(3) << 0, c, s).finished()); });
                       a.insert(a.end(), b.begin(), b.end());
                       return a;
                     }});
    small.push_back({"Diag2", {random_sym(rng, 2), SymMatrix::identity(2), diagonal_cone(2)->constraint_basis()}, [] {
                       return std::vector<Vec>{Vec::Unit(2, 0), Vec::Unit(2, 1)};
                     }});
  }
  double worst_small = 0.0;
  for (const Oracle& s : small) {
    const SdpSolution sol = solve_relaxation(s.p);
    const double want = sampled_min(s.p, s.rank1_feasible());
    const double diff = std::abs(sol.objective - want);
    worst_small = std::max(worst_small, diff);
    if (sol.status != SdpStatus::kOptimal || diff > 1e-3) {
      o.pass = false;
      o.detail += s.name + ": relaxed " + fmt("%.6f", sol.objective) + " vs sampled " + fmt("%.6f", want) + "; ";
    }
  }
  if (o.pass) {
    o.detail = std::to_string(certified) + "/50 certified instances, worst relative gap " + fmt("%.1e", worst_gap) +
               ", worst feasibility " + fmt("%.1e", worst_feas) + "; " + std::to_string(small.size()) +
               " small instances within " + fmt("%.1e", worst_small) + " of sampling";
  }
  return o;
}

// ---------------------------------------------------------------- 11
Outcome block_toeplitz() {
  Outcome o;
  Rng rng(111);
  std::uniform_real_distribution<double> unif(0.0, 2 * std::numbers::pi);
  int failures = 0;
  double worst_ratio = 0.0;
  double worst_resid = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int blocks = 2 + static_cast<int>(rng() % 3);
    const int m = 1 + static_cast<int>(rng() % 4);
    const int cap = (blocks - 1) * m;
    const int rank = 1 + static_cast<int>(rng() % cap);
    const int n = blocks * m;
    CMat tm = CMat::Zero(n, n);
    for (int k = 0; k < rank; ++k) {
      const std::complex<double> z = std::polar(1.0, unif(rng));
      CVec x(m);
      for (int i = 0; i < m; ++i) x(i) = {gauss(rng), gauss(rng)};
      CVec v(n);
      std::complex<double> zp = 1.0;
      for (int b = 0; b < blocks; ++b, zp *= z) v.segment(b * m, m) = zp * x;
      tm += (0.5 + std::abs(gauss(rng))) * v * v.adjoint();
    }
    try {
      const ComplexDecomposition d = decompose_block_toeplitz(HermMatrix(tm), blocks, m);
      const double resid = (d.sum(n) - tm).norm() / tm.norm();
      double ratio_err = 0.0;
      for (const ComplexAtom& a : d.atoms) {
        const CVec b0 = a.vector.segment(0, m);
        const CVec b1 = a.vector.segment(m, m);
        const std::complex<double> z = b0.dot(b1) / b0.squaredNorm();
        ratio_err = std::max(ratio_err, std::abs(std::abs(z) - 1.0));
        for (int b = 1; b < blocks; ++b) {
          const CVec diff = a.vector.segment(b * m, m) - z * a.vector.segment((b - 1) * m, m);
          ratio_err = std::max(ratio_err, diff.norm());
        }
      }
      worst_ratio = std::max(worst_ratio, ratio_err);
      worst_resid = std::max(worst_resid, resid);
      if (static_cast<int>(d.atoms.size()) != rank || ratio_err > 1e-8 || resid > 1e-7) ++failures;
    } catch (const Error& e) {
      ++failures;
      if (o.detail.empty()) o.detail = std::string("first failure: ") + e.what() + "; ";
    }
  }
  o.pass = failures == 0;
  o.detail += std::to_string(failures) + " failures / 100; worst block-ratio error " + fmt("%.1e", worst_ratio) +
              ", worst residual " + fmt("%.1e", worst_resid);
  return o;
}

// ---------------------------------------------------------------- 12
ChordalGraph random_chordal(Rng& rng, int n) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ChordalGraph g{n, {}};
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int v = 1; v < n; ++v) {
    if (unif(rng) < 0.15) continue;  // isolated at insertion
    const int u = static_cast<int>(rng() % v);
    std::vector<int> clique = {u};
    for (int w = 0; w < v; ++w) {
      if (w == u || !adj[u][w] || unif(rng) < 0.5) continue;
      bool all = true;
      for (int c : clique) all = all && adj[c][w];
      if (all) clique.push_back(w);
    }
    for (int c : clique) {
      adj[c][v] = adj[v][c] = true;
      g.edges.emplace_back(c, v);
    }
  }
  return g;
}

bool connected(const ChordalGraph& g) {
  std::vector<int> parent(g.n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& [a, b] : g.edges) parent[find(a)] = find(b);
  int roots = 0;
  for (int i = 0; i < g.n; ++i) roots += find(i) == i;
  return roots <= 1;
}

Outcome structural() {
  Outcome o;
  Rng rng(121);
  int checked = 0;
  std::vector<std::pair<std::string, ConePtr>> simple = sample_families();
  simple.push_back({"Han6", hankel_cone(6)});
  simple.push_back({"Han(3,2)", hankel_cone(3, 2)});
  simple.push_back({"TernaryQuartic", ternary_quartic_cone()});
  for (const auto& [name, k] : simple) {
    if (!is_simple(*k)) {
      o.pass = false;
      o.detail += name + " not simple; ";
      continue;
    }
    const int d = degree(*k);
    ++checked;
    if (k->dim() < 2 * d - 1) {
      o.pass = false;
      o.detail += name + ": dim " + std::to_string(k->dim()) + " < 2 deg - 1; ";
    }
    if (!isolated_rays(*k).empty() && d > 1) {
      o.pass = false;
      o.detail += name + ": simple cone with isolated rays; ";
    }
  }
  // Isolated rays are exactly the R_+ summands.
  for (int t = 0; t < 20; ++t) {
    std::vector<ConePtr> parts;
    int ones = 0;
    const int count = 2 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i) {
      switch (rng() % 4) {
        case 0: parts.push_back(full_psd_cone(1)); ++ones; break;
        case 1: parts.push_back(diagonal_cone(2)); ones += 2; break;
        case 2: parts.push_back(hankel_cone(3)); break;
        default: parts.push_back(tridiag_cone(3)); break;
      }
    }
    const ConePtr k = congruence(direct_sum(parts), random_conditioned(rng, [&] {
                                   int n = 0;
                                   for (const ConePtr& p : parts) n += p->n();
                                   return n;
                                 }()));
    const int iso = static_cast<int>(isolated_rays(*k).size());
    if (iso != ones || iso > degree(*k)) {
      o.pass = false;
      o.detail += "sum with " + std::to_string(ones) + " R_+ factors: " + std::to_string(iso) + " isolated rays; ";
    }
  }
  int agree = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const ChordalGraph g = random_chordal(rng, n);
    const bool simple_cone = is_simple(*chordal_cone(g));
    if (simple_cone == connected(g)) {
      ++agree;
    } else {
      o.pass = false;
      o.detail += "chordal graph on " + std::to_string(n) + " vertices: simple=" + (simple_cone ? "1" : "0") + "; ";
    }
  }
  if (o.pass) {
    o.detail = std::to_string(checked) + " simple cones satisfy dim >= 2 deg - 1; isolated rays = R_+ factors on 20 sums; " +
               std::to_string(agree) + "/100 chordal graphs agree";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "dimension constants", 1.0, dimensions},
      {2, "degree laws", 10.0, degree_laws},
      {3, "Caratheodory decomposition", 60.0, caratheodory},
      {4, "isomorphism round-trip", 60.0, iso_roundtrip},
      {5, "rank-1 completion", 30.0, completion},
      {6, "cross-ratio family", 30.0, cross_ratio_family},
      {7, "pencil decomposition", 30.0, pencils},
      {8, "biquartic consistency", 30.0, biquartic},
      {9, "classifier", 120.0, classifier},
      {10, "QCQP exactness", 120.0, qcqp_exactness},
      {11, "block-Toeplitz decomposition", 30.0, block_toeplitz},
      {12, "structural invariants", 60.0, structural},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += " [over budget]";
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s (%.2fs / %.0fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
