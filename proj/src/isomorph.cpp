#include "rog/isomorph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "rog/classify.hpp"
#include "rog/error.hpp"

namespace rog {

void PartialMatrix::validate() const {
  if (rows < 0 || cols < 0) throw Error(ErrorKind::kInvalidInput, "partial matrix: negative shape");
  for (const PartialEntry& p : entries) {
    if (p.i < 0 || p.i >= rows || p.j < 0 || p.j >= cols) {
      throw Error(ErrorKind::kInvalidInput, "partial matrix: entry out of bounds");
    }
    if (!std::isfinite(p.v)) throw Error(ErrorKind::kInvalidInput, "partial matrix: non-finite entry");
  }
}

const char* to_string(IsoStatus s) {
  switch (s) {
    case IsoStatus::kIsomorphic: return "isomorphic";
    case IsoStatus::kNotIsomorphic: return "not-isomorphic";
    case IsoStatus::kInconclusive: return "inconclusive";
    case IsoStatus::kIncompatible: return "incompatible";
  }
  return "unknown";
}

namespace {

// Propagates e_i f_j = A_ij over the bipartite graph of nonzero entries.
// Nodes 0..rows-1 are rows, rows..rows+cols-1 columns.
CompletionResult propagate(const PartialMatrix& a, double tol, bool exact) {
  a.validate();
  const int nr = a.rows;
  const int nc = a.cols;
  CompletionResult out;
  out.e = Vec::Ones(nr);
  out.f = Vec::Ones(nc);

  // Deduplicate repeated positions; conflicting repeats are infeasible.
  std::map<std::pair<int, int>, double> val;
  for (const PartialEntry& p : a.entries) {
    auto [it, fresh] = val.emplace(std::make_pair(p.i, p.j), p.v);
    if (!fresh && std::abs(it->second - p.v) > tol * std::max(1.0, std::abs(p.v))) {
      out.violation = "entry specified twice with different values";
      out.witness = {{p.i, p.j}};
      return out;
    }
  }

  std::vector<bool> zero_row(nr, false);
  std::vector<bool> zero_col(nc, false);
  std::vector<bool> row_all_zero(nr, true);
  std::vector<bool> col_all_zero(nc, true);
  auto is_zero = [&](double v) { return exact ? v == 0.0 : std::abs(v) <= tol; };
  for (const auto& [pos, v] : val) {
    if (!is_zero(v)) {
      row_all_zero[pos.first] = false;
      col_all_zero[pos.second] = false;
    }
  }
  for (const auto& [pos, v] : val) {
    if (!is_zero(v)) continue;
    if (row_all_zero[pos.first]) {
      zero_row[pos.first] = true;
    } else if (col_all_zero[pos.second]) {
      zero_col[pos.second] = true;
    } else {
      out.violation = "zero entry whose row and column both contain nonzero entries";
      out.witness = {pos};
      return out;
    }
  }

  const int nodes = nr + nc;
  std::vector<std::vector<std::pair<int, double>>> adj(nodes);
  for (const auto& [pos, v] : val) {
    if (is_zero(v)) continue;
    adj[pos.first].emplace_back(nr + pos.second, v);
    adj[nr + pos.second].emplace_back(pos.first, v);
  }
  std::vector<double> value(nodes, 0.0);
  std::vector<int> parent(nodes, -2);
  std::vector<int> depth(nodes, 0);
  auto entry_of = [&](int u, int w) {
    return u < nr ? std::make_pair(u, w - nr) : std::make_pair(w, u - nr);
  };
  // Columns first so a component containing a column is rooted at f_j = 1.
  std::vector<int> roots(nodes);
  for (int c = 0; c < nc; ++c) roots[c] = nr + c;
  for (int r = 0; r < nr; ++r) roots[nc + r] = r;
  for (int root : roots) {
    if (parent[root] != -2 || adj[root].empty()) continue;
    parent[root] = -1;
    value[root] = 1.0;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const auto& [w, v] : adj[u]) {
        if (parent[w] == -2) {
          parent[w] = u;
          depth[w] = depth[u] + 1;
          value[w] = v / value[u];
          queue.push_back(w);
          continue;
        }
        if (w == parent[u] || u > w) continue;
        const double prod = value[u] * value[w];
        const bool ok = exact ? prod == v : std::abs(prod - v) <= tol * std::max(1.0, std::abs(v));
        if (ok) continue;
        // Cycle: tree paths from u and w to their common ancestor, closed by (u,w).
        std::vector<std::pair<int, int>> left;
        std::vector<std::pair<int, int>> right;
        int x = u;
        int y = w;
        while (x != y) {
          if (depth[x] >= depth[y]) {
            left.push_back(entry_of(x, parent[x]));
            x = parent[x];
          } else {
            right.push_back(entry_of(y, parent[y]));
            y = parent[y];
          }
        }
        out.witness = left;
        out.witness.insert(out.witness.end(), right.rbegin(), right.rend());
        out.witness.push_back(entry_of(u, w));
        std::ostringstream msg;
        msg << "cycle product mismatch along " << out.witness.size() << " entries:";
        for (const auto& [i, j] : out.witness) msg << " (" << i << "," << j << ")";
        out.violation = msg.str();
        return out;
      }
    }
  }
  for (int r = 0; r < nr; ++r) {
    if (zero_row[r]) {
      out.e(r) = 0.0;
    } else if (parent[r] != -2) {
      out.e(r) = value[r];
    }
  }
  for (int c = 0; c < nc; ++c) {
    if (zero_col[c]) {
      out.f(c) = 0.0;
    } else if (parent[nr + c] != -2) {
      out.f(c) = value[nr + c];
    }
  }
  out.feasible = true;
  return out;
}

}  // namespace

CompletionResult rank1_complete(const PartialMatrix& a, double tol) {
  return propagate(a, tol, false);
}

CompletionResult rank1_complete_signs(const PartialMatrix& a) {
  for (const PartialEntry& p : a.entries) {
    if (p.v != 1.0 && p.v != -1.0) {
      throw Error(ErrorKind::kInvalidInput, "rank1_complete_signs: entries must be +1 or -1");
    }
  }
  return propagate(a, 0.0, true);
}

namespace {

Mat stack(const std::vector<Vec>& v, int n) {
  Mat m(n, static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) m.col(static_cast<int>(i)) = v[i];
  return m;
}

// Greedy independent column indices, in the given order of preference.
std::vector<int> greedy_basis(const Mat& x, const std::vector<int>& order) {
  const int n = static_cast<int>(x.rows());
  std::vector<int> basis;
  Mat q(n, 0);
  for (int i : order) {
    const Vec r = x.col(i) - q * (q.transpose() * x.col(i));
    if (r.norm() > 1e-8 * std::max(1.0, x.col(i).norm())) {
      basis.push_back(i);
      q.conservativeResize(n, q.cols() + 1);
      q.col(q.cols() - 1) = r.normalized();
      if (static_cast<int>(basis.size()) == n) break;
    }
  }
  return basis;
}

double witness_error(const Mat& s, const std::vector<Vec>& x, const std::vector<Vec>& y,
                     const std::vector<int>& sigma) {
  double worst = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, (y[i] - sigma[i] * s * x[i]).norm());
  }
  return worst;
}

}  // namespace

IsoResult reconstruct_isomorphism(const std::vector<Vec>& x, const std::vector<Vec>& y) {
  IsoResult out;
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorKind::kInvalidInput, "reconstruct_isomorphism: lists differ in length or are empty");
  }
  const int n = static_cast<int>(x.front().size());
  const int m = static_cast<int>(x.size());
  const Mat xm = stack(x, n);
  const Mat ym = stack(y, n);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  const std::vector<int> basis = greedy_basis(xm, order);
  if (static_cast<int>(basis.size()) != n) {
    throw Error(ErrorKind::kInvalidInput, "reconstruct_isomorphism: x vectors do not span R^n");
  }
  Mat xi(n, n);
  Mat yi(n, n);
  for (int c = 0; c < n; ++c) {
    xi.col(c) = xm.col(basis[c]);
    yi.col(c) = ym.col(basis[c]);
  }
  const double dx = std::abs(xi.determinant());
  const double dy = std::abs(yi.determinant());
  if (dy <= 1e-12 * std::pow(std::max(1.0, ym.norm()), n)) {
    out.status = IsoStatus::kIncompatible;
    out.reason = "image of an independent x subset is dependent";
    out.offending = basis;
    return out;
  }
  const Mat mx = xi.partialPivLu().solve(xm);
  const Mat my = yi.partialPivLu().solve(ym);
  PartialMatrix signs{n, m, {}};
  const double ratio0 = dy / dx;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      const double a = mx(i, j);
      const double b = my(i, j);
      const bool za = std::abs(a) <= 1e-9 * std::max(1.0, mx.col(j).norm());
      const bool zb = std::abs(b) <= 1e-9 * std::max(1.0, my.col(j).norm());
      if (za != zb || (!za && std::abs(std::abs(b / a) - 1.0) > 1e-6)) {
        // |det| ratio of the subset with column i swapped for j differs.
        std::vector<int> subset = basis;
        subset[i] = j;
        std::sort(subset.begin(), subset.end());
        out.status = IsoStatus::kIncompatible;
        std::ostringstream msg;
        msg << "determinant ratio mismatch: |det Y_J|/|det X_J| differs from " << ratio0;
        out.reason = msg.str();
        out.offending = subset;
        return out;
      }
      if (!za) signs.entries.push_back({i, j, b / a > 0 ? 1.0 : -1.0});
    }
  }
  const CompletionResult c = rank1_complete_signs(signs);
  if (!c.feasible) {
    out.status = IsoStatus::kIncompatible;
    out.reason = "sign pattern admits no rank-1 completion: " + c.violation;
    for (const auto& [i, j] : c.witness) out.offending.push_back(j);
    return out;
  }
  IsoWitness w;
  w.s = yi * c.e.asDiagonal() * xi.inverse();
  for (int j = 0; j < m; ++j) w.sigma.push_back(c.f(j) > 0 ? 1 : -1);
  w.max_error = witness_error(w.s, x, y, w.sigma);
  out.status = IsoStatus::kIsomorphic;
  out.witness = std::move(w);
  return out;
}

// ---------------------------------------------------------------------------
// Cross ratio

double cross_ratio(const std::array<double, 4>& phi) {
  auto s = [&](int i, int j) { return std::sin(phi[j] - phi[i]); };
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (std::abs(s(i, j)) < 1e-12) {
        throw Error(ErrorKind::kInvalidInput, "cross_ratio: coincident points");
      }
    }
  }
  return s(0, 2) * s(1, 3) / (s(1, 2) * s(0, 3));
}

std::array<double, 6> s4_orbit(double l) {
  return {l, 1.0 - l, 1.0 / l, 1.0 / (1.0 - l), l / (l - 1.0), (l - 1.0) / l};
}

bool same_s4_orbit(double a, double b, double tol) {
  for (double x : s4_orbit(a)) {
    if (std::abs(x - b) <= tol * std::max(1.0, std::abs(b))) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Fingerprints

std::optional<std::array<int, 3>> codim1_signature(const SpectrahedralCone& k) {
  const int n = k.n();
  if (k.dim() != svec_size(n) - 1) return std::nullopt;
  if (k.generators().empty() || degree(k) != n) return std::nullopt;
  const Mat q = smat(k.complement_svec().col(0), n);
  const EigDecomp e = eig_sym(SymMatrix(q));
  const double top = e.values.cwiseAbs().maxCoeff();
  int p = 0;
  int m = 0;
  for (int i = 0; i < n; ++i) {
    if (e.values(i) > 1e-8 * top) {
      ++p;
    } else if (e.values(i) < -1e-8 * top) {
      ++m;
    }
  }
  if (p < m) std::swap(p, m);
  return std::array<int, 3>{p, m, n - p - m};
}

std::vector<std::vector<bool>> mate_matrix(const SpectrahedralCone& k) {
  const auto& g = k.generators();
  const int m = static_cast<int>(g.size());
  std::vector<std::vector<bool>> out(m, std::vector<bool>(m, false));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Mat s = g[i] * g[j].transpose() + g[j] * g[i].transpose();
      out[i][j] = out[j][i] = k.distance_to_span(s) <= 1e-8 * (1.0 + s.norm());
    }
  }
  return out;
}

std::vector<Mat> rank1_planes(const SpectrahedralCone& k) {
  const auto& g = k.generators();
  const auto mates = mate_matrix(k);
  std::vector<Mat> planes;
  for (size_t i = 0; i < g.size(); ++i) {
    for (size_t j = i + 1; j < g.size(); ++j) {
      if (!mates[i][j]) continue;
      Mat p(k.n(), 2);
      p << g[i], g[j];
      p = orth(p, 1e-10);
      if (p.cols() != 2) continue;
      bool seen = false;
      for (const Mat& q : planes) {
        if ((p - q * (q.transpose() * p)).norm() < 1e-8) {
          seen = true;
          break;
        }
      }
      if (!seen) planes.push_back(p);
    }
  }
  return planes;
}

std::optional<double> hub_cross_ratio(const SpectrahedralCone& k) {
  const auto planes = rank1_planes(k);
  if (planes.size() > 64) return std::nullopt;
  std::optional<double> found;
  int hubs = 0;
  for (size_t a = 0; a < planes.size(); ++a) {
    std::vector<Vec> lines;
    int touching = 0;
    for (size_t b = 0; b < planes.size(); ++b) {
      if (a == b) continue;
      const Mat meet = intersect(planes[a], planes[b], 1e-8);
      if (meet.cols() == 1) {
        ++touching;
        lines.push_back(planes[a].transpose() * meet.col(0));
      }
    }
    if (touching != 4) continue;
    std::array<double, 4> phi{};
    for (int i = 0; i < 4; ++i) phi[i] = std::atan2(lines[i](1), lines[i](0));
    try {
      found = cross_ratio(phi);
      ++hubs;
    } catch (const Error&) {
    }
  }
  if (hubs != 1) return std::nullopt;
  return found;
}

// ---------------------------------------------------------------------------
// Cone matching

namespace {

struct Profile {
  int tangent = 0;
  int mates = 0;
  bool operator==(const Profile&) const = default;
};

std::vector<Profile> profiles(const SpectrahedralCone& k,
                              const std::vector<std::vector<bool>>& mates) {
  std::vector<Profile> out;
  for (size_t i = 0; i < k.generators().size(); ++i) {
    Profile p;
    p.tangent = static_cast<int>(tangent_space(k, k.generators()[i]).cols());
    p.mates = static_cast<int>(std::count(mates[i].begin(), mates[i].end(), true));
    out.push_back(p);
  }
  return out;
}

// True when S maps every span element of K1 into L2.
bool maps_span(const Mat& s, const SpectrahedralCone& k1, const SpectrahedralCone& k2) {
  for (const SymMatrix& b : k1.span_basis()) {
    const Mat img = s * b.mat() * s.transpose();
    if (k2.distance_to_span(img) > 1e-7 * (1.0 + img.norm())) return false;
  }
  return true;
}

std::optional<IsoWitness> finish_witness(const Mat& s, const SpectrahedralCone& k1,
                                         const SpectrahedralCone& k2) {
  const int n = k1.n();
  const auto lu = s.fullPivLu();
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-10) return std::nullopt;
  // Normalize the free global scale.
  Mat sn = s / std::pow(std::abs(lu.determinant()), 1.0 / n);
  if (!maps_span(sn, k1, k2)) return std::nullopt;
  IsoWitness w;
  w.s = sn;
  // Images of K1 generators are rays of K2; report the ray-level error.
  for (const Vec& x : k1.generators()) {
    const Vec y = sn * x;
    w.sigma.push_back(1);
    w.max_error = std::max(w.max_error, k2.distance_to_span(y * y.transpose()) / y.squaredNorm());
  }
  return w;
}

// Given basis columns I of K1 matched to columns pi of K2, matches the
// remaining K1 generators to K2 generators up to scale and solves for S.
// Matches are explored depth-first; once the ratio graph is connected the
// scales are determined and the resulting S is verified.
std::optional<IsoWitness> solve_with_basis(const Mat& x1, const Mat& x2,
                                           const std::vector<int>& basis,
                                           const std::vector<int>& image,
                                           const SpectrahedralCone& k1,
                                           const SpectrahedralCone& k2, int budget = 400) {
  const int n = static_cast<int>(x1.rows());
  Mat xi(n, n);
  Mat yi(n, n);
  for (int c = 0; c < n; ++c) {
    xi.col(c) = x1.col(basis[c]);
    yi.col(c) = x2.col(image[c]);
  }
  const auto lux = xi.fullPivLu();
  const auto luy = yi.fullPivLu();
  if (!lux.isInvertible() || !luy.isInvertible()) return std::nullopt;
  const Mat xinv = lux.inverse();
  const Mat m1 = lux.solve(x1);
  const Mat m2 = luy.solve(x2);
  const int g1 = static_cast<int>(x1.cols());
  const int g2 = static_cast<int>(x2.cols());
  auto support = [](const Vec& v) {
    std::vector<bool> s(v.size());
    const double top = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i) s[i] = std::abs(v(i)) > 1e-8 * top;
    return s;
  };
  std::vector<std::vector<bool>> sup2(g2);
  for (int l = 0; l < g2; ++l) sup2[l] = support(m2.col(l));
  std::vector<bool> used(g2, false);
  for (int l : image) used[l] = true;

  struct Item {
    int j;
    std::vector<bool> sup;
    std::vector<int> cands;
  };
  std::vector<Item> items;
  for (int j = 0; j < g1; ++j) {
    if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
    Item it{j, support(m1.col(j)), {}};
    if (std::count(it.sup.begin(), it.sup.end(), true) < 2) continue;
    for (int l = 0; l < g2; ++l) {
      if (!used[l] && sup2[l] == it.sup) it.cands.push_back(l);
    }
    if (!it.cands.empty()) items.push_back(std::move(it));
  }
  // Small supports first: they link rows most directly.
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return std::count(a.sup.begin(), a.sup.end(), true) <
           std::count(b.sup.begin(), b.sup.end(), true);
  });

  auto connected = [&](const PartialMatrix& r) {
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](int a) {
      while (comp[a] != a) a = comp[a] = comp[comp[a]];
      return a;
    };
    std::map<int, int> first_row;
    for (const PartialEntry& e : r.entries) {
      auto [pos, fresh] = first_row.emplace(e.j, e.i);
      if (!fresh) comp[find(e.i)] = find(pos->second);
    }
    for (int i = 1; i < n; ++i) {
      if (find(i) != find(0)) return false;
    }
    return true;
  };
  auto attempt = [&](const PartialMatrix& r) -> std::optional<IsoWitness> {
    const CompletionResult c = rank1_complete(r, 1e-7);
    if (!c.feasible || c.e.cwiseAbs().minCoeff() < 1e-300) return std::nullopt;
    // e_i = 1 / c_{I_i} up to a global factor.
    return finish_witness(Mat(yi * c.e.asDiagonal() * xinv), k1, k2);
  };

  PartialMatrix ratios{n, n, {}};
  for (int c = 0; c < n; ++c) ratios.entries.push_back({c, c, 1.0});
  int nodes = 0;
  auto dfs = [&](auto&& self, size_t idx, PartialMatrix& r) -> std::optional<IsoWitness> {
    if (++nodes > budget) return std::nullopt;
    if (connected(r)) return attempt(r);
    if (idx == items.size()) return attempt(r);  // free scales default to 1
    const Item& it = items[idx];
    for (int l : it.cands) {
      if (used[l]) continue;
      PartialMatrix trial = r;
      for (int i = 0; i < n; ++i) {
        if (it.sup[i]) trial.entries.push_back({i, trial.cols, m2(i, l) / m1(i, it.j)});
      }
      trial.cols += 1;
      if (!rank1_complete(trial, 1e-7).feasible) continue;
      used[l] = true;
      auto w = self(self, idx + 1, trial);
      used[l] = false;
      if (w) return w;
      if (nodes > budget) return std::nullopt;
    }
    return self(self, idx + 1, r);
  };
  return dfs(dfs, 0, ratios);
}

}  // namespace

IsoResult cones_isomorphic(const SpectrahedralCone& k1, const SpectrahedralCone& k2,
                           int max_candidates) {
  IsoResult out;
  for (const SpectrahedralCone* k : {&k1, &k2}) {
    if (k->generators().empty()) {
      throw Error(ErrorKind::kMissingCertificate, "cones_isomorphic: empty certificate");
    }
    if (degree(*k) != k->n()) {
      throw Error(ErrorKind::kInvalidInput,
                  "cones_isomorphic: degenerate cone; call reduce_nondegenerate first");
    }
  }
  auto reject = [&](std::string why) {
    out.status = IsoStatus::kNotIsomorphic;
    out.reason = std::move(why);
    return out;
  };
  if (k1.n() != k2.n()) return reject("degrees differ");
  if (k1.dim() != k2.dim()) return reject("dimensions differ");
  const auto sig1 = codim1_signature(k1);
  const auto sig2 = codim1_signature(k2);
  if (sig1 && sig2 && *sig1 != *sig2) {
    std::ostringstream msg;
    msg << "codimension-1 signatures differ: (" << (*sig1)[0] << "," << (*sig1)[1] << ","
        << (*sig1)[2] << ") vs (" << (*sig2)[0] << "," << (*sig2)[1] << "," << (*sig2)[2] << ")";
    return reject(msg.str());
  }
  const auto cr1 = hub_cross_ratio(k1);
  const auto cr2 = hub_cross_ratio(k2);
  if (cr1 && cr2 && !same_s4_orbit(*cr1, *cr2, 1e-7)) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "cross-ratio invariants lie in different S4 orbits: " << *cr1 << " vs " << *cr2;
    return reject(msg.str());
  }

  if (k1.n() <= 4) {
    try {
      const std::string l1 = classify_small(k1).str();
      const std::string l2 = classify_small(k2).str();
      if (l1 != l2 && l1.find("Unknown") == std::string::npos &&
          l2.find("Unknown") == std::string::npos) {
        return reject("catalog classes differ: " + l1 + " vs " + l2);
      }
    } catch (const Error&) {
    }
  }

  const int n = k1.n();
  const Mat x1 = stack(k1.generators(), n);
  const Mat x2 = stack(k2.generators(), n);
  auto accept = [&](IsoWitness w) -> IsoResult {
    out.status = IsoStatus::kIsomorphic;
    out.witness = std::move(w);
    out.reason = "witness maps L1 onto L2";
    return out;
  };

  // Index-wise candidate: certificates listed in corresponding order.
  if (x1.cols() == x2.cols()) {
    std::vector<int> order(x1.cols());
    std::iota(order.begin(), order.end(), 0);
    const auto basis = greedy_basis(x1, order);
    if (static_cast<int>(basis.size()) == n) {
      if (auto w = solve_with_basis(x1, x2, basis, basis, k1, k2)) return accept(std::move(*w));
    }
  }

  // Backtracking over images of a profile-ordered basis of K1.
  const auto mates1 = mate_matrix(k1);
  const auto mates2 = mate_matrix(k2);
  const auto prof1 = profiles(k1, mates1);
  const auto prof2 = profiles(k2, mates2);
  std::map<std::pair<int, int>, int> freq2;
  for (const Profile& p : prof2) ++freq2[{p.tangent, p.mates}];
  std::vector<int> order(x1.cols());
  std::iota(order.begin(), order.end(), 0);
  // Rare, high-tangent profiles first: these rays are the most constrained.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (prof1[a].tangent != prof1[b].tangent) return prof1[a].tangent > prof1[b].tangent;
    return freq2[{prof1[a].tangent, prof1[a].mates}] < freq2[{prof1[b].tangent, prof1[b].mates}];
  });
  const auto basis = greedy_basis(x1, order);
  if (static_cast<int>(basis.size()) != n) {
    throw Error(ErrorKind::kInvalidInput, "cones_isomorphic: certificate does not span R^n");
  }
  std::vector<int> image(n, -1);
  std::vector<bool> used(x2.cols(), false);
  int candidates = 0;
  bool found = false;
  Mat q(n, 0);
  auto rec = [&](auto&& self, int depth, const Mat& span) -> void {
    if (found || candidates >= max_candidates) return;
    if (depth == n) {
      ++candidates;
      if (auto w = solve_with_basis(x1, x2, basis, image, k1, k2)) {
        accept(std::move(*w));
        found = true;
      }
      return;
    }
    const int a = basis[depth];
    for (int l = 0; l < x2.cols() && !found && candidates < max_candidates; ++l) {
      if (used[l] || !(prof2[l] == prof1[a])) continue;
      bool ok = true;
      for (int d = 0; d < depth && ok; ++d) {
        ok = mates1[a][basis[d]] == mates2[l][image[d]];
      }
      if (!ok) continue;
      const Vec r = x2.col(l) - span * (span.transpose() * x2.col(l));
      if (r.norm() < 1e-8) continue;
      Mat next(n, span.cols() + 1);
      next << span, r.normalized();
      used[l] = true;
      image[depth] = l;
      self(self, depth + 1, next);
      used[l] = false;
      image[depth] = -1;
    }
  };
  rec(rec, 0, q);
  if (found) return out;
  out.status = IsoStatus::kInconclusive;
  std::ostringstream msg;
  msg << "no witness among " << candidates << " candidate generator matchings";
  out.reason = msg.str();
  return out;
}

}  // namespace rog
