#include "rog/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>

#include "rog/error.hpp"

namespace rog {

// ---------------------------------------------------------------------------
// Expression nodes

const char* to_string(ExprKind kind) {
  switch (kind) {
    case ExprKind::kFullPsd: return "FullPsd";
    case ExprKind::kDiagonal: return "Diagonal";
    case ExprKind::kHankel: return "Hankel";
    case ExprKind::kTridiag: return "Tridiag";
    case ExprKind::kChordal: return "Chordal";
    case ExprKind::kCodim1: return "Codim1";
    case ExprKind::kTernaryQuartic: return "TernaryQuartic";
    case ExprKind::kCrossRatio: return "CrossRatioFamily";
    case ExprKind::kMomentCone: return "MomentCone";
    case ExprKind::kBlockToeplitz: return "BlockToeplitz";
    case ExprKind::kDirectSum: return "DirectSum";
    case ExprKind::kFullExtension: return "FullExtension";
    case ExprKind::kIntertwining: return "Intertwining";
    case ExprKind::kCongruence: return "Congruence";
    case ExprKind::kFace: return "Face";
  }
  return "Unknown";
}

bool ChordalGraph::has_edge(int i, int j) const {
  for (const auto& [a, b] : edges) {
    if ((a == i && b == j) || (a == j && b == i)) return true;
  }
  return false;
}

std::vector<std::vector<int>> ChordalGraph::adjacency() const {
  std::vector<std::set<int>> adj(n);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw Error(ErrorKind::kInvalidInput, "graph: edge endpoint out of range");
    }
    if (a == b) continue;
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<std::vector<int>> out(n);
  for (int v = 0; v < n; ++v) out[v].assign(adj[v].begin(), adj[v].end());
  return out;
}

namespace {

std::shared_ptr<ConeExpr> node(ExprKind kind) {
  auto e = std::make_shared<ConeExpr>();
  e->kind = kind;
  return e;
}

}  // namespace

ExprPtr ConeExpr::full_psd(int n) {
  auto e = node(ExprKind::kFullPsd);
  e->n = n;
  return e;
}

ExprPtr ConeExpr::diagonal(int n) {
  auto e = node(ExprKind::kDiagonal);
  e->n = n;
  return e;
}

ExprPtr ConeExpr::hankel(int blocks, int m) {
  auto e = node(ExprKind::kHankel);
  e->blocks = blocks;
  e->m = m;
  e->n = blocks * m;
  return e;
}

ExprPtr ConeExpr::tridiag(int n) {
  auto e = node(ExprKind::kTridiag);
  e->n = n;
  return e;
}

ExprPtr ConeExpr::chordal(ChordalGraph g) {
  auto e = node(ExprKind::kChordal);
  e->n = g.n;
  e->graph = std::move(g);
  return e;
}

ExprPtr ConeExpr::codim1(const Mat& q) {
  auto e = node(ExprKind::kCodim1);
  e->n = static_cast<int>(q.rows());
  e->matrix = q;
  return e;
}

ExprPtr ConeExpr::ternary_quartic() {
  auto e = node(ExprKind::kTernaryQuartic);
  e->n = 6;
  return e;
}

ExprPtr ConeExpr::cross_ratio(std::array<double, 4> angles) {
  auto e = node(ExprKind::kCrossRatio);
  e->n = 6;
  e->angles = angles;
  return e;
}

ExprPtr ConeExpr::moment_monomials(std::vector<std::vector<int>> exponents,
                                   std::vector<Vec> points) {
  auto e = node(ExprKind::kMomentCone);
  e->n = static_cast<int>(exponents.size());
  e->monomials = std::move(exponents);
  e->points = std::move(points);
  return e;
}

ExprPtr ConeExpr::block_toeplitz(int blocks, int m) {
  auto e = node(ExprKind::kBlockToeplitz);
  e->blocks = blocks;
  e->m = m;
  e->n = blocks * m;
  return e;
}

ExprPtr ConeExpr::direct_sum(std::vector<ExprPtr> children) {
  auto e = node(ExprKind::kDirectSum);
  for (const auto& c : children) e->n += c ? c->n : 0;
  e->children = std::move(children);
  return e;
}

ExprPtr ConeExpr::full_extension(ExprPtr child, int n) {
  auto e = node(ExprKind::kFullExtension);
  e->n = n;
  e->children = {std::move(child)};
  return e;
}

ExprPtr ConeExpr::intertwining(ExprPtr a, ExprPtr b, GlueSpec glue) {
  auto e = node(ExprKind::kIntertwining);
  e->n = static_cast<int>(glue.iota1.rows() + glue.iota2.rows() - glue.iota1.cols());
  e->glue = std::move(glue);
  e->children = {std::move(a), std::move(b)};
  return e;
}

ExprPtr ConeExpr::congruence(ExprPtr child, const Mat& a) {
  auto e = node(ExprKind::kCongruence);
  e->n = static_cast<int>(a.rows());
  e->matrix = a;
  e->children = {std::move(child)};
  return e;
}

ExprPtr ConeExpr::face(ExprPtr child, const Mat& u) {
  auto e = node(ExprKind::kFace);
  e->n = static_cast<int>(u.rows());
  e->matrix = u;
  e->children = {std::move(child)};
  return e;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

ConePtr make_cone(int n, const Mat& span, std::vector<Vec> gens, ExprPtr expr,
                  std::vector<ConePtr> parts = {}) {
  return std::make_shared<SpectrahedralCone>(n, span, std::move(gens), std::move(expr),
                                             std::move(parts));
}

// Same cone, new provenance node wrapping the inner construction.
ConePtr retag(const ConePtr& inner, ExprPtr expr) {
  return make_cone(inner->n(), inner->span_svec(), inner->generators(), std::move(expr),
                   {inner});
}

Vec unit(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

Mat span_of_generators(const std::vector<Vec>& gens, int n) {
  Mat g(svec_size(n), static_cast<int>(gens.size()));
  for (size_t i = 0; i < gens.size(); ++i) g.col(static_cast<int>(i)) = svec_outer(gens[i]);
  return orth(g, 1e-10);
}

Mat sym_unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  e(j, i) = 1.0;
  return e;
}

void check_size(int n, const char* what) {
  if (n < 1) throw Error(ErrorKind::kInvalidInput, std::string(what) + ": size must be >= 1");
}

}  // namespace

ConePtr full_psd_cone(int n) {
  check_size(n, "FullPsd");
  std::vector<Vec> gens;
  for (int i = 0; i < n; ++i) gens.push_back(unit(n, i));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) gens.push_back(unit(n, i) + unit(n, j));
  }
  const int nn = svec_size(n);
  return make_cone(n, Mat::Identity(nn, nn), std::move(gens), ConeExpr::full_psd(n));
}

ConePtr diagonal_cone(int n) {
  check_size(n, "Diagonal");
  std::vector<Vec> gens;
  Mat span(svec_size(n), n);
  for (int i = 0; i < n; ++i) {
    gens.push_back(unit(n, i));
    span.col(i) = svec_outer(unit(n, i));
  }
  return make_cone(n, span, std::move(gens), ConeExpr::diagonal(n));
}

ConePtr direct_sum(const std::vector<ConePtr>& parts) {
  if (parts.empty()) throw Error(ErrorKind::kInvalidInput, "direct_sum: no summands");
  int n = 0;
  int d = 0;
  for (const auto& p : parts) {
    n += p->n();
    d += p->dim();
  }
  Mat span = Mat::Zero(svec_size(n), d);
  std::vector<Vec> gens;
  std::vector<ExprPtr> exprs;
  int offset = 0;
  int col = 0;
  for (const auto& p : parts) {
    for (int c = 0; c < p->dim(); ++c) {
      Mat big = Mat::Zero(n, n);
      big.block(offset, offset, p->n(), p->n()) = smat(p->span_svec().col(c), p->n());
      span.col(col++) = svec(big);
    }
    for (const Vec& x : p->generators()) {
      Vec y = Vec::Zero(n);
      y.segment(offset, p->n()) = x;
      gens.push_back(y);
    }
    exprs.push_back(p->expr());
    offset += p->n();
  }
  return make_cone(n, span, std::move(gens), ConeExpr::direct_sum(std::move(exprs)), parts);
}

ConePtr direct_sum(const ConePtr& a, const ConePtr& b) { return direct_sum({a, b}); }

ConePtr full_extension(const ConePtr& k, int n) {
  const int n1 = k->n();
  if (n <= n1) {
    throw Error(ErrorKind::kInvalidInput, "full_extension: target size must exceed child size");
  }
  const int t = n - n1;
  std::vector<Vec> gens;
  for (const Vec& v : k->generators()) {
    Vec y = Vec::Zero(n);
    y.head(n1) = v;
    gens.push_back(y);
    for (int j = 0; j < t; ++j) {
      Vec z = y;
      z(n1 + j) = 1.0;
      gens.push_back(z);
    }
  }
  for (int j = 0; j < t; ++j) {
    gens.push_back(unit(n, n1 + j));
    for (int l = j + 1; l < t; ++l) gens.push_back(unit(n, n1 + j) + unit(n, n1 + l));
  }
  Mat span;
  if (degree(*k) == n1) {
    // L = { X : X11 ∈ L' }.
    std::vector<Vec> cols;
    for (int c = 0; c < k->dim(); ++c) {
      Mat big = Mat::Zero(n, n);
      big.topLeftCorner(n1, n1) = smat(k->span_svec().col(c), n1);
      cols.push_back(svec(big));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = std::max(i, n1); j < n; ++j) cols.push_back(svec(sym_unit(n, i, j)));
    }
    span.resize(svec_size(n), static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) span.col(static_cast<int>(c)) = cols[c];
  } else {
    span = span_of_generators(gens, n);
  }
  return make_cone(n, span, std::move(gens), ConeExpr::full_extension(k->expr(), n), {k});
}

namespace {

// Canonical basis vectors extending the column space of `a` to R^rows.
Mat canonical_complement(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  Mat q = orth(a, 1e-10);
  Mat out(n, 0);
  for (int i = 0; i < n && q.cols() < n; ++i) {
    const Vec e = unit(n, i);
    const Vec r = e - q * (q.transpose() * e);
    if (r.norm() > 1e-6) {
      out.conservativeResize(n, out.cols() + 1);
      out.col(out.cols() - 1) = e;
      q.conservativeResize(n, q.cols() + 1);
      q.col(q.cols() - 1) = r.normalized();
    }
  }
  return out;
}

void validate_full_face(const SpectrahedralCone& k, const Mat& iota, const char* which) {
  const int kk = static_cast<int>(iota.cols());
  if (matrix_rank(iota, 1e-9) != kk) {
    throw Error(ErrorKind::kInvalidGlue,
                std::string("intertwine: injection ") + which + " lacks full column rank");
  }
  for (int p = 0; p < kk; ++p) {
    for (int q = p; q < kk; ++q) {
      const Mat e = iota.col(p) * iota.col(q).transpose() +
                    iota.col(q) * iota.col(p).transpose();
      if (k.distance_to_span(e) > 1e-8 * (1.0 + e.norm())) {
        throw Error(ErrorKind::kInvalidGlue,
                    std::string("intertwine: glue subspace of cone ") + which +
                        " is not a full face");
      }
    }
  }
}

}  // namespace

GlueSpec coordinate_glue(int n1, const std::vector<int>& idx1, int n2,
                         const std::vector<int>& idx2) {
  if (idx1.size() != idx2.size()) {
    throw Error(ErrorKind::kInvalidGlue, "coordinate_glue: index lists differ in length");
  }
  const int k = static_cast<int>(idx1.size());
  GlueSpec g;
  g.iota1 = Mat::Zero(n1, k);
  g.iota2 = Mat::Zero(n2, k);
  for (int i = 0; i < k; ++i) {
    g.iota1(idx1[i], i) = 1.0;
    g.iota2(idx2[i], i) = 1.0;
  }
  return g;
}

ConePtr intertwine(const ConePtr& a, const ConePtr& b, const GlueSpec& glue_in) {
  GlueSpec glue = glue_in;
  const int n1 = a->n();
  const int n2 = b->n();
  const int k = glue.rank();
  if (k < 1) {
    throw Error(ErrorKind::kInvalidGlue, "intertwine: glue rank must be >= 1 (use direct_sum)");
  }
  if (glue.iota1.rows() != n1 || glue.iota2.rows() != n2 || glue.iota2.cols() != k) {
    throw Error(ErrorKind::kInvalidGlue, "intertwine: injection shapes do not match the cones");
  }
  validate_full_face(*a, glue.iota1, "1");
  validate_full_face(*b, glue.iota2, "2");
  const int n = n1 + n2 - k;
  if (glue.f1.size() == 0 || glue.f2.size() == 0) {
    Mat b1(n1, n1);
    b1 << canonical_complement(glue.iota1), glue.iota1;
    Mat b2(n2, n2);
    b2 << glue.iota2, canonical_complement(glue.iota2);
    glue.f1 = Mat::Zero(n, n1);
    glue.f1.topRows(n1) = b1.inverse();
    glue.f2 = Mat::Zero(n, n2);
    glue.f2.bottomRows(n2) = b2.inverse();
  }
  if (glue.f1.rows() != n || glue.f1.cols() != n1 || glue.f2.rows() != n ||
      glue.f2.cols() != n2) {
    throw Error(ErrorKind::kInvalidGlue, "intertwine: coordinate maps have wrong shape");
  }
  Mat both(n, n1 + n2);
  both << glue.f1, glue.f2;
  if ((glue.f1 * glue.iota1 - glue.f2 * glue.iota2).norm() > 1e-9 * (1.0 + both.norm()) ||
      matrix_rank(both, 1e-9) != n) {
    throw Error(ErrorKind::kInvalidGlue, "intertwine: coordinate maps are not compatible");
  }
  Mat span(svec_size(n), a->dim() + b->dim());
  for (int c = 0; c < a->dim(); ++c) {
    span.col(c) = svec(glue.f1 * smat(a->span_svec().col(c), n1) * glue.f1.transpose());
  }
  for (int c = 0; c < b->dim(); ++c) {
    span.col(a->dim() + c) =
        svec(glue.f2 * smat(b->span_svec().col(c), n2) * glue.f2.transpose());
  }
  std::vector<Vec> gens;
  for (const Vec& x : a->generators()) gens.push_back(glue.f1 * x);
  for (const Vec& y : b->generators()) gens.push_back(glue.f2 * y);
  return make_cone(n, span, std::move(gens),
                   ConeExpr::intertwining(a->expr(), b->expr(), glue), {a, b});
}

std::vector<int> mcs_order(const ChordalGraph& g) {
  const auto adj = g.adjacency();
  std::vector<int> weight(g.n, 0);
  std::vector<bool> done(g.n, false);
  std::vector<int> order;
  for (int step = 0; step < g.n; ++step) {
    int best = -1;
    for (int v = 0; v < g.n; ++v) {
      if (!done[v] && (best < 0 || weight[v] > weight[best])) best = v;
    }
    done[best] = true;
    order.push_back(best);
    for (int w : adj[best]) {
      if (!done[w]) ++weight[w];
    }
  }
  return order;
}

namespace {

// Earlier neighbours of every vertex in visit order.
std::vector<std::vector<int>> earlier_neighbours(const ChordalGraph& g,
                                                 const std::vector<int>& order) {
  const auto adj = g.adjacency();
  std::vector<int> pos(g.n);
  for (int i = 0; i < g.n; ++i) pos[order[i]] = i;
  std::vector<std::vector<int>> out(g.n);
  for (int v = 0; v < g.n; ++v) {
    for (int w : adj[v]) {
      if (pos[w] < pos[v]) out[v].push_back(w);
    }
    std::sort(out[v].begin(), out[v].end(), [&](int x, int y) { return pos[x] < pos[y]; });
  }
  return out;
}

}  // namespace

bool is_chordal(const ChordalGraph& g) {
  const auto order = mcs_order(g);
  const auto earlier = earlier_neighbours(g, order);
  for (int v : order) {
    const auto& nb = earlier[v];
    if (nb.size() < 2) continue;
    const int parent = nb.back();
    for (size_t i = 0; i + 1 < nb.size(); ++i) {
      if (!g.has_edge(nb[i], parent)) return false;
    }
  }
  return true;
}

std::optional<std::vector<int>> chordless_cycle(const ChordalGraph& g) {
  const auto adj = g.adjacency();
  for (int v = 0; v < g.n; ++v) {
    for (size_t a = 0; a < adj[v].size(); ++a) {
      for (size_t b = a + 1; b < adj[v].size(); ++b) {
        const int u = adj[v][a];
        const int x = adj[v][b];
        if (g.has_edge(u, x)) continue;
        // Shortest u-x path avoiding v and v's other neighbours.
        std::vector<bool> blocked(g.n, false);
        blocked[v] = true;
        for (int w : adj[v]) blocked[w] = (w != u && w != x);
        std::vector<int> prev(g.n, -1);
        std::deque<int> queue{u};
        prev[u] = u;
        while (!queue.empty() && prev[x] < 0) {
          const int c = queue.front();
          queue.pop_front();
          for (int w : adj[c]) {
            if (blocked[w] || prev[w] >= 0) continue;
            prev[w] = c;
            queue.push_back(w);
          }
        }
        if (prev[x] < 0) continue;
        std::vector<int> cycle{v};
        std::vector<int> path;
        for (int c = x; c != u; c = prev[c]) path.push_back(c);
        path.push_back(u);
        cycle.insert(cycle.end(), path.rbegin(), path.rend());
        return cycle;
      }
    }
  }
  return std::nullopt;
}

ConePtr chordal_cone(const ChordalGraph& g) {
  check_size(g.n, "Chordal");
  if (!is_chordal(g)) {
    std::string msg = "chordal_cone: graph is not chordal";
    if (auto cyc = chordless_cycle(g)) {
      msg += "; chordless cycle:";
      for (int v : *cyc) msg += " " + std::to_string(v);
    }
    throw Error(ErrorKind::kNonChordal, msg);
  }
  const auto order = mcs_order(g);
  const auto earlier = earlier_neighbours(g, order);
  std::vector<int> pos(g.n);
  for (int i = 0; i < g.n; ++i) pos[order[i]] = i;

  ConePtr k = full_psd_cone(1);
  for (int step = 1; step < g.n; ++step) {
    const int v = order[step];
    const auto& clique = earlier[v];
    if (clique.empty()) {
      k = direct_sum(k, full_psd_cone(1));
      continue;
    }
    const int c = static_cast<int>(clique.size());
    const int n = step + 1;
    std::vector<int> idx1;
    std::vector<int> idx2;
    for (int i = 0; i < c; ++i) {
      idx1.push_back(pos[clique[i]]);
      idx2.push_back(i);
    }
    GlueSpec glue = coordinate_glue(step, idx1, c + 1, idx2);
    glue.f1 = Mat::Zero(n, step);
    glue.f1.topRows(step) = Mat::Identity(step, step);
    glue.f2 = Mat::Zero(n, c + 1);
    for (int i = 0; i < c; ++i) glue.f2(pos[clique[i]], i) = 1.0;
    glue.f2(step, c) = 1.0;
    k = intertwine(k, full_psd_cone(c + 1), glue);
  }
  Mat perm = Mat::Zero(g.n, g.n);
  for (int v = 0; v < g.n; ++v) perm(v, pos[v]) = 1.0;
  const ConePtr labeled = congruence(k, perm);
  return retag(labeled, std::make_shared<ConeExpr>([&] {
                 ConeExpr e = *ConeExpr::chordal(g);
                 e.children = {labeled->expr()};
                 return e;
               }()));
}

ConePtr tridiag_cone(int n) {
  check_size(n, "Tridiag");
  ChordalGraph path{n, {}};
  for (int i = 0; i + 1 < n; ++i) path.edges.emplace_back(i, i + 1);
  const ConePtr inner = chordal_cone(path);
  auto e = std::make_shared<ConeExpr>(*ConeExpr::tridiag(n));
  e->children = {inner->expr()};
  return retag(inner, e);
}

Vec moment_vector(double t, const Vec& x, int blocks) {
  const int m = static_cast<int>(x.size());
  Vec v(blocks * m);
  double p = 1.0;
  for (int j = 0; j < blocks; ++j) {
    v.segment(j * m, m) = p * x;
    p *= t;
  }
  return v;
}

ConePtr hankel_cone(int blocks, int m) {
  check_size(blocks, "Hankel");
  check_size(m, "Hankel");
  const int n = blocks * m;
  std::vector<Vec> cols;
  for (int s = 0; s <= 2 * (blocks - 1); ++s) {
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        Mat h = Mat::Zero(n, n);
        for (int j = 0; j < blocks; ++j) {
          const int kk = s - j;
          if (kk < 0 || kk >= blocks) continue;
          h(j * m + a, kk * m + b) = 1.0;
          h(j * m + b, kk * m + a) = 1.0;
        }
        cols.push_back(svec(h));
      }
    }
  }
  Mat span(svec_size(n), static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) span.col(static_cast<int>(c)) = cols[c];

  std::vector<Vec> xs;
  for (int a = 0; a < m; ++a) xs.push_back(unit(m, a));
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) xs.push_back(unit(m, a) + unit(m, b));
  }
  std::vector<Vec> gens;
  const int nodes = 2 * blocks - 1;
  for (int i = 0; i < nodes; ++i) {
    const double t = std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * nodes));
    for (const Vec& x : xs) gens.push_back(moment_vector(t, x, blocks));
  }
  for (const Vec& x : xs) {
    Vec tail = Vec::Zero(n);
    tail.tail(m) = x;
    gens.push_back(tail);
  }
  return make_cone(n, span, std::move(gens), ConeExpr::hankel(blocks, m));
}

Vec quartic_veronese(const Vec& x) {
  Vec s(6);
  s << x(0) * x(0), x(1) * x(1), x(2) * x(2), x(1) * x(2), x(0) * x(2), x(0) * x(1);
  return s;
}

ConePtr ternary_quartic_cone() {
  // Entry (i,j) holds the index of the free parameter a_1..a_15.
  static constexpr int kPattern[6][6] = {
      {1, 6, 5, 7, 12, 14},  {6, 2, 4, 15, 8, 10}, {5, 4, 3, 11, 13, 9},
      {7, 15, 11, 4, 9, 8},  {12, 8, 13, 9, 5, 7}, {14, 10, 9, 8, 7, 6}};
  Mat span(svec_size(6), 15);
  for (int a = 1; a <= 15; ++a) {
    Mat e = Mat::Zero(6, 6);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) e(i, j) = kPattern[i][j] == a ? 1.0 : 0.0;
    }
    span.col(a - 1) = svec(e);
  }
  std::vector<Vec> gens;
  for (int i = -1; i <= 2; ++i) {
    for (int j = -1; j <= 2; ++j) {
      for (int k = -1; k <= 2; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        gens.push_back(quartic_veronese(Vec((Vec(3) << i, j, k).finished())));
      }
    }
  }
  return make_cone(6, span, std::move(gens), ConeExpr::ternary_quartic());
}

ConePtr codim1_cone(const SymMatrix& q) {
  const int n = q.n();
  check_size(n, "Codim1");
  const EigDecomp e = eig_sym(q);
  const double top = e.values.cwiseAbs().maxCoeff();
  std::vector<Vec> pos;
  std::vector<Vec> neg;
  std::vector<Vec> ker;
  for (int i = 0; i < n; ++i) {
    const double l = e.values(i);
    if (l > 1e-10 * top) {
      pos.push_back(e.vectors.col(i) / std::sqrt(l));
    } else if (l < -1e-10 * top) {
      neg.push_back(e.vectors.col(i) / std::sqrt(-l));
    } else {
      ker.push_back(e.vectors.col(i));
    }
  }
  if (pos.empty() || neg.empty()) {
    throw Error(ErrorKind::kInvalidInput, "codim1_cone: Q must be indefinite");
  }
  std::vector<Vec> gens;
  for (const Vec& u : pos) {
    for (const Vec& v : neg) {
      gens.push_back(u + v);
      gens.push_back(u - v);
    }
  }
  for (size_t i = 0; i < pos.size(); ++i) {
    for (size_t j = i + 1; j < pos.size(); ++j) {
      gens.push_back(pos[i] + pos[j] + M_SQRT2 * neg[0]);
      gens.push_back(pos[i] + pos[j] - M_SQRT2 * neg[0]);
    }
  }
  for (size_t i = 0; i < neg.size(); ++i) {
    for (size_t j = i + 1; j < neg.size(); ++j) {
      gens.push_back(neg[i] + neg[j] + M_SQRT2 * pos[0]);
      gens.push_back(neg[i] + neg[j] - M_SQRT2 * pos[0]);
    }
  }
  for (size_t l = 0; l < ker.size(); ++l) {
    gens.push_back(ker[l]);
    for (size_t l2 = l + 1; l2 < ker.size(); ++l2) gens.push_back(ker[l] + ker[l2]);
    for (const Vec& u : pos) {
      gens.push_back(ker[l] + u + neg[0]);
      gens.push_back(ker[l] + u - neg[0]);
    }
    for (const Vec& v : neg) gens.push_back(ker[l] + v + pos[0]);
  }
  const Mat span = null_space(svec(q.mat()).transpose(), 1e-12);
  return make_cone(n, span, std::move(gens), ConeExpr::codim1(q.mat()));
}

ConePtr cross_ratio_cone(const std::array<double, 4>& angles) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (std::abs(std::sin(angles[i] - angles[j])) < 1e-9) {
        throw Error(ErrorKind::kInvalidInput, "cross_ratio_cone: angles must be distinct mod pi");
      }
    }
  }
  ConePtr k = full_psd_cone(2);
  for (int j = 0; j < 4; ++j) {
    const int prev = j + 2;
    const int n = prev + 1;
    Vec dir = Vec::Zero(prev);
    dir(0) = std::cos(angles[j]);
    dir(1) = std::sin(angles[j]);
    GlueSpec glue;
    glue.iota1 = dir;
    glue.iota2 = unit(2, 0);
    glue.f1 = Mat::Zero(n, prev);
    glue.f1.topRows(prev) = Mat::Identity(prev, prev);
    glue.f2 = Mat::Zero(n, 2);
    glue.f2.col(0).head(prev) = dir;
    glue.f2(n - 1, 1) = 1.0;
    k = intertwine(k, full_psd_cone(2), glue);
  }
  auto e = std::make_shared<ConeExpr>(*ConeExpr::cross_ratio(angles));
  e->children = {k->expr()};
  return retag(k, e);
}

ConePtr moment_cone_from_samples(const std::vector<BasisFunction>& u,
                                 const std::vector<Vec>& samples) {
  const int n = static_cast<int>(u.size());
  check_size(n, "MomentCone");
  if (samples.empty()) throw Error(ErrorKind::kInvalidInput, "moment cone: no samples");
  std::vector<Vec> gens;
  for (const Vec& x : samples) {
    Vec s(n);
    for (int i = 0; i < n; ++i) s(i) = u[i](x);
    gens.push_back(s);
  }
  auto e = std::make_shared<ConeExpr>(*ConeExpr::moment_monomials({}, samples));
  e->n = n;
  e->sample_vectors = gens;
  const Mat span = span_of_generators(gens, n);
  return make_cone(n, span, std::move(gens), e);
}

ConePtr moment_cone_from_monomials(const std::vector<std::vector<int>>& exponents,
                                   const std::vector<Vec>& samples) {
  std::vector<BasisFunction> u;
  for (const auto& ex : exponents) {
    u.push_back([ex](const Vec& x) {
      if (static_cast<int>(ex.size()) != x.size()) {
        throw Error(ErrorKind::kInvalidInput, "moment cone: exponent/point arity mismatch");
      }
      double v = 1.0;
      for (size_t i = 0; i < ex.size(); ++i) v *= std::pow(x(static_cast<int>(i)), ex[i]);
      return v;
    });
  }
  const ConePtr base = moment_cone_from_samples(u, samples);
  auto e = std::make_shared<ConeExpr>(*ConeExpr::moment_monomials(exponents, samples));
  e->sample_vectors = base->expr()->sample_vectors;
  return make_cone(base->n(), base->span_svec(), base->generators(), e);
}

ComplexConePtr block_toeplitz_cone(int blocks, int m) {
  check_size(blocks, "BlockToeplitz");
  check_size(m, "BlockToeplitz");
  using C = std::complex<double>;
  const int n = blocks * m;
  std::vector<Vec> cols;
  auto place = [&](int d, const CMat& blk) {
    CMat t = CMat::Zero(n, n);
    for (int j = 0; j + d < blocks; ++j) {
      t.block(j * m, (j + d) * m, m, m) += blk;
      if (d > 0) t.block((j + d) * m, j * m, m, m) += blk.adjoint();
    }
    cols.push_back(hvec(t));
  };
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      CMat e = CMat::Zero(m, m);
      e(a, b) = 1.0;
      e(b, a) = 1.0;
      place(0, e);
      if (a != b) {
        CMat f = CMat::Zero(m, m);
        f(a, b) = C(0, 1);
        f(b, a) = C(0, -1);
        place(0, f);
      }
    }
  }
  for (int d = 1; d < blocks; ++d) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        CMat e = CMat::Zero(m, m);
        e(a, b) = 1.0;
        place(d, e);
        e(a, b) = C(0, 1);
        place(d, e);
      }
    }
  }
  Mat span(n * n, static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) span.col(static_cast<int>(c)) = cols[c];

  std::vector<CVec> vs;
  for (int a = 0; a < m; ++a) {
    CVec v = CVec::Zero(m);
    v(a) = 1.0;
    vs.push_back(v);
    for (int b = a + 1; b < m; ++b) {
      CVec w = v;
      w(b) = 1.0;
      vs.push_back(w);
      w(b) = C(0, 1);
      vs.push_back(w);
    }
  }
  std::vector<CVec> gens;
  const int nodes = 2 * blocks - 1;
  for (int s = 0; s < nodes; ++s) {
    const C q = std::polar(1.0, 2.0 * std::numbers::pi * (s + 0.5) / nodes);
    for (const CVec& v : vs) {
      CVec x(n);
      C p = 1.0;
      for (int j = 0; j < blocks; ++j) {
        x.segment(j * m, m) = p * v;
        p *= q;
      }
      gens.push_back(x);
    }
  }
  return std::make_shared<ComplexCone>(n, span, std::move(gens),
                                       ConeExpr::block_toeplitz(blocks, m));
}

// ---------------------------------------------------------------------------
// Dispatch

ConePtr build(const ExprPtr& expr) {
  if (!expr) throw Error(ErrorKind::kInvalidInput, "build: empty expression");
  auto child = [&](size_t i) {
    if (expr->children.size() <= i || !expr->children[i]) {
      throw Error(ErrorKind::kInvalidInput,
                  std::string("build: ") + to_string(expr->kind) + " is missing a child");
    }
    return build(expr->children[i]);
  };
  switch (expr->kind) {
    case ExprKind::kFullPsd: return full_psd_cone(expr->n);
    case ExprKind::kDiagonal: return diagonal_cone(expr->n);
    case ExprKind::kHankel: return hankel_cone(expr->blocks, expr->m);
    case ExprKind::kTridiag: return tridiag_cone(expr->n);
    case ExprKind::kChordal: return chordal_cone(expr->graph);
    case ExprKind::kCodim1: return codim1_cone(SymMatrix(expr->matrix));
    case ExprKind::kTernaryQuartic: return ternary_quartic_cone();
    case ExprKind::kCrossRatio: return cross_ratio_cone(expr->angles);
    case ExprKind::kMomentCone:
      if (!expr->monomials.empty()) return moment_cone_from_monomials(expr->monomials, expr->points);
      if (!expr->sample_vectors.empty()) {
        const int n = static_cast<int>(expr->sample_vectors.front().size());
        return make_cone(n, span_of_generators(expr->sample_vectors, n), expr->sample_vectors, expr);
      }
      throw Error(ErrorKind::kInvalidInput, "build: MomentCone needs monomials or sample vectors");
    case ExprKind::kBlockToeplitz:
      throw Error(ErrorKind::kInvalidInput, "build: BlockToeplitz is complex; use build_complex");
    case ExprKind::kDirectSum: {
      std::vector<ConePtr> parts;
      for (size_t i = 0; i < expr->children.size(); ++i) parts.push_back(child(i));
      return direct_sum(parts);
    }
    case ExprKind::kFullExtension: return full_extension(child(0), expr->n);
    case ExprKind::kIntertwining: return intertwine(child(0), child(1), expr->glue);
    case ExprKind::kCongruence: return congruence(child(0), expr->matrix);
    case ExprKind::kFace: return face_of(*child(0), FaceHandle(expr->matrix));
  }
  throw Error(ErrorKind::kInvalidInput, "build: unknown expression kind");
}

ComplexConePtr build_complex(const ExprPtr& expr) {
  if (!expr || expr->kind != ExprKind::kBlockToeplitz) {
    throw Error(ErrorKind::kInvalidInput, "build_complex: expected a BlockToeplitz expression");
  }
  return block_toeplitz_cone(expr->blocks, expr->m);
}

}  // namespace rog
