#include "rog/json_io.hpp"

#include <cmath>

namespace rog::json {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double number(const Json& j) {
  if (!j.is_number()) throw FormatError("expected a number, got " + j.dump());
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError("non-finite number");
  return v;
}

int integer(const Json& j) {
  if (!j.is_number_integer()) throw FormatError("expected an integer, got " + j.dump());
  return j.get<int>();
}

Json upper(const Mat& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    for (int jj = i; jj < m.cols(); ++jj) out.push_back(m(i, jj));
  }
  return out;
}

Mat from_upper(const Json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != svec_size(n)) {
    throw FormatError("span_basis entry must hold n(n+1)/2 numbers");
  }
  Mat m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int jj = i; jj < n; ++jj) {
      m(i, jj) = m(jj, i) = number(j[k++]);
    }
  }
  return m;
}

const std::vector<std::pair<ExprKind, const char*>>& kind_names() {
  static const std::vector<std::pair<ExprKind, const char*>> names = {
      {ExprKind::kFullPsd, "FullPsd"},
      {ExprKind::kDiagonal, "Diagonal"},
      {ExprKind::kHankel, "Hankel"},
      {ExprKind::kTridiag, "Tridiag"},
      {ExprKind::kChordal, "Chordal"},
      {ExprKind::kCodim1, "Codim1"},
      {ExprKind::kTernaryQuartic, "TernaryQuartic"},
      {ExprKind::kCrossRatio, "CrossRatioFamily"},
      {ExprKind::kMomentCone, "MomentCone"},
      {ExprKind::kBlockToeplitz, "BlockToeplitz"},
      {ExprKind::kDirectSum, "DirectSum"},
      {ExprKind::kFullExtension, "FullExtension"},
      {ExprKind::kIntertwining, "Intertwining"},
      {ExprKind::kCongruence, "Congruence"},
      {ExprKind::kFace, "Face"},
  };
  return names;
}

ExprKind kind_from(const std::string& s) {
  for (const auto& [k, name] : kind_names()) {
    if (s == name) return k;
  }
  throw FormatError("unknown expression kind \"" + s + "\"");
}

Json children_json(const ConeExpr& e) {
  Json out = Json::array();
  for (const ExprPtr& c : e.children) out.push_back(expr_to_json(c));
  return out;
}

std::vector<ExprPtr> children_from(const Json& j, size_t expected) {
  const Json& arr = field(j, "children");
  if (!arr.is_array() || (expected > 0 && arr.size() != expected)) {
    throw FormatError("wrong number of children");
  }
  std::vector<ExprPtr> out;
  for (const Json& c : arr) out.push_back(c.is_null() ? nullptr : expr_from(c));
  return out;
}

ConeExpr copy_with(ExprPtr base, std::vector<ExprPtr> children) {
  ConeExpr e = *base;
  e.children = std::move(children);
  return e;
}

bool same_span(const SpectrahedralCone& a, const Mat& span) {
  if (a.dim() != span.cols()) return false;
  const Mat resid = span - a.span_svec() * (a.span_svec().transpose() * span);
  return resid.norm() <= 1e-8 * std::max(1.0, span.norm());
}

}  // namespace

Json to_json(const Mat& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const SymMatrix& m) { return to_json(m.mat()); }

Mat mat_from(const Json& j) {
  if (!j.is_array()) throw FormatError("expected a matrix (array of rows)");
  const int rows = static_cast<int>(j.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(j[0].size());
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
      throw FormatError("matrix rows have unequal lengths");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = number(j[r][c]);
  }
  return m;
}

Vec vec_from(const Json& j) {
  if (!j.is_array()) throw FormatError("expected a vector (array of numbers)");
  Vec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = number(j[i]);
  return v;
}

SymMatrix sym_from(const Json& j) {
  const Mat m = mat_from(j);
  if (m.rows() != m.cols()) throw FormatError("expected a square matrix");
  return SymMatrix(m);
}

Json expr_to_json(const ExprPtr& e) {
  if (!e) return nullptr;
  Json out;
  out["kind"] = to_string(e->kind);
  switch (e->kind) {
    case ExprKind::kFullPsd:
    case ExprKind::kDiagonal:
    case ExprKind::kTridiag:
      out["n"] = e->n;
      break;
    case ExprKind::kHankel:
    case ExprKind::kBlockToeplitz:
      out["blocks"] = e->blocks;
      out["m"] = e->m;
      break;
    case ExprKind::kChordal: {
      out["n"] = e->graph.n;
      Json edges = Json::array();
      for (const auto& [a, b] : e->graph.edges) edges.push_back({a, b});
      out["edges"] = edges;
      break;
    }
    case ExprKind::kCodim1:
      out["Q"] = to_json(e->matrix);
      break;
    case ExprKind::kTernaryQuartic:
      break;
    case ExprKind::kCrossRatio:
      out["angles"] = {e->angles[0], e->angles[1], e->angles[2], e->angles[3]};
      break;
    case ExprKind::kMomentCone: {
      if (!e->monomials.empty()) {
        out["monomials"] = e->monomials;
        Json pts = Json::array();
        for (const Vec& p : e->points) pts.push_back(to_json(p));
        out["points"] = pts;
      } else {
        Json sv = Json::array();
        for (const Vec& p : e->sample_vectors) sv.push_back(to_json(p));
        out["sample_vectors"] = sv;
      }
      break;
    }
    case ExprKind::kDirectSum:
      out["children"] = children_json(*e);
      break;
    case ExprKind::kFullExtension:
      out["n"] = e->n;
      out["children"] = children_json(*e);
      break;
    case ExprKind::kIntertwining: {
      Json g;
      g["iota1"] = to_json(e->glue.iota1);
      g["iota2"] = to_json(e->glue.iota2);
      if (e->glue.f1.size() > 0) g["f1"] = to_json(e->glue.f1);
      if (e->glue.f2.size() > 0) g["f2"] = to_json(e->glue.f2);
      out["glue"] = g;
      out["children"] = children_json(*e);
      break;
    }
    case ExprKind::kCongruence:
      out["A"] = to_json(e->matrix);
      out["children"] = children_json(*e);
      break;
    case ExprKind::kFace:
      out["U"] = to_json(e->matrix);
      out["children"] = children_json(*e);
      break;
  }
  return out;
}

ExprPtr expr_from(const Json& j) {
  if (!j.is_object()) throw FormatError("expression must be an object");
  const Json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) throw FormatError("\"kind\" must be a string");
  switch (kind_from(kind_field.get<std::string>())) {
    case ExprKind::kFullPsd: return ConeExpr::full_psd(integer(field(j, "n")));
    case ExprKind::kDiagonal: return ConeExpr::diagonal(integer(field(j, "n")));
    case ExprKind::kTridiag: return ConeExpr::tridiag(integer(field(j, "n")));
    case ExprKind::kHankel:
      return ConeExpr::hankel(integer(field(j, "blocks")), j.contains("m") ? integer(j["m"]) : 1);
    case ExprKind::kBlockToeplitz:
      return ConeExpr::block_toeplitz(integer(field(j, "blocks")),
                                      j.contains("m") ? integer(j["m"]) : 1);
    case ExprKind::kChordal: {
      ChordalGraph g;
      g.n = integer(field(j, "n"));
      for (const Json& e : field(j, "edges")) {
        if (!e.is_array() || e.size() != 2) throw FormatError("edges are [i, j] pairs");
        g.edges.emplace_back(integer(e[0]), integer(e[1]));
      }
      return ConeExpr::chordal(std::move(g));
    }
    case ExprKind::kCodim1: return ConeExpr::codim1(sym_from(field(j, "Q")).mat());
    case ExprKind::kTernaryQuartic: return ConeExpr::ternary_quartic();
    case ExprKind::kCrossRatio: {
      const Vec a = vec_from(field(j, "angles"));
      if (a.size() != 4) throw FormatError("\"angles\" needs four entries");
      return ConeExpr::cross_ratio({a(0), a(1), a(2), a(3)});
    }
    case ExprKind::kMomentCone: {
      if (j.contains("monomials")) {
        std::vector<std::vector<int>> mono;
        for (const Json& m : j["monomials"]) {
          std::vector<int> row;
          for (const Json& x : m) row.push_back(integer(x));
          mono.push_back(std::move(row));
        }
        std::vector<Vec> pts;
        for (const Json& p : field(j, "points")) pts.push_back(vec_from(p));
        return ConeExpr::moment_monomials(std::move(mono), std::move(pts));
      }
      auto e = std::make_shared<ConeExpr>();
      e->kind = ExprKind::kMomentCone;
      for (const Json& p : field(j, "sample_vectors")) e->sample_vectors.push_back(vec_from(p));
      return e;
    }
    case ExprKind::kDirectSum: {
      auto kids = children_from(j, 0);
      for (const ExprPtr& k : kids) {
        if (!k) throw FormatError("DirectSum children cannot be null");
      }
      return ConeExpr::direct_sum(std::move(kids));
    }
    case ExprKind::kFullExtension: {
      auto kids = children_from(j, 1);
      if (!kids[0]) throw FormatError("FullExtension child cannot be null");
      return ConeExpr::full_extension(kids[0], integer(field(j, "n")));
    }
    case ExprKind::kIntertwining: {
      auto kids = children_from(j, 2);
      if (!kids[0] || !kids[1]) throw FormatError("Intertwining children cannot be null");
      const Json& g = field(j, "glue");
      GlueSpec glue;
      glue.iota1 = mat_from(field(g, "iota1"));
      glue.iota2 = mat_from(field(g, "iota2"));
      if (g.contains("f1")) glue.f1 = mat_from(g["f1"]);
      if (g.contains("f2")) glue.f2 = mat_from(g["f2"]);
      return ConeExpr::intertwining(kids[0], kids[1], std::move(glue));
    }
    case ExprKind::kCongruence: {
      auto kids = children_from(j, 1);
      auto base = ConeExpr::congruence(nullptr, mat_from(field(j, "A")));
      return std::make_shared<const ConeExpr>(copy_with(base, std::move(kids)));
    }
    case ExprKind::kFace: {
      auto kids = children_from(j, 1);
      auto base = ConeExpr::face(nullptr, mat_from(field(j, "U")));
      return std::make_shared<const ConeExpr>(copy_with(base, std::move(kids)));
    }
  }
  throw FormatError("unhandled expression kind");
}

Json cone_to_json(const SpectrahedralCone& k) {
  Json out;
  out["n"] = k.n();
  Json basis = Json::array();
  for (const SymMatrix& b : k.span_basis()) basis.push_back(upper(b.mat()));
  out["span_basis"] = basis;
  Json gens = Json::array();
  for (const Vec& g : k.generators()) gens.push_back(to_json(g));
  out["generators"] = gens;
  if (k.expr()) out["expr"] = expr_to_json(k.expr());
  return out;
}

ConePtr cone_from(const Json& j) {
  const int n = integer(field(j, "n"));
  if (n < 0) throw FormatError("\"n\" must be nonnegative");
  const Json& basis = field(j, "span_basis");
  if (!basis.is_array()) throw FormatError("\"span_basis\" must be an array");
  Mat span(svec_size(n), static_cast<int>(basis.size()));
  for (int c = 0; c < span.cols(); ++c) span.col(c) = svec(from_upper(basis[c], n));
  std::vector<Vec> gens;
  if (j.contains("generators")) {
    for (const Json& g : j["generators"]) gens.push_back(vec_from(g));
  }
  ExprPtr expr;
  if (j.contains("expr") && !j["expr"].is_null()) {
    expr = expr_from(j["expr"]);
    try {
      ConePtr built = build(expr);
      if (built->n() == n && same_span(*built, span)) return built;
    } catch (const Error&) {
      // Expression not rebuildable (e.g. a congruence of a generic cone).
    }
  }
  return std::make_shared<const SpectrahedralCone>(n, span, std::move(gens), expr);
}

Json decomposition_to_json(const Decomposition& d) {
  Json out;
  Json atoms = Json::array();
  for (const RankOneAtom& a : d.atoms) {
    Json at;
    at["weight"] = a.weight;
    at["vector"] = to_json(a.vector);
    atoms.push_back(at);
  }
  out["atoms"] = atoms;
  out["residual"] = d.residual;
  return out;
}

Decomposition decomposition_from(const Json& j) {
  Decomposition d;
  for (const Json& a : field(j, "atoms")) {
    d.atoms.push_back({number(field(a, "weight")), vec_from(field(a, "vector"))});
  }
  d.residual = j.contains("residual") ? number(j["residual"]) : 0.0;
  return d;
}

Json partial_to_json(const PartialMatrix& p) {
  Json out;
  out["shape"] = {p.rows, p.cols};
  Json entries = Json::array();
  for (const PartialEntry& e : p.entries) {
    Json x;
    x["i"] = e.i;
    x["j"] = e.j;
    x["v"] = e.v;
    entries.push_back(x);
  }
  out["entries"] = entries;
  return out;
}

PartialMatrix partial_from(const Json& j) {
  PartialMatrix p;
  const Json& shape = field(j, "shape");
  if (!shape.is_array() || shape.size() != 2) throw FormatError("\"shape\" must be [rows, cols]");
  p.rows = integer(shape[0]);
  p.cols = integer(shape[1]);
  for (const Json& e : field(j, "entries")) {
    p.entries.push_back({integer(field(e, "i")), integer(field(e, "j")), number(field(e, "v"))});
  }
  return p;
}

Json completion_to_json(const CompletionResult& c) {
  Json out;
  out["feasible"] = c.feasible;
  if (c.feasible) {
    out["e"] = to_json(c.e);
    out["f"] = to_json(c.f);
  } else {
    out["violation"] = c.violation;
    Json w = Json::array();
    for (const auto& [a, b] : c.witness) w.push_back({a, b});
    out["cycle"] = w;
  }
  return out;
}

Json witness_to_json(const IsoWitness& w) {
  Json out;
  out["S"] = to_json(w.s);
  out["sigma"] = w.sigma;
  out["max_error"] = w.max_error;
  return out;
}

IsoWitness witness_from(const Json& j) {
  IsoWitness w;
  w.s = mat_from(field(j, "S"));
  for (const Json& s : field(j, "sigma")) w.sigma.push_back(integer(s));
  if (j.contains("max_error")) w.max_error = number(j["max_error"]);
  return w;
}

Json iso_to_json(const IsoResult& r) {
  Json out;
  out["status"] = to_string(r.status);
  if (r.witness) out["witness"] = witness_to_json(*r.witness);
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (!r.offending.empty()) out["offending"] = r.offending;
  return out;
}

Json label_to_json(const ClassLabel& l) {
  Json out;
  out["tag"] = to_string(l.tag);
  out["label"] = l.str();
  if (l.tag == ClassTag::kFullPsd || l.tag == ClassTag::kTri) out["n"] = l.n;
  if (l.tag == ClassTag::kCodim1) out["signature"] = l.signature;
  if (l.tag == ClassTag::kDirectSum) {
    Json kids = Json::array();
    for (const ClassLabel& c : l.children) kids.push_back(label_to_json(c));
    out["children"] = kids;
  }
  if (!l.note.empty()) out["note"] = l.note;
  return out;
}

ClassLabel label_from(const Json& j) {
  ClassLabel l;
  const std::string tag = field(j, "tag").get<std::string>();
  bool found = false;
  for (int t = 0; t <= static_cast<int>(ClassTag::kUnknown); ++t) {
    if (tag == to_string(static_cast<ClassTag>(t))) {
      l.tag = static_cast<ClassTag>(t);
      found = true;
    }
  }
  if (!found) throw FormatError("unknown class tag \"" + tag + "\"");
  if (j.contains("n")) l.n = integer(j["n"]);
  if (j.contains("signature")) {
    const Json& s = j["signature"];
    if (!s.is_array() || s.size() != 3) throw FormatError("\"signature\" needs three entries");
    for (int i = 0; i < 3; ++i) l.signature[i] = integer(s[i]);
  }
  if (j.contains("children")) {
    for (const Json& c : j["children"]) l.children.push_back(label_from(c));
  }
  if (j.contains("note")) l.note = j["note"].get<std::string>();
  return l;
}

Json pencil_to_json(const PencilDecomposition& p) {
  Json out;
  out["h0"] = to_json(p.h0);
  Json blocks = Json::array();
  for (const PencilBlock& b : p.blocks) {
    Json x;
    x["angle"] = b.angle;
    x["basis"] = to_json(b.basis);
    x["phi"] = to_json(b.phi);
    blocks.push_back(x);
  }
  out["blocks"] = blocks;
  out["error"] = p.error;
  return out;
}

Json codim2_to_json(const Codim2Structure& c) {
  Json out;
  out["case"] = to_string(c.kind);
  if (c.kind == Codim2Case::kSharedFactor) {
    out["u"] = to_json(c.u);
    out["q1"] = to_json(c.q1);
    out["q2"] = to_json(c.q2);
  }
  if (c.kind == Codim2Case::kHasRank2Extremes) {
    out["x"] = to_json(c.x);
    out["y"] = to_json(c.y);
  }
  out["samples"] = c.samples;
  out["note"] = c.note;
  return out;
}

Json qcqp_to_json(const QcqpProblem& p) {
  Json out;
  out["S"] = to_json(p.s);
  out["B"] = to_json(p.b);
  Json a = Json::array();
  for (const SymMatrix& m : p.a) a.push_back(to_json(m));
  out["A"] = a;
  return out;
}

QcqpProblem qcqp_from(const Json& j) {
  QcqpProblem p;
  p.s = sym_from(field(j, "S"));
  p.b = sym_from(field(j, "B"));
  if (j.contains("A")) {
    for (const Json& m : j["A"]) p.a.push_back(sym_from(m));
  }
  return p;
}

Json sdp_to_json(const SdpSolution& s) {
  Json out;
  out["status"] = to_string(s.status);
  out["objective"] = s.objective;
  out["duality_gap"] = s.duality_gap;
  out["iterations"] = s.iterations;
  out["face_rank"] = s.face_rank;
  out["X"] = to_json(s.x);
  return out;
}

Json certificate_to_json(const ExactnessCertificate& c) {
  Json out;
  out["status"] = to_string(c.status);
  out["relaxation"] = to_string(c.relaxation);
  out["x_opt"] = c.x_opt ? to_json(*c.x_opt) : Json(nullptr);
  out["relaxed_value"] = c.relaxed_value;
  out["extracted_value"] = c.extracted_value;
  out["relaxed_rank"] = c.relaxed_rank;
  out["purified_rank"] = c.purified_rank;
  out["samples"] = c.samples;
  out["sampled_min"] = c.sampled_min ? Json(*c.sampled_min) : Json(nullptr);
  out["note"] = c.note;
  return out;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("JSON parse error: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

}  // namespace rog::json
