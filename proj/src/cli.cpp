#include "rog/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rog/json_io.hpp"

namespace rog::cli {

namespace {

using json::Json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  std::istream& in;
  std::ostream& out;
  std::string out_path;
  std::uint64_t seed = 0;
};

std::string slurp(Context& ctx, const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << ctx.in.rdbuf();
    return buf.str();
  }
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  buf << f.rdbuf();
  return buf.str();
}

Json load(Context& ctx, const std::string& path) { return json::parse(slurp(ctx, path)); }

void emit(Context& ctx, const Json& j) {
  const std::string text = json::dump(j);
  if (ctx.out_path.empty() || ctx.out_path == "-") {
    ctx.out << text;
    return;
  }
  std::ofstream f(ctx.out_path);
  if (!f) throw IoError("cannot write " + ctx.out_path);
  f << text;
  if (!f) throw IoError("write failed for " + ctx.out_path);
}

// An expression file holds either the tree itself or {"expr": tree}.
ExprPtr load_expr(Context& ctx, const std::string& path) {
  const Json j = load(ctx, path);
  return json::expr_from(j.contains("expr") ? j["expr"] : j);
}

int cmd_build(Context& ctx, const std::string& expr_path) {
  const ExprPtr e = load_expr(ctx, expr_path);
  emit(ctx, json::cone_to_json(*build(e)));
  return 0;
}

int cmd_analyze(Context& ctx, const std::string& cone_path) {
  const ConePtr k = json::cone_from(load(ctx, cone_path));
  Json r;
  r["degree"] = degree(*k);
  r["dim"] = k->dim();
  r["simple"] = is_simple(*k);
  r["n"] = k->n();
  r["certificate_complete"] = k->certificate_complete();
  if (k->certificate_complete()) {
    Json parts = Json::array();
    for (const FaceHandle& h : simplicity_partition(*k)) parts.push_back(h.dim());
    r["simple_parts"] = parts;
    r["isolated_rays"] = isolated_rays(*k).size();
  }
  emit(ctx, r);
  return 0;
}

int cmd_decompose(Context& ctx, const std::string& cone_path, const std::string& x_path,
                  const std::string& method, double tol) {
  const ConePtr k = json::cone_from(load(ctx, cone_path));
  const SymMatrix x = json::sym_from(load(ctx, x_path));
  if (x.n() != k->n()) throw Error(ErrorKind::kInvalidInput, "decompose: X has the wrong size");
  const bool by_expr = method == "expr" || (method == "auto" && k->expr() && !k->parts().empty());
  const Decomposition d = by_expr ? decompose_by_expr(*k, x) : carath_decompose(*k, x, tol);
  Json r = json::decomposition_to_json(d);
  r["count"] = d.atoms.size();
  emit(ctx, r);
  return 0;
}

int cmd_iso(Context& ctx, const std::string& a, const std::string& b, int max_candidates) {
  const ConePtr k1 = json::cone_from(load(ctx, a));
  const ConePtr k2 = json::cone_from(load(ctx, b));
  emit(ctx, json::iso_to_json(cones_isomorphic(*k1, *k2, max_candidates)));
  return 0;
}

int cmd_classify(Context& ctx, const std::string& cone_path) {
  const ConePtr k = json::cone_from(load(ctx, cone_path));
  emit(ctx, json::label_to_json(classify_small(*k)));
  return 0;
}

int cmd_qcqp(Context& ctx, const std::string& path, const std::string& cert_path, int samples,
             bool relax_only) {
  const QcqpProblem p = json::qcqp_from(load(ctx, path));
  p.validate();
  if (relax_only) {
    emit(ctx, json::sdp_to_json(solve_relaxation(p)));
    return 0;
  }
  QcqpOptions opt;
  opt.samples = samples;
  opt.seed = ctx.seed;
  if (!cert_path.empty()) opt.certificate = json::cone_from(load(ctx, cert_path));
  emit(ctx, json::certificate_to_json(certify_exactness(p, opt)));
  return 0;
}

int cmd_complete(Context& ctx, const std::string& path, bool signs, double tol,
                 std::ostream& err) {
  const PartialMatrix p = json::partial_from(load(ctx, path));
  p.validate();
  const CompletionResult c = signs ? rank1_complete_signs(p) : rank1_complete(p, tol);
  emit(ctx, json::completion_to_json(c));
  if (c.feasible) return 0;
  err << "rog complete: no rank-1 completion: " << c.violation << "\n";
  return 1;
}

int cmd_pencil(Context& ctx, const std::string& path, bool codim2, int z_seeds, int p_samples) {
  const Json j = load(ctx, path);
  const SymMatrix q1 = json::sym_from(j.contains("Q1") ? j["Q1"] : Json());
  const SymMatrix q2 = json::sym_from(j.contains("Q2") ? j["Q2"] : Json());
  Rng rng(ctx.seed);
  if (codim2) {
    emit(ctx, json::codim2_to_json(codim2_structure(q1, q2, rng, z_seeds, p_samples)));
  } else {
    emit(ctx, json::pencil_to_json(pencil_decompose(q1, q2, &rng)));
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Rank-one-generated spectrahedral cones: construction, decomposition, "
               "isomorphism, classification and QCQP exactness.",
               "rog"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx{in, out};
  ctx.seed = 0x5eed0c9c0001ULL;
  app.add_option("--seed", ctx.seed, "Seed for every randomized routine")->capture_default_str();
  app.add_option("-o,--out", ctx.out_path, "Write the report here instead of stdout");

  std::string p1;
  std::string p2;
  std::string method = "auto";
  std::string cert;
  double tol = kDefaultTol;
  double ctol = 1e-9;
  int max_candidates = 10000;
  int samples = 100000;
  int z_seeds = 1000;
  int p_samples = 10000;
  bool signs = false;
  bool relax_only = false;
  bool codim2 = false;

  auto* build_cmd = app.add_subcommand("build", "Build a cone from a construction expression");
  build_cmd->add_option("--expr", p1, "Expression JSON ('-' for stdin)")->required();

  auto* analyze = app.add_subcommand("analyze", "Report degree, dimension and simplicity");
  analyze->add_option("cone", p1, "Cone JSON")->required();

  auto* decompose = app.add_subcommand("decompose", "Write X as a sum of rank-1 elements of K");
  decompose->add_option("cone", p1, "Cone JSON")->required();
  decompose->add_option("x", p2, "Matrix JSON")->required();
  decompose->add_option("--method", method, "auto, expr or carath")
      ->check(CLI::IsMember({"auto", "expr", "carath"}))
      ->capture_default_str();
  decompose->add_option("--tol", tol, "Membership tolerance of the peeling loop")
      ->capture_default_str();

  auto* iso = app.add_subcommand("iso", "Decide isomorphism of two certified cones");
  iso->add_option("cone1", p1, "Cone JSON")->required();
  iso->add_option("cone2", p2, "Cone JSON")->required();
  iso->add_option("--max-candidates", max_candidates, "Search budget")->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Catalog label of a cone of degree <= 4");
  classify->add_option("cone", p1, "Cone JSON")->required();

  auto* qcqp = app.add_subcommand("qcqp", "Solve the relaxation and certify exactness");
  qcqp->add_option("problem", p1, "QCQP JSON {S, B, A}")->required();
  qcqp->add_option("--cone", cert, "Certified cone with the same span as the induced cone");
  qcqp->add_option("--samples", samples, "Rank-1 feasible samples for the gap test")
      ->capture_default_str();
  qcqp->add_flag("--relax-only", relax_only, "Only report the relaxation");

  auto* complete = app.add_subcommand("complete", "Rank-1 completion of a partial matrix");
  complete->add_option("partial", p1, "Partial matrix JSON")->required();
  complete->add_flag("--signs", signs, "Entries are +-1; complete with sign vectors");
  complete->add_option("--tol", ctol, "Consistency tolerance")->capture_default_str();

  auto* pencil = app.add_subcommand("pencil", "Block decomposition of a pencil {Q1, Q2}");
  pencil->add_option("forms", p1, "JSON {Q1, Q2}")->required();
  pencil->add_flag("--codim2", codim2, "Analyze the codimension-2 cone of the forms instead");
  pencil->add_option("--z-seeds", z_seeds, "Newton seeds for common null vectors")
      ->capture_default_str();
  pencil->add_option("--p-samples", p_samples, "Samples of the biquartic p")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build_cmd->parsed()) return cmd_build(ctx, p1);
    if (analyze->parsed()) return cmd_analyze(ctx, p1);
    if (decompose->parsed()) return cmd_decompose(ctx, p1, p2, method, tol);
    if (iso->parsed()) return cmd_iso(ctx, p1, p2, max_candidates);
    if (classify->parsed()) return cmd_classify(ctx, p1);
    if (qcqp->parsed()) return cmd_qcqp(ctx, p1, cert, samples, relax_only);
    if (complete->parsed()) return cmd_complete(ctx, p1, signs, ctol, err);
    if (pencil->parsed()) return cmd_pencil(ctx, p1, codim2, z_seeds, p_samples);
  } catch (const IoError& e) {
    err << "rog: " << e.what() << "\n";
    return 2;
  } catch (const json::FormatError& e) {
    err << "rog: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "rog: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "rog: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace rog::cli
