#pragma once

#include <string>

#include <json.hpp>

#include "rog/classify.hpp"
#include "rog/cone.hpp"
#include "rog/constructions.hpp"
#include "rog/decompose.hpp"
#include "rog/error.hpp"
#include "rog/isomorph.hpp"
#include "rog/pencil.hpp"
#include "rog/qcqp.hpp"

namespace rog::json {

using Json = nlohmann::ordered_json;

/// Malformed documents throw invalid-input; the CLI reports them as parse errors.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::kInvalidInput, what) {}
};

Json to_json(const Mat& m);
Json to_json(const Vec& v);
Json to_json(const SymMatrix& m);
Mat mat_from(const Json& j);
Vec vec_from(const Json& j);
/// Square array; the symmetric part is taken.
SymMatrix sym_from(const Json& j);

Json expr_to_json(const ExprPtr& e);
ExprPtr expr_from(const Json& j);

/// { "n", "span_basis": [upper triangles, row-major], "generators", "expr"? }
Json cone_to_json(const SpectrahedralCone& k);
/// Rebuilds from "expr" when it describes the stored span, so that
/// compositional algorithms keep their parts; otherwise a generic cone.
ConePtr cone_from(const Json& j);

Json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from(const Json& j);

Json partial_to_json(const PartialMatrix& p);
PartialMatrix partial_from(const Json& j);
Json completion_to_json(const CompletionResult& c);

Json witness_to_json(const IsoWitness& w);
IsoWitness witness_from(const Json& j);
Json iso_to_json(const IsoResult& r);

Json label_to_json(const ClassLabel& l);
ClassLabel label_from(const Json& j);

Json pencil_to_json(const PencilDecomposition& p);
Json codim2_to_json(const Codim2Structure& c);

Json qcqp_to_json(const QcqpProblem& p);
QcqpProblem qcqp_from(const Json& j);
Json sdp_to_json(const SdpSolution& s);
Json certificate_to_json(const ExactnessCertificate& c);

Json parse(const std::string& text);
/// Compact, with a trailing newline; doubles in shortest round-trip form.
std::string dump(const Json& j);

}  // namespace rog::json
