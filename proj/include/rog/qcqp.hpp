#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rog/cone.hpp"
#include "rog/decompose.hpp"

namespace rog {

/// min x^T S x  s.t.  x^T A_i x = 0,  x^T B x = 1.
struct QcqpProblem {
  SymMatrix s;
  SymMatrix b;
  std::vector<SymMatrix> a;

  int n() const { return s.n(); }
  /// Throws invalid-input on size mismatch or non-finite entries.
  void validate() const;
};

enum class SdpStatus { kOptimal, kInfeasible, kUnbounded, kMaxIter };
const char* to_string(SdpStatus s);

/// Relaxation min <S,X> over X in K with <B,X> = 1. When unbounded, x is a
/// direction D in K with <B,D> = 0, tr D = 1 and objective = <S,D> < 0.
struct SdpSolution {
  SymMatrix x;
  double objective = 0.0;
  SdpStatus status = SdpStatus::kMaxIter;
  double duality_gap = 0.0;
  int iterations = 0;
  int face_rank = 0;  // size of the face after facial reduction
};

enum class Exactness { kExactWithSolution, kExactByRog, kGapDetected, kInconclusive };
const char* to_string(Exactness e);

struct ExactnessCertificate {
  Exactness status = Exactness::kInconclusive;
  SdpStatus relaxation = SdpStatus::kMaxIter;
  std::optional<Vec> x_opt;
  double relaxed_value = 0.0;
  double extracted_value = 0.0;
  int relaxed_rank = 0;
  int purified_rank = 0;
  int samples = 0;                 // feasible rank-1 samples drawn
  std::optional<double> sampled_min;
  std::string note;
};

struct Purification {
  SymMatrix x;
  int rank_before = 0;
  int rank_after = 0;
  double objective_change = 0.0;
};

struct QcqpOptions {
  int samples = 100000;
  std::uint64_t seed = 0x5eed'0c9c'0001ULL;
  /// ROG cone with the same span as the induced cone. When null, a
  /// certificate is attached for recognized patterns (no constraints, a
  /// single indefinite form, zero patterns of chordal graphs).
  ConePtr certificate;
};

/// L = {X : <A_i, X> = 0}; no certificate attached.
ConePtr induced_cone(const QcqpProblem& p);

/// Certified cone for recognized constraint patterns, or null.
ConePtr recognize_certificate(const QcqpProblem& p);

SdpSolution solve_relaxation(const QcqpProblem& p);

/// Moves x along objective-preserving directions of the feasible set until
/// it is an extreme point.
Purification purify(const QcqpProblem& p, const SymMatrix& x);

ExactnessCertificate certify_exactness(const QcqpProblem& p, const QcqpOptions& opt = {});

}  // namespace rog
