#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deform/dgla.hpp"
#include "deform/io.hpp"

namespace deform {

struct PipelineParams {
  int cutoff = 3;                      // arity cutoff for convolution dglas and bar complexes
  std::optional<std::pair<int, int>> window;  // homological degrees [lo, hi]
  int samples = 4;
  unsigned seed = 1;
  int height = 1;                      // largest |coefficient| in sampled combinations
};
// Command-line values override the "pipeline" section of the problem file.
PipelineParams params_from_json(const Json& request, PipelineParams defaults = {});
// "LO..HI"; throws ValidationFailed.
std::pair<int, int> parse_window(const std::string& s);

// Every equality a report asserts is recorded as a claim that can be re-checked from the
// claim alone. Kinds:
//   product_zero {factors}             M1 M2 ... = 0
//   products_equal {left, right}       products of two matrix lists agree
//   solution {A, X, B}                 A X = B
//   infeasible {A, b, y}               y^T A = 0 and y.b != 0, so A x = b has no solution
//   rank {matrix, rank}
//   homology_dimension {in, out, dim}  dim ker(out) - rank(in)
//   realization {complex, ring, omega, d}  the differential of (V (x) R, d + omega)
//   gauge_act {dgla, ring, a, w, result}
//   maurer_cartan {dgla, ring, element}
// Matrices are dense arrays, sparse objects, or flat arrays (column vectors).
std::optional<std::string> verify_claim(const Json& claim);

struct Report {
  std::string pipeline;
  bool passed = true;
  Json results = Json::object();
  Json transcript = Json::array();
  Json counterexample;  // the first failing check
  Json to_json() const;
};

// Records a claim and checks it; the first failure becomes the counterexample.
class Transcript {
 public:
  explicit Transcript(Report& report) : report_(report) {}
  bool claim(Json c, const std::string& label);
  // A check that is not an algebraic identity (e.g. agreement of two code paths).
  bool check(bool ok, const std::string& label, Json detail = Json::object());

 private:
  Report& report_;
};

// Structured Maurer-Cartan samples of L (x) m(R): 0, then first-order cocycles (basis vectors, then
// combinations with coefficients of size <= height) lifted up the m-adic tower; obstructed
// candidates are skipped and counted.
struct McSamples {
  std::vector<Vector> elements;
  std::size_t obstructed = 0;
};
McSamples sample_mc(const Dgla& l, const ArtinianCdga& r, const PipelineParams& p);
// Degree-0 elements of L (x) m(R): 0, basis vectors, then small combinations.
std::vector<Vector> sample_gauges(const Dgla& l, const ArtinianCdga& r, const PipelineParams& p);

Report pipeline_validate(const Problem& problem, const PipelineParams& p);
Report pipeline_tangent(const Problem& problem, const PipelineParams& p);
Report pipeline_roundtrip(const Problem& problem, const PipelineParams& p);
Report pipeline_compare(const Problem& problem, const PipelineParams& p);
Report pipeline_obstruction(const Problem& problem, const PipelineParams& p);
// Dispatch on "validate", "tangent-report", "roundtrip", "compare", "obstruction".
Report run_pipeline(const std::string& name, const Problem& problem, const PipelineParams& p);
const std::vector<std::string>& pipeline_names();

// Re-verifies every claim of a report; the report of the replay lists failures.
Report replay(const Json& report);

}  // namespace deform
