#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "deform/artinian.hpp"
#include "deform/category.hpp"
#include "deform/chain.hpp"
#include "deform/dgla.hpp"
#include "deform/operad.hpp"

namespace deform {

using Json = nlohmann::json;

// Problem-file or object validation failure; kind names the violated condition.
class ValidationFailed : public std::runtime_error {
 public:
  ValidationFailed(std::string kind, const std::string& detail)
      : std::runtime_error("ValidationFailed(" + kind + "): " + detail), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

Rational rational_from_json(const Json& j);
Json to_json(const Rational& x);
Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);
// Matrices: dense row-major arrays of rational strings, or {"rows", "cols", "entries": [[i, j, "p/q"]]}.
Json dense_to_json(const Matrix& m);
Json sparse_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, std::optional<std::size_t> rows = std::nullopt,
                        std::optional<std::size_t> cols = std::nullopt);

// {"degrees": {"0": ["a"], "-1": ["b"]}, "differential": {"0": [["1"]]}, "grading": "homological" | "cochain"}
// With cochain grading the keys are cochain degrees and "differential"[i] maps degree i to i+1.
Complex complex_from_json(const Json& j);
Json complex_to_json(const Complex& c);

// {"builtin": "k" | "k[t]/t^n" | "square-zero(d1,d2,..)" | "truncated(vars,bound)", "degree": d}
// or {"basis": [{"name", "degree"}], "unit", "products": [{"left", "right", "result": [[name, "p/q"]]}],
//     "differential": [{"source", "result"}], "augmentation": {name: "p/q"}}; degrees are homological.
ArtinianCdga ring_from_json(const Json& j);
Json ring_to_json(const ArtinianCdga& r);

// {"basis": [{"name", "degree"}], "differential": [{"source", "result"}], "brackets": [{"left", "right", "result"}]}
// with cochain degrees; brackets of unlisted reversed pairs follow from graded antisymmetry.
Dgla dgla_from_json(const Json& j);
Json dgla_to_json(const Dgla& l);

struct AlgebraDecl {
  Complex complex;
  AInftyStructure structure;
  bool strict = true;  // no operations above arity 2 declared
};
// {"complex": name | {...}, "products": [{"left", "right", "result"}], "higher": [{"inputs": [..], "result"}]}
AlgebraDecl algebra_from_json(const Json& j, const std::map<std::string, Complex>& complexes);

struct ModuleDecl {
  std::string complex, ring;
  Complex base;
  ArtinianCdga r;
  Vector omega;  // End(V) (x) m(R) coordinates
};

struct Problem {
  std::map<std::string, Complex> complexes;
  std::map<std::string, ArtinianCdga> rings;
  std::map<std::string, Dgla> dglas;
  std::map<std::string, AlgebraDecl> algebras;
  std::map<std::string, ModuleDecl> contramodules;
  Json pipeline;  // request section (may be empty)
};
// Parses and validates every declaration; throws ValidationFailed.
Problem load_problem(const Json& j, int cutoff_for_checks = 4);

// Element of a dgla tensored with m(R) from [{"basis", "ring", "value"}] (ring names in the user presentation).
Vector element_from_json(const Json& j, const Dgla& l, const ArtinianCdga& r);
Json element_to_json(const Vector& w, const Dgla& l, const ArtinianCdga& r);

}  // namespace deform
