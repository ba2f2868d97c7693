#include <CLI11.hpp>
#include <sys/resource.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>

#include "deform/io.hpp"
#include "deform/mc.hpp"
#include "deform/pipeline.hpp"

namespace {

// Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 validation or resource error.
constexpr int kPass = 0, kFail = 1, kInvalid = 2;

void apply_memory_limit() {
  const char* env = std::getenv("DEFORM_MEMORY_LIMIT_MB");
  if (!env || !*env) return;
  const unsigned long long mb = std::strtoull(env, nullptr, 10);
  if (mb == 0) return;
  rlimit lim{};
  lim.rlim_cur = lim.rlim_max = static_cast<rlim_t>(mb) * 1024 * 1024;
  if (setrlimit(RLIMIT_AS, &lim) != 0) std::cerr << "warning: could not apply DEFORM_MEMORY_LIMIT_MB\n";
}

deform::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw deform::ValidationFailed("Malformed", "cannot open " + path);
  try {
    return deform::Json::parse(in);
  } catch (const deform::Json::parse_error& e) {
    throw deform::ValidationFailed("Malformed", path + ": " + e.what());
  }
}

void print_summary(const deform::Report& r, std::ostream& out) {
  out << r.pipeline << ": " << (r.passed ? "PASS" : "FAIL") << "\n";
  if (r.results.contains("summary")) out << r.results.at("summary").get<std::string>() << "\n";
  out << r.transcript.size() << " claims recorded\n";
  if (!r.passed) out << "counterexample: " << r.counterexample.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact formal deformation theory of dg algebras"};
  std::string pipeline, input, output, window;
  std::optional<int> cutoff, samples, height;
  std::optional<unsigned> seed;
  std::vector<std::string> verbs = deform::pipeline_names();
  verbs.push_back("replay");
  app.add_option("pipeline", pipeline, "validate | tangent-report | roundtrip | compare | obstruction | replay")
      ->required()
      ->check(CLI::IsMember(verbs));
  app.add_option("--input,-i", input, "problem file (or report file for replay)")->required();
  app.add_option("--cutoff", cutoff, "arity cutoff");
  app.add_option("--window", window, "homological window LO..HI");
  app.add_option("--samples", samples, "number of sampled elements");
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--height", height, "largest coefficient in sampled combinations");
  app.add_option("--output,-o", output, "write the report here and print a summary");
  CLI11_PARSE(app, argc, argv);

  apply_memory_limit();
  try {
    const deform::Json in = read_json(input);
    deform::Report report;
    if (pipeline == "replay") {
      report = deform::replay(in);
    } else {
      deform::PipelineParams p = deform::params_from_json(in.value("pipeline", deform::Json::object()));
      if (cutoff) p.cutoff = *cutoff;
      if (samples) p.samples = *samples;
      if (seed) p.seed = *seed;
      if (height) p.height = *height;
      if (!window.empty()) p.window = deform::parse_window(window);
      p = deform::params_from_json(deform::Json::object(), p);
      const deform::Problem problem = deform::load_problem(in, std::max(4, p.cutoff));
      report = deform::run_pipeline(pipeline, problem, p);
      report.results["parameters"] = {{"cutoff", p.cutoff}, {"samples", p.samples}, {"seed", p.seed}, {"height", p.height}};
      if (p.window) report.results["parameters"]["window"] = {p.window->first, p.window->second};
    }
    if (output.empty()) {
      std::cout << report.to_json().dump(2) << "\n";
    } else {
      std::ofstream out(output);
      if (!out) throw deform::ValidationFailed("Malformed", "cannot write " + output);
      out << report.to_json().dump(1) << "\n";
      print_summary(report, std::cout);
    }
    return report.passed ? kPass : kFail;
  } catch (const deform::ValidationFailed& e) {
    std::cerr << e.what() << "\n";
  } catch (const deform::NotMaurerCartan& e) {
    std::cerr << "ValidationFailed(NotMaurerCartan): " << e.what() << "\n";
  } catch (const deform::ResourceLimitError& e) {
    std::cerr << "ResourceLimit: " << e.what() << "\n";
  } catch (const std::bad_alloc&) {
    std::cerr << "ResourceLimit: out of memory (see DEFORM_MEMORY_LIMIT_MB)\n";
  } catch (const std::exception& e) {
    std::cerr << "ValidationFailed(Malformed): " << e.what() << "\n";
  }
  return kInvalid;
}
