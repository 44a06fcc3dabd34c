// Command-line driver: build, classify, eval, sweep-tau, dump.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "taxenrich/error.hpp"
#include "taxenrich/evaluation.hpp"
#include "taxenrich/pipeline.hpp"
#include "taxenrich/text.hpp"

namespace fs = std::filesystem;
using namespace taxenrich;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("output", "cannot write '" + path + "'");
  out << contents;
}

std::vector<double> default_grid(std::size_t steps) {
  std::vector<double> grid;
  if (steps < 2) throw UsageError("--steps must be >= 2");
  for (std::size_t i = 0; i < steps; ++i) {
    grid.push_back(static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Taxonomy enrichment with KB entities and centroid text classification"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "Build a model directory from a pipeline config");
  std::string config_path;
  std::vector<std::string> overrides;
  std::string model_out;
  build->add_option("-c,--config", config_path, "key=value pipeline config")->required();
  build->add_option("--set", overrides, "Override a config entry, key=value")->take_all();
  build->add_option("-o,--out", model_out, "Model directory to write")->required();

  // classify
  auto* classify = app.add_subcommand("classify", "Classify each line of a text file");
  std::string model_dir;
  std::string input_file;
  std::string output_file;
  std::size_t k = 0;
  double tau = -1.0;
  classify->add_option("-m,--model", model_dir, "Model directory")->required();
  classify->add_option("-i,--input", input_file, "One text per line")->required();
  classify->add_option("-k", k, "Categories per line (default: model k)");
  classify->add_option("--tau", tau, "Entity weight override in [0,1]");
  classify->add_option("-o,--out", output_file, "Results file (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "Precision@k of a results file");
  std::string results_file;
  std::string annotations_file;
  std::vector<std::size_t> ks{1, 3, 5};
  bool count_somewhat = false;
  eval->add_option("-r,--results", results_file, "Classification results")->required();
  eval->add_option("-a,--annotations", annotations_file, "item TAB path TAB grade")->required();
  eval->add_option("--ks", ks, "Cutoffs")->delimiter(',');
  eval->add_flag("--count-somewhat", count_somewhat, "Count 'somewhat relevant' as a hit");

  // sweep-tau
  auto* sweep = app.add_subcommand("sweep-tau", "Precision@k as a function of tau");
  std::vector<double> grid;
  std::size_t steps = 11;
  std::size_t eval_k = 0;
  sweep->add_option("-m,--model", model_dir, "Model directory")->required();
  sweep->add_option("-i,--input", input_file, "One text per line")->required();
  sweep->add_option("-a,--annotations", annotations_file, "Annotations keyed by line number")
      ->required();
  sweep->add_option("--grid", grid, "Explicit tau values")->delimiter(',');
  sweep->add_option("--steps", steps, "Evenly spaced grid over [0,1] when --grid is absent");
  sweep->add_option("--eval-k", eval_k, "Precision cutoff (default: model k)");
  sweep->add_flag("--count-somewhat", count_somewhat, "Count 'somewhat relevant' as a hit");

  // dump
  auto* dump = app.add_subcommand("dump", "Verify a model and print one of its artifacts");
  std::string artifact = "manifest.txt";
  dump->add_option("-m,--model", model_dir, "Model directory")->required();
  dump->add_option("artifact", artifact, "manifest.txt or an artifact file name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*build) {
      PipelineConfig config;
      try {
        config = load_config(config_path);
        for (const auto& o : overrides) {
          const auto eq = o.find('=');
          if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
          config.set(o.substr(0, eq), o.substr(eq + 1), fs::current_path());
        }
        config.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto summary = build_model(config, model_out);
      write_summary(std::cout, summary);
    } else if (*classify) {
      auto model = load_model(model_dir);
      if (tau >= 0.0) {
        if (tau > 1.0) throw UsageError("--tau must lie in [0,1]");
        model.params.tau = tau;
      }
      const std::size_t use_k = k > 0 ? k : model.params.k;
      write_output(output_file, classify_to_string(model, input_file, use_k));
    } else if (*eval) {
      for (const auto v : ks) {
        if (v < 1) throw UsageError("--ks values must be >= 1");
      }
      const auto report = evaluate_run(results_file, annotations_file, ks, count_somewhat);
      if (report.n_items == 0) std::cerr << "warning: results file contains no items\n";
      write_report(std::cout, report);
    } else if (*sweep) {
      const auto model = load_model(model_dir);
      if (grid.empty()) grid = default_grid(steps);
      for (const auto v : grid) {
        if (!(v >= 0.0 && v <= 1.0)) throw UsageError("tau grid values must lie in [0,1]");
      }
      const auto lines = read_lines(input_file, "classifier.classify");
      const auto annotations = load_annotations(annotations_file);
      const std::size_t use_k = eval_k > 0 ? eval_k : model.params.k;
      const auto points = sweep_tau(model, lines, annotations, grid, use_k, count_somewhat);
      std::ostringstream out;
      out << "tau\tprecision@" << use_k << '\n';
      for (const auto& p : points) out << format_double(p.tau) << '\t' << format_double(p.precision) << '\n';
      std::cout << out.str();
    } else if (*dump) {
      verify_model(model_dir);
      std::ifstream in(fs::path(model_dir) / artifact, std::ios::binary);
      if (!in) throw DataError("dump", "no artifact '" + artifact + "' in model");
      std::cout << in.rdbuf();
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
