// transduct: rejected-box tables, scenario files, and the numeric self-test.
//
// Exit codes: 0 success, 2 invalid input, 3 numeric or domain failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance/criteria.hpp"
#include "transduct/cotter.hpp"
#include "transduct/errors.hpp"
#include "transduct/report.hpp"
#include "transduct/runner.hpp"
#include "transduct/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNumeric = 3;

using transduct::scenario::OutputFormat;

struct FormatOption {
  std::string format = "markdown";
  int precision = 4;
};

void add_output_options(CLI::App& cmd, FormatOption& out, bool with_defaults) {
  auto* f = cmd.add_option("--format", out.format, "csv, markdown or json")
                ->check(CLI::IsMember({"csv", "markdown", "json"}));
  auto* p = cmd.add_option("--precision", out.precision, "significant digits")->check(CLI::Range(1, 17));
  if (with_defaults) {
    f->capture_default_str();
    p->capture_default_str();
  }
}

int run_cotter(const transduct::scenario::CotterParams& params, const FormatOption& out) {
  if (params.pseudo_count > 0.0) {
    std::cerr << "note: pseudo-count " << params.pseudo_count
              << " added to both defect and non-defect counts\n";
  }
  transduct::scenario::validate(params);
  const auto rows = transduct::cotter::run_cotter_pin(params);
  std::cout << transduct::report::render(transduct::cotter::to_table(rows),
                                         transduct::scenario::parse_format(out.format, "--format"),
                                         out.precision);
  return kOk;
}

int run_file(const std::string& path, const FormatOption& out, bool format_given, bool precision_given) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot read " << path << "\n";
    return kInvalid;
  }
  std::stringstream text;
  text << file.rdbuf();
  auto spec = transduct::scenario::parse_scenario(text.str());
  if (format_given) spec.output.format = transduct::scenario::parse_format(out.format, "--format");
  if (precision_given) spec.output.precision = out.precision;
  std::cout << transduct::runner::run_scenario(spec);
  return kOk;
}

int run_selftest() {
  bool all = true;
  for (const auto& outcome : transduct::acceptance::numeric_criteria()) {
    std::cout << transduct::acceptance::format_line(outcome) << "\n";
    all = all && outcome.pass;
  }
  return all ? kOk : kNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transductive prediction over finite model spaces"};
  app.require_subcommand(1);

  transduct::scenario::CotterParams cotter;
  FormatOption cotter_out;
  auto* cotter_cmd = app.add_subcommand("cotter", "rejected-box predictions for a defect-rate process");
  cotter_cmd->add_option("--n0", cotter.n0, "prior sample sizes, comma separated")->delimiter(',');
  cotter_cmd->add_option("--ratio", cotter.ratio, "observed defect ratio r0/n0")->required();
  cotter_cmd->add_option("--n", cotter.n, "future sample size")->capture_default_str();
  cotter_cmd->add_option("--threshold", cotter.threshold, "a box is rejected when defects exceed this")
      ->capture_default_str();
  cotter_cmd->add_option("--pseudo-count", cotter.pseudo_count,
                         "virtual defects and non-defects added to the prior sample")
      ->capture_default_str();
  add_output_options(*cotter_cmd, cotter_out, true);

  std::string scenario_path;
  FormatOption run_out;
  auto* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  add_output_options(*run_cmd, run_out, false);

  auto* selftest_cmd = app.add_subcommand("selftest", "run the numeric acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*cotter_cmd) return run_cotter(cotter, cotter_out);
    if (*run_cmd) {
      return run_file(scenario_path, run_out, run_cmd->count("--format") > 0,
                      run_cmd->count("--precision") > 0);
    }
    if (*selftest_cmd) return run_selftest();
  } catch (const transduct::scenario::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const transduct::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kInvalid;
}
