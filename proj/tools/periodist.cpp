#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "periodist/job.hpp"
#include "periodist/scan.hpp"

namespace {

using periodist::cli::ExitCode;

int fail_input(const std::string& msg) {
  std::cerr << "periodist: error: " << msg << "\n";
  return static_cast<int>(ExitCode::input_error);
}

std::optional<unsigned> threads_from_env() {
  const char* v = std::getenv("PERIODIST_THREADS");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t pos = 0;
    const long n = std::stol(v, &pos);
    if (pos == std::string(v).size() && n >= 1 && n <= 256) return static_cast<unsigned>(n);
  } catch (const std::exception&) {
  }
  throw periodist::InvalidInput(std::string("PERIODIST_THREADS must be an integer in [1, 256], got '") + v + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computations in s'(Z^d): growth certificates, corona witnesses, stable rank reductions, "
               "Fourier coefficients of periodic distributions"};
  app.require_subcommand(1, 1);

  std::string spec_path, format = "json", out_path;
  std::optional<std::int64_t> window;
  std::optional<double> epsilon;

  for (const auto& name : periodist::cli::commands()) {
    auto* sub = app.add_subcommand(name, "run the '" + name + "' job");
    sub->add_option("--spec", spec_path, "job file (JSON)")->required();
    sub->add_option("--window", window, "scan radius R (default 50)");
    sub->add_option("--epsilon", epsilon, "epsilon override for reduce/approx/qdemo");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "write the report here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::input_error);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  periodist::cli::Report report;
  try {
    if (auto t = threads_from_env()) periodist::set_max_workers(*t);

    std::ifstream in(spec_path);
    if (!in) return fail_input(spec_path + ": cannot open");
    periodist::Json j;
    try {
      j = periodist::Json::parse(in);
    } catch (const periodist::Json::parse_error& e) {
      return fail_input(spec_path + ": " + e.what());
    }
    const auto spec = periodist::cli::parse_job(command, j, {window, epsilon});
    report = periodist::cli::run(spec);
    if (format == "csv" && !report.table) return fail_input("--format csv is not available for '" + command + "'");
  } catch (const periodist::SpecError& e) {
    return fail_input(spec_path + ": " + e.what());
  } catch (const periodist::InvalidInput& e) {
    return fail_input(e.what());
  } catch (const std::exception& e) {
    return fail_input(e.what());
  }

  const std::string text =
      format == "csv" ? periodist::cli::to_csv(report) : periodist::cli::to_json_text(report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) return fail_input(out_path + ": cannot write");
    out << text;
  }
  return static_cast<int>(report.exit_code);
}
