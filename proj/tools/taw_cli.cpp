#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "taw/cli.hpp"
#include "taw/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"twisted Araki-Woods generator toolkit"};
  std::string command, config_path, out_path, format = "text";
  taw::cli::Overrides ov;
  int threads = 0;

  app.add_option("command", command, "one of: validate gram wick moments dq conjugate fisher type noninjectivity transport")
      ->required();
  app.add_option("--config", config_path, "config file (JSON)")->required();
  app.add_option("--out", out_path, "write the JSON report here");
  app.add_option("--format", format, "stdout format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--truncation", ov.truncation, "Fock truncation N");
  app.add_option("--series-order", ov.series_order, "conjugate series order M");
  app.add_option("--tolerance", ov.tolerance, "structural tolerance");
  app.add_option("--size-cap", ov.size_cap, "dense entry cap");
  app.add_option("--R", ov.R, "power-series radius R");
  app.add_option("--C-R", ov.C_R, "transport smallness threshold C_R");
  app.add_flag("--force", ov.force, "run even if the twist fails validation");
  app.add_option("--threads", threads, "OpenMP thread cap (0 = default)");

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) taw::set_max_threads(threads);

  bool known = false;
  for (const auto& name : taw::cli::command_names()) known |= (name == command);
  if (!known) {
    std::cerr << "unknown command: " << command << "\n";
    return 1;
  }

  nlohmann::json config;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config: " << config_path << "\n";
      return 1;
    }
    try {
      in >> config;
    } catch (const std::exception& e) {
      std::cerr << "config parse error: " << e.what() << "\n";
      return 1;
    }
  }

  const auto outcome = taw::cli::run(command, config, ov);

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write report: " << out_path << "\n";
      return 1;
    }
    out << outcome.report.dump(2) << "\n";
  }
  if (format == "json")
    std::cout << outcome.report.dump(2) << std::endl;
  else
    std::cout << outcome.human;
  return outcome.exit_code;
}
