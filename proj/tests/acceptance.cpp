// Acceptance suite runner: one pass/fail line per criterion.
// Exit code 0 only when every criterion passes.

#include <cstring>
#include <iostream>
#include <string>

#include "exrings/io.hpp"
#include "exrings/validation.hpp"

int main(int argc, char** argv) {
  exrings::AcceptanceOptions options;
  std::string out_dir;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto value = [&](const char* name) -> std::string {
      if (i + 1 >= argc) {
        std::cerr << name << " needs a value\n";
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--profile") {
      options.profile = exrings::profile_from_string(value("--profile"));
    } else if (arg == "--jobs") {
      options.jobs = static_cast<unsigned>(std::stoul(value("--jobs")));
    } else if (arg == "--out") {
      out_dir = value("--out");
    } else if (arg == "--help" || arg == "-h") {
      std::cout << "usage: exrings_acceptance [--profile paper|fast] [--jobs N] "
                   "[--out DIR]\n";
      return 0;
    } else {
      std::cerr << "unknown argument " << arg << "\n";
      return 2;
    }
  }

  const auto results = exrings::run_acceptance_suite(options);
  std::cout << exrings::acceptance_table(results);
  if (!out_dir.empty()) {
    exrings::ensure_directory(out_dir);
    exrings::write_text_file(out_dir + "/validation_report.json",
                             exrings::acceptance_report_json(results, options));
  }
  return exrings::all_passed(results) ? 0 : 1;
}
