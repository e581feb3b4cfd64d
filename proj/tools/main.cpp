#include <iostream>

#include "CLI11.hpp"

#include "dioph/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Runs approximation and metric checks described by a JSON manifest."};
  std::string manifest_path, out_dir;
  long precision = 0;
  long long seed = -1;
  app.add_option("--manifest", manifest_path, "Manifest file")->required()->check(CLI::ExistingFile);
  app.add_option("--precision", precision, "Working precision in bits (default: manifest, then $" +
                                               std::string(dioph::kPrecisionEnv) + ", then 512)")
      ->check(CLI::Range(32L, 16384L));
  app.add_option("--seed", seed, "Seed overriding the manifest")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "Output directory (default: manifest out_dir, then .)");
  app.set_version_flag("--version", std::string("dioph ") + dioph::kToolVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 4;
  }

  try {
    dioph::Manifest m = dioph::load_manifest(manifest_path);
    if (precision > 0) m.precision = precision;
    if (seed >= 0) m.seed = static_cast<uint64_t>(seed);
    if (!out_dir.empty()) m.out_dir = out_dir;
    dioph::RunOutcome r = dioph::run(m);
    for (const auto& line : r.log) std::cout << line << "\n";
    std::cout << m.command << ": " << r.holds << " HOLDS, " << r.violated << " VIOLATED, " << r.indeterminate
              << " INDETERMINATE, " << r.errors << " errors\n";
    for (const auto& f : r.files) std::cout << "wrote " << f << "\n";
    return r.exit_code;
  } catch (const dioph::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
