// Command-line front end: library generation, marker rendering, detection,
// and the benchmark harness. Machine-readable output goes to stdout or files;
// progress and configuration echo go to stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "stag/codec.hpp"

namespace {

int run_generate(int bits, int min_hd, const std::string& mode, int stage1,
                 const std::string& out_path, int threads) {
  using namespace stag::codec;
  GenerationMode m;
  if (mode == "direct") {
    m = GenerationMode::kDirect;
  } else if (mode == "hierarchical") {
    m = GenerationMode::kHierarchical;
  } else {
    std::fprintf(stderr, "error: unknown mode '%s'\n", mode.c_str());
    return 2;
  }
  std::fprintf(stderr, "generate: bits=%d min_hd=%d mode=%s stage1=%d out=%s\n", bits,
               min_hd, mode.c_str(), stage1, out_path.c_str());
  GenerationOptions opts;
  opts.stage1_min_hd = stage1;
  opts.num_threads = threads;
  const MarkerLibrary lib = generate_library(bits, min_hd, m, opts);
  save_library(lib, out_path);
  std::printf("library size: %d\n", lib.size());
  if (!lib.empty()) {
    std::printf("max BER correction: %.6f (%d bits)\n", max_ber_correction(lib),
                max_correctable(lib));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stag: stable fiducial marker toolkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "generate a rotation-closed marker code library");
  int bits = 48, min_hd = 23, stage1 = 0, threads = 0;
  std::string mode = "hierarchical", out_path = "library.staglib";
  gen->add_option("--bits", bits, "code length in bits (multiple of 4)");
  gen->add_option("--min-hd", min_hd, "minimum rotation-closed Hamming distance");
  gen->add_option("--mode", mode, "direct|hierarchical");
  gen->add_option("--stage1-min-hd", stage1, "12-bit stage distance (0 = ceil(min_hd/4))");
  gen->add_option("--threads", threads, "worker threads (0 = hardware)");
  gen->add_option("-o,--out", out_path, "output library path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) return run_generate(bits, min_hd, mode, stage1, out_path, threads);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
