#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsing {

enum ExitStatus : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitParse = 2,
  kExitPrecondition = 3,
  kExitDegenerate = 4,
};

struct RunConfig {
  std::string command; // freqscan identities pinchmap beta jones cover reifcheck minkowski
  std::string field_path;
  std::string measure_path;
  std::string oracle_path;
  std::string points_path;
  std::string balls_path;
  std::string out_path;

  std::vector<double> center;
  std::string radii = "0.25,0.5,1";
  double r = 1.0;
  double s = 0.25;
  double half_width = 0.125;
  std::size_t count = 17;
  std::string rhos = "0.02,0.04,0.08";

  std::size_t k = 1;
  double s0 = 1.0;
  std::size_t scales = 8;
  bool bruteforce = false;

  double rho = 0.01;
  double delta = 0.05;
  double delta0 = 0.01;
  double rho_target = 0.02;

  std::string weight_knots; // "t:v,t:v"; empty for the default profile
  int radial_nodes = 16;
  int angular_nodes = 256;
  int mc_samples = 1 << 18;
  std::string method = "slab";
  bool serial = false;
  std::uint64_t seed = 20240611;
  int threads = 0; // 0: QSING_THREADS or the OpenMP default
};

/// Runs one command: writes the CSV to out_path and always writes out_path + ".manifest.json".
int run(const RunConfig& config, std::ostream& log);

/// Parses arguments (and an optional --config file) into a RunConfig and runs it.
int cli_main(int argc, char** argv);

} // namespace qsing
