#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "dnls/grid.hpp"

namespace dnls {

enum class ProfileFamily { Gaussian, ModulatedGaussian, Odd };

// Flat run configuration, serialized as "key=value" lines with '#' comments.
struct SimConfig {
  double q = 1.0;
  double lambda = 1.0;
  double epsilon = 0.1;
  double L = 1024.0;
  Eigen::Index N = 32768;
  double dt = 1e-2;
  double t_max = 256.0;
  double beta = 0.1;
  ProfileFamily profile = ProfileFamily::Gaussian;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  void validate() const;  // throws ConfigError naming the offending field
  GridSpec grid() const { return GridSpec::make(L, N); }
};

SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const SimConfig& cfg);
void save_config(const std::filesystem::path& path, const SimConfig& cfg);

const char* profile_name(ProfileFamily p);
ProfileFamily profile_from_name(const std::string& name);

// initial datum of the configured family, scaled to Sigma-norm epsilon
ComplexField initial_profile(const SimConfig& cfg, const GridSpec& grid);

}  // namespace dnls
