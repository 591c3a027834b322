#include "dnls/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace dnls {

namespace {

bool power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + value + "' as a number");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + value + "' as an unsigned integer");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void SimConfig::validate() const {
  if (!(q > 0.0)) throw ConfigError("q: must be positive (repulsive delta), got " + fmt(q));
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon: must be nonnegative, got " + fmt(epsilon));
  if (!(L > 0.0)) throw ConfigError("l: half-length must be positive, got " + fmt(L));
  if (!power_of_two(N) || N < 8)
    throw ConfigError("n: must be a power of two >= 8, got " + std::to_string(N));
  if (!(dt > 0.0 && dt <= 0.1))
    throw ConfigError("dt: must lie in (0, 0.1], got " + fmt(dt));
  if (!(t_max >= 0.0)) throw ConfigError("tmax: must be nonnegative, got " + fmt(t_max));
  if (!(beta > 0.0 && beta < 0.125))
    throw ConfigError("beta: must lie in (0, 1/8), got " + fmt(beta));
  if (output_dir.empty()) throw ConfigError("out: output directory must be nonempty");
}

const char* profile_name(ProfileFamily p) {
  switch (p) {
    case ProfileFamily::Gaussian: return "gaussian";
    case ProfileFamily::ModulatedGaussian: return "modulated";
    case ProfileFamily::Odd: return "odd";
  }
  return "gaussian";
}

ProfileFamily profile_from_name(const std::string& name) {
  if (name == "gaussian") return ProfileFamily::Gaussian;
  if (name == "modulated") return ProfileFamily::ModulatedGaussian;
  if (name == "odd") return ProfileFamily::Odd;
  throw ConfigError("profile: unknown family '" + name +
                    "' (expected gaussian, modulated, or odd)");
}

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                        line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "q") cfg.q = parse_double(key, value);
    else if (key == "lambda") cfg.lambda = parse_double(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "l") cfg.L = parse_double(key, value);
    else if (key == "n") cfg.N = static_cast<Eigen::Index>(parse_u64(key, value));
    else if (key == "dt") cfg.dt = parse_double(key, value);
    else if (key == "tmax") cfg.t_max = parse_double(key, value);
    else if (key == "beta") cfg.beta = parse_double(key, value);
    else if (key == "profile") cfg.profile = profile_from_name(value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "out") cfg.output_dir = value;
    else throw ConfigError("unknown key '" + key + "' on line " + std::to_string(line_no));
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const SimConfig& cfg) {
  std::ostringstream os;
  os << "# dnls run configuration\n"
     << "q=" << fmt(cfg.q) << "\n"
     << "lambda=" << fmt(cfg.lambda) << "\n"
     << "epsilon=" << fmt(cfg.epsilon) << "\n"
     << "l=" << fmt(cfg.L) << "\n"
     << "n=" << cfg.N << "\n"
     << "dt=" << fmt(cfg.dt) << "\n"
     << "tmax=" << fmt(cfg.t_max) << "\n"
     << "beta=" << fmt(cfg.beta) << "\n"
     << "profile=" << profile_name(cfg.profile) << "\n"
     << "seed=" << cfg.seed << "\n"
     << "out=" << cfg.output_dir << "\n";
  return os.str();
}

void save_config(const std::filesystem::path& path, const SimConfig& cfg) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  os << serialize_config(cfg);
}

ComplexField initial_profile(const SimConfig& cfg, const GridSpec& grid) {
  ComplexField u0 = ComplexField::zero(grid, Space::Position);
  if (cfg.epsilon == 0.0) return u0;
  // seed perturbs the modulation wavenumber / envelope width reproducibly
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  const double widen = 1.0 + jitter(rng);
  const double k_mod = 1.0 + jitter(rng);
  for (Eigen::Index k = 0; k < grid.N; ++k) {
    const double x = grid.x(k);
    const double env = std::exp(-0.5 * widen * x * x);
    switch (cfg.profile) {
      case ProfileFamily::Gaussian:
        u0.v[k] = env;
        break;
      case ProfileFamily::ModulatedGaussian:
        u0.v[k] = env * std::exp(kI * k_mod * x);
        break;
      case ProfileFamily::Odd:
        u0.v[k] = x * env;
        break;
    }
  }
  const double s = norm(u0, Norm::Sigma);
  u0.v *= cfg.epsilon / s;
  return u0;
}

}  // namespace dnls
