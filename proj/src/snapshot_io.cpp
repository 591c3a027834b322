#include "dnls/snapshot_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace dnls {

namespace {

constexpr char kMagic[4] = {'D', 'N', 'L', 'S'};

void put_bytes(std::ostream& os, const void* p, size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void put(std::ostream& os, T v) {
  put_bytes(os, &v, sizeof v);
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw DomainError("snapshot file truncated");
  return v;
}

void put_field(std::ostream& os, const CVec& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    put(os, v[k].real());
    put(os, v[k].imag());
  }
}

CVec get_field(std::istream& is, Eigen::Index n) {
  CVec v(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v[k] = Complex(re, im);
  }
  return v;
}

// every pad-th bin of a padded FFT-ordered spectrum
CVec coarse_spectrum(const ComplexField& w, Eigen::Index n_coarse) {
  if (w.grid.N == n_coarse) return w.v;
  if (w.grid.N % n_coarse != 0) throw GridMismatch("snapshot w is not a padding of u's dual grid");
  const Eigen::Index pad = w.grid.N / n_coarse;
  CVec out(n_coarse);
  for (Eigen::Index m = 0; m < n_coarse; ++m) {
    const Eigen::Index mu = m < n_coarse / 2 ? m : m - n_coarse;
    out[m] = w.v[(mu * pad + w.grid.N) % w.grid.N];
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_value(const std::string& line, const std::string& key) {
  const std::string tag = key + "=";
  const size_t pos = line.find(tag);
  if (pos == std::string::npos) throw DomainError("index line missing field " + key);
  return std::stod(line.substr(pos + tag.size()));
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap,
                    double q, double lambda) {
  if (snap.u.space != Space::Position || snap.w.space != Space::Frequency)
    throw DomainError("snapshot fields have unexpected spaces");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open " + path.string() + " for writing");
  put_bytes(os, kMagic, 4);
  put<std::uint32_t>(os, kSnapshotVersion);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(snap.u.grid.N));
  put(os, snap.u.grid.L);
  put(os, snap.t);
  put(os, q);
  put(os, lambda);
  put_field(os, snap.u.v);
  put_field(os, coarse_spectrum(snap.w, snap.u.grid.N));
  if (!os) throw DomainError("write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path, double* q, double* lambda) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw DomainError(path.string() + " is not a snapshot file");
  const auto version = get<std::uint32_t>(is);
  if (version != kSnapshotVersion)
    throw DomainError("unsupported snapshot version " + std::to_string(version));
  const auto n = static_cast<Eigen::Index>(get<std::uint64_t>(is));
  const double L = get<double>(is);
  Snapshot snap;
  snap.t = get<double>(is);
  const double q_in = get<double>(is);
  const double lambda_in = get<double>(is);
  if (q != nullptr) *q = q_in;
  if (lambda != nullptr) *lambda = lambda_in;
  const GridSpec grid = GridSpec::make(L, n);
  snap.u = ComplexField{grid, Space::Position, get_field(is, n)};
  snap.w = ComplexField{grid, Space::Frequency, get_field(is, n)};
  snap.norms.u_inf = norm(snap.u, Norm::Linf);
  snap.norms.w_inf = norm(snap.w, Norm::Linf);
  snap.norms.w_h1 = norm(snap.w, Norm::H1);
  snap.norms.w_at_zero_abs = std::abs(snap.w.v[0]);
  const double m = norm(snap.u, Norm::L2);
  snap.norms.mass = m * m;
  return snap;
}

void write_index(const std::filesystem::path& path, const std::vector<Snapshot>& run) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open " + path.string() + " for writing");
  os << "# dnls run index\n";
  os << "count=" << run.size() << "\n";
  for (const Snapshot& s : run) {
    os << "t=" << fmt(s.t) << " u_inf=" << fmt(s.norms.u_inf)
       << " w_inf=" << fmt(s.norms.w_inf) << " w_h1=" << fmt(s.norms.w_h1)
       << " w0=" << fmt(s.norms.w_at_zero_abs) << " mass=" << fmt(s.norms.mass)
       << " energy=" << fmt(s.norms.energy) << "\n";
  }
}

std::vector<std::pair<double, NormsRecord>> read_index(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open " + path.string());
  std::vector<std::pair<double, NormsRecord>> out;
  std::string line;
  double prev_t = -1.0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("count=", 0) == 0) continue;
    NormsRecord n;
    const double t = parse_value(line, "t");
    n.u_inf = parse_value(line, "u_inf");
    n.w_inf = parse_value(line, "w_inf");
    n.w_h1 = parse_value(line, "w_h1");
    n.w_at_zero_abs = parse_value(line, "w0");
    n.mass = parse_value(line, "mass");
    n.energy = parse_value(line, "energy");
    if (!out.empty() && !(t > prev_t)) throw NonMonotoneTimes("index " + path.string());
    prev_t = t;
    out.emplace_back(t, n);
  }
  return out;
}

std::vector<ObservableRow> observable_rows(const std::vector<Snapshot>& run) {
  std::vector<ObservableRow> rows;
  rows.reserve(run.size());
  for (const Snapshot& s : run) {
    ObservableRow r;
    r.t = s.t;
    r.norm_u_inf = s.norms.u_inf;
    r.norm_w_inf = s.norms.w_inf;
    r.norm_w_h1 = s.norms.w_h1;
    r.w_at_zero_abs = s.norms.w_at_zero_abs;
    rows.push_back(r);
  }
  return rows;
}

void write_csv(const std::filesystem::path& path, const std::vector<ObservableRow>& rows) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open " + path.string() + " for writing");
  os << "t,norm_u_inf,sqrt_t_times_norm_u_inf,norm_w_inf,norm_w_h1,"
        "w_at_zero_abs,g_cauchy_inf,residual_vw,residual_thm\n";
  for (const ObservableRow& r : rows) {
    os << fmt(r.t) << ',' << fmt(r.norm_u_inf) << ','
       << fmt(std::sqrt(r.t) * r.norm_u_inf) << ',' << fmt(r.norm_w_inf) << ','
       << fmt(r.norm_w_h1) << ',' << fmt(r.w_at_zero_abs) << ','
       << fmt(r.g_cauchy_inf) << ',' << fmt(r.residual_vw) << ','
       << fmt(r.residual_thm) << '\n';
  }
}

}  // namespace dnls
