#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "dnls/propagator.hpp"

namespace dnls {

inline constexpr std::uint32_t kSnapshotVersion = 1;

// Binary snapshot layout (little endian):
//   "DNLS" | version u32 | N u64 | L f64 | t f64 | q f64 | lambda f64
//   | N interleaved re/im f64 for u | N interleaved re/im f64 for w.
// w is stored on the coarse dual grid (every pad-th spectral bin); the fine
// spectrum is recomputable from u.
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap,
                    double q, double lambda);
Snapshot read_snapshot(const std::filesystem::path& path, double* q = nullptr,
                       double* lambda = nullptr);

// text index of a run: one "key=value" record line per snapshot
void write_index(const std::filesystem::path& path, const std::vector<Snapshot>& run);
std::vector<std::pair<double, NormsRecord>> read_index(const std::filesystem::path& path);

// one row of the observable table
struct ObservableRow {
  double t = 0.0;
  double norm_u_inf = 0.0;
  double norm_w_inf = 0.0;
  double norm_w_h1 = 0.0;
  double w_at_zero_abs = 0.0;
  double g_cauchy_inf = 0.0;
  double residual_vw = 0.0;
  double residual_thm = 0.0;
};

std::vector<ObservableRow> observable_rows(const std::vector<Snapshot>& run);
void write_csv(const std::filesystem::path& path, const std::vector<ObservableRow>& rows);

}  // namespace dnls
