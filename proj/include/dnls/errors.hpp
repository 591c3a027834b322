#pragma once

#include <stdexcept>
#include <string>

namespace dnls {

struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& what) : std::runtime_error("grid mismatch: " + what) {}
};

struct BoundaryMass : std::runtime_error {
  explicit BoundaryMass(const std::string& what) : std::runtime_error("boundary mass: " + what) {}
};

struct BandEdge : std::runtime_error {
  explicit BandEdge(const std::string& what) : std::runtime_error("band edge: " + what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error("domain error: " + what) {}
};

struct OracleResolution : std::runtime_error {
  explicit OracleResolution(const std::string& what) : std::runtime_error("oracle resolution: " + what) {}
};

struct NonMonotoneTimes : std::runtime_error {
  explicit NonMonotoneTimes(const std::string& what) : std::runtime_error("non-monotone times: " + what) {}
};

struct InsufficientRun : std::runtime_error {
  explicit InsufficientRun(const std::string& what) : std::runtime_error("insufficient run: " + what) {}
};

struct NonPositiveValue : std::runtime_error {
  explicit NonPositiveValue(const std::string& what)
      : std::runtime_error("non-positive value: " + what) {}
};

struct TooFewPoints : std::runtime_error {
  explicit TooFewPoints(const std::string& what) : std::runtime_error("too few points: " + what) {}
};

struct MonitorBreach : std::runtime_error {
  explicit MonitorBreach(const std::string& what) : std::runtime_error("monitor breach: " + what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error("config error: " + what) {}
};

struct NonFiniteSample : std::runtime_error {
  explicit NonFiniteSample(const std::string& what) : std::runtime_error("non-finite sample: " + what) {}
};

}  // namespace dnls
