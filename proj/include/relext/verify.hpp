#pragma once

// The invariant suite run on each instance, and the batch driver.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relext/extension.hpp"
#include "relext/instance.hpp"

namespace relext {

namespace tolerance {
inline constexpr double green = 1e-10;
inline constexpr double weyl_identity = 1e-8;
inline constexpr double adjoint_param = 1e-8;
inline constexpr double tau_symmetry = 1e-8;
inline constexpr double model_weyl = 1e-8;
inline constexpr double relation = 1e-7;  // equality of extensions in C^n
inline constexpr double krein = 1e-8;
inline constexpr double tau_infinity = 1e-10;
// Admissible lambda: every resolvent involved stays below this norm.
inline constexpr double max_resolvent_norm = 1e4;
}  // namespace tolerance

inline constexpr int kKreinPoints = 10;

struct Check {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool skipped = false;
  std::string note;
  double elapsed_ms = 0.0;
};

struct InstanceResult {
  Index index = 0;
  std::uint64_t seed = 0;
  Profile profile = Profile::general;
  Instance instance;
  Index n = 0;
  Index d = 0;
  Index n_r = 0;
  Index dim_r = 0;
  bool minimal = false;
  CompressionFlags geometric;
  CompressionFlags asymptotic;
  std::vector<Check> checks;
  std::string error;  // set when a step threw
  double elapsed_ms = 0.0;

  bool passed() const;
  const Check* find(const std::string& name) const;
};

// check_seed drives the random lambdas and test relations.
InstanceResult verify_instance(const Instance& inst, std::uint64_t check_seed);

struct BatchConfig {
  Index count = 200;
  GenBounds bounds;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
};

struct BatchReport {
  BatchConfig config;
  std::vector<InstanceResult> results;
  double elapsed_ms = 0.0;

  bool all_passed() const;
  Index failures() const;
};

std::uint64_t instance_seed(std::uint64_t batch_seed, Index index);
Profile instance_profile(Index index);
Instance batch_instance(const BatchConfig& cfg, Index index);

enum class Execution { serial, parallel };

BatchReport verify_batch(const BatchConfig& cfg, Execution exec = Execution::parallel);

Json to_json(const InstanceResult& r, bool include_timing, bool include_instance);
// Schema "v1". Timing fields appear only when include_timing is set; the rest
// of the document is a deterministic function of the config.
Json to_json(const BatchReport& r, bool include_timing = true);
std::string to_text(const BatchReport& r);

}  // namespace relext
