#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace twm::cli {

struct RunConfig {
  std::string subcommand;
  std::vector<std::uint64_t> q_list;
  double t = 0.0;
  std::optional<double> s1_re, s1_im, s2_re, s2_im;  // explicit s1, s2 override t
  std::uint64_t a = 1, b = 1;
  double k = 1.0;
  std::uint64_t limit = 100000;
  double step = 1.0 / 16;
  int threads = 0;  // 0: OpenMP default
  std::string format;  // empty: csv for scans and tables, json otherwise
  std::string output;  // empty: stdout
  bool fast_weights = false;
  std::string interpretation = "log_derivative";
  std::string euler_form = "exact";
  std::uint32_t character = 0;  // lvalue: index into the primitive characters
  std::uint64_t count = 0;      // coeffs: rows to dump (0: whole table); weights: grid points
  double x_min = 1e-3, x_max = 1e3;
  std::string weight_kind = "single";
  double damper = 1.0;
  int N = 0, M = 0;                 // mollify: recursive spec when both set
  std::vector<unsigned> lengths{2};  // mollify: explicit desk spec otherwise
  std::vector<double> exponents{0.4};
};

/// Checks every module precondition that can be checked before computing; throws PreconditionError.
void validate(const RunConfig& config);

/// Computes and returns the report text (JSON or CSV).
std::string execute(const RunConfig& config);

/// argv front end: parses, validates, runs, writes the report; returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twm::cli
