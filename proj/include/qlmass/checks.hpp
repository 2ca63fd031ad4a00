#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qlmass/io.hpp"

// Property suite behind the `check` subcommand. Every property is computed
// from closed forms or internal consistency, never from stored numbers.
namespace qlmass::checks {

struct Property {
  std::string name;
  bool pass = false;
  io::Json details;
};

// Flat shell 1 <= rho <= 2 with u = 0.9 inside, 1 outside; exact solution
// 1.1 - 0.2 / rho, outer flux 0.05.
struct Convergence {
  std::vector<std::string> levels;
  std::vector<double> max_error;
  // max_error[k] / max_error[k + 1].
  std::vector<double> ratios;
  double finest_flux = 0.0;
};

// Radial: intervals, 2x, 4x intervals.
Convergence radial_shell_convergence(std::size_t intervals = 64);
// Icosphere shells with (frequency, layers) doubled per level.
Convergence fem_shell_convergence(std::size_t frequency = 4, std::size_t layers = 2, std::size_t levels = 3);

struct ShiTamSweep {
  std::size_t count = 0;
  double min_gap = 0.0;
  std::uint64_t min_gap_seed = 0;
  // Seeds whose fill-in violated the inequality beyond gap_tol.
  std::vector<std::uint64_t> violations;
  // Seeds with gap below the equality threshold but not flat.
  std::vector<std::uint64_t> rigidity_failures;
  std::size_t equality_cases = 0;
  double seconds = 0.0;
};

ShiTamSweep shitam_sweep(std::uint64_t first_seed, std::size_t seeds, double gap_tol = 1e-9,
                         double equality_threshold = 1e-6, double flatness_tol = 1e-4);

struct CheckOptions {
  std::size_t seeds = 1000;
  std::uint64_t first_seed = 0;
  std::size_t resolution = 64;
  double tol = 1e-8;
};

std::vector<Property> run_suite(const CheckOptions& options);
io::Json to_json(const std::vector<Property>& properties);

}  // namespace qlmass::checks
