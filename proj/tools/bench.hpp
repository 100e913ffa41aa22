#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "divk/io.hpp"

namespace divk::cli {

struct BenchSpec {
  std::vector<double> minority_fractions;
  std::vector<double> lambdas;
  std::vector<std::string> algos;  // for the minority-fraction sweep
  std::uint64_t seed = 0;
  int restarts = 10;
  int threads = 1;
  std::optional<long> max_iterations;
  bool timing = true;
};

inline constexpr const char* kBenchHeader = "level,algo,seed,cost,pod,l1,l_star,feasible,seconds,status";

// Index of the smallest group, lowest index on ties.
Index minority_group(const Instance<double>& inst);

// Lower bounds that ask for ceil(fraction * k) centers from the minority group.
std::vector<int> minority_bounds(const Instance<double>& inst, double fraction);

void run_bench(const Instance<double>& inst, const BenchSpec& spec, std::ostream& out);

}  // namespace divk::cli
