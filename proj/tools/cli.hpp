#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eembi::cli {

enum ExitCode : int {
  ok = 0,
  failure = 1,
  usage = 2,
  ingestion = 3,
  pipeline = 4,
  metric = 5,
};

/**
 * Entry point for the eembi tool. args excludes the program name.
 *
 *   learn     learn a CPDAG from a CSV dataset
 *   eval      SHD and AUPR of a predicted adjacency matrix against a truth
 *   simulate  write synthetic replicates (dag, cpdag, data, manifest)
 *   bench     sweep method x beta x sample size x seed on synthetic data
 *
 * The EEMBI_THREADS environment variable sets estimator worker threads.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eembi::cli
