#pragma once

// Reproduction of the published table of pairs (q, n) that pass the sieve
// inequality: recomputed primes, delta, Delta and threshold next to the
// printed values.

#include <string>
#include <string_view>
#include <vector>

#include "primpair/numtheory.hpp"
#include "primpair/sieve.hpp"

namespace primpair::table1 {

struct PrintedRow {
  unsigned q = 0;
  unsigned n = 0;
  std::vector<BigInt> primes;
  unsigned omega_l = 0;
  std::string delta;      // as printed
  std::string threshold;  // as printed
};

/// Rows of the bundled data file, in file order.
const std::vector<PrintedRow>& printed_rows();

/// Parses the data file format (header q,n,primes,omega_l,delta,threshold;
/// primes space separated).
std::vector<PrintedRow> parse_rows(std::string_view csv);

struct RowResult {
  PrintedRow printed;
  std::vector<BigInt> primes;  // recomputed
  bool primes_match = false;
  sieve::SieveReport report;   // l = the omega_l smallest recomputed primes
  Rational delta_truncated;    // delta truncated to 4 decimals
  bool delta_match = false;    // |truncated - printed| <= 1e-4
  long double threshold = 0;   // R^(2/(n-2))
  long double deviation = 0;   // |threshold - printed threshold|
};

RowResult reproduce_row(const PrintedRow& row, const FactorOptions& options = {});
std::vector<RowResult> reproduce(const FactorOptions& options = {});

/// Fixed-header CSV, one line per row.
std::string to_csv(const std::vector<RowResult>& rows);

}  // namespace primpair::table1
