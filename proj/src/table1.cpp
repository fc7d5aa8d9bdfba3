#include "primpair/table1.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "primpair/errors.hpp"

namespace primpair::table1 {

namespace detail {
extern const char kBundledCsv[];
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<BigInt>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i].get_str();
  return out;
}

std::string fixed4(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4Lf", v);
  return buf;
}

}  // namespace

std::vector<PrintedRow> parse_rows(std::string_view csv) {
  std::vector<PrintedRow> rows;
  bool header = true;
  for (auto line : split(csv, '\n')) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 6) throw std::invalid_argument("table1: malformed row '" + line + "'");
    PrintedRow r;
    r.q = static_cast<unsigned>(std::stoul(f[0]));
    r.n = static_cast<unsigned>(std::stoul(f[1]));
    for (const auto& p : split(f[2], ' '))
      if (!p.empty()) r.primes.push_back(parse_bigint(p));
    r.omega_l = static_cast<unsigned>(std::stoul(f[3]));
    r.delta = f[4];
    r.threshold = f[5];
    rows.push_back(std::move(r));
  }
  return rows;
}

const std::vector<PrintedRow>& printed_rows() {
  static const std::vector<PrintedRow> rows = parse_rows(detail::kBundledCsv);
  return rows;
}

RowResult reproduce_row(const PrintedRow& row, const FactorOptions& options) {
  RowResult out;
  out.printed = row;
  const BigInt q(row.q);
  Factorization f;
  try {
    f = factorize(sieve::group_order(q, row.n), options);
  } catch (const BudgetExhausted& e) {
    throw BudgetExhausted("table1 row (" + std::to_string(row.q) + "," + std::to_string(row.n) + "): " + e.what());
  }
  out.primes = radical_primes(f);
  out.primes_match = out.primes == row.primes;
  if (row.omega_l > out.primes.size())
    throw DomainError("table1 row (" + std::to_string(row.q) + "," + std::to_string(row.n) + "): omega(l) exceeds omega");
  out.report = sieve::sieve_eval(q, row.n, f, std::span(out.primes.data(), row.omega_l));
  out.delta_truncated = truncate_decimals(out.report.delta, 4);
  out.delta_match = abs(out.delta_truncated - parse_decimal(row.delta)) <= Rational(1, 10000);
  if (out.report.R) {
    out.threshold = sieve::threshold_value(*out.report.R, row.n);
    out.deviation = std::fabs(out.threshold - std::strtold(row.threshold.c_str(), nullptr));
  } else {
    out.threshold = NAN;
    out.deviation = NAN;
  }
  return out;
}

std::vector<RowResult> reproduce(const FactorOptions& options) {
  std::vector<RowResult> out;
  for (const auto& row : printed_rows()) out.push_back(reproduce_row(row, options));
  return out;
}

std::string to_csv(const std::vector<RowResult>& rows) {
  std::ostringstream os;
  os << "q,n,primes,omega_l,delta,Delta,threshold,printed_delta,printed_threshold,threshold_deviation,pass,"
        "primes_match,delta_match\n";
  for (const auto& r : rows) {
    const auto& rep = r.report;
    os << r.printed.q << ',' << r.printed.n << ',' << join(r.primes) << ',' << r.printed.omega_l << ','
       << render_fixed(rep.delta, 6) << ',' << (rep.Delta ? render_significant(*rep.Delta, 6) : "undefined") << ','
       << rep.threshold << ',' << r.printed.delta << ',' << r.printed.threshold << ','
       << (std::isnan(r.deviation) ? "undefined" : fixed4(r.deviation)) << ',' << (rep.pass ? "true" : "false") << ','
       << (r.primes_match ? "true" : "false") << ',' << (r.delta_match ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace primpair::table1
