#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace primpair::report {

namespace {

Json strings(const std::vector<BigInt>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

std::string joined(const std::vector<BigInt>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i].get_str();
  return out;
}

std::string decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string coeff_string(const std::vector<ff::Coeff>& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " " : "") + std::to_string(c[i]);
  return out + "]";
}

Json sieve_json(const sieve::SieveReport& r) {
  Json j;
  j["q"] = r.q.get_str();
  j["n"] = r.n;
  j["cq"] = r.cq;
  j["l_primes"] = strings(r.l_primes);
  j["sieve_primes"] = strings(r.sieve_primes);
  j["r"] = r.r;
  j["delta"] = rational(r.delta);
  j["delta_decimal"] = render_significant(r.delta, 6);
  j["Delta"] = r.Delta ? rational(*r.Delta) : Json(nullptr);
  j["Delta_decimal"] = r.Delta ? Json(render_significant(*r.Delta, 6)) : Json(nullptr);
  j["R"] = r.R ? rational(*r.R) : Json(nullptr);
  j["R_decimal"] = r.R ? Json(render_significant(*r.R, 6)) : Json(nullptr);
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  return j;
}

void sieve_text(std::ostream& os, const sieve::SieveReport& r) {
  os << "l primes:      " << (r.l_primes.empty() ? "(none)" : joined(r.l_primes, ",")) << '\n'
     << "sieve primes:  " << (r.sieve_primes.empty() ? "(none)" : joined(r.sieve_primes, ",")) << '\n'
     << "r:             " << r.r << '\n'
     << "delta:         " << render_significant(r.delta, 6) << '\n'
     << "Delta:         " << (r.Delta ? render_significant(*r.Delta, 6) : "undefined") << '\n'
     << "R:             " << (r.R ? render_significant(*r.R, 6) : "undefined") << '\n'
     << "R^(2/(n-2)):   " << r.threshold << '\n'
     << "pass:          " << (r.pass ? "yes" : "no") << '\n';
}

const char* sieve_csv_header = "q,n,cq,l_primes,sieve_primes,r,delta,Delta,R,threshold,pass\n";

std::string sieve_csv_row(const sieve::SieveReport& r) {
  std::ostringstream os;
  os << r.q << ',' << r.n << ',' << r.cq << ',' << joined(r.l_primes, " ") << ',' << joined(r.sieve_primes, " ") << ','
     << r.r << ',' << render_significant(r.delta, 6) << ',' << (r.Delta ? render_significant(*r.Delta, 6) : "undefined")
     << ',' << (r.R ? render_significant(*r.R, 6) : "undefined") << ',' << r.threshold << ','
     << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

Json verify_json(const verify::VerifyReport& r) {
  Json j;
  j["q"] = r.q.get_str();
  j["n"] = r.n;
  j["mode"] = verify::to_string(r.mode);
  j["seed"] = std::to_string(r.seed);
  j["verdict"] = verify::to_string(r.verdict);
  Json classes = Json::array();
  for (const auto& c : r.per_trace) {
    Json e;
    e["index"] = c.index;
    e["trace"] = c.trace;
    e["count"] = c.count ? Json(*c.count) : Json(nullptr);
    e["attempts"] = c.attempts;
    if (c.witness) {
      e["witness"] = {{"exponent", std::to_string(c.witness->exponent)}, {"coefficients", c.witness->coefficients}};
    } else {
      e["witness"] = nullptr;
    }
    classes.push_back(std::move(e));
  }
  j["per_trace"] = std::move(classes);
  j["failing"] = r.failing;
  return j;
}

}  // namespace

Json rational(const Rational& v) { return {{"num", v.get_num().get_str()}, {"den", v.get_den().get_str()}}; }

Rendered factor(const Factorization& f) {
  Rendered out;
  Json factors = Json::array();
  std::ostringstream csv, text;
  csv << "prime,exponent\n";
  text << f.value() << " =";
  if (f.is_one()) text << " 1";
  bool first = true;
  for (const auto& pp : f.factors()) {
    factors.push_back(Json::array({pp.prime.get_str(), pp.exponent}));
    csv << pp.prime << ',' << pp.exponent << '\n';
    text << (first ? " " : " * ") << pp.prime;
    if (pp.exponent > 1) text << '^' << pp.exponent;
    first = false;
  }
  text << '\n';
  out.result = {{"value", f.value().get_str()}, {"factors", std::move(factors)}};
  out.csv = csv.str();
  out.text = text.str();
  return out;
}

Rendered sieve(const BigInt& q, unsigned n, const std::optional<sieve::SieveReport>& found, sieve::Strategy strategy) {
  Rendered out;
  const char* strat = strategy == sieve::Strategy::Prefix ? "prefix" : "exhaustive";
  out.result = {{"q", q.get_str()}, {"n", n}, {"strategy", strat}, {"found", found.has_value()}};
  out.result["report"] = found ? sieve_json(*found) : Json(nullptr);
  std::ostringstream text;
  text << "sieve (" << q << "," << n << ") strategy " << strat << '\n';
  if (found) {
    sieve_text(text, *found);
    out.csv = std::string(sieve_csv_header) + sieve_csv_row(*found);
  } else {
    text << "no witness\n";
    out.csv = "q,n,found\n" + q.get_str() + "," + std::to_string(n) + ",false\n";
    out.outcome = 1;
  }
  out.text = text.str();
  return out;
}

Rendered decide(const BigInt& q, unsigned n, const sieve::Verdict& v) {
  Rendered out;
  const std::string status = sieve::to_string(v.status);
  out.result = {{"q", q.get_str()}, {"n", n}, {"status", status}, {"note", v.note}};
  out.result["evidence"] = v.evidence ? sieve_json(*v.evidence) : Json(nullptr);
  const bool proved = v.status == sieve::Status::ProvedBasic || v.status == sieve::Status::ProvedSieve ||
                      v.status == sieve::Status::ProvedMersenne;
  out.outcome = proved ? 0 : 1;
  std::ostringstream text;
  text << "(" << q << "," << n << "): " << status << '\n';
  if (!v.note.empty()) text << v.note << '\n';
  if (v.evidence) sieve_text(text, *v.evidence);
  out.text = text.str();
  std::ostringstream csv;
  csv << "q,n,status,l_primes,delta,threshold,note\n"
      << q << ',' << n << ',' << status << ',' << (v.evidence ? joined(v.evidence->l_primes, " ") : "") << ','
      << (v.evidence ? render_significant(v.evidence->delta, 6) : "") << ','
      << (v.evidence ? v.evidence->threshold : "") << ',' << v.note << '\n';
  out.csv = csv.str();
  return out;
}

Rendered table1(const std::vector<table1::RowResult>& rows) {
  Rendered out;
  Json list = Json::array();
  std::ostringstream text;
  bool all_pass = true;
  for (const auto& r : rows) {
    Json j;
    j["q"] = r.printed.q;
    j["n"] = r.printed.n;
    j["omega_l"] = r.printed.omega_l;
    j["primes"] = strings(r.primes);
    j["printed_primes"] = strings(r.printed.primes);
    j["primes_match"] = r.primes_match;
    j["printed_delta"] = r.printed.delta;
    j["printed_threshold"] = r.printed.threshold;
    j["delta_truncated"] = render_fixed(r.delta_truncated, 4);
    j["delta_match"] = r.delta_match;
    j["threshold_deviation"] = std::isnan(r.deviation) ? Json(nullptr) : Json(decimal(static_cast<double>(r.deviation)));
    j["report"] = sieve_json(r.report);
    list.push_back(std::move(j));
    all_pass = all_pass && r.report.pass;
    text << "(" << r.printed.q << "," << r.printed.n << ") delta " << render_fixed(r.report.delta, 6) << " (printed "
         << r.printed.delta << ")  threshold " << r.report.threshold << " (printed " << r.printed.threshold << ")  "
         << (r.report.pass ? "pass" : "FAIL") << (r.primes_match ? "" : "  primes differ")
         << (r.delta_match ? "" : "  delta differs") << '\n';
  }
  out.result = {{"rows", std::move(list)}, {"all_pass", all_pass}};
  out.csv = table1::to_csv(rows);
  out.text = text.str();
  out.outcome = all_pass ? 0 : 1;
  return out;
}

Rendered verify(const verify::VerifyReport& r) {
  Rendered out;
  out.result = verify_json(r);
  out.outcome = r.verdict == verify::Outcome::InP ? 0 : 1;
  std::ostringstream text, csv;
  text << "(" << r.q << "," << r.n << ") " << verify::to_string(r.mode) << " mode: " << verify::to_string(r.verdict)
       << '\n';
  csv << "index,trace,count,witness_exponent,attempts\n";
  for (const auto& c : r.per_trace) {
    text << "  a = " << coeff_string(c.trace);
    if (c.count) text << "  count " << *c.count;
    if (c.witness)
      text << "  witness g^" << c.witness->exponent << " = " << coeff_string(c.witness->coefficients);
    else
      text << "  no witness";
    text << "  attempts " << c.attempts << '\n';
    csv << c.index << ',' << coeff_string(c.trace) << ',' << (c.count ? std::to_string(*c.count) : "") << ','
        << (c.witness ? std::to_string(c.witness->exponent) : "") << ',' << c.attempts << '\n';
  }
  out.text = text.str();
  out.csv = csv.str();
  return out;
}

Rendered confirm(const verify::ConfirmSummary& s) {
  Rendered out;
  Json pairs = Json::array();
  std::ostringstream text, csv;
  csv << "q,n,mode,verdict\n";
  for (const auto& e : s.entries) {
    pairs.push_back(verify_json(e.report));
    text << "(" << e.pair.q << "," << e.pair.n << ") " << verify::to_string(e.report.mode) << ": "
         << verify::to_string(e.report.verdict) << '\n';
    csv << e.pair.q << ',' << e.pair.n << ',' << verify::to_string(e.report.mode) << ','
        << verify::to_string(e.report.verdict) << '\n';
  }
  text << (s.all_in_p ? "all pairs IN_P\n" : "some pairs are not confirmed\n");
  out.result = {{"scope", std::to_string(s.scope)}, {"all_in_p", s.all_in_p}, {"pairs", std::move(pairs)}};
  out.text = text.str();
  out.csv = csv.str();
  out.outcome = s.all_in_p ? 0 : 1;
  return out;
}

Rendered charsum(const charsum::AuditReport& a) {
  Rendered out;
  auto check = [](std::uint64_t checks, std::uint64_t failures) {
    return Json{{"checks", checks}, {"failures", failures}};
  };
  Json j;
  j["q"] = a.q.get_str();
  j["n"] = a.n;
  j["cq"] = a.cq;
  j["rho"] = check(a.rho_checks, a.rho_failures);
  j["rho"]["max_error"] = decimal(a.rho_max_error);
  j["tau"] = check(a.tau_checks, a.tau_failures);
  j["tau"]["max_error"] = decimal(a.tau_max_error);
  j["count"] = check(a.count_checks, a.count_failures);
  j["weil"] = check(a.weil_checks, a.weil_failures);
  j["weil"]["max_ratio"] = decimal(a.weil_max_ratio);
  j["inner"] = check(a.inner_checks, a.inner_failures);
  j["inner"]["max_ratio"] = decimal(a.inner_max_ratio);
  j["inner"]["max_scaled"] = decimal(a.inner_max_scaled);
  j["pass"] = a.pass();
  out.result = std::move(j);
  out.outcome = a.pass() ? 0 : 1;

  std::ostringstream text, csv;
  text << "character sums over F_" << a.q << "^" << a.n << " (C_q = " << a.cq << ")\n"
       << "  rho indicator:   " << a.rho_checks - a.rho_failures << "/" << a.rho_checks << " agree, max error "
       << decimal(a.rho_max_error) << '\n'
       << "  tau indicator:   " << a.tau_checks - a.tau_failures << "/" << a.tau_checks << " agree, max error "
       << decimal(a.tau_max_error) << '\n'
       << "  counting:        " << a.count_checks - a.count_failures << "/" << a.count_checks << " agree\n"
       << "  chi_a bound:     " << a.weil_checks - a.weil_failures << "/" << a.weil_checks << " hold, max ratio "
       << decimal(a.weil_max_ratio) << '\n'
       << "  inner bound:     " << a.inner_checks - a.inner_failures << "/" << a.inner_checks << " hold, max |S|/q^(n/2) "
       << decimal(a.inner_max_scaled) << '\n'
       << (a.pass() ? "all checks pass\n" : "CHECKS FAILED\n");
  csv << "check,checks,failures,max\n"
      << "rho," << a.rho_checks << ',' << a.rho_failures << ',' << decimal(a.rho_max_error) << '\n'
      << "tau," << a.tau_checks << ',' << a.tau_failures << ',' << decimal(a.tau_max_error) << '\n'
      << "count," << a.count_checks << ',' << a.count_failures << ",\n"
      << "weil," << a.weil_checks << ',' << a.weil_failures << ',' << decimal(a.weil_max_ratio) << '\n'
      << "inner," << a.inner_checks << ',' << a.inner_failures << ',' << decimal(a.inner_max_ratio) << '\n';
  out.text = text.str();
  out.csv = csv.str();
  return out;
}

}  // namespace primpair::report
