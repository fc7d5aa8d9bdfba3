#pragma once

// Serialization of engine results into JSON values, CSV and plain text.
// Big integers are decimal strings; rationals are {"num", "den"} strings.

#include <string>

#include <json.hpp>

#include "primpair/charsum.hpp"
#include "primpair/sieve.hpp"
#include "primpair/table1.hpp"
#include "primpair/verify.hpp"

namespace primpair::report {

using Json = nlohmann::json;

struct Rendered {
  Json result;
  std::string csv;
  std::string text;
  int outcome = 0;
};

Json rational(const Rational& v);

Rendered factor(const Factorization& f);
/// found is empty when the search produced no passing l.
Rendered sieve(const BigInt& q, unsigned n, const std::optional<sieve::SieveReport>& found, sieve::Strategy strategy);
Rendered decide(const BigInt& q, unsigned n, const sieve::Verdict& v);
Rendered table1(const std::vector<table1::RowResult>& rows);
Rendered verify(const verify::VerifyReport& r);
Rendered confirm(const verify::ConfirmSummary& s);
Rendered charsum(const charsum::AuditReport& a);

}  // namespace primpair::report
