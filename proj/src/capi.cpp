#include "primpair/primpair.h"

#include <chrono>
#include <exception>
#include <string>
#include <thread>

#include "primpair/errors.hpp"
#include "report.hpp"

struct pp_config {
  std::uint64_t seed = 0;
  std::uint32_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t factor_budget = primpair::FactorOptions{}.rho_budget;
  std::uint64_t enum_bound = 10'000'000;
  std::uint64_t witness_budget = 1'000'000;
  std::uint32_t subset_bits = 20;
  primpair::sieve::Strategy strategy = primpair::sieve::Strategy::Prefix;
  primpair::verify::Mode mode = primpair::verify::Mode::Witness;
  bool timing = true;
};

struct pp_result {
  std::string json, csv, text;
  int outcome = 0;
};

namespace {

using namespace primpair;
using report::Json;

thread_local std::string last_error;

class ArgumentError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

pp_status fail(pp_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

pp_status translate() {
  try {
    throw;
  } catch (const ArgumentError& e) {
    return fail(PP_ERR_ARGUMENT, e.what());
  } catch (const BudgetExhausted& e) {
    return fail(PP_ERR_BUDGET, e.what());
  } catch (const BoundsError& e) {
    return fail(PP_ERR_BOUNDS, e.what());
  } catch (const DomainError& e) {
    return fail(PP_ERR_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PP_ERR_BOUNDS, "out of memory");
  } catch (const std::exception& e) {
    return fail(PP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PP_ERR_INTERNAL, "unknown error");
  }
}

const pp_config& effective(const pp_config* c) {
  static const pp_config defaults;
  return c ? *c : defaults;
}

Json config_json(const pp_config& c) {
  return {{"seed", std::to_string(c.seed)},
          {"threads", c.threads},
          {"factor_budget", std::to_string(c.factor_budget)},
          {"enum_bound", std::to_string(c.enum_bound)},
          {"witness_budget", std::to_string(c.witness_budget)},
          {"subset_bits", c.subset_bits},
          {"strategy", c.strategy == sieve::Strategy::Prefix ? "prefix" : "exhaustive"},
          {"mode", verify::to_string(c.mode)}};
}

FactorOptions factor_options(const pp_config& c) {
  FactorOptions o;
  o.rho_budget = c.factor_budget;
  return o;
}

verify::VerifyOptions verify_options(const pp_config& c) {
  verify::VerifyOptions o;
  o.seed = c.seed;
  o.witness_budget = c.witness_budget;
  o.enum_bound = c.enum_bound;
  o.threads = c.threads;
  o.factor = factor_options(c);
  return o;
}

BigInt integer_arg(const char* text, const char* what) {
  if (!text) throw ArgumentError(std::string(what) + " is null");
  try {
    return parse_bigint(text);
  } catch (const DomainError&) {
    throw ArgumentError(std::string(what) + " is not a decimal integer: '" + text + "'");
  }
}

BigInt prime_power_arg(const char* text, const pp_config& c) {
  const BigInt q = integer_arg(text, "q");
  if (!prime_power_decompose(q, factor_options(c))) throw DomainError("q = " + q.get_str() + " is not a prime power");
  return q;
}

template <class Body>
pp_status run(const char* command, const pp_config* config, pp_result** out, Body&& body) {
  if (!out) return fail(PP_ERR_ARGUMENT, "result pointer is null");
  *out = nullptr;
  try {
    const pp_config& c = effective(config);
    const auto start = std::chrono::steady_clock::now();
    report::Rendered r = body(c);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    Json envelope{{"command", command},
                  {"config", config_json(c)},
                  {"result", std::move(r.result)},
                  {"elapsed_ms", c.timing ? elapsed.count() : 0}};
    auto* res = new pp_result;
    res->json = envelope.dump(2) + "\n";
    res->csv = std::move(r.csv);
    res->text = std::move(r.text);
    res->outcome = r.outcome;
    *out = res;
    last_error.clear();
    return PP_OK;
  } catch (...) {
    return translate();
  }
}

pp_status set(pp_config* c, auto&& apply) {
  if (!c) return fail(PP_ERR_ARGUMENT, "config is null");
  return apply(*c);
}

}  // namespace

extern "C" {

const char* pp_version(void) { return "1.0.0"; }

const char* pp_status_name(pp_status status) {
  switch (status) {
    case PP_OK: return "ok";
    case PP_ERR_DOMAIN: return "domain error";
    case PP_ERR_BUDGET: return "budget exhausted";
    case PP_ERR_BOUNDS: return "bounds exceeded";
    case PP_ERR_ARGUMENT: return "invalid argument";
    case PP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pp_last_error(void) { return last_error.c_str(); }

pp_status pp_config_new(pp_config** out) {
  if (!out) return fail(PP_ERR_ARGUMENT, "config pointer is null");
  *out = new pp_config;
  return PP_OK;
}

void pp_config_free(pp_config* config) { delete config; }

pp_status pp_config_set_seed(pp_config* config, uint64_t seed) {
  return set(config, [&](pp_config& c) {
    c.seed = seed;
    return PP_OK;
  });
}

pp_status pp_config_set_threads(pp_config* config, uint32_t threads) {
  return set(config, [&](pp_config& c) {
    if (threads == 0) return fail(PP_ERR_ARGUMENT, "threads must be positive");
    c.threads = threads;
    return PP_OK;
  });
}

pp_status pp_config_set_factor_budget(pp_config* config, uint64_t iterations) {
  return set(config, [&](pp_config& c) {
    if (iterations == 0) return fail(PP_ERR_ARGUMENT, "factor budget must be positive");
    c.factor_budget = iterations;
    return PP_OK;
  });
}

pp_status pp_config_set_enum_bound(pp_config* config, uint64_t bound) {
  return set(config, [&](pp_config& c) {
    if (bound == 0) return fail(PP_ERR_ARGUMENT, "enumeration bound must be positive");
    c.enum_bound = bound;
    return PP_OK;
  });
}

pp_status pp_config_set_witness_budget(pp_config* config, uint64_t budget) {
  return set(config, [&](pp_config& c) {
    if (budget == 0) return fail(PP_ERR_ARGUMENT, "witness budget must be positive");
    c.witness_budget = budget;
    return PP_OK;
  });
}

pp_status pp_config_set_subset_bits(pp_config* config, uint32_t bits) {
  return set(config, [&](pp_config& c) {
    if (bits == 0 || bits > 40) return fail(PP_ERR_ARGUMENT, "subset bits must lie in [1, 40]");
    c.subset_bits = bits;
    return PP_OK;
  });
}

pp_status pp_config_set_strategy(pp_config* config, const char* strategy) {
  return set(config, [&](pp_config& c) {
    const std::string s = strategy ? strategy : "";
    if (s == "prefix")
      c.strategy = sieve::Strategy::Prefix;
    else if (s == "exhaustive")
      c.strategy = sieve::Strategy::Exhaustive;
    else
      return fail(PP_ERR_ARGUMENT, "strategy must be prefix or exhaustive, got '" + s + "'");
    return PP_OK;
  });
}

pp_status pp_config_set_mode(pp_config* config, const char* mode) {
  return set(config, [&](pp_config& c) {
    const auto m = verify::parse_mode(mode ? mode : "");
    if (!m) return fail(PP_ERR_ARGUMENT, std::string("mode must be witness, count or exception, got '") + (mode ? mode : "") + "'");
    c.mode = *m;
    return PP_OK;
  });
}

pp_status pp_config_set_timing(pp_config* config, int enabled) {
  return set(config, [&](pp_config& c) {
    c.timing = enabled != 0;
    return PP_OK;
  });
}

pp_status pp_factor(const pp_config* config, const char* m, pp_result** out) {
  return run("factor", config, out, [&](const pp_config& c) {
    return report::factor(factorize(integer_arg(m, "m"), factor_options(c)));
  });
}

pp_status pp_sieve(const pp_config* config, const char* q, uint32_t n, pp_result** out) {
  return run("sieve", config, out, [&](const pp_config& c) {
    const BigInt qq = prime_power_arg(q, c);
    if (n == 0) throw ArgumentError("n must be positive");
    const auto f = factorize(sieve::group_order(qq, n), factor_options(c));
    return report::sieve(qq, n, sieve::find_witness(qq, n, f, c.strategy, c.subset_bits), c.strategy);
  });
}

pp_status pp_decide(const pp_config* config, const char* q, uint32_t n, pp_result** out) {
  return run("decide", config, out, [&](const pp_config& c) {
    const BigInt qq = prime_power_arg(q, c);
    if (n == 0) throw ArgumentError("n must be positive");
    sieve::DecideOptions o;
    o.max_subset_bits = c.subset_bits;
    o.factor = factor_options(c);
    return report::decide(qq, n, sieve::decide(qq, n, o));
  });
}

pp_status pp_table1(const pp_config* config, pp_result** out) {
  return run("table1", config, out, [&](const pp_config& c) { return report::table1(table1::reproduce(factor_options(c))); });
}

pp_status pp_verify(const pp_config* config, const char* q, uint32_t n, pp_result** out) {
  return run("verify", config, out, [&](const pp_config& c) {
    const BigInt qq = prime_power_arg(q, c);
    if (n == 0) throw ArgumentError("n must be positive");
    return report::verify(verify::verify_pair(qq, n, c.mode, verify_options(c)));
  });
}

pp_status pp_confirm_exceptions(const pp_config* config, uint64_t scope, pp_result** out) {
  return run("confirm-exceptions", config, out, [&](const pp_config& c) {
    return report::confirm(verify::confirm_exceptions(scope, verify_options(c)));
  });
}

pp_status pp_charsum(const pp_config* config, const char* q, uint32_t n, pp_result** out) {
  return run("charsum", config, out, [&](const pp_config& c) {
    const BigInt qq = prime_power_arg(q, c);
    if (n == 0) throw ArgumentError("n must be positive");
    if (pow(qq, n) > charsum::kTinyFieldCap)
      throw BoundsError("q^n = " + pow(qq, n).get_str() + " exceeds the character table bound " +
                        std::to_string(charsum::kTinyFieldCap));
    const auto pk = *prime_power_decompose(qq, factor_options(c));
    const auto p = to_u64(pk.first);
    if (!p) throw BoundsError("characteristic too large for a character table");
    const auto t = ff::FieldTower::build(*p, pk.second, n, factor_options(c));
    return report::charsum(charsum::audit(t));
  });
}

const char* pp_result_json(const pp_result* result) { return result ? result->json.c_str() : ""; }
const char* pp_result_csv(const pp_result* result) { return result ? result->csv.c_str() : ""; }
const char* pp_result_text(const pp_result* result) { return result ? result->text.c_str() : ""; }
int pp_result_outcome(const pp_result* result) { return result ? result->outcome : 1; }
void pp_result_free(pp_result* result) { delete result; }

}  // extern "C"
