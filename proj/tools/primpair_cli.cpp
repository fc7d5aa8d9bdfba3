// primpair: command-line front end over the C API.
//
// Exit codes: 0 success (IN_P, proved, pass), 1 negative result
// (NOT_IN_P, UNRESOLVED, no witness), 2 usage or resource error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "primpair/primpair.h"

namespace {

constexpr int kUsage = 2;

struct Options {
  std::uint64_t seed = 0;
  std::uint32_t threads = 0;
  std::uint64_t factor_budget = 0;
  std::uint64_t enum_bound = 10'000'000;
  std::uint64_t witness_budget = 1'000'000;
  std::uint32_t subset_bits = 20;
  std::string strategy = "prefix";
  std::string mode = "witness";
  std::string output = "json";
  std::string csv_path;
  bool no_timing = false;
};

using ConfigPtr = std::unique_ptr<pp_config, decltype(&pp_config_free)>;
using ResultPtr = std::unique_ptr<pp_result, decltype(&pp_result_free)>;

int report_status(pp_status s) {
  std::cerr << "error: " << pp_status_name(s) << ": " << pp_last_error() << '\n';
  return kUsage;
}

int apply(const Options& o, pp_config* c) {
  pp_status s = pp_config_set_seed(c, o.seed);
  if (s == PP_OK && o.threads) s = pp_config_set_threads(c, o.threads);
  if (s == PP_OK && o.factor_budget) s = pp_config_set_factor_budget(c, o.factor_budget);
  if (s == PP_OK) s = pp_config_set_enum_bound(c, o.enum_bound);
  if (s == PP_OK) s = pp_config_set_witness_budget(c, o.witness_budget);
  if (s == PP_OK) s = pp_config_set_subset_bits(c, o.subset_bits);
  if (s == PP_OK) s = pp_config_set_strategy(c, o.strategy.c_str());
  if (s == PP_OK) s = pp_config_set_mode(c, o.mode.c_str());
  if (s == PP_OK) s = pp_config_set_timing(c, o.no_timing ? 0 : 1);
  return s == PP_OK ? 0 : report_status(s);
}

int emit(const Options& o, const std::function<pp_status(const pp_config*, pp_result**)>& call) {
  pp_config* raw = nullptr;
  if (pp_config_new(&raw) != PP_OK) return report_status(PP_ERR_INTERNAL);
  ConfigPtr config(raw, pp_config_free);
  if (int rc = apply(o, config.get())) return rc;

  pp_result* out = nullptr;
  if (pp_status s = call(config.get(), &out); s != PP_OK) return report_status(s);
  ResultPtr result(out, pp_result_free);

  if (o.output == "csv")
    std::cout << pp_result_csv(result.get());
  else if (o.output == "text")
    std::cout << pp_result_text(result.get());
  else
    std::cout << pp_result_json(result.get());
  std::cout.flush();

  if (!o.csv_path.empty()) {
    std::ofstream file(o.csv_path, std::ios::binary);
    file << pp_result_csv(result.get());
    if (!file) {
      std::cerr << "error: cannot write " << o.csv_path << '\n';
      return kUsage;
    }
  }
  return pp_result_outcome(result.get()) == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primitive pairs (a, a + 1/a) with prescribed trace over finite fields"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--seed", o.seed, "Seed for witness search")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads (default: hardware concurrency)")->check(CLI::PositiveNumber);
  app.add_option("--factor-budget", o.factor_budget, "Pollard rho iteration cap (default 1e8)")->check(CLI::PositiveNumber);
  app.add_option("--enum-bound", o.enum_bound, "Largest q^n enumerated in count modes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--witness-budget", o.witness_budget, "Exponents tried per trace class")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--subset-bits", o.subset_bits, "Largest omega for exhaustive l search")
      ->check(CLI::Range(1, 40))
      ->capture_default_str();
  app.add_option("--strategy", o.strategy, "l selection")->check(CLI::IsMember({"prefix", "exhaustive"}))->capture_default_str();
  app.add_option("--mode", o.mode, "Verification mode")
      ->check(CLI::IsMember({"witness", "count", "exception"}))
      ->capture_default_str();
  app.add_option("--output", o.output, "Output format")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
  app.add_option("--csv", o.csv_path, "Also write the CSV rendering to this path");
  app.add_flag("--no-timing", o.no_timing, "Report elapsed_ms as 0");

  std::string m, q;
  std::uint32_t n = 0;
  std::uint64_t scope = 10'000'000;
  std::function<int()> action;

  auto* factor = app.add_subcommand("factor", "Factor a positive integer");
  factor->add_option("m", m, "Integer to factor")->required();
  factor->callback([&] { action = [&] { return emit(o, [&](auto* c, auto** r) { return pp_factor(c, m.c_str(), r); }); }; });

  auto add_qn = [&](CLI::App* sub) {
    sub->add_option("q", q, "Prime power q")->required();
    sub->add_option("n", n, "Extension degree n")->required()->check(CLI::PositiveNumber);
  };

  auto* sieve = app.add_subcommand("sieve", "Search for l passing the sieve inequality");
  add_qn(sieve);
  sieve->callback([&] { action = [&] { return emit(o, [&](auto* c, auto** r) { return pp_sieve(c, q.c_str(), n, r); }); }; });

  auto* decide = app.add_subcommand("decide", "Decide (q, n) by the sieve criteria");
  add_qn(decide);
  decide->callback([&] { action = [&] { return emit(o, [&](auto* c, auto** r) { return pp_decide(c, q.c_str(), n, r); }); }; });

  auto* table = app.add_subcommand("table1", "Recompute the published table of sieve pairs");
  table->callback([&] { action = [&] { return emit(o, [&](auto* c, auto** r) { return pp_table1(c, r); }); }; });

  auto* verify = app.add_subcommand("verify", "Verify (q, n) over the actual field");
  add_qn(verify);
  verify->callback([&] { action = [&] { return emit(o, [&](auto* c, auto** r) { return pp_verify(c, q.c_str(), n, r); }); }; });

  auto* confirm = app.add_subcommand("confirm-exceptions", "Verify every possible exception left by the sieve");
  confirm->add_option("--scope", scope, "Count mode for q^n up to this size")->capture_default_str();
  confirm->callback([&] {
    action = [&] { return emit(o, [&](auto* c, auto** r) { return pp_confirm_exceptions(c, scope, r); }); };
  });

  auto* chars = app.add_subcommand("charsum", "Audit character-sum identities on a tiny field");
  add_qn(chars);
  chars->callback([&] { action = [&] { return emit(o, [&](auto* c, auto** r) { return pp_charsum(c, q.c_str(), n, r); }); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  return action ? action() : kUsage;
}
