// wchaos command-line front end.
//
// Subcommands:
//   cumulant            three-route joint cumulant of a kernel spec
//   bounds              Delta_C, psi and the d1/d2 Gaussian-distance bounds
//   demo-fourth-moment  the 1/n convergence family as a table
//   verify              seeded random property battery over the invariants
//   simulate            Monte Carlo estimates against the exact oracle
//
// Exit codes: 0 success, 2 violated agreement/inequality, 64 usage or spec
// parse error, 65 order/degree cap exceeded.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wchaos/bounds.hpp"
#include "wchaos/chaos.hpp"
#include "wchaos/cumulants.hpp"
#include "wchaos/malliavin.hpp"
#include "wchaos/montecarlo.hpp"
#include "wchaos/report.hpp"
#include "wchaos/spec_io.hpp"
#include "wchaos/tensor.hpp"
#include "wchaos/verify.hpp"

namespace {

using namespace wchaos;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 2;
constexpr int kExitUsage = 64;
constexpr int kExitCapExceeded = 65;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (cur.empty()) throw SpecError("bad " + what + " \"" + text + "\": empty entry");
      try {
        size_t pos = 0;
        const int v = std::stoi(cur, &pos);
        if (pos != cur.size() || v < 0) throw std::invalid_argument("");
        out.push_back(v);
      } catch (...) {
        throw SpecError("bad " + what + " \"" + text +
                        "\": entries must be non-negative integers");
      }
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  return out;
}

std::vector<int> parse_multi_index(const std::string& text, int d) {
  const std::vector<int> m = parse_int_list(text, "multi-index");
  if (static_cast<int>(m.size()) != d)
    throw SpecError("multi-index has " + std::to_string(m.size()) + " entries, spec has " +
                    std::to_string(d) + " components");
  int total = 0;
  for (int v : m) total += v;
  if (total < 1) throw SpecError("multi-index must be nonzero");
  return m;
}

void write_spec_echo(JsonWriter& w, const KernelSpecDocument& doc) {
  w.key("spec").begin_object();
  w.key("dim").value(doc.dim);
  w.key("components").begin_array();
  for (const auto& comp : doc.components) {
    w.begin_object();
    w.key("name").value(comp.name);
    w.key("order").value(comp.order);
    w.key("coeffs").begin_array();
    for (const auto& [idx, value] : comp.coeffs) {
      w.begin_object();
      w.key("idx").begin_array();
      for (int e : idx) w.value(e);
      w.end_array();
      w.key("value").value(value);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

void write_timings(JsonWriter& w, bool no_timings, const Timer& timer) {
  if (no_timings) return;
  w.key("timings").begin_object();
  w.key("total_ms").value(timer.elapsed_ms());
  w.end_object();
}

void emit(const JsonWriter& w) { std::cout << w.str() << "\n"; }

// ---------------------------------------------------------------- cumulant
int cmd_cumulant(const std::string& spec_path, const std::string& m_text, double tol,
                 const std::string& format, bool no_timings) {
  Timer timer;
  const KernelSpecDocument doc = load_spec_file(spec_path);
  const ChaosVector F = to_chaos_vector(doc);
  const std::vector<int> m = parse_multi_index(m_text, F.size());

  const double closed_avg = cumulant_closed_form(F, m);
  const double gamma_avg = cumulant_via_gamma(F, m);
  const double oracle = cumulants_from_moments(F, m);

  struct OrderingRow {
    std::vector<int> ordering;
    double closed = 0.0;
    double gam = 0.0;
  };
  std::vector<OrderingRow> rows;
  bool orderings_agree = true;
  for (const auto& ord : multi_index_orderings(m)) {
    const GammaPath path(ord);
    OrderingRow row;
    row.ordering = ord;
    row.closed = cumulant_closed_form(F, m, path);
    row.gam = cumulant_via_gamma(F, m, path);
    if (!detail::close_rel(row.closed, row.gam, tol)) orderings_agree = false;
    rows.push_back(row);
  }
  const bool agree = detail::close_rel(closed_avg, oracle, tol) &&
                     detail::close_rel(gamma_avg, oracle, tol) && orderings_agree;

  if (format == "csv") {
    std::string out = "route,value\n";
    out += "closed_form_averaged," + format_double(closed_avg) + "\n";
    out += "gamma_averaged," + format_double(gamma_avg) + "\n";
    out += "oracle," + format_double(oracle) + "\n";
    for (const auto& row : rows) {
      std::string ord;
      for (std::size_t i = 0; i < row.ordering.size(); ++i)
        ord += (i ? "|" : "") + std::to_string(row.ordering[i]);
      out += "ordering " + ord + " closed," + format_double(row.closed) + "\n";
      out += "ordering " + ord + " gamma," + format_double(row.gam) + "\n";
    }
    std::cout << out;
  } else {
    JsonWriter w;
    w.begin_object();
    w.key("command").value("cumulant");
    write_spec_echo(w, doc);
    w.key("m").begin_array();
    for (int v : m) w.value(v);
    w.end_array();
    w.key("tol").value(tol);
    w.key("results").begin_object();
    w.key("closed_form_averaged").value(closed_avg);
    w.key("gamma_averaged").value(gamma_avg);
    w.key("oracle").value(oracle);
    w.key("per_ordering").begin_array();
    for (const auto& row : rows) {
      w.begin_object();
      w.key("ordering").begin_array();
      for (int v : row.ordering) w.value(v);
      w.end_array();
      w.key("closed_form").value(row.closed);
      w.key("gamma").value(row.gam);
      w.end_object();
    }
    w.end_array();
    w.key("routes_agree").value(agree);
    w.end_object();
    write_timings(w, no_timings, timer);
    w.end_object();
    emit(w);
  }
  return agree ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------------ bounds
int cmd_bounds(const std::string& spec_path, const std::string& format, bool no_timings) {
  Timer timer;
  const KernelSpecDocument doc = load_spec_file(spec_path);
  const ChaosVector F = to_chaos_vector(doc);
  const BoundReport rep = bound_report(F);

  const bool delta_le_psi = rep.delta_c <= rep.psi * (1.0 + 1e-12) + 1e-12;
  bool pair_estimates_all = true;
  for (int i = 0; i < F.size(); ++i)
    for (int j = i; j < F.size(); ++j)
      if (!pair_estimate_check(F.kernel_of(i), F.kernel_of(j)).holds) pair_estimates_all = false;
  const bool ok = delta_le_psi && pair_estimates_all;

  if (format == "csv") {
    std::string out = "quantity,value\n";
    out += "delta_c," + format_double(rep.delta_c) + "\n";
    out += "psi," + format_double(rep.psi) + "\n";
    out += "d2_bound," + format_double(rep.d2) + "\n";
    out += "d1_bound," + (std::isinf(rep.d1) ? std::string("inf") : format_double(rep.d1)) + "\n";
    std::cout << out;
  } else {
    JsonWriter w;
    w.begin_object();
    w.key("command").value("bounds");
    write_spec_echo(w, doc);
    w.key("results").begin_object();
    w.key("covariance").begin_array();
    for (int i = 0; i < rep.covariance.n; ++i) {
      w.begin_array();
      for (int j = 0; j < rep.covariance.n; ++j) w.value(rep.covariance.at(i, j));
      w.end_array();
    }
    w.end_array();
    w.key("fourth_cumulants").begin_array();
    for (double v : rep.fourth_cumulants) w.value(v);
    w.end_array();
    w.key("delta_c").value(rep.delta_c);
    w.key("psi").value(rep.psi);
    w.key("d2_bound").value(rep.d2);
    w.key("d1_bound").value(rep.d1);
    w.key("delta_le_psi").value(delta_le_psi);
    w.key("pair_estimates_all_hold").value(pair_estimates_all);
    w.end_object();
    write_timings(w, no_timings, timer);
    w.end_object();
    emit(w);
  }
  return ok ? kExitOk : kExitViolation;
}

// ---------------------------------------------------- demo-fourth-moment
SymmetricKernel trace_kernel(int n) {
  SymmetricKernel f(n, 2);
  for (int k = 0; k < n; ++k) f.set({k, k}, 1.0 / std::sqrt(static_cast<double>(n)));
  return f;
}

int cmd_demo(const std::vector<int>& ns, const std::string& format, bool no_timings) {
  Timer timer;
  struct Row {
    int n;
    double variance, chi4, delta, psi, d2;
  };
  std::vector<Row> rows;
  bool exact_ok = true, decreasing = true;
  double prev_chi4 = std::numeric_limits<double>::infinity();
  double prev_delta = std::numeric_limits<double>::infinity();
  for (int n : ns) {
    if (n < 1) throw SpecError("demo sizes must be positive");
    const auto f = trace_kernel(n);
    const auto F = ChaosVector::pure({f});
    Row row;
    row.n = n;
    row.variance = covariance_matrix(F).at(0, 0);
    row.chi4 = fourth_cumulant_closed(f);
    row.delta = delta_c(F);
    row.psi = psi_bound(F);
    row.d2 = 0.5 * row.delta;
    rows.push_back(row);

    if (!detail::close_rel(row.chi4, 48.0 / n, 1e-12)) exact_ok = false;
    if (!detail::close_rel(row.delta, std::sqrt(8.0 / n), 1e-12)) exact_ok = false;
    if (!detail::close_rel(row.variance, 2.0, 1e-12)) exact_ok = false;
    if (!(row.chi4 < prev_chi4) || !(row.delta < prev_delta)) decreasing = false;
    prev_chi4 = row.chi4;
    prev_delta = row.delta;
  }

  if (format == "json") {
    JsonWriter w;
    w.begin_object();
    w.key("command").value("demo-fourth-moment");
    w.key("rows").begin_array();
    for (const auto& r : rows) {
      w.begin_object();
      w.key("n").value(r.n);
      w.key("variance").value(r.variance);
      w.key("chi4").value(r.chi4);
      w.key("delta_c").value(r.delta);
      w.key("psi").value(r.psi);
      w.key("d2_bound").value(r.d2);
      w.end_object();
    }
    w.end_array();
    w.key("closed_forms_exact").value(exact_ok);
    w.key("strictly_decreasing").value(decreasing);
    write_timings(w, no_timings, timer);
    w.end_object();
    emit(w);
  } else {
    std::string out = "n,variance,chi4,delta_c,psi,d2_bound\n";
    for (const auto& r : rows) {
      out += std::to_string(r.n) + "," + format_double(r.variance) + "," +
             format_double(r.chi4) + "," + format_double(r.delta) + "," + format_double(r.psi) +
             "," + format_double(r.d2) + "\n";
    }
    std::cout << out;
    if (!exact_ok || !decreasing)
      std::cerr << "demo-fourth-moment: closed-form verification failed\n";
  }
  return (exact_ok && decreasing) ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------------ verify
int cmd_verify(int instances, std::uint64_t seed, double tol, bool corrupt,
               const std::string& format, bool no_timings) {
  Timer timer;
  VerifyConfig cfg;
  cfg.instances = instances;
  cfg.seed = seed;
  cfg.tol_rel = tol;
  cfg.corrupt_constant = corrupt;
  const VerifyReport rep = run_verify(cfg);

  if (format == "csv") {
    std::string out = "check,instances,failures,max_rel_dev\n";
    for (const auto& c : rep.checks)
      out += c.name + "," + std::to_string(c.instances) + "," + std::to_string(c.failures) + "," +
             format_double(c.max_rel_dev) + "\n";
    std::cout << out;
  } else {
    JsonWriter w;
    w.begin_object();
    w.key("command").value("verify");
    w.key("instances").value(instances);
    w.key("seed").value(static_cast<unsigned long long>(seed));
    w.key("tol").value(tol);
    w.key("corrupt_constant").value(corrupt);
    w.key("checks").begin_array();
    for (const auto& c : rep.checks) {
      w.begin_object();
      w.key("name").value(c.name);
      w.key("instances").value(c.instances);
      w.key("failures").value(c.failures);
      w.key("max_rel_dev").value(c.max_rel_dev);
      w.key("pass").value(c.pass());
      w.end_object();
    }
    w.end_array();
    w.key("all_pass").value(rep.all_pass());
    write_timings(w, no_timings, timer);
    w.end_object();
    emit(w);
  }
  return rep.all_pass() ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- simulate
int cmd_simulate(const std::string& spec_path, const std::string& m_text, int samples,
                 std::uint64_t seed, const std::string& format, bool no_timings) {
  Timer timer;
  const KernelSpecDocument doc = load_spec_file(spec_path);
  const ChaosVector F = to_chaos_vector(doc);
  const std::vector<int> m = parse_multi_index(m_text, F.size());

  const double oracle = cumulants_from_moments(F, m);
  const auto batch = sample(F, samples, seed);
  const auto [estimate, stderr_est] = empirical_cumulant(batch, m);
  const double sigmas = stderr_est > 0.0 ? std::abs(estimate - oracle) / stderr_est
                                         : (estimate == oracle ? 0.0
                                                               : std::numeric_limits<double>::infinity());
  const bool within = sigmas <= 4.0;

  if (format == "csv") {
    std::string out = "quantity,value\n";
    out += "oracle," + format_double(oracle) + "\n";
    out += "estimate," + format_double(estimate) + "\n";
    out += "stderr," + format_double(stderr_est) + "\n";
    out += "deviation_sigmas," + format_double(sigmas) + "\n";
    std::cout << out;
  } else {
    JsonWriter w;
    w.begin_object();
    w.key("command").value("simulate");
    write_spec_echo(w, doc);
    w.key("m").begin_array();
    for (int v : m) w.value(v);
    w.end_array();
    w.key("samples").value(samples);
    w.key("seed").value(static_cast<unsigned long long>(seed));
    w.key("results").begin_object();
    w.key("oracle").value(oracle);
    w.key("estimate").value(estimate);
    w.key("stderr").value(stderr_est);
    w.key("deviation_sigmas").value(sigmas);
    w.key("within_4_sigma").value(within);
    w.end_object();
    write_timings(w, no_timings, timer);
    w.end_object();
    emit(w);
  }
  if (!within) std::cerr << "simulate: estimate deviates by more than 4 standard errors\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact chaos-expansion cumulants, Gaussian-approximation bounds and checks"};
  app.require_subcommand(1);

  std::string spec_path, m_text;
  std::string format_cumulant = "json", format_bounds = "json", format_demo = "csv";
  std::string format_verify = "json", format_simulate = "json";
  double tol = 1e-9;
  int samples = 1000000;
  std::uint64_t seed = 42;
  int instances = 200;
  bool no_timings = false;
  bool corrupt = false;
  std::string n_list = "1,2,4,8,16,32,64";

  const auto format_check = CLI::IsMember({"json", "csv"});

  auto* cumulant = app.add_subcommand("cumulant", "joint cumulant, three routes");
  cumulant->add_option("--spec", spec_path, "kernel spec file")->required();
  cumulant->add_option("--m", m_text, "multi-index, comma separated")->required();
  cumulant->add_option("--tol", tol, "relative agreement tolerance");
  cumulant->add_option("--format", format_cumulant, "json|csv")->check(format_check);
  cumulant->add_flag("--no-timings", no_timings, "suppress the timings block");

  auto* bounds = app.add_subcommand("bounds", "Delta_C, psi, d1/d2 bounds");
  bounds->add_option("--spec", spec_path, "kernel spec file")->required();
  bounds->add_option("--format", format_bounds, "json|csv")->check(format_check);
  bounds->add_flag("--no-timings", no_timings, "suppress the timings block");

  auto* demo = app.add_subcommand("demo-fourth-moment", "1/n convergence family");
  demo->add_option("--n", n_list, "comma-separated family sizes");
  demo->add_option("--format", format_demo, "csv|json")->check(format_check);
  demo->add_flag("--no-timings", no_timings, "suppress the timings block");

  auto* verify = app.add_subcommand("verify", "random property battery");
  verify->add_option("--instances", instances, "instances per check");
  verify->add_option("--seed", seed, "battery seed");
  verify->add_option("--tol", tol, "relative agreement tolerance");
  verify->add_option("--format", format_verify, "json|csv")->check(format_check);
  verify->add_flag("--no-timings", no_timings, "suppress the timings block");
  verify->add_flag("--corrupt-constant", corrupt,
                   "negative control: perturb a cumulant constant (must fail)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo vs exact oracle");
  simulate->add_option("--spec", spec_path, "kernel spec file")->required();
  simulate->add_option("--m", m_text, "multi-index, comma separated")->required();
  simulate->add_option("--samples", samples, "sample count");
  simulate->add_option("--seed", seed, "sampling seed");
  simulate->add_option("--format", format_simulate, "json|csv")->check(format_check);
  simulate->add_flag("--no-timings", no_timings, "suppress the timings block");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(cumulant))
      return cmd_cumulant(spec_path, m_text, tol, format_cumulant, no_timings);
    if (app.got_subcommand(bounds)) return cmd_bounds(spec_path, format_bounds, no_timings);
    if (app.got_subcommand(demo)) {
      const std::vector<int> ns = parse_int_list(n_list, "size list");
      if (ns.empty()) throw SpecError("size list is empty");
      return cmd_demo(ns, format_demo, no_timings);
    }
    if (app.got_subcommand(verify))
      return cmd_verify(instances, seed, tol, corrupt, format_verify, no_timings);
    if (app.got_subcommand(simulate))
      return cmd_simulate(spec_path, m_text, samples, seed, format_simulate, no_timings);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OrderCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
