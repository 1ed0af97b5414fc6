// Command-line front end. Talks to the library only through icr.h.
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "icr/icr.h"

namespace {

constexpr int kExitAccepted = 0;
constexpr int kExitError = 1;
constexpr int kExitRejected = 2;
constexpr int kExitUsage = 64;

int report_error(icr_status s) {
  std::fprintf(stderr, "error: %s\n", icr_last_error());
  (void)s;
  return kExitError;
}

// Owns a string returned by the library.
struct Text {
  char* p = nullptr;
  ~Text() { icr_string_free(p); }
};

icr_method method_of(const std::string& s) {
  if (s == "unbounded") return ICR_UNBOUNDED;
  if (s == "discrete") return ICR_DISCRETE;
  return ICR_BOUNDED;
}

icr_format format_of(const std::string& s) {
  if (s == "kv") return ICR_FORMAT_KV;
  if (s == "json") return ICR_FORMAT_JSON;
  return ICR_FORMAT_TEXT;
}

// "0,2,5-7" -> {0, 2, 5, 6, 7}
bool parse_list(const std::string& s, std::vector<int>& out) {
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = std::min(s.find(',', pos), s.size());
    const std::string part = s.substr(pos, comma - pos);
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoi(part));
      } else {
        const int a = std::stoi(part.substr(0, dash)), b = std::stoi(part.substr(dash + 1));
        if (b < a) return false;
        for (int k = a; k <= b; ++k) out.push_back(k);
      }
    } catch (const std::exception&) {
      return false;
    }
    pos = comma + 1;
  }
  return !out.empty();
}

void progress(long long kept, long long target, void*) {
  std::fprintf(stderr, "\r  %lld / %lld", kept, target);
  if (kept >= target) std::fputc('\n', stderr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consistency of incomplete pairwise comparison matrices", "icr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(icr_version()));

  const std::vector<std::string> methods{"bounded", "unbounded", "discrete"};

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Complete a matrix and judge its consistency ratio");
  std::string a_file, a_method = "bounded", a_format = "text", a_table;
  double a_threshold = 0.1;
  std::optional<double> a_override;
  bool a_mismatch = false;
  analyze->add_option("FILE", a_file, "Matrix file")->required();
  analyze->add_option("--method", a_method, "Fill method")->check(CLI::IsMember(methods));
  analyze->add_option("--threshold", a_threshold, "Acceptance threshold for CR")->check(CLI::Range(1e-12, 1.0));
  analyze->add_option("--ri-override", a_override, "Use this random index instead of the table")
      ->check(CLI::PositiveNumber);
  analyze->add_flag("--allow-method-mismatch", a_mismatch, "Permit non-bounded fills against the bounded thresholds");
  analyze->add_option("--format", a_format, "Output format")->check(CLI::IsMember({"text", "kv", "json"}));
  analyze->add_option("--ri-table", a_table, "Simulation results that fill gaps in the published table")
      ->check(CLI::ExistingFile);

  // complete
  auto* complete = app.add_subcommand("complete", "Print the optimally filled matrix");
  std::string c_file, c_method = "bounded";
  complete->add_option("FILE", c_file, "Matrix file")->required();
  complete->add_option("--method", c_method, "Fill method")->check(CLI::IsMember(methods));

  // ri
  auto* ri = app.add_subcommand("ri", "Random index for n alternatives and m missing pairs");
  int r_n = 0, r_m = 0, r_jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  long long r_samples = 100000;
  unsigned long long r_seed = icr_default_seed();
  bool r_simulate = false;
  std::string r_table;
  ri->add_option("--n", r_n, "Matrix size")->required();
  ri->add_option("--m", r_m, "Missing pairs")->required();
  ri->add_flag("--simulate", r_simulate, "Estimate by simulation instead of looking up");
  ri->add_option("--samples", r_samples, "Samples for --simulate")->check(CLI::PositiveNumber);
  auto* r_seed_opt = ri->add_option("--seed", r_seed, "Seed for --simulate (default: $ICR_SEED or built-in)");
  ri->add_option("--jobs", r_jobs, "Worker threads for --simulate")->check(CLI::PositiveNumber);
  ri->add_option("--ri-table", r_table, "Simulation results that fill gaps in the published table")
      ->check(CLI::ExistingFile);

  // ri-approx
  auto* approx = app.add_subcommand("ri-approx", "Linear approximation of the random index from the complete case");
  int x_n = 0, x_m = 0;
  approx->add_option("--n", x_n, "Matrix size")->required();
  approx->add_option("--m", x_m, "Missing pairs")->required();

  // table4
  auto* table4 = app.add_subcommand("table4", "CI grid of the parametric 4x4 example");
  std::string t_format = "text";
  table4->add_option("--format", t_format, "Output format")->check(CLI::IsMember({"text", "kv", "json"}));

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Estimate random indices and write a results table");
  int s_n = 0, s_jobs = r_jobs;
  std::string s_m = "0", s_out;
  long long s_samples = 100000;
  unsigned long long s_seed = icr_default_seed();
  bool s_quiet = false;
  simulate->add_option("--n", s_n, "Matrix size")->required();
  simulate->add_option("--m", s_m, "Missing pairs: list and ranges, e.g. 0,2-4");
  simulate->add_option("--samples", s_samples, "Kept samples per cell")->check(CLI::PositiveNumber);
  auto* s_seed_opt = simulate->add_option("--seed", s_seed, "Seed (default: $ICR_SEED or built-in)");
  simulate->add_option("--jobs", s_jobs, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  simulate->add_option("--output", s_out, "Write the table here instead of stdout");
  simulate->add_flag("--quiet", s_quiet, "No progress on stderr");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  int v_port = 8765;
  std::string v_host = "127.0.0.1", v_state;
  serve->add_option("--port", v_port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", v_host, "Listen address");
  serve->add_option("--state-dir", v_state, "Keep append-only session logs here and replay them on start");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::fputs(app.help().c_str(), stderr);
    return kExitUsage;
  }

  const char* env_seed = std::getenv("ICR_SEED");
  auto seed_from_env = [&](unsigned long long& seed, CLI::Option* opt) {
    if (opt->count() || !env_seed) return true;
    try {
      seed = std::stoull(env_seed);
      return true;
    } catch (const std::exception&) {
      std::fprintf(stderr, "error: ICR_SEED is not an unsigned integer\n");
      return false;
    }
  };

  if (*analyze) {
    icr_matrix* m = nullptr;
    if (auto s = icr_matrix_load(a_file.c_str(), &m)) return report_error(s);
    icr_analyze_options o;
    icr_analyze_options_init(&o);
    o.method = method_of(a_method);
    o.threshold = a_threshold;
    o.allow_method_mismatch = a_mismatch;
    if (a_override) {
      o.has_ri_override = 1;
      o.ri_override = *a_override;
    }
    if (!a_table.empty()) o.ri_table_path = a_table.c_str();
    icr_report* r = nullptr;
    const auto s = icr_report_create(m, &o, &r);
    icr_matrix_free(m);
    if (s) return report_error(s);
    Text out;
    if (auto st = icr_report_render(r, format_of(a_format), &out.p)) {
      icr_report_free(r);
      return report_error(st);
    }
    std::fputs(out.p, stdout);
    const int has = icr_report_has_verdict(r), ok = icr_report_accepted(r);
    icr_report_free(r);
    if (!has) {
      std::fprintf(stderr, "error: the comparison graph is not connected\n");
      return kExitError;
    }
    return ok ? kExitAccepted : kExitRejected;
  }

  if (*complete) {
    icr_matrix* m = nullptr;
    if (auto s = icr_matrix_load(c_file.c_str(), &m)) return report_error(s);
    Text out;
    double lambda = 0.0, ci = 0.0;
    const auto s = icr_complete(m, method_of(c_method), &out.p, &lambda, &ci);
    icr_matrix_free(m);
    if (s) return report_error(s);
    std::fputs(out.p, stdout);
    std::printf("# lambda_max = %.10f\n# CI = %.10f\n", lambda, ci);
    return 0;
  }

  if (*ri) {
    if (r_simulate) {
      if (!seed_from_env(r_seed, r_seed_opt)) return kExitUsage;
      icr_simulation_options o{r_n, r_m, r_samples, r_seed, r_jobs, nullptr, nullptr};
      icr_simulation_result res{};
      if (auto s = icr_simulate(&o, &res)) return report_error(s);
      std::printf("%.4f +/- %.4f (simulated, %lld samples, seed %llu)\n", res.ri, res.std_error, res.samples_kept,
                  res.seed);
      return 0;
    }
    double value = 0.0;
    const char* source = nullptr;
    if (auto s = icr_ri_lookup(r_n, r_m, r_table.empty() ? nullptr : r_table.c_str(), &value, &source)) {
      return report_error(s);
    }
    std::printf("%.3f (%s)\n", value, source);
    return 0;
  }

  if (*approx) {
    double value = 0.0;
    if (auto s = icr_ri_approximate(x_n, x_m, &value)) return report_error(s);
    std::printf("%.3f\n", value);
    return 0;
  }

  if (*table4) {
    Text out;
    if (auto s = icr_table4(format_of(t_format), &out.p)) return report_error(s);
    std::fputs(out.p, stdout);
    return 0;
  }

  if (*simulate) {
    std::vector<int> ms;
    if (!parse_list(s_m, ms)) {
      std::fprintf(stderr, "error: cannot read --m %s\n", s_m.c_str());
      return kExitUsage;
    }
    if (!seed_from_env(s_seed, s_seed_opt)) return kExitUsage;
    std::vector<icr_simulation_result> rows;
    for (int m : ms) {
      if (!s_quiet) std::fprintf(stderr, "n = %d, m = %d\n", s_n, m);
      icr_simulation_options o{s_n, m, s_samples, s_seed, s_jobs, s_quiet ? nullptr : progress, nullptr};
      icr_simulation_result res{};
      if (auto s = icr_simulate(&o, &res)) return report_error(s);
      rows.push_back(res);
    }
    Text out;
    if (auto s = icr_simulation_table(rows.data(), rows.size(), &out.p)) return report_error(s);
    if (s_out.empty()) {
      std::fputs(out.p, stdout);
    } else {
      std::FILE* f = std::fopen(s_out.c_str(), "w");
      if (!f || std::fputs(out.p, f) < 0 || std::fclose(f) != 0) {
        std::fprintf(stderr, "error: cannot write %s\n", s_out.c_str());
        return kExitError;
      }
    }
    return 0;
  }

  if (*serve) {
    if (auto s = icr_serve(v_host.c_str(), v_port, v_state.empty() ? nullptr : v_state.c_str())) {
      return report_error(s);
    }
    return 0;
  }
  return kExitUsage;
}
