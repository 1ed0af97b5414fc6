#include "icr/icr.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>

#include <json.hpp>

#include "icr/report.hpp"
#include "icr/service.hpp"

struct icr_matrix {
  icr::IncompleteMatrix value;
};

struct icr_report {
  icr::Report value;
};

namespace {

thread_local std::string g_error;
thread_local int g_line = 0;
thread_local int g_column = 0;

icr_status status_of(icr::ErrorCode code) {
  using icr::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return ICR_E_INVALID_ARGUMENT;
    case ErrorCode::NonSquare: return ICR_E_NON_SQUARE;
    case ErrorCode::BadSize: return ICR_E_BAD_SIZE;
    case ErrorCode::NonPositiveEntry: return ICR_E_NON_POSITIVE_ENTRY;
    case ErrorCode::ReciprocityViolation: return ICR_E_RECIPROCITY;
    case ErrorCode::BadDiagonal: return ICR_E_BAD_DIAGONAL;
    case ErrorCode::MissingDiagonal: return ICR_E_MISSING_DIAGONAL;
    case ErrorCode::AsymmetricMissing: return ICR_E_ASYMMETRIC_MISSING;
    case ErrorCode::NoConvergence: return ICR_E_NO_CONVERGENCE;
    case ErrorCode::DisconnectedGraph: return ICR_E_DISCONNECTED;
    case ErrorCode::NotSpanningTree: return ICR_E_NOT_SPANNING_TREE;
    case ErrorCode::EntryMismatch: return ICR_E_ENTRY_MISMATCH;
    case ErrorCode::InfeasibleMissing: return ICR_E_INFEASIBLE_MISSING;
    case ErrorCode::OutOfRange: return ICR_E_OUT_OF_RANGE;
    case ErrorCode::InsufficientSamples: return ICR_E_INSUFFICIENT_SAMPLES;
    case ErrorCode::MethodMismatch: return ICR_E_METHOD_MISMATCH;
    case ErrorCode::ParseError: return ICR_E_PARSE;
    case ErrorCode::Io: return ICR_E_IO;
  }
  return ICR_E_INTERNAL;
}

icr_status fail(icr_status s, const std::string& message) {
  g_error = message;
  g_line = g_column = 0;
  return s;
}

// Runs f, turning exceptions into status codes.
template <class F>
icr_status guard(F&& f) noexcept {
  try {
    f();
    return ICR_OK;
  } catch (const icr::Error& e) {
    const auto s = fail(status_of(e.code()), e.what());
    if (e.location()) {
      g_line = e.location()->line;
      g_column = e.location()->column;
    }
    return s;
  } catch (const icr::ServiceError& e) {
    return fail(ICR_E_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ICR_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ICR_E_INTERNAL, e.what());
  } catch (...) {
    return fail(ICR_E_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

icr::FillMethod to_method(icr_method m) {
  switch (m) {
    case ICR_UNBOUNDED: return icr::FillMethod::Unbounded;
    case ICR_BOUNDED: return icr::FillMethod::Bounded;
    case ICR_DISCRETE: return icr::FillMethod::Discrete;
  }
  throw icr::Error(icr::ErrorCode::InvalidArgument, "unknown fill method");
}

icr::RandomIndexTable load_table(const char* path) {
  if (!path) return icr::RandomIndexTable::published();
  return icr::merge_simulated(icr::RandomIndexTable::published(),
                              icr::parse_simulation_table(icr::read_file(path)));
}

void require(const void* p, const char* what) {
  if (!p) throw icr::Error(icr::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

}  // namespace

extern "C" {

const char* icr_version(void) { return "1.0.0"; }
const char* icr_last_error(void) { return g_error.c_str(); }

void icr_last_error_location(int* line, int* column) {
  if (line) *line = g_line;
  if (column) *column = g_column;
}

const char* icr_status_name(icr_status status) {
  switch (status) {
    case ICR_OK: return "ok";
    case ICR_E_INTERNAL: return "internal error";
    default: break;
  }
  for (int c = 0; c <= static_cast<int>(icr::ErrorCode::Io); ++c) {
    if (status_of(static_cast<icr::ErrorCode>(c)) == status) return icr::to_string(static_cast<icr::ErrorCode>(c));
  }
  return "unknown status";
}

void icr_string_free(char* s) { std::free(s); }

icr_status icr_matrix_parse(const char* text, icr_matrix** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    *out = new icr_matrix{icr::parse_matrix(text)};
  });
}

icr_status icr_matrix_load(const char* path, icr_matrix** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new icr_matrix{icr::load_matrix(path)};
  });
}

void icr_matrix_free(icr_matrix* m) { delete m; }
int icr_matrix_size(const icr_matrix* m) { return m ? m->value.size() : 0; }
int icr_matrix_missing(const icr_matrix* m) { return m ? m->value.missing_count() : 0; }

icr_status icr_matrix_get(const icr_matrix* m, int i, int j, double* value) {
  return guard([&] {
    require(m, "matrix");
    require(value, "value");
    const int n = m->value.size();
    if (i < 0 || j < 0 || i >= n || j >= n) throw icr::Error(icr::ErrorCode::InvalidArgument, "index out of range");
    *value = m->value.value(i, j);
  });
}

icr_status icr_matrix_render(const icr_matrix* m, char** out) {
  return guard([&] {
    require(m, "matrix");
    require(out, "out");
    *out = dup(icr::render_matrix(m->value));
  });
}

void icr_analyze_options_init(icr_analyze_options* options) {
  if (!options) return;
  options->method = ICR_BOUNDED;
  options->threshold = icr::kDefaultThreshold;
  options->allow_method_mismatch = 0;
  options->has_ri_override = 0;
  options->ri_override = 0.0;
  options->ri_table_path = nullptr;
}

icr_status icr_report_create(const icr_matrix* m, const icr_analyze_options* options, icr_report** out) {
  return guard([&] {
    require(m, "matrix");
    require(out, "out");
    icr_analyze_options defaults;
    icr_analyze_options_init(&defaults);
    const auto& o = options ? *options : defaults;
    icr::AnalyzeOptions opts;
    opts.method = to_method(o.method);
    opts.threshold = o.threshold;
    opts.allow_method_mismatch = o.allow_method_mismatch != 0;
    if (o.has_ri_override) opts.ri_override = o.ri_override;
    *out = new icr_report{icr::make_report(m->value, load_table(o.ri_table_path), opts)};
  });
}

void icr_report_free(icr_report* r) { delete r; }
int icr_report_has_verdict(const icr_report* r) { return r && r->value.outcome ? 1 : 0; }
int icr_report_accepted(const icr_report* r) { return r && r->value.outcome && r->value.outcome->accepted ? 1 : 0; }
double icr_report_cr(const icr_report* r) { return r && r->value.outcome ? r->value.outcome->cr : NAN; }
double icr_report_ci(const icr_report* r) { return r && r->value.outcome ? r->value.outcome->ci : NAN; }
double icr_report_lambda_max(const icr_report* r) {
  return r && r->value.outcome ? r->value.outcome->lambda_max : NAN;
}

icr_status icr_report_render(const icr_report* r, icr_format format, char** out) {
  return guard([&] {
    require(r, "report");
    require(out, "out");
    switch (format) {
      case ICR_FORMAT_TEXT: *out = dup(icr::render_report_text(r->value)); return;
      case ICR_FORMAT_KV: *out = dup(icr::render_report_kv(r->value)); return;
      case ICR_FORMAT_JSON: *out = dup(icr::report_to_json(r->value) + "\n"); return;
    }
    throw icr::Error(icr::ErrorCode::InvalidArgument, "unknown format");
  });
}

icr_status icr_complete(const icr_matrix* m, icr_method method, char** filled, double* lambda_max, double* ci) {
  return guard([&] {
    require(m, "matrix");
    const auto res = icr::complete(m->value, to_method(method));
    if (filled) *filled = dup(icr::render_matrix(res.filled));
    if (lambda_max) *lambda_max = res.lambda_max;
    if (ci) *ci = res.ci;
  });
}

icr_status icr_ri_lookup(int n, int m, const char* ri_table_path, double* ri, const char** source) {
  return guard([&] {
    require(ri, "ri");
    const auto hit = icr::lookup_ri(n, m, load_table(ri_table_path));
    *ri = hit.ri;
    if (source) *source = icr::to_string(hit.source);
  });
}

icr_status icr_ri_approximate(int n, int m, double* ri) {
  return guard([&] {
    require(ri, "ri");
    const auto complete = icr::RandomIndexTable::published().find(n, 0);
    if (n >= 4 && n <= icr::kDefaultMaxSize && !complete) {
      throw icr::Error(icr::ErrorCode::OutOfRange, "no published random index for complete matrices of size " +
                                                       std::to_string(n));
    }
    *ri = icr::approximate_ri(n, m, complete ? complete->ri : 0.0);
  });
}

unsigned long long icr_default_seed(void) { return icr::kDefaultSeed; }

icr_status icr_simulate(const icr_simulation_options* options, icr_simulation_result* result) {
  return guard([&] {
    require(options, "options");
    require(result, "result");
    icr::SimulationSpec spec;
    spec.n = options->n;
    spec.m = options->m;
    spec.target_samples = options->samples;
    spec.seed = options->seed;
    spec.jobs = options->jobs;
    if (options->progress) {
      spec.progress = [fn = options->progress, user = options->progress_user](std::int64_t kept, std::int64_t target) {
        fn(kept, target, user);
      };
    }
    const auto r = icr::estimate_ri(spec);
    *result = {r.n, r.m, r.seed, r.ri, r.std_error, r.samples_kept, r.samples_rejected, r.samples_unconverged};
  });
}

icr_status icr_simulation_table(const icr_simulation_result* rows, size_t count, char** out) {
  return guard([&] {
    require(out, "out");
    if (count) require(rows, "rows");
    std::vector<icr::SimulationResult> v;
    for (size_t k = 0; k < count; ++k) {
      icr::SimulationResult r;
      r.n = rows[k].n;
      r.m = rows[k].m;
      r.seed = rows[k].seed;
      r.ri = rows[k].ri;
      r.std_error = rows[k].std_error;
      r.samples_kept = rows[k].samples_kept;
      r.samples_rejected = rows[k].samples_rejected;
      r.samples_unconverged = rows[k].samples_unconverged;
      v.push_back(r);
    }
    *out = dup(icr::render_simulation_table(v));
  });
}

icr_status icr_table4(icr_format format, char** out) {
  return guard([&] {
    require(out, "out");
    const auto alphas = icr::parametric_alphas();
    const auto betas = icr::parametric_betas();
    const auto cells = icr::parametric_table(alphas, betas);
    std::string text;
    if (format == ICR_FORMAT_TEXT) {
      text = "# CI of the completed A(alpha, beta). '*': CI/RI(4,2) <= 0.1. '~': only CI/RI(4) <= 0.1.\n";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%-6s", "b\\a");
      text += buf;
      for (double a : alphas) {
        std::snprintf(buf, sizeof buf, " %8s", icr::format_ratio(a).c_str());
        text += buf;
      }
      text += '\n';
      for (std::size_t b = 0; b < betas.size(); ++b) {
        std::snprintf(buf, sizeof buf, "%-6s", icr::format_ratio(betas[b]).c_str());
        text += buf;
        for (std::size_t a = 0; a < alphas.size(); ++a) {
          const auto& c = cells[b * alphas.size() + a];
          const char mark = c.marking == icr::Marking::Accepted ? '*'
                            : c.marking == icr::Marking::AcceptedAsComplete ? '~'
                                                                            : ' ';
          std::snprintf(buf, sizeof buf, " %7.4f%c", c.ci, mark);
          text += buf;
        }
        text += '\n';
      }
    } else if (format == ICR_FORMAT_KV) {
      icr::KeyValues kv;
      for (const auto& c : cells) {
        const std::string key = icr::format_ratio(c.alpha) + "," + icr::format_ratio(c.beta);
        kv.emplace_back("ci." + key, icr::format_number(c.ci));
        kv.emplace_back("marking." + key, icr::to_string(c.marking));
      }
      text = icr::render_key_values(kv);
    } else if (format == ICR_FORMAT_JSON) {
      auto arr = nlohmann::json::array();
      for (const auto& c : cells) {
        arr.push_back({{"alpha", c.alpha}, {"beta", c.beta}, {"ci", c.ci}, {"marking", icr::to_string(c.marking)}});
      }
      text = arr.dump() + "\n";
    } else {
      throw icr::Error(icr::ErrorCode::InvalidArgument, "unknown format");
    }
    *out = dup(text);
  });
}

icr_status icr_serve(const char* host, int port, const char* state_dir) {
  return guard([&] {
    icr::ServiceOptions options;
    if (state_dir) options.state_dir = state_dir;
    icr::SessionStore store(std::move(options));
    icr::HttpServer server(store);
    const std::string h = host ? host : "127.0.0.1";
    const int bound = server.bind(h, port);
    if (bound < 0) throw icr::Error(icr::ErrorCode::Io, "cannot bind " + h + ":" + std::to_string(port));
    std::fprintf(stderr, "listening on http://%s:%d\n", h.c_str(), bound);
    server.listen_after_bind();
  });
}

}  // extern "C"
