#include "hypjac/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "hypjac/cfrac.hpp"
#include "hypjac/checks.hpp"
#include "hypjac/error.hpp"
#include "hypjac/hyp_core.hpp"
#include "hypjac/jacobi_spectral.hpp"
#include "hypjac/real_classify.hpp"

namespace hypjac::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double agreement_threshold = 1e-9;

struct RunConfig {
  std::string subcommand;
  std::string a = "", b = "", c = "";
  std::string z;
  double tol = 1e-10;
  std::size_t n = 256;
  std::uint64_t seed = 42;
  std::string format = "json";
  std::string out_path;
  std::size_t trials = 200;
  std::size_t samples = 6;
  std::string manifest;
};

complex parse_complex(const std::string& text, const std::string& what) {
  auto parse_part = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
      throw Error(ErrorKind::invalid_argument, what + ": cannot parse '" + text + "'");
    return v;
  };
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_part(text), 0.0};
  return {parse_part(text.substr(0, comma)), parse_part(text.substr(comma + 1))};
}

json cjson(complex v) {
  json o;
  o["re"] = v.real();
  o["im"] = v.imag();
  return o;
}

json params_json(const HypParams& p) {
  json o;
  o["a"] = cjson(p.a);
  o["b"] = cjson(p.b);
  o["c"] = cjson(p.c);
  return o;
}

json header(const HypParams& p) {
  json doc;
  doc["schema_version"] = schema_version;
  doc["params"] = params_json(p);
  return doc;
}

std::string csv_line(std::initializer_list<std::string> fields) {
  std::string line;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) line += ',';
    first = false;
    line += f;
  }
  return line + "\n";
}

std::string num(double v) { return format_number(v); }

HypParams params_from(const RunConfig& cfg) {
  if (cfg.a.empty() || cfg.b.empty() || cfg.c.empty())
    throw Error(ErrorKind::invalid_argument, "parameters -a, -b and -c are required");
  return validate_params(parse_complex(cfg.a, "-a"), parse_complex(cfg.b, "-b"), parse_complex(cfg.c, "-c"));
}

struct Emitted {
  json doc;
  std::string csv;
  int code = exit_ok;
};

Emitted cmd_eval(const RunConfig& cfg) {
  const HypParams p = params_from(cfg);
  if (cfg.z.empty()) throw Error(ErrorKind::invalid_argument, "eval needs --z");
  const complex z = parse_complex(cfg.z, "--z");
  const complex cf = b_function(p, z, BMethod::cf, cfg.tol);
  const complex rs = b_function(p, z, BMethod::resolvent, cfg.tol);
  const double diff = std::abs(cf - rs);
  const bool agree = diff <= agreement_threshold * std::max(1.0, std::abs(cf));

  Emitted e;
  e.doc = header(p);
  e.doc["z"] = cjson(z);
  e.doc["value"] = cjson(cf);
  e.doc["value_cf"] = cjson(cf);
  e.doc["value_resolvent"] = cjson(rs);
  e.doc["difference"] = diff;
  e.doc["methods_agree"] = agree;
  e.csv = csv_line({"z_re", "z_im", "cf_re", "cf_im", "resolvent_re", "resolvent_im", "difference", "agree"});
  e.csv += csv_line({num(z.real()), num(z.imag()), num(cf.real()), num(cf.imag()), num(rs.real()), num(rs.imag()),
                     num(diff), agree ? "true" : "false"});
  return e;
}

Emitted cmd_coeffs(const RunConfig& cfg) {
  const HypParams p = params_from(cfg);
  const JacobiCoeffs jc = offdiag_roots(jacobi_coeffs(p, cfg.n));

  Emitted e;
  e.doc = header(p);
  json c = json::array(), d = json::array(), a = json::array(), bsq = json::array(), b = json::array();
  e.csv = csv_line({"n", "a_re", "a_im", "bsq_re", "bsq_im", "b_re", "b_im", "j", "c_re", "c_im", "d_re", "d_im"});
  for (std::size_t n = 0; n < cfg.n; ++n) {
    const complex cj = c_coeff(p, n + 1);
    c.push_back(cjson(cj));
    d.push_back(cjson(-cj));
    std::string row = std::to_string(n) + ",";
    if (n < jc.length) {
      a.push_back(cjson(jc.diag[n]));
      bsq.push_back(cjson(jc.offdiag_sq[n]));
      b.push_back(cjson(jc.offdiag[n]));
      row += csv_line({num(jc.diag[n].real()), num(jc.diag[n].imag()), num(jc.offdiag_sq[n].real()),
                       num(jc.offdiag_sq[n].imag()), num(jc.offdiag[n].real()), num(jc.offdiag[n].imag())});
      row.pop_back();
    } else {
      row += ",,,,,";
    }
    row += "," + csv_line({std::to_string(n + 1), num(cj.real()), num(cj.imag()), num(-cj.real()), num(-cj.imag())});
    e.csv += row;
  }
  e.doc["c"] = std::move(c);
  e.doc["d"] = std::move(d);
  e.doc["a"] = std::move(a);
  e.doc["b_sq"] = std::move(bsq);
  e.doc["b"] = std::move(b);
  e.doc["terminated_at"] = jc.terminated_at ? json(*jc.terminated_at) : json(nullptr);
  e.doc["stabilization_index"] = stabilization_index(jc);
  return e;
}

Emitted cmd_spectrum(const RunConfig& cfg) {
  const HypParams p = params_from(cfg);
  const SpectralResult res = discrete_spectrum(p, cfg.n, cfg.tol);
  const bool holds = res.distance_sum <= res.trace_bound + 1e-9;

  Emitted e;
  e.doc = header(p);
  json eig = json::array(), discarded = json::array();
  e.csv = csv_line({"kind", "re", "im", "distance"});
  for (const auto& v : res.eigenvalues) {
    eig.push_back(cjson(v));
    e.csv += csv_line({"eigenvalue", num(v.real()), num(v.imag()), num(distance_to_band(v))});
  }
  for (const auto& v : res.discarded) {
    discarded.push_back(cjson(v));
    e.csv += csv_line({"discarded", num(v.real()), num(v.imag()), num(distance_to_band(v))});
  }
  e.doc["eigenvalues"] = std::move(eig);
  e.doc["distance_sum"] = res.distance_sum;
  e.doc["trace_bound"] = res.trace_bound;
  e.doc["holds"] = holds;
  e.doc["n_used"] = res.n_used;
  e.doc["n_check"] = res.n_check;
  e.doc["discarded"] = std::move(discarded);
  e.doc["merged_clusters"] = res.merged_clusters;
  e.doc["max_residual"] = res.max_residual;
  e.doc["terminated"] = res.terminated;
  return e;
}

Emitted cmd_zeros(const RunConfig& cfg) {
  const HypParams p = params_from(cfg);
  const auto shifted = hyp_zeros(p, cfg.n, ZeroTarget::shifted, cfg.tol);
  std::optional<std::vector<complex>> plain;
  std::string note;
  try {
    plain = hyp_zeros(p, cfg.n, ZeroTarget::function, cfg.tol);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::shift_invalid) throw;
    note = err.what();
  }

  Emitted e;
  e.doc = header(p);
  e.csv = csv_line({"target", "re", "im"});
  json zs = json::array();
  for (const auto& w : shifted) {
    zs.push_back(cjson(w));
    e.csv += csv_line({"shifted", num(w.real()), num(w.imag())});
  }
  e.doc["zeros_shifted"] = std::move(zs);
  if (plain) {
    json zf = json::array();
    for (const auto& w : *plain) {
      zf.push_back(cjson(w));
      e.csv += csv_line({"function", num(w.real()), num(w.imag())});
    }
    e.doc["zeros_function"] = std::move(zf);
  } else {
    e.doc["zeros_function"] = nullptr;
    e.doc["note"] = note;
  }
  return e;
}

Emitted cmd_classify(const RunConfig& cfg) {
  const HypParams p = params_from(cfg);
  const SignSignature sig = sign_signature(p);
  const KappaCertificate cert = kappa_certificate(p, cfg.trials, cfg.samples, cfg.seed);

  Emitted e;
  e.doc = header(p);
  e.doc["N"] = sig.n;
  e.doc["kappa"] = sig.kappa;
  const std::size_t shown = sig.n + 3;
  json eps = json::array(), bt = json::array(), bsq = json::array();
  e.csv = csv_line({"j", "epsilon", "b_sq", "btilde"});
  for (std::size_t j = 0; j < shown; ++j) {
    eps.push_back(sig.epsilon(j));
    const double b2 = j < sig.b_sq.size() ? sig.b_sq[j] : std::nan("");
    const double bt_j = j < sig.btilde.size() ? sig.btilde[j] : std::nan("");
    bsq.push_back(b2);
    bt.push_back(bt_j);
    e.csv += csv_line({std::to_string(j), std::to_string(sig.epsilon(j)), num(b2), num(bt_j)});
  }
  e.doc["epsilons"] = std::move(eps);
  e.doc["b_sq"] = std::move(bsq);
  e.doc["btilde"] = std::move(bt);
  e.doc["terminated"] = sig.terminated;
  if (sig.terminated) e.doc["block_size"] = sig.block_size;
  e.doc["stieltjes"] = stieltjes_check(p);
  json c;
  c["seed"] = cfg.seed;
  c["trials"] = cert.trials;
  c["sample_size"] = cert.sample_size;
  c["epsilon0"] = cert.epsilon0;
  c["max_negatives_seen"] = cert.max_negatives_seen;
  c["kappa_bound_ok"] = cert.kappa_bound_ok;
  e.doc["certificate"] = std::move(c);
  return e;
}

Emitted cmd_measure(const RunConfig& cfg) {
  const HypParams p = params_from(cfg);
  const Quadrature q = quadrature(p, cfg.n);

  Emitted e;
  e.doc = header(p);
  e.doc["order"] = q.order;
  json nodes = json::array(), weights = json::array();
  e.csv = csv_line({"node", "weight"});
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    nodes.push_back(q.nodes[i]);
    weights.push_back(q.weights[i]);
    e.csv += csv_line({num(q.nodes[i]), num(q.weights[i])});
  }
  e.doc["nodes"] = std::move(nodes);
  e.doc["weights"] = std::move(weights);
  return e;
}

Emitted cmd_check(const RunConfig& cfg) {
  const HypParams p = params_from(cfg);
  const auto results = run_all_checks(p, cfg.n, cfg.tol, cfg.seed);

  Emitted e;
  e.doc = header(p);
  json arr = json::array();
  bool all = true;
  e.csv = csv_line({"name", "status", "metric", "threshold", "note"});
  for (const auto& r : results) {
    json o;
    o["name"] = r.name;
    o["status"] = r.skipped ? "skipped" : (r.passed ? "pass" : "fail");
    o["metric"] = r.metric;
    o["threshold"] = r.threshold;
    o["note"] = r.note;
    arr.push_back(std::move(o));
    all = all && r.passed;
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    e.csv += csv_line({r.name, r.skipped ? "skipped" : (r.passed ? "pass" : "fail"), r.skipped ? "" : num(r.metric),
                       r.skipped ? "" : num(r.threshold), note});
  }
  e.doc["checks"] = std::move(arr);
  e.doc["all_passed"] = all;
  if (!all) e.code = exit_numerical;
  return e;
}

struct SweepRecord {
  std::size_t line = 0;
  complex a, b, c;
  std::string status = "ok";
  std::string message;
  std::size_t eigen_count = 0;
  double distance_sum = 0.0;
  double trace_bound = 0.0;
  bool holds = false;
  std::optional<std::size_t> kappa;
};

void process_record(SweepRecord& r, const RunConfig& cfg) {
  try {
    const HypParams p = validate_params(r.a, r.b, r.c);
    const SpectralResult res = discrete_spectrum(p, cfg.n, cfg.tol);
    r.eigen_count = res.eigenvalues.size();
    r.distance_sum = res.distance_sum;
    r.trace_bound = res.trace_bound;
    r.holds = res.distance_sum <= res.trace_bound + 1e-9;
    if (p.is_real) r.kappa = sign_signature(p).kappa;
  } catch (const Error& err) {
    r.status = to_string(err.kind());
    r.message = err.what();
  }
}

Emitted cmd_sweep(const RunConfig& cfg) {
  if (cfg.manifest.empty()) throw Error(ErrorKind::invalid_argument, "sweep needs --manifest");
  std::ifstream in(cfg.manifest);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open manifest " + cfg.manifest);

  std::vector<SweepRecord> records;
  std::string text;
  for (std::size_t line_no = 1; std::getline(in, text); ++line_no) {
    const auto start = text.find_first_not_of(" \t\r");
    if (start == std::string::npos || text[start] == '#') continue;
    std::istringstream fields(text);
    std::string a, b, c, extra;
    if (!(fields >> a >> b >> c) || (fields >> extra))
      throw Error(ErrorKind::invalid_argument, "manifest line " + std::to_string(line_no) + ": expected 'a b c'");
    SweepRecord r;
    r.line = line_no;
    r.a = parse_complex(a, "manifest a");
    r.b = parse_complex(b, "manifest b");
    r.c = parse_complex(c, "manifest c");
    records.push_back(r);
  }

  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(records.size(), std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < records.size(); i = next++) process_record(records[i], cfg);
    });
  pool.clear();

  Emitted e;
  e.doc["schema_version"] = schema_version;
  json arr = json::array();
  e.csv = csv_line({"line", "a_re", "a_im", "b_re", "b_im", "c_re", "c_im", "status", "eigen_count", "distance_sum",
                    "trace_bound", "holds", "kappa"});
  for (const auto& r : records) {
    json o;
    o["line"] = r.line;
    o["params"] = json{{"a", cjson(r.a)}, {"b", cjson(r.b)}, {"c", cjson(r.c)}};
    o["status"] = r.status;
    const bool ok = r.status == "ok";
    if (ok) {
      o["eigen_count"] = r.eigen_count;
      o["distance_sum"] = r.distance_sum;
      o["trace_bound"] = r.trace_bound;
      o["holds"] = r.holds;
      o["kappa"] = r.kappa ? json(*r.kappa) : json(nullptr);
    } else {
      o["message"] = r.message;
    }
    arr.push_back(std::move(o));
    e.csv += csv_line({std::to_string(r.line), num(r.a.real()), num(r.a.imag()), num(r.b.real()), num(r.b.imag()),
                       num(r.c.real()), num(r.c.imag()), r.status, ok ? std::to_string(r.eigen_count) : "",
                       ok ? num(r.distance_sum) : "", ok ? num(r.trace_bound) : "",
                       ok ? (r.holds ? "true" : "false") : "",
                       ok && r.kappa ? std::to_string(*r.kappa) : ""});
  }
  e.doc["records"] = std::move(arr);
  return e;
}

const char* csv_help =
    "CSV columns:\n"
    "  eval      z_re,z_im,cf_re,cf_im,resolvent_re,resolvent_im,difference,agree\n"
    "  coeffs    n,a_re,a_im,bsq_re,bsq_im,b_re,b_im,j,c_re,c_im,d_re,d_im\n"
    "  spectrum  kind,re,im,distance\n"
    "  zeros     target,re,im\n"
    "  classify  j,epsilon,b_sq,btilde\n"
    "  measure   node,weight\n"
    "  check     name,status,metric,threshold,note\n"
    "  sweep     line,a_re,a_im,b_re,b_im,c_re,c_im,status,eigen_count,distance_sum,trace_bound,holds,kappa\n"
    "Exit codes: 0 success, 2 invalid input, 3 numerical failure.\n";

void add_common(CLI::App* sub, RunConfig& cfg, bool with_params) {
  if (with_params) {
    sub->add_option("-a", cfg.a, "parameter a, \"re\" or \"re,im\"");
    sub->add_option("-b", cfg.b, "parameter b, \"re\" or \"re,im\"");
    sub->add_option("-c", cfg.c, "parameter c, \"re\" or \"re,im\"");
  }
  sub->add_option("--tol", cfg.tol, "tolerance")->check(CLI::Range(1e-14, 1e-2))->capture_default_str();
  sub->add_option("--N", cfg.n, "truncation order")->check(CLI::Range(8, 8192))->capture_default_str();
  sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  sub->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--out", cfg.out_path, "write the document to PATH instead of standard output");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Continued fractions, Jacobi matrices and zeros of Gauss hypergeometric functions", "hypjac"};
  app.footer(csv_help);
  app.require_subcommand(1, 1);

  struct Sub {
    const char* name;
    const char* help;
    Emitted (*fn)(const RunConfig&);
  };
  const Sub subs[] = {
      {"eval", "B at --z by continued fraction and by truncated resolvent", cmd_eval},
      {"coeffs", "c_j, d_j and the Jacobi coefficients a_n, b_n^2", cmd_coeffs},
      {"spectrum", "discrete spectrum of the Jacobi operator", cmd_spectrum},
      {"zeros", "hypergeometric zeros in the cut plane", cmd_zeros},
      {"classify", "sign signature and negative squares certificate (real parameters)", cmd_classify},
      {"measure", "Gauss quadrature of the spectral measure (Stieltjes triples)", cmd_measure},
      {"check", "invariant suite for one triple", cmd_check},
      {"sweep", "spectrum and kappa for every triple in a manifest", cmd_sweep},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> registered;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, cfg, std::string(s.name) != "sweep");
    if (std::string(s.name) == "eval") sub->add_option("--z", cfg.z, "evaluation point \"re,im\"");
    if (std::string(s.name) == "classify") {
      sub->add_option("--trials", cfg.trials, "sample sets for the certificate")->capture_default_str();
      sub->add_option("--samples", cfg.samples, "points per sample set")->capture_default_str();
    }
    if (std::string(s.name) == "sweep")
      sub->add_option("--manifest", cfg.manifest, "file of lines \"a b c\"; '#' starts a comment");
    registered.emplace_back(sub, &s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "hypjac: " << e.what() << "\n";
    return exit_validation;
  }

  const Sub* chosen = nullptr;
  for (const auto& [sub, s] : registered)
    if (sub->parsed()) chosen = s;

  Emitted emitted;
  try {
    emitted = chosen->fn(cfg);
  } catch (const Error& e) {
    err << "hypjac " << chosen->name << ": " << e.what() << "\n";
    const int code = is_validation_error(e.kind()) ? exit_validation : exit_numerical;
    if (cfg.format == "json") {
      json doc;
      doc["schema_version"] = schema_version;
      doc["error"] = json{{"kind", to_string(e.kind())}, {"message", e.what()}};
      out << dump_json(doc);
    }
    return code;
  }

  const std::string text = cfg.format == "csv" ? emitted.csv : dump_json(emitted.doc);
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) {
      err << "hypjac: cannot write " << cfg.out_path << "\n";
      return exit_validation;
    }
    file << text;
  }
  return emitted.code;
}

}  // namespace hypjac::cli
