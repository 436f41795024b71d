#include "entwit/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "entwit/error.hpp"
#include "entwit/families.hpp"
#include "entwit/io.hpp"
#include "entwit/measures.hpp"
#include "entwit/roof.hpp"
#include "entwit/witness.hpp"

namespace entwit::cli {

std::string format_number(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  if (value == 0.0) {
    value = 0.0; // drop the sign of -0
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) {
    s += ".0";
  }
  return s;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char *env = std::getenv("ENTWIT_SEED")) {
    std::uint64_t v = 0;
    const std::string s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v >= 1) {
      return v;
    }
    throw UsageError("ENTWIT_SEED must be a positive integer");
  }
  return 1;
}

Tolerances apply_tolerances(const RunConfig &cfg) {
  Tolerances t;
  for (const auto &[name, value] : cfg.tolerances) {
    if (name == "membership") {
      t.membership = value;
    } else if (name == "tight") {
      t.tight = value;
    } else if (name == "certify") {
      t.certify = value;
    } else if (name == "dedup") {
      t.dedup = value;
    } else {
      throw UsageError("unknown tolerance name: " + name);
    }
  }
  return t;
}

WitnessSearchOptions search_options(const RunConfig &cfg, int samples) {
  WitnessSearchOptions o;
  o.restarts = cfg.restarts;
  o.samples = samples;
  o.seed = cfg.seed;
  o.tolerances = apply_tolerances(cfg);
  o.overlap.seed = cfg.seed;
  return o;
}

DensityMatrix named_density(const std::string &name) {
  if (name == "smolin") {
    return smolin_state();
  }
  CVector v;
  const auto &s = ghz_states();
  if (name == "ghz") {
    v = s.ghz.amplitudes();
  } else if (name == "ghzbar") {
    v = s.ghz_bar.amplitudes();
  } else if (name == "w") {
    v = s.w.amplitudes();
  } else if (name == "bell") {
    v = CVector::Zero(4);
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
  } else {
    throw UsageError("unknown state name: " + name + " (ghz, ghzbar, w, bell, smolin)");
  }
  return DensityMatrix(v * v.adjoint());
}

PureState named_pure(const std::string &name) {
  if (name == "smolin") {
    throw Error("pure_state", "smolin is a mixed state");
  }
  const DensityMatrix rho = named_density(name);
  return PureState::normalized(rho.range_basis().col(0));
}

void write_csv(const std::string &path, const std::string &header,
               const std::vector<std::vector<std::string>> &rows, const RunConfig &cfg,
               std::ostream &out) {
  std::ostringstream text;
  text << header << '\n';
  for (const auto &row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      text << (i ? "," : "") << row[i];
    }
    text << '\n';
  }
  text << "# seed=" << cfg.seed << " restarts=" << cfg.restarts << " version=" << kVersion << '\n';
  if (path.empty()) {
    out << text.str();
    return;
  }
  std::ofstream f(path);
  if (!f) {
    throw Error("file_unwritable", "cannot write " + path);
  }
  f << text.str();
}

void write_json(const std::string &path, const nlohmann::json &doc, std::ostream &out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    io::save_file(path, doc);
  }
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Entanglement witnesses and convex roofs for few-qubit states", "entwit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunConfig cfg;
  std::vector<std::string> tol_args;
  bool seed_given = false;
  app.add_option("--seed", cfg.seed, "Random seed (default: $ENTWIT_SEED or 1)")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string &) { seed_given = true; });
  app.add_option("--restarts", cfg.restarts, "Restarts for multi-start searches")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", cfg.threads, "Worker threads (default: all cores)");
  app.add_option("--tol", tol_args, "Tolerance override name=value (membership, tight, certify, dedup)");

  // measure
  auto *measure = app.add_subcommand("measure", "Entanglement of a pure or mixed state");
  measure->require_subcommand(1);
  std::string m_state, m_file, m_measure = "t3";
  auto *m_pure = measure->add_subcommand("pure", "Pure-state measure");
  auto *m_mixed = measure->add_subcommand("mixed", "Two-qubit concurrence of a density matrix");
  for (auto *sub : {m_pure, m_mixed}) {
    auto *a = sub->add_option("--state", m_state, "Named state: ghz, ghzbar, w, bell, smolin");
    auto *b = sub->add_option("--state-file", m_file, "State file (JSON)");
    a->excludes(b);
    sub->add_option("--measure", m_measure, "eg, t3 or concurrence");
  }

  // witness
  auto *witness = app.add_subcommand("witness", "Witness validity and optimality");
  witness->require_subcommand(1);
  std::string w_file, w_state, w_state_file, w_out;
  int w_samples = 64;
  auto *w_check = witness->add_subcommand("check", "Search for pure states the witness overestimates");
  w_check->add_option("--witness-file", w_file, "Witness file (JSON)")->required();
  w_check->add_option("--samples", w_samples, "Haar starting points for the ascent");
  auto *w_cert = witness->add_subcommand("certify", "Certify Tr(X rho) = E(rho)");
  w_cert->add_option("--witness-file", w_file, "Witness file (JSON)")->required();
  auto *wa = w_cert->add_option("--state", w_state, "Named state");
  auto *wb = w_cert->add_option("--state-file", w_state_file, "State file (JSON)");
  wa->excludes(wb);
  w_cert->add_option("--samples", w_samples, "Haar starting points for the ascent");
  w_cert->add_option("--out", w_out, "Certificate output (JSON)");

  // roof
  auto *roof = app.add_subcommand("roof", "Brute-force convex roof upper bound");
  std::string r_state, r_file, r_measure = "t3", r_out;
  int r_m = 0;
  auto *ra = roof->add_option("--state", r_state, "Named state");
  auto *rb = roof->add_option("--state-file", r_file, "State file (JSON)");
  ra->excludes(rb);
  roof->add_option("--measure", r_measure, "eg, t3 or concurrence");
  roof->add_option("--m", r_m, "Ensemble size (default rank + 2)");
  roof->add_option("--out", r_out, "Ensemble output (JSON)");

  // smolin
  auto *smolin = app.add_subcommand("smolin", "Noisy Smolin states");
  smolin->require_subcommand(1);
  double s_min = 0.0, s_max = 1.0;
  int s_steps = 21;
  std::string s_out;
  auto *s_scan = smolin->add_subcommand("scan", "Optimal E_G witness along p");
  s_scan->add_option("--p-min", s_min, "First p")->check(CLI::Range(0.0, 1.0));
  s_scan->add_option("--p-max", s_max, "Last p")->check(CLI::Range(0.0, 1.0));
  s_scan->add_option("--steps", s_steps, "Number of p values")->check(CLI::Range(1, 100000));
  s_scan->add_option("--out", s_out, "CSV output (default stdout)");

  // ghz
  auto *ghz = app.add_subcommand("ghz", "GHZ / GHZbar / white-noise mixtures");
  ghz->require_subcommand(1);
  int g_grid = 11;
  double g_p = 0.0, g_q = 0.0;
  std::string g_out;
  bool g_no_certify = false;
  auto *g_surface = ghz->add_subcommand("surface", "T3 over the physical (p, q) triangle");
  g_surface->add_option("--grid", g_grid, "Points per axis")->check(CLI::Range(2, 1000));
  g_surface->add_option("--out", g_out, "CSV output (default stdout)");
  g_surface->add_flag("--no-certify", g_no_certify, "Skip the optimality certificates");
  auto *g_point = ghz->add_subcommand("point", "T3 at one (p, q)");
  g_point->add_option("--p", g_p, "Weight of GHZbar")->required();
  g_point->add_option("--q", g_q, "Weight of white noise")->required();
  g_point->add_flag("--no-certify", g_no_certify, "Skip the optimality certificate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!seed_given) {
      cfg.seed = default_seed();
    }
    for (const auto &t : tol_args) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw UsageError("--tol expects name=value");
      }
      double v = 0.0;
      const std::string num = t.substr(eq + 1);
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
      if (ec != std::errc() || ptr != num.data() + num.size() || !(v > 0.0)) {
        throw UsageError("tolerance value must be a positive number: " + t);
      }
      cfg.tolerances[t.substr(0, eq)] = v;
    }
    const Tolerances tolerances = apply_tolerances(cfg);
    optimize::set_thread_count(cfg.threads);

    auto load_density = [](const std::string &name, const std::string &file) {
      if (!file.empty()) {
        return io::read_density(io::load_file(file));
      }
      if (name.empty()) {
        throw UsageError("give --state or --state-file");
      }
      return named_density(name);
    };

    if (*measure) {
      const MeasureKind kind = parse_measure(m_measure);
      ProductOverlapOptions overlap;
      overlap.seed = cfg.seed;
      overlap.restarts = std::max(overlap.restarts, cfg.restarts);
      if (*m_pure) {
        const PureState psi = !m_file.empty() ? io::read_pure(io::load_file(m_file))
                              : !m_state.empty() ? named_pure(m_state)
                                                 : throw UsageError("give --state or --state-file");
        check_measure_qubits(kind, psi.n_qubits());
        out << format_number(pure_measure(kind, psi, overlap)) << '\n';
      } else {
        if (kind != MeasureKind::Concurrence) {
          throw Error("measure_kind", "mixed-state values in closed form exist only for the "
                                      "two-qubit concurrence; use roof or witness certify");
        }
        const DensityMatrix rho = load_density(m_state, m_file);
        out << format_number(concurrence_two_qubit(rho)) << '\n';
      }
      return 0;
    }

    if (*witness) {
      const WitnessOperator x = read_witness(io::load_file(w_file));
      WitnessSearchOptions search = search_options(cfg, w_samples);
      search.tolerances = tolerances;
      if (*w_check) {
        const MembershipReport r = verify_membership(x, search);
        out << "valid=" << (r.ok ? "true" : "false") << '\n';
        out << "worst_violation=" << format_number(r.worst_violation) << '\n';
        return 0;
      }
      const DensityMatrix rho = load_density(w_state, w_state_file);
      const TightStateSet tight = find_tight_states(x, search);
      const CertifyResult r = certify_optimality(x, rho, tight, tolerances.certify);
      out << "expectation=" << format_number(r.expectation) << '\n';
      out << "lower_bound=" << format_number(std::max(0.0, r.expectation)) << '\n';
      out << "certified=" << (r.certified() ? "true" : "false") << '\n';
      out << "residual=" << format_number(r.best_residual) << '\n';
      out << "tight_states=" << tight.size() << '\n';
      if (r.certified() && !w_out.empty()) {
        write_json(w_out, certificate_document(*r.certificate), out);
      }
      return 0;
    }

    if (*roof) {
      const DensityMatrix rho = load_density(r_state, r_file);
      RoofOptions opts;
      opts.ensemble_size = r_m;
      opts.restarts = cfg.restarts;
      opts.seed = cfg.seed;
      opts.overlap.seed = cfg.seed;
      const RoofResult r = convex_roof_minimize(rho, parse_measure(r_measure), opts);
      out << format_number(r.value) << '\n';
      if (!r_out.empty()) {
        write_json(r_out, ensemble_document(r.best), out);
      }
      return 0;
    }

    if (*smolin) {
      if (s_max < s_min) {
        throw UsageError("--p-max must not be below --p-min");
      }
      std::vector<std::vector<std::string>> rows;
      for (int k = 0; k < s_steps; ++k) {
        const double p = s_steps == 1 ? s_min : s_min + (s_max - s_min) * k / (s_steps - 1);
        const SmolinOptimum opt = optimize_smolin_witness(p);
        const double value = std::max(0.0, expectation(smolin_witness(opt.params), noisy_smolin(p)));
        rows.push_back({format_number(p), format_number(value), format_number(opt.params.alpha),
                        format_number(opt.params.beta), format_number(smolin_eg_analytic(p))});
      }
      write_csv(s_out, "p,e_g,alpha,beta,e_g_analytic", rows, cfg, out);
      return 0;
    }

    if (*ghz) {
      GgiOptions opts;
      opts.mu.seed = cfg.seed;
      opts.certify = !g_no_certify;
      opts.search = search_options(cfg, 64);
      auto row = [](const GgiPoint &pt) {
        return std::vector<std::string>{format_number(pt.p),  format_number(pt.q),
                                        format_number(pt.t3), format_number(pt.mu),
                                        format_number(pt.lambda), pt.certified ? "true" : "false"};
      };
      std::vector<std::vector<std::string>> rows;
      if (*g_surface) {
        for (const auto &pt : t3_surface_scan(g_grid, opts)) {
          rows.push_back(row(pt));
        }
        write_csv(g_out, "p,q,t3,mu,lambda,certified", rows, cfg, out);
      } else {
        MuCurve curve(opts.mu);
        rows.push_back(row(optimize_ggi_point(g_p, g_q, curve, opts)));
        write_csv("", "p,q,t3,mu,lambda,certified", rows, cfg, out);
      }
      return 0;
    }
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error &e) {
    err << "error [" << e.invariant() << "]: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception &e) {
    err << "error [file_format]: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

} // namespace entwit::cli
