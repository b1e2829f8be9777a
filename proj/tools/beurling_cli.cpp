// beurling: construct, run and tabulate generalized prime systems.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beurling/beurling.hpp"
#include "beurling/json_io.hpp"

namespace fs = std::filesystem;
using namespace beurling;

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitMissingFile = 2;
constexpr int kExitCertification = 3;
constexpr int kExitInvalid = 4;
constexpr int kExitResource = 5;

struct Options {
  std::string spec_path;
  std::optional<double> xmax;
  std::vector<std::uint64_t> seeds;
  std::string out;
  unsigned threads = 1;
  std::string what = "psi";
  std::string s = "2";
};

struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SystemSpec load_spec(const Options& o) {
  if (o.spec_path.empty()) throw DomainError("--spec is required");
  std::ifstream in(o.spec_path);
  if (!in) throw MissingFile("cannot open spec file: " + o.spec_path);
  json j = json::parse(in);
  if (o.xmax) j["xmax"] = *o.xmax;
  if (!o.seeds.empty()) j["seeds"] = o.seeds;
  return spec_from_json(j);
}

/// Classical primes to X, cached as raw uint32 under $BEURLING_CACHE.
GenPrimes classical_primes(double X) {
  const char* dir = std::getenv("BEURLING_CACHE");
  if (!dir || !*dir) return sieve_classical(X);
  if (!(X <= kSieveCap)) throw ResourceError("sieve: X exceeds the 1e8 desk cap", X);
  const auto n = static_cast<std::uint64_t>(std::floor(X));
  const fs::path file = fs::path(dir) / ("primes_" + std::to_string(n) + ".u32");
  std::vector<std::uint32_t> ps;
  if (std::ifstream in{file, std::ios::binary}) {
    in.seekg(0, std::ios::end);
    ps.resize(static_cast<std::size_t>(in.tellg()) / sizeof(std::uint32_t));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(ps.data()), static_cast<std::streamsize>(ps.size() * sizeof(std::uint32_t)));
  } else {
    ps = primes_upto(n);
    fs::create_directories(dir);
    std::ofstream outf(file, std::ios::binary);
    outf.write(reinterpret_cast<const char*>(ps.data()), static_cast<std::streamsize>(ps.size() * sizeof(std::uint32_t)));
  }
  GenPrimes g;
  g.horizon = X;
  for (auto p : ps) g.push_back(p, Provenance::Classical);
  return g;
}

cplx parse_complex(const std::string& text) {
  static const std::regex re(R"(\s*([+-]?[0-9.eE+-]*?[0-9.])\s*(?:([+-])\s*([0-9.eE+-]*)\s*i)?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw DomainError("cannot parse complex number '" + text + "'");
  const double re_part = std::stod(m[1]);
  double im = 0;
  if (m[2].matched) {
    im = m[3].length() ? std::stod(m[3]) : 1.0;
    if (m[2] == "-") im = -im;
  }
  return {re_part, im};
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  std::ofstream f(out, std::ios::binary);
  f << text;
}

/// The measured system and its models for one seed.
struct Built {
  TemplateFn F;
  GenPrimes sampled;
  GenPrimes system;
  std::function<double(double)> psi_model, N_model, pi_model;
};

Built build(const SystemSpec& sys, std::uint64_t seed) {
  const double X = sys.x_max;
  switch (sys.family) {
    case Family::Prescription: {
      auto ps = sys.prescription;
      ps.x_max = X;
      PositivityCertificate c;
      auto F = make_prescription_F(ps, &c);
      auto P = sample_primes(F, X, seed);
      const double a = density_by_residue(P, ps, c.M, X);
      return {F, P, P, psi_model(ps, c.M), [a](double x) { return a * x; }, [F](double x) { return F.eval(x); }};
    }
    case Family::Oscillatory: {
      auto os = sys.oscillatory;
      os.x_max = X;
      auto F = make_oscillatory_pi_C(os);
      auto P = sample_primes(F, X, seed);
      const double a = density_top_decade(enumerate(P, X, WeightKind::Unit));
      const double al = os.alpha;
      return {F, P, P, [al](double x) { return x - std::pow(x, al) / al; }, [a](double x) { return a * x; },
              [F](double x) { return F.eval(x); }};
    }
    case Family::Subtractive: {
      const auto& ss = sys.subtractive;
      const auto primes = classical_primes(X);
      auto F = make_subtractive_F(ss.alpha, primes, ss.error_measure);
      auto PS = sample_primes(F, X, seed);
      auto Pab = subtract(adjoin_scaled(primes, ss.beta, X), PS);
      const double c1 = zeta_eval(1 / ss.beta) / zeta_subtractive(PS, primes, ss.alpha, 1.0).value.real();
      const double cb = zeta_eval(ss.beta) / zeta_subtractive(PS, primes, ss.alpha, ss.beta).value.real();
      const double al = ss.alpha, be = ss.beta;
      return {F,
              PS,
              Pab,
              [al, be](double x) { return x + std::pow(x, be) / be - std::pow(x, al) / al; },
              [c1, cb, be](double x) { return c1 * x + cb * std::pow(x, be); },
              [F, be](double x) { return li(x) + (x > 1 ? li(std::pow(x, be)) : 0.0) - F.eval(x); }};
    }
  }
  throw DomainError("unknown family");
}

int cmd_construct(const Options& o) {
  const auto sys = load_spec(o);
  json j{{"family", to_string(sys.family)}, {"config_hash", config_hash(sys)}, {"spec", spec_to_json(sys)}};
  const double X = sys.x_max;
  switch (sys.family) {
    case Family::Prescription: {
      auto ps = sys.prescription;
      ps.x_max = X;
      PositivityCertificate c;
      const auto F = make_prescription_F(ps, &c);
      j["M"] = c.M;
      j["certificate"] = {{"x0", c.x0},
                          {"grid", {c.grid_lo, c.grid_hi}},
                          {"grid_points", c.grid_points},
                          {"min_xlogx_dF", c.min_value},
                          {"min_at", c.min_at}};
      j["F_xmax"] = F.f_max();
      break;
    }
    case Family::Oscillatory: {
      auto os = sys.oscillatory;
      os.x_max = X;
      OscillatoryCertificate a, b;
      make_oscillatory_Pi_C(os, &a);
      const auto F = make_oscillatory_pi_C(os, &b);
      json blocks = json::array();
      for (std::size_t l = 0; l < os.blocks(); ++l)
        blocks.push_back({{"tau", os.tau[l]}, {"delta", os.delta[l]}, {"nu", os.nu[l]}, {"A", os.A(l)}, {"B", os.B(l)}});
      j["blocks"] = blocks;
      j["full_blocks_below_xmax"] = os.full_blocks_below(X);
      j["certificate"] = {{"Pi_C_min_margin", a.min_margin},
                          {"pi_C_min_margin", b.min_margin},
                          {"grid", {b.grid_lo, b.grid_hi}},
                          {"grid_points", b.grid_points}};
      j["F_xmax"] = F.f_max();
      break;
    }
    case Family::Subtractive: {
      const auto& ss = sys.subtractive;
      const auto primes = classical_primes(X);
      const auto F = make_subtractive_F(ss.alpha, primes, ss.error_measure);
      const auto lay = subtractive_layout(ss.alpha, primes);
      json q = json::array();
      for (std::size_t k = 0; k < std::min<std::size_t>(5, lay.transfer.size()); ++k)
        q.push_back(primes.values[lay.transfer[k]]);
      j["atoms"] = primes.size();
      j["transfer_primes"] = lay.transfer.size();
      j["first_transfer_primes"] = q;
      j["F_xmax"] = F.f_max();
      break;
    }
  }
  emit(j.dump(2) + "\n", o.out);
  return 0;
}

int cmd_run(const Options& o) {
  const auto sys = load_spec(o);
  std::optional<GenPrimes> classical;
  if (sys.family == Family::Subtractive) classical = classical_primes(sys.x_max);
  const auto rep = run_system(sys, o.threads, classical ? &*classical : nullptr);
  const fs::path dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
  fs::create_directories(dir);
  for (const auto& [name, content] : rep.files) {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
  }
  const auto m = manifest_json(rep);
  std::ofstream(dir / "manifest.json", std::ios::binary) << m.dump(2) << "\n";
  for (const auto& c : rep.checks)
    std::printf("%-20s %-4s value=%.6g band=[%g, %g]\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.value, c.lo,
                c.hi);
  std::printf("manifest: %s (config %s)\n", (dir / "manifest.json").string().c_str(), config_hash(sys).c_str());
  return rep.passed() ? 0 : kExitChecksFailed;
}

std::string table_csv(const char* what, const StepTable& t, const std::function<double(double)>& model, double X) {
  std::ostringstream os;
  os << "x," << what << ",model,residual\n";
  for (double x : log_grid(2.0, X, 50)) {
    const double v = t.query(x), m = model(x);
    os << StepTable::format_double(x) << ',' << StepTable::format_double(v) << ',' << StepTable::format_double(m)
       << ',' << StepTable::format_double(v - m) << '\n';
  }
  return os.str();
}

int cmd_table(const Options& o) {
  const std::string& w = o.what;
  if (w == "zeta") {
    const cplx s = parse_complex(o.s);
    GenPrimes P;
    double X = o.xmax.value_or(1e6);
    if (!o.spec_path.empty()) {
      const auto sys = load_spec(o);
      X = sys.x_max;
      P = build(sys, sys.seeds.front()).system;
    } else {
      P = classical_primes(X);
    }
    const auto N = enumerate(P, X, WeightKind::Unit, o.threads);
    json j = mellin_json(dirichlet_sum(N, s));
    j["log_euler_product"] = mellin_json(euler_log_zeta(P, s, X));
    emit(j.dump(2) + "\n", o.out);
    return 0;
  }
  const auto sys = load_spec(o);
  const double X = sys.x_max;
  const auto b = build(sys, sys.seeds.front());
  if (w == "psi") {
    emit(table_csv("psi", enumerate(b.system, X, WeightKind::VonMangoldt), b.psi_model, X), o.out);
  } else if (w == "N") {
    emit(table_csv("N", enumerate(b.system, X, WeightKind::Unit, o.threads), b.N_model, X), o.out);
  } else if (w == "pi") {
    emit(table_csv("pi", counting_table(b.system), b.pi_model, X), o.out);
  } else if (w == "moebius") {
    emit(table_csv("moebius", enumerate(b.sampled, X, WeightKind::Moebius, o.threads), [](double) { return 0.0; }, X),
         o.out);
  } else if (w == "deviation") {
    const std::vector<double> ts{0, 1, 10, 100};
    const auto d = deviation_J(b.sampled, b.F, log_grid(2.0, X, 10), ts, o.threads);
    std::ostringstream os;
    os << "x,t,re,im,abs,ratio\n";
    for (std::size_t it = 0; it < ts.size(); ++it)
      for (std::size_t ix = 0; ix < d.grid.size(); ++ix) {
        const cplx J = d.J[it][ix];
        os << StepTable::format_double(d.grid[ix]) << ',' << StepTable::format_double(ts[it]) << ','
           << StepTable::format_double(J.real()) << ',' << StepTable::format_double(J.imag()) << ','
           << StepTable::format_double(std::abs(J)) << ','
           << StepTable::format_double(std::abs(J) / DeviationReport::rhs(d.grid[ix], ts[it], d.exponent)) << '\n';
      }
    emit(os.str(), o.out);
  } else {
    throw DomainError("unknown --what '" + w + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beurling generalized prime systems: construct, sample, measure"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", o.spec_path, "SystemSpec JSON file");
    sub->add_option("--xmax", o.xmax, "Override the spec's xmax");
    sub->add_option("--seed", o.seeds, "Seed (repeatable); overrides the spec's seeds");
    sub->add_option("--out", o.out, "Output file (construct, table) or directory (run)");
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };
  auto* construct = app.add_subcommand("construct", "Build and certify the template; print diagnostics");
  auto* run = app.add_subcommand("run", "Sample, enumerate, measure and check; write CSVs and manifest");
  auto* table = app.add_subcommand("table", "Emit one table as CSV (or zeta values as JSON)");
  for (auto* s : {construct, run, table}) add_common(s);
  table->add_option("--what", o.what, "psi, N, pi, moebius, zeta or deviation")
      ->check(CLI::IsMember({"psi", "N", "pi", "moebius", "zeta", "deviation"}));
  table->add_option("--s", o.s, "Complex argument for --what zeta, e.g. 2+0i");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*construct) return cmd_construct(o);
    if (*run) return cmd_run(o);
    return cmd_table(o);
  } catch (const MissingFile& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingFile;
  } catch (const CertificationError& e) {
    std::cerr << "certification failed: " << e.what() << " (at x = " << e.violating_x() << ")\n";
    return kExitCertification;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const json::exception& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
