// hyperqd: coefficients, gate runs, truth tables, sweeps and self-check.
//
// Exit codes: 0 ok, 1 verify failure, 2 invalid input, 3 internal contract
// violation, 4 unwritable output path.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hyperqd/acceptance.hpp"
#include "hyperqd/cavity.hpp"
#include "hyperqd/circuits.hpp"
#include "hyperqd/errors.hpp"
#include "hyperqd/metrics.hpp"

namespace {

using namespace hyperqd;

constexpr int kExitVerify = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitContract = 3;
constexpr int kExitUnwritable = 4;

struct UnwritablePath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v + 0.0);  // +0.0 folds -0 into 0
  return buf;
}

// Output sink: stdout for "" or "-", otherwise a file that must open.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw UnwritablePath("cannot write '" + path + "'");
    path_ = path;
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }
  void close() {
    if (!file_) return;
    file_->close();
    if (!*file_) throw UnwritablePath("failed writing '" + path_ + "'");
  }
  bool is_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::string path_;
};

// ---------------------------------------------------------------- parsing

std::vector<double> split_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || !std::isfinite(v))
      throw ValidationError(what + ": '" + tok + "' is not a number");
    out.push_back(v);
  }
  return out;
}

// "re,im,re,..." (or plain reals) for `count` amplitudes, normalized to 1e-6.
std::vector<cplx> parse_amps(const std::string& s, std::size_t count, const std::string& what) {
  const auto v = split_numbers(s, what);
  std::vector<cplx> a;
  if (v.size() == 2 * count) {
    for (std::size_t k = 0; k < count; ++k) a.emplace_back(v[2 * k], v[2 * k + 1]);
  } else if (v.size() == count) {
    for (double x : v) a.emplace_back(x, 0.0);
  } else {
    throw ValidationError(what + ": expected " + std::to_string(count) + " amplitudes as re,im pairs");
  }
  double sq = 0.0;
  for (const auto& c : a) sq += std::norm(c);
  if (std::abs(sq - 1.0) > 1e-6)
    throw ValidationError(what + ": amplitudes are not normalized (|.|^2 = " + num(sq) + ")");
  for (auto& c : a) c /= std::sqrt(sq);
  return a;
}

// "R,a1" style basis label for photon `id`.
PhotonSpec parse_basis(const std::string& s, const std::string& id) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ValidationError("--" + id + ": expected pol,rail such as R," + id + "1");
  const std::string pol = s.substr(0, comma), rail = s.substr(comma + 1);
  Pol p;
  if (pol == "R" || pol == "r") p = Pol::R;
  else if (pol == "L" || pol == "l") p = Pol::L;
  else throw ValidationError("--" + id + ": polarization must be R or L");
  int r = -1;
  if (rail == id + "1" || rail == "1" || rail == "i1") r = 0;
  else if (rail == id + "2" || rail == "2" || rail == "i2") r = 1;
  else throw ValidationError("--" + id + ": rail must be " + id + "1 or " + id + "2");
  return PhotonSpec::basis(p, r);
}

SpinSpec parse_spin(const std::string& s, const std::string& what) {
  if (s.empty() || s == "+" || s == "plus") return SpinSpec::plus();
  if (s == "up") return SpinSpec::basis(Spin::Up);
  if (s == "down") return SpinSpec::basis(Spin::Down);
  const auto a = parse_amps(s, 2, what);
  return SpinSpec{{a[0], a[1]}};
}

// Key=value config lines become --key=value arguments placed right after the
// subcommand, so anything given on the command line wins.
std::vector<std::string> with_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::vector<std::string> injected;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(path + ":" + std::to_string(lineno) + ": empty key");
    injected.push_back("--" + key + "=" + value);
  }
  // insert after the subcommand and its gate positional, if any
  std::size_t at = args.empty() ? 0 : 1;
  if (at < args.size() && (args[0] == "run" || args[0] == "truthtable") && args[at].rfind("-", 0) != 0)
    ++at;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
  return args;
}

// ---------------------------------------------------------------- cavity opts

struct CavityOpts {
  double g = 2.4;
  double ks = 0.0;
  double gamma = 0.1;

  void add(CLI::App* app) {
    app->add_option("--g", g, "coupling ratio g/(kappa+kappa_s)")->capture_default_str();
    app->add_option("--ks", ks, "side-leakage ratio kappa_s/kappa")->capture_default_str();
    app->add_option("--gamma", gamma, "X^- decay ratio gamma/kappa")->capture_default_str();
  }
  ScatterMode mode(bool lossy) const {
    if (!lossy) return ScatterMode::ideal();
    return ScatterMode::from_coeffs(coeffs(CavityParams::from_ratios(g, ks, gamma)));
  }
};

// ---------------------------------------------------------------- coeffs

struct CoeffsCmd {
  CavityOpts cav{0.5, 0.0, 0.1};
  double g_abs = -1.0;
  std::vector<double> detuning;
  int detuning_steps = 101;
  std::string out;

  void add(CLI::App* app) {
    cav.add(app);
    app->add_option("--g-abs", g_abs, "coupling g/kappa (overrides --g)");
    app->add_option("--detuning-range", detuning, "lo,hi probe detuning (units of kappa)")
        ->delimiter(',')
        ->expected(2);
    app->add_option("--detuning-steps", detuning_steps, "points in the detuning scan")
        ->capture_default_str();
    app->add_option("--out", out, "output path (default stdout)");
  }

  int run() {
    CavityParams p = CavityParams::from_ratios(cav.g, cav.ks, cav.gamma);
    if (g_abs >= 0.0) p.g = g_abs;
    else if (g_abs != -1.0) throw ValidationError("--g-abs must be >= 0");
    p.validate();
    Sink sink(out);
    auto& os = sink.os();
    if (detuning.empty()) {
      const ScatterCoeffs c = coeffs(p);
      os << "g/k=" << num(p.g) << " ks/k=" << num(p.kappa_s) << " gamma/k=" << num(p.gamma)
         << " (g/(k+ks)=" << num(p.g / (p.kappa + p.kappa_s)) << ")\n";
      const std::pair<const char*, cplx> rows[] = {{"r", c.r}, {"t", c.t}, {"r0", c.r0}, {"t0", c.t0}};
      for (const auto& [name, v] : rows) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-3s re=%s im=%s |.|=%s\n", name, num(v.real()).c_str(),
                      num(v.imag()).c_str(), num(std::abs(v)).c_str());
        os << buf;
      }
    } else {
      if (detuning_steps < 1) throw ValidationError("--detuning-steps must be >= 1");
      os << "detuning,r_re,r_im,t_re,t_im,r0_re,r0_im,t0_re,t0_im\n";
      for (const auto& pt : detuning_scan(p, detuning[0], detuning[1], detuning_steps)) {
        os << num(pt.detuning);
        for (cplx v : {pt.c.r, pt.c.t, pt.c.r0, pt.c.t0})
          os << ',' << num(v.real()) << ',' << num(v.imag());
        os << '\n';
      }
    }
    sink.close();
    return 0;
  }
};

// ---------------------------------------------------------------- run

struct InputOpts {
  std::string a = "R,a1", b = "R,b1";
  std::string a_pol, a_rail, b_pol, b_rail;
  std::string e, e1, e2;

  void add(CLI::App* app, bool hyper_spins) {
    app->add_option("--a", a, "photon a basis state pol,rail (e.g. L,a2)")->capture_default_str();
    app->add_option("--b", b, "photon b basis state pol,rail")->capture_default_str();
    app->add_option("--a-pol", a_pol, "photon a polarization amplitudes re,im,re,im");
    app->add_option("--a-rail", a_rail, "photon a rail amplitudes re,im,re,im");
    app->add_option("--b-pol", b_pol, "photon b polarization amplitudes re,im,re,im");
    app->add_option("--b-rail", b_rail, "photon b rail amplitudes re,im,re,im");
    if (hyper_spins) {
      app->add_option("--e", e, "spin initial state for spatial-cnot (plus, up, down, or amplitudes)");
      app->add_option("--e1", e1, "spin e1 initial state for hyper-cnot");
      app->add_option("--e2", e2, "spin e2 initial state for hyper-cnot");
    }
  }

  PhotonSpec photon(const std::string& id) const {
    PhotonSpec s = parse_basis(id == "a" ? a : b, id);
    const std::string& pol = id == "a" ? a_pol : b_pol;
    const std::string& rail = id == "a" ? a_rail : b_rail;
    if (!pol.empty()) {
      const auto v = parse_amps(pol, 2, "--" + id + "-pol");
      s.pol = {v[0], v[1]};
    }
    if (!rail.empty()) s.rails = parse_amps(rail, 2, "--" + id + "-rail");
    return s;
  }
};

void report_gate(std::ostream& os, const std::string& gate, const GateResult& g,
                 bool lossy, const CavityOpts& cav, bool aux) {
  os << "gate " << gate << "  mode " << (lossy ? "lossy" : "ideal");
  if (lossy) os << " (g/(k+ks)=" << num(cav.g) << " ks/k=" << num(cav.ks) << " gamma/k=" << num(cav.gamma) << ")";
  os << "  measurement " << (aux ? "auxiliary photon" : "direct") << '\n';
  os << "survival " << num(g.survival) << '\n';
  os << "branches " << g.branches.size() << '\n';
  int k = 0;
  for (const auto& b : g.branches) {
    os << "branch " << ++k << "  p=" << num(b.probability);
    for (const auto& o : b.outcomes) os << "  " << o.spin << '=' << to_string(o.value) << " (p=" << num(o.probability) << ')';
    os << '\n';
    os << "  corrections:";
    if (b.corrections.empty()) os << " none";
    for (std::size_t i = 0; i < b.corrections.size(); ++i) os << (i ? "; " : " ") << b.corrections[i];
    os << '\n';
    std::ostringstream amps;
    b.final_state.dump(amps);
    std::istringstream lines(amps.str());
    for (std::string line; std::getline(lines, line);) os << "  " << line << '\n';
  }
}

struct RunCmd {
  std::string gate;
  bool ideal = false, lossy = false;
  CavityOpts cav;
  InputOpts in;
  bool aux = false, trace = false, sample = false;
  std::uint64_t seed = 1;
  std::string out;

  void add(CLI::App* app) {
    app->add_option("gate", gate, "spatial-cnot or hyper-cnot")
        ->required()
        ->check(CLI::IsMember({"spatial-cnot", "hyper-cnot"}));
    auto* i = app->add_flag("--ideal", ideal, "ideal scattering (default)");
    app->add_flag("--lossy", lossy, "lossy scattering from the cavity ratios")->excludes(i);
    cav.add(app);
    in.add(app, true);
    app->add_flag("--aux-measure", aux, "read spins out with an auxiliary photon");
    app->add_flag("--trace", trace, "print one line per circuit element");
    app->add_flag("--sample", sample, "draw a single measurement branch");
    app->add_option("--seed", seed, "seed for --sample")->capture_default_str();
    app->add_option("--out", out, "output path (default stdout)");
  }

  int run() {
    GateOptions o;
    o.mode = cav.mode(lossy);
    o.measure = aux ? MeasureMethod::AuxPhoton : MeasureMethod::Direct;
    SeededSampler sampler(seed);
    if (sample) o.sampler = &sampler;
    const PhotonSpec a = in.photon("a"), b = in.photon("b");
    Sink sink(out);
    std::ostringstream tr;
    if (trace) o.trace = &tr;
    GateResult g;
    if (gate == "spatial-cnot") {
      if (!in.e1.empty() || !in.e2.empty()) throw ValidationError("spatial-cnot takes --e, not --e1/--e2");
      g = spatial_cnot(a, b, parse_spin(in.e, "--e"), o);
    } else {
      if (!in.e.empty()) throw ValidationError("hyper-cnot takes --e1/--e2, not --e");
      g = hyper_cnot(a, b, parse_spin(in.e1, "--e1"), parse_spin(in.e2, "--e2"), o);
    }
    auto& os = sink.os();
    if (trace) os << tr.str();
    report_gate(os, gate, g, lossy, cav, aux);
    sink.close();
    return 0;
  }
};

// ---------------------------------------------------------------- truthtable

struct TruthCmd {
  std::string gate;
  bool ideal = false, lossy = false;
  CavityOpts cav;
  std::string out;

  void add(CLI::App* app) {
    app->add_option("gate", gate, "spatial-cnot or hyper-cnot")
        ->required()
        ->check(CLI::IsMember({"spatial-cnot", "hyper-cnot"}));
    auto* i = app->add_flag("--ideal", ideal, "ideal scattering (default)");
    app->add_flag("--lossy", lossy, "lossy scattering from the cavity ratios")->excludes(i);
    cav.add(app);
    app->add_option("--out", out, "output path (default stdout)");
  }

  int run() {
    GateOptions o;
    o.mode = cav.mode(lossy);
    const bool hyper = gate == "hyper-cnot";
    Sink sink(out);
    auto& os = sink.os();
    os << "a_pol,a_rail,b_pol,b_rail,out_a_pol,out_a_rail,out_b_pol,out_b_rail,p_out,branches,branches_agree,match\n";
    auto pol_s = [](int p) { return p ? "L" : "R"; };
    for (int k = 0; k < 16; ++k) {
      const int pa = k & 1, ra = (k >> 1) & 1, pb = (k >> 2) & 1, rb = (k >> 3) & 1;
      const PhotonSpec a = PhotonSpec::basis(Pol(pa), ra), b = PhotonSpec::basis(Pol(pb), rb);
      const GateResult g = hyper ? hyper_cnot(a, b, SpinSpec::plus(), SpinSpec::plus(), o)
                                 : spatial_cnot(a, b, SpinSpec::plus(), o);
      const int want = hyper ? (pa + 2 * ra + 4 * ((pb ^ pa) + 2 * (rb ^ ra)))
                             : (pa + 2 * ra + 4 * (pb + 2 * (rb ^ ra)));
      // most probable label, weighted over branches
      std::vector<double> p(16, 0.0);
      int first_label = -1;
      bool agree = true;
      Eigen::VectorXcd ref;
      for (const auto& br : g.branches) {
        const Eigen::VectorXcd& v = br.final_state.amps();
        Eigen::Index top = 0;
        v.cwiseAbs().maxCoeff(&top);
        if (first_label < 0) first_label = static_cast<int>(top);
        else if (first_label != static_cast<int>(top)) agree = false;
        const Eigen::VectorXcd al = v * (std::abs(v[top]) / v[top]);
        if (ref.size() == 0) ref = al;
        else if ((al - ref).cwiseAbs().maxCoeff() > 1e-10) agree = false;
        for (int i = 0; i < 16; ++i) p[i] += br.probability * std::norm(v[i]);
      }
      int best = 0;
      for (int i = 1; i < 16; ++i)
        if (p[i] > p[best]) best = i;
      os << pol_s(pa) << ",a" << ra + 1 << ',' << pol_s(pb) << ",b" << rb + 1 << ','
         << pol_s(best & 1) << ",a" << ((best >> 1) & 1) + 1 << ',' << pol_s((best >> 2) & 1)
         << ",b" << ((best >> 3) & 1) + 1 << ',' << num(p[best]) << ',' << g.branches.size() << ','
         << (agree ? "yes" : "no") << ',' << (best == want ? "yes" : "no") << '\n';
    }
    sink.close();
    return 0;
  }
};

// ---------------------------------------------------------------- sweep

struct SweepCmd {
  std::vector<double> g_range{0.0, 3.0}, ks_range{0.0, 1.0};
  int g_steps = 101, ks_steps = 101;
  double gamma = 0.1;
  unsigned threads = 0;
  bool compare_alt = false;
  std::string out;

  void add(CLI::App* app) {
    app->add_option("--g-range", g_range, "lo,hi of g/(kappa+kappa_s)")->delimiter(',')->expected(2)->capture_default_str();
    app->add_option("--g-steps", g_steps, "grid points along g")->capture_default_str();
    app->add_option("--ks-range", ks_range, "lo,hi of kappa_s/kappa")->delimiter(',')->expected(2)->capture_default_str();
    app->add_option("--ks-steps", ks_steps, "grid points along kappa_s")->capture_default_str();
    app->add_option("--gamma", gamma, "gamma/kappa")->capture_default_str();
    app->add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
    app->add_flag("--compare-alt", compare_alt, "report where the alternative fidelity reading differs");
    app->add_option("--out", out, "CSV path (default stdout; summary then goes to stderr)");
  }

  int run() {
    SweepSpec s;
    s.g_lo = g_range[0];
    s.g_hi = g_range[1];
    s.g_steps = g_steps;
    s.ks_lo = ks_range[0];
    s.ks_hi = ks_range[1];
    s.ks_steps = ks_steps;
    s.gamma_over_k = gamma;
    s.threads = threads;
    Sink sink(out);  // fail on an unwritable path before computing
    const auto rows = sweep(s);
    write_metrics_csv(sink.os(), rows);
    sink.close();

    std::ostream& info = sink.is_file() ? std::cout : std::cerr;
    auto range = [&](auto field) {
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& r : rows) {
        lo = std::min(lo, field(r));
        hi = std::max(hi, field(r));
      }
      return "min " + num(lo) + " max " + num(hi);
    };
    info << "rows " << rows.size() << " (" << g_steps << " x " << ks_steps << ")\n";
    info << "F_closed   " << range([](const MetricsRow& r) { return r.F_closed; }) << '\n';
    info << "eta_closed " << range([](const MetricsRow& r) { return r.eta_closed; }) << '\n';
    info << "F_sim      " << range([](const MetricsRow& r) { return r.F_sim; }) << '\n';
    info << "eta_sim    " << range([](const MetricsRow& r) { return r.eta_sim; }) << '\n';
    if (compare_alt) {
      std::size_t differ = 0;
      double worst = 0.0;
      const MetricsRow* at = nullptr;
      for (const auto& r : rows) {
        const double d = std::abs(r.F_closed - r.F_closed_alt);
        if (d > 1e-6) ++differ;
        if (d > worst) {
          worst = d;
          at = &r;
        }
      }
      info << "alternative xi2 reading: " << differ << " points differ by more than 1e-6";
      if (at)
        info << "; largest " << num(worst) << " at g/(k+ks)=" << num(at->g_over_kks)
             << " ks/k=" << num(at->ks_over_k) << " (verbatim " << num(at->F_closed)
             << ", alternative " << num(at->F_closed_alt) << ")";
      info << '\n';
    }
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyper-parallel photon/QD-spin gate simulator"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all", "show help for every command");
  app.add_option("--config", "flat key=value file with the same keys as the flags");

  CoeffsCmd coeffs_cmd;
  RunCmd run_cmd;
  TruthCmd truth_cmd;
  SweepCmd sweep_cmd;
  auto* c = app.add_subcommand("coeffs", "cavity reflection/transmission coefficients");
  c->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  coeffs_cmd.add(c);
  auto* r = app.add_subcommand("run", "run one gate and report every branch");
  r->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  run_cmd.add(r);
  auto* t = app.add_subcommand("truthtable", "enumerate the computational basis inputs");
  t->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  truth_cmd.add(t);
  auto* s = app.add_subcommand("sweep", "fidelity/efficiency over the coupling/leakage grid");
  s->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  sweep_cmd.add(s);
  auto* v = app.add_subcommand("verify", "run the acceptance suite");

  try {
    auto args = with_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*c) return coeffs_cmd.run();
    if (*r) return run_cmd.run();
    if (*t) return truth_cmd.run();
    if (*s) return sweep_cmd.run();
    if (*v) {
      const auto report = run_acceptance();
      print_report(std::cout, report);
      return report.all_pass() ? 0 : kExitVerify;
    }
  } catch (const UnwritablePath& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnwritable;
  } catch (const ConfigurationError& e) {
    std::cerr << "internal contract violation: " << e.what() << '\n';
    return kExitContract;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
