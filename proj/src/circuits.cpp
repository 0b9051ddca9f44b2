#include "hyperqd/circuits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>

#include "hyperqd/errors.hpp"

namespace hyperqd {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Sub-branches lighter than this fraction of their parent are exact zeros
// up to round-off and are discarded.
constexpr double kBranchCut = 1e-24;

Eigen::MatrixXcd hadamard2() {
  Eigen::MatrixXcd h(2, 2);
  h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  return h;
}

Eigen::MatrixXcd diag2(double a, double b) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// 4x4 on pol + 2*pos for two rails.
Eigen::MatrixXcd beam_splitter4() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  for (int p = 0; p < 2; ++p) {
    m(p, p) = kInvSqrt2;
    m(p + 2, p) = kInvSqrt2;
    m(p, p + 2) = kInvSqrt2;
    m(p + 2, p + 2) = -kInvSqrt2;
  }
  return m;
}

Eigen::MatrixXcd cpbs4() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 1.0;  // R, first rail
  m(2, 2) = 1.0;  // R, second rail
  m(3, 1) = 1.0;  // L swaps
  m(1, 3) = 1.0;
  return m;
}

std::string rail_label(const std::string& photon, int rail) {
  return photon + std::to_string(rail + 1);
}

const char* arrow(Spin s) { return s == Spin::Up ? "up" : "down"; }

// ---------------------------------------------------------------- executor

struct Live {
  StateVector state;
  std::vector<Outcome> outcomes;
  std::vector<std::string> corrections;
};

const Outcome* find_outcome(const Live& b, const std::string& spin) {
  for (auto it = b.outcomes.rbegin(); it != b.outcomes.rend(); ++it)
    if (it->spin == spin) return &*it;
  return nullptr;
}

// Keeps the non-negligible candidates, or one of them drawn by weight. The
// drawn branch is rescaled so its squared norm keeps the parent's mass.
void select(std::vector<Live>& out, std::vector<Live> cands, double parent,
            SeededSampler* sampler) {
  std::vector<double> w;
  double total = 0.0;
  for (const auto& c : cands) {
    w.push_back(c.state.squared_norm());
    total += w.back();
  }
  if (!sampler) {
    for (std::size_t k = 0; k < cands.size(); ++k)
      if (w[k] > kBranchCut * parent) out.push_back(std::move(cands[k]));
    return;
  }
  if (!(total > 0.0)) throw ZeroNormError("all measurement branches vanish");
  const double u = sampler->uniform() * total;
  double acc = 0.0;
  std::size_t pick = cands.size() - 1;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    acc += w[k];
    if (u < acc && w[k] > 0.0) {
      pick = k;
      break;
    }
  }
  while (!(w[pick] > 0.0)) --pick;
  cands[pick].state.amps() *= std::sqrt(parent / w[pick]);
  out.push_back(std::move(cands[pick]));
}

constexpr const char* kAuxId = "aux";

// Aux-photon readout of one branch: four (detector, polarization) outcomes.
std::vector<Live> aux_readout(const Live& b, const MeasureSpin& m) {
  const StateVector s = aux_photon_scatter(b.state, m.spin, m.aux_mode);
  const double before = b.state.squared_norm();
  std::vector<Live> out;
  for (int rail : {1, 0}) {
    for (int pol = 0; pol < 2; ++pol) {
      Eigen::VectorXcd proj = Eigen::VectorXcd::Zero(4);
      proj[pol + 2 * rail] = 1.0;
      Live c{drop_photon(s, kAuxId, proj), b.outcomes, b.corrections};
      const double p = before > 0.0 ? c.state.squared_norm() / before : 0.0;
      c.outcomes.push_back({m.spin, rail == 1 ? Spin::Up : Spin::Down, p});
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

StateVector aux_photon_scatter(const StateVector& state, const std::string& spin,
                               const ScatterMode& mode) {
  if (state.layout().has_photon(kAuxId))
    throw ValidationError("layout already holds an auxiliary photon");
  StateVector s = append_photon(state, PhotonSlot{kAuxId, 2}, PhotonSpec::basis(Pol::R, 0));
  apply_element(s, QdScatter{kAuxId, 0, 1, spin, mode});
  return s;
}

const char* to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Spatial: return "spatial";
    case BlockKind::Polarization: return "polarization";
    case BlockKind::Mode2: return "mode2";
  }
  return "?";
}

std::string describe(const CircuitElement& e) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BeamSplitter>)
          return "BS " + rail_label(x.photon, x.rail_i) + "," + rail_label(x.photon, x.rail_j);
        else if constexpr (std::is_same_v<T, Cpbs>)
          return "CPBS " + rail_label(x.photon, x.rail_i) + "," + rail_label(x.photon, x.rail_j);
        else if constexpr (std::is_same_v<T, PlateX>)
          return "X " + rail_label(x.photon, x.rail);
        else if constexpr (std::is_same_v<T, PlateZ>)
          return "Z " + rail_label(x.photon, x.rail);
        else if constexpr (std::is_same_v<T, PlateU>)
          return "U " + rail_label(x.photon, x.rail);
        else if constexpr (std::is_same_v<T, PolHadamard>)
          return "Hpol " + x.photon;
        else if constexpr (std::is_same_v<T, QdScatter>)
          return "QD " + x.spin + " i1=" + rail_label(x.photon, x.port1_rail) +
                 " i2=" + rail_label(x.photon, x.port2_rail) +
                 (x.mode.is_ideal() ? " ideal" : " lossy");
        else if constexpr (std::is_same_v<T, SpinHadamard>)
          return "H " + x.spin;
        else if constexpr (std::is_same_v<T, SpinPhaseFlip>)
          return "Zspin " + x.spin;
        else if constexpr (std::is_same_v<T, MeasureSpin>)
          return "measure " + x.spin +
                 (x.method == MeasureMethod::AuxPhoton ? " (aux photon)" : "");
        else if constexpr (std::is_same_v<T, CondPolSign>)
          return std::string("sign ") + to_string(x.pol) + "_" + x.photon + " if " +
                 x.spin + "=" + arrow(x.when);
        else if constexpr (std::is_same_v<T, CondRailSign>)
          return "sign " + rail_label(x.photon, x.rail) + " if " + x.spin + "=" +
                 arrow(x.when);
        else
          return "stage " + x.label;
      },
      e);
}

void apply_element(StateVector& s, const CircuitElement& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          apply_local(s, ModesAddr{x.photon, {x.rail_i, x.rail_j}}, beam_splitter4());
        } else if constexpr (std::is_same_v<T, Cpbs>) {
          apply_local(s, ModesAddr{x.photon, {x.rail_i, x.rail_j}}, cpbs4());
        } else if constexpr (std::is_same_v<T, PlateX>) {
          Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
          m(0, 1) = m(1, 0) = 1.0;
          apply_local(s, PolAddr{x.photon, x.rail}, m);
        } else if constexpr (std::is_same_v<T, PlateZ>) {
          apply_local(s, PolAddr{x.photon, x.rail}, diag2(-1.0, 1.0));
        } else if constexpr (std::is_same_v<T, PlateU>) {
          apply_local(s, PolAddr{x.photon, x.rail}, diag2(-1.0, -1.0));
        } else if constexpr (std::is_same_v<T, PolHadamard>) {
          apply_local(s, PolAddr{x.photon, -1}, hadamard2());
        } else if constexpr (std::is_same_v<T, QdScatter>) {
          const Eigen::MatrixXcd m = scatter_operator(x.mode).template cast<cplx>();
          apply_local(s, ScatterAddr{x.photon, x.port1_rail, x.port2_rail, x.spin}, m);
        } else if constexpr (std::is_same_v<T, SpinHadamard>) {
          apply_local(s, SpinAddr{x.spin}, hadamard2());
        } else if constexpr (std::is_same_v<T, SpinPhaseFlip>) {
          apply_local(s, SpinAddr{x.spin}, diag2(1.0, -1.0));
        } else {
          throw ValidationError("'" + describe(e) + "' is not a local operation");
        }
      },
      e);
}

ExecResult execute(const Circuit& c, const StateVector& input,
                   const ExecOptions& opts) {
  ExecResult res;
  std::vector<Live> live;
  live.push_back({input, {}, {}});
  char buf[160];
  std::size_t step = 0;

  for (const auto& e : c) {
    if (const auto* m = std::get_if<MeasureSpin>(&e)) {
      std::vector<Live> next;
      for (auto& b : live) {
        const double parent = b.state.squared_norm();
        std::vector<Live> cands;
        if (m->method == MeasureMethod::Direct) {
          for (Spin v : {Spin::Up, Spin::Down}) {
            Live cb{drop_spin(b.state, m->spin, v), b.outcomes, b.corrections};
            const double p = parent > 0.0 ? cb.state.squared_norm() / parent : 0.0;
            cb.outcomes.push_back({m->spin, v, p});
            cands.push_back(std::move(cb));
          }
        } else {
          cands = aux_readout(b, *m);
        }
        select(next, std::move(cands), parent, opts.sampler);
      }
      live = std::move(next);
    } else if (const auto* cp = std::get_if<CondPolSign>(&e)) {
      for (auto& b : live) {
        const Outcome* o = find_outcome(b, cp->spin);
        if (!o) throw ConfigurationError("conditional sign on unmeasured spin '" + cp->spin + "'");
        if (o->value != cp->when) continue;
        const double a = cp->pol == Pol::R ? -1.0 : 1.0;
        apply_local(b.state, PolAddr{cp->photon, -1}, diag2(a, -a));
        b.corrections.push_back(describe(e));
      }
    } else if (const auto* cr = std::get_if<CondRailSign>(&e)) {
      for (auto& b : live) {
        const Outcome* o = find_outcome(b, cr->spin);
        if (!o) throw ConfigurationError("conditional sign on unmeasured spin '" + cr->spin + "'");
        if (o->value != cr->when) continue;
        const auto& lay = b.state.layout();
        const int rails = lay.photons()[lay.photon_index(cr->photon)].rails;
        if (cr->rail < 0 || cr->rail >= rails) throw ValidationError("rail out of range");
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(rails, rails);
        d(cr->rail, cr->rail) = -1.0;
        apply_local(b.state, RailAddr{cr->photon}, d);
        b.corrections.push_back(describe(e));
      }
    } else if (const auto* st = std::get_if<Stage>(&e)) {
      if (live.size() == 1) res.stages.emplace_back(st->label, live.front().state);
    } else {
      for (auto& b : live) apply_element(b.state, e);
    }

    if (opts.trace) {
      double sq = 0.0;
      for (const auto& b : live) sq += b.state.squared_norm();
      std::snprintf(buf, sizeof buf, "%3zu  %-34s  norm2=%.12f  branches=%zu\n",
                    step, describe(e).c_str(), sq, live.size());
      *opts.trace << buf;
    }
    ++step;
  }

  // Trace out whatever spins remain.
  for (auto& b : live) {
    std::vector<Live> cur{std::move(b)};
    while (!cur.front().state.layout().spins().empty()) {
      const std::string id = cur.front().state.layout().spins().front();
      std::vector<Live> next;
      for (auto& x : cur) {
        const double parent = x.state.squared_norm();
        std::vector<Live> cands;
        for (Spin v : {Spin::Up, Spin::Down})
          cands.push_back({drop_spin(x.state, id, v), x.outcomes, x.corrections});
        select(next, std::move(cands), parent, opts.sampler);
      }
      cur = std::move(next);
    }
    for (auto& x : cur)
      res.branches.push_back({std::move(x.state), std::move(x.outcomes), std::move(x.corrections)});
  }
  return res;
}

// ---------------------------------------------------------------- blocks

namespace {

struct Wiring {
  std::vector<CircuitElement> pre;
  int port1_rail;
  int port2_rail;
  std::vector<CircuitElement> post;
};

// Rails 0/1 are a1/a2. Elements carry an empty photon id, filled per use.
Wiring wiring_for(BlockKind kind) {
  switch (kind) {
    case BlockKind::Spatial:
      return {{PlateX{"", 1}}, 0, 1,
              {PlateX{"", 0}, PlateU{"", 0}, Cpbs{"", 0, 1}, PlateU{"", 0}}};
    case BlockKind::Polarization:
      return {{Cpbs{"", 0, 1}, PlateU{"", 0}}, 1, 0,
              {PlateU{"", 0}, Cpbs{"", 0, 1}}};
    case BlockKind::Mode2:
      return {{}, 1, 0,
              {PlateX{"", 0}, PlateU{"", 0}, Cpbs{"", 0, 1}, PlateU{"", 0}}};
  }
  throw ConfigurationError("unknown block kind");
}

CircuitElement bind(CircuitElement e, const std::string& photon) {
  std::visit(
      [&](auto& x) {
        if constexpr (requires { x.photon; }) x.photon = photon;
      },
      e);
  return e;
}

Circuit assemble(BlockKind kind, const std::string& photon,
                 const std::string& spin, const ScatterMode& mode) {
  const Wiring w = wiring_for(kind);
  Circuit c;
  for (const auto& e : w.pre) c.push_back(bind(e, photon));
  c.push_back(QdScatter{photon, w.port1_rail, w.port2_rail, spin, mode});
  for (const auto& e : w.post) c.push_back(bind(e, photon));
  return c;
}

Eigen::MatrixXcd operator_of(const Circuit& c, const std::string& photon,
                             const std::string& spin) {
  const SystemLayout lay({PhotonSlot{photon, 2}}, {spin});
  Eigen::MatrixXcd m(8, 8);
  for (int j = 0; j < 8; ++j) {
    StateVector s(lay);
    s[static_cast<std::size_t>(j)] = 1.0;
    for (const auto& e : c) apply_element(s, e);
    m.col(j) = s.amps();
  }
  return m;
}

void check_contract(BlockKind kind) {
  static std::array<std::once_flag, 3> once;
  std::call_once(once[static_cast<int>(kind)], [kind] {
    const auto m = operator_of(assemble(kind, "p", "s", ScatterMode::ideal()), "p", "s");
    if ((m - block_contract(kind)).cwiseAbs().maxCoeff() > 1e-12)
      throw ConfigurationError(std::string(to_string(kind)) +
                               " block wiring does not realize its ideal contract");
  });
}

}  // namespace

Eigen::MatrixXcd block_contract(BlockKind kind) {
  // 4x4 photon maps on pol + 2*rail
  auto photon_map = [](auto f) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    for (int rail = 0; rail < 2; ++rail)
      for (int pol = 0; pol < 2; ++pol) {
        const auto [p2, r2, c] = f(pol, rail);
        m(p2 + 2 * r2, pol + 2 * rail) = c;
      }
    return m;
  };
  struct Img {
    int pol, rail;
    double c;
  };
  Eigen::MatrixXcd up, dn;
  switch (kind) {
    case BlockKind::Spatial:
      up = photon_map([](int p, int r) { return Img{p, 1 - r, -1.0}; });
      dn = photon_map([](int p, int r) { return Img{p, r, 1.0}; });
      break;
    case BlockKind::Polarization:
      up = photon_map([](int p, int r) { return Img{r == 0 ? 1 - p : p, 1 - r, 1.0}; });
      dn = photon_map([](int p, int r) { return Img{r == 1 ? 1 - p : p, 1 - r, 1.0}; });
      break;
    case BlockKind::Mode2:
      up = photon_map([](int p, int r) { return Img{r == 1 ? 1 - p : p, r, 1.0}; });
      dn = photon_map([](int p, int r) { return Img{r == 1 ? 1 - p : p, 1 - r, -1.0}; });
      break;
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
  m.topLeftCorner(4, 4) = up;
  m.bottomRightCorner(4, 4) = dn;
  return m;
}

Circuit block_circuit(BlockKind kind, const std::string& photon,
                      const std::string& spin, const ScatterMode& mode) {
  check_contract(kind);
  return assemble(kind, photon, spin, mode);
}

Eigen::MatrixXcd block_operator(BlockKind kind, const ScatterMode& mode) {
  return operator_of(block_circuit(kind, "p", "s", mode), "p", "s");
}

namespace {
StateVector run_block(BlockKind k, StateVector s, const std::string& photon,
                      const std::string& spin, const ScatterMode& mode) {
  for (const auto& e : block_circuit(k, photon, spin, mode)) apply_element(s, e);
  return s;
}
}  // namespace

StateVector block_spatial(StateVector s, const std::string& photon,
                          const std::string& spin, const ScatterMode& mode) {
  return run_block(BlockKind::Spatial, std::move(s), photon, spin, mode);
}
StateVector block_pol(StateVector s, const std::string& photon,
                      const std::string& spin, const ScatterMode& mode) {
  return run_block(BlockKind::Polarization, std::move(s), photon, spin, mode);
}
StateVector block_mode2(StateVector s, const std::string& photon,
                        const std::string& spin, const ScatterMode& mode) {
  return run_block(BlockKind::Mode2, std::move(s), photon, spin, mode);
}

// ---------------------------------------------------------------- gates

namespace {
void append(Circuit& c, const Circuit& more) { c.insert(c.end(), more.begin(), more.end()); }

MeasureSpin measure(const std::string& spin, MeasureMethod m, const ScatterMode& mode) {
  return MeasureSpin{spin, m, m == MeasureMethod::AuxPhoton ? mode : ScatterMode::ideal()};
}
}  // namespace

Circuit spatial_cnot_circuit(const ScatterMode& mode, MeasureMethod m) {
  Circuit c;
  c.push_back(BeamSplitter{"a", 0, 1});
  append(c, block_circuit(BlockKind::Spatial, "a", "e", mode));
  c.push_back(Stage{kStageControlBlock});
  c.push_back(SpinHadamard{"e"});
  c.push_back(SpinPhaseFlip{"e"});
  append(c, block_circuit(BlockKind::Spatial, "b", "e", mode));
  c.push_back(Stage{kStageTargetBlock});
  c.push_back(BeamSplitter{"a", 0, 1});
  c.push_back(SpinHadamard{"e"});
  c.push_back(Stage{kStagePreMeasure});
  c.push_back(measure("e", m, mode));
  c.push_back(CondRailSign{"a", 1, "e", Spin::Up});
  return c;
}

Circuit hyper_cnot_circuit(const ScatterMode& mode, MeasureMethod m) {
  Circuit c;
  c.push_back(PolHadamard{"a"});
  c.push_back(BeamSplitter{"a", 0, 1});
  append(c, block_circuit(BlockKind::Polarization, "a", "e1", mode));
  c.push_back(Stage{kStagePolBlock});
  append(c, block_circuit(BlockKind::Mode2, "a", "e2", mode));
  c.push_back(Stage{kStageModeBlock});
  c.push_back(SpinHadamard{"e1"});
  c.push_back(SpinHadamard{"e2"});
  c.push_back(SpinPhaseFlip{"e2"});
  append(c, block_circuit(BlockKind::Polarization, "b", "e1", mode));
  append(c, block_circuit(BlockKind::Mode2, "b", "e2", mode));
  c.push_back(Stage{kStageTargetBlocks});
  c.push_back(PolHadamard{"a"});
  c.push_back(BeamSplitter{"a", 0, 1});
  c.push_back(SpinHadamard{"e1"});
  c.push_back(SpinHadamard{"e2"});
  c.push_back(Stage{kStagePreMeasure});
  c.push_back(measure("e1", m, mode));
  c.push_back(measure("e2", m, mode));
  c.push_back(CondPolSign{"a", Pol::L, "e1", Spin::Down});
  c.push_back(CondRailSign{"a", 1, "e2", Spin::Up});
  return c;
}

const StateVector* GateResult::stage(std::string_view label) const {
  for (const auto& [l, s] : stages)
    if (l == label) return &s;
  return nullptr;
}

GateResult run_gate(const Circuit& c, const StateVector& input,
                    const GateOptions& opts) {
  ExecResult ex = execute(c, input, ExecOptions{opts.trace, opts.sampler});
  GateResult g;
  g.stages = std::move(ex.stages);
  for (const auto& b : ex.branches) g.survival += b.state.squared_norm();
  for (auto& b : ex.branches) {
    GateBranch gb;
    gb.weight = b.state.squared_norm();
    gb.probability = g.survival > 0.0 ? gb.weight / g.survival : 0.0;
    gb.final_state = gb.weight > 0.0 ? b.state.normalized() : b.state;
    gb.outcomes = std::move(b.outcomes);
    gb.corrections = std::move(b.corrections);
    g.branches.push_back(std::move(gb));
  }
  return g;
}

GateResult spatial_cnot(const PhotonSpec& a, const PhotonSpec& b,
                        const SpinSpec& e, const GateOptions& opts) {
  const SystemLayout lay({PhotonSlot{"a", 2}, PhotonSlot{"b", 2}}, {"e"});
  return run_gate(spatial_cnot_circuit(opts.mode, opts.measure),
                  product_state(lay, {a, b}, {e}), opts);
}

GateResult hyper_cnot(const PhotonSpec& a, const PhotonSpec& b,
                      const SpinSpec& e1, const SpinSpec& e2,
                      const GateOptions& opts) {
  const SystemLayout lay({PhotonSlot{"a", 2}, PhotonSlot{"b", 2}}, {"e1", "e2"});
  return run_gate(hyper_cnot_circuit(opts.mode, opts.measure),
                  product_state(lay, {a, b}, {e1, e2}), opts);
}

// ---------------------------------------------------------------- spin tools

std::vector<AuxReading> measure_spin_via_aux_photon_branches(
    const StateVector& state, const std::string& spin, const ScatterMode& mode) {
  if (!(state.squared_norm() > 0.0)) throw ZeroNormError("cannot measure a zero-norm state");
  state.layout().spin_index(spin);
  Live b{state, {}, {}};
  auto cands = aux_readout(b, MeasureSpin{spin, MeasureMethod::AuxPhoton, mode});
  std::vector<AuxReading> out;
  int k = 0;
  for (auto& c : cands) {
    const Pol pol = (k++ % 2) ? Pol::L : Pol::R;
    const double p = c.outcomes.back().probability;
    if (!(p > kBranchCut)) continue;
    out.push_back({c.outcomes.back().value, pol, p, c.state.normalized()});
  }
  return out;
}

AuxReading measure_spin_via_aux_photon(const StateVector& state,
                                       const std::string& spin,
                                       const ScatterMode& mode,
                                       SeededSampler& sampler) {
  auto br = measure_spin_via_aux_photon_branches(state, spin, mode);
  if (br.empty()) throw ZeroNormError("every auxiliary-photon outcome vanishes");
  double total = 0.0;
  for (const auto& b : br) total += b.probability;
  const double u = sampler.uniform() * total;
  double acc = 0.0;
  for (auto& b : br) {
    acc += b.probability;
    if (u < acc) return std::move(b);
  }
  return std::move(br.back());
}

namespace {
constexpr const char* kProbeId = "probe";
}

StateVector spin_echo_composite(const StateVector& state, const std::string& spin) {
  if (state.layout().has_photon(kProbeId))
    throw ValidationError("layout already holds a probe photon");
  PhotonSpec probe;
  probe.pol = {kInvSqrt2, kInvSqrt2};
  probe.rails = {1.0, 0.0};
  StateVector s = append_photon(state, PhotonSlot{kProbeId, 2}, probe);
  apply_element(s, Cpbs{kProbeId, 0, 1});
  apply_element(s, QdScatter{kProbeId, 1, 0, spin, ScatterMode::ideal()});
  apply_element(s, Cpbs{kProbeId, 0, 1});
  return s;
}

StateVector spin_echo_pulse(const StateVector& state, const std::string& spin) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(4);
  out[2] = kInvSqrt2;  // R, i2
  out[3] = kInvSqrt2;  // L, i2
  return drop_photon(spin_echo_composite(state, spin), kProbeId, out);
}

}  // namespace hyperqd
