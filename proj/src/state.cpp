#include "hyperqd/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hyperqd/errors.hpp"

namespace hyperqd {
namespace {

constexpr double kFactorTol = 1e-9;

void check_normalized(double sq, const std::string& what) {
  if (!std::isfinite(sq) || std::abs(sq - 1.0) > kFactorTol)
    throw ValidationError(what + " is not normalized (|.|^2 = " +
                          std::to_string(sq) + ")");
}

// Digit vector in layout order: photons first, then spins.
std::vector<int> decompose(const SystemLayout& l, std::size_t i) {
  const auto np = l.photons().size();
  std::vector<int> d(np + l.spins().size());
  for (std::size_t p = 0; p < np; ++p) d[p] = l.photon_digit(i, static_cast<int>(p));
  for (std::size_t s = 0; s < l.spins().size(); ++s)
    d[np + s] = static_cast<int>(l.spin_digit(i, static_cast<int>(s)));
  return d;
}

std::size_t compose(const SystemLayout& l, const std::vector<int>& d) {
  const auto np = l.photons().size();
  std::size_t i = 0;
  for (std::size_t p = 0; p < np; ++p)
    i += static_cast<std::size_t>(d[p]) * l.photon_stride(static_cast<int>(p));
  for (std::size_t s = 0; s < l.spins().size(); ++s)
    i += static_cast<std::size_t>(d[np + s]) * l.spin_stride(static_cast<int>(s));
  return i;
}

// Gather/scatter plan for one addressed factor: `local(i)` gives the local
// index of amplitude i (or -1 when untouched) and `offset[k]` the absolute
// contribution of local state k.
struct Plan {
  std::vector<std::size_t> offset;
  std::vector<int> local;
};

Plan plan_for(const SystemLayout& l, const Address& addr) {
  Plan plan;
  const std::size_t dim = l.dimension();
  plan.local.assign(dim, -1);

  auto check_rail = [&](int photon, int rail) {
    if (rail < 0 || rail >= l.photons()[photon].rails)
      throw ValidationError("rail " + std::to_string(rail) +
                            " out of range for photon '" +
                            l.photons()[photon].id + "'");
  };

  std::visit(
      [&](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, PolAddr>) {
          const int p = l.photon_index(a.photon);
          if (a.rail >= 0) check_rail(p, a.rail);
          const std::size_t st = l.photon_stride(p);
          // with rail < 0 the rail digit rides along in the base index
          const auto base = static_cast<std::size_t>(a.rail >= 0 ? 2 * a.rail : 0);
          plan.offset = {base * st, (base + 1) * st};
          for (std::size_t i = 0; i < dim; ++i) {
            const int d = l.photon_digit(i, p);
            if (a.rail < 0 || (d >> 1) == a.rail) plan.local[i] = d & 1;
          }
        } else if constexpr (std::is_same_v<A, RailAddr>) {
          const int p = l.photon_index(a.photon);
          const std::size_t st = l.photon_stride(p);
          const int rails = l.photons()[p].rails;
          for (int k = 0; k < rails; ++k)
            plan.offset.push_back(static_cast<std::size_t>(2 * k) * st);
          for (std::size_t i = 0; i < dim; ++i)
            plan.local[i] = l.photon_digit(i, p) >> 1;
        } else if constexpr (std::is_same_v<A, SpinAddr>) {
          const int s = l.spin_index(a.spin);
          const std::size_t st = l.spin_stride(s);
          plan.offset = {0, st};
          for (std::size_t i = 0; i < dim; ++i)
            plan.local[i] = static_cast<int>(l.spin_digit(i, s));
        } else if constexpr (std::is_same_v<A, ModesAddr>) {
          const int p = l.photon_index(a.photon);
          if (a.rails.empty()) throw ValidationError("empty rail list");
          std::vector<int> pos(static_cast<std::size_t>(l.photons()[p].rails), -1);
          for (std::size_t k = 0; k < a.rails.size(); ++k) {
            check_rail(p, a.rails[k]);
            if (pos[a.rails[k]] >= 0) throw ValidationError("repeated rail in address");
            pos[a.rails[k]] = static_cast<int>(k);
          }
          const std::size_t st = l.photon_stride(p);
          for (std::size_t k = 0; k < 2 * a.rails.size(); ++k)
            plan.offset.push_back(((k & 1) + 2 * a.rails[k >> 1]) * st);
          for (std::size_t i = 0; i < dim; ++i) {
            const int d = l.photon_digit(i, p);
            const int q = pos[d >> 1];
            if (q >= 0) plan.local[i] = (d & 1) + 2 * q;
          }
        } else if constexpr (std::is_same_v<A, ScatterAddr>) {
          const int p = l.photon_index(a.photon);
          const int s = l.spin_index(a.spin);
          check_rail(p, a.port1_rail);
          check_rail(p, a.port2_rail);
          if (a.port1_rail == a.port2_rail)
            throw ValidationError("scatter ports must use distinct rails");
          const std::size_t pst = l.photon_stride(p);
          const std::size_t sst = l.spin_stride(s);
          const int ports[2] = {a.port1_rail, a.port2_rail};
          for (int k = 0; k < 8; ++k) {
            const int pol = k & 1, port = (k >> 1) & 1, spin = k >> 2;
            plan.offset.push_back(
                static_cast<std::size_t>(pol + 2 * ports[port]) * pst +
                static_cast<std::size_t>(spin) * sst);
          }
          for (std::size_t i = 0; i < dim; ++i) {
            const int d = l.photon_digit(i, p);
            const int rail = d >> 1;
            const int port = rail == a.port1_rail ? 0 : rail == a.port2_rail ? 1 : -1;
            if (port >= 0)
              plan.local[i] = (d & 1) + 2 * port + 4 * static_cast<int>(l.spin_digit(i, s));
          }
        }
      },
      addr);
  return plan;
}

}  // namespace

const char* to_string(Pol p) { return p == Pol::R ? "R" : "L"; }
const char* to_string(Spin s) { return s == Spin::Up ? "up" : "down"; }

// ---------------------------------------------------------------- layout

SystemLayout::SystemLayout(std::vector<PhotonSlot> photons,
                           std::vector<std::string> spins, std::size_t cap)
    : photons_(std::move(photons)), spins_(std::move(spins)), cap_(cap) {
  std::vector<std::string> seen;
  auto unique = [&](const std::string& id) {
    if (id.empty()) throw ValidationError("subsystem ids must be non-empty");
    if (std::find(seen.begin(), seen.end(), id) != seen.end())
      throw ValidationError("duplicate subsystem id '" + id + "'");
    seen.push_back(id);
  };
  dim_ = 1;
  for (const auto& ph : photons_) {
    unique(ph.id);
    if (ph.rails < 2) throw ValidationError("photon '" + ph.id + "' needs >= 2 rails");
    photon_strides_.push_back(dim_);
    const auto local = static_cast<std::size_t>(2 * ph.rails);
    if (dim_ > cap_ / local) throw ValidationError("state dimension exceeds cap");
    dim_ *= local;
  }
  for (const auto& s : spins_) {
    unique(s);
    spin_strides_.push_back(dim_);
    if (dim_ > cap_ / 2) throw ValidationError("state dimension exceeds cap");
    dim_ *= 2;
  }
}

int SystemLayout::photon_index(std::string_view id) const {
  for (std::size_t i = 0; i < photons_.size(); ++i)
    if (photons_[i].id == id) return static_cast<int>(i);
  throw ValidationError("unknown photon '" + std::string(id) + "'");
}

int SystemLayout::spin_index(std::string_view id) const {
  for (std::size_t i = 0; i < spins_.size(); ++i)
    if (spins_[i] == id) return static_cast<int>(i);
  throw ValidationError("unknown spin '" + std::string(id) + "'");
}

bool SystemLayout::has_photon(std::string_view id) const {
  return std::any_of(photons_.begin(), photons_.end(),
                     [&](const PhotonSlot& p) { return p.id == id; });
}

bool SystemLayout::has_spin(std::string_view id) const {
  return std::find(spins_.begin(), spins_.end(), id) != spins_.end();
}

int SystemLayout::photon_digit(std::size_t index, int photon) const {
  return static_cast<int>((index / photon_strides_[photon]) %
                          static_cast<std::size_t>(local_dim(photon)));
}

Spin SystemLayout::spin_digit(std::size_t index, int spin) const {
  return ((index / spin_strides_[spin]) & 1U) ? Spin::Down : Spin::Up;
}

SystemLayout SystemLayout::with_photon(PhotonSlot slot) const {
  auto ph = photons_;
  ph.push_back(std::move(slot));
  return SystemLayout(std::move(ph), spins_, cap_);
}

SystemLayout SystemLayout::without_photon(std::string_view id) const {
  auto ph = photons_;
  ph.erase(ph.begin() + photon_index(id));
  return SystemLayout(std::move(ph), spins_, cap_);
}

SystemLayout SystemLayout::without_spin(std::string_view id) const {
  auto sp = spins_;
  sp.erase(sp.begin() + spin_index(id));
  return SystemLayout(photons_, std::move(sp), cap_);
}

// ---------------------------------------------------------------- state

StateVector::StateVector(SystemLayout layout)
    : layout_(std::move(layout)),
      amps_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout_.dimension()))) {}

StateVector::StateVector(SystemLayout layout, Eigen::VectorXcd amps)
    : layout_(std::move(layout)), amps_(std::move(amps)) {
  if (static_cast<std::size_t>(amps_.size()) != layout_.dimension())
    throw ValidationError("amplitude vector length does not match layout");
}

StateVector StateVector::normalized() const {
  const double n = amps_.norm();
  if (!(n > 0.0)) throw ZeroNormError("cannot normalize a zero state");
  return StateVector(layout_, amps_ / n);
}

std::size_t StateVector::index_of(const std::vector<PhotonValue>& photons,
                                  const std::vector<Spin>& spins) const {
  const auto& l = layout_;
  if (photons.size() != l.photons().size() || spins.size() != l.spins().size())
    throw ValidationError("basis label does not match layout");
  std::vector<int> d;
  for (std::size_t p = 0; p < photons.size(); ++p) {
    if (photons[p].rail < 0 || photons[p].rail >= l.photons()[p].rails)
      throw ValidationError("rail out of range in basis label");
    d.push_back(static_cast<int>(photons[p].pol) + 2 * photons[p].rail);
  }
  for (Spin s : spins) d.push_back(static_cast<int>(s));
  return compose(l, d);
}

void StateVector::dump(std::ostream& os, double threshold) const {
  const auto np = layout_.photons().size();
  char buf[64];
  for (std::size_t i = 0; i < dimension(); ++i) {
    const cplx a = (*this)[i];
    if (std::abs(a) < threshold) continue;
    const auto d = decompose(layout_, i);
    os << "|";
    for (std::size_t p = 0; p < np; ++p) {
      if (p) os << ' ';
      os << ((d[p] & 1) ? 'L' : 'R') << ' ' << layout_.photons()[p].id
         << (d[p] >> 1) + 1;
    }
    for (std::size_t s = np; s < d.size(); ++s)
      os << (s ? " " : "") << (d[s] ? "↓" : "↑");
    std::snprintf(buf, sizeof buf, "⟩ %.12g %.12g", a.real() + 0.0, a.imag() + 0.0);
    os << buf << '\n';
  }
}

// ---------------------------------------------------------------- construction

PhotonSpec PhotonSpec::basis(Pol p, int rail, int rail_count) {
  PhotonSpec s;
  s.pol = p == Pol::R ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
  s.rails.assign(static_cast<std::size_t>(rail_count), 0.0);
  if (rail < 0 || rail >= rail_count) throw ValidationError("rail out of range");
  s.rails[static_cast<std::size_t>(rail)] = 1.0;
  return s;
}

SpinSpec SpinSpec::basis(Spin s) {
  return s == Spin::Up ? SpinSpec{{1.0, 0.0}} : SpinSpec{{0.0, 1.0}};
}

SpinSpec SpinSpec::plus() {
  const double h = 1.0 / std::sqrt(2.0);
  return SpinSpec{{h, h}};
}

StateVector product_state(const SystemLayout& layout,
                          const std::vector<PhotonSpec>& photons,
                          const std::vector<SpinSpec>& spins) {
  if (photons.size() != layout.photons().size())
    throw ValidationError("photon spec count does not match layout");
  if (spins.size() != layout.spins().size())
    throw ValidationError("spin spec count does not match layout");
  for (std::size_t p = 0; p < photons.size(); ++p) {
    const auto& id = layout.photons()[p].id;
    if (static_cast<int>(photons[p].rails.size()) != layout.photons()[p].rails)
      throw ValidationError("photon '" + id + "' rail amplitudes do not match rail count");
    check_normalized(std::norm(photons[p].pol[0]) + std::norm(photons[p].pol[1]),
                     "polarization of photon '" + id + "'");
    double sq = 0.0;
    for (const auto& c : photons[p].rails) sq += std::norm(c);
    check_normalized(sq, "rail amplitudes of photon '" + id + "'");
  }
  for (std::size_t s = 0; s < spins.size(); ++s)
    check_normalized(std::norm(spins[s].amps[0]) + std::norm(spins[s].amps[1]),
                     "spin '" + layout.spins()[s] + "'");

  StateVector out(layout);
  const auto np = photons.size();
  for (std::size_t i = 0; i < layout.dimension(); ++i) {
    const auto d = decompose(layout, i);
    cplx a = 1.0;
    for (std::size_t p = 0; p < np; ++p)
      a *= photons[p].pol[d[p] & 1] * photons[p].rails[static_cast<std::size_t>(d[p] >> 1)];
    for (std::size_t s = 0; s < spins.size(); ++s) a *= spins[s].amps[d[np + s]];
    out[i] = a;
  }
  return out;
}

// ---------------------------------------------------------------- local ops

void apply_local(StateVector& state, const Address& addr,
                 const Eigen::MatrixXcd& m) {
  const Plan plan = plan_for(state.layout(), addr);
  const auto n = static_cast<Eigen::Index>(plan.offset.size());
  if (m.rows() != n || m.cols() != n)
    throw ValidationError("matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", addressed factor has dimension " +
                          std::to_string(n));
  Eigen::VectorXcd v(n);
  auto& amps = state.amps();
  for (std::size_t i = 0; i < plan.local.size(); ++i) {
    if (plan.local[i] != 0) continue;
    const std::size_t base = i - plan.offset[0];
    for (Eigen::Index k = 0; k < n; ++k)
      v[k] = amps[static_cast<Eigen::Index>(base + plan.offset[static_cast<std::size_t>(k)])];
    const Eigen::VectorXcd w = m * v;
    for (Eigen::Index k = 0; k < n; ++k)
      amps[static_cast<Eigen::Index>(base + plan.offset[static_cast<std::size_t>(k)])] = w[k];
  }
}

// ---------------------------------------------------------------- measurement

std::array<SpinMeasurement, 2> measure_spin_branches(const StateVector& state,
                                                     std::string_view spin) {
  const auto& l = state.layout();
  const int s = l.spin_index(spin);
  const double total = state.squared_norm();
  if (!(total > 0.0)) throw ZeroNormError("cannot measure a zero-norm state");

  std::array<SpinMeasurement, 2> out;
  for (int o = 0; o < 2; ++o) {
    out[o].outcome = static_cast<Spin>(o);
    out[o].post_state = StateVector(l);
  }
  for (std::size_t i = 0; i < state.dimension(); ++i)
    out[static_cast<int>(l.spin_digit(i, s))].post_state[i] = state[i];
  for (auto& b : out) {
    const double sq = b.post_state.squared_norm();
    b.probability = sq / total;
    if (sq > 0.0) b.post_state.amps() /= std::sqrt(sq);
  }
  return out;
}

SpinMeasurement measure_spin(const StateVector& state, std::string_view spin,
                             Spin outcome) {
  auto br = measure_spin_branches(state, spin);
  auto& b = br[static_cast<int>(outcome)];
  if (!(b.probability > 0.0))
    throw ZeroNormError("requested spin outcome has zero probability");
  return std::move(b);
}

double SeededSampler::uniform() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

SpinMeasurement measure_spin(const StateVector& state, std::string_view spin,
                             SeededSampler& sampler) {
  auto br = measure_spin_branches(state, spin);
  const double u = sampler.uniform();
  return std::move(u < br[0].probability ? br[0] : br[1]);
}

// ---------------------------------------------------------------- removal

StateVector drop_spin(const StateVector& state, std::string_view spin,
                      Spin value) {
  const auto& l = state.layout();
  const int s = l.spin_index(spin);
  StateVector out(l.without_spin(spin));
  const std::size_t st = l.spin_stride(s);
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if (l.spin_digit(i, s) != value) continue;
    const std::size_t j = (i % st) + (i / (2 * st)) * st;
    out[j] = state[i];
  }
  return out;
}

StateVector drop_photon(const StateVector& state, std::string_view id,
                        const Eigen::VectorXcd& local) {
  const auto& l = state.layout();
  const int p = l.photon_index(id);
  const auto ld = static_cast<std::size_t>(l.local_dim(p));
  if (static_cast<std::size_t>(local.size()) != ld)
    throw ValidationError("projection vector does not match photon dimension");
  StateVector out(l.without_photon(id));
  const std::size_t st = l.photon_stride(p);
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const auto d = static_cast<std::size_t>(l.photon_digit(i, p));
    const std::size_t j = (i % st) + (i / (ld * st)) * st;
    out[j] += std::conj(local[static_cast<Eigen::Index>(d)]) * state[i];
  }
  return out;
}

StateVector append_photon(const StateVector& state, const PhotonSlot& slot,
                          const PhotonSpec& spec) {
  if (static_cast<int>(spec.rails.size()) != slot.rails)
    throw ValidationError("photon spec does not match slot rail count");
  const auto& l = state.layout();
  StateVector out(l.with_photon(slot));
  const auto np = l.photons().size();
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if (state[i] == cplx{}) continue;
    auto d = decompose(l, i);
    for (int k = 0; k < 2 * slot.rails; ++k) {
      const cplx f = spec.pol[k & 1] * spec.rails[static_cast<std::size_t>(k >> 1)];
      if (f == cplx{}) continue;
      auto nd = d;
      nd.insert(nd.begin() + static_cast<std::ptrdiff_t>(np), k);
      out[compose(out.layout(), nd)] += f * state[i];
    }
  }
  return out;
}

cplx overlap(const StateVector& a, const StateVector& b) {
  if (!(a.layout() == b.layout())) throw ValidationError("overlap of states with different layouts");
  return a.amps().dot(b.amps());  // Eigen dot conjugates the left operand
}

double fidelity(const StateVector& a, const StateVector& b) {
  const double na = a.squared_norm(), nb = b.squared_norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw ZeroNormError("fidelity with a zero state");
  return std::norm(overlap(a, b)) / (na * nb);
}

}  // namespace hyperqd
