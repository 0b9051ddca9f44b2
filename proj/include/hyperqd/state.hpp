#pragma once

// Dense joint state of dual-rail photons and electron spins.
//
// Amplitude index is mixed radix with photon 0 the fastest digit. A photon's
// local digit is pol + 2*rail (R=0, L=1; rail a1=0, a2=1, ...). Spins follow
// the photons as binary digits with up=0, down=1.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hyperqd {

using cplx = std::complex<double>;

enum class Pol : std::uint8_t { R = 0, L = 1 };
enum class Spin : std::uint8_t { Up = 0, Down = 1 };

inline constexpr Pol flip(Pol p) { return p == Pol::R ? Pol::L : Pol::R; }
inline constexpr Spin flip(Spin s) { return s == Spin::Up ? Spin::Down : Spin::Up; }
const char* to_string(Pol p);
const char* to_string(Spin s);

struct PhotonSlot {
  std::string id;
  int rails = 2;
  bool operator==(const PhotonSlot&) const = default;
};

class SystemLayout {
 public:
  static constexpr std::size_t kDefaultCap = std::size_t{1} << 20;

  SystemLayout() = default;
  SystemLayout(std::vector<PhotonSlot> photons, std::vector<std::string> spins,
               std::size_t cap = kDefaultCap);

  std::size_t dimension() const { return dim_; }
  const std::vector<PhotonSlot>& photons() const { return photons_; }
  const std::vector<std::string>& spins() const { return spins_; }

  /// Throws ValidationError for unknown ids.
  int photon_index(std::string_view id) const;
  int spin_index(std::string_view id) const;
  bool has_photon(std::string_view id) const;
  bool has_spin(std::string_view id) const;

  int local_dim(int photon) const { return 2 * photons_[photon].rails; }
  std::size_t photon_stride(int photon) const { return photon_strides_[photon]; }
  std::size_t spin_stride(int spin) const { return spin_strides_[spin]; }

  int photon_digit(std::size_t index, int photon) const;
  Spin spin_digit(std::size_t index, int spin) const;

  SystemLayout with_photon(PhotonSlot slot) const;
  SystemLayout without_photon(std::string_view id) const;
  SystemLayout without_spin(std::string_view id) const;

  bool operator==(const SystemLayout& o) const {
    return photons_ == o.photons_ && spins_ == o.spins_;
  }

 private:
  std::vector<PhotonSlot> photons_;
  std::vector<std::string> spins_;
  std::vector<std::size_t> photon_strides_;
  std::vector<std::size_t> spin_strides_;
  std::size_t dim_ = 1;
  std::size_t cap_ = kDefaultCap;
};

/// Value of one photon in a computational basis label.
struct PhotonValue {
  Pol pol = Pol::R;
  int rail = 0;
};

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(SystemLayout layout);  // all-zero amplitudes
  StateVector(SystemLayout layout, Eigen::VectorXcd amps);

  const SystemLayout& layout() const { return layout_; }
  const Eigen::VectorXcd& amps() const { return amps_; }
  Eigen::VectorXcd& amps() { return amps_; }
  std::size_t dimension() const { return layout_.dimension(); }

  double squared_norm() const { return amps_.squaredNorm(); }
  /// Throws ZeroNormError on a zero vector.
  StateVector normalized() const;

  /// Index of a basis label; photons and spins in layout order.
  std::size_t index_of(const std::vector<PhotonValue>& photons,
                       const std::vector<Spin>& spins) const;

  cplx& operator[](std::size_t i) { return amps_[static_cast<Eigen::Index>(i)]; }
  cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  /// `|R a1 L b2 ↑⟩ re im` per amplitude with modulus >= threshold.
  void dump(std::ostream& os, double threshold = 1e-12) const;

 private:
  SystemLayout layout_;
  Eigen::VectorXcd amps_;
};

// --------------------------------------------------------------------------
// Construction

struct PhotonSpec {
  std::array<cplx, 2> pol{1.0, 0.0};
  std::vector<cplx> rails{1.0, 0.0};

  static PhotonSpec basis(Pol p, int rail, int rail_count = 2);
};

struct SpinSpec {
  std::array<cplx, 2> amps{1.0, 0.0};

  static SpinSpec basis(Spin s);
  static SpinSpec plus();  // (up + down)/sqrt(2)
};

/// Tensor product of per-subsystem factors. Each factor must be normalized
/// within 1e-9; the photon's rail list must match its slot's rail count.
StateVector product_state(const SystemLayout& layout,
                          const std::vector<PhotonSpec>& photons,
                          const std::vector<SpinSpec>& spins);

// --------------------------------------------------------------------------
// Local operations

/// 2x2 on the polarization of one photon; rail < 0 means every rail.
struct PolAddr {
  std::string photon;
  int rail = -1;
};
/// rails x rails on a photon's rail index, identity on polarization.
struct RailAddr {
  std::string photon;
};
/// 2x2 on a spin.
struct SpinAddr {
  std::string spin;
};
/// (2k)x(2k) on pol (x) the listed rails of one photon, local index
/// pol + 2*position-in-list; other rails untouched.
struct ModesAddr {
  std::string photon;
  std::vector<int> rails;
};
/// 8x8 on pol (x) (port1, port2) (x) spin, local index pol + 2*port + 4*spin.
struct ScatterAddr {
  std::string photon;
  int port1_rail = 0;
  int port2_rail = 1;
  std::string spin;
};

using Address = std::variant<PolAddr, RailAddr, SpinAddr, ModesAddr, ScatterAddr>;

/// Applies `m` on the addressed factor in place. Throws ValidationError on a
/// dimension mismatch, an unknown id or an out-of-range rail.
void apply_local(StateVector& state, const Address& addr,
                 const Eigen::MatrixXcd& m);

// --------------------------------------------------------------------------
// Measurement and removal

struct SpinMeasurement {
  Spin outcome = Spin::Up;
  double probability = 0.0;
  StateVector post_state;  // projected and renormalized; spin kept in layout
};

/// Both outcome branches, in the order up, down. A branch with zero
/// probability carries an all-zero post_state.
std::array<SpinMeasurement, 2> measure_spin_branches(const StateVector& state,
                                                     std::string_view spin);

/// Branch for the requested outcome (throws ZeroNormError if impossible).
SpinMeasurement measure_spin(const StateVector& state, std::string_view spin,
                             Spin outcome);

/// Stochastic single-shot measurement driven by a seeded generator.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : state_(seed) {}
  /// Uniform double in [0, 1), bit-reproducible across platforms.
  double uniform();

 private:
  std::uint64_t state_;
};

SpinMeasurement measure_spin(const StateVector& state, std::string_view spin,
                             SeededSampler& sampler);

/// Component with `spin` fixed to `value`, spin removed from the layout.
/// Not renormalized.
StateVector drop_spin(const StateVector& state, std::string_view spin,
                      Spin value);

/// Contracts photon `id` with the conjugate of `local` (length 2*rails,
/// index pol + 2*rail) and removes it from the layout. Not renormalized.
StateVector drop_photon(const StateVector& state, std::string_view id,
                        const Eigen::VectorXcd& local);

/// Appends a photon in the given factor state.
StateVector append_photon(const StateVector& state, const PhotonSlot& slot,
                          const PhotonSpec& spec);

/// <a|b>, conjugate-linear in `a`. Throws ValidationError on layout mismatch.
cplx overlap(const StateVector& a, const StateVector& b);

/// |<a|b>|^2 / (|a|^2 |b|^2).
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace hyperqd
