#pragma once

#include <array>
#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace qkick {

enum class Basis { X, Y, Z };

/// Eigenstate of a single-site Pauli operator. `positive` selects the +1
/// eigenvector: |0>, |+>, |+i> for Z, X, Y respectively.
struct Eigenstate {
  Basis basis = Basis::Z;
  bool positive = true;
};

/// Explicit normalized single-site pure state a|0> + b|1>.
struct ExplicitState {
  std::complex<double> zero{1.0, 0.0};
  std::complex<double> one{0.0, 0.0};
};

using SiteState = std::variant<Eigenstate, ExplicitState>;

/// Bloch vector (<X>, <Y>, <Z>) of a single-site pure state.
std::array<double, 3> bloch_vector(const SiteState& state);

/// Amplitudes (<0|s>, <1|s>) of the state.
std::array<std::complex<double>, 2> amplitudes(const SiteState& state);

/// Per-site product state of a chain; site 1 is element 0.
class SiteAssignment {
 public:
  SiteAssignment() = default;
  explicit SiteAssignment(std::vector<SiteState> sites);

  /// Parses labels such as "+0-1" or "0i+j": 0/1 are Z eigenstates, +/- are
  /// X eigenstates, i/j are the +1/-1 eigenstates of Y.
  static SiteAssignment from_labels(const std::string& labels);
  static SiteAssignment all_zero(int n_sites);

  int size() const { return static_cast<int>(sites_.size()); }
  const SiteState& site(int one_based) const;
  const std::vector<SiteState>& sites() const { return sites_; }

  std::string labels() const;

 private:
  std::vector<SiteState> sites_;
};

}  // namespace qkick
