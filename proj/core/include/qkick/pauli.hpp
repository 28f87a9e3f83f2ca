#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkick/site_state.hpp"

namespace qkick {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);

/// The three amplitude channels of the kicked XY chain Hamiltonian.
enum class Channel : std::uint8_t { Jx = 0, Jy = 1, B = 2 };

inline constexpr Channel kAllChannels[] = {Channel::Jx, Channel::Jy, Channel::B};

std::string_view channel_name(Channel c);
Channel parse_channel(std::string_view name);

/// Tensor product of single-site Paulis without a phase. Sites are 1-based in
/// the public interface; site 1 is the sender and is printed leftmost.
class PauliString {
 public:
  /// All-identity string on `n_sites` sites.
  explicit PauliString(int n_sites);
  explicit PauliString(std::vector<Pauli> ops);

  static PauliString parse(std::string_view text);
  /// Single operator `op` at `site`, identity elsewhere.
  static PauliString single(int n_sites, int site, Pauli op);

  int n_sites() const { return static_cast<int>(ops_.size()); }
  Pauli at(int site) const { return ops_.at(static_cast<std::size_t>(site - 1)); }
  void set(int site, Pauli op) { ops_.at(static_cast<std::size_t>(site - 1)) = op; }
  bool is_identity() const;
  /// Lowest site carrying a non-identity operator, or 0 for the identity.
  int first_active_site() const;

  const std::vector<Pauli>& ops() const { return ops_; }
  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> ops_;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept;
};

/// One Hamiltonian term without its amplitude: X_iX_{i+1} (Jx), Y_iY_{i+1} (Jy)
/// on bond i, or Z_i (B) on site i.
struct HamiltonianTerm {
  Channel channel;
  int site;

  /// The Pauli content of the term on an `n_sites` chain.
  PauliString pauli(int n_sites) const;
};

/// Every term of the given channels on an `n_sites` chain, bonds/sites in
/// increasing order.
std::vector<HamiltonianTerm> hamiltonian_terms(int n_sites,
                                               const std::vector<Channel>& channels);

struct SignedPauli {
  PauliString string;
  int sign;
};

/// Commutator [T, p] = 2 i sign q for the term's Pauli content T. Returns
/// nullopt when T and p commute.
std::optional<SignedPauli> commute_with_term(const PauliString& p,
                                             const HamiltonianTerm& term);

/// <psi| p |psi> for the product state `assignment`. Exactly -1, 0 or +1 when
/// every site is an eigenstate.
double string_expectation(const PauliString& p, const SiteAssignment& assignment);

}  // namespace qkick
