#include "qkick/pauli.hpp"

#include <stdexcept>

#include "qkick/error.hpp"

namespace qkick {

namespace {

struct SiteProduct {
  int i_power;  // product = i^i_power * result
  Pauli result;
};

// a * b for single-site Paulis. XY = iZ, YZ = iX, ZX = iY; reversed order
// picks up -i.
SiteProduct multiply(Pauli a, Pauli b) {
  if (a == Pauli::I) return {0, b};
  if (b == Pauli::I) return {0, a};
  if (a == b) return {0, Pauli::I};
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  // X=1, Y=2, Z=3: cyclic successor of a is b when (ib - ia) mod 3 == 1.
  const auto other = static_cast<Pauli>(6 - ia - ib);
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? 1 : 3, other};
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::Jx: return "Jx";
    case Channel::Jy: return "Jy";
    case Channel::B: return "B";
  }
  return "?";
}

Channel parse_channel(std::string_view name) {
  if (name == "Jx" || name == "jx" || name == "JX") return Channel::Jx;
  if (name == "Jy" || name == "jy" || name == "JY") return Channel::Jy;
  if (name == "B" || name == "b") return Channel::B;
  throw std::invalid_argument("unknown channel '" + std::string(name) + "'");
}

PauliString::PauliString(int n_sites) {
  require(n_sites >= 1, "PauliString needs at least one site");
  ops_.assign(static_cast<std::size_t>(n_sites), Pauli::I);
}

PauliString::PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {
  require(!ops_.empty(), "PauliString needs at least one site");
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> ops;
  ops.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': case '_': ops.push_back(Pauli::I); break;
      case 'X': ops.push_back(Pauli::X); break;
      case 'Y': ops.push_back(Pauli::Y); break;
      case 'Z': ops.push_back(Pauli::Z); break;
      default:
        throw std::invalid_argument("bad Pauli character '" + std::string(1, c) + "'");
    }
  }
  if (ops.empty()) throw std::invalid_argument("empty Pauli string");
  return PauliString(std::move(ops));
}

PauliString PauliString::single(int n_sites, int site, Pauli op) {
  require(site >= 1 && site <= n_sites, "site out of range");
  PauliString p(n_sites);
  p.set(site, op);
  return p;
}

bool PauliString::is_identity() const { return first_active_site() == 0; }

int PauliString::first_active_site() const {
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i] != Pauli::I) return static_cast<int>(i) + 1;
  return 0;
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(ops_.size());
  for (Pauli p : ops_) out.push_back(to_char(p));
  return out;
}

std::size_t PauliStringHash::operator()(const PauliString& p) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (Pauli op : p.ops()) {
    h ^= static_cast<std::size_t>(op);
    h *= 0x100000001b3ull;
  }
  return h;
}

PauliString HamiltonianTerm::pauli(int n_sites) const {
  PauliString p(n_sites);
  switch (channel) {
    case Channel::Jx:
    case Channel::Jy: {
      require(site >= 1 && site <= n_sites - 1, "bond index out of range");
      const Pauli op = channel == Channel::Jx ? Pauli::X : Pauli::Y;
      p.set(site, op);
      p.set(site + 1, op);
      break;
    }
    case Channel::B:
      require(site >= 1 && site <= n_sites, "field site out of range");
      p.set(site, Pauli::Z);
      break;
  }
  return p;
}

std::vector<HamiltonianTerm> hamiltonian_terms(int n_sites,
                                               const std::vector<Channel>& channels) {
  std::vector<HamiltonianTerm> terms;
  for (Channel c : channels) {
    const int last = c == Channel::B ? n_sites : n_sites - 1;
    for (int i = 1; i <= last; ++i) terms.push_back({c, i});
  }
  return terms;
}

std::optional<SignedPauli> commute_with_term(const PauliString& p,
                                             const HamiltonianTerm& term) {
  const int n = p.n_sites();
  const PauliString t = term.pauli(n);

  int i_power = 0;
  int anticommuting = 0;
  std::vector<Pauli> product(static_cast<std::size_t>(n));
  for (int s = 1; s <= n; ++s) {
    const Pauli a = t.at(s);
    const Pauli b = p.at(s);
    if (a != Pauli::I && b != Pauli::I && a != b) ++anticommuting;
    const SiteProduct sp = multiply(a, b);
    i_power += sp.i_power;
    product[static_cast<std::size_t>(s - 1)] = sp.result;
  }
  if (anticommuting % 2 == 0) return std::nullopt;

  // [T, p] = 2 T p = 2 i^k q; with an odd anticommuting count k is odd, so
  // 2 i^k = 2 i (+-1).
  i_power %= 4;
  require(i_power == 1 || i_power == 3, "commutator phase is not imaginary");
  return SignedPauli{PauliString(std::move(product)), i_power == 1 ? +1 : -1};
}

double string_expectation(const PauliString& p, const SiteAssignment& assignment) {
  require(p.n_sites() == assignment.size(),
          "string_expectation: Pauli string and assignment lengths differ");
  double value = 1.0;
  for (int s = 1; s <= p.n_sites(); ++s) {
    const Pauli op = p.at(s);
    if (op == Pauli::I) continue;
    const auto bloch = bloch_vector(assignment.site(s));
    value *= bloch[static_cast<std::size_t>(op) - 1];
    if (value == 0.0) return 0.0;
  }
  return value;
}

}  // namespace qkick
