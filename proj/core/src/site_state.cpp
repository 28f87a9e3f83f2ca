#include "qkick/site_state.hpp"

#include <cmath>
#include <stdexcept>

#include "qkick/error.hpp"

namespace qkick {

namespace {

constexpr double kNormTolerance = 1e-12;

}  // namespace

std::array<double, 3> bloch_vector(const SiteState& state) {
  if (const auto* e = std::get_if<Eigenstate>(&state)) {
    const double s = e->positive ? 1.0 : -1.0;
    switch (e->basis) {
      case Basis::X: return {s, 0.0, 0.0};
      case Basis::Y: return {0.0, s, 0.0};
      case Basis::Z: return {0.0, 0.0, s};
    }
  }
  const auto& x = std::get<ExplicitState>(state);
  const std::complex<double> coherence = std::conj(x.zero) * x.one;
  return {2.0 * coherence.real(), 2.0 * coherence.imag(),
          std::norm(x.zero) - std::norm(x.one)};
}

std::array<std::complex<double>, 2> amplitudes(const SiteState& state) {
  if (const auto* x = std::get_if<ExplicitState>(&state)) return {x->zero, x->one};
  const auto& e = std::get<Eigenstate>(state);
  const double r = 1.0 / std::sqrt(2.0);
  const double s = e.positive ? 1.0 : -1.0;
  switch (e.basis) {
    case Basis::Z:
      return e.positive ? std::array<std::complex<double>, 2>{1.0, 0.0}
                        : std::array<std::complex<double>, 2>{0.0, 1.0};
    case Basis::X: return {r, s * r};
    case Basis::Y: return {r, std::complex<double>(0.0, s * r)};
  }
  return {1.0, 0.0};
}

SiteAssignment::SiteAssignment(std::vector<SiteState> sites) : sites_(std::move(sites)) {
  for (const auto& s : sites_) {
    if (const auto* x = std::get_if<ExplicitState>(&s)) {
      const double norm = std::norm(x->zero) + std::norm(x->one);
      require(std::abs(norm - 1.0) <= kNormTolerance, "explicit site state is not normalized");
    }
  }
}

SiteAssignment SiteAssignment::from_labels(const std::string& labels) {
  std::vector<SiteState> sites;
  for (char c : labels) {
    switch (c) {
      case '0': sites.emplace_back(Eigenstate{Basis::Z, true}); break;
      case '1': sites.emplace_back(Eigenstate{Basis::Z, false}); break;
      case '+': sites.emplace_back(Eigenstate{Basis::X, true}); break;
      case '-': sites.emplace_back(Eigenstate{Basis::X, false}); break;
      case 'i': sites.emplace_back(Eigenstate{Basis::Y, true}); break;
      case 'j': sites.emplace_back(Eigenstate{Basis::Y, false}); break;
      default:
        throw std::invalid_argument("bad site label '" + std::string(1, c) + "'");
    }
  }
  if (sites.empty()) throw std::invalid_argument("empty site assignment");
  return SiteAssignment(std::move(sites));
}

SiteAssignment SiteAssignment::all_zero(int n_sites) {
  return SiteAssignment(std::vector<SiteState>(static_cast<std::size_t>(n_sites),
                                               Eigenstate{Basis::Z, true}));
}

const SiteState& SiteAssignment::site(int one_based) const {
  return sites_.at(static_cast<std::size_t>(one_based - 1));
}

std::string SiteAssignment::labels() const {
  std::string out;
  for (const auto& s : sites_) {
    const auto* e = std::get_if<Eigenstate>(&s);
    if (!e) {
      out.push_back('?');
      continue;
    }
    switch (e->basis) {
      case Basis::Z: out.push_back(e->positive ? '0' : '1'); break;
      case Basis::X: out.push_back(e->positive ? '+' : '-'); break;
      case Basis::Y: out.push_back(e->positive ? 'i' : 'j'); break;
    }
  }
  return out;
}

}  // namespace qkick
