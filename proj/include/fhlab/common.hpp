#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhlab {

using Complex = std::complex<double>;
using MultiIndex = std::vector<std::size_t>;

/// Raised when an input is outside the domain an operation is defined on
/// (e.g. a Wild element handed to an operation on the dual space).
class Rejected : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed element/family/config file. `field()` names the offending entry.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Counter-based randomness: every draw is a pure function of (seed, keys),
// so sampled corpora do not depend on evaluation order or truncation.
namespace rng {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix(seed);
  for (auto k : keys) h = splitmix(h ^ splitmix(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform in (0, 1).
inline double uniform(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard complex Gaussian (E|z|^2 = 1) via Box-Muller.
Complex gaussian(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

}  // namespace rng

/// |lhs - rhs| / (1 + scale), the scale-free residual used across the library.
inline double relative_residual(Complex lhs, Complex rhs, double scale) {
  return std::abs(lhs - rhs) / (1.0 + scale);
}

}  // namespace fhlab
