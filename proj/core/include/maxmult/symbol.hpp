#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maxmult/grid.hpp"

namespace maxmult {

/// Inclusive octave range [first, last].
struct OctaveRange {
  int first = 0;
  int last = 0;
  int size() const { return last - first + 1; }
  bool contains(int k) const { return k >= first && k <= last; }
  bool operator==(const OctaveRange&) const = default;
};

/// A Fourier multiplier m(xi) evaluated at physical frequencies.
///
/// Two construction kinds exist. Octave series m = sum_k c_k phi(2^{-k} xi)
/// carry their coefficients and round-trip through a JSON descriptor; closed
/// forms wrap an arbitrary evaluator. Dilation m(2^t .) is exact for both.
class SpectralSymbol {
 public:
  using Evaluator = std::function<Complex(const Frequency&)>;

  enum class Kind { octave_series, closed_form };

  SpectralSymbol(std::string name, Evaluator evaluator, std::optional<OctaveRange> octaves = std::nullopt);

  static SpectralSymbol constant(Complex value);
  static SpectralSymbol octave_series(int first_octave, std::vector<Complex> coefficients,
                                      std::string name = "octave_series", std::uint64_t seed = 0);
  /// 1 at the frequency with the given integer indices (on a unit-extent grid), 0 elsewhere.
  static SpectralSymbol frequency_indicator(Frequency target);
  /// Restores an octave-series symbol from its descriptor.
  static SpectralSymbol from_json(std::string_view json);

  Complex operator()(const Frequency& xi) const { return evaluator_(xi); }

  /// m(2^t xi).
  SpectralSymbol dilated(int t) const;
  SpectralSymbol scaled(Complex c) const;
  /// Pointwise product with another symbol.
  SpectralSymbol times(const SpectralSymbol& other) const;

  /// Values at every spectrum position of the grid.
  std::vector<Complex> sample(const Grid& grid) const;

  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  /// Octaves on which the symbol is (possibly) nonzero, when known.
  const std::optional<OctaveRange>& octaves() const { return octaves_; }
  /// Octave-series coefficients c_k for k in octaves(); empty for closed forms.
  const std::vector<Complex>& coefficients() const { return coefficients_; }

  /// {kind, name, seed, first_octave, coefficients:[[re, im], ...]}.
  std::string to_json() const;

 private:
  std::string name_;
  Evaluator evaluator_;
  std::optional<OctaveRange> octaves_;
  Kind kind_ = Kind::closed_form;
  std::uint64_t seed_ = 0;
  std::vector<Complex> coefficients_;
};

/// sum_{k in range} c_k phi(2^{-k} r) evaluated with only the two overlapping terms.
Complex evaluate_octave_series(int first_octave, const std::vector<Complex>& coefficients, double radius);

/// Indicator-smooth band symbol sum_{k=first}^{last} phi(2^{-k} xi); equals 1 on [2^first, 2^last].
SpectralSymbol band_symbol(OctaveRange octaves);

}  // namespace maxmult
