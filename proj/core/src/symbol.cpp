#include "maxmult/symbol.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "maxmult/partition.hpp"

namespace maxmult {

namespace {

double radius_of(const Frequency& xi) { return std::hypot(xi[0], xi[1]); }

}  // namespace

Complex evaluate_octave_series(int first_octave, const std::vector<Complex>& coefficients, double radius) {
  if (radius <= 0.0 || coefficients.empty()) return {0.0, 0.0};
  // phi(2^{-k} r) != 0 only for log2(r) - 1 < k < log2(r) + 1.
  const int k0 = static_cast<int>(std::floor(std::log2(radius)));
  Complex sum{0.0, 0.0};
  for (int k = k0; k <= k0 + 1; ++k) {
    const long idx = static_cast<long>(k) - first_octave;
    if (idx < 0 || idx >= static_cast<long>(coefficients.size())) continue;
    sum += coefficients[static_cast<std::size_t>(idx)] * profile::phi(std::ldexp(radius, -k));
  }
  return sum;
}

SpectralSymbol::SpectralSymbol(std::string name, Evaluator evaluator, std::optional<OctaveRange> octaves)
    : name_(std::move(name)), evaluator_(std::move(evaluator)), octaves_(octaves) {
  if (!evaluator_) throw std::invalid_argument("symbol evaluator is empty");
}

SpectralSymbol SpectralSymbol::constant(Complex value) {
  return SpectralSymbol("constant", [value](const Frequency&) { return value; });
}

SpectralSymbol SpectralSymbol::octave_series(int first_octave, std::vector<Complex> coefficients, std::string name,
                                             std::uint64_t seed) {
  if (coefficients.empty()) throw std::invalid_argument("octave series needs at least one coefficient");
  auto shared = std::make_shared<const std::vector<Complex>>(coefficients);
  SpectralSymbol s(
      std::move(name),
      [first_octave, shared](const Frequency& xi) { return evaluate_octave_series(first_octave, *shared, radius_of(xi)); },
      OctaveRange{first_octave, first_octave + static_cast<int>(coefficients.size()) - 1});
  s.kind_ = Kind::octave_series;
  s.seed_ = seed;
  s.coefficients_ = std::move(coefficients);
  return s;
}

SpectralSymbol SpectralSymbol::frequency_indicator(Frequency target) {
  return SpectralSymbol("indicator", [target](const Frequency& xi) {
    const bool hit = std::abs(xi[0] - target[0]) < 1e-9 && std::abs(xi[1] - target[1]) < 1e-9;
    return hit ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  });
}

SpectralSymbol SpectralSymbol::dilated(int t) const {
  if (kind_ == Kind::octave_series) {
    auto s = octave_series(octaves_->first - t, coefficients_, name_, seed_);
    return s;
  }
  auto eval = evaluator_;
  std::optional<OctaveRange> shifted;
  if (octaves_) shifted = OctaveRange{octaves_->first - t, octaves_->last - t};
  return SpectralSymbol(name_ + "_dilated", [eval, t](const Frequency& xi) {
    return eval(Frequency{std::ldexp(xi[0], t), std::ldexp(xi[1], t)});
  }, shifted);
}

SpectralSymbol SpectralSymbol::scaled(Complex c) const {
  if (kind_ == Kind::octave_series) {
    auto coeffs = coefficients_;
    for (auto& v : coeffs) v *= c;
    return octave_series(octaves_->first, std::move(coeffs), name_, seed_);
  }
  auto eval = evaluator_;
  return SpectralSymbol(name_, [eval, c](const Frequency& xi) { return c * eval(xi); }, octaves_);
}

SpectralSymbol SpectralSymbol::times(const SpectralSymbol& other) const {
  auto a = evaluator_;
  auto b = other.evaluator_;
  std::optional<OctaveRange> range;
  if (octaves_ && other.octaves_) {
    range = OctaveRange{std::max(octaves_->first, other.octaves_->first) - 1,
                        std::min(octaves_->last, other.octaves_->last) + 1};
  } else {
    range = octaves_ ? octaves_ : other.octaves_;
  }
  return SpectralSymbol(name_ + "*" + other.name_, [a, b](const Frequency& xi) { return a(xi) * b(xi); }, range);
}

std::vector<Complex> SpectralSymbol::sample(const Grid& grid) const {
  std::vector<Complex> out(grid.total_samples());
  if (kind_ == Kind::octave_series) {
    const auto radii = frequency_radii(grid);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = evaluate_octave_series(octaves_->first, coefficients_, radii[i]);
    return out;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = evaluator_(grid.frequency(i));
  return out;
}

std::string SpectralSymbol::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_ == Kind::octave_series ? "octave_series" : "closed_form";
  j["name"] = name_;
  j["seed"] = seed_;
  if (kind_ == Kind::octave_series) {
    j["first_octave"] = octaves_->first;
    auto arr = nlohmann::json::array();
    for (const auto& c : coefficients_) arr.push_back({c.real(), c.imag()});
    j["coefficients"] = std::move(arr);
  }
  return j.dump();
}

SpectralSymbol SpectralSymbol::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("kind").get<std::string>() != "octave_series")
    throw std::invalid_argument("only octave_series descriptors can be restored");
  std::vector<Complex> coeffs;
  for (const auto& c : j.at("coefficients")) coeffs.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  return octave_series(j.at("first_octave").get<int>(), std::move(coeffs), j.value("name", "octave_series"),
                       j.value("seed", std::uint64_t{0}));
}

SpectralSymbol band_symbol(OctaveRange octaves) {
  if (octaves.size() <= 0) throw std::invalid_argument("empty octave range");
  return SpectralSymbol::octave_series(octaves.first, std::vector<Complex>(static_cast<std::size_t>(octaves.size()), 1.0),
                                       "band");
}

}  // namespace maxmult
