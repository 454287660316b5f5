#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "maxmult/grid.hpp"

/// Finite Rademacher systems r_1, ..., r_n and the maximal estimates built on them.
///
/// The probability space is the set of sign patterns s in {-1, +1}^n, either
/// enumerated exhaustively (n <= 20, each pattern weighted 2^{-n}) or sampled
/// with a fixed seed. Bit j of a pattern set means r_{j+1}(s) = -1.
namespace maxmult::rademacher {

enum class Mode { exact, sampled };

class RademacherSystem {
 public:
  static constexpr int kMaxExact = 20;

  static RademacherSystem exact(int n);
  static RademacherSystem sampled(int n, std::size_t patterns, std::uint64_t seed);

  int n() const { return n_; }
  Mode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t pattern_count() const { return patterns_; }
  double weight() const { return 1.0 / static_cast<double>(patterns_); }

  /// r_{j+1} at pattern p, for 0 <= j < n.
  int sign(std::size_t pattern, int j) const;
  /// All n signs of pattern p.
  std::vector<double> signs(std::size_t pattern) const;

 private:
  RademacherSystem(int n, Mode mode, std::size_t patterns, std::uint64_t seed)
      : n_(n), mode_(mode), patterns_(patterns), seed_(seed) {}
  std::uint64_t word(std::size_t pattern, int w) const;

  int n_;
  Mode mode_;
  std::size_t patterns_;
  std::uint64_t seed_;
};

using Row = std::vector<Complex>;

struct NormEstimate {
  double value = 0.0;
  /// Monte Carlo standard error (delta method); 0 in exact mode.
  double std_error = 0.0;
};

/// || sup_i |sum_j a^i_j r_j| ||_p over the pattern measure.
NormEstimate family_sup_norm(const std::vector<Row>& rows, const RademacherSystem& sys, double p);
/// The same norm for each prefix rows[0, N) with N in `counts` (strictly increasing, <= rows.size()).
std::vector<NormEstimate> family_sup_norm_prefixes(const std::vector<Row>& rows, const RademacherSystem& sys,
                                                   double p, std::span<const std::size_t> counts);

/// || sum_j a_j r_j ||_p.
NormEstimate sum_norm(const Row& a, const RademacherSystem& sys, double p);

struct TailCheck {
  double lambda = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  bool holds() const { return empirical <= bound; }
};

/// empirical = meas{|sum a_j r_j| > lambda}; bound = 2 exp(-lambda^2 / (4 ||a||_2^2)).
TailCheck tail_check(std::span<const double> a, const RademacherSystem& sys, double lambda);
std::vector<TailCheck> tail_check(std::span<const double> a, const RademacherSystem& sys,
                                  std::span<const double> lambdas);

/// || sup_i |sum_j b^i_j a_j r_j| ||_p, i.e. family_sup_norm on the entrywise products.
NormEstimate multiplier_family_sup(const std::vector<Row>& b_rows, const Row& a, const RademacherSystem& sys,
                                   double p);

/// A finitely supported sequence gamma_l, l in [offset, offset + values.size()).
struct IndexedSequence {
  long offset = 0;
  std::vector<double> values;

  double at(long l) const;
  long first() const { return offset; }
  long last() const { return offset + static_cast<long>(values.size()) - 1; }
};

/// [T gamma]_k = sum_{j=1}^{n} gamma_{j-k} a_j^2 with a = (a_1, ..., a_n), over
/// every k for which some term can be nonzero.
IndexedSequence calderon_op(const IndexedSequence& gamma, std::span<const double> a);

struct DilatedSupResult {
  long k_first = 0;
  long k_last = 0;
  NormEstimate norm;
  /// c_k = (sum_j (b_{j-k} a_j)^2)^{1/2} for k in [k_first, k_last].
  std::vector<double> c;
  /// Number of (j, k) pairs whose index j - k fell outside b's window (treated as 0).
  std::size_t padded_pairs = 0;
  /// max_l c*(l) sqrt(log(2 + l)) / ||a||_2.
  double rearrangement_constant = 0.0;
  /// max_k |c_k^2 - [T(b^2)]_k|, the agreement of the direct and the Calderon route.
  double calderon_mismatch = 0.0;
};

/// || sup_{k in window} |sum_j b_{j-k} a_j r_j| ||_2 with a = (a_1, ..., a_n) and sys.n() == n.
DilatedSupResult dilated_sup_norm(const IndexedSequence& b, std::span<const double> a, const RademacherSystem& sys,
                                  long k_first, long k_last);

}  // namespace maxmult::rademacher
