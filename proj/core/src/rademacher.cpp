#include "maxmult/rademacher.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "maxmult/parallel.hpp"
#include "maxmult/symbols.hpp"

namespace maxmult::rademacher {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_p(double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("exponent p must be finite and >= 1");
}

void check_rows(const std::vector<Row>& rows, const RademacherSystem& sys) {
  if (rows.empty()) throw std::invalid_argument("coefficient family has no rows");
  for (const auto& r : rows)
    if (r.size() != static_cast<std::size_t>(sys.n()))
      throw std::invalid_argument("coefficient row length " + std::to_string(r.size()) + " does not match n = " +
                                  std::to_string(sys.n()));
}

double power(double x, double p) { return p == 2.0 ? x * x : std::pow(x, p); }

// Split-table enumeration for exact mode: pattern = (high << low_bits) | low and
// F_i = low_table[low][i] + high_table[high][i], each table built from at most
// low_bits (resp. n - low_bits) signed terms.
struct SplitTables {
  int low_bits = 0;
  std::size_t rows = 0;
  std::vector<Complex> low;
  std::vector<Complex> high;

  SplitTables(const std::vector<Row>& r, int n) : low_bits(std::min(n, 10)), rows(r.size()) {
    low = build(r, 0, low_bits);
    high = build(r, low_bits, n - low_bits);
  }

  std::vector<Complex> build(const std::vector<Row>& r, int start, int bits) const {
    const std::size_t count = std::size_t{1} << bits;
    std::vector<Complex> t(count * rows);
    for (std::size_t i = 0; i < rows; ++i) {
      Complex s{0.0, 0.0};
      for (int j = 0; j < bits; ++j) s += r[i][static_cast<std::size_t>(start + j)];
      t[i] = s;
    }
    for (std::size_t u = 1; u < count; ++u) {
      const auto parent = u & (u - 1);
      const int j = std::countr_zero(u);
      for (std::size_t i = 0; i < rows; ++i)
        t[u * rows + i] = t[parent * rows + i] - 2.0 * r[i][static_cast<std::size_t>(start + j)];
    }
    return t;
  }
};

// Per-checkpoint accumulators: sum of X and of X^2 with X = (prefix sup)^p.
struct Moments {
  std::vector<long double> sum;
  std::vector<long double> sum_sq;
};

void accumulate(std::span<const Complex> f, std::span<const std::size_t> counts, double p, Moments& m) {
  double run = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < f.size() && c < counts.size(); ++i) {
    run = std::max(run, std::abs(f[i]));
    if (i + 1 == counts[c]) {
      const double x = power(run, p);
      m.sum[c] += x;
      m.sum_sq[c] += static_cast<long double>(x) * x;
      ++c;
    }
  }
}

}  // namespace

RademacherSystem RademacherSystem::exact(int n) {
  if (n < 1 || n > kMaxExact)
    throw std::invalid_argument("exact Rademacher mode requires 1 <= n <= " + std::to_string(kMaxExact));
  return RademacherSystem(n, Mode::exact, std::size_t{1} << n, 0);
}

RademacherSystem RademacherSystem::sampled(int n, std::size_t patterns, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("Rademacher system needs n >= 1");
  if (patterns == 0) throw std::invalid_argument("sampled Rademacher mode needs at least one pattern");
  return RademacherSystem(n, Mode::sampled, patterns, seed);
}

std::uint64_t RademacherSystem::word(std::size_t pattern, int w) const {
  if (mode_ == Mode::exact) return w == 0 ? static_cast<std::uint64_t>(pattern) : 0;
  const auto words = static_cast<std::uint64_t>((n_ + 63) / 64);
  return splitmix(seed_ ^ splitmix(static_cast<std::uint64_t>(pattern) * words + static_cast<std::uint64_t>(w)));
}

int RademacherSystem::sign(std::size_t pattern, int j) const {
  if (pattern >= patterns_ || j < 0 || j >= n_) throw std::out_of_range("Rademacher index out of range");
  return (word(pattern, j / 64) >> (j % 64)) & 1U ? -1 : 1;
}

std::vector<double> RademacherSystem::signs(std::size_t pattern) const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (int w = 0; w * 64 < n_; ++w) {
    const auto bits = word(pattern, w);
    for (int b = 0; b < 64 && w * 64 + b < n_; ++b) out[static_cast<std::size_t>(w * 64 + b)] = (bits >> b) & 1U ? -1.0 : 1.0;
  }
  return out;
}

std::vector<NormEstimate> family_sup_norm_prefixes(const std::vector<Row>& rows, const RademacherSystem& sys,
                                                   double p, std::span<const std::size_t> counts) {
  check_p(p);
  check_rows(rows, sys);
  if (counts.empty()) throw std::invalid_argument("no prefix counts requested");
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0 || counts[c] > rows.size() || (c > 0 && counts[c] <= counts[c - 1]))
      throw std::invalid_argument("prefix counts must be strictly increasing within [1, rows]");
  }
  const std::size_t nc = counts.size();
  const std::size_t nr = rows.size();
  auto fresh = [nc] { return Moments{std::vector<long double>(nc, 0.0L), std::vector<long double>(nc, 0.0L)}; };

  std::vector<Moments> parts;
  if (sys.mode() == Mode::exact) {
    const SplitTables tables(rows, sys.n());
    const std::size_t low_count = std::size_t{1} << tables.low_bits;
    const std::size_t high_count = std::size_t{1} << (sys.n() - tables.low_bits);
    parts = parallel_map(high_count, [&](std::size_t v) {
      Moments m = fresh();
      std::vector<Complex> f(nr);
      for (std::size_t u = 0; u < low_count; ++u) {
        for (std::size_t i = 0; i < nr; ++i) f[i] = tables.low[u * nr + i] + tables.high[v * nr + i];
        accumulate(f, counts, p, m);
      }
      return m;
    });
  } else {
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (sys.pattern_count() + kBlock - 1) / kBlock;
    parts = parallel_map(blocks, [&](std::size_t blk) {
      Moments m = fresh();
      std::vector<Complex> f(nr);
      const std::size_t end = std::min(sys.pattern_count(), (blk + 1) * kBlock);
      for (std::size_t pat = blk * kBlock; pat < end; ++pat) {
        const auto s = sys.signs(pat);
        for (std::size_t i = 0; i < nr; ++i) {
          Complex acc{0.0, 0.0};
          for (std::size_t j = 0; j < s.size(); ++j) acc += s[j] * rows[i][j];
          f[i] = acc;
        }
        accumulate(f, counts, p, m);
      }
      return m;
    });
  }

  Moments total = fresh();
  for (const auto& m : parts)
    for (std::size_t c = 0; c < nc; ++c) {
      total.sum[c] += m.sum[c];
      total.sum_sq[c] += m.sum_sq[c];
    }
  const auto s = static_cast<long double>(sys.pattern_count());
  std::vector<NormEstimate> out(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const double mean = static_cast<double>(total.sum[c] / s);
    out[c].value = std::pow(mean, 1.0 / p);
    if (sys.mode() == Mode::sampled && sys.pattern_count() > 1 && mean > 0.0) {
      const double var = std::max(0.0, static_cast<double>(total.sum_sq[c] / s) - mean * mean) *
                         static_cast<double>(s / (s - 1.0L));
      const double se_mean = std::sqrt(var / static_cast<double>(s));
      out[c].std_error = std::pow(mean, 1.0 / p - 1.0) * se_mean / p;
    }
  }
  return out;
}

NormEstimate family_sup_norm(const std::vector<Row>& rows, const RademacherSystem& sys, double p) {
  const std::size_t count = rows.size();
  return family_sup_norm_prefixes(rows, sys, p, std::span<const std::size_t>(&count, 1)).front();
}

NormEstimate sum_norm(const Row& a, const RademacherSystem& sys, double p) {
  return family_sup_norm(std::vector<Row>{a}, sys, p);
}

std::vector<TailCheck> tail_check(std::span<const double> a, const RademacherSystem& sys,
                                  std::span<const double> lambdas) {
  if (a.size() != static_cast<std::size_t>(sys.n())) throw std::invalid_argument("coefficient row does not match n");
  double norm2 = 0.0;
  for (double v : a) norm2 += v * v;
  for (double l : lambdas)
    if (!(l > 0.0)) throw std::invalid_argument("tail level lambda must be positive");

  std::vector<double> sums(sys.pattern_count());
  if (sys.mode() == Mode::exact) {
    const SplitTables tables(std::vector<Row>{Row(a.begin(), a.end())}, sys.n());
    const std::size_t low_count = std::size_t{1} << tables.low_bits;
    for (std::size_t pat = 0; pat < sums.size(); ++pat)
      sums[pat] = std::abs(tables.low[pat & (low_count - 1)] + tables.high[pat >> tables.low_bits]);
  } else {
    for (std::size_t pat = 0; pat < sums.size(); ++pat) {
      const auto s = sys.signs(pat);
      double acc = 0.0;
      for (std::size_t j = 0; j < s.size(); ++j) acc += s[j] * a[j];
      sums[pat] = std::abs(acc);
    }
  }
  std::sort(sums.begin(), sums.end());
  std::vector<TailCheck> out;
  for (double l : lambdas) {
    const auto above = static_cast<std::size_t>(sums.end() - std::upper_bound(sums.begin(), sums.end(), l));
    TailCheck t;
    t.lambda = l;
    t.empirical = static_cast<double>(above) * sys.weight();
    t.bound = norm2 > 0.0 ? 2.0 * std::exp(-l * l / (4.0 * norm2)) : 0.0;
    out.push_back(t);
  }
  return out;
}

TailCheck tail_check(std::span<const double> a, const RademacherSystem& sys, double lambda) {
  return tail_check(a, sys, std::span<const double>(&lambda, 1)).front();
}

NormEstimate multiplier_family_sup(const std::vector<Row>& b_rows, const Row& a, const RademacherSystem& sys,
                                   double p) {
  std::vector<Row> composed;
  for (const auto& b : b_rows) {
    if (b.size() != a.size()) throw std::invalid_argument("multiplier row length does not match coefficient row");
    Row r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r[j] = b[j] * a[j];
    composed.push_back(std::move(r));
  }
  return family_sup_norm(composed, sys, p);
}

double IndexedSequence::at(long l) const {
  if (l < offset || l > last()) return 0.0;
  return values[static_cast<std::size_t>(l - offset)];
}

IndexedSequence calderon_op(const IndexedSequence& gamma, std::span<const double> a) {
  const long n = static_cast<long>(a.size());
  if (gamma.values.empty() || n == 0) return {};
  // gamma_{j-k} can be nonzero only when first <= j - k <= last for some 1 <= j <= n.
  IndexedSequence out;
  out.offset = 1 - gamma.last();
  const long k_last = n - gamma.first();
  out.values.assign(static_cast<std::size_t>(k_last - out.offset + 1), 0.0);
  for (long k = out.offset; k <= k_last; ++k) {
    double s = 0.0;
    for (long j = 1; j <= n; ++j) s += gamma.at(j - k) * a[static_cast<std::size_t>(j - 1)] * a[static_cast<std::size_t>(j - 1)];
    out.values[static_cast<std::size_t>(k - out.offset)] = s;
  }
  return out;
}

DilatedSupResult dilated_sup_norm(const IndexedSequence& b, std::span<const double> a, const RademacherSystem& sys,
                                  long k_first, long k_last) {
  if (k_last < k_first) throw std::invalid_argument("empty dilation window");
  if (a.size() != static_cast<std::size_t>(sys.n())) throw std::invalid_argument("coefficient row does not match n");
  const long n = static_cast<long>(a.size());
  DilatedSupResult out;
  out.k_first = k_first;
  out.k_last = k_last;

  std::vector<Row> rows;
  for (long k = k_first; k <= k_last; ++k) {
    Row r(a.size());
    double c2 = 0.0;
    for (long j = 1; j <= n; ++j) {
      const long l = j - k;
      if (l < b.first() || l > b.last()) ++out.padded_pairs;
      const double v = b.at(l) * a[static_cast<std::size_t>(j - 1)];
      r[static_cast<std::size_t>(j - 1)] = v;
      c2 += v * v;
    }
    rows.push_back(std::move(r));
    out.c.push_back(std::sqrt(c2));
  }
  out.norm = family_sup_norm(rows, sys, 2.0);

  double a2 = 0.0;
  for (double v : a) a2 += v * v;
  const auto star = symbols::nonincreasing_rearrangement(out.c);
  if (a2 > 0.0) {
    for (std::size_t l = 0; l < star.size(); ++l)
      out.rearrangement_constant =
          std::max(out.rearrangement_constant, star[l] * std::sqrt(std::log(2.0 + static_cast<double>(l))));
    out.rearrangement_constant /= std::sqrt(a2);
  }

  IndexedSequence b2 = b;
  for (double& v : b2.values) v *= v;
  const auto t = calderon_op(b2, a);
  for (long k = k_first; k <= k_last; ++k) {
    const double c = out.c[static_cast<std::size_t>(k - k_first)];
    out.calderon_mismatch = std::max(out.calderon_mismatch, std::abs(c * c - t.at(k)));
  }
  return out;
}

}  // namespace maxmult::rademacher
