#pragma once

// Discrete dynamical systems: a self-map, a metric and a point codec.
//
// Built-ins: tent, logistic4, rotation, shift2, example1 (the translation
// x -> x + 1 on [0, inf) with the block metric), identity, and iterate(base, N).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chaoskit/errors.hpp"
#include "chaoskit/random.hpp"

namespace chaoskit {

/// Rotation number used when none is configured: (sqrt(5) - 1) / 2 to 15 digits.
inline constexpr double kGoldenAlpha = 0.618033988749895;

/// Extra symbols stored past horizon_cap so that 2^-k distances resolve down
/// to the smallest subnormal double at every index below the cap.
inline constexpr std::size_t kShiftLookahead = 1100;

enum class SystemKind { tent, logistic4, rotation, shift2, example1, identity, iterate };

inline std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::tent: return "tent";
    case SystemKind::logistic4: return "logistic4";
    case SystemKind::rotation: return "rotation";
    case SystemKind::shift2: return "shift2";
    case SystemKind::example1: return "example1";
    case SystemKind::identity: return "identity";
    case SystemKind::iterate: return "iterate";
  }
  return "unknown";
}

inline std::optional<SystemKind> parse_system_kind(std::string_view name) {
  for (auto kind : {SystemKind::tent, SystemKind::logistic4, SystemKind::rotation, SystemKind::shift2,
                    SystemKind::example1, SystemKind::identity, SystemKind::iterate}) {
    if (to_string(kind) == name) return kind;
  }
  if (name == "logistic") return SystemKind::logistic4;
  return std::nullopt;
}

struct SystemSpec {
  SystemKind kind = SystemKind::tent;
  std::uint64_t horizon_cap = 1'000'000;
  double alpha = kGoldenAlpha;               // rotation
  std::uint64_t power = 1;                   // iterate: N
  std::shared_ptr<const SystemSpec> base;    // iterate

  static SystemSpec simple(SystemKind kind, std::uint64_t horizon_cap = 1'000'000) {
    SystemSpec s;
    s.kind = kind;
    s.horizon_cap = horizon_cap;
    return s;
  }

  /// N-fold composition. The base must allow N * horizon_cap iterates.
  static SystemSpec iterate(SystemSpec base, std::uint64_t n, std::uint64_t horizon_cap) {
    SystemSpec s;
    s.kind = SystemKind::iterate;
    s.horizon_cap = horizon_cap;
    s.power = n;
    s.base = std::make_shared<const SystemSpec>(std::move(base));
    return s;
  }

  /// Convenience: iterate with the cap derived from the base cap.
  static SystemSpec iterate(SystemSpec base, std::uint64_t n) {
    const std::uint64_t cap = n == 0 ? 0 : base.horizon_cap / n;
    return iterate(std::move(base), n, cap);
  }

  void validate() const {
    if (horizon_cap < 1) throw ConfigError("horizon_cap", "must be >= 1");
    if (kind == SystemKind::rotation && !(alpha > 0.0 && alpha < 1.0))
      throw ConfigError("alpha", "rotation alpha must lie in (0, 1)");
    if (kind == SystemKind::iterate) {
      if (power < 1) throw ConfigError("N", "iterate power must be >= 1");
      if (!base) throw ConfigError("base", "iterate requires a base system");
      base->validate();
      if (base->horizon_cap / power < horizon_cap)
        throw ConfigError("horizon_cap", "iterate cap times N exceeds the base horizon_cap");
    }
  }

  std::string describe() const {
    if (kind == SystemKind::iterate) return "iterate(" + base->describe() + "," + std::to_string(power) + ")";
    return std::string(to_string(kind));
  }
};

// ---------------------------------------------------------------------------
// Points

/// A point on the circle R/Z stored as phase / 2^64, so rotation is exact.
struct CirclePoint {
  std::uint64_t phase = 0;

  static CirclePoint from_real(double x) {
    double frac = x - std::floor(x);
    long double scaled = static_cast<long double>(frac) * 0x1.0p64L;
    if (scaled >= 0x1.0p64L) scaled = 0;
    return CirclePoint{static_cast<std::uint64_t>(scaled)};
  }
  double real() const { return static_cast<double>(static_cast<long double>(phase) * 0x1.0p-64L); }
  friend bool operator==(const CirclePoint&, const CirclePoint&) = default;
};

/// A one-sided binary sequence viewed from `offset`. The shared prefix is immutable.
struct SymbolPoint {
  std::shared_ptr<const std::vector<std::uint8_t>> symbols;
  std::size_t offset = 0;

  std::size_t remaining() const { return symbols ? symbols->size() - std::min(offset, symbols->size()) : 0; }
  std::uint8_t at(std::size_t k) const { return (*symbols)[offset + k]; }
};

/// x = seed + offset with seed in (0, 1); floor(x) = offset exactly.
struct BlockPoint {
  double seed = 0.5;
  std::uint64_t offset = 0;
  friend bool operator==(const BlockPoint&, const BlockPoint&) = default;
};

using Point = std::variant<double, CirclePoint, SymbolPoint, BlockPoint>;

inline SymbolPoint make_symbol_point(std::vector<std::uint8_t> symbols) {
  for (auto s : symbols)
    if (s > 1) throw DomainError("shift2 symbols must be 0 or 1");
  return SymbolPoint{std::make_shared<const std::vector<std::uint8_t>>(std::move(symbols)), 0};
}

// ---------------------------------------------------------------------------
// example1 block table: b_1 = 1, b_i = 2^(b_1 + ... + b_{i-1}), L_m = b_1 + ... + b_m.

struct BlockTable {
  std::vector<std::uint64_t> b;   // b_1 .. b_m (b[0] is b_1)
  std::vector<std::uint64_t> L;   // L_0 .. L_m
  std::optional<std::size_t> saturated_at;  // 1-based i of the first b_i beyond the horizon
  std::uint64_t horizon_cap = 0;

  /// Index m with L_m <= pos < L_{m+1}.
  std::size_t block_of(std::uint64_t pos) const {
    if (pos > horizon_cap)
      throw HorizonExceeded("example1 block lookup at position " + std::to_string(pos) +
                            " beyond horizon_cap " + std::to_string(horizon_cap));
    auto it = std::upper_bound(L.begin(), L.end(), pos);
    return static_cast<std::size_t>(it - L.begin()) - 1;
  }
};

inline BlockTable example1_blocks(std::uint64_t horizon_cap) {
  if (horizon_cap < 1) throw ArgumentError("example1_blocks: horizon_cap must be >= 1");
  BlockTable t;
  t.horizon_cap = horizon_cap;
  t.L.push_back(0);
  for (std::size_t i = 1;; ++i) {
    const std::uint64_t prev = t.L.back();
    std::uint64_t bi = 0;
    if (i == 1) {
      bi = 1;
    } else if (prev < 63) {
      bi = std::uint64_t{1} << prev;
    } else {
      t.saturated_at = i;
      break;
    }
    if (bi > horizon_cap) {
      t.saturated_at = i;
      break;
    }
    t.b.push_back(bi);
    t.L.push_back(prev + bi);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Distributionally scrambled family in the full 2-shift.
//
// Blocks [A_m, A_{m+1}) with A_0 = 0 and A_{m+1} = A_m + 24 (A_m + 1), i.e.
// A_m = 25^m - 1. Even blocks are all zeros; odd blocks repeat the member's
// parameter word, so two members with distinct words of equal length differ
// at least once every |word| symbols there.

inline constexpr std::uint64_t kFamilyGrowth = 24;

/// Boundaries A_1, A_2, ... up to and including the first one >= limit.
inline std::vector<std::uint64_t> family_boundaries(std::uint64_t limit) {
  std::vector<std::uint64_t> a;
  std::uint64_t cur = 0;
  while (cur < limit) {
    if (cur > (UINT64_MAX - kFamilyGrowth) / (kFamilyGrowth + 1)) break;
    cur = cur + kFamilyGrowth * (cur + 1);
    a.push_back(cur);
  }
  return a;
}

inline SymbolPoint scrambled_family_point(const std::vector<std::uint8_t>& word, std::uint64_t horizon_cap) {
  if (word.empty()) throw ArgumentError("scrambled_family_point: parameter word must be nonempty");
  for (auto s : word)
    if (s > 1) throw ArgumentError("scrambled_family_point: parameter word must be binary");
  const std::size_t len = static_cast<std::size_t>(horizon_cap) + kShiftLookahead;
  std::vector<std::uint8_t> symbols(len, 0);
  std::uint64_t start = 0;
  std::size_t m = 0;
  for (std::uint64_t end : family_boundaries(len)) {
    if (m % 2 == 1) {
      for (std::uint64_t i = start; i < std::min<std::uint64_t>(end, len); ++i)
        symbols[i] = word[(i - start) % word.size()];
    }
    start = end;
    ++m;
  }
  return make_symbol_point(std::move(symbols));
}

/// `count` distinct words of a common length (at least 3 bits): member k is k in binary.
inline std::vector<std::vector<std::uint8_t>> family_words(std::size_t count) {
  const auto bits = std::max<std::size_t>(3, std::bit_width(count > 0 ? count - 1 : 0));
  std::vector<std::vector<std::uint8_t>> words;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<std::uint8_t> w(bits);
    for (std::size_t j = 0; j < bits; ++j) w[j] = static_cast<std::uint8_t>((k >> (bits - 1 - j)) & 1u);
    words.push_back(std::move(w));
  }
  return words;
}

// ---------------------------------------------------------------------------
// System models

/// A finite partition of a bounded state space, used for orbit visitation.
struct Partition {
  std::size_t cells = 0;
  std::function<std::size_t(const Point&)> cell_of;
};

namespace detail {

class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual void validate(const Point& p) const = 0;
  virtual Point step(const Point& p) const = 0;
  virtual double distance(const Point& p, const Point& q) const = 0;
  virtual Point sample(Rng& rng) const = 0;
  virtual Point from_coordinate(double x) const = 0;
  virtual Point perturb(const Point& p, double radius, Rng& rng) const = 0;
  virtual std::optional<Partition> partition(double eps) const = 0;
  virtual std::vector<std::uint64_t> block_boundaries(std::uint64_t) const { return {}; }
  virtual double distance_floor() const { return 0.0; }

  virtual std::vector<double> distances(const Point& x, const Point& y, std::size_t horizon) const {
    std::vector<double> out;
    out.reserve(horizon);
    Point a = x, b = y;
    for (std::size_t i = 0; i < horizon; ++i) {
      out.push_back(distance(a, b));
      if (i + 1 < horizon) {
        a = step(a);
        b = step(b);
      }
    }
    return out;
  }
};

inline Partition unit_interval_partition(double eps, std::function<double(const Point&)> coord) {
  const auto n = static_cast<std::size_t>(std::ceil(1.0 / eps));
  return Partition{n, [n, coord = std::move(coord)](const Point& p) {
                     const double x = coord(p);
                     auto c = static_cast<std::size_t>(std::floor(x * static_cast<double>(n)));
                     return std::min(c, n - 1);
                   }};
}

/// Self-maps of [0, 1] with the usual metric.
class IntervalModel : public SystemModel {
 public:
  void validate(const Point& p) const override {
    const double* x = std::get_if<double>(&p);
    if (!x) throw DomainError("expected a real coordinate in [0, 1]");
    if (!(*x >= 0.0 && *x <= 1.0)) throw DomainError("coordinate outside [0, 1]: " + std::to_string(*x));
  }
  double distance(const Point& p, const Point& q) const override {
    validate(p);
    validate(q);
    return std::abs(std::get<double>(p) - std::get<double>(q));
  }
  Point sample(Rng& rng) const override { return uniform_open01(rng); }
  Point from_coordinate(double x) const override {
    Point p = x;
    validate(p);
    return p;
  }
  Point perturb(const Point& p, double radius, Rng& rng) const override {
    validate(p);
    const double x = std::get<double>(p);
    const double delta = radius * uniform01(rng);
    double y = (rng() & 1u) ? x + delta : x - delta;
    if (y < 0.0 || y > 1.0) y = (y < 0.0) ? x + delta : x - delta;
    return std::clamp(y, 0.0, 1.0);
  }
  std::optional<Partition> partition(double eps) const override {
    return unit_interval_partition(eps, [](const Point& p) { return std::get<double>(p); });
  }
  std::vector<double> distances(const Point& x, const Point& y, std::size_t horizon) const override {
    validate(x);
    validate(y);
    std::vector<double> out(horizon);
    double a = std::get<double>(x), b = std::get<double>(y);
    for (std::size_t i = 0; i < horizon; ++i) {
      out[i] = std::abs(a - b);
      a = apply(a);
      b = apply(b);
    }
    return out;
  }
  Point step(const Point& p) const override {
    validate(p);
    return apply(std::get<double>(p));
  }

 protected:
  virtual double apply(double x) const = 0;
};

/// Tent map 1 - |1 - 2x|, evaluated through its angle form
/// (2/pi) atan2(|sin pi x|, |cos pi x|). Direct evaluation on doubles is exact
/// and therefore collapses every orbit onto the fixed point 0 within ~60 steps;
/// this form agrees with 2 min(x, 1 - x) to a few ulps and keeps orbits alive.
class TentModel final : public IntervalModel {
 protected:
  double apply(double x) const override {
    const double s = std::abs(std::sin(std::numbers::pi * x));
    const double c = std::abs(std::cos(std::numbers::pi * x));
    return std::clamp(std::atan2(s, c) * (2.0 / std::numbers::pi), 0.0, 1.0);
  }
};

class LogisticModel final : public IntervalModel {
 protected:
  double apply(double x) const override { return std::clamp(4.0 * x * (1.0 - x), 0.0, 1.0); }
};

class IdentityModel final : public IntervalModel {
 protected:
  double apply(double x) const override { return x; }
};

/// x -> x + alpha on R/Z with the arc-length metric; exact in fixed point.
class RotationModel final : public SystemModel {
 public:
  explicit RotationModel(double alpha) : step_(CirclePoint::from_real(alpha).phase) {}

  void validate(const Point& p) const override {
    if (!std::holds_alternative<CirclePoint>(p)) throw DomainError("expected a circle point");
  }
  Point step(const Point& p) const override {
    validate(p);
    return CirclePoint{std::get<CirclePoint>(p).phase + step_};
  }
  double distance(const Point& p, const Point& q) const override {
    validate(p);
    validate(q);
    const std::uint64_t d = std::get<CirclePoint>(p).phase - std::get<CirclePoint>(q).phase;
    const std::uint64_t arc = std::min(d, std::uint64_t{0} - d);
    return static_cast<double>(static_cast<long double>(arc) * 0x1.0p-64L);
  }
  Point sample(Rng& rng) const override { return CirclePoint{rng()}; }
  Point from_coordinate(double x) const override {
    if (!std::isfinite(x)) throw DomainError("rotation coordinate must be finite");
    return CirclePoint::from_real(x);
  }
  Point perturb(const Point& p, double radius, Rng& rng) const override {
    validate(p);
    const auto delta = static_cast<std::uint64_t>(
        static_cast<long double>(std::min(radius, 0.5) * uniform01(rng)) * 0x1.0p64L);
    const std::uint64_t phase = std::get<CirclePoint>(p).phase;
    return CirclePoint{(rng() & 1u) ? phase + delta : phase - delta};
  }
  std::optional<Partition> partition(double eps) const override {
    return unit_interval_partition(eps, [](const Point& p) { return std::get<CirclePoint>(p).real(); });
  }

 private:
  std::uint64_t step_;
};

/// Full one-sided shift on {0,1}^N with d(x, y) = 2^-k, k the first index where x and y differ.
class ShiftModel final : public SystemModel {
 public:
  explicit ShiftModel(std::uint64_t horizon_cap) : cap_(horizon_cap) {}

  void validate(const Point& p) const override {
    const auto* s = std::get_if<SymbolPoint>(&p);
    if (!s || !s->symbols) throw DomainError("expected a shift2 symbol sequence");
    if (s->offset > s->symbols->size()) throw DomainError("shift2 point offset beyond its stored prefix");
  }
  Point step(const Point& p) const override {
    validate(p);
    const auto& s = std::get<SymbolPoint>(p);
    if (s.remaining() == 0) throw DomainError("shift2 point has no symbols left to shift");
    return SymbolPoint{s.symbols, s.offset + 1};
  }
  double distance(const Point& p, const Point& q) const override {
    validate(p);
    validate(q);
    const auto& a = std::get<SymbolPoint>(p);
    const auto& b = std::get<SymbolPoint>(q);
    const std::size_t n = std::min(a.remaining(), b.remaining());
    for (std::size_t k = 0; k < n; ++k)
      if (a.at(k) != b.at(k)) return std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k, 2000)));
    return 0.0;
  }
  Point sample(Rng& rng) const override {
    std::vector<std::uint8_t> symbols(static_cast<std::size_t>(cap_) + kShiftLookahead);
    for (std::size_t i = 0; i < symbols.size(); i += 64) {
      const std::uint64_t bits = rng();
      for (std::size_t j = 0; j < 64 && i + j < symbols.size(); ++j) symbols[i + j] = (bits >> j) & 1u;
    }
    return make_symbol_point(std::move(symbols));
  }
  Point from_coordinate(double) const override {
    throw DomainError("shift2 points are built from symbol words, not real coordinates");
  }
  Point perturb(const Point& p, double radius, Rng& rng) const override {
    validate(p);
    const auto& s = std::get<SymbolPoint>(p);
    const int kmin = std::max(0, static_cast<int>(std::ceil(-std::log2(std::min(radius, 1.0)))));
    const std::size_t k = static_cast<std::size_t>(kmin) + uniform_index(rng, 24);
    std::vector<std::uint8_t> copy(s.symbols->begin() + static_cast<std::ptrdiff_t>(s.offset), s.symbols->end());
    if (k >= copy.size()) return p;
    copy[k] ^= 1u;
    return make_symbol_point(std::move(copy));
  }
  std::optional<Partition> partition(double eps) const override {
    const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(-std::log2(eps))), 1, 24);
    return Partition{std::size_t{1} << k, [k](const Point& p) {
                       const auto& s = std::get<SymbolPoint>(p);
                       if (s.remaining() < k) throw HorizonExceeded("shift2 orbit ran past its stored prefix");
                       std::size_t c = 0;
                       for (std::size_t j = 0; j < k; ++j) c = (c << 1) | s.at(j);
                       return c;
                     }};
  }
  std::vector<std::uint64_t> block_boundaries(std::uint64_t horizon) const override {
    auto a = family_boundaries(horizon);
    std::erase_if(a, [horizon](std::uint64_t v) { return v > horizon; });
    return a;
  }

  // Backward scan: next mismatch index for every position in one pass.
  std::vector<double> distances(const Point& x, const Point& y, std::size_t horizon) const override {
    validate(x);
    validate(y);
    const auto& a = std::get<SymbolPoint>(x);
    const auto& b = std::get<SymbolPoint>(y);
    const std::size_t avail = std::min(a.remaining(), b.remaining());
    if (avail < horizon) throw HorizonExceeded("shift2 prefix shorter than the requested horizon");
    std::vector<double> out(horizon);
    std::optional<std::size_t> next;
    for (std::size_t j = avail; j-- > 0;) {
      if (a.at(j) != b.at(j)) next = j;
      if (j < horizon)
        out[j] = next ? std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(*next - j, 2000))) : 0.0;
    }
    return out;
  }

 private:
  std::uint64_t cap_;
};

/// X = [0, inf), f(x) = x + 1, d(x, y) = 1/2^k when floor(x) = floor(y) is even and
/// both lie in [L_{2k}, L_{2k+1}) for some k >= 1; 0 when x = y; 1 otherwise.
class Example1Model final : public SystemModel {
 public:
  explicit Example1Model(std::uint64_t horizon_cap) : table_(example1_blocks(horizon_cap)) {}

  const BlockTable& table() const { return table_; }

  void validate(const Point& p) const override {
    const auto* b = std::get_if<BlockPoint>(&p);
    if (!b) throw DomainError("expected an example1 (seed, offset) point");
    if (!(b->seed > 0.0 && b->seed < 1.0)) throw DomainError("example1 seed must lie in (0, 1)");
  }
  Point step(const Point& p) const override {
    validate(p);
    auto b = std::get<BlockPoint>(p);
    ++b.offset;
    return b;
  }
  double distance(const Point& p, const Point& q) const override {
    validate(p);
    validate(q);
    const auto& a = std::get<BlockPoint>(p);
    const auto& b = std::get<BlockPoint>(q);
    if (a == b) return 0.0;
    if (a.offset != b.offset || a.offset % 2 != 0) return 1.0;
    const std::size_t m = table_.block_of(a.offset);
    if (m >= 2 && m % 2 == 0) return std::ldexp(1.0, -static_cast<int>(m / 2));
    return 1.0;
  }
  std::vector<double> distances(const Point& x, const Point& y, std::size_t horizon) const override {
    validate(x);
    validate(y);
    const auto& a = std::get<BlockPoint>(x);
    const auto& b = std::get<BlockPoint>(y);
    if (horizon > 0 && std::max(a.offset, b.offset) + (horizon - 1) > table_.horizon_cap)
      throw HorizonExceeded("example1 orbit would pass horizon_cap");
    std::vector<double> out(horizon);
    for (std::size_t i = 0; i < horizon; ++i)
      out[i] = distance(BlockPoint{a.seed, a.offset + i}, BlockPoint{b.seed, b.offset + i});
    return out;
  }
  Point sample(Rng& rng) const override { return BlockPoint{uniform_open01(rng), 0}; }
  Point from_coordinate(double seed) const override {
    Point p = BlockPoint{seed, 0};
    validate(p);
    return p;
  }
  Point perturb(const Point&, double, Rng&) const override {
    throw Unsupported("example1: perturbation sampling is not supported on the discrete block space");
  }
  std::optional<Partition> partition(double) const override { return std::nullopt; }
  std::vector<std::uint64_t> block_boundaries(std::uint64_t horizon) const override {
    std::vector<std::uint64_t> out;
    for (std::size_t m = 1; m < table_.L.size(); ++m)
      if (table_.L[m] <= horizon) out.push_back(table_.L[m]);
    return out;
  }
  /// Smallest positive distance value realised below horizon_cap: 2^-k for the
  /// deepest even block [L_{2k}, L_{2k+1}) that starts within the table.
  double distance_floor() const override {
    double floor = 1.0;
    for (std::size_t m = 2; m < table_.L.size() && table_.L[m] <= table_.horizon_cap; m += 2)
      floor = std::ldexp(1.0, -static_cast<int>(m / 2));
    return floor;
  }

 private:
  BlockTable table_;
};

class IterateModel final : public SystemModel {
 public:
  IterateModel(std::shared_ptr<const SystemModel> base, std::uint64_t power)
      : base_(std::move(base)), power_(power) {}

  void validate(const Point& p) const override { base_->validate(p); }
  Point step(const Point& p) const override {
    Point q = p;
    for (std::uint64_t k = 0; k < power_; ++k) q = base_->step(q);
    return q;
  }
  double distance(const Point& p, const Point& q) const override { return base_->distance(p, q); }
  Point sample(Rng& rng) const override { return base_->sample(rng); }
  Point from_coordinate(double x) const override { return base_->from_coordinate(x); }
  Point perturb(const Point& p, double r, Rng& rng) const override { return base_->perturb(p, r, rng); }
  std::optional<Partition> partition(double eps) const override { return base_->partition(eps); }
  double distance_floor() const override { return base_->distance_floor(); }
  std::vector<std::uint64_t> block_boundaries(std::uint64_t horizon) const override {
    std::vector<std::uint64_t> out;
    for (auto b : base_->block_boundaries(horizon * power_)) {
      const std::uint64_t v = (b + power_ - 1) / power_;
      if (v >= 1 && v <= horizon && (out.empty() || out.back() != v)) out.push_back(v);
    }
    return out;
  }
  /// Orbit of f^N is every N-th entry of the orbit of f.
  std::vector<double> distances(const Point& x, const Point& y, std::size_t horizon) const override {
    if (horizon == 0) return {};
    const auto full = base_->distances(x, y, static_cast<std::size_t>(power_) * (horizon - 1) + 1);
    std::vector<double> out(horizon);
    for (std::size_t i = 0; i < horizon; ++i) out[i] = full[i * power_];
    return out;
  }

 private:
  std::shared_ptr<const SystemModel> base_;
  std::uint64_t power_;
};

inline std::shared_ptr<const SystemModel> build_model(const SystemSpec& spec) {
  switch (spec.kind) {
    case SystemKind::tent: return std::make_shared<TentModel>();
    case SystemKind::logistic4: return std::make_shared<LogisticModel>();
    case SystemKind::identity: return std::make_shared<IdentityModel>();
    case SystemKind::rotation: return std::make_shared<RotationModel>(spec.alpha);
    case SystemKind::shift2: return std::make_shared<ShiftModel>(spec.horizon_cap);
    case SystemKind::example1: return std::make_shared<Example1Model>(spec.horizon_cap);
    case SystemKind::iterate: return std::make_shared<IterateModel>(build_model(*spec.base), spec.power);
  }
  throw ConfigError("kind", "unknown system kind");
}

}  // namespace detail

/// An immutable dynamical system. Cheap to copy; safe to share across threads.
class System {
 public:
  explicit System(SystemSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    model_ = detail::build_model(spec_);
  }

  const SystemSpec& spec() const noexcept { return spec_; }
  std::string name() const { return spec_.describe(); }
  std::uint64_t horizon_cap() const noexcept { return spec_.horizon_cap; }

  void validate(const Point& p) const { model_->validate(p); }
  Point step(const Point& p) const { return model_->step(p); }
  Point iterate(Point p, std::uint64_t n) const {
    for (std::uint64_t k = 0; k < n; ++k) p = model_->step(p);
    return p;
  }
  double distance(const Point& p, const Point& q) const { return model_->distance(p, q); }

  /// d(f^i x, f^i y) for 0 <= i < horizon.
  std::vector<double> distances(const Point& x, const Point& y, std::size_t horizon) const {
    if (horizon < 1) throw ArgumentError("horizon must be >= 1");
    if (horizon > spec_.horizon_cap)
      throw HorizonExceeded("horizon " + std::to_string(horizon) + " exceeds horizon_cap " +
                            std::to_string(spec_.horizon_cap));
    return model_->distances(x, y, horizon);
  }

  Point sample(Rng& rng) const { return model_->sample(rng); }
  Point from_coordinate(double x) const { return model_->from_coordinate(x); }
  Point perturb(const Point& p, double radius, Rng& rng) const { return model_->perturb(p, radius, rng); }
  std::optional<Partition> partition(double eps) const { return model_->partition(eps); }

  /// Natural checkpoints (example1 L_m, scrambled-family A_m) in (0, horizon].
  std::vector<std::uint64_t> block_boundaries(std::uint64_t horizon) const {
    return model_->block_boundaries(horizon);
  }
  /// Smallest positive distance the metric can express below horizon_cap (0 if unbounded below).
  double distance_floor() const { return model_->distance_floor(); }

  /// The underlying system of an iterate, or this system.
  System root() const {
    return spec_.kind == SystemKind::iterate ? System(*spec_.base).root() : *this;
  }

 private:
  SystemSpec spec_;
  std::shared_ptr<const detail::SystemModel> model_;
};

inline System make_system(const SystemSpec& spec) { return System(spec); }

}  // namespace chaoskit
