#include "tsetlin/rng.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "tsetlin/errors.hpp"

namespace tsetlin {

namespace {

constexpr std::uint64_t kPcgMultiplier = 6364136223846793005ULL;

// Maximal-length tap sets (primitive polynomials) for widths 4..32,
// the standard shift-register table used in hardware design guides.
constexpr std::array<std::array<std::uint32_t, 4>, 29> kTapTable = {{
    {4, 3, 0, 0},    {5, 3, 0, 0},    {6, 5, 0, 0},    {7, 6, 0, 0},
    {8, 6, 5, 4},    {9, 5, 0, 0},    {10, 7, 0, 0},   {11, 9, 0, 0},
    {12, 6, 4, 1},   {13, 4, 3, 1},   {14, 5, 3, 1},   {15, 14, 0, 0},
    {16, 15, 13, 4}, {17, 14, 0, 0},  {18, 11, 0, 0},  {19, 6, 2, 1},
    {20, 17, 0, 0},  {21, 19, 0, 0},  {22, 21, 0, 0},  {23, 18, 0, 0},
    {24, 23, 22, 17},{25, 22, 0, 0},  {26, 6, 2, 1},   {27, 5, 2, 1},
    {28, 25, 0, 0},  {29, 27, 0, 0},  {30, 6, 4, 1},   {31, 28, 0, 0},
    {32, 22, 2, 1},
}};

std::uint64_t lfsr_mask(std::uint32_t width) {
  return width >= 64 ? ~0ULL : (1ULL << width) - 1;
}

} // namespace

RngSpec RngSpec::lfsr(std::uint32_t width) {
  if (width < 4 || width > 32)
    throw ConfigError("lfsr width must be in [4, 32], got " + std::to_string(width));
  return RngSpec{RngKind::Lfsr, width};
}

RngSpec RngSpec::parse(const std::string& text) {
  if (text == "pcg64") return pcg64();
  const std::string prefix = "lfsr:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t pos = 0;
    const std::string arg = text.substr(prefix.size());
    unsigned long w = 0;
    try {
      w = std::stoul(arg, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad rng spec '" + text + "'");
    }
    if (pos != arg.size()) throw ConfigError("bad rng spec '" + text + "'");
    return lfsr(static_cast<std::uint32_t>(w));
  }
  throw ConfigError("unknown rng '" + text + "' (expected \"pcg64\" or \"lfsr:<width>\")");
}

std::string RngSpec::to_string() const {
  return kind == RngKind::Pcg64 ? "pcg64" : "lfsr:" + std::to_string(width);
}

void RngSpec::validate_seed(std::uint64_t seed) const {
  if (kind == RngKind::Lfsr && (seed & lfsr_mask(width)) == 0)
    throw ConfigError("seed reduces to the all-zero lfsr:" + std::to_string(width) +
                      " state; pick a seed with a nonzero low " + std::to_string(width) + " bits");
}

std::span<const std::uint32_t> lfsr_taps(std::uint32_t width) {
  if (width < 4 || width > 32)
    throw ConfigError("lfsr width must be in [4, 32], got " + std::to_string(width));
  const auto& row = kTapTable[width - 4];
  std::size_t count = 4;
  while (count > 0 && row[count - 1] == 0) --count;
  return {row.data(), count};
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t z = base_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(const RngSpec& spec, std::uint64_t seed) : spec_(spec) {
  if (spec_.kind == RngKind::Pcg64) {
    inc_ = (derive_seed(seed, 0) << 1u) | 1u;
    state_ = 0;
    next_raw();
    state_ += seed;
    next_raw();
  } else {
    if (spec_.width < 4 || spec_.width > 32)
      throw ConfigError("lfsr width must be in [4, 32], got " + std::to_string(spec_.width));
    tap_mask_ = 0;
    for (std::uint32_t tap : lfsr_taps(spec_.width)) tap_mask_ |= 1ULL << (spec_.width - tap);
    state_ = seed & lfsr_mask(spec_.width);
    if (state_ == 0) state_ = 1; // the all-zero state is absorbing
  }
}

std::uint64_t RngStream::next_raw() {
  if (spec_.kind == RngKind::Pcg64) {
    const std::uint64_t old = state_;
    state_ = old * kPcgMultiplier + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }
  const std::uint64_t input = std::popcount(state_ & tap_mask_) & 1u;
  state_ = (state_ >> 1) | (input << (spec_.width - 1));
  return state_;
}

bool RngStream::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli probability outside [0, 1]");
  const std::uint64_t raw = next_raw();
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  const auto threshold = static_cast<std::uint64_t>(std::floor(std::ldexp(p, static_cast<int>(spec_.output_bits()))));
  return raw < threshold;
}

} // namespace tsetlin
