#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace tsetlin {

enum class RngKind : std::uint8_t { Pcg64, Lfsr };

/// Pseudorandom source selector. Two generators share one contract:
///   - pcg64: 64-bit permuted congruential generator, 32-bit output words
///     (XSH-RR output permutation, multiplier 6364136223846793005, odd
///     increment derived from the seed).
///   - lfsr:<w>: width-w Fibonacci linear feedback shift register,
///     w in [4, 32], w-bit output words, period 2^w - 1.
struct RngSpec {
  RngKind kind = RngKind::Pcg64;
  std::uint32_t width = 0; // LFSR register width; unused for pcg64

  static RngSpec pcg64() { return RngSpec{RngKind::Pcg64, 0}; }
  static RngSpec lfsr(std::uint32_t width);

  /// Parses "pcg64" or "lfsr:<width>". Throws ConfigError otherwise.
  static RngSpec parse(const std::string& text);
  std::string to_string() const;

  /// Width of one output word in bits: 32 for pcg64, the register width
  /// for an LFSR.
  std::uint32_t output_bits() const { return kind == RngKind::Pcg64 ? 32 : width; }

  /// Rejects user-supplied seeds that reduce to the absorbing all-zero
  /// LFSR state (seed mod 2^width == 0). Internally derived seeds are
  /// fixed up instead; see RngStream.
  void validate_seed(std::uint64_t seed) const;

  bool operator==(const RngSpec&) const = default;
};

/// Maximal-length tap set for a width-w Fibonacci LFSR (w in [4, 32]).
/// Taps are polynomial exponents, descending, first entry == w.
std::span<const std::uint32_t> lfsr_taps(std::uint32_t width);

/// Mixes an automaton (or stream) index into a base seed through the
/// splitmix64 avalanche finalizer, so that every automaton owns an
/// independent stream. Constants 0x9E3779B97F4A7C15,
/// 0xBF58476D1CE4E5B9, 0x94D049BB133111EB.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

/// Single-owner mutable generator state. Streams may be moved between
/// threads but never shared concurrently.
class RngStream {
public:
  RngStream(const RngSpec& spec, std::uint64_t seed);

  /// One output word: 32 bits for pcg64, the register contents after one
  /// shift for an LFSR (never zero).
  ///
  /// LFSR convention (fixed for all widths): with the register held in the
  /// low w bits, the input bit is the XOR of bits (w - t) for each tap t,
  /// and the register shifts right with the input bit entering at bit
  /// w-1 (the MSB). Example, w=4, taps {4,3}: 0b0001 -> 0b1000.
  std::uint64_t next_raw();

  /// True with probability p: draws one output word r and returns
  /// r < floor(p * 2^w) with w = output_bits(). p=0 and p=1 are exact by
  /// special case. Always consumes exactly one word. Throws
  /// std::invalid_argument outside [0, 1].
  bool bernoulli(double p);

  const RngSpec& spec() const { return spec_; }
  std::uint32_t output_bits() const { return spec_.output_bits(); }

private:
  RngSpec spec_;
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;      // pcg64 only
  std::uint64_t tap_mask_ = 0; // lfsr only
};

} // namespace tsetlin
