#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shiplab {

/// Seeded random stream with explicit, stateless draw functions.
///
/// The engine is std::mt19937_64; the distributions are implemented here
/// (bit-shift uniform, Box-Muller normal) so that a stream's entire state
/// is the engine state and draws are reproducible from a serialized copy.
class RngStream {
 public:
  RngStream() : RngStream(0) {}
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Fans a master seed out into an independent named stream.
  static RngStream named(std::uint64_t master, std::string_view name) {
    return RngStream(splitmix64(master ^ fnv1a64(name)));
  }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Gaussian draw via Box-Muller; consumes exactly two engine outputs.
  double normal(double mu, double sigma) {
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * M_PI * u2);
  }

  /// Uniform index in [0, n). Modulo bias is negligible for n << 2^64.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    return engine_() % n;
  }

  std::uint64_t raw() { return engine_(); }

  std::string serialize() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }

  static RngStream deserialize(const std::string& text) {
    RngStream s;
    std::istringstream is(text);
    is >> s.engine_;
    if (is.fail()) throw std::runtime_error("RngStream: bad serialized state");
    return s;
  }

  bool operator==(const RngStream& other) const {
    return engine_ == other.engine_;
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace shiplab
