#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "plsoff/random.hpp"

namespace plsoff {

/// One cryptographic workload: artifact sizes in bytes and CPU cost per
/// message bit on a Cortex-M4 class core.
struct PqcScheme {
  std::string_view name;
  int security_level;  // 0 for classical schemes (no NIST level)
  std::uint32_t pub_key_bytes;
  std::uint32_t priv_key_bytes;
  std::uint32_t ct_or_sig_bytes;
  double cycles_per_bit;

  bool is_post_quantum() const noexcept { return security_level != 0; }
};

inline constexpr std::size_t kCatalogSize = 13;
/// Rows [kFirstPqcRow, kCatalogSize) are post-quantum.
inline constexpr std::size_t kFirstPqcRow = 2;
inline constexpr std::size_t kPqcCount = kCatalogSize - kFirstPqcRow;

// clang-format off
inline constexpr std::array<PqcScheme, kCatalogSize> kCatalog{{
    {"RSA-2048",      0, 256,  256,  256,   113},
    {"ECC-256",       0, 64,   32,   256,   281},
    {"Kyber-512",     1, 800,  1632, 768,   2193},
    {"Kyber-768",     3, 1184, 2400, 1088,  3577},
    {"Kyber-1024",    5, 1568, 3264, 1568,  5499},
    {"Dilithium-2",   1, 1312, 2528, 2420,  24051},
    {"Dilithium-3",   3, 1952, 4000, 3293,  36287},
    {"Dilithium-5",   5, 2592, 4864, 4595,  33085},
    {"Falcon-512",    1, 897,  1281, 690,   148791},
    {"Falcon-1024",   3, 1793, 2305, 1330,  326105},
    {"SPHINCS+-128f", 1, 32,   64,   17088, 2038919},
    {"SPHINCS+-192f", 3, 48,   96,   35664, 2686303},
    {"SPHINCS+-256f", 5, 64,   128,  49856, 6070970},
}};
// clang-format on

inline std::span<const PqcScheme, kCatalogSize> catalog() noexcept { return kCatalog; }

/// Case-insensitive lookup. Throws UnknownSchemeError naming the closest
/// catalog entry by edit distance.
const PqcScheme& lookup(std::string_view name);

/// Uniform draw over the post-quantum rows; returns a catalog row index.
template <class Urbg>
std::size_t sample_row(Urbg& g) {
  return kFirstPqcRow + static_cast<std::size_t>(uniform_index(g, kPqcCount));
}

template <class Urbg>
double sample_cycles(Urbg& g) {
  return kCatalog[sample_row(g)].cycles_per_bit;
}

/// Table as CSV, header `name,level,pub,priv,ct_sig,cycles_per_bit`.
std::string catalog_csv();

}  // namespace plsoff
