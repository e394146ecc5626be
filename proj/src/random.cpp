#include "hsfc/random.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace hsfc {

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
  std::array<unsigned char, 16> message{};
  for (int k = 0; k < 8; ++k) {
    message[k] = static_cast<unsigned char>(parent >> (8 * k));
    message[8 + k] = static_cast<unsigned char>(tag >> (8 * k));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(message.data(), message.size(), digest.data(), &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::uint64_t seed = 0;
  for (int k = 0; k < 8; ++k) seed |= static_cast<std::uint64_t>(digest[k]) << (8 * k);
  return seed;
}

std::uint64_t UniformStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("UniformStream::below: bound must be positive");
  unsigned __int128 product = static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace hsfc
