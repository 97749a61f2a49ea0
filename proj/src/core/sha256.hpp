#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace ng {

// FIPS 180-4 SHA-256, used for content hashes in run manifests.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t len);
  // Finalizes and returns the lowercase hex digest. The object must not be
  // updated afterwards.
  std::string hex_digest();

  static std::string of_buffer(std::string_view data);
  static std::string of_file(const std::string& path);  // throws Error on I/O

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint64_t bit_count_ = 0;
  std::uint8_t buffer_[64];
  std::size_t buffer_len_ = 0;
};

}  // namespace ng
