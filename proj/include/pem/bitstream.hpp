#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace pem {

// Ordered bits plus a read cursor. Equality compares the bits only.
class BitStream {
 public:
  BitStream() = default;
  BitStream(std::initializer_list<int> bits);
  explicit BitStream(std::vector<std::uint8_t> bits);

  static BitStream zeros(std::size_t count);
  // MSB-first within each byte.
  static BitStream from_bytes(std::span<const std::uint8_t> bytes);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  void push_back(std::uint8_t bit) { bits_.push_back(bit ? 1 : 0); }
  void append(const BitStream& other);
  // Appends the low `width` bits of `value`, most significant first.
  void append_uint(std::uint64_t value, unsigned width);

  std::size_t cursor() const noexcept { return cursor_; }
  std::size_t remaining() const noexcept { return bits_.size() - cursor_; }
  void rewind() noexcept { cursor_ = 0; }

  // Reading past the end throws Error(ReadPastEnd) and leaves the cursor as is.
  std::uint8_t read_bit();
  std::uint8_t peek_bit(std::size_t offset = 0) const;
  std::uint64_t read_uint(unsigned width);
  BitStream read_bits(std::size_t count);

  // Pads the tail with zero bits up to a whole number of bytes.
  std::vector<std::uint8_t> to_bytes() const;

  friend bool operator==(const BitStream& a, const BitStream& b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t cursor_ = 0;
};

BitStream concat(const BitStream& a, const BitStream& b);

inline constexpr unsigned kLengthFieldBits = 32;

// register || be32(|message|) || message || zero padding up to `capacity`.
// Throws CapacityExceeded when the framed bits do not fit.
BitStream build_payload(const BitStream& reg, const BitStream& message,
                        std::size_t capacity);

struct ParsedPayload {
  BitStream reg;
  BitStream message;
};

// Inverse of build_payload. Throws Error(MalformedPayload) on short input or a
// length field that runs past the end.
ParsedPayload parse_payload(const BitStream& payload, std::size_t register_len);

}  // namespace pem
