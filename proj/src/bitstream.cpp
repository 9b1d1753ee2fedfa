#include "pem/bitstream.hpp"

#include <string>

#include "pem/errors.hpp"

namespace pem {

BitStream::BitStream(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) bits_.push_back(b ? 1 : 0);
}

BitStream::BitStream(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

BitStream BitStream::zeros(std::size_t count) {
  return BitStream(std::vector<std::uint8_t>(count, 0));
}

BitStream BitStream::from_bytes(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> bits;
  bits.reserve(bytes.size() * 8);
  for (std::uint8_t byte : bytes)
    for (int k = 7; k >= 0; --k) bits.push_back((byte >> k) & 1u);
  return BitStream(std::move(bits));
}

void BitStream::append(const BitStream& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

void BitStream::append_uint(std::uint64_t value, unsigned width) {
  for (unsigned k = width; k-- > 0;) bits_.push_back((value >> k) & 1u);
}

std::uint8_t BitStream::read_bit() {
  if (cursor_ >= bits_.size())
    throw Error(ErrorCode::ReadPastEnd, "bit stream exhausted");
  return bits_[cursor_++];
}

std::uint8_t BitStream::peek_bit(std::size_t offset) const {
  if (cursor_ + offset >= bits_.size())
    throw Error(ErrorCode::ReadPastEnd, "bit stream exhausted");
  return bits_[cursor_ + offset];
}

std::uint64_t BitStream::read_uint(unsigned width) {
  if (remaining() < width)
    throw Error(ErrorCode::ReadPastEnd,
                "need " + std::to_string(width) + " bits, have " +
                    std::to_string(remaining()));
  std::uint64_t value = 0;
  for (unsigned k = 0; k < width; ++k) value = (value << 1) | bits_[cursor_++];
  return value;
}

BitStream BitStream::read_bits(std::size_t count) {
  if (remaining() < count)
    throw Error(ErrorCode::ReadPastEnd,
                "need " + std::to_string(count) + " bits, have " +
                    std::to_string(remaining()));
  auto first = bits_.begin() + static_cast<std::ptrdiff_t>(cursor_);
  BitStream out(std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(count)));
  cursor_ += count;
  return out;
}

std::vector<std::uint8_t> BitStream::to_bytes() const {
  std::vector<std::uint8_t> bytes((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return bytes;
}

BitStream concat(const BitStream& a, const BitStream& b) {
  BitStream out = a;
  out.rewind();
  out.append(b);
  return out;
}

BitStream build_payload(const BitStream& reg, const BitStream& message,
                        std::size_t capacity) {
  const std::size_t required = reg.size() + kLengthFieldBits + message.size();
  if (required > capacity) throw CapacityExceeded(required, capacity);
  if (message.size() > 0xFFFFFFFFull)
    throw Error(ErrorCode::CapacityExceeded, "message longer than 2^32-1 bits");

  std::vector<std::uint8_t> bits;
  bits.reserve(capacity);
  bits.insert(bits.end(), reg.bits().begin(), reg.bits().end());
  for (unsigned k = kLengthFieldBits; k-- > 0;)
    bits.push_back((message.size() >> k) & 1u);
  bits.insert(bits.end(), message.bits().begin(), message.bits().end());
  bits.resize(capacity, 0);
  return BitStream(std::move(bits));
}

ParsedPayload parse_payload(const BitStream& payload, std::size_t register_len) {
  if (payload.size() < register_len + kLengthFieldBits)
    throw Error(ErrorCode::MalformedPayload,
                "payload of " + std::to_string(payload.size()) +
                    " bits cannot hold a " + std::to_string(register_len) +
                    "-bit register and the length field");
  BitStream reader = payload;
  reader.rewind();
  ParsedPayload out;
  out.reg = reader.read_bits(register_len);
  const std::uint64_t length = reader.read_uint(kLengthFieldBits);
  if (length > reader.remaining())
    throw Error(ErrorCode::MalformedPayload,
                "length field says " + std::to_string(length) + " bits but only " +
                    std::to_string(reader.remaining()) + " remain");
  out.message = reader.read_bits(static_cast<std::size_t>(length));
  out.reg.rewind();
  out.message.rewind();
  return out;
}

}  // namespace pem
