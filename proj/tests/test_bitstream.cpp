#include <doctest.h>

#include <random>

#include "pem/bitstream.hpp"
#include "pem/errors.hpp"

using pem::BitStream;

TEST_CASE("concat places a before b") {
  CHECK(pem::concat({1, 0}, {1}) == BitStream{1, 0, 1});
  CHECK(pem::concat({}, {0, 1}) == BitStream{0, 1});

  const BitStream ones(std::vector<std::uint8_t>(8, 1));
  const BitStream joined = pem::concat(ones, BitStream::zeros(8));
  REQUIRE(joined.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) CHECK(joined[i] == (i < 8 ? 1 : 0));
}

TEST_CASE("concat is associative with the empty stream as identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto make = [&] {
      BitStream s;
      const auto n = rng() % 40;
      for (std::size_t i = 0; i < n; ++i) s.push_back(rng() & 1);
      return s;
    };
    const BitStream a = make(), b = make(), c = make();
    CHECK(pem::concat(pem::concat(a, b), c) == pem::concat(a, pem::concat(b, c)));
    CHECK(pem::concat(a, {}) == a);
    CHECK(pem::concat({}, a) == a);
  }
}

TEST_CASE("cursor reads advance exactly and stop at the end") {
  BitStream s{1, 0, 1, 1};
  CHECK(s.read_bit() == 1);
  CHECK(s.cursor() == 1);
  CHECK(s.read_uint(3) == 0b011);
  CHECK(s.cursor() == 4);
  CHECK(s.remaining() == 0);
  CHECK_THROWS_AS(s.read_bit(), pem::Error);
  CHECK(s.cursor() == 4);
  s.rewind();
  CHECK_THROWS_AS(s.read_bits(5), pem::Error);
  CHECK(s.cursor() == 0);
}

TEST_CASE("bytes serialize MSB first") {
  const std::vector<std::uint8_t> bytes{0xA5, 0x01};
  const BitStream s = BitStream::from_bytes(bytes);
  CHECK(s == BitStream{1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1});
  CHECK(s.to_bytes() == bytes);
  CHECK(BitStream{1}.to_bytes() == std::vector<std::uint8_t>{0x80});
}

TEST_CASE("build_payload frames register, length, message, padding") {
  SUBCASE("empty register") {
    const BitStream p = pem::build_payload({}, {1, 0, 1}, 64);
    REQUIRE(p.size() == 64);
    BitStream r = p;
    CHECK(r.read_uint(32) == 3);
    CHECK(r.read_bits(3) == BitStream{1, 0, 1});
    for (std::size_t i = 35; i < 64; ++i) CHECK(p[i] == 0);
  }
  SUBCASE("empty message") {
    const BitStream p = pem::build_payload({1}, {}, 33);
    CHECK(p == pem::concat({1}, BitStream::zeros(32)));
  }
  SUBCASE("shortfall is reported") {
    const BitStream msg = BitStream::zeros(120);
    try {
      pem::build_payload({0, 1}, msg, 100);
      FAIL("expected CapacityExceeded");
    } catch (const pem::CapacityExceeded& e) {
      CHECK(e.shortfall() == 54);
      CHECK(e.code() == pem::ErrorCode::CapacityExceeded);
    }
  }
}

TEST_CASE("parse_payload inverts build_payload") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    BitStream v, m;
    const auto nv = rng() % 50, nm = rng() % 200;
    for (std::size_t i = 0; i < nv; ++i) v.push_back(rng() & 1);
    for (std::size_t i = 0; i < nm; ++i) m.push_back(rng() & 1);
    const std::size_t cap = nv + 32 + nm + rng() % 64;
    const auto parsed = pem::parse_payload(pem::build_payload(v, m, cap), v.size());
    CHECK(parsed.reg == v);
    CHECK(parsed.message == m);
  }
}

TEST_CASE("parse_payload edge cases") {
  const auto parsed = pem::parse_payload(BitStream::zeros(40), 0);
  CHECK(parsed.reg.empty());
  CHECK(parsed.message.empty());

  try {
    pem::parse_payload(BitStream::zeros(35), 4);
    FAIL("expected MalformedPayload");
  } catch (const pem::Error& e) {
    CHECK(e.code() == pem::ErrorCode::MalformedPayload);
  }

  BitStream bogus;
  bogus.append_uint(1000, 32);
  bogus.append(BitStream::zeros(10));
  try {
    pem::parse_payload(bogus, 0);
    FAIL("expected MalformedPayload");
  } catch (const pem::Error& e) {
    CHECK(e.code() == pem::ErrorCode::MalformedPayload);
  }
}
