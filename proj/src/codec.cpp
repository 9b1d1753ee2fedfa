#include "pem/codec.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "pem/errors.hpp"
#include "pem/overflow.hpp"

namespace pem {

namespace {

constexpr int sign(int v) { return (v > 0) - (v < 0); }

}  // namespace

Modulated modulate(int residual, BitStream& payload, int theta) {
  auto need = [&](std::size_t n) {
    if (payload.remaining() < n)
      throw Error(ErrorCode::PayloadExhausted,
                  "payload ran out at bit " + std::to_string(payload.cursor()));
  };
  if (residual == 0) {
    need(1);
    if (payload.peek_bit() == 0) {
      payload.read_bit();
      return {0, 1};
    }
    need(2);
    payload.read_bit();
    return {payload.read_bit() ? +1 : -1, 2};
  }
  if (std::abs(residual) < theta) {
    need(1);
    const int bit = payload.read_bit();
    return {2 * residual + sign(residual) * bit, 1};
  }
  return {residual + sign(residual) * theta, 0};
}

Demodulated demodulate(int modulated, int theta) {
  const int mag = std::abs(modulated);
  if (mag <= 1) {
    if (modulated == 0) return {0, 1, {0, 0}};
    return {0, 2, {1, static_cast<std::uint8_t>(modulated > 0 ? 1 : 0)}};
  }
  if (mag < 2 * theta)
    return {(mag / 2) * sign(modulated), 1, {static_cast<std::uint8_t>(mag % 2), 0}};
  return {modulated - sign(modulated) * theta, 0, {0, 0}};
}

namespace {

void check_same_dims(const PixelPlane& plane, const PredictedPlane& predicted) {
  if (plane.width() != predicted.width || plane.height() != predicted.height)
    throw Error(ErrorCode::DimensionMismatch, "prediction does not match the plane");
}

}  // namespace

LayerOutcome embed_layer(const PixelPlane& plane, Side query, const PredictedPlane& predicted,
                         BitStream& payload, int theta) {
  check_theta(theta);
  check_same_dims(plane, predicted);
  LayerOutcome out{plane, 0, std::vector<std::uint8_t>(plane.size(), 0), {}};
  const std::size_t start = payload.cursor();
  for (int r = 0; r < plane.height(); ++r) {
    for (int c = 0; c < plane.width(); ++c) {
      if (side_of(r, c) != query) continue;
      const int y = predicted.at(r, c);
      const int residual = plane.at(r, c) - y;
      const Modulated m = modulate(residual, payload, theta);
      const int stego = y + m.residual;
      if (stego < 0 || stego > 255)
        throw Error(ErrorCode::MalformedPayload,
                    "stego pixel out of range at (" + std::to_string(r) + "," +
                        std::to_string(c) + "); was the cover pre-processed?");
      out.plane.at(r, c) = static_cast<std::uint8_t>(stego);
      if (in_stego_channel(residual, theta))
        out.carriers[static_cast<std::size_t>(r) * plane.width() + c] = 1;
    }
  }
  out.bits = payload.cursor() - start;
  return out;
}

LayerOutcome extract_layer(const PixelPlane& stego, Side query, const PredictedPlane& predicted,
                           int theta) {
  check_theta(theta);
  check_same_dims(stego, predicted);
  LayerOutcome out{stego, 0, std::vector<std::uint8_t>(stego.size(), 0), {}};
  for (int r = 0; r < stego.height(); ++r) {
    for (int c = 0; c < stego.width(); ++c) {
      if (side_of(r, c) != query) continue;
      const int y = predicted.at(r, c);
      const Demodulated d = demodulate(stego.at(r, c) - y, theta);
      const int restored = y + d.residual;
      if (restored < 0 || restored > 255)
        throw Error(ErrorCode::MalformedPayload,
                    "restored pixel out of range at (" + std::to_string(r) + "," +
                        std::to_string(c) + ")");
      out.plane.at(r, c) = static_cast<std::uint8_t>(restored);
      for (int k = 0; k < d.count; ++k) out.extracted.push_back(d.bits[k]);
      if (d.count > 0) out.carriers[static_cast<std::size_t>(r) * stego.width() + c] = 1;
    }
  }
  out.bits = out.extracted.size();
  return out;
}

namespace {

std::size_t count_ones(const std::vector<std::uint8_t>& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

// Both layers over an already pre-processed plane, reading `payload` in one pass.
struct TwoLayers {
  PixelPlane stego;
  std::size_t carriers = 0;
};

TwoLayers embed_both(const PixelPlane& processed, BitStream& payload, const StegoParams& p) {
  const PredictedPlane white_pred = predict(p.first, processed, Side::White, p.init);
  LayerOutcome first = embed_layer(processed, Side::White, white_pred, payload, p.theta);
  const PredictedPlane black_pred = predict(p.second, first.plane, Side::Black, p.init);
  LayerOutcome second = embed_layer(first.plane, Side::Black, black_pred, payload, p.theta);
  return {std::move(second.plane), count_ones(first.carriers) + count_ones(second.carriers)};
}

CapacityReport capacity_of(const Preprocessed& pre, const StegoParams& params) {
  BitStream zeros = BitStream::zeros(pre.plane.size());
  const TwoLayers dry = embed_both(pre.plane, zeros, params);
  CapacityReport report;
  report.carriers = dry.carriers;
  report.register_bits = pre.reg.size();
  const std::size_t overhead = pre.reg.size() + kLengthFieldBits;
  report.message_bits = dry.carriers > overhead ? dry.carriers - overhead : 0;
  return report;
}

}  // namespace

CapacityReport capacity_report(const PixelPlane& cover, const StegoParams& params) {
  return capacity_of(preprocess(cover, params.theta), params);
}

std::size_t estimate_capacity(const PixelPlane& cover, const StegoParams& params) {
  return capacity_report(cover, params).message_bits;
}

EncodeReport encode_detailed(const PixelPlane& cover, const BitStream& message,
                             const StegoParams& params) {
  const Preprocessed pre = preprocess(cover, params.theta);
  const CapacityReport cap = capacity_of(pre, params);
  const std::size_t required = pre.reg.size() + kLengthFieldBits + message.size();
  if (message.size() > cap.message_bits || required > cap.carriers)
    throw CapacityExceeded(required, cap.carriers);

  // Each query pixel reads at most two bits, so 2N bits never starve.
  BitStream payload =
      build_payload(pre.reg, message, std::max(required, 2 * cover.size()));
  TwoLayers layers = embed_both(pre.plane, payload, params);

  // Layer-two carriers depend on the payload itself, so the dry-run count is an
  // estimate; make sure every framed bit actually went in.
  if (payload.cursor() < required) throw CapacityExceeded(required, payload.cursor());

  return {std::move(layers.stego), pre.reg.size(), payload.cursor(), layers.carriers};
}

PixelPlane encode(const PixelPlane& cover, const BitStream& message, const StegoParams& params) {
  return encode_detailed(cover, message, params).stego;
}

Decoded decode(const PixelPlane& stego, const StegoParams& params) {
  check_theta(params.theta);
  const PredictedPlane black_pred = predict(params.second, stego, Side::Black, params.init);
  const LayerOutcome second = extract_layer(stego, Side::Black, black_pred, params.theta);
  const PredictedPlane white_pred = predict(params.first, second.plane, Side::White, params.init);
  const LayerOutcome first = extract_layer(second.plane, Side::White, white_pred, params.theta);
  const PixelPlane& processed = first.plane;

  for (std::uint8_t s : processed.samples())
    if (s < params.theta || s > 255 - params.theta)
      throw Error(ErrorCode::MalformedPayload,
                  "restored plane leaves the pre-processed range; wrong parameters?");

  const BitStream payload = concat(first.extracted, second.extracted);
  const std::size_t register_len = count_register_bits(processed, params.theta);
  ParsedPayload parsed = parse_payload(payload, register_len);
  try {
    return {postprocess(processed, parsed.reg, params.theta), std::move(parsed.message)};
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedPayload, e.what());
  }
}

}  // namespace pem
