#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pem/bitstream.hpp"
#include "pem/imaging.hpp"
#include "pem/predictor.hpp"

namespace pem {

struct StegoParams {
  int theta = 1;
  PredictorModel first;   // predicts white from black
  PredictorModel second;  // predicts black from stego white
  InitStrategy init = InitStrategy::Zero;

  static StegoParams lmi(int theta) { return {theta, {}, {}, InitStrategy::Zero}; }
};

// ---------------------------------------------------------------------------
// Residual modulation

struct Modulated {
  int residual;      // modulated error
  int consumed;      // payload bits read: 0, 1 or 2
};

// Reads from `payload`'s cursor. Throws Error(PayloadExhausted) if the bits it
// needs are missing; the cursor is unchanged in that case.
Modulated modulate(int residual, BitStream& payload, int theta);

struct Demodulated {
  int residual;
  int count;                   // 0, 1 or 2
  std::uint8_t bits[2] = {0, 0};
};

Demodulated demodulate(int modulated, int theta);

inline bool in_stego_channel(int residual, int theta) {
  return residual > -theta && residual < theta;
}

// ---------------------------------------------------------------------------
// Layers

struct LayerOutcome {
  PixelPlane plane;
  std::size_t bits = 0;              // consumed (embed) or extracted
  std::vector<std::uint8_t> carriers;  // 1 at query pixels with |eps| < theta
  BitStream extracted;               // extract only
};

// Visits the query pixels in raster order. Context samples are never touched.
// Throws Error(MalformedPayload) if a stego pixel would leave [0,255], which
// cannot happen for a pre-processed plane.
LayerOutcome embed_layer(const PixelPlane& plane, Side query, const PredictedPlane& predicted,
                         BitStream& payload, int theta);
// Throws Error(MalformedPayload) if a restored pixel would leave [0,255].
LayerOutcome extract_layer(const PixelPlane& stego, Side query, const PredictedPlane& predicted,
                           int theta);

// ---------------------------------------------------------------------------
// Pipelines

struct EncodeReport {
  PixelPlane stego;
  std::size_t register_bits = 0;
  std::size_t payload_bits_used = 0;  // bits consumed across both layers
  std::size_t carriers = 0;
};

// Throws CapacityExceeded when the message does not fit.
EncodeReport encode_detailed(const PixelPlane& cover, const BitStream& message,
                             const StegoParams& params);
PixelPlane encode(const PixelPlane& cover, const BitStream& message, const StegoParams& params);

struct Decoded {
  PixelPlane cover;
  BitStream message;
};

// Throws Error(MalformedPayload) when the stego does not decode under `params`.
Decoded decode(const PixelPlane& stego, const StegoParams& params);

struct CapacityReport {
  std::size_t carriers = 0;       // stego-channel residuals in a zero-payload dry run
  std::size_t register_bits = 0;
  std::size_t message_bits = 0;   // carriers - register - length field, floored at 0
};

CapacityReport capacity_report(const PixelPlane& cover, const StegoParams& params);
std::size_t estimate_capacity(const PixelPlane& cover, const StegoParams& params);

}  // namespace pem
