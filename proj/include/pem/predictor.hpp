#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "pem/imaging.hpp"

namespace pem {

enum class InitStrategy { Zero, LocalMean };

const char* to_string(InitStrategy s);

// Intensities in [0,255]. Only the query side carries predictions; the
// context side holds the input samples unchanged.
struct PredictedPlane {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;

  std::uint8_t at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col];
  }
  // The full plane, handy for whole-image quality metrics.
  PixelPlane as_plane() const { return PixelPlane(width, height, values); }

  friend bool operator==(const PredictedPlane&, const PredictedPlane&) = default;
};

// Replaces every `query` sample per `strategy`; context samples are untouched.
PixelPlane initialise(const PixelPlane& img, Side query, InitStrategy strategy);

// Local-mean interpolation. Throws Error(ImageTooSmall) below 2x2.
PredictedPlane predict_lmi(const PixelPlane& img, Side query);

// ---------------------------------------------------------------------------
// Convolutional predictor graphs (NNPW files)

enum class OpCode : std::uint8_t { Input = 0, Conv2D = 1, ReLU = 2, Add = 3, Concat = 4 };

struct Conv2DParams {
  int kernel_h = 1;
  int kernel_w = 1;
  int in_channels = 1;
  int out_channels = 1;
  std::vector<float> weights;  // [out][in][row][col]
  std::vector<float> biases;   // [out]
};

struct GraphNode {
  OpCode op = OpCode::Input;
  std::vector<std::uint32_t> inputs;  // indices of earlier nodes
  Conv2DParams conv;                  // used by Conv2D only
};

// A validated DAG in evaluation order. The last node is the output.
class ConvGraph {
 public:
  // Validates: one Input node, references to earlier nodes only, weight/bias
  // counts, channel agreement, single-channel output.
  explicit ConvGraph(std::vector<GraphNode> nodes);

  const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
  // Channels produced by each node.
  const std::vector<int>& channels() const noexcept { return channels_; }

  // Runs the graph on a 1 x height x width input, returning the output map.
  // `serial` selects the reference convolution kernel.
  std::vector<double> forward(const std::vector<double>& input, int width, int height,
                              bool serial = false) const;

 private:
  std::vector<GraphNode> nodes_;
  std::vector<int> channels_;
};

// Errors: IoError, BadMagic, VersionUnsupported, ShapeMismatch, DanglingInputRef.
ConvGraph load_weights(const std::filesystem::path& path);
ConvGraph parse_weights(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> serialize_weights(const ConvGraph& graph);
void save_weights(const ConvGraph& graph, const std::filesystem::path& path);

// Convenience graphs.
ConvGraph identity_graph();
// Single conv with a box filter of the given odd size.
ConvGraph box_mean_graph(int size);

// Either the LMI rule or a shared, immutable conv graph.
class PredictorModel {
 public:
  PredictorModel() = default;  // LMI
  explicit PredictorModel(ConvGraph graph)
      : impl_(std::make_shared<const ConvGraph>(std::move(graph))) {}

  static PredictorModel lmi() { return PredictorModel(); }

  bool is_lmi() const noexcept { return impl_ == nullptr; }
  const ConvGraph& graph() const { return *impl_; }

 private:
  std::shared_ptr<const ConvGraph> impl_;
};

// Scales initialise(img, query, strategy) by 1/255, runs the graph, maps back
// with x255, rounding half away from zero, and clamping to [0,255]. Context
// samples are copied through. Throws Error(GraphEvalError) on runtime shape
// trouble.
PredictedPlane predict_nn(const ConvGraph& graph, const PixelPlane& img, Side query,
                          InitStrategy strategy, bool serial = false);

// Dispatches on the model kind. LMI ignores `strategy`.
PredictedPlane predict(const PredictorModel& model, const PixelPlane& img, Side query,
                       InitStrategy strategy);

}  // namespace pem
