#include "pem/predictor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "pem/errors.hpp"
#include "pem/kernels.hpp"

namespace pem {

const char* to_string(InitStrategy s) {
  return s == InitStrategy::Zero ? "zero" : "localmean";
}

namespace {

void require_min_dims(const PixelPlane& img) {
  if (img.width() < 2 || img.height() < 2)
    throw Error(ErrorCode::ImageTooSmall, "prediction needs at least 2x2");
}

}  // namespace

PixelPlane initialise(const PixelPlane& img, Side query, InitStrategy strategy) {
  PixelPlane out = img;
  if (strategy == InitStrategy::LocalMean) {
    require_min_dims(img);
    kernels::local_mean(img.samples(), img.width(), img.height(), query, out.samples());
    return out;
  }
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      if (side_of(r, c) == query) out.at(r, c) = 0;
  return out;
}

PredictedPlane predict_lmi(const PixelPlane& img, Side query) {
  require_min_dims(img);
  PredictedPlane out{img.width(), img.height(), std::vector<std::uint8_t>(img.size())};
  kernels::local_mean(img.samples(), img.width(), img.height(), query, out.values);
  return out;
}

// ---------------------------------------------------------------------------
// Graph validation and evaluation

ConvGraph::ConvGraph(std::vector<GraphNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error(ErrorCode::ShapeMismatch, "graph has no nodes");
  channels_.resize(nodes_.size());
  int input_nodes = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const GraphNode& n = nodes_[i];
    const std::string where = "node " + std::to_string(i) + ": ";
    for (std::uint32_t ref : n.inputs)
      if (ref >= i)
        throw Error(ErrorCode::DanglingInputRef,
                    where + "input " + std::to_string(ref) + " is not an earlier node");
    auto need_inputs = [&](std::size_t lo, std::size_t hi) {
      if (n.inputs.size() < lo || n.inputs.size() > hi)
        throw Error(ErrorCode::ShapeMismatch,
                    where + "unexpected input count " + std::to_string(n.inputs.size()));
    };
    switch (n.op) {
      case OpCode::Input:
        need_inputs(0, 0);
        ++input_nodes;
        channels_[i] = 1;
        break;
      case OpCode::Conv2D: {
        need_inputs(1, 1);
        const Conv2DParams& p = n.conv;
        if (p.kernel_h < 1 || p.kernel_w < 1 || p.in_channels < 1 || p.out_channels < 1)
          throw Error(ErrorCode::ShapeMismatch, where + "conv dimensions must be positive");
        if (p.in_channels != channels_[n.inputs[0]])
          throw Error(ErrorCode::ShapeMismatch,
                      where + "conv expects " + std::to_string(p.in_channels) +
                          " input channels, got " + std::to_string(channels_[n.inputs[0]]));
        const std::size_t nw = static_cast<std::size_t>(p.out_channels) * p.in_channels *
                               p.kernel_h * p.kernel_w;
        if (p.weights.size() != nw)
          throw Error(ErrorCode::ShapeMismatch,
                      where + "expected " + std::to_string(nw) + " weights, got " +
                          std::to_string(p.weights.size()));
        if (p.biases.size() != static_cast<std::size_t>(p.out_channels))
          throw Error(ErrorCode::ShapeMismatch,
                      where + "expected " + std::to_string(p.out_channels) + " biases, got " +
                          std::to_string(p.biases.size()));
        channels_[i] = p.out_channels;
        break;
      }
      case OpCode::ReLU:
        need_inputs(1, 1);
        channels_[i] = channels_[n.inputs[0]];
        break;
      case OpCode::Add:
        need_inputs(2, 255);
        for (std::uint32_t ref : n.inputs)
          if (channels_[ref] != channels_[n.inputs[0]])
            throw Error(ErrorCode::ShapeMismatch, where + "add operands differ in channels");
        channels_[i] = channels_[n.inputs[0]];
        break;
      case OpCode::Concat: {
        need_inputs(1, 255);
        int total = 0;
        for (std::uint32_t ref : n.inputs) total += channels_[ref];
        channels_[i] = total;
        break;
      }
      default:
        throw Error(ErrorCode::ShapeMismatch,
                    where + "unknown op code " + std::to_string(static_cast<int>(n.op)));
    }
  }
  if (input_nodes != 1)
    throw Error(ErrorCode::ShapeMismatch,
                "graph must have exactly one input node, found " + std::to_string(input_nodes));
  if (channels_.back() != 1)
    throw Error(ErrorCode::ShapeMismatch, "output node must have one channel, has " +
                                              std::to_string(channels_.back()));
}

std::vector<double> ConvGraph::forward(const std::vector<double>& input, int width, int height,
                                       bool serial) const {
  const std::size_t plane = static_cast<std::size_t>(width) * height;
  if (input.size() != plane)
    throw Error(ErrorCode::GraphEvalError, "input map does not match the plane size");

  // Drop intermediate tensors after their last consumer has run.
  std::vector<std::size_t> last_use(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::uint32_t ref : nodes_[i].inputs) last_use[ref] = i;

  std::vector<std::vector<double>> values(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const GraphNode& n = nodes_[i];
    std::vector<double>& out = values[i];
    switch (n.op) {
      case OpCode::Input:
        out = input;
        break;
      case OpCode::Conv2D: {
        const Conv2DParams& p = n.conv;
        const kernels::ConvShape shape{p.in_channels, p.out_channels, p.kernel_h,
                                       p.kernel_w,    height,         width};
        out.assign(plane * p.out_channels, 0.0);
        const auto& in = values[n.inputs[0]];
        if (in.size() != plane * p.in_channels)
          throw Error(ErrorCode::GraphEvalError, "conv input has the wrong size at runtime");
        if (serial)
          kernels::conv2d_same_reference(in, p.weights, p.biases, shape, out);
        else
          kernels::conv2d_same(in, p.weights, p.biases, shape, out);
        break;
      }
      case OpCode::ReLU:
        out = values[n.inputs[0]];
        for (double& v : out) v = v > 0.0 ? v : 0.0;
        break;
      case OpCode::Add:
        out = values[n.inputs[0]];
        for (std::size_t k = 1; k < n.inputs.size(); ++k) {
          const auto& rhs = values[n.inputs[k]];
          if (rhs.size() != out.size())
            throw Error(ErrorCode::GraphEvalError, "add operands differ in size at runtime");
          for (std::size_t j = 0; j < out.size(); ++j) out[j] += rhs[j];
        }
        break;
      case OpCode::Concat:
        for (std::uint32_t ref : n.inputs)
          out.insert(out.end(), values[ref].begin(), values[ref].end());
        break;
    }
    if (out.size() != plane * channels_[i])
      throw Error(ErrorCode::GraphEvalError, "node " + std::to_string(i) + " produced " +
                                                 std::to_string(out.size()) + " values");
    for (std::uint32_t ref : n.inputs)
      if (last_use[ref] == i) std::vector<double>().swap(values[ref]);
  }
  return std::move(values.back());
}

PredictedPlane predict_nn(const ConvGraph& graph, const PixelPlane& img, Side query,
                          InitStrategy strategy, bool serial) {
  require_min_dims(img);
  const PixelPlane init = initialise(img, query, strategy);
  std::vector<double> input(init.size());
  for (std::size_t i = 0; i < input.size(); ++i) input[i] = init.samples()[i] / 255.0;
  const std::vector<double> output = graph.forward(input, img.width(), img.height(), serial);

  PredictedPlane out{img.width(), img.height(), img.samples()};
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (side_of(r, c) != query) continue;
      const std::size_t i = static_cast<std::size_t>(r) * img.width() + c;
      const double v = output[i] * 255.0;
      double rounded = std::round(v);  // half away from zero
      if (!(rounded >= 0.0)) rounded = 0.0;  // also catches NaN
      if (rounded > 255.0) rounded = 255.0;
      out.values[i] = static_cast<std::uint8_t>(rounded);
    }
  }
  return out;
}

PredictedPlane predict(const PredictorModel& model, const PixelPlane& img, Side query,
                       InitStrategy strategy) {
  if (model.is_lmi()) return predict_lmi(img, query);
  return predict_nn(model.graph(), img, query, strategy);
}

// ---------------------------------------------------------------------------
// NNPW serialization (little-endian)

namespace {

constexpr char kMagic[4] = {'N', 'N', 'P', 'W'};
constexpr std::uint32_t kVersion = 1;

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <typename T>
  T read(ErrorCode on_short, const char* what) {
    if (bytes_.size() - pos_ < sizeof(T))
      throw Error(on_short, std::string("NNPW truncated while reading ") + what);
    T value{};
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    if constexpr (std::endian::native == std::endian::big) value = byteswap(value);
    return value;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  template <typename T>
  static T byteswap(T v) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    std::reverse(raw, raw + sizeof(T));
    std::memcpy(&v, raw, sizeof(T));
    return v;
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

}  // namespace

ConvGraph parse_weights(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw Error(ErrorCode::BadMagic, "not an NNPW file");
  ByteReader in(bytes);
  in.read<std::uint32_t>(ErrorCode::BadMagic, "magic");
  const auto version = in.read<std::uint32_t>(ErrorCode::IoError, "version");
  if (version != kVersion)
    throw Error(ErrorCode::VersionUnsupported,
                "NNPW version " + std::to_string(version) + " is not supported");
  const auto count = in.read<std::uint32_t>(ErrorCode::IoError, "node count");

  std::vector<GraphNode> nodes;
  for (std::uint32_t i = 0; i < count; ++i) {
    GraphNode node;
    const auto op = in.read<std::uint8_t>(ErrorCode::IoError, "op code");
    if (op > static_cast<std::uint8_t>(OpCode::Concat))
      throw Error(ErrorCode::ShapeMismatch, "unknown op code " + std::to_string(op));
    node.op = static_cast<OpCode>(op);
    const auto n_inputs = in.read<std::uint8_t>(ErrorCode::IoError, "input count");
    for (int k = 0; k < n_inputs; ++k) {
      const auto ref = in.read<std::uint32_t>(ErrorCode::IoError, "input ref");
      if (ref >= i)
        throw Error(ErrorCode::DanglingInputRef, "node " + std::to_string(i) + " refers to node " +
                                                     std::to_string(ref));
      node.inputs.push_back(ref);
    }
    if (node.op == OpCode::Conv2D) {
      Conv2DParams& p = node.conv;
      p.kernel_h = in.read<std::uint16_t>(ErrorCode::IoError, "kH");
      p.kernel_w = in.read<std::uint16_t>(ErrorCode::IoError, "kW");
      p.in_channels = in.read<std::uint16_t>(ErrorCode::IoError, "inC");
      p.out_channels = in.read<std::uint16_t>(ErrorCode::IoError, "outC");
      const std::size_t nw = static_cast<std::size_t>(p.out_channels) * p.in_channels *
                             p.kernel_h * p.kernel_w;
      if (in.remaining() < (nw + p.out_channels) * sizeof(float))
        throw Error(ErrorCode::ShapeMismatch,
                    "node " + std::to_string(i) + ": tensor data shorter than declared shape");
      p.weights.resize(nw);
      for (auto& w : p.weights) w = in.read<float>(ErrorCode::ShapeMismatch, "weights");
      p.biases.resize(p.out_channels);
      for (auto& b : p.biases) b = in.read<float>(ErrorCode::ShapeMismatch, "biases");
    }
    nodes.push_back(std::move(node));
  }
  if (in.remaining() != 0)
    throw Error(ErrorCode::ShapeMismatch,
                std::to_string(in.remaining()) + " trailing bytes after the last node");
  return ConvGraph(std::move(nodes));
}

ConvGraph load_weights(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                  std::istreambuf_iterator<char>());
  return parse_weights(bytes);
}

std::vector<std::uint8_t> serialize_weights(const ConvGraph& graph) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(graph.nodes().size()));
  for (const GraphNode& n : graph.nodes()) {
    put<std::uint8_t>(out, static_cast<std::uint8_t>(n.op));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(n.inputs.size()));
    for (std::uint32_t ref : n.inputs) put<std::uint32_t>(out, ref);
    if (n.op == OpCode::Conv2D) {
      const Conv2DParams& p = n.conv;
      put<std::uint16_t>(out, static_cast<std::uint16_t>(p.kernel_h));
      put<std::uint16_t>(out, static_cast<std::uint16_t>(p.kernel_w));
      put<std::uint16_t>(out, static_cast<std::uint16_t>(p.in_channels));
      put<std::uint16_t>(out, static_cast<std::uint16_t>(p.out_channels));
      for (float w : p.weights) put<float>(out, w);
      for (float b : p.biases) put<float>(out, b);
    }
  }
  return out;
}

void save_weights(const ConvGraph& graph, const std::filesystem::path& path) {
  const auto bytes = serialize_weights(graph);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

ConvGraph identity_graph() { return box_mean_graph(1); }

ConvGraph box_mean_graph(int size) {
  GraphNode input;
  GraphNode conv;
  conv.op = OpCode::Conv2D;
  conv.inputs = {0};
  conv.conv.kernel_h = conv.conv.kernel_w = size;
  conv.conv.weights.assign(static_cast<std::size_t>(size) * size,
                           static_cast<float>(1.0 / (size * size)));
  conv.conv.biases = {0.0f};
  return ConvGraph({input, conv});
}

}  // namespace pem
