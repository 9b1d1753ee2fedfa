// pem: embed / extract / capacity / analyze / rdcurve

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pem/codec.hpp"
#include "pem/errors.hpp"
#include "pem/kernels.hpp"
#include "pem/metrics.hpp"
#include "pem/overflow.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitMalformed = 3;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string cover, stego, message, out;
  int theta = 1;
  std::vector<std::string> predictors;
  std::string init = "zero";
  std::uint64_t seed = 1;
  std::vector<int> thetas;
  int steps = 10;
  std::vector<std::string> inputs;
};

struct Predictor {
  std::string label;
  pem::PredictorModel first, second;
};

Predictor parse_predictor(const std::string& text) {
  if (text == "lmi") return {"lmi", {}, {}};
  if (text.rfind("nn:", 0) != 0) throw UsageError("unknown predictor '" + text + "'");
  const std::string files = text.substr(3);
  const auto comma = files.find(',');
  const std::string w1 = files.substr(0, comma);
  const std::string w2 = comma == std::string::npos ? w1 : files.substr(comma + 1);
  auto load = [](const std::string& path) {
    if (path.empty() || !fs::is_regular_file(path))
      throw UsageError("weight file not found: '" + path + "'");
    return pem::PredictorModel(pem::load_weights(path));
  };
  Predictor p{text, load(w1), {}};
  p.second = w2 == w1 ? p.first : load(w2);
  return p;
}

pem::InitStrategy parse_init(const std::string& s) {
  if (s == "zero") return pem::InitStrategy::Zero;
  if (s == "localmean") return pem::InitStrategy::LocalMean;
  throw UsageError("unknown init strategy '" + s + "'");
}

void check_theta(int theta) {
  if (theta < pem::kMinTheta || theta > pem::kMaxTheta)
    throw UsageError("theta must be in [" + std::to_string(pem::kMinTheta) + ", " +
                     std::to_string(pem::kMaxTheta) + "], got " + std::to_string(theta));
}

pem::StegoParams params_for(const Config& cfg, const Predictor& p, int theta) {
  check_theta(theta);
  return {theta, p.first, p.second, parse_init(cfg.init)};
}

Predictor single_predictor(const Config& cfg) {
  if (cfg.predictors.size() > 1) throw UsageError("only one --predictor allowed here");
  return parse_predictor(cfg.predictors.empty() ? "lmi" : cfg.predictors.front());
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pem::Error(pem::ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw pem::Error(pem::ErrorCode::IoError, "cannot write " + path.string());
}

std::string fixed6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Files named on the command line; directories expand to their *.pgm entries.
std::vector<fs::path> collect_images(const Config& cfg) {
  std::vector<std::string> roots = cfg.inputs;
  if (!cfg.cover.empty()) roots.insert(roots.begin(), cfg.cover);
  if (roots.empty()) throw UsageError("no input images (use --cover or positional paths)");
  std::vector<fs::path> out;
  for (const auto& r : roots) {
    if (fs::is_directory(r)) {
      for (const auto& e : fs::directory_iterator(r))
        if (e.is_regular_file() && e.path().extension() == ".pgm") out.push_back(e.path());
    } else {
      out.emplace_back(r);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> theta_list(const Config& cfg, std::vector<int> fallback) {
  auto list = cfg.thetas.empty() ? std::move(fallback) : cfg.thetas;
  for (int t : list) check_theta(t);
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());
  return list;
}

void print_header(std::uint64_t seed) {
  std::cout << "# pem-codec v1, seed=" << seed << "\n"
            << "image,predictor,theta,bpp,psnr_db,ssim,entropy_bits,variance,p95,gini\n";
}

int cmd_embed(const Config& cfg) {
  require(cfg.cover, "--cover");
  require(cfg.message, "--message");
  require(cfg.out, "--out");
  const auto params = params_for(cfg, single_predictor(cfg), cfg.theta);
  const auto cover = pem::read_pgm(cfg.cover);
  const auto message = pem::BitStream::from_bytes(read_bytes(cfg.message));
  const auto report = pem::encode_detailed(cover, message, params);
  pem::write_pgm(report.stego, cfg.out);
  std::cout << "bits_embedded=" << message.size() << "\n"
            << "bpp=" << fixed6(pem::embedding_rate(message.size(), cover)) << "\n"
            << "psnr_db=" << fixed6(pem::psnr(cover, report.stego)) << "\n";
  if (cover.width() >= 11 && cover.height() >= 11)
    std::cout << "ssim=" << fixed6(pem::ssim(cover, report.stego)) << "\n";
  return kExitOk;
}

int cmd_extract(const Config& cfg) {
  require(cfg.stego, "--stego");
  require(cfg.message, "--message");
  require(cfg.out, "--out");
  const auto params = params_for(cfg, single_predictor(cfg), cfg.theta);
  const auto stego = pem::read_pgm(cfg.stego);
  const auto decoded = pem::decode(stego, params);
  if (decoded.message.size() % 8 != 0)
    std::cerr << "warning: message length " << decoded.message.size()
              << " is not a whole number of bytes; zero-padding the last byte\n";
  pem::write_pgm(decoded.cover, cfg.out);
  write_bytes(cfg.message, decoded.message.to_bytes());
  std::cout << "bits_extracted=" << decoded.message.size() << "\n";
  return kExitOk;
}

int cmd_capacity(const Config& cfg) {
  require(cfg.cover, "--cover");
  const auto params = params_for(cfg, single_predictor(cfg), cfg.theta);
  const auto cover = pem::read_pgm(cfg.cover);
  const auto bits = pem::estimate_capacity(cover, params);
  std::cout << "capacity_bits=" << bits << "\n"
            << "bpp=" << fixed6(pem::embedding_rate(bits, cover)) << "\n";
  return kExitOk;
}

struct Row {
  std::string image, predictor;
  int theta;
  double bpp, psnr_db, ssim;
  pem::ErrorStats stats;
};

bool row_less(const Row& a, const Row& b) {
  return std::tie(a.image, a.predictor, a.theta, a.bpp) <
         std::tie(b.image, b.predictor, b.theta, b.bpp);
}

void print_rows(std::vector<Row> rows, std::uint64_t seed) {
  std::stable_sort(rows.begin(), rows.end(), row_less);
  print_header(seed);
  for (const auto& r : rows)
    std::cout << r.image << ',' << r.predictor << ',' << r.theta << ',' << fixed6(r.bpp) << ','
              << fixed6(r.psnr_db) << ',' << fixed6(r.ssim) << ',' << fixed6(r.stats.entropy_bits)
              << ',' << fixed6(r.stats.variance) << ',' << r.stats.p95 << ','
              << fixed6(r.stats.gini) << '\n';
}

// First-layer errors on the pre-processed cover.
pem::ErrorStats first_layer_stats(const pem::PixelPlane& cover, const pem::StegoParams& params) {
  const auto pre = pem::preprocess(cover, params.theta).plane;
  const auto y = pem::predict(params.first, pre, pem::Side::White, params.init);
  return pem::error_stats(pem::query_errors(pre, y, pem::Side::White));
}

std::vector<Predictor> predictor_list(const Config& cfg) {
  std::vector<Predictor> out;
  if (cfg.predictors.empty()) out.push_back(parse_predictor("lmi"));
  for (const auto& s : cfg.predictors) out.push_back(parse_predictor(s));
  return out;
}

int cmd_analyze(const Config& cfg) {
  const auto images = collect_images(cfg);
  const auto preds = predictor_list(cfg);
  const auto thetas = theta_list(cfg, {cfg.theta});
  std::vector<Row> rows;
  for (const auto& path : images) {
    const auto cover = pem::read_pgm(path);
    const std::string name = path.filename().string();
    for (const auto& p : preds) {
      const auto params0 = params_for(cfg, p, thetas.front());
      const auto predicted =
          pem::predict(p.first, cover, pem::Side::White, params0.init).as_plane();
      const double psnr = pem::psnr(cover, predicted);
      const double ssim = pem::ssim(cover, predicted);
      for (int t : thetas) {
        const auto params = params_for(cfg, p, t);
        const auto cap = pem::estimate_capacity(cover, params);
        rows.push_back({name, p.label, t, pem::embedding_rate(cap, cover), psnr, ssim,
                        first_layer_stats(cover, params)});
      }
    }
  }
  print_rows(std::move(rows), cfg.seed);
  return kExitOk;
}

int cmd_rdcurve(const Config& cfg) {
  if (cfg.steps < 1) throw UsageError("--steps must be >= 1");
  const auto images = collect_images(cfg);
  const auto preds = predictor_list(cfg);
  pem::RdOptions opt;
  opt.thetas = theta_list(cfg, {1, 2, 3});
  opt.steps = cfg.steps;
  opt.seed = cfg.seed;
  std::vector<Row> rows;
  for (const auto& path : images) {
    const auto cover = pem::read_pgm(path);
    const std::string name = path.filename().string();
    for (const auto& p : preds) {
      const auto base = params_for(cfg, p, opt.thetas.front());
      for (const auto& r : pem::rd_curve(cover, base, opt)) {
        auto params = base;
        params.theta = r.theta;
        rows.push_back({name, p.label, r.theta, r.bpp, r.psnr_db, r.ssim,
                        first_layer_stats(cover, params)});
      }
    }
  }
  print_rows(std::move(rows), cfg.seed);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible steganography by prediction-error modulation"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--theta", cfg.theta, "Stego-channel threshold");
    sub->add_option("--predictor", cfg.predictors, "lmi | nn:<weights> | nn:<w1>,<w2>");
    sub->add_option("--init", cfg.init, "zero | localmean");
  };

  auto* embed = app.add_subcommand("embed", "Hide a message in a cover PGM");
  add_common(embed);
  embed->add_option("--cover", cfg.cover);
  embed->add_option("--message", cfg.message, "Message file (raw bytes)");
  embed->add_option("--out", cfg.out, "Stego PGM");

  auto* extract = app.add_subcommand("extract", "Recover message and cover from a stego PGM");
  add_common(extract);
  extract->add_option("--stego", cfg.stego);
  extract->add_option("--message", cfg.message, "Where to write the message bytes");
  extract->add_option("--out", cfg.out, "Restored cover PGM");

  auto* capacity = app.add_subcommand("capacity", "Conservative capacity in bits");
  add_common(capacity);
  capacity->add_option("--cover", cfg.cover);

  auto* analyze = app.add_subcommand("analyze", "Prediction error statistics as CSV");
  add_common(analyze);
  analyze->add_option("--cover", cfg.cover, "PGM file or directory");
  analyze->add_option("inputs", cfg.inputs, "More PGM files or directories");
  analyze->add_option("--thetas", cfg.thetas)->delimiter(',');
  analyze->add_option("--seed", cfg.seed);

  auto* rdcurve = app.add_subcommand("rdcurve", "Rate-distortion sweep as CSV");
  add_common(rdcurve);
  rdcurve->add_option("--cover", cfg.cover, "PGM file or directory");
  rdcurve->add_option("inputs", cfg.inputs, "More PGM files or directories");
  rdcurve->add_option("--thetas", cfg.thetas)->delimiter(',');
  rdcurve->add_option("--steps", cfg.steps);
  rdcurve->add_option("--seed", cfg.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  pem::kernels::configure_threads_from_env();

  try {
    if (embed->parsed()) return cmd_embed(cfg);
    if (extract->parsed()) return cmd_extract(cfg);
    if (capacity->parsed()) return cmd_capacity(cfg);
    if (analyze->parsed()) return cmd_analyze(cfg);
    if (rdcurve->parsed()) return cmd_rdcurve(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pem::CapacityExceeded& e) {
    std::cerr << e.what() << "\n";
    return kExitCapacity;
  } catch (const pem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case pem::ErrorCode::MalformedPayload:
      case pem::ErrorCode::RegisterLengthMismatch:
        return kExitMalformed;
      case pem::ErrorCode::BadMagic:
      case pem::ErrorCode::VersionUnsupported:
      case pem::ErrorCode::ShapeMismatch:
      case pem::ErrorCode::DanglingInputRef:
      case pem::ErrorCode::InvalidTheta:
        return kExitUsage;
      default:
        return kExitIo;
    }
  }
  return kExitUsage;
}
