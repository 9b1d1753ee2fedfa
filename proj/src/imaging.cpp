#include "pem/imaging.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "pem/errors.hpp"

namespace pem {

PixelPlane::PixelPlane(int width, int height, std::uint8_t fill)
    : width_(width),
      height_(height),
      samples_(static_cast<std::size_t>(width) * height, fill) {
  if (width < 0 || height < 0)
    throw Error(ErrorCode::DimensionMismatch, "negative plane dimensions");
}

PixelPlane::PixelPlane(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width < 0 || height < 0 ||
      samples_.size() != static_cast<std::size_t>(width) * height)
    throw Error(ErrorCode::DimensionMismatch,
                "plane " + std::to_string(width) + "x" + std::to_string(height) +
                    " given " + std::to_string(samples_.size()) + " samples");
}

const char* to_string(Side s) { return s == Side::Black ? "black" : "white"; }

std::size_t side_count(Side side, int width, int height) {
  const std::size_t total = static_cast<std::size_t>(width) * height;
  const std::size_t white = (total + 1) / 2;  // (0,0) is white
  return side == Side::White ? white : total - white;
}

SplitPlanes split(const PixelPlane& img) {
  if (img.width() < 2 || img.height() < 2)
    throw Error(ErrorCode::ImageTooSmall, "split needs at least 2x2");
  SplitPlanes out;
  out.black = {Side::Black, img.width(), img.height(), {}};
  out.white = {Side::White, img.width(), img.height(), {}};
  out.black.values.reserve(side_count(Side::Black, img.width(), img.height()));
  out.white.values.reserve(side_count(Side::White, img.width(), img.height()));
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      (side_of(r, c) == Side::Black ? out.black : out.white).values.push_back(img.at(r, c));
  return out;
}

PixelPlane merge(const MaskedSamples& black, const MaskedSamples& white) {
  if (black.side != Side::Black || white.side != Side::White ||
      black.width != white.width || black.height != white.height ||
      black.values.size() != side_count(Side::Black, black.width, black.height) ||
      white.values.size() != side_count(Side::White, white.width, white.height))
    throw Error(ErrorCode::DimensionMismatch, "masked samples do not tile one board");
  PixelPlane img(black.width, black.height);
  std::size_t b = 0, w = 0;
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      img.at(r, c) = side_of(r, c) == Side::Black ? black.values[b++] : white.values[w++];
  return img;
}

namespace {

// Reads one whitespace-delimited header token; '#' comments are rejected.
std::string header_token(std::istream& in) {
  int ch = in.get();
  while (ch != EOF && std::isspace(ch)) ch = in.get();
  if (ch == '#') throw Error(ErrorCode::UnsupportedFormat, "PGM header comments are not supported");
  std::string tok;
  while (ch != EOF && !std::isspace(ch)) {
    tok.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  if (tok.empty()) throw Error(ErrorCode::IoError, "truncated PGM header");
  return tok;
}

int header_int(std::istream& in, const char* what) {
  const std::string tok = header_token(in);
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || value <= 0)
    throw Error(ErrorCode::UnsupportedFormat, std::string("bad PGM ") + what + ": " + tok);
  return value;
}

}  // namespace

PixelPlane read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const std::string magic = header_token(in);
  if (magic != "P5")
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": expected P5, got " + magic);
  const int width = header_int(in, "width");
  const int height = header_int(in, "height");
  const int maxval = header_int(in, "maxval");
  if (maxval != 255)
    throw Error(ErrorCode::UnsupportedFormat,
                path.string() + ": only maxval 255 is supported, got " + std::to_string(maxval));
  // header_token consumed the single whitespace byte after maxval.
  std::vector<std::uint8_t> samples(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(samples.size()));
  if (static_cast<std::size_t>(in.gcount()) != samples.size())
    throw Error(ErrorCode::IoError, path.string() + ": truncated pixel data");
  return PixelPlane(width, height, std::move(samples));
}

void write_pgm(const PixelPlane& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.samples().data()),
            static_cast<std::streamsize>(img.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace pem
