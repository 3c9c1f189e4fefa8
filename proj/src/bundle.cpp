#include "llff/bundle.hpp"

#include "llff/errors.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace llff {
namespace {

static_assert(std::numeric_limits<float>::is_iec559 && std::numeric_limits<double>::is_iec559);

template <typename Word>
void put_le(std::vector<std::uint8_t>& out, Word word) {
  for (std::size_t i = 0; i < sizeof(Word); ++i) out.push_back(static_cast<std::uint8_t>(word >> (8 * i)));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) { put_le(out, v); }
void put_f64(std::vector<std::uint8_t>& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
void put_f32(std::vector<std::uint8_t>& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_{bytes} {}

  [[nodiscard]] std::uint64_t offset() const noexcept { return pos_; }

  template <typename Word>
  Word word(const char* what) {
    if (bytes_.size() - pos_ < sizeof(Word)) {
      throw FormatError(std::string{"truncated bundle while reading "} + what, bytes_.size());
    }
    Word w = 0;
    for (std::size_t i = 0; i < sizeof(Word); ++i) w |= static_cast<Word>(bytes_[pos_ + i]) << (8 * i);
    pos_ += sizeof(Word);
    return w;
  }
  std::uint32_t u32(const char* what) { return word<std::uint32_t>(what); }
  double f64(const char* what) { return std::bit_cast<double>(word<std::uint64_t>(what)); }
  float f32(const char* what) { return std::bit_cast<float>(word<std::uint32_t>(what)); }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

} // namespace

std::uint64_t bundle_header_bytes(int plane_count) {
  return kBundleMagicSize + 3 * 4 + 17 * 8 + 8ULL * static_cast<std::uint64_t>(plane_count);
}

std::uint64_t bundle_size_bytes(int width, int height, int plane_count) {
  return bundle_header_bytes(plane_count) +
         16ULL * static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height) *
             static_cast<std::uint64_t>(plane_count);
}

std::vector<std::uint8_t> encode_mpi(const Mpi& mpi) {
  std::vector<std::uint8_t> out;
  out.reserve(bundle_size_bytes(mpi.width(), mpi.height(), mpi.plane_count()));
  out.insert(out.end(), kBundleMagic, kBundleMagic + kBundleMagicSize);
  put_u32(out, static_cast<std::uint32_t>(mpi.width()));
  put_u32(out, static_cast<std::uint32_t>(mpi.height()));
  put_u32(out, static_cast<std::uint32_t>(mpi.plane_count()));
  for (double v : mpi.camera().to_record()) put_f64(out, v);
  for (double d : mpi.disparities()) put_f64(out, d);
  for (const auto& plane : mpi.planes()) {
    for (float v : plane.data()) put_f32(out, v);
  }
  return out;
}

Mpi decode_mpi(std::span<const std::uint8_t> bytes) {
  for (std::size_t i = 0; i < kBundleMagicSize; ++i) {
    if (i >= bytes.size()) throw FormatError("truncated bundle magic", bytes.size());
    if (bytes[i] != static_cast<std::uint8_t>(kBundleMagic[i])) throw FormatError("bad bundle magic", i);
  }
  Reader in{bytes.subspan(0)};
  for (std::size_t i = 0; i < kBundleMagicSize; ++i) in.word<std::uint8_t>("magic");

  const auto header_at = in.offset();
  const auto width = in.u32("width");
  const auto height = in.u32("height");
  const auto planes = in.u32("plane count");
  constexpr std::uint32_t kMaxDim = 1U << 16;
  if (width == 0 || height == 0 || planes == 0 || width > kMaxDim || height > kMaxDim || planes > 4096) {
    throw FormatError("bundle header has invalid dimensions", header_at);
  }

  const auto camera_at = in.offset();
  std::array<double, 17> record{};
  for (auto& v : record) v = in.f64("camera record");
  Camera camera;
  try {
    camera = Camera::from_record(record);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string{"invalid camera record: "} + e.what(), camera_at);
  }
  if (camera.width() != static_cast<int>(width) || camera.height() != static_cast<int>(height)) {
    throw FormatError("camera record size disagrees with header", camera_at);
  }

  std::vector<double> disparities(planes);
  for (std::uint32_t i = 0; i < planes; ++i) {
    const auto at = in.offset();
    disparities[i] = in.f64("disparities");
    if (!std::isfinite(disparities[i]) || disparities[i] < 0.0 || (i > 0 && !(disparities[i] > disparities[i - 1]))) {
      throw FormatError("disparities must be finite, non-negative and ascending", at);
    }
  }
  if (!(disparities.back() > 0.0)) throw FormatError("nearest disparity must be positive", in.offset() - 8);

  const auto expected = bundle_size_bytes(static_cast<int>(width), static_cast<int>(height), static_cast<int>(planes));
  if (bytes.size() < expected) throw FormatError("truncated bundle plane data", bytes.size());
  if (bytes.size() > expected) throw FormatError("trailing bytes after bundle plane data", expected);

  std::vector<ImageRGBA> images(planes, ImageRGBA(static_cast<int>(width), static_cast<int>(height)));
  for (auto& image : images) {
    for (float& v : image.data()) {
      const auto at = in.offset();
      v = in.f32("plane data");
      if (!(v >= 0.0F && v <= 1.0F)) throw FormatError("plane value outside [0,1]", at);
    }
  }
  return Mpi{std::move(camera), std::move(disparities), std::move(images)};
}

void export_mpi(const Mpi& mpi, const std::string& path) {
  const auto bytes = encode_mpi(mpi);
  const auto tmp = path + ".tmp";
  {
    std::ofstream out{tmp, std::ios::binary};
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + path);
  }
  std::filesystem::rename(tmp, path);
}

Mpi import_mpi(const std::string& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) throw std::runtime_error("cannot open bundle " + path);
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
  return decode_mpi(bytes);
}

void write_bundle_meta(const std::string& path, const BundleMeta& meta) {
  std::ofstream out{path};
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "z_min=" << meta.z_min << '\n' << "z_max=" << meta.z_max << '\n' << "source=" << meta.source_image << '\n';
}

BundleMeta read_bundle_meta(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw std::runtime_error("cannot open " + path);
  BundleMeta meta;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("meta line without '='", line_no, "line");
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 1);
    if (key == "z_min") {
      meta.z_min = std::stod(value);
    } else if (key == "z_max") {
      meta.z_max = std::stod(value);
    } else if (key == "source") {
      meta.source_image = value;
    }
  }
  return meta;
}

} // namespace llff
