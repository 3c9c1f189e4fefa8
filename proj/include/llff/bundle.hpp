#pragma once

#include "llff/mpi.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace llff {

/// Binary MPI container. Layout (little-endian):
///   "MPIB1\n"  u32 W  u32 H  u32 D  f64[17] camera  f64[D] disparities
///   f32[D*H*W*4] planes, far plane first, row-major, RGBA.
inline constexpr char kBundleMagic[] = "MPIB1\n";
inline constexpr std::size_t kBundleMagicSize = 6;

std::uint64_t bundle_header_bytes(int plane_count);
std::uint64_t bundle_size_bytes(int width, int height, int plane_count);

std::vector<std::uint8_t> encode_mpi(const Mpi& mpi);
/// Throws FormatError carrying the byte offset of the first violation.
Mpi decode_mpi(std::span<const std::uint8_t> bytes);

void export_mpi(const Mpi& mpi, const std::string& path);
Mpi import_mpi(const std::string& path);

/// Plain-text `key=value` sidecar.
struct BundleMeta {
  double z_min = 0.0;
  double z_max = 0.0;
  std::string source_image;
};

void write_bundle_meta(const std::string& path, const BundleMeta& meta);
BundleMeta read_bundle_meta(const std::string& path);

} // namespace llff
