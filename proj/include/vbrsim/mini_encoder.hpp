#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace vbrsim {

enum class ChromaScheme { S444, S420 };

// 8-bit luma plane. Chroma planes are not stored; the scheme only scales the
// chroma sample budget reported by chroma_samples().
struct BlockFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> luma;
  ChromaScheme chroma_scheme = ChromaScheme::S420;

  BlockFrame() = default;
  BlockFrame(int w, int h, std::uint8_t fill = 0, ChromaScheme scheme = ChromaScheme::S420);

  std::uint8_t at(int x, int y) const { return luma[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return luma[static_cast<std::size_t>(y) * width + x]; }

  int blocks() const { return (width / 8) * (height / 8); }
  std::int64_t chroma_samples() const;

  // Throws std::invalid_argument when dimensions are not multiples of 8 or the
  // sample count does not match.
  void validate() const;
  bool operator==(const BlockFrame&) const = default;
};

struct EncoderConfig {
  int mv_cost_bytes = 2;
};

// Intra coding: 8x8 DCT, uniform quantization, zig-zag run-length symbols,
// size estimated from the empirical entropy of those symbols.
std::int64_t encode_intra(const BlockFrame& frame, int quantizer);

// Inter coding: full-search SAD motion estimation within `search_radius`,
// residual coded as in encode_intra, plus a fixed motion-vector cost per block.
std::int64_t encode_inter(const BlockFrame& frame, const BlockFrame& reference, int search_radius,
                          int quantizer, const EncoderConfig& config = {});

// Binary PGM (P5, maxval 255): "P5\n<width> <height>\n255\n" then row-major bytes.
BlockFrame read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const BlockFrame& frame);

}  // namespace vbrsim
