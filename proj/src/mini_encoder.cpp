#include "vbrsim/mini_encoder.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vbrsim {

BlockFrame::BlockFrame(int w, int h, std::uint8_t fill, ChromaScheme scheme)
    : width(w), height(h), luma(static_cast<std::size_t>(w) * h, fill), chroma_scheme(scheme) {}

std::int64_t BlockFrame::chroma_samples() const {
  const std::int64_t plane = static_cast<std::int64_t>(width) * height;
  return chroma_scheme == ChromaScheme::S444 ? 2 * plane : plane / 2;
}

void BlockFrame::validate() const {
  if (width <= 0 || height <= 0 || width % 8 != 0 || height % 8 != 0) {
    throw std::invalid_argument("frame dimensions must be positive multiples of 8");
  }
  if (luma.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("luma sample count does not match dimensions");
  }
}

namespace {

using Block = std::array<double, 64>;
using Levels = std::array<int, 64>;

constexpr std::array<int, 64> kZigZag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

const std::array<double, 64>& cosine_table() {
  static const auto table = [] {
    std::array<double, 64> t{};
    for (int k = 0; k < 8; ++k) {
      const double scale = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n) {
        t[k * 8 + n] = scale * std::cos((2 * n + 1) * k * std::numbers::pi / 16.0);
      }
    }
    return t;
  }();
  return table;
}

// Orthonormal separable DCT-II.
Block forward_dct(const Block& in) {
  const auto& c = cosine_table();
  Block rows{};
  for (int y = 0; y < 8; ++y) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int x = 0; x < 8; ++x) acc += c[u * 8 + x] * in[y * 8 + x];
      rows[y * 8 + u] = acc;
    }
  }
  Block out{};
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y) acc += c[v * 8 + y] * rows[y * 8 + u];
      out[v * 8 + u] = acc;
    }
  }
  return out;
}

Levels quantize(const Block& coeffs, int quantizer) {
  Levels out{};
  for (int i = 0; i < 64; ++i) {
    out[i] = static_cast<int>(std::lround(coeffs[i] / quantizer));
  }
  return out;
}

int magnitude_category(int v) {
  int a = std::abs(v);
  int bits = 0;
  while (a > 0) {
    ++bits;
    a >>= 1;
  }
  return bits;
}

// Collects JPEG-style symbols: DC categories of the DPCM difference, and
// (run, category) pairs for AC with ZRL/EOB. Magnitude bits are sent raw.
class SymbolCounter {
 public:
  void add_block(const Levels& levels) {
    const int dc_diff = levels[0] - previous_dc_;
    previous_dc_ = levels[0];
    const int dc_cat = magnitude_category(dc_diff);
    ++dc_symbols_[dc_cat];
    raw_bits_ += dc_cat;

    int run = 0;
    int last_nonzero = 0;
    for (int i = 63; i > 0; --i) {
      if (levels[kZigZag[i]] != 0) {
        last_nonzero = i;
        break;
      }
    }
    for (int i = 1; i <= last_nonzero; ++i) {
      const int level = levels[kZigZag[i]];
      if (level == 0) {
        ++run;
        continue;
      }
      while (run > 15) {
        ++ac_symbols_[0xF0];
        run -= 16;
      }
      const int cat = magnitude_category(level);
      ++ac_symbols_[(run << 4) | cat];
      raw_bits_ += cat;
      run = 0;
    }
    if (last_nonzero < 63) ++ac_symbols_[0x00];
  }

  // Entropy estimate with the one-bit-per-symbol floor any prefix code has.
  std::int64_t bytes() const {
    const double bits = alphabet_bits(dc_symbols_) + alphabet_bits(ac_symbols_) +
                        static_cast<double>(raw_bits_);
    return static_cast<std::int64_t>(std::ceil(bits / 8.0));
  }

 private:
  static double alphabet_bits(const std::map<int, std::int64_t>& counts) {
    std::int64_t total = 0;
    for (const auto& [sym, n] : counts) total += n;
    double bits = 0.0;
    for (const auto& [sym, n] : counts) {
      const double p = static_cast<double>(n) / static_cast<double>(total);
      bits += static_cast<double>(n) * std::max(1.0, -std::log2(p));
    }
    return bits;
  }

  int previous_dc_ = 0;
  std::map<int, std::int64_t> dc_symbols_;
  std::map<int, std::int64_t> ac_symbols_;
  std::int64_t raw_bits_ = 0;
};

void check_quantizer(int quantizer) {
  if (quantizer < 1) throw std::invalid_argument("quantizer must be >= 1");
}

}  // namespace

std::int64_t encode_intra(const BlockFrame& frame, int quantizer) {
  frame.validate();
  check_quantizer(quantizer);
  SymbolCounter symbols;
  for (int by = 0; by < frame.height; by += 8) {
    for (int bx = 0; bx < frame.width; bx += 8) {
      Block block{};
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) block[y * 8 + x] = frame.at(bx + x, by + y) - 128.0;
      }
      symbols.add_block(quantize(forward_dct(block), quantizer));
    }
  }
  return std::max<std::int64_t>(1, symbols.bytes());
}

std::int64_t encode_inter(const BlockFrame& frame, const BlockFrame& reference, int search_radius,
                          int quantizer, const EncoderConfig& config) {
  frame.validate();
  reference.validate();
  check_quantizer(quantizer);
  if (frame.width != reference.width || frame.height != reference.height) {
    throw std::invalid_argument("frame and reference dimensions differ");
  }
  if (search_radius < 0) throw std::invalid_argument("search_radius must be >= 0");

  auto sad = [&](int bx, int by, int rx, int ry) {
    std::int64_t total = 0;
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) {
        total += std::abs(static_cast<int>(frame.at(bx + x, by + y)) -
                          static_cast<int>(reference.at(rx + x, ry + y)));
      }
    }
    return total;
  };

  SymbolCounter symbols;
  for (int by = 0; by < frame.height; by += 8) {
    for (int bx = 0; bx < frame.width; bx += 8) {
      int best_dx = 0;
      int best_dy = 0;
      std::int64_t best = sad(bx, by, bx, by);
      for (int dy = -search_radius; dy <= search_radius && best > 0; ++dy) {
        for (int dx = -search_radius; dx <= search_radius; ++dx) {
          const int rx = bx + dx;
          const int ry = by + dy;
          if (rx < 0 || ry < 0 || rx + 8 > frame.width || ry + 8 > frame.height) continue;
          const std::int64_t cost = sad(bx, by, rx, ry);
          const bool shorter = std::abs(dx) + std::abs(dy) < std::abs(best_dx) + std::abs(best_dy);
          if (cost < best || (cost == best && shorter)) {
            best = cost;
            best_dx = dx;
            best_dy = dy;
          }
        }
      }
      Block residual{};
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          residual[y * 8 + x] = static_cast<double>(frame.at(bx + x, by + y)) -
                                reference.at(bx + best_dx + x, by + best_dy + y);
        }
      }
      symbols.add_block(quantize(forward_dct(residual), quantizer));
    }
  }
  const std::int64_t mv_bytes = static_cast<std::int64_t>(frame.blocks()) * config.mv_cost_bytes;
  return std::max<std::int64_t>(1, symbols.bytes() + mv_bytes);
}

BlockFrame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  auto next_token = [&]() {
    std::string token;
    char c = 0;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!token.empty()) break;
        continue;
      }
      token.push_back(c);
    }
    return token;
  };

  if (next_token() != "P5") throw std::runtime_error(path.string() + ": not a binary PGM");
  const int w = std::stoi(next_token());
  const int h = std::stoi(next_token());
  if (std::stoi(next_token()) != 255) {
    throw std::runtime_error(path.string() + ": maxval must be 255");
  }
  BlockFrame frame(w, h);
  in.read(reinterpret_cast<char*>(frame.luma.data()), static_cast<std::streamsize>(frame.luma.size()));
  if (in.gcount() != static_cast<std::streamsize>(frame.luma.size())) {
    throw std::runtime_error(path.string() + ": truncated sample data");
  }
  frame.validate();
  return frame;
}

void write_pgm(const std::filesystem::path& path, const BlockFrame& frame) {
  frame.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << frame.width << ' ' << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.luma.data()),
            static_cast<std::streamsize>(frame.luma.size()));
}

}  // namespace vbrsim
