#pragma once

// Per-pixel evaluation of a quantity over a complex line of C^2.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "shortck/dynsys.hpp"
#include "shortck/green.hpp"

namespace shortck {

enum class SliceMode { fix_w, fix_line };
enum class RenderQuantity { green, classify, envelope };

const char* to_string(SliceMode m);
const char* to_string(RenderQuantity q);

struct RenderConfig {
  SliceMode mode = SliceMode::fix_w;
  // fix_w: points (zeta, w_fixed). fix_line: base + zeta * direction.
  std::complex<double> w_fixed{0.0, 0.0};
  std::complex<double> base_z{0.0, 0.0}, base_w{0.0, 0.0};
  std::complex<double> dir_z{1.0, 0.0}, dir_w{0.0, 0.0};
  std::complex<double> center{0.0, 0.0};
  double width = 4.0;
  double height = 4.0;
  int nx = 64;
  int ny = 64;
  RenderQuantity quantity = RenderQuantity::green;
  // Upper end of the green palette; <= 0 uses the largest finite value.
  double green_max = 0.0;
  int envelope_n = 20;
  double envelope_slack = 1e-9;
};

// Status codes per pixel.
enum PixelCode : std::uint8_t {
  kPixelZero = 0,       // converged / G = 0 / envelope negative
  kPixelEscaped = 1,    // escaped / G > 0 / envelope positive
  kPixelUndecided = 2,
};

struct GridOutput {
  int nx = 0;
  int ny = 0;
  // Row-major, row 0 at the top of the window.
  std::vector<double> values;
  std::vector<std::uint8_t> codes;
  std::vector<std::uint8_t> pixels;
  double green_max = 0.0;
};

// Slice coordinate of pixel (i, j).
std::complex<double> pixel_coord(const RenderConfig& cfg, int i, int j);
PointK slice_point(const RenderConfig& cfg, std::complex<double> zeta);

GridOutput render_slice(const MapSequence& seq, const RenderConfig& cfg, const EstimatorConfig& est, int threads);

void write_pgm(const GridOutput& g, const std::string& path);
void write_csv(const GridOutput& g, const RenderConfig& cfg, const std::string& path);

}  // namespace shortck
