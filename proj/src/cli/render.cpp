#include "shortck/render.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "shortck/error.hpp"
#include "shortck/parallel.hpp"
#include "shortck/shortfb.hpp"

namespace shortck {

const char* to_string(SliceMode m) { return m == SliceMode::fix_w ? "fix_w" : "fix_line"; }

const char* to_string(RenderQuantity q) {
  switch (q) {
    case RenderQuantity::green: return "green";
    case RenderQuantity::classify: return "classify";
    case RenderQuantity::envelope: return "envelope";
  }
  return "green";
}

std::complex<double> pixel_coord(const RenderConfig& cfg, int i, int j) {
  const double u = (i + 0.5) / cfg.nx - 0.5;
  const double v = 0.5 - (j + 0.5) / cfg.ny;
  return cfg.center + std::complex<double>(u * cfg.width, v * cfg.height);
}

PointK slice_point(const RenderConfig& cfg, std::complex<double> zeta) {
  if (cfg.mode == SliceMode::fix_w) return PointK::of(zeta, cfg.w_fixed);
  return PointK::of(cfg.base_z + zeta * cfg.dir_z, cfg.base_w + zeta * cfg.dir_w);
}

GridOutput render_slice(const MapSequence& seq, const RenderConfig& cfg, const EstimatorConfig& est, int threads) {
  if (cfg.nx < 1 || cfg.ny < 1) throw UsageError("nx and ny must be at least 1");
  if (!(cfg.width > 0.0) || !(cfg.height > 0.0)) throw UsageError("window width and height must be positive");
  if (seq.dim() != 2) throw UsageError("render needs a two-dimensional sequence");
  GridOutput g;
  g.nx = cfg.nx;
  g.ny = cfg.ny;
  const std::size_t n = static_cast<std::size_t>(cfg.nx) * static_cast<std::size_t>(cfg.ny);
  std::vector<PointK> xs(n);
  for (int j = 0; j < cfg.ny; ++j)
    for (int i = 0; i < cfg.nx; ++i)
      xs[static_cast<std::size_t>(j) * cfg.nx + i] = slice_point(cfg, pixel_coord(cfg, i, j));
  g.values.assign(n, 0.0);
  g.codes.assign(n, kPixelUndecided);
  g.pixels.assign(n, 255);

  switch (cfg.quantity) {
    case RenderQuantity::green: {
      const auto res = green_batch(seq, xs, est, threads);
      double vmax = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        g.values[p] = res[p].value.value();
        if (res[p].status == GreenStatus::zero) g.codes[p] = kPixelZero;
        if (res[p].status == GreenStatus::stabilized) g.codes[p] = kPixelEscaped;
        if (g.codes[p] != kPixelUndecided && std::isfinite(g.values[p])) vmax = std::max(vmax, g.values[p]);
      }
      g.green_max = cfg.green_max > 0.0 ? cfg.green_max : vmax;
      for (std::size_t p = 0; p < n; ++p) {
        if (g.codes[p] == kPixelUndecided) continue;
        const double f = g.green_max > 0.0 ? std::min(1.0, g.values[p] / g.green_max) : 0.0;
        g.pixels[p] = static_cast<std::uint8_t>(std::lround(254.0 * f));
      }
      break;
    }
    case RenderQuantity::classify:
      parallel_for(n, resolve_threads(threads), [&](std::size_t p) {
        const auto c = classify(seq, xs[p], est);
        g.values[p] = c.steps;
        g.codes[p] = c.status == PointStatus::converged ? kPixelZero
                     : c.status == PointStatus::escaped ? kPixelEscaped
                                                        : kPixelUndecided;
      });
      break;
    case RenderQuantity::envelope:
      parallel_for(n, resolve_threads(threads), [&](std::size_t p) {
        const auto e = phi_u(seq, xs[p], cfg.envelope_n);
        g.values[p] = e.u_n;
        const auto s = envelope_sign(e, cfg.envelope_slack);
        g.codes[p] = s == EnvelopeSign::negative ? kPixelZero
                     : s == EnvelopeSign::positive ? kPixelEscaped
                                                   : kPixelUndecided;
      });
      break;
  }
  if (cfg.quantity != RenderQuantity::green)
    for (std::size_t p = 0; p < n; ++p)
      g.pixels[p] = g.codes[p] == kPixelZero ? 0 : g.codes[p] == kPixelEscaped ? 128 : 255;
  return g;
}

void write_pgm(const GridOutput& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << "P5\n" << g.nx << ' ' << g.ny << "\n255\n";
  out.write(reinterpret_cast<const char*>(g.pixels.data()), static_cast<std::streamsize>(g.pixels.size()));
  if (!out) throw Error("cannot write " + path);
}

void write_csv(const GridOutput& g, const RenderConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "i,j,re,im,value,code\n";
  char buf[160];
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t p = static_cast<std::size_t>(j) * g.nx + i;
      const auto z = pixel_coord(cfg, i, j);
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%d\n", i, j, z.real(), z.imag(), g.values[p],
                    static_cast<int>(g.codes[p]));
      out << buf;
    }
  if (!out) throw Error("cannot write " + path);
}

}  // namespace shortck
