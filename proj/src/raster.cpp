#include "satmodel/raster.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

#include "satmodel/errors.hpp"

namespace satmodel {

void Window::validate() const {
  std::vector<std::string> errors;
  if (!(x_min < x_max)) errors.push_back("window needs x_min < x_max");
  if (!(y_min < y_max)) errors.push_back("window needs y_min < y_max");
  if (width == 0 || height == 0) errors.push_back("window needs width*height >= 1");
  if (width > 65536 || height > 65536) errors.push_back("window larger than 65536 pixels per side");
  if (!errors.empty()) throw ValidationError(errors);
}

double Window::x_at(std::size_t i) const {
  const double dx = (x_max - x_min) / static_cast<double>(width);
  const double c = 0.5 * (x_min + x_max);
  return c + (static_cast<double>(i) - 0.5 * static_cast<double>(width - 1)) * dx;
}

double Window::y_at(std::size_t j) const {
  const double dy = (y_max - y_min) / static_cast<double>(height);
  const double c = 0.5 * (y_min + y_max);
  return c + (0.5 * static_cast<double>(height - 1) - static_cast<double>(j)) * dy;
}

bool fast_kernel_suitable(const ModelParams& params, std::size_t max_depth) {
  if (max_depth >= params.size()) return false;
  double bits = 0.0;
  for (std::size_t n = 0; n <= max_depth; ++n) {
    const Level& lv = params.level(n);
    if (!lv.q.exact || !lv.t) return false;
    bits += std::log2(static_cast<double>(*lv.q.exact));
  }
  return bits <= 40.0;
}

namespace {

struct FastLevel {
  double t;
  double q;
  double one_minus_t;
};

std::vector<FastLevel> fast_levels(const ModelParams& params, std::size_t max_depth) {
  std::vector<FastLevel> out;
  for (std::size_t n = 0; n <= max_depth; ++n) {
    const Level& lv = params.level(n);
    if (!lv.q.exact || !lv.t) throw NumericalError("double kernel needs exact q_" + std::to_string(n));
    const double t = lv.t->to_double();
    out.push_back({t, static_cast<double>(*lv.q.exact), 1.0 - t});
  }
  return out;
}

// Membership slack on log|phi(z)|, far above double roundoff of one level.
constexpr double kFastTolerance = 0x1p-40;

std::uint16_t fast_kernel(const std::vector<FastLevel>& levels, std::complex<double> z) {
  if (std::log(std::abs(z)) > kFastTolerance) return 0;
  const std::size_t N = levels.size() - 1;
  for (std::size_t n = 0; n <= N; ++n) {
    const FastLevel& lv = levels[n];
    if (z == 0.0) return static_cast<std::uint16_t>(n);  // M(0) = infinity
    const std::complex<double> u = (1.0 - lv.t / z) / lv.one_minus_t;
    if (u == 0.0) {
      z = 0.0;
      continue;
    }
    // |phi(z)| = |u|^q, so membership only needs log|u|.
    const double log_phi = lv.q * std::log(std::abs(u));
    if (log_phi > kFastTolerance) return static_cast<std::uint16_t>(n);
    const double arg = std::fmod(lv.q * std::arg(u), 2.0 * std::numbers::pi);
    z = std::polar(std::exp(log_phi), arg);
  }
  return static_cast<std::uint16_t>(N + 1);
}

template <typename RowFn>
void for_rows(std::size_t rows, unsigned threads, RowFn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::size_t j = next++; j < rows; j = next++) fn(j);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next = rows;
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::uint16_t fast_depth(const ModelParams& params, double x, double y, std::size_t max_depth) {
  return fast_kernel(fast_levels(params, max_depth), {x, y});
}

DepthGrid render_depth_grid(const ModelParams& params, const Window& window, std::size_t max_depth,
                            const RenderOptions& options) {
  window.validate();
  if (max_depth + 1 > params.size()) {
    throw ValidationError("render depth " + std::to_string(max_depth) + " needs " + std::to_string(max_depth + 1) +
                          " levels but only " + std::to_string(params.size()) + " are built");
  }
  if (max_depth >= 65535) throw ValidationError("render depth too large");
  DepthGrid grid;
  grid.window = window;
  grid.max_depth = max_depth;
  grid.depths.assign(window.width * window.height, 0);

  bool fast = options.backend == Backend::kFast;
  if (options.backend == Backend::kAuto) fast = fast_kernel_suitable(params, max_depth);

  if (fast) {
    const auto levels = fast_levels(params, max_depth);
    for_rows(window.height, options.threads, [&](std::size_t j) {
      const double y = window.y_at(j);
      std::uint16_t* row = grid.depths.data() + j * window.width;
      for (std::size_t i = 0; i < window.width; ++i) row[i] = fast_kernel(levels, {window.x_at(i), y});
    });
  } else {
    const Precision prec = params.precision();
    for_rows(window.height, options.threads, [&](std::size_t j) {
      const BigReal y(window.y_at(j), prec);
      std::uint16_t* row = grid.depths.data() + j * window.width;
      for (std::size_t i = 0; i < window.width; ++i) {
        const LogPolarComplex z = to_log_polar({BigReal(window.x_at(i), prec), y});
        row[i] = static_cast<std::uint16_t>(escape_depth(params, z, max_depth + 1));
      }
    });
  }
  return grid;
}

namespace {

std::int32_t find_root(std::vector<std::int32_t>& parent, std::int32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void unite(std::vector<std::int32_t>& parent, std::int32_t a, std::int32_t b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a == b) return;
  if (a < b) parent[b] = a;
  else parent[a] = b;
}

}  // namespace

std::vector<std::int32_t> label_components(const DepthGrid& grid, std::size_t n, std::size_t* count) {
  if (n > grid.max_depth) throw ValidationError("component level exceeds the grid depth");
  const std::size_t W = grid.window.width, H = grid.window.height;
  const std::size_t total = W * H;
  if (total > static_cast<std::size_t>(INT32_MAX)) throw ValidationError("grid too large to label");
  std::vector<std::int32_t> parent(total, -1);
  auto inside = [&](std::size_t k) { return grid.depths[k] > n; };
  for (std::size_t j = 0; j < H; ++j) {
    for (std::size_t i = 0; i < W; ++i) {
      const std::size_t k = j * W + i;
      if (!inside(k)) continue;
      parent[k] = static_cast<std::int32_t>(k);
      if (i > 0 && inside(k - 1)) unite(parent, static_cast<std::int32_t>(k), static_cast<std::int32_t>(k - 1));
      if (j > 0 && inside(k - W)) unite(parent, static_cast<std::int32_t>(k), static_cast<std::int32_t>(k - W));
    }
  }
  // Roots are the smallest index of each component, so a forward pass
  // assigns dense labels in scan order.
  std::vector<std::int32_t> labels(total, -1);
  std::int32_t next = 0;
  for (std::size_t k = 0; k < total; ++k) {
    if (parent[k] < 0) continue;
    const std::int32_t r = find_root(parent, static_cast<std::int32_t>(k));
    if (r == static_cast<std::int32_t>(k)) labels[k] = next++;
    else labels[k] = labels[r];
  }
  if (count) *count = static_cast<std::size_t>(next);
  return labels;
}

std::size_t count_components(const DepthGrid& grid, std::size_t n) {
  std::size_t count = 0;
  label_components(grid, n, &count);
  return count;
}

RealSlice critical_real_slice(const DepthGrid& grid, std::size_t n) {
  const Window& w = grid.window;
  RealSlice s;
  s.pixel_width = (w.x_max - w.x_min) / static_cast<double>(w.width);
  std::size_t row = w.height;
  for (std::size_t j = 0; j < w.height; ++j) {
    if (w.y_at(j) == 0.0) row = j;
  }
  if (row == w.height) throw ValidationError("window has no y = 0 pixel row (use an odd height, symmetric window)");
  const auto labels = label_components(grid, n);
  // Mask pixel of the real row closest to x = 1.
  std::int32_t target = -1;
  double best = INFINITY;
  for (std::size_t i = 0; i < w.width; ++i) {
    const std::int32_t l = labels[row * w.width + i];
    if (l < 0) continue;
    const double d = std::abs(w.x_at(i) - 1.0);
    if (d < best) {
      best = d;
      target = l;
    }
  }
  if (target < 0) return s;
  s.found = true;
  std::size_t first = w.width, last = 0, members = 0;
  for (std::size_t i = 0; i < w.width; ++i) {
    if (labels[row * w.width + i] != target) continue;
    first = std::min(first, i);
    last = std::max(last, i);
    ++members;
  }
  s.contiguous = members == last - first + 1;
  s.left = w.x_at(first);
  s.right = w.x_at(last);
  return s;
}

Palette default_palette(std::size_t max_depth) {
  Palette p(max_depth + 2, 0);
  const std::size_t span = std::max<std::size_t>(1, max_depth - (max_depth > 0 ? 1 : 0));
  for (std::size_t d = 1; d <= max_depth; ++d) p[d] = static_cast<std::uint8_t>(80 + (d - 1) * 160 / span);
  p[max_depth + 1] = 40;
  return p;
}

std::string write_image(const DepthGrid& grid, const Palette& palette) {
  if (palette.size() < grid.max_depth + 2) throw ValidationError("palette must cover depths 0..max_depth+1");
  std::string out = "P5 " + std::to_string(grid.window.width) + " " + std::to_string(grid.window.height) + " 255\n";
  out.reserve(out.size() + grid.depths.size());
  for (std::uint16_t d : grid.depths) out.push_back(static_cast<char>(palette[d]));
  return out;
}

void write_image_file(const std::string& path, const DepthGrid& grid, const Palette& palette) {
  const std::string bytes = write_image(grid, palette);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace satmodel
