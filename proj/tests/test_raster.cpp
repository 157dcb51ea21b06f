#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "satmodel/errors.hpp"
#include "satmodel/raster.hpp"

using namespace satmodel;

namespace {

using Fractions = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

ModelParams make(const char* C, const Fractions& f, Precision prec = 128) {
  return ModelParams(BigReal::from_string(C, prec), RotationSequence(f), f.size(), prec);
}

DepthGrid manual(std::size_t w, std::size_t h, std::size_t max_depth, std::vector<std::uint16_t> depths) {
  DepthGrid g;
  g.window = Window{0.0, 1.0, 0.0, 1.0, w, h};
  g.max_depth = max_depth;
  g.depths = std::move(depths);
  return g;
}

const Window kRightHalf{-0.2, 1.05, -0.65, 0.65, 1024, 1024};

}  // namespace

TEST_CASE("window validation") {
  CHECK_THROWS_AS((Window{1.0, 0.0, 0.0, 1.0, 4, 4}.validate()), ValidationError);
  CHECK_THROWS_AS((Window{0.0, 1.0, 0.0, 1.0, 0, 4}.validate()), ValidationError);
  CHECK_NOTHROW((Window{0.0, 1.0, 0.0, 1.0, 1, 1}.validate()));
}

TEST_CASE("pixel centers are symmetric for a symmetric window") {
  const Window w{-1.0, 1.0, -0.5, 0.5, 7, 9};
  for (std::size_t j = 0; j < 9; ++j) CHECK(w.y_at(j) == -w.y_at(8 - j));
  CHECK(w.y_at(4) == 0.0);
  CHECK(w.x_at(3) == 0.0);
}

TEST_CASE("a window outside the closed disk escapes everywhere at depth 0") {
  const ModelParams params = make("1.5", {{1, 3}, {1, 2}});
  for (Backend b : {Backend::kFast, Backend::kExact}) {
    const DepthGrid g = render_depth_grid(params, Window{1.1, 2.0, 0.5, 1.5, 16, 16}, 1, {1, b});
    for (auto d : g.depths) CHECK(d == 0);
  }
}

TEST_CASE("component counting on hand-made masks") {
  // Full mask: one component; empty mask: none.
  CHECK(count_components(manual(3, 2, 1, {2, 2, 2, 2, 2, 2}), 0) == 1);
  CHECK(count_components(manual(3, 2, 1, {0, 0, 0, 0, 0, 0}), 0) == 0);
  // Diagonal neighbours are separate under 4-connectivity.
  CHECK(count_components(manual(2, 2, 1, {2, 0, 0, 2}), 0) == 2);
  // Level n keeps pixels with depth > n.
  const DepthGrid g = manual(5, 1, 2, {3, 1, 3, 2, 3});
  CHECK(count_components(g, 0) == 1);
  CHECK(count_components(g, 1) == 2);
  CHECK(count_components(g, 2) == 3);
}

TEST_CASE("fractions (1/3, 1/2), C = 1.5: components 1, 3, 6 at levels 0, 1, 2") {
  const ModelParams params = make("1.5", {{1, 3}, {1, 2}, {1, 3}});
  const DepthGrid g = render_depth_grid(params, kRightHalf, 2);
  CHECK(count_components(g, 0) == 1);
  CHECK(count_components(g, 1) == 3);
  CHECK(count_components(g, 2) == 6);
}

TEST_CASE("small scales with prod q_k <= 100 give N_n components") {
  const std::vector<Fractions> cases = {
      {{1, 2}, {1, 2}, {1, 2}}, {{1, 2}, {1, 3}, {1, 2}}, {{1, 4}, {1, 3}, {1, 2}}, {{1, 2}, {1, 5}, {1, 2}},
      {{1, 3}, {1, 3}, {1, 2}}, {{2, 5}, {1, 2}, {1, 2}}, {{1, 2}, {1, 2}, {1, 5}}};
  for (const auto& f : cases) {
    const ModelParams params = make("1.2", f);
    const DepthGrid g = render_depth_grid(params, Window{-0.2, 1.05, -0.75, 0.75, 1201, 1201}, 2);
    std::uint64_t N = 1;
    for (std::size_t n = 0; n <= 2; ++n) {
      INFO("q = (" << f[0].second << ", " << f[1].second << ") level " << n);
      CHECK(count_components(g, n) == N);
      N *= f[n].second;
    }
  }
}

TEST_CASE("fractions (1/28, 1/39670), C = 3.2: 28 first-level components, critical slice ends at 1") {
  const ModelParams params = make("3.2", {{1, 28}, {1, 39670}});
  const DepthGrid g = render_depth_grid(params, Window{0.04, 1.02, -0.49, 0.49, 1025, 1025}, 1);
  CHECK(count_components(g, 0) == 1);
  CHECK(count_components(g, 1) == 28);
  const RealSlice s = critical_real_slice(g, 1);
  REQUIRE(s.found);
  CHECK(s.contiguous);
  CHECK(std::abs(s.right - 1.0) <= s.pixel_width);
}

TEST_CASE("fast and exact kernels agree pixel for pixel on a small benchmark") {
  const ModelParams params = make("1.5", {{1, 3}, {1, 2}, {1, 3}});
  const Window w{-0.2, 1.05, -0.65, 0.65, 96, 96};
  const DepthGrid fast = render_depth_grid(params, w, 2, {1, Backend::kFast});
  const DepthGrid exact = render_depth_grid(params, w, 2, {1, Backend::kExact});
  std::size_t differ = 0;
  for (std::size_t k = 0; k < fast.depths.size(); ++k) differ += fast.depths[k] != exact.depths[k];
  CHECK(differ == 0);
  CHECK(fast_kernel_suitable(params, 2));
}

TEST_CASE("fast kernel declines denominators beyond its budget") {
  const ModelParams params = make("3.2", {{1, 28}, {1, 39670}, {1, 1000000007}});
  CHECK(fast_kernel_suitable(params, 1));
  CHECK_FALSE(fast_kernel_suitable(params, 2));
}

TEST_CASE("rendering is deterministic across runs and thread counts, and symmetric") {
  const ModelParams params = make("1.5", {{1, 3}, {1, 2}, {1, 3}});
  const Window w{-0.2, 1.05, -0.65, 0.65, 200, 201};
  const DepthGrid a = render_depth_grid(params, w, 2, {1, Backend::kAuto});
  const DepthGrid b = render_depth_grid(params, w, 2, {4, Backend::kAuto});
  const Palette pal = default_palette(2);
  CHECK(write_image(a, pal) == write_image(b, pal));
  for (std::size_t j = 0; j < w.height; ++j) {
    for (std::size_t i = 0; i < w.width; ++i) {
      if (a.at(i, j) != a.at(i, w.height - 1 - j)) FAIL_CHECK("asymmetric pixel " << i << "," << j);
    }
  }
}

TEST_CASE("image format") {
  const DepthGrid g = manual(1, 1, 0, {0});
  const std::string img = write_image(g, Palette{0, 0});
  CHECK(img == std::string("P5 1 1 255\n") + '\0');

  const DepthGrid g2 = manual(2, 2, 1, {0, 1, 2, 1});
  const std::string img2 = write_image(g2, Palette{7, 8, 9});
  CHECK(img2.substr(0, 11) == "P5 2 2 255\n");
  CHECK(img2.substr(11) == "\x07\x08\x09\x08");
  CHECK_THROWS_AS(write_image(g2, Palette{1, 2}), ValidationError);
}

TEST_CASE("default palette: outside black, bands lighten with depth, survivors dark") {
  const Palette p = default_palette(4);
  REQUIRE(p.size() == 6);
  CHECK(p[0] == 0);
  for (std::size_t d = 2; d <= 4; ++d) CHECK(p[d] > p[d - 1]);
  CHECK(p[1] > p[5]);
  CHECK(p[5] > p[0]);
  CHECK(default_palette(1).size() == 3);
}
