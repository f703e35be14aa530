#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "scanpath/core.hpp"
#include "scanpath/image.hpp"
#include "scanpath/io_util.hpp"
#include "scanpath/rng.hpp"

using namespace scanpath;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "scanpath_test_core" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("rng streams are reproducible and seed-sensitive") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
      const std::uint64_t va = a.next_u64();
      all_equal &= va == b.next_u64();
      any_diff |= va != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
  }

  TEST_CASE("uniform stays in the half-open unit interval") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
    const double lo = -3.0, hi = 5.0;
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.uniform(lo, hi);
      CHECK(u >= lo);
      CHECK(u < hi);
    }
  }

  TEST_CASE("normal draws have roughly standard moments") {
    Rng rng(11);
    const int n = 50000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.normal();
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
    Rng rng2(11);
    (void)rng2.normal();
    const double shifted = rng2.normal(10.0, 2.0);
    CHECK(std::isfinite(shifted));
  }

  TEST_CASE("uniform_below is in range and covers all residues") {
    Rng rng(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t v = rng.uniform_below(7);
      CHECK(v < 7);
      seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK(rng.uniform_below(1) == 0);
  }

  TEST_CASE("shuffle permutes without changing the multiset") {
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[i] = i;
    std::vector<int> shuffled = v;
    Rng rng(5);
    rng.shuffle(shuffled);
    CHECK(shuffled != v);  // 50! permutations; identity would be astonishing
    std::vector<int> sorted = shuffled;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == v);

    std::vector<int> again(50);
    for (int i = 0; i < 50; ++i) again[i] = i;
    Rng rng2(5);
    rng2.shuffle(again);
    CHECK(again == shuffled);
  }

  TEST_CASE("hash_seed separates tags, seeds and indices") {
    CHECK(hash_seed(1, "a") == hash_seed(1, "a"));
    CHECK(hash_seed(1, "a") != hash_seed(1, "b"));
    CHECK(hash_seed(1, "a") != hash_seed(2, "a"));
    std::set<std::uint64_t> idx;
    for (std::uint64_t i = 0; i < 100; ++i) idx.insert(hash_seed(9, "stream", i));
    CHECK(idx.size() == 100);
    CHECK(hash_seed(9, "stream", 4) == hash_seed(9, "stream", 4));
  }

  TEST_CASE("scanpath frame normalization scales both axes independently") {
    Scanpath sp;
    sp.frame = {1024, 512};
    sp.fixations = {{512.0, 256.0, 100.0}};
    const Scanpath out = normalize_scanpath(sp, sp.frame, {224, 224});
    CHECK(out.frame == ReferenceFrame{224, 224});
    CHECK(out.fixations[0].x == doctest::Approx(112.0).epsilon(1e-12));
    CHECK(out.fixations[0].y == doctest::Approx(112.0).epsilon(1e-12));
    REQUIRE(out.fixations[0].duration.has_value());
    CHECK(*out.fixations[0].duration == 100.0);

    Scanpath bad = sp;
    bad.fixations[0].x = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(normalize_scanpath(bad, bad.frame, {224, 224}), std::invalid_argument);
  }

  TEST_CASE("clamp_to_frame moves outliers and records that it did") {
    Scanpath sp;
    sp.frame = {224, 224};
    sp.fixations = {{-5.0, 10.0}, {100.0, 300.0}, {50.0, 50.0}};
    const Scanpath out = clamp_to_frame(sp, sp.frame);
    CHECK(out.fixations[0].x == 0.0);
    CHECK(out.fixations[1].y == 224.0);
    CHECK(out.fixations[2].x == 50.0);
    CHECK(out.clamped);

    Scanpath inside;
    inside.frame = {224, 224};
    inside.fixations = {{10.0, 10.0}};
    CHECK_FALSE(clamp_to_frame(inside, inside.frame).clamped);
  }

  TEST_CASE("scanpath json round trip preserves everything") {
    Scanpath sp;
    sp.image_id = "img042";
    sp.source = Source::model;
    sp.frame = {224, 224};
    sp.clamped = true;
    sp.fixations = {{1.5, 2.25, 80.0}, {3.0, 4.0}};
    const Scanpath back = scanpath_from_json(scanpath_to_json(sp));
    CHECK(back == sp);
    CHECK(back.fixations[0].duration.has_value());
    CHECK_FALSE(back.fixations[1].duration.has_value());
  }

  TEST_CASE("jsonl files skip the meta header line on read") {
    const fs::path dir = temp_dir("jsonl");
    std::vector<Scanpath> paths(2);
    paths[0].image_id = "a";
    paths[0].source = Source::human;
    paths[0].frame = {224, 224};
    paths[0].fixations = {{1.0, 2.0}};
    paths[1] = paths[0];
    paths[1].image_id = "b";
    paths[1].source = Source::reference;

    const std::string file = (dir / "paths.jsonl").string();
    write_scanpaths_jsonl(file, paths, "{\"seed\":\"1\"}");
    const std::string raw = read_file(file);
    CHECK(raw.rfind("{\"meta\":", 0) == 0);

    const std::vector<Scanpath> back = read_scanpaths_jsonl(file);
    REQUIRE(back.size() == 2);
    CHECK(back[0] == paths[0]);
    CHECK(back[1] == paths[1]);
  }

  TEST_CASE("density grid files round trip values and flags") {
    const fs::path dir = temp_dir("dgrid");
    DensityGrid g = DensityGrid::zeros({4, 3});
    g.flags = DensityGrid::probability;
    for (std::size_t i = 0; i < g.values.size(); ++i)
      g.values[i] = static_cast<double>(i) / 12.0;

    const std::string file = (dir / "g.dgrid").string();
    write_density_grid(file, g, {"seed=1", "version=test"});
    const DensityGrid back = read_density_grid(file);
    CHECK(back.frame == g.frame);
    CHECK(back.flags == DensityGrid::probability);
    REQUIRE(back.values.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i)
      CHECK(back.values[i] == static_cast<double>(static_cast<float>(g.values[i])));

    const std::string header = read_lines(file)[0];
    CHECK(header.rfind("DGRID 4 3 ", 0) == 0);
    CHECK(header.find("probability") != std::string::npos);
    CHECK(header.find("seed=1") != std::string::npos);

    g.flags = DensityGrid::zscored;
    write_density_grid(file, g, {});
    CHECK(read_density_grid(file).flags == DensityGrid::zscored);
  }

  TEST_CASE("grid sampling is bilinear between cell centers") {
    DensityGrid g = DensityGrid::zeros({4, 4});
    // de-facto plane v = 16*r + 4*c: bilinear interpolation reproduces it
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) g.values[static_cast<std::size_t>(r) * 4 + c] = 16.0 * r + 4.0 * c;

    CHECK(g.sample(0.5, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.sample(2.5, 1.5) == doctest::Approx(16.0 * 1 + 4.0 * 2).epsilon(1e-12));
    // midway between cell centers (0,0) and (1,0): average of 0 and 4
    CHECK(g.sample(1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
    // outside the frame clamps to the nearest cell center
    CHECK(g.sample(-10.0, -10.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.sample(100.0, 100.0) == doctest::Approx(60.0).epsilon(1e-12));
  }

  TEST_CASE("shortest double formatting parses back exactly") {
    for (const double v : {0.1, -1.0 / 3.0, 1e-300, 12345.678901234567, 0.0, -0.0, 1.5e300}) {
      const std::string s = fmt_double(v);
      CHECK(std::stod(s) == v);
    }
    CHECK(fmt_double(1.0) == "1");
  }

  TEST_CASE("atomic file writes create parents and replace contents") {
    const fs::path dir = temp_dir("atomic");
    const std::string file = (dir / "sub" / "f.txt").string();
    atomic_write_file(file, "one\n");
    atomic_write_file(file, "two\r\nthree\n");
    CHECK(read_file(file) == "two\r\nthree\n");
    const std::vector<std::string> lines = read_lines(file);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "two");  // carriage returns are stripped
    CHECK(lines[1] == "three");
  }

  TEST_CASE("string splitting and trimming") {
    const std::vector<std::string> parts = split("a,b,,c", ',');
    REQUIRE(parts.size() == 4);
    CHECK(parts[2].empty());
    CHECK(trim("  x \t") == "x");
    CHECK(trim("") == "");
  }

  TEST_CASE("parallel_for matches serial execution and propagates errors") {
    std::vector<int> out(1000, 0);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i) * 2);

    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [&](std::size_t i) {
                                   if (i == 57) throw std::invalid_argument("boom");
                                 }),
                    std::invalid_argument);
  }

  TEST_CASE("grayscale conversion uses rounded luma weights") {
    ImageFrame img;
    img.width = 2;
    img.height = 1;
    img.channels = 3;
    img.pixels = {255, 0, 0, 0, 255, 0};
    const ImageFrame gray = to_gray(img);
    REQUIRE(gray.channels == 1);
    CHECK(static_cast<int>(gray.pixels[0]) == 76);   // round(0.299*255)
    CHECK(static_cast<int>(gray.pixels[1]) == 150);  // round(0.587*255)
  }

  TEST_CASE("bilinear downsample hits hand-computed values") {
    ImageFrame img;
    img.width = 4;
    img.height = 4;
    img.channels = 1;
    img.pixels.resize(16);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) img.pixels[static_cast<std::size_t>(r) * 4 + c] =
          static_cast<std::uint8_t>(16 * r + 4 * c);

    const ImageFrame half = resize_bilinear(img, 2, 2);
    CHECK(static_cast<int>(half.pixels[0]) == 10);
    CHECK(static_cast<int>(half.pixels[1]) == 18);
    CHECK(static_cast<int>(half.pixels[2]) == 42);
    CHECK(static_cast<int>(half.pixels[3]) == 50);

    ImageFrame checker;
    checker.width = 2;
    checker.height = 2;
    checker.channels = 1;
    checker.pixels = {0, 255, 255, 0};
    const ImageFrame one = resize_bilinear(checker, 1, 1);
    CHECK(static_cast<int>(one.pixels[0]) == 128);  // round(127.5)

    const ImageFrame same = resize_bilinear(img, 4, 4);
    CHECK(same.pixels == img.pixels);
  }

  TEST_CASE("png and pnm files round trip losslessly") {
    const fs::path dir = temp_dir("img");
    ImageFrame img;
    img.width = 5;
    img.height = 4;
    img.channels = 3;
    img.pixels.resize(60);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
      img.pixels[i] = static_cast<std::uint8_t>((i * 37) % 256);

    const std::string png = (dir / "a.png").string();
    write_png(png, img);
    const ImageFrame from_png = read_image(png);
    CHECK(from_png.width == 5);
    CHECK(from_png.height == 4);
    CHECK(from_png.pixels == img.pixels);

    const std::string ppm = (dir / "a.ppm").string();
    write_pnm(ppm, img);
    const ImageFrame from_ppm = read_image(ppm);
    CHECK(from_ppm.channels == 3);
    CHECK(from_ppm.pixels == img.pixels);

    ImageFrame gray = to_gray(img);
    const std::string pgm = (dir / "a.pgm").string();
    write_pnm(pgm, gray);
    CHECK(read_image(pgm).pixels == gray.pixels);

    CHECK_THROWS_AS(read_image((dir / "missing.png").string()), std::runtime_error);
  }
}
