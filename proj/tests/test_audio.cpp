#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "occam/audio.hpp"
#include "occam/errors.hpp"
#include "occam/rng.hpp"

using namespace occam;

namespace {

std::string temp_wav_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("audio") {

TEST_CASE("construction validates samples") {
  CHECK_THROWS_AS(AudioVector({}), ValidationError);
  CHECK_THROWS_AS(AudioVector({1.5}), ValidationError);
  CHECK_THROWS_AS(AudioVector({-1.0001}), ValidationError);
  CHECK_THROWS_AS(AudioVector({std::nan("")}), ValidationError);
  CHECK_THROWS_AS(AudioVector({0.0}, 0), ValidationError);
  const AudioVector ok({-1.0, 0.0, 1.0});
  CHECK(ok.sample_rate() == 16000);
}

TEST_CASE("wav roundtrip and scaling") {
  const std::string path = temp_wav_path("occam_roundtrip.wav");

  SUBCASE("silence") {
    write_wav(AudioVector({0.0, 0.0, 0.0}), path);
    const AudioVector back = read_wav(path);
    REQUIRE(back.size() == 3);
    for (double s : back.samples()) CHECK(s == 0.0);
  }

  SUBCASE("integer 16384 reads as 0.5") {
    write_wav(AudioVector({0.5}), path);
    const AudioVector back = read_wav(path);
    CHECK(back.samples()[0] == 0.5);  // 16384 / 32768 is exact
  }

  SUBCASE("clamping at the rails") {
    write_wav(AudioVector({1.0, -1.0}), path);
    const AudioVector back = read_wav(path);
    CHECK(back.samples()[0] == doctest::Approx(32767.0 / 32768.0));
    CHECK(back.samples()[1] == -1.0);
  }

  SUBCASE("random audio roundtrips within one quantization step") {
    Rng rng(7);
    std::vector<double> samples(500);
    for (double& s : samples) s = rng.uniform_real(-1.0, 1.0);
    const AudioVector audio(samples, 8000);
    write_wav(audio, path);
    const AudioVector back = read_wav(path);
    REQUIRE(back.size() == audio.size());
    CHECK(back.sample_rate() == 8000);
    for (std::size_t i = 0; i < samples.size(); ++i)
      CHECK(std::abs(back.samples()[i] - samples[i]) <= 1.0 / 32768.0);
  }

  std::remove(path.c_str());
}

TEST_CASE("wav format errors") {
  CHECK_THROWS_AS(read_wav("/nonexistent/file.wav"), IoError);

  const std::vector<std::uint8_t> garbage = {'n', 'o', 't', 'a', 'w', 'a', 'v', 'x',
                                             'n', 'o', 'p', 'e'};
  CHECK_THROWS_AS(decode_wav(garbage), FormatError);

  // stereo header: rebuild a valid file and flip the channel count
  std::vector<std::uint8_t> wav = encode_wav(AudioVector({0.0, 0.1}));
  wav[22] = 2;
  CHECK_THROWS_AS(decode_wav(wav), FormatError);

  wav = encode_wav(AudioVector({0.0, 0.1}));
  wav[34] = 8;  // bits per sample
  CHECK_THROWS_AS(decode_wav(wav), FormatError);

  wav = encode_wav(AudioVector({0.0, 0.1}));
  wav[20] = 3;  // float format tag
  CHECK_THROWS_AS(decode_wav(wav), FormatError);

  wav = encode_wav(AudioVector({0.0, 0.1}));
  wav.resize(wav.size() - 1);
  CHECK_THROWS_AS(decode_wav(wav), FormatError);
}

TEST_CASE("l2 distance") {
  CHECK(l2_distance(AudioVector({0.1, 0.2}), AudioVector({0.1, 0.2})) == 0.0);
  const std::vector<double> a = {0.0, 0.0};
  const std::vector<double> b = {3.0, 4.0};
  CHECK(l2_distance(std::span<const double>(a), std::span<const double>(b)) == 5.0);
  CHECK(l2_distance(std::span<const double>(a).first(1),
                    std::span<const double>(b).first(1)) == 3.0);
  CHECK_THROWS_AS(l2_distance(AudioVector({0.0}), AudioVector({0.0, 0.0})), DimensionError);
}

TEST_CASE("snr examples") {
  const AudioVector x(std::vector<double>(10, 0.5));
  const AudioVector xs(std::vector<double>(10, 0.55));
  CHECK(snr_db(x, xs) == doctest::Approx(20.0).epsilon(1e-9));

  // doubling the signal makes noise power equal signal power
  const AudioVector y({0.1, -0.2, 0.3});
  const AudioVector y2({0.2, -0.4, 0.6});
  CHECK(snr_db(y, y2) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(snr_db(y, y), SnrUndefinedError);
  CHECK_THROWS_AS(snr_db(AudioVector({0.0, 0.0}), AudioVector({0.1, 0.0})),
                  SnrUndefinedError);
}

TEST_CASE("snr strictly decreases as the noise scales up") {
  Rng rng(11);
  std::vector<double> x(64), noise(64);
  for (auto& v : x) v = rng.uniform_real(-0.5, 0.5);
  for (auto& v : noise) v = rng.uniform_real(-0.01, 0.01);

  double previous = std::numeric_limits<double>::infinity();
  for (double scale : {1.0, 1.5, 2.0, 4.0, 10.0}) {
    std::vector<double> perturbed(64);
    for (std::size_t i = 0; i < 64; ++i) perturbed[i] = x[i] + scale * noise[i];
    const double snr = snr_db(std::span<const double>(x), std::span<const double>(perturbed));
    CHECK(snr < previous);
    previous = snr;
  }
}

TEST_CASE("local smoothing") {
  const AudioVector spike({0.0, 0.3, 0.0});

  SUBCASE("h = 0 is the identity") {
    CHECK(local_smooth(spike, 0).samples() == spike.samples());
  }

  SUBCASE("replicate-padded means") {
    const AudioVector in({0.0, 0.3, 0.0});
    const auto out = local_smooth(in, 1).samples();
    REQUIRE(out.size() == 3);
    CHECK(out[0] == doctest::Approx(0.1));
    CHECK(out[1] == doctest::Approx(0.1));
    CHECK(out[2] == doctest::Approx(0.1));
  }

  SUBCASE("constant signal is unchanged for any width") {
    const AudioVector flat(std::vector<double>(20, 0.25));
    for (std::size_t h : {1u, 3u, 10u, 50u})
      CHECK(local_smooth(flat, h).samples() == flat.samples());
  }

  SUBCASE("median variant keeps an isolated spike out entirely") {
    const AudioVector in({0.0, 0.0, 0.9, 0.0, 0.0});
    const auto out = local_smooth(in, 1, SmoothKind::Median).samples();
    for (double s : out) CHECK(s == 0.0);
  }

  SUBCASE("length preserved, range bounded by the input") {
    Rng rng(3);
    std::vector<double> samples(101);
    for (auto& s : samples) s = rng.uniform_real(-0.8, 0.8);
    const AudioVector in(samples);
    const double lo = *std::min_element(samples.begin(), samples.end());
    const double hi = *std::max_element(samples.begin(), samples.end());
    for (std::size_t h : {1u, 2u, 7u}) {
      const auto out = local_smooth(in, h).samples();
      REQUIRE(out.size() == samples.size());
      for (double s : out) {
        CHECK(s >= lo);
        CHECK(s <= hi);
      }
    }
  }
}

TEST_CASE("resampling") {
  SUBCASE("same rate is the identity") {
    const AudioVector in({0.1, 0.2, 0.3}, 16000);
    CHECK(resample(in, 16000).samples() == in.samples());
  }

  SUBCASE("constant stays constant at any rate") {
    const AudioVector in(std::vector<double>(16, 0.4), 16000);
    for (int rate : {4000, 8000, 12000, 32000}) {
      const AudioVector out = resample(in, rate);
      CHECK(out.sample_rate() == rate);
      for (double s : out.samples()) CHECK(s == doctest::Approx(0.4).epsilon(1e-12));
    }
  }

  SUBCASE("linear ramp survives a down-up roundtrip") {
    const AudioVector ramp({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}, 16000);
    const AudioVector down = resample(ramp, 8000);
    CHECK(down.size() == 4);
    const AudioVector up = resample(down, 16000);
    REQUIRE(up.size() == 8);
    for (std::size_t i = 1; i + 1 < up.size(); ++i)
      CHECK(std::abs(up.samples()[i] - ramp.samples()[i]) < 1e-6);
  }

  SUBCASE("length follows round(n * new_rate / rate)") {
    const AudioVector in(std::vector<double>(10, 0.0), 16000);
    CHECK(resample(in, 12000).size() == 8);
    CHECK(resample(in, 8000).size() == 5);
  }

  CHECK_THROWS_AS(resample(AudioVector({0.0, 0.0}), 0), ValidationError);
}

}  // TEST_SUITE
