#include "occam/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "occam/errors.hpp"

namespace occam {

AudioVector::AudioVector(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw ValidationError("audio must contain at least one sample");
  if (sample_rate_ <= 0) throw ValidationError("sample rate must be positive");
  for (double s : samples_) {
    if (!std::isfinite(s)) throw ValidationError("audio sample is not finite");
    if (s < -1.0 || s > 1.0) throw ValidationError("audio sample outside [-1, 1]");
  }
}

namespace {

constexpr double kScale = 32768.0;

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | static_cast<std::uint32_t>(b[off + 1]) << 8 |
         static_cast<std::uint32_t>(b[off + 2]) << 16 | static_cast<std::uint32_t>(b[off + 3]) << 24;
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | b[off + 1] << 8);
}

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(v & 0xff);
  b.push_back(v >> 8 & 0xff);
  b.push_back(v >> 16 & 0xff);
  b.push_back(v >> 24 & 0xff);
}

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(v & 0xff);
  b.push_back(v >> 8 & 0xff);
}

}  // namespace

AudioVector decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError("not a RIFF/WAVE file");

  bool have_fmt = false;
  int sample_rate = 0;
  std::vector<double> samples;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    char id[5] = {0};
    std::memcpy(id, bytes.data() + pos, 4);
    const std::uint32_t len = read_u32(bytes, pos + 4);
    pos += 8;
    if (pos + len > bytes.size()) throw FormatError("truncated chunk");

    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw FormatError("fmt chunk too short");
      const std::uint16_t format_tag = read_u16(bytes, pos);
      const std::uint16_t channels = read_u16(bytes, pos + 2);
      const std::uint32_t rate = read_u32(bytes, pos + 4);
      const std::uint16_t bits = read_u16(bytes, pos + 14);
      if (format_tag != 1) throw FormatError("only PCM (format tag 1) is supported");
      if (channels != 1) throw FormatError("only mono audio is supported");
      if (bits != 16) throw FormatError("only 16-bit samples are supported");
      sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!have_fmt) throw FormatError("data chunk before fmt chunk");
      if (len % 2 != 0) throw FormatError("odd data chunk length for 16-bit samples");
      const std::size_t n = len / 2;
      if (n == 0) throw FormatError("empty data chunk");
      samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint16_t raw = read_u16(bytes, pos + 2 * i);
        samples[i] = static_cast<std::int16_t>(raw) / kScale;
      }
      have_data = true;
      // keep scanning; later chunks are skipped but must be well-formed
    }
    pos += len + (len & 1);  // RIFF chunks are word-aligned
  }

  if (!have_fmt || !have_data) throw FormatError("missing fmt or data chunk");
  return AudioVector(std::move(samples), sample_rate);
}

AudioVector read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const AudioVector& audio) {
  const std::size_t n = audio.size();
  const std::uint32_t data_len = static_cast<std::uint32_t>(2 * n);

  std::vector<std::uint8_t> b;
  b.reserve(44 + data_len);
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  put_u32(b, 36 + data_len);
  b.insert(b.end(), {'W', 'A', 'V', 'E'});
  b.insert(b.end(), {'f', 'm', 't', ' '});
  put_u32(b, 16);
  put_u16(b, 1);  // PCM
  put_u16(b, 1);  // mono
  put_u32(b, static_cast<std::uint32_t>(audio.sample_rate()));
  put_u32(b, static_cast<std::uint32_t>(audio.sample_rate()) * 2);  // byte rate
  put_u16(b, 2);   // block align
  put_u16(b, 16);  // bits per sample
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  put_u32(b, data_len);
  for (double s : audio.samples()) {
    const long v = std::lround(s * kScale);
    const std::int16_t q = static_cast<std::int16_t>(std::clamp(v, -32768L, 32767L));
    put_u16(b, static_cast<std::uint16_t>(q));
  }
  return b;
}

void write_wav(const AudioVector& audio, const std::string& path) {
  const std::vector<std::uint8_t> bytes = encode_wav(audio);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("length mismatch in l2_distance");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

double l2_distance(const AudioVector& a, const AudioVector& b) {
  return l2_distance(std::span<const double>(a.samples()),
                     std::span<const double>(b.samples()));
}

double snr_db(std::span<const double> original, std::span<const double> perturbed) {
  if (original.size() != perturbed.size()) throw DimensionError("length mismatch in snr_db");
  double signal = 0.0, noise = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    signal += original[i] * original[i];
    const double d = perturbed[i] - original[i];
    noise += d * d;
  }
  if (noise == 0.0) throw SnrUndefinedError("zero noise power");
  if (signal == 0.0) throw SnrUndefinedError("zero signal power");
  return 10.0 * std::log10(signal / noise);
}

double snr_db(const AudioVector& original, const AudioVector& perturbed) {
  return snr_db(std::span<const double>(original.samples()),
                std::span<const double>(perturbed.samples()));
}

AudioVector local_smooth(const AudioVector& audio, std::size_t h, SmoothKind kind) {
  const auto& x = audio.samples();
  const std::size_t n = x.size();
  if (h == 0) return audio;

  // edge replication: index i clamped into [0, n-1]
  auto at = [&](std::ptrdiff_t i) {
    if (i < 0) return x.front();
    if (i >= static_cast<std::ptrdiff_t>(n)) return x.back();
    return x[static_cast<std::size_t>(i)];
  };

  std::vector<double> out(n);
  const std::size_t w = 2 * h + 1;
  if (kind == SmoothKind::Mean) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::ptrdiff_t j = -static_cast<std::ptrdiff_t>(h);
           j <= static_cast<std::ptrdiff_t>(h); ++j)
        sum += at(static_cast<std::ptrdiff_t>(i) + j);
      out[i] = sum / static_cast<double>(w);
    }
  } else {
    std::vector<double> window(w);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < w; ++k)
        window[k] = at(static_cast<std::ptrdiff_t>(i + k) - static_cast<std::ptrdiff_t>(h));
      std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(h),
                       window.end());
      out[i] = window[h];
    }
  }
  return AudioVector(std::move(out), audio.sample_rate());
}

AudioVector resample(const AudioVector& audio, int new_rate) {
  if (new_rate < 1) throw ValidationError("target sample rate must be >= 1");
  if (new_rate == audio.sample_rate()) return audio;

  const auto& x = audio.samples();
  const std::size_t n = x.size();
  const std::size_t m = static_cast<std::size_t>(std::llround(
      static_cast<double>(n) * new_rate / audio.sample_rate()));
  if (m <= 1) return AudioVector({x.front()}, new_rate);
  if (n == 1) return AudioVector(std::vector<double>(m, x.front()), new_rate);

  std::vector<double> out(m);
  const double step = static_cast<double>(n - 1) / static_cast<double>(m - 1);
  for (std::size_t j = 0; j < m; ++j) {
    const double pos = static_cast<double>(j) * step;
    const std::size_t lo = std::min(static_cast<std::size_t>(pos), n - 2);
    const double frac = pos - static_cast<double>(lo);
    out[j] = x[lo] + frac * (x[lo + 1] - x[lo]);
  }
  return AudioVector(std::move(out), new_rate);
}

}  // namespace occam
