#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace occam {

/// Mono audio held as amplitudes in [-1, 1]. This is the optimization
/// variable of every attack; values are immutable after construction and
/// safe to share read-only.
class AudioVector {
 public:
  /// Throws ValidationError for empty input, non-finite samples, samples
  /// outside [-1, 1], or a non-positive sample rate.
  explicit AudioVector(std::vector<double> samples, int sample_rate = 16000);

  const std::vector<double>& samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

/// Reads a mono 16-bit PCM WAV file. Integer sample s maps to amplitude
/// s / 32768. Throws FormatError for anything that is not mono 16-bit PCM,
/// IoError if the file cannot be opened.
AudioVector read_wav(const std::string& path);

/// Decodes the same format from an in-memory buffer (the remote oracle
/// wire format).
AudioVector decode_wav(std::span<const std::uint8_t> bytes);

/// Writes mono 16-bit PCM little-endian. Amplitude a maps to
/// clamp(round(a * 32768), -32768, 32767).
void write_wav(const AudioVector& audio, const std::string& path);

/// Same encoding into a byte buffer.
std::vector<std::uint8_t> encode_wav(const AudioVector& audio);

/// Euclidean distance. Throws DimensionError on length mismatch.
double l2_distance(std::span<const double> a, std::span<const double> b);
double l2_distance(const AudioVector& a, const AudioVector& b);

/// 10*log10(signal power / noise power), noise = perturbed - original.
/// Throws SnrUndefinedError when either power is zero.
double snr_db(std::span<const double> original, std::span<const double> perturbed);
double snr_db(const AudioVector& original, const AudioVector& perturbed);

enum class SmoothKind { Mean, Median };

/// Sliding-window filter of half-width h (window 2h+1) with edge
/// replication. The mean filter is the default defense; the median
/// variant is available as an option. h = 0 is the identity.
AudioVector local_smooth(const AudioVector& audio, std::size_t h,
                         SmoothKind kind = SmoothKind::Mean);

/// Linear-interpolation resampling onto a uniform grid covering the same
/// duration; output length = round(n * new_rate / rate). Resampling to the
/// input rate is the identity.
AudioVector resample(const AudioVector& audio, int new_rate);

inline double clamp_amplitude(double x) {
  return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
}

}  // namespace occam
