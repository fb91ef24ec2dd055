#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lgsleep/array.hpp"
#include "lgsleep/eegio.hpp"

namespace lgsleep {

/// One biquad; a0 is normalized to 1.
struct Biquad {
  double b0, b1, b2;
  double a1, a2;
};

/// Cascade of second-order sections designed at a fixed sampling rate.
struct FilterSOS {
  std::vector<Biquad> sections;
  double fs = 0.0;
};

enum class SubbandName { Delta, Theta, Alpha, Beta, Gamma, Wide };

std::pair<double, double> subband_edges(SubbandName name);
SubbandName subband_from_name(std::string_view name);  // throws ArgumentError
std::string_view subband_to_name(SubbandName name);

/// Analog Butterworth prototype of `order`, band-transformed and bilinear-mapped
/// with frequency pre-warping. Result has `order` sections (2*order poles).
FilterSOS design_butterworth_bandpass(double low_hz, double high_hz, double fs, int order = 5);

/// Single-section notch (unit gain at DC and Nyquist, zero at freq_hz).
FilterSOS design_notch(double freq_hz, double q, double fs);

/// Complex frequency response H(e^{j 2*pi*f/fs}) of the cascade.
std::complex<double> sos_response(const FilterSOS& f, double freq_hz);

/// Zero-phase forward-backward filtering. Output length equals input length.
/// Requires len(x) > 3 * (2 * n_sections).
std::vector<double> filtfilt(const FilterSOS& f, std::span<const double> x);

/// One 10-second labeled window, segmented into overlapping slices.
struct Trial {
  Array slices;  // (n_slices, slice_len, 1)
  std::optional<Stage> stage;
  std::string subject_id;
  std::size_t offset = 0;  // first sample within the source recording
};

/// Consecutive non-overlapping trial windows, each sliced with the given hop.
/// A trailing partial trial is discarded; shorter-than-one-trial input gives {}.
std::vector<Trial> segment(const Recording& rec, const LabelTrack* labels,
                           double trial_s = 10.0, double slice_ms = 1000.0,
                           double hop_ms = 500.0);

struct SignalStats {
  double mean = 0.0;
  double std = 1.0;
};

/// Z-score a signal. Without `stats`, the signal's own moments are used and
/// returned; with `stats` (training-set statistics), they are applied as-is.
/// The divisor is guarded as max(std, 1e-8) so constant signals map to zero.
std::vector<double> standardize(std::span<const double> x,
                                const std::optional<SignalStats>& stats,
                                SignalStats* used = nullptr);

}  // namespace lgsleep
