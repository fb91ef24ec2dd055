#include "lgsleep/dsp.hpp"

#include <algorithm>
#include <cmath>

namespace lgsleep {

std::pair<double, double> subband_edges(SubbandName name) {
  switch (name) {
    case SubbandName::Delta: return {1.0, 4.0};
    case SubbandName::Theta: return {4.0, 8.0};
    case SubbandName::Alpha: return {8.0, 12.0};
    case SubbandName::Beta: return {12.0, 29.0};
    case SubbandName::Gamma: return {30.0, 45.0};
    case SubbandName::Wide: return {1.0, 45.0};
  }
  throw ArgumentError("invalid subband");
}

SubbandName subband_from_name(std::string_view name) {
  if (name == "delta") return SubbandName::Delta;
  if (name == "theta") return SubbandName::Theta;
  if (name == "alpha") return SubbandName::Alpha;
  if (name == "beta") return SubbandName::Beta;
  if (name == "gamma") return SubbandName::Gamma;
  if (name == "wide") return SubbandName::Wide;
  throw ArgumentError("unknown subband '" + std::string(name) + "'");
}

std::string_view subband_to_name(SubbandName name) {
  switch (name) {
    case SubbandName::Delta: return "delta";
    case SubbandName::Theta: return "theta";
    case SubbandName::Alpha: return "alpha";
    case SubbandName::Beta: return "beta";
    case SubbandName::Gamma: return "gamma";
    case SubbandName::Wide: return "wide";
  }
  throw ArgumentError("invalid subband");
}

namespace {

using cd = std::complex<double>;

Biquad section_from_pole_pair(cd z1, cd z2) {
  // Real quadratic 1 + a1 z^-1 + a2 z^-2 from a conjugate (or real) pole pair.
  Biquad s{};
  s.a1 = -(z1 + z2).real();
  s.a2 = (z1 * z2).real();
  return s;
}

}  // namespace

FilterSOS design_butterworth_bandpass(double low_hz, double high_hz, double fs, int order) {
  if (!(fs > 0)) throw ArgumentError("fs must be positive");
  if (!(low_hz > 0 && low_hz < high_hz && high_hz < fs / 2))
    throw ArgumentError("band edges must satisfy 0 < low < high < fs/2");
  if (order < 1) throw ArgumentError("order must be >= 1");

  const double c = 2.0 * fs;  // bilinear constant
  const double w1 = c * std::tan(M_PI * low_hz / fs);   // pre-warped analog edges
  const double w2 = c * std::tan(M_PI * high_hz / fs);
  const double w0 = std::sqrt(w1 * w2);
  const double bw = w2 - w1;

  // Analog prototype poles on the left unit semicircle.
  std::vector<cd> proto;
  for (int k = 1; k <= order; ++k) {
    const double theta = M_PI * (2.0 * k + order - 1.0) / (2.0 * order);
    proto.emplace_back(std::cos(theta), std::sin(theta));
  }

  const auto blt = [c](cd s) { return (c + s) / (c - s); };
  // Lowpass->bandpass: each prototype pole p becomes the two roots of
  // s^2 - (p*bw)*s + w0^2.
  const auto bp_poles = [&](cd p) {
    const cd half = 0.5 * p * bw;
    const cd disc = std::sqrt(half * half - cd(w0 * w0, 0.0));
    return std::pair<cd, cd>{half + disc, half - disc};
  };

  FilterSOS f;
  f.fs = fs;
  for (const cd& p : proto) {
    if (p.imag() > 1e-12) {
      const auto [s_hi, s_lo] = bp_poles(p);
      const cd z_hi = blt(s_hi), z_lo = blt(s_lo);
      f.sections.push_back(section_from_pole_pair(z_hi, std::conj(z_hi)));
      f.sections.push_back(section_from_pole_pair(z_lo, std::conj(z_lo)));
    } else if (std::abs(p.imag()) <= 1e-12) {
      // real prototype pole (odd order): one section from its two roots
      const auto [s_hi, s_lo] = bp_poles(p);
      f.sections.push_back(section_from_pole_pair(blt(s_hi), blt(s_lo)));
    }
    // conjugate prototype poles are covered by their Im > 0 partners
  }

  // Zeros: order at z=+1 and order at z=-1, one pair per section.
  for (Biquad& s : f.sections) {
    s.b0 = 1.0;
    s.b1 = 0.0;
    s.b2 = -1.0;
  }

  // Normalize to unit gain at the (pre-warp consistent) center frequency.
  const double f_center = std::atan(w0 / c) * fs / M_PI;
  const double mag = std::abs(sos_response(f, f_center));
  const double g = std::pow(1.0 / mag, 1.0 / static_cast<double>(order));
  for (Biquad& s : f.sections) {
    s.b0 *= g;
    s.b1 *= g;
    s.b2 *= g;
  }
  return f;
}

FilterSOS design_notch(double freq_hz, double q, double fs) {
  if (!(fs > 0)) throw ArgumentError("fs must be positive");
  if (!(freq_hz > 0 && freq_hz < fs / 2)) throw ArgumentError("notch frequency must be in (0, fs/2)");
  if (!(q > 0)) throw ArgumentError("q must be positive");

  const double w0 = 2.0 * M_PI * freq_hz / fs;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;

  FilterSOS f;
  f.fs = fs;
  f.sections.push_back(Biquad{1.0 / a0, -2.0 * cw / a0, 1.0 / a0,
                              -2.0 * cw / a0, (1.0 - alpha) / a0});
  return f;
}

std::complex<double> sos_response(const FilterSOS& f, double freq_hz) {
  const double w = 2.0 * M_PI * freq_hz / f.fs;
  const cd zinv = std::exp(cd(0.0, -w));
  cd h(1.0, 0.0);
  for (const Biquad& s : f.sections) {
    h *= (s.b0 + (s.b1 + s.b2 * zinv) * zinv) / (1.0 + (s.a1 + s.a2 * zinv) * zinv);
  }
  return h;
}

namespace {

// Transposed direct form II, one section, in place.
void sos_filter_inplace(const Biquad& s, std::vector<double>& x, double z1, double z2) {
  for (double& v : x) {
    const double y = s.b0 * v + z1;
    z1 = s.b1 * v - s.a1 * y + z2;
    z2 = s.b2 * v - s.a2 * y;
    v = y;
  }
}

// Steady-state (unit-step) initial conditions scaled by the first sample;
// returns the section's DC output level for cascading.
struct SectionInit {
  double z1, z2, y_dc;
};

SectionInit steady_state(const Biquad& s, double x_dc) {
  const double h1 = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
  const double y = h1 * x_dc;
  return {y - s.b0 * x_dc, s.b2 * x_dc - s.a2 * y, y};
}

void sos_cascade(const FilterSOS& f, std::vector<double>& x) {
  double level = x.empty() ? 0.0 : x.front();
  for (const Biquad& s : f.sections) {
    const SectionInit init = steady_state(s, level);
    sos_filter_inplace(s, x, init.z1, init.z2);
    level = init.y_dc;
  }
}

}  // namespace

std::vector<double> filtfilt(const FilterSOS& f, std::span<const double> x) {
  if (f.sections.empty()) throw ArgumentError("filter has no sections");
  const std::size_t pad = 3 * (2 * f.sections.size());
  if (x.size() <= pad)
    throw ArgumentError("signal too short for filtfilt: need more than " + std::to_string(pad) +
                        " samples");

  const std::size_t n = x.size();
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * x[0] - x[pad - i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 2 - i]);

  sos_cascade(f, ext);
  std::reverse(ext.begin(), ext.end());
  sos_cascade(f, ext);
  std::reverse(ext.begin(), ext.end());

  return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                             ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

std::vector<Trial> segment(const Recording& rec, const LabelTrack* labels, double trial_s,
                           double slice_ms, double hop_ms) {
  const double slice_f = rec.fs * slice_ms / 1000.0;
  const double hop_f = rec.fs * hop_ms / 1000.0;
  if (std::abs(slice_f - std::round(slice_f)) > 1e-9 || std::abs(hop_f - std::round(hop_f)) > 1e-9)
    throw ArgumentError("slice and hop must map to whole sample counts");
  const auto slice_len = static_cast<std::size_t>(std::round(slice_f));
  const auto hop = static_cast<std::size_t>(std::round(hop_f));
  const auto trial_len = static_cast<std::size_t>(std::round(rec.fs * trial_s));
  if (slice_len == 0 || hop == 0 || trial_len < slice_len)
    throw ArgumentError("degenerate segmentation parameters");

  const std::size_t n_slices = (trial_len - slice_len) / hop + 1;
  std::size_t n_trials = rec.samples.size() / trial_len;
  if (labels != nullptr) n_trials = std::min(n_trials, labels->stages.size());

  std::vector<Trial> out;
  out.reserve(n_trials);
  for (std::size_t t = 0; t < n_trials; ++t) {
    Trial trial;
    trial.subject_id = rec.subject_id;
    trial.offset = t * trial_len;
    if (labels != nullptr) trial.stage = labels->stages[t];
    trial.slices = Array({n_slices, slice_len, 1});
    double* dst = trial.slices.data();
    for (std::size_t s = 0; s < n_slices; ++s) {
      const double* src = rec.samples.data() + trial.offset + s * hop;
      std::copy(src, src + slice_len, dst + s * slice_len);
    }
    out.push_back(std::move(trial));
  }
  return out;
}

std::vector<double> standardize(std::span<const double> x,
                                const std::optional<SignalStats>& stats, SignalStats* used) {
  SignalStats st;
  if (stats.has_value()) {
    st = *stats;
  } else {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size());
    st.mean = mean;
    st.std = std::sqrt(var);
  }
  if (used != nullptr) *used = st;

  const double denom = std::max(st.std, 1e-8);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - st.mean) / denom;
  return out;
}

}  // namespace lgsleep
