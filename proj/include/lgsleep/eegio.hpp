#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lgsleep/errors.hpp"

namespace lgsleep {

enum class Stage : std::uint8_t { Wake = 0, Nrem = 1, Rem = 2 };
inline constexpr int kNumStages = 3;

std::string_view stage_token(Stage s);              // "W" / "NR" / "R"
Stage stage_from_token(std::string_view token);     // throws FormatError on unknown token

/// One subject's continuous single-channel EEG.
struct Recording {
  std::string subject_id;
  double fs = 512.0;
  std::vector<double> samples;
};

/// Per-epoch sleep stages aligned to the start of a recording.
struct LabelTrack {
  double epoch_len_s = 10.0;
  std::vector<Stage> stages;
};

struct SynthConfig {
  std::size_t n_subjects = 16;
  double minutes_per_subject = 60.0;
  std::array<double, 3> class_mix = {0.34, 0.58, 0.08};  // wake / NREM / REM
  double noise_sigma = 0.5;   // noise amplitude relative to the class oscillation
  std::uint64_t seed = 1;
  double fs = 512.0;
  double epoch_len_s = 10.0;
  double mean_run_epochs = 6.0;  // geometric stage persistence
};

struct IndexEntry {
  std::string subject_id;
  std::size_t trial_offset = 0;  // first sample of the trial within its recording
  Stage stage = Stage::Wake;
  bool labeled = true;
};

struct DatasetIndex {
  std::vector<IndexEntry> entries;
  std::size_t n_total() const { return entries.size(); }
  std::size_t n_labeled() const;
};

// LGS1 container, little-endian:
//   "LGS1" | u32 version=1 | u16 id_len | id | f64 fs | u32 n_channels=1 |
//   u64 n_samples | f32 * n_samples
void save_recording(const Recording& rec, const std::filesystem::path& path);
Recording load_recording(const std::filesystem::path& path);

// Labels CSV: header "epoch_index,stage"; stage in {W,NR,R}; indices contiguous from 0.
void save_labels(const LabelTrack& track, const std::filesystem::path& path);
LabelTrack load_labels(const std::filesystem::path& path);

/// Class-conditioned synthetic EEG; deterministic in cfg (including seed).
std::vector<std::pair<Recording, LabelTrack>> synth_dataset(const SynthConfig& cfg);

/// Keep exactly floor(fraction * N) entries labeled, stratified per subject.
DatasetIndex subsample_labels(const DatasetIndex& index, double fraction, std::uint64_t seed);

}  // namespace lgsleep
