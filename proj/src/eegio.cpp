#include "lgsleep/eegio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "lgsleep/rng.hpp"

namespace lgsleep {

namespace {

constexpr char kMagic[4] = {'L', 'G', 'S', '1'};
constexpr std::uint32_t kVersion = 1;

// Explicit little-endian scalar I/O so the format is byte-stable across hosts.
template <class T>
void write_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
bool read_le(std::istream& is, T& v) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) return false;
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  std::memcpy(&v, buf, sizeof(T));
  return true;
}

}  // namespace

std::string_view stage_token(Stage s) {
  switch (s) {
    case Stage::Wake: return "W";
    case Stage::Nrem: return "NR";
    case Stage::Rem: return "R";
  }
  throw ArgumentError("invalid stage value");
}

Stage stage_from_token(std::string_view token) {
  if (token == "W") return Stage::Wake;
  if (token == "NR") return Stage::Nrem;
  if (token == "R") return Stage::Rem;
  throw FormatError("unknown stage token '" + std::string(token) + "'");
}

std::size_t DatasetIndex::n_labeled() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const IndexEntry& e) { return e.labeled; }));
}

void save_recording(const Recording& rec, const std::filesystem::path& path) {
  if (rec.fs <= 0) throw ArgumentError("fs must be positive");
  if (rec.samples.empty()) throw ArgumentError("recording must hold at least one sample");
  for (double v : rec.samples)
    if (!std::isfinite(v)) throw DataError("recording contains non-finite samples");

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open '" + path.string() + "' for writing");
  os.write(kMagic, 4);
  write_le<std::uint32_t>(os, kVersion);
  write_le<std::uint16_t>(os, static_cast<std::uint16_t>(rec.subject_id.size()));
  os.write(rec.subject_id.data(), static_cast<std::streamsize>(rec.subject_id.size()));
  write_le<double>(os, rec.fs);
  write_le<std::uint32_t>(os, 1);  // n_channels, reserved for future formats
  write_le<std::uint64_t>(os, rec.samples.size());
  for (double v : rec.samples) write_le<float>(os, static_cast<float>(v));
  os.flush();
  if (!os) throw FormatError("write failed for '" + path.string() + "'");
}

Recording load_recording(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open '" + path.string() + "'");

  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("bad magic in '" + path.string() + "'");
  std::uint32_t version = 0;
  if (!read_le(is, version) || version != kVersion)
    throw FormatError("unsupported LGS1 version");
  std::uint16_t id_len = 0;
  if (!read_le(is, id_len)) throw FormatError("truncated header");
  std::string id(id_len, '\0');
  if (id_len > 0 && !is.read(id.data(), id_len)) throw FormatError("truncated subject id");

  Recording rec;
  rec.subject_id = std::move(id);
  std::uint32_t n_channels = 0;
  std::uint64_t n_samples = 0;
  if (!read_le(is, rec.fs) || !read_le(is, n_channels) || !read_le(is, n_samples))
    throw FormatError("truncated header");
  if (n_channels != 1) throw FormatError("unsupported channel count");
  if (rec.fs <= 0 || !std::isfinite(rec.fs)) throw DataError("non-positive sampling rate");
  if (n_samples == 0) throw FormatError("empty sample payload");

  rec.samples.resize(n_samples);
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    float v = 0.f;
    if (!read_le(is, v)) throw FormatError("truncated sample payload");
    if (!std::isfinite(v)) throw DataError("non-finite sample in payload");
    rec.samples[i] = static_cast<double>(v);
  }
  return rec;
}

void save_labels(const LabelTrack& track, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FormatError("cannot open '" + path.string() + "' for writing");
  os << "epoch_index,stage\n";
  for (std::size_t i = 0; i < track.stages.size(); ++i)
    os << i << ',' << stage_token(track.stages[i]) << '\n';
  os.flush();
  if (!os) throw FormatError("write failed for '" + path.string() + "'");
}

LabelTrack load_labels(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(is, line) || line != "epoch_index,stage")
    throw FormatError("labels CSV must start with 'epoch_index,stage'");

  LabelTrack track;
  std::size_t expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError("malformed labels row: " + line);
    std::size_t idx = 0;
    try {
      idx = std::stoull(line.substr(0, comma));
    } catch (const std::exception&) {
      throw FormatError("malformed epoch index: " + line);
    }
    if (idx != expected)
      throw FormatError("non-contiguous epoch index " + std::to_string(idx));
    track.stages.push_back(stage_from_token(line.substr(comma + 1)));
    ++expected;
  }
  return track;
}

namespace {

struct ClassSignature {
  double low_hz, high_hz, amplitude;
};

// Wake: fast low-amplitude; NREM: slow high-amplitude; REM: theta-range low-amplitude.
constexpr ClassSignature kSignatures[kNumStages] = {
    {15.0, 30.0, 1.0},  // Wake
    {1.0, 4.0, 3.0},    // NREM
    {4.0, 8.0, 1.0},    // REM
};

std::vector<Stage> draw_hypnogram(std::size_t n_epochs, const SynthConfig& cfg, Rng& rng) {
  std::vector<Stage> stages;
  stages.reserve(n_epochs);
  const double p_end = 1.0 / cfg.mean_run_epochs;
  while (stages.size() < n_epochs) {
    const double u = rng.uniform();
    Stage s = Stage::Rem;
    if (u < cfg.class_mix[0])
      s = Stage::Wake;
    else if (u < cfg.class_mix[0] + cfg.class_mix[1])
      s = Stage::Nrem;
    // run length ~ Geometric(p_end) on {1,2,...}, mean = mean_run_epochs
    std::size_t run = 1;
    while (rng.uniform() >= p_end) ++run;
    for (std::size_t i = 0; i < run && stages.size() < n_epochs; ++i) stages.push_back(s);
  }
  return stages;
}

}  // namespace

std::vector<std::pair<Recording, LabelTrack>> synth_dataset(const SynthConfig& cfg) {
  if (cfg.n_subjects < 1) throw ArgumentError("n_subjects must be >= 1");
  double mix_sum = 0.0;
  for (double m : cfg.class_mix) {
    if (m < 0) throw ArgumentError("class mix proportions must be nonnegative");
    mix_sum += m;
  }
  if (std::abs(mix_sum - 1.0) > 1e-9) throw ArgumentError("class mix must sum to 1");
  if (cfg.minutes_per_subject <= 0) throw ArgumentError("minutes_per_subject must be positive");

  const auto epoch_samples = static_cast<std::size_t>(cfg.epoch_len_s * cfg.fs);
  const auto n_epochs = static_cast<std::size_t>(cfg.minutes_per_subject * 60.0 / cfg.epoch_len_s);

  std::vector<std::pair<Recording, LabelTrack>> out;
  out.reserve(cfg.n_subjects);
  for (std::size_t subj = 0; subj < cfg.n_subjects; ++subj) {
    Rng rng(Rng::derive(cfg.seed, {0x5e, subj}));

    LabelTrack track;
    track.epoch_len_s = cfg.epoch_len_s;
    track.stages = draw_hypnogram(n_epochs, cfg, rng);

    Recording rec;
    rec.subject_id = "S" + std::string(subj < 9 ? "0" : "") + std::to_string(subj + 1);
    rec.fs = cfg.fs;
    rec.samples.resize(n_epochs * epoch_samples);

    for (std::size_t e = 0; e < n_epochs; ++e) {
      const ClassSignature& sig = kSignatures[static_cast<int>(track.stages[e])];
      // three in-band tones with random frequency and phase
      double freqs[3], phases[3];
      for (int t = 0; t < 3; ++t) {
        freqs[t] = rng.uniform(sig.low_hz, sig.high_hz);
        phases[t] = rng.uniform(0.0, 2.0 * M_PI);
      }
      const double tone_amp = sig.amplitude / 3.0;
      const double noise_amp = cfg.noise_sigma * sig.amplitude;
      double* dst = rec.samples.data() + e * epoch_samples;
      for (std::size_t i = 0; i < epoch_samples; ++i) {
        const double t = static_cast<double>(i) / cfg.fs;
        double v = 0.0;
        for (int k = 0; k < 3; ++k) v += tone_amp * std::sin(2.0 * M_PI * freqs[k] * t + phases[k]);
        dst[i] = v + noise_amp * rng.normal();
      }
    }
    out.emplace_back(std::move(rec), std::move(track));
  }
  return out;
}

DatasetIndex subsample_labels(const DatasetIndex& index, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ArgumentError("fraction must be in (0, 1]");

  const std::size_t n = index.n_total();
  const auto target = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));

  // Per-subject entry lists, in first-appearance order for determinism.
  std::vector<std::string> subjects;
  std::map<std::string, std::vector<std::size_t>> by_subject;
  for (std::size_t i = 0; i < index.entries.size(); ++i) {
    const auto& id = index.entries[i].subject_id;
    auto [it, inserted] = by_subject.try_emplace(id);
    if (inserted) subjects.push_back(id);
    it->second.push_back(i);
  }

  // Largest-remainder quota so the total is exactly floor(fraction * N).
  struct Quota {
    std::size_t base;
    double rem;
    std::size_t cap;
    std::size_t order;
  };
  std::vector<Quota> quotas(subjects.size());
  std::size_t base_total = 0;
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    const double ideal = fraction * static_cast<double>(by_subject[subjects[s]].size());
    quotas[s].base = static_cast<std::size_t>(std::floor(ideal));
    quotas[s].rem = ideal - static_cast<double>(quotas[s].base);
    quotas[s].cap = by_subject[subjects[s]].size();
    quotas[s].order = s;
    base_total += quotas[s].base;
  }
  std::vector<std::size_t> by_rem(subjects.size());
  std::iota(by_rem.begin(), by_rem.end(), 0);
  std::stable_sort(by_rem.begin(), by_rem.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a].rem > quotas[b].rem;
  });
  for (std::size_t i = 0; base_total < target; ++i) {
    Quota& q = quotas[by_rem[i % by_rem.size()]];
    if (q.base < q.cap) {
      ++q.base;
      ++base_total;
    }
  }

  DatasetIndex out = index;
  for (auto& e : out.entries) e.labeled = false;
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    auto& ids = by_subject[subjects[s]];
    Rng rng(Rng::derive(seed, {0x5b, s}));
    rng.shuffle(ids);
    for (std::size_t i = 0; i < quotas[s].base; ++i) out.entries[ids[i]].labeled = true;
  }
  return out;
}

}  // namespace lgsleep
