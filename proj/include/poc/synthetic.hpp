#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "poc/compressor.hpp"
#include "poc/dataset.hpp"
#include "poc/errors.hpp"
#include "poc/metrics.hpp"
#include "poc/reader.hpp"
#include "poc/rng.hpp"

namespace poc {

// Synthetic tasks are built from token classes whose heuristic importance
// scores fall into disjoint bands (default ImportanceConfig, no corpus stats):
//   decoy       Xxxxx000000  0.875   outranks the needle, never an answer
//   needle      X00000       0.75    the answer of needle-qa
//   distractor  x00000       0.60    looks like an answer, ranks below it
//   entity      Xxxxx..      0.475-0.575  the answer of coverage-summ
//   filler      lowercase words, stopwords, periods  <= 0.40
// Top-k compression therefore drops whole bands in a known order, which makes
// the retention curve a closed-form function of the per-chunk band counts.

enum class SyntheticKind { needle_qa, coverage_summ };

inline std::string_view synthetic_kind_name(SyntheticKind k) {
  return k == SyntheticKind::needle_qa ? "needle-qa" : "coverage-summ";
}

inline SyntheticKind parse_synthetic_kind(std::string_view s) {
  if (s == "needle-qa") return SyntheticKind::needle_qa;
  if (s == "coverage-summ") return SyntheticKind::coverage_summ;
  throw DataError("unknown synthetic kind '" + std::string(s) + "' (expected needle-qa or coverage-summ)");
}

enum class NoiseProfile { mixed, flat, stopword_heavy };

inline std::string_view noise_profile_name(NoiseProfile p) {
  switch (p) {
    case NoiseProfile::mixed: return "mixed";
    case NoiseProfile::flat: return "flat";
    case NoiseProfile::stopword_heavy: return "stopword-heavy";
  }
  return "?";
}

inline NoiseProfile parse_noise_profile(std::string_view s) {
  if (s == "mixed") return NoiseProfile::mixed;
  if (s == "flat") return NoiseProfile::flat;
  if (s == "stopword-heavy") return NoiseProfile::stopword_heavy;
  throw DataError("unknown noise profile '" + std::string(s) + "'");
}

struct SyntheticTaskConfig {
  SyntheticKind kind = SyntheticKind::needle_qa;
  std::size_t context_length = 512;
  // Fraction of the way through the context where the needle phrase starts;
  // negative draws it uniformly.
  double needle_position = -1.0;
  std::size_t needle_length = 5;
  std::size_t decoy_count = 0;
  double distractor_fraction = 0.0;  // needle-qa only; > 0 gives non-monotone curves
  double salient_fraction = 0.5;     // coverage-summ only
  NoiseProfile noise_profile = NoiseProfile::mixed;
  std::size_t chunk_size = kDefaultChunkSize;
  std::uint64_t seed = 0;
  std::string id;
  std::string dataset_tag;
};

// Per-chunk token counts by band.
struct ChunkBands {
  std::size_t tokens = 0;
  std::size_t decoys = 0;
  std::size_t needle = 0;
  std::size_t distractors = 0;
  std::size_t entities = 0;
};

struct SyntheticLayout {
  SyntheticKind kind = SyntheticKind::needle_qa;
  std::size_t needle_length = 0;
  std::size_t entity_total = 0;
  std::size_t chunk_size = kDefaultChunkSize;
  std::vector<ChunkBands> chunks;

  nlohmann::json to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : chunks)
      cs.push_back({{"tokens", c.tokens},
                    {"decoys", c.decoys},
                    {"needle", c.needle},
                    {"distractors", c.distractors},
                    {"entities", c.entities}});
    return {{"generator", synthetic_kind_name(kind)},
            {"needle_length", needle_length},
            {"entity_total", entity_total},
            {"chunk_size", chunk_size},
            {"chunks", cs}};
  }

  static SyntheticLayout from_json(const nlohmann::json& j) {
    try {
      SyntheticLayout l;
      l.kind = parse_synthetic_kind(j.at("generator").get<std::string>());
      l.needle_length = j.at("needle_length").get<std::size_t>();
      l.entity_total = j.at("entity_total").get<std::size_t>();
      l.chunk_size = j.at("chunk_size").get<std::size_t>();
      for (const auto& c : j.at("chunks"))
        l.chunks.push_back({c.at("tokens").get<std::size_t>(), c.at("decoys").get<std::size_t>(),
                            c.at("needle").get<std::size_t>(), c.at("distractors").get<std::size_t>(),
                            c.at("entities").get<std::size_t>()});
      return l;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("synthetic layout: ") + e.what());
    }
  }
};

struct SyntheticSample {
  DatasetRecord record;
  SyntheticLayout layout;
};

namespace synthetic_vocab {

inline constexpr std::array<std::string_view, 40> fillers{
    "go",     "up",     "ox",     "sky",    "sea",     "run",     "day",     "road",   "tree",   "wind",
    "rain",   "lamp",   "book",   "stone",  "river",   "field",   "cloud",   "light",  "grass",  "water",
    "bridge", "garden", "window", "market", "silver",  "candle",  "harbor",  "yellow", "morning", "evening",
    "shadow", "ladder", "pocket", "winter", "village", "kitchen", "blanket", "lantern", "quietly", "mountain"};

inline constexpr std::array<std::string_view, 12> flat_fillers{
    "stone", "river", "field", "cloud", "light", "grass", "water", "chair", "table", "plant", "beach", "smoke"};

inline constexpr std::array<std::string_view, 12> stopwords{"the", "a",  "of", "and", "to",   "in",
                                                            "is",  "it", "on", "for", "with", "that"};

inline constexpr std::array<std::string_view, 30> entities{
    "Avalon",  "Berlin",  "Castor",   "Delphi",   "Everest", "Fresno",   "Geneva",  "Helios",  "Ithaca",  "Jasper",
    "Kepler",  "Lisbon",  "Madrid",   "Nairobi",  "Orion",   "Phoenix",  "Quebec",  "Rialto",  "Sirius",  "Toledo",
    "Utopia",  "Vienna",  "Warsaw",   "Xavier",   "Yukon",   "Zurich",   "Atlas",   "Boreas",  "Cygnus",  "Denali"};

}  // namespace synthetic_vocab

namespace detail {

enum class Band { filler, decoy, needle, distractor, entity };

inline std::string random_digits(Rng& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.below(10)));
  return s;
}

inline std::string filler_token(Rng& rng, NoiseProfile profile) {
  using namespace synthetic_vocab;
  if (rng.uniform() < 0.07) return ".";
  switch (profile) {
    case NoiseProfile::flat: return std::string(flat_fillers[rng.below(flat_fillers.size())]);
    case NoiseProfile::stopword_heavy:
      if (rng.uniform() < 0.5) return std::string(stopwords[rng.below(stopwords.size())]);
      return std::string(fillers[rng.below(fillers.size())]);
    case NoiseProfile::mixed:
      if (rng.uniform() < 0.25) return std::string(stopwords[rng.below(stopwords.size())]);
      return std::string(fillers[rng.below(fillers.size())]);
  }
  return "stone";
}

inline std::string decoy_token(Rng& rng) {
  std::string s(1, static_cast<char>('A' + rng.below(26)));
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>('a' + rng.below(26)));
  return s + random_digits(rng, 6);
}

}  // namespace detail

// Builds one synthetic record plus its band layout.
inline SyntheticSample gen_synthetic(const SyntheticTaskConfig& cfg) {
  const std::size_t n = cfg.context_length;
  const std::size_t chunk_size = std::max<std::size_t>(cfg.chunk_size, 1);
  Rng rng(cfg.seed * 0x9E3779B97F4A7C15ULL + 0x1234567ULL);

  std::vector<std::string> tokens(n);
  std::vector<detail::Band> band(n, detail::Band::filler);
  for (auto& t : tokens) t = detail::filler_token(rng, cfg.noise_profile);

  std::vector<std::size_t> reserved;  // positions not available for random placement
  DatasetRecord rec;
  rec.id = cfg.id.empty() ? std::string(synthetic_kind_name(cfg.kind)) + "-" + std::to_string(cfg.seed) : cfg.id;
  rec.dataset_tag = cfg.dataset_tag.empty() ? std::string(synthetic_kind_name(cfg.kind)) : cfg.dataset_tag;

  auto free_positions = [&] {
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i)
      if (band[i] == detail::Band::filler && !std::binary_search(reserved.begin(), reserved.end(), i)) free.push_back(i);
    return free;
  };
  auto place = [&](std::size_t count, detail::Band b, auto&& make) {
    auto free = free_positions();
    if (count > free.size()) throw DataError("gen_synthetic: context too short for the requested tokens");
    rng.shuffle(std::span<std::size_t>(free));
    free.resize(count);
    std::sort(free.begin(), free.end());
    for (auto p : free) {
      band[p] = b;
      tokens[p] = make();
    }
  };

  std::vector<std::string> answer;
  if (cfg.kind == SyntheticKind::needle_qa) {
    static constexpr std::array<std::string_view, 4> lead{"the", "access", "code", "is"};
    const std::size_t L = cfg.needle_length;
    const std::size_t span_len = L + lead.size();
    if (L == 0) throw DataError("gen_synthetic: needle_length must be positive");
    if (span_len > n || span_len > chunk_size)
      throw DataError("gen_synthetic: needle of " + std::to_string(L) + " tokens does not fit a context of " +
                      std::to_string(n) + " tokens");
    // Starts whose phrase stays inside one chunk.
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + span_len <= n; ++s)
      if (s / chunk_size == (s + span_len - 1) / chunk_size) starts.push_back(s);
    std::size_t start;
    if (cfg.needle_position < 0.0) {
      start = starts[rng.below(starts.size())];
    } else {
      const auto target = static_cast<std::size_t>(std::clamp(cfg.needle_position, 0.0, 1.0) *
                                                   static_cast<double>(n - span_len));
      start = *std::min_element(starts.begin(), starts.end(), [&](std::size_t a, std::size_t b) {
        const auto da = a > target ? a - target : target - a;
        const auto db = b > target ? b - target : target - b;
        return da < db;
      });
    }
    for (std::size_t i = 0; i < lead.size(); ++i) {
      tokens[start + i] = std::string(lead[i]);
      reserved.push_back(start + i);
    }
    std::vector<std::string> digits_used;
    for (std::size_t i = 0; i < L; ++i) {
      std::string d;
      do d = detail::random_digits(rng, 5);
      while (std::find(digits_used.begin(), digits_used.end(), d) != digits_used.end());
      digits_used.push_back(d);
      const std::size_t p = start + lead.size() + i;
      tokens[p] = std::string(1, static_cast<char>('A' + rng.below(26))) + d;
      band[p] = detail::Band::needle;
      answer.push_back(tokens[p]);
    }
    std::sort(reserved.begin(), reserved.end());
    place(cfg.decoy_count, detail::Band::decoy, [&] { return detail::decoy_token(rng); });
    const auto distractors = static_cast<std::size_t>(std::llround(cfg.distractor_fraction * static_cast<double>(n)));
    place(distractors, detail::Band::distractor, [&] {
      std::string d;
      do d = detail::random_digits(rng, 5);
      while (std::find(digits_used.begin(), digits_used.end(), d) != digits_used.end());
      return std::string(1, static_cast<char>('a' + rng.below(26))) + d;
    });
    rec.task_kind = TaskKind::qa;
    rec.instruction = "What is the " + std::to_string(L) + "-part access code?";
  } else {
    const auto salient = static_cast<std::size_t>(std::llround(cfg.salient_fraction * static_cast<double>(n)));
    if (salient == 0) throw DataError("gen_synthetic: salient_fraction leaves no salient tokens");
    place(salient, detail::Band::entity, [&] {
      return std::string(synthetic_vocab::entities[rng.below(synthetic_vocab::entities.size())]);
    });
    for (std::size_t i = 0; i < n; ++i)
      if (band[i] == detail::Band::entity) answer.push_back(tokens[i]);
    rec.task_kind = TaskKind::summarization;
    rec.instruction = "List the key entities mentioned in the text.";
  }

  SyntheticLayout layout;
  layout.kind = cfg.kind;
  layout.chunk_size = chunk_size;
  layout.needle_length = cfg.kind == SyntheticKind::needle_qa ? cfg.needle_length : 0;
  for (std::size_t s = 0; s < n; s += chunk_size) {
    ChunkBands cb;
    const std::size_t e = std::min(n, s + chunk_size);
    cb.tokens = e - s;
    for (std::size_t i = s; i < e; ++i) {
      switch (band[i]) {
        case detail::Band::decoy: ++cb.decoys; break;
        case detail::Band::needle: ++cb.needle; break;
        case detail::Band::distractor: ++cb.distractors; break;
        case detail::Band::entity: ++cb.entities; break;
        case detail::Band::filler: break;
      }
    }
    layout.entity_total += cb.entities;
    layout.chunks.push_back(cb);
  }

  rec.context = join_tokens(tokens);
  rec.answer = join_tokens(answer);
  rec.meta = layout.to_json();
  rec.meta["seed"] = cfg.seed;
  rec.meta["noise_profile"] = noise_profile_name(cfg.noise_profile);
  return {std::move(rec), std::move(layout)};
}

// Closed-form task score when chunk c is compressed at ratios[c] and read by
// the matching synthetic reader.
inline double truth_raw_score(const SyntheticLayout& layout, std::span<const double> ratios, Metric metric = Metric::f1) {
  if (ratios.size() != layout.chunks.size()) throw AlignmentError("truth: ratio count does not match chunk count");
  if (layout.kind == SyntheticKind::needle_qa) {
    std::size_t needle = 0, distract = 0;
    for (std::size_t c = 0; c < layout.chunks.size(); ++c) {
      const auto& b = layout.chunks[c];
      const std::size_t k = kept_count(ratios[c], b.tokens);
      const std::size_t after_decoys = k > b.decoys ? k - b.decoys : 0;
      needle += std::min(after_decoys, b.needle);
      const std::size_t after_needle = after_decoys > b.needle ? after_decoys - b.needle : 0;
      distract += std::min(after_needle, b.distractors);
    }
    const std::size_t L = layout.needle_length;
    if (needle + distract < L || needle == 0) return 0.0;
    if (metric == Metric::em) return (needle == L && distract == 0) ? 1.0 : 0.0;
    return 2.0 * static_cast<double>(needle) / static_cast<double>(needle + distract + L);
  }
  std::size_t m = 0;
  for (std::size_t c = 0; c < layout.chunks.size(); ++c) {
    const auto& b = layout.chunks[c];
    m += std::min(kept_count(ratios[c], b.tokens), b.entities);
  }
  const std::size_t S = layout.entity_total;
  if (metric == Metric::em) return m == S ? 1.0 : 0.0;
  if (m == 0) return 0.0;
  return 2.0 * static_cast<double>(m) / static_cast<double>(m + S);
}

inline double truth_raw_score(const SyntheticLayout& layout, double r, Metric metric = Metric::f1) {
  const std::vector<double> ratios(layout.chunks.size(), r);
  return truth_raw_score(layout, ratios, metric);
}

inline double truth_retention(const SyntheticLayout& layout, double r, Metric metric = Metric::f1) {
  const double full = truth_raw_score(layout, 1.0, metric);
  const double at_r = truth_raw_score(layout, r, metric);
  return full <= 0.0 ? 1.0 : std::clamp(at_r / full, 0.0, 1.0);
}

// Retention when only chunk `c` is compressed at r and the rest stay whole.
inline double truth_chunk_retention(const SyntheticLayout& layout, std::size_t c, double r, Metric metric = Metric::f1) {
  std::vector<double> ratios(layout.chunks.size(), 1.0);
  ratios.at(c) = r;
  const double full = truth_raw_score(layout, 1.0, metric);
  return full <= 0.0 ? 1.0 : std::clamp(truth_raw_score(layout, ratios, metric) / full, 0.0, 1.0);
}

// A heterogeneous corpus: every sample draws its own length, decoy count,
// needle length, position and noise profile.
struct CorpusConfig {
  SyntheticKind kind = SyntheticKind::needle_qa;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::size_t min_length = 128;
  std::size_t max_length = 512;
  std::size_t min_needle_length = 1;
  std::size_t max_needle_length = 5;
  double max_decoy_fraction = 0.5;
  double distractor_fraction = 0.0;
  double min_salient_fraction = 0.5;
  double max_salient_fraction = 0.5;
  std::vector<NoiseProfile> noise_profiles{NoiseProfile::mixed, NoiseProfile::flat, NoiseProfile::stopword_heavy};
  std::size_t chunk_size = kDefaultChunkSize;
  std::string dataset_tag;
};

inline std::vector<SyntheticSample> gen_corpus(const CorpusConfig& cfg) {
  if (cfg.min_length > cfg.max_length || cfg.min_needle_length > cfg.max_needle_length || cfg.noise_profiles.empty())
    throw DataError("gen_corpus: invalid ranges");
  Rng rng(cfg.seed);
  std::vector<SyntheticSample> out;
  out.reserve(cfg.count);
  const auto width = std::to_string(cfg.count).size();
  for (std::size_t i = 0; i < cfg.count; ++i) {
    SyntheticTaskConfig t;
    t.kind = cfg.kind;
    t.chunk_size = cfg.chunk_size;
    t.context_length = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(cfg.min_length), static_cast<std::int64_t>(cfg.max_length)));
    t.needle_length = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(cfg.min_needle_length),
                                                            static_cast<std::int64_t>(cfg.max_needle_length)));
    const auto max_decoys = static_cast<std::int64_t>(std::floor(cfg.max_decoy_fraction * static_cast<double>(t.context_length)));
    t.decoy_count = static_cast<std::size_t>(rng.between(0, std::max<std::int64_t>(0, max_decoys)));
    t.distractor_fraction = cfg.distractor_fraction;
    t.salient_fraction = rng.uniform(cfg.min_salient_fraction, cfg.max_salient_fraction);
    t.noise_profile = cfg.noise_profiles[rng.below(cfg.noise_profiles.size())];
    t.needle_position = -1.0;
    t.seed = rng.next();
    std::string idx = std::to_string(i);
    idx.insert(0, width - idx.size(), '0');
    t.id = std::string(synthetic_kind_name(cfg.kind)) + "-" + idx;
    t.dataset_tag = cfg.dataset_tag;
    out.push_back(gen_synthetic(t));
  }
  return out;
}

inline std::unique_ptr<ReaderOracle> synthetic_reader_for(SyntheticKind kind) {
  if (kind == SyntheticKind::needle_qa) return std::make_unique<SyntheticNeedleReader>();
  return std::make_unique<SyntheticCoverageReader>();
}

}  // namespace poc
