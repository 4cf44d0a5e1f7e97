#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbindex/geometry.hpp"
#include "rbindex/validate.hpp"

namespace rbindex {

enum class GenMode { General, GridLike, BundleHeavy };

struct GenerationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const char* gen_mode_name(GenMode m) {
  switch (m) {
    case GenMode::General: return "general";
    case GenMode::GridLike: return "grid-like";
    case GenMode::BundleHeavy: return "bundle-heavy";
  }
  return "?";
}

inline GenMode parse_gen_mode(const std::string& s) {
  if (s == "general") return GenMode::General;
  if (s == "grid-like") return GenMode::GridLike;
  if (s == "bundle-heavy") return GenMode::BundleHeavy;
  throw GenerationFailure("unknown generator mode: " + s);
}

struct GenConfig {
  std::uint64_t seed = 0;
  int n_red = 0;
  int n_blue = 0;
  GenMode mode = GenMode::General;
};

// Seed-deterministic random instances, valid by construction:
//   - reds live in disjoint horizontal bands, so they never cross;
//   - blues occupy disjoint x slots, so they never cross;
//   - every endpoint x is globally unique (distinct integers, plus unique
//     unit fractions for the bundle-heavy cluster slots).
// Residual red-blue degeneracies (exact collinear overlap, a crossing
// hitting an endpoint) have measure zero on the integer draws; a validation
// pass catches them and resamples, bounded by max_attempts.
inline SegmentSetPair gen_random(const GenConfig& cfg, int max_attempts = 32) {
  if (cfg.n_red < 0 || cfg.n_blue < 0) throw GenerationFailure("sizes must be >= 0");
  std::mt19937_64 rng(cfg.seed);

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    SegmentSetPair pair;
    const long span = 16L * (cfg.n_red + cfg.n_blue + 8);
    const long x_max = 8 * span;
    const long band = 64;  // red band height; wiggle stays under a quarter

    std::set<long> used_x;
    auto draw_x = [&]() {
      for (int tries = 0; tries < 100000; ++tries) {
        long v = static_cast<long>(rng() % static_cast<std::uint64_t>(x_max + 1));
        if (used_x.insert(v).second) return v;
      }
      throw GenerationFailure("x-coordinate universe exhausted");
    };
    auto pick = [&](long lo, long hi) {
      return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    const long y_top = static_cast<long>(cfg.n_red) * band;

    for (int i = 0; i < cfg.n_red; ++i) {
      long x1 = draw_x(), x2 = draw_x();
      if (x2 < x1) std::swap(x1, x2);
      long base = static_cast<long>(i) * band;
      Segment s;
      s.color = Color::Red;
      s.id = i + 1;
      s.a = {rat(x1), rat(base + pick(-band / 4 + 1, band / 4 - 1))};
      s.b = {rat(x2), rat(base + pick(-band / 4 + 1, band / 4 - 1))};
      pair.reds.push_back(std::move(s));
    }

    if (cfg.mode == GenMode::BundleHeavy) {
      // Clusters of near-parallel steep blues in consecutive tight slots;
      // cluster base positions advance monotonically so slots stay disjoint.
      long cursor = pick(0, 32);
      int made = 0;
      while (made < cfg.n_blue) {
        int m = std::min<int>(2 + static_cast<int>(rng() % 6), cfg.n_blue - made);
        long y1 = pick(-band, y_top / 4), y2 = pick((3 * y_top) / 4, y_top + band);
        for (int k = 0; k < m; ++k) {
          Segment s;
          s.color = Color::Blue;
          s.id = made + 1;
          // Unique unit fractions keep these x values distinct from every
          // integer draw and from each other.
          s.a = {rat(cursor) + rat(1, 4L * made + 3), rat(y1 + k)};
          s.b = {rat(cursor + 2) + rat(1, 4L * made + 5), rat(y2 + k)};
          pair.blues.push_back(std::move(s));
          cursor += 4;
          ++made;
        }
        cursor += pick(1, 1 + x_max / (cfg.n_blue + 1));
      }
    } else {
      std::vector<long> cuts;
      cuts.reserve(2 * cfg.n_blue);
      for (int j = 0; j < 2 * cfg.n_blue; ++j) cuts.push_back(draw_x());
      std::sort(cuts.begin(), cuts.end());
      for (int j = 0; j < cfg.n_blue; ++j) {
        Segment s;
        s.color = Color::Blue;
        s.id = j + 1;
        long lo_y, hi_y;
        if (cfg.mode == GenMode::GridLike) {
          lo_y = pick(-band, 0);
          hi_y = pick(y_top, y_top + band);
        } else {
          lo_y = pick(-band, y_top + band);
          hi_y = pick(-band, y_top + band);
        }
        s.a = {rat(cuts[2 * j]), rat(lo_y)};
        s.b = {rat(cuts[2 * j + 1]), rat(hi_y)};
        pair.blues.push_back(std::move(s));
      }
    }

    // Full geometric validation is quadratic; beyond desk scale the banded
    // construction is the guarantee and only the structural pass runs.
    if (cfg.n_red + cfg.n_blue <= 2048) {
      if (validate_input(pair).ok()) return pair;
    } else {
      ValidationReport rep;
      validate_structural(pair, rep);
      if (rep.ok()) return pair;
    }
  }
  throw GenerationFailure("could not generate a valid instance after bounded retries");
}

}  // namespace rbindex
