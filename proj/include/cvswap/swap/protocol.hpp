#pragma once

#include "cvswap/swap/bell_swap.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace cvswap::swap {

struct ProtocolRecord {
  std::size_t round = 0;
  BellOutcome outcome;
  Eigen::Vector2d d_r1 = Eigen::Vector2d::Zero();
  Eigen::Vector2d d_r2 = Eigen::Vector2d::Zero();
  bool certified = false;
};

struct ProtocolRun {
  SwapResult swap;  ///< shared by every round
  std::vector<ProtocolRecord> rounds;
  bool certified = false;
};

/// SplitMix64 step; derives independent per-round/per-point seeds.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

/// Three-step protocol, repeated n_rounds times. Each round draws its Bell
/// outcome from a generator seeded with split_seed(seed, round), records the
/// classical displacements of R1 and R2, and marks the round certified when
/// E_N of C1C2 exceeds kCertificationThreshold.
ProtocolRun run_protocol(const ThreeModeState& s1, const ThreeModeState& s2, std::size_t n_rounds,
                         std::uint64_t seed);

/// {v_out, v_r1r2, v_c1c2, x_block, eta: {rr, cc}, en: {rr, cc}}
nlohmann::json to_json(const SwapResult& r);

inline constexpr const char* kProtocolCsvHeader = "round,x_minus,p_plus,d_r1x,d_r1p,d_r2x,d_r2p,certified";

/// Header line plus one line per round.
std::string protocol_csv(const std::vector<ProtocolRecord>& rounds);

}  // namespace cvswap::swap
