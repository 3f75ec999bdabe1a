#include "cvswap/swap/protocol.hpp"

#include "cvswap/gaussian/io.hpp"

#include <fmt/format.h>

namespace cvswap::swap {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ProtocolRun run_protocol(const ThreeModeState& s1, const ThreeModeState& s2, std::size_t n_rounds,
                         std::uint64_t seed) {
  ProtocolRun run{bell_swap(s1, s2), {}, false};
  run.certified = run.swap.en_cc > kCertificationThreshold;
  const OutcomeDistribution dist = bell_outcome_distribution(s1, s2);

  run.rounds.reserve(n_rounds);
  for (std::size_t k = 0; k < n_rounds; ++k) {
    std::mt19937_64 rng(split_seed(seed, k));
    ProtocolRecord rec;
    rec.round = k;
    rec.outcome = dist.sample(rng);
    const Displacements d = swap_displacements(s1, s2, rec.outcome);
    rec.d_r1 = d.d_r1;
    rec.d_r2 = d.d_r2;
    rec.certified = run.certified;
    run.rounds.push_back(rec);
  }
  return run;
}

nlohmann::json to_json(const SwapResult& r) {
  nlohmann::json j;
  j["v_out"] = gaussian::to_json(r.v_out, {"R1", "R2", "C1", "C2"});
  j["v_r1r2"] = gaussian::to_json(r.v_r1r2, {"R1", "R2"});
  j["v_c1c2"] = gaussian::to_json(r.v_c1c2, {"C1", "C2"});
  std::vector<double> x;
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index k = 0; k < 4; ++k) x.push_back(r.x_block(i, k));
  }
  j["x_block"] = std::move(x);
  j["eta"] = {{"rr", r.eta_rr}, {"cc", r.eta_cc}};
  j["en"] = {{"rr", r.en_rr}, {"cc", r.en_cc}};
  return j;
}

std::string protocol_csv(const std::vector<ProtocolRecord>& rounds) {
  using gaussian::format_double;
  std::string out = kProtocolCsvHeader;
  out += '\n';
  for (const auto& r : rounds) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.round, format_double(r.outcome.x_minus),
                       format_double(r.outcome.p_plus), format_double(r.d_r1(0)), format_double(r.d_r1(1)),
                       format_double(r.d_r2(0)), format_double(r.d_r2(1)), r.certified ? "true" : "false");
  }
  return out;
}

}  // namespace cvswap::swap
