#include "bellhv/statistics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace bellhv {

namespace {

// helper for exact integration: probability mass per constant-outcome cell
struct Cell {
  Outcome a, b;
  double mass;
};

std::vector<Cell> exact_cells(const ConditionalDensity& d, Setting m_a,
                              Setting m_b) {
  const HVModel& model = d.model();
  const DensitySlice slice = d.slice(m_a, m_b);

  if (slice.kind() == SpaceKind::FourPoint) {
    std::vector<Cell> cells;
    for (int i = 0; i < 4; ++i) {
      const DiscretePair p = fourpoint_from_index(i);
      const LambdaPoint lambda = LambdaPoint::pair(p.a_pre, p.b_pre);
      cells.push_back({model.outcome_A(lambda, m_a, m_b),
                       model.outcome_B(lambda, m_a, m_b), slice.masses()[i]});
    }
    return cells;
  }

  std::vector<double> cuts = slice.breakpoints();
  const std::vector<double> model_cuts = model.outcome_breakpoints(m_a, m_b);
  cuts.insert(cuts.end(), model_cuts.begin(), model_cuts.end());
  cuts.push_back(0.0);
  cuts.push_back(model.space().domain_length());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Cell> cells;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const LambdaPoint lambda = slice.kind() == SpaceKind::UnitInterval
                                   ? LambdaPoint::unit(mid)
                                   : LambdaPoint::circle(mid);
    cells.push_back({model.outcome_A(lambda, m_a, m_b),
                     model.outcome_B(lambda, m_a, m_b),
                     slice.mass_over_interval(lo, hi)});
  }
  return cells;
}

ExpectationReport exact_expectations(const ConditionalDensity& d, Setting m_a,
                                     Setting m_b) {
  ExpectationReport rep;
  rep.method = Method::Kind::Exact;
  for (const Cell& cell : exact_cells(d, m_a, m_b)) {
    rep.e_ab += sign(cell.a) * sign(cell.b) * cell.mass;
    rep.e_a += sign(cell.a) * cell.mass;
    rep.e_b += sign(cell.b) * cell.mass;
    rep.joint[fourpoint_index(cell.a, cell.b)] += cell.mass;
  }
  return rep;
}

struct Counts {
  std::uint64_t joint[4] = {0, 0, 0, 0};
};

constexpr std::uint64_t kBlockSize = 1u << 16;

// Blockwise sampling: block k always uses substream(seed, k), and counts are
// integers, so totals are identical for any worker partition.
ExpectationReport mc_expectations(const ConditionalDensity& d, Setting m_a,
                                  Setting m_b, const MonteCarloParams& mc) {
  if (mc.samples == 0) throw std::invalid_argument("sample count must be positive");
  const HVModel& model = d.model();
  const DensitySlice slice = d.slice(m_a, m_b);
  const std::uint64_t n_blocks = (mc.samples + kBlockSize - 1) / kBlockSize;

  std::vector<Counts> partial(n_blocks);
  auto run_block = [&](std::uint64_t blk) {
    RngStream rng = RngStream::substream(mc.seed, blk);
    const std::uint64_t begin = blk * kBlockSize;
    const std::uint64_t end = std::min(begin + kBlockSize, mc.samples);
    Counts c;
    for (std::uint64_t s = begin; s < end; ++s) {
      const LambdaPoint lambda = slice.sample(rng);
      const Outcome oa = model.outcome_A(lambda, m_a, m_b);
      const Outcome ob = model.outcome_B(lambda, m_a, m_b);
      ++c.joint[fourpoint_index(oa, ob)];
    }
    partial[blk] = c;
  };

  const int workers = std::max(1, mc.workers);
  if (workers == 1 || n_blocks == 1) {
    for (std::uint64_t blk = 0; blk < n_blocks; ++blk) run_block(blk);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::uint64_t> next{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t blk = next.fetch_add(1); blk < n_blocks;
             blk = next.fetch_add(1)) {
          run_block(blk);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  Counts total;
  for (const Counts& c : partial) {
    for (int i = 0; i < 4; ++i) total.joint[i] += c.joint[i];
  }

  ExpectationReport rep;
  rep.method = Method::Kind::MonteCarlo;
  rep.n_samples = mc.samples;
  const double n = static_cast<double>(mc.samples);
  for (int i = 0; i < 4; ++i) {
    rep.joint[i] = static_cast<double>(total.joint[i]) / n;
  }
  rep.e_ab = rep.joint[0] - rep.joint[1] - rep.joint[2] + rep.joint[3];
  rep.e_a = rep.joint[0] + rep.joint[1] - rep.joint[2] - rep.joint[3];
  rep.e_b = rep.joint[0] - rep.joint[1] + rep.joint[2] - rep.joint[3];
  // outcomes are +/-1, so Var = 1 - E^2
  auto se = [n](double e) { return std::sqrt(std::max(0.0, 1.0 - e * e) / n); };
  rep.se_ab = se(rep.e_ab);
  rep.se_a = se(rep.e_a);
  rep.se_b = se(rep.e_b);
  return rep;
}

}  // namespace

ExpectationReport expectations(const ConditionalDensity& d, Setting m_a,
                               Setting m_b, const Method& method) {
  if (method.kind == Method::Kind::Exact) {
    return exact_expectations(d, m_a, m_b);
  }
  return mc_expectations(d, m_a, m_b, method.mc);
}

double chsh(const ConditionalDensity& d, Setting a, Setting a_alt, Setting b,
            Setting b_alt, const Method& method) {
  Method per_pair = method;
  auto term = [&](Setting x, Setting y, std::uint64_t idx) {
    if (method.kind == Method::Kind::MonteCarlo) {
      per_pair.mc.seed = mix_seed(method.mc.seed, idx);
    }
    return expectations(d, x, y, per_pair).e_ab;
  };
  return term(a, b, 0) - term(a, b_alt, 1) + term(a_alt, b, 2) +
         term(a_alt, b_alt, 3);
}

ViolationReport marginal_violation(const ConditionalDensity& d, Setting m_a,
                                   Setting m_b, Setting m_b_alt,
                                   const Method& method) {
  Method per_pair = method;
  if (method.kind == Method::Kind::MonteCarlo) {
    per_pair.mc.seed = mix_seed(method.mc.seed, 0);
  }
  const ExpectationReport base = expectations(d, m_a, m_b, per_pair);
  if (method.kind == Method::Kind::MonteCarlo) {
    per_pair.mc.seed = mix_seed(method.mc.seed, 1);
  }
  const ExpectationReport alt = expectations(d, m_a, m_b_alt, per_pair);

  ViolationReport rep;
  rep.delta_a = alt.e_a - base.e_a;
  rep.se_delta = std::sqrt(base.se_a * base.se_a + alt.se_a * alt.se_a);
  rep.m_a = m_a;
  rep.m_b = m_b;
  rep.m_b_alt = m_b_alt;
  rep.method = method.kind;
  return rep;
}

MechanismDependenceReport mechanism_dependence(
    std::span<const ConditionalDensity> densities, Setting m_a, Setting m_b,
    const Method& method) {
  if (densities.empty()) {
    throw std::invalid_argument("mechanism probe needs at least one density");
  }
  for (const ConditionalDensity& d : densities) {
    if (d.model_id() != densities.front().model_id()) {
      throw std::invalid_argument("mechanism probe mixes different models");
    }
  }

  MechanismDependenceReport rep;
  Method per_density = method;
  for (std::size_t i = 0; i < densities.size(); ++i) {
    if (method.kind == Method::Kind::MonteCarlo) {
      per_density.mc.seed = mix_seed(method.mc.seed, i);
    }
    const ExpectationReport e = expectations(densities[i], m_a, m_b, per_density);
    rep.table.push_back({densities[i].mechanism(), e.joint});
  }

  for (std::size_t i = 0; i < rep.table.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.table.size(); ++j) {
      double tv = 0.0;
      for (int k = 0; k < 4; ++k) {
        tv += std::fabs(rep.table[i].joint[k] - rep.table[j].joint[k]);
      }
      tv *= 0.5;
      rep.pairwise.push_back({i, j, tv});
      rep.max_tv = std::max(rep.max_tv, tv);
    }
  }
  return rep;
}

}  // namespace bellhv
