#pragma once

// Independent reference computations shared by unit and acceptance tests.
// Each one recomputes its quantity from first principles, without the
// library code it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>
#include <variant>
#include <vector>

#include "recad/cad_model.hpp"
#include "recad/geometry/voxel.hpp"
#include "recad/rl/harness.hpp"
#include "recad/rl/policy.hpp"

namespace recad::testing {

/// O(n^2) symmetric chamfer on squared distances.
inline double brute_chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  auto one_way = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    double sum = 0.0;
    for (Vec3 p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (Vec3 q : to) {
        const double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
        best = std::min(best, dx * dx + dy * dy + dz * dz);
      }
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };
  return 0.5 * (one_way(a, b) + one_way(b, a));
}

/// Intersection over union by counting cells of two grids on one frame.
inline double count_iou(const geom::VoxelGrid& a, const geom::VoxelGrid& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.occupancy.size(); ++i) {
    inter += a.occupancy[i] && b.occupancy[i];
    uni += a.occupancy[i] || b.occupancy[i];
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

/// Every positional parameter of a model, in a fixed traversal order.
inline std::vector<double> positional_values(const CADModel& m) {
  std::vector<double> out;
  auto loop_values = [&](const Loop& l) {
    out.push_back(l.start.x);
    out.push_back(l.start.y);
    for (const CurveCmd& c : l.curves) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Circle>) {
              out.push_back(v.radius);
            } else {
              out.push_back(v.end.x);
              out.push_back(v.end.y);
            }
          },
          c);
    }
  };
  for (const SEPair& p : m.pairs) {
    out.insert(out.end(), {p.sketch.origin.x, p.sketch.origin.y, p.sketch.origin.z});
    for (const Face& f : p.sketch.faces) {
      loop_values(f.outer);
      for (const Loop& h : f.holes) loop_values(h);
    }
    out.push_back(p.extrude.dist_pos);
    out.push_back(p.extrude.dist_neg);
  }
  return out;
}

/// Expected objective over every ordered group: slot s < guided draws under
/// guidance code s, the rest unguided. Advantages, ratios and clipping are
/// recomputed here from the policy's log-probabilities.
inline double brute_force_expectation(const rl::MockCategoricalPolicy& policy, const rl::Question& q,
                                      const rl::RewardFn& reward, std::size_t n, std::size_t guided, double eps,
                                      double beta) {
  const auto texts = policy.outcome_texts(q);
  const std::size_t k = texts.size();
  std::vector<std::size_t> pick(n, 0);
  double total = 0.0;
  while (true) {
    double weight = 1.0;
    std::vector<double> rewards(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::optional<std::size_t> ctx;
      if (s < guided) ctx = s;
      weight *= policy.probabilities(ctx, rl::PolicyVersion::kOld)[pick[s]];
      rewards[s] = reward(q, texts[pick[s]]);
    }
    // Extended precision keeps constant groups at exactly zero deviation.
    long double sum = 0.0L;
    for (double r : rewards) sum += r;
    const long double mean = sum / static_cast<long double>(n);
    long double var = 0.0L;
    for (double r : rewards) var += (r - mean) * (r - mean) / static_cast<long double>(n);
    const double sd = std::sqrt(static_cast<double>(var)) < 1e-8 ? 1e-8 : std::sqrt(static_cast<double>(var));
    double on = 0.0, off = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double adv = static_cast<double>((rewards[s] - mean) / sd);
      const auto tokens = rl::tokenize_solution(texts[pick[s]]);
      std::optional<std::size_t> ctx;
      if (s < guided) ctx = s;
      const auto num = policy.logprob(q, tokens, std::nullopt, rl::PolicyVersion::kCurrent);
      const auto den = policy.logprob(q, tokens, ctx, rl::PolicyVersion::kOld);
      double term = 0.0;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        const double r = std::exp(num[t] - den[t]);
        const double clipped = r < 1 - eps ? 1 - eps : (r > 1 + eps ? 1 + eps : r);
        term += (r * adv < clipped * adv ? r * adv : clipped * adv) / static_cast<double>(tokens.size());
      }
      (s < guided ? off : on) += term;
    }
    const double objective = guided == 0 ? on / static_cast<double>(n)
                                         : (guided < n ? on / static_cast<double>(n - guided) : 0.0) +
                                               off / static_cast<double>(guided);
    total += weight * objective;
    std::size_t s = 0;
    while (s < n && ++pick[s] == k) pick[s++] = 0;
    if (s == n) break;
  }
  return total - beta * policy.kl(q);
}

}  // namespace recad::testing
