#include <cmath>

#include "detail.hpp"
#include "fairrank/rerank/rerankers.hpp"

namespace fairrank::rerank {

namespace {

void check_params(const WelfParams& p) {
  if (!(p.lambda >= 0.0)) throw InvalidArgument("welf: lambda must be >= 0");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw InvalidArgument("welf: alpha must be in (0, 1)");
  if (p.iterations == 0) throw InvalidArgument("welf: iterations must be >= 1");
  if (!(p.smoothing > 0.0)) throw InvalidArgument("welf: smoothing must be > 0");
}

using Policy = std::vector<std::vector<double>>;

std::vector<double> group_mass(const RerankContext& ctx, const Policy& policy) {
  std::vector<double> mass(ctx.catalog().num_groups(), 0.0);
  for (UserIndex u = 0; u < policy.size(); ++u) {
    const auto row = ctx.scores().row(u);
    for (std::size_t j = 0; j < row.size(); ++j) {
      for (GroupIndex g : ctx.catalog().groups_of(row[j].item)) mass[g] += policy[u][j];
    }
  }
  return mass;
}

// Indicator of the top-K_u entries of a row under (key desc, score desc, item asc).
void top_indicator(std::span<const ScoredItem> row, const std::vector<double>& key, std::size_t k,
                   std::vector<double>& out) {
  std::vector<detail::Keyed> pool(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) pool[j] = {key[j], row[j].score, row[j].item};
  const std::size_t n = std::min(k, row.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n), pool.end(),
                    detail::keyed_before);
  out.assign(row.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto it = std::lower_bound(row.begin(), row.end(), pool[r].item,
                                     [](const ScoredItem& e, ItemIndex i) { return e.item < i; });
    out[static_cast<std::size_t>(it - row.begin())] = 1.0;
  }
}

double polytope_violation(const Policy& policy, const RerankContext& ctx) {
  double worst = 0.0;
  for (UserIndex u = 0; u < policy.size(); ++u) {
    double sum = 0.0;
    for (double p : policy[u]) {
      worst = std::max({worst, -p, p - 1.0});
      sum += p;
    }
    const double target = static_cast<double>(std::min(ctx.k(), policy[u].size()));
    worst = std::max(worst, std::abs(sum - target));
  }
  return worst;
}

}  // namespace

double welfare_objective(const RerankContext& ctx, const Policy& policy, const WelfParams& params) {
  check_params(params);
  double relevance = 0.0;
  for (UserIndex u = 0; u < policy.size(); ++u) {
    const auto row = ctx.scores().row(u);
    for (std::size_t j = 0; j < row.size(); ++j) relevance += policy[u][j] * row[j].score;
  }
  double welfare = 0.0;
  const double power = 1.0 - params.alpha;
  for (double m : group_mass(ctx, policy)) welfare += std::pow(m + params.smoothing, power) / power;
  return relevance + params.lambda * welfare;
}

WelfOutcome welf(const RerankContext& ctx, const WelfParams& params) {
  check_params(params);
  detail::require_candidates(ctx);
  const auto& scores = ctx.scores();
  const auto& catalog = ctx.catalog();
  const std::size_t num_users = scores.num_users();

  WelfOutcome out{RankingSlate(), Policy(num_users), {}, {}, 0.0};
  Policy& pi = out.policy;
  for (UserIndex u = 0; u < num_users; ++u) {
    const auto row = scores.row(u);
    std::vector<double> s(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) s[j] = row[j].score;
    top_indicator(row, s, ctx.k(), pi[u]);
  }
  out.objective.push_back(welfare_objective(ctx, pi, params));

  std::vector<double> grad;
  std::vector<double> vertex;
  std::vector<double> marginal(catalog.num_groups());
  for (std::size_t t = 0; t < params.iterations; ++t) {
    const auto mass = group_mass(ctx, pi);
    for (GroupIndex g = 0; g < mass.size(); ++g) {
      marginal[g] = params.lambda * std::pow(mass[g] + params.smoothing, -params.alpha);
    }
    const double gamma = 2.0 / (static_cast<double>(t) + 2.0);
    double gap = 0.0;
    for (UserIndex u = 0; u < num_users; ++u) {
      const auto row = scores.row(u);
      grad.resize(row.size());
      for (std::size_t j = 0; j < row.size(); ++j) {
        double bonus = 0.0;
        for (GroupIndex g : catalog.groups_of(row[j].item)) bonus += marginal[g];
        grad[j] = row[j].score + bonus;
      }
      top_indicator(row, grad, ctx.k(), vertex);
      for (std::size_t j = 0; j < row.size(); ++j) {
        gap += grad[j] * (vertex[j] - pi[u][j]);
        pi[u][j] = (1.0 - gamma) * pi[u][j] + gamma * vertex[j];
      }
    }
    out.duality_gaps.push_back(gap);
    out.objective.push_back(welfare_objective(ctx, pi, params));
    out.max_polytope_violation = std::max(out.max_polytope_violation, polytope_violation(pi, ctx));
  }

  std::vector<std::vector<ItemIndex>> slates(num_users);
  for (UserIndex u = 0; u < num_users; ++u) {
    const auto row = scores.row(u);
    std::vector<detail::Keyed> pool(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) pool[j] = {pi[u][j], row[j].score, row[j].item};
    slates[u] = detail::take_top(pool, ctx.k());
    detail::sort_by_score(scores, u, slates[u]);
  }
  out.slates = RankingSlate(ctx.k(), std::move(slates));
  return out;
}

}  // namespace fairrank::rerank
