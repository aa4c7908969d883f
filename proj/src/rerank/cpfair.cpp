#include <cmath>
#include <limits>
#include <optional>

#include "detail.hpp"
#include "fairrank/rerank/rerankers.hpp"

namespace fairrank::rerank {

double exposure_deviation(const std::vector<double>& exposure, const std::vector<double>& shares) {
  double total = 0.0;
  for (double e : exposure) total += e;
  double dev = 0.0;
  for (std::size_t g = 0; g < exposure.size(); ++g) dev += std::abs(exposure[g] - shares[g] * total);
  return dev;
}

namespace {

constexpr double kMinImprovement = 1e-12;

struct Swap {
  double ratio;
  double improvement;
  double loss;
  UserIndex user;
  ItemIndex out;
  ItemIndex in;
};

// Ratio desc, improvement desc, loss asc, then user, out item, in item asc.
bool better(const Swap& a, const Swap& b) {
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  if (a.improvement != b.improvement) return a.improvement > b.improvement;
  if (a.loss != b.loss) return a.loss < b.loss;
  if (a.user != b.user) return a.user < b.user;
  if (a.out != b.out) return a.out < b.out;
  return a.in < b.in;
}

class Evaluator {
 public:
  Evaluator(const Catalog& catalog, const std::vector<double>& shares)
      : catalog_(catalog), shares_(shares), scratch_(shares.size()) {}

  double deviation_after(const std::vector<double>& exposure, ItemIndex out, double w_out,
                         ItemIndex in, double w_in) {
    scratch_ = exposure;
    for (GroupIndex g : catalog_.groups_of(out)) scratch_[g] -= w_out;
    for (GroupIndex g : catalog_.groups_of(in)) scratch_[g] += w_in;
    return exposure_deviation(scratch_, shares_);
  }

 private:
  const Catalog& catalog_;
  const std::vector<double>& shares_;
  std::vector<double> scratch_;
};

bool in_slate(const std::vector<ItemIndex>& slate, ItemIndex i) {
  return std::find(slate.begin(), slate.end(), i) != slate.end();
}

std::optional<Swap> consider(double improvement, double loss, UserIndex u, ItemIndex out,
                             ItemIndex in, double lambda) {
  if (loss > lambda || improvement <= kMinImprovement) return std::nullopt;
  const double ratio = loss <= 0.0 ? std::numeric_limits<double>::infinity() : improvement / loss;
  return Swap{ratio, improvement, loss, u, out, in};
}

// Per user, exposure mode: only the cheapest slate item and the best
// non-slate item of each group signature can be part of the best swap.
struct SignatureTable {
  std::vector<std::optional<ScoredItem>> out;  // lowest score, lowest item on ties
  std::vector<std::optional<ScoredItem>> in;   // highest score, lowest item on ties
};

SignatureTable build_table(const RerankContext& ctx, UserIndex u,
                           const std::vector<ItemIndex>& slate) {
  const auto& catalog = ctx.catalog();
  SignatureTable t{std::vector<std::optional<ScoredItem>>(catalog.num_signatures()),
                   std::vector<std::optional<ScoredItem>>(catalog.num_signatures())};
  for (const auto& e : ctx.scores().row(u)) {
    // Rows are item-ordered, so keeping the first of equal scores keeps the lower item.
    const bool is_out = in_slate(slate, e.item);
    auto& slot = is_out ? t.out[catalog.signature(e.item)] : t.in[catalog.signature(e.item)];
    if (!slot || (is_out ? e.score < slot->score : e.score > slot->score)) slot = e;
  }
  return t;
}

}  // namespace

RankingSlate cpfair(const RerankContext& ctx, const CpFairParams& params) {
  if (!(params.lambda >= 0.0)) throw InvalidArgument("cpfair: lambda must be >= 0");
  RankingSlate base = topk(ctx);
  if (params.lambda == 0.0 || params.swap_budget == 0) return base;

  const auto& scores = ctx.scores();
  const auto& catalog = ctx.catalog();
  const auto& shares = ctx.target_shares();
  std::vector<std::vector<ItemIndex>> slates = base.slates();
  std::vector<double> exposure(catalog.num_groups(), 0.0);
  for (UserIndex u = 0; u < scores.num_users(); ++u) detail::credit(ctx, u, slates[u], exposure);
  Evaluator eval(catalog, shares);
  const bool by_signature = ctx.mode() == UtilityMode::exposure;

  std::vector<SignatureTable> tables;
  if (by_signature) {
    tables.reserve(scores.num_users());
    for (UserIndex u = 0; u < scores.num_users(); ++u) tables.push_back(build_table(ctx, u, slates[u]));
  }
  std::vector<bool> touched(scores.num_users(), false);

  for (std::size_t step = 0; step < params.swap_budget; ++step) {
    const double current = exposure_deviation(exposure, shares);
    std::optional<Swap> best;
    auto offer = [&](std::optional<Swap> s) {
      if (s && (!best || better(*s, *best))) best = s;
    };

    if (by_signature) {
      // Unit weights: the deviation change depends only on the signatures.
      const std::size_t n = catalog.num_signatures();
      std::vector<ItemIndex> representative(n);
      for (ItemIndex i = catalog.num_items(); i-- > 0;) representative[catalog.signature(i)] = i;
      std::vector<double> gain(n * n);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          gain[a * n + b] =
              current - eval.deviation_after(exposure, representative[a], 1.0, representative[b], 1.0);
        }
      }
      for (UserIndex u = 0; u < scores.num_users(); ++u) {
        const auto& t = tables[u];
        for (std::size_t a = 0; a < n; ++a) {
          if (!t.out[a]) continue;
          for (std::size_t b = 0; b < n; ++b) {
            if (!t.in[b]) continue;
            offer(consider(gain[a * n + b], t.out[a]->score - t.in[b]->score, u, t.out[a]->item,
                           t.in[b]->item, params.lambda));
          }
        }
      }
    } else {
      for (UserIndex u = 0; u < scores.num_users(); ++u) {
        for (ItemIndex out : slates[u]) {
          const double s_out = *scores.score(u, out);
          const double w_out = slot_weight(ctx.mode(), s_out);
          for (const auto& e : scores.row(u)) {
            if (in_slate(slates[u], e.item)) continue;
            const double after =
                eval.deviation_after(exposure, out, w_out, e.item, slot_weight(ctx.mode(), e.score));
            offer(consider(current - after, s_out - e.score, u, out, e.item, params.lambda));
          }
        }
      }
    }
    if (!best) break;

    auto& slate = slates[best->user];
    *std::find(slate.begin(), slate.end(), best->out) = best->in;
    const double w_out = slot_weight(ctx.mode(), *scores.score(best->user, best->out));
    const double w_in = slot_weight(ctx.mode(), *scores.score(best->user, best->in));
    for (GroupIndex g : catalog.groups_of(best->out)) exposure[g] -= w_out;
    for (GroupIndex g : catalog.groups_of(best->in)) exposure[g] += w_in;
    if (by_signature) tables[best->user] = build_table(ctx, best->user, slate);
    touched[best->user] = true;
  }

  for (UserIndex u = 0; u < scores.num_users(); ++u) {
    if (touched[u]) detail::sort_by_score(scores, u, slates[u]);
  }
  return RankingSlate(ctx.k(), std::move(slates));
}

}  // namespace fairrank::rerank
