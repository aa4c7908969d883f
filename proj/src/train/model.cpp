#include "fairrank/train/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fairrank/errors.hpp"
#include "fairrank/ingest/text_table.hpp"

namespace fairrank::train {

MFModel::MFModel(std::size_t num_users, std::size_t num_items, std::size_t dim, bool item_bias)
    : num_users_(num_users),
      num_items_(num_items),
      dim_(dim),
      has_bias_(item_bias),
      users_(num_users * dim, 0.0),
      items_(num_items * dim, 0.0),
      bias_(item_bias ? num_items : 0, 0.0) {
  if (dim == 0) throw InvalidArgument("embedding dimension must be > 0");
}

MFModel MFModel::gaussian(std::size_t num_users, std::size_t num_items, std::size_t dim,
                          bool item_bias, double std, std::uint64_t seed) {
  MFModel m(num_users, num_items, dim, item_bias);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std);
  for (double& x : m.users_) x = normal(rng);
  for (double& x : m.items_) x = normal(rng);
  return m;
}

double MFModel::score(UserIndex u, ItemIndex i) const {
  const auto p = user(u);
  const auto q = item(i);
  double s = bias(i);
  for (std::size_t f = 0; f < dim_; ++f) s += p[f] * q[f];
  return s;
}

bool MFModel::finite() const {
  auto ok = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return ok(users_) && ok(items_) && ok(bias_);
}

double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

namespace {

double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// sigmoid(-x), stable for either sign.
double sigmoid_neg(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

}  // namespace

double triple_loss(const MFModel& m, UserIndex u, ItemIndex pos, ItemIndex neg, double weight,
                   double l2) {
  const double x = m.score(u, pos) - m.score(u, neg);
  double reg = sq_norm(m.user(u)) + sq_norm(m.item(pos)) + sq_norm(m.item(neg));
  if (m.has_bias()) reg += m.bias(pos) * m.bias(pos) + m.bias(neg) * m.bias(neg);
  return -weight * log_sigmoid(x) + l2 * reg;
}

TripleGradient triple_gradient(const MFModel& m, UserIndex u, ItemIndex pos, ItemIndex neg,
                               double weight, double l2) {
  const double x = m.score(u, pos) - m.score(u, neg);
  const double dx = -weight * sigmoid_neg(x);
  const auto p = m.user(u);
  const auto qi = m.item(pos);
  const auto qj = m.item(neg);
  const std::size_t d = m.dim();
  TripleGradient g{std::vector<double>(d), std::vector<double>(d), std::vector<double>(d), 0.0, 0.0};
  for (std::size_t f = 0; f < d; ++f) {
    g.user[f] = dx * (qi[f] - qj[f]) + 2.0 * l2 * p[f];
    g.pos[f] = dx * p[f] + 2.0 * l2 * qi[f];
    g.neg[f] = -dx * p[f] + 2.0 * l2 * qj[f];
  }
  if (m.has_bias()) {
    g.pos_bias = dx + 2.0 * l2 * m.bias(pos);
    g.neg_bias = -dx + 2.0 * l2 * m.bias(neg);
  }
  return g;
}

ScoreMatrix predict(const MFModel& model, const Catalog& catalog,
                    const std::vector<std::string>& users, const InteractionLog* exclude) {
  if (model.num_users() != catalog.num_users() || model.num_items() != catalog.num_items()) {
    throw InvalidArgument("model dimensions do not match the catalog");
  }
  std::vector<bool> wanted(catalog.num_users(), users.empty());
  for (const auto& id : users) wanted[catalog.user_index(id)] = true;

  std::vector<std::set<ItemIndex>> seen(catalog.num_users());
  if (exclude != nullptr) {
    for (const auto& r : exclude->records) {
      const auto u = catalog.find_user(r.user);
      const auto i = catalog.find_item(r.item);
      if (u && i) seen[*u].insert(*i);
    }
  }
  std::vector<std::vector<ScoredItem>> rows(catalog.num_users());
  for (UserIndex u = 0; u < catalog.num_users(); ++u) {
    if (!wanted[u]) continue;
    rows[u].reserve(catalog.num_items());
    for (ItemIndex i = 0; i < catalog.num_items(); ++i) {
      if (!seen[u].count(i)) rows[u].push_back({i, model.score(u, i)});
    }
  }
  return ScoreMatrix(catalog, std::move(rows), ScoreSemantics::raw);
}

namespace {

constexpr const char* kMagic = "fairrank-mf";
constexpr int kVersion = 1;

void write_row(std::ostream& out, char kind, const std::string& id, std::span<const double> v,
               std::optional<double> bias) {
  out << kind << '\t' << id;
  if (bias) out << '\t' << ingest::exact_decimal(*bias);
  for (double x : v) out << '\t' << ingest::exact_decimal(x);
  out << '\n';
}

}  // namespace

void save_model(const MFModel& model, const Catalog& catalog, const CheckpointInfo& info,
                const std::filesystem::path& path) {
  std::ostringstream out;
  out << kMagic << '\t' << kVersion << '\n';
  out << "users\t" << model.num_users() << "\titems\t" << model.num_items() << "\tdim\t"
      << model.dim() << "\tbias\t" << (model.has_bias() ? 1 : 0) << "\tseed\t" << info.seed
      << "\tepochs\t" << info.epochs << "\thooks\t" << (info.hooks.empty() ? "-" : info.hooks)
      << '\n';
  for (UserIndex u = 0; u < model.num_users(); ++u) {
    write_row(out, 'u', catalog.user_id(u), model.user(u), std::nullopt);
  }
  for (ItemIndex i = 0; i < model.num_items(); ++i) {
    write_row(out, 'i', catalog.item_id(i), model.item(i),
              model.has_bias() ? std::optional<double>(model.bias(i)) : std::nullopt);
  }
  ingest::write_text(path, out.str());
}

MFModel load_model(const std::filesystem::path& path, const Catalog& catalog,
                   CheckpointInfo* info) {
  const auto lines = ingest::read_lines(path);
  if (lines.size() < 2) throw FormatError(path.string() + ": truncated checkpoint");
  const auto magic = ingest::split_fields(lines[0], '\t');
  if (magic.size() != 2 || magic[0] != kMagic) {
    throw FormatError(path.string() + ": not a model checkpoint");
  }
  if (ingest::parse_int(magic[1], path, 1) != kVersion) {
    throw VersionError(path.string() + ": unsupported checkpoint version");
  }
  const auto head = ingest::split_fields(lines[1], '\t');
  if (head.size() != 14) throw FormatError(path.string() + ":2: malformed header");
  auto field = [&](std::size_t k) { return static_cast<std::size_t>(ingest::parse_int(head[k], path, 2)); };
  const std::size_t nu = field(1), ni = field(3), dim = field(5);
  const bool bias = field(7) != 0;
  if (nu != catalog.num_users() || ni != catalog.num_items()) {
    throw FormatError(path.string() + ": checkpoint does not match the catalog");
  }
  if (info != nullptr) {
    info->seed = static_cast<std::uint64_t>(ingest::parse_int(head[9], path, 2));
    info->epochs = field(11);
    info->hooks = head[13] == "-" ? "" : std::string(head[13]);
  }
  if (lines.size() != 2 + nu + ni) throw FormatError(path.string() + ": wrong number of rows");

  MFModel m(nu, ni, dim, bias);
  for (std::size_t r = 0; r < nu + ni; ++r) {
    const std::size_t lineno = r + 3;
    const auto f = ingest::split_fields(lines[r + 2], '\t');
    const bool is_user = r < nu;
    const std::size_t extra = (!is_user && bias) ? 1 : 0;
    if (f.size() != 2 + extra + dim || f[0] != (is_user ? "u" : "i")) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
    const std::size_t idx = is_user ? r : r - nu;
    const std::string& expected = is_user ? catalog.user_id(static_cast<UserIndex>(idx))
                                          : catalog.item_id(static_cast<ItemIndex>(idx));
    if (f[1] != expected) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": unexpected id '" +
                        std::string(f[1]) + "'");
    }
    auto target = is_user ? m.user(static_cast<UserIndex>(idx)) : m.item(static_cast<ItemIndex>(idx));
    if (extra) m.bias(static_cast<ItemIndex>(idx)) = ingest::parse_double(f[2], path, lineno);
    for (std::size_t k = 0; k < dim; ++k) target[k] = ingest::parse_double(f[2 + extra + k], path, lineno);
  }
  return m;
}

}  // namespace fairrank::train
