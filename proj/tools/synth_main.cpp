#include <CLI11.hpp>

#include <iostream>

#include "fairrank/errors.hpp"
#include "fairrank/synth/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic dataset generator"};
  app.require_subcommand(1);

  fairrank::synth::RecSpec rec;
  std::string rec_dir;
  auto* rec_cmd = app.add_subcommand("recommendation", "interaction log, groups and base scores");
  rec_cmd->add_option("--out", rec_dir, "output dataset directory")->required();
  rec_cmd->add_option("--users", rec.users);
  rec_cmd->add_option("--items", rec.items);
  rec_cmd->add_option("--groups", rec.groups);
  rec_cmd->add_option("--per-user", rec.interactions_per_user, "interactions per user");
  rec_cmd->add_option("--skew", rec.skew, "group popularity tilt");
  rec_cmd->add_option("--seed", rec.seed);

  fairrank::synth::SearchSpec search;
  std::string search_dir;
  auto* search_cmd = app.add_subcommand("search", "TREC-style run and intent judgments");
  search_cmd->add_option("--out", search_dir, "output dataset directory")->required();
  search_cmd->add_option("--queries", search.queries);
  search_cmd->add_option("--docs", search.docs_per_query, "docs per query");
  search_cmd->add_option("--min-intents", search.min_intents);
  search_cmd->add_option("--max-intents", search.max_intents);
  search_cmd->add_option("--seed", search.seed);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*rec_cmd) {
      const auto data = fairrank::synth::generate_recommendation(rec, rec_dir);
      std::cout << "wrote " << data.total_records() << " interactions for "
                << data.catalog.num_users() << " users to " << rec_dir << "\n";
    } else {
      fairrank::synth::generate_search(search, search_dir);
      std::cout << "wrote " << search.queries << " queries to " << search_dir << "\n";
    }
  } catch (const fairrank::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
