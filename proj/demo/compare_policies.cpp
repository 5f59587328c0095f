// UCB-S against UCB on example-a at theta* = 0.04, ten replications.

#include <iostream>
#include <memory>

#include "sbandit/sbandit.hpp"

int main() {
  using namespace sbandit;
  auto bandit = std::make_shared<const StructuredBandit>(make_builtin("example-a"));

  ExperimentConfig cfg;
  cfg.problem = bandit->name();
  cfg.thetas = {0.04};
  cfg.horizon = 20000;
  cfg.replications = 10;
  cfg.seed = 1;
  cfg.checkpoints = linear_checkpoints(cfg.horizon, 10);

  const ExperimentResult result = run_experiment(cfg, bandit);
  write_table(horizon_table(result), std::cout);

  const ThetaClass c = classify_parameter(*bandit, 0.04);
  std::cout << "# theta* = 0.04 is " << label_name(c.label);
  if (c.epsilon) std::cout << " with margin " << format_number(*c.epsilon);
  std::cout << '\n';
}
