#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/belief.hpp"

namespace obslearn {

using history = std::vector<action_pair>;

std::string history_label(const history& h);

// Pure threshold-class strategies plus finite deviation scripts on top of
// them. A strategy_spec owns its base via shared_ptr so copies stay cheap.
//
//  - myopic: cutoff = myopic threshold at the current beliefs.
//  - threshold_map: myopic cutoffs, rescaled at explicitly listed histories.
//    Total over all histories by construction.
//  - two_threshold_map: explicit finite map history -> (mu1, mu2, outer).
//    Reaching an unlisted history is an incomplete-strategy error.
//  - deviation_script: base strategy with finitely many dates forced.
//
// presumed() is the strategy opponents condition belief updates on: the base
// for a script, the strategy itself otherwise, unless presumed_as overrides.
struct strategy_spec {
  enum class kind { myopic, threshold_map, two_threshold_map, deviation_script };

  struct scale_override {
    history at;
    double scale = 1.0;
  };
  struct two_threshold_rule {
    history at;
    double mu1 = 0.0, mu2 = 0.0;
    int outer_action = -1;  // action outside (mu1, mu2); the other inside
  };

  kind k = kind::myopic;
  std::vector<scale_override> scale_overrides;        // threshold_map
  std::vector<two_threshold_rule> rules;              // two_threshold_map
  std::shared_ptr<const strategy_spec> base;          // deviation_script
  std::vector<std::pair<int, int>> forced;            // (absolute date, action)
  std::shared_ptr<const strategy_spec> presumed_as;   // optional explicit presumption

  static strategy_spec myopic();
  static strategy_spec scaled(history at, double scale);
  static strategy_spec scaled_many(std::vector<scale_override> overrides);
  static strategy_spec two_threshold(std::vector<two_threshold_rule> rules);
  static strategy_spec script(strategy_spec base_strategy, std::vector<std::pair<int, int>> forced);

  void validate() const;
  const strategy_spec& presumed() const;
  bool threshold_class() const { return k == kind::myopic || k == kind::threshold_map; }

  // True when no override, rule, or forced date applies at or after `date`.
  bool stationary_after(int date) const;

  // Last date mentioned by any override/rule/force; -1 for plain myopic.
  int last_structured_date() const;

  std::string label() const;
};

}  // namespace obslearn
