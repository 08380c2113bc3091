#include "core/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace obslearn {

std::string history_label(const history& h) {
  if (h.empty()) return "[]";
  std::string out;
  for (size_t i = 0; i < h.size(); ++i) {
    if (i) out += '|';
    out += h[i].z_a > 0 ? '+' : '-';
    out += h[i].z_b > 0 ? '+' : '-';
  }
  return out;
}

strategy_spec strategy_spec::myopic() { return strategy_spec{}; }

strategy_spec strategy_spec::scaled(history at, double scale) {
  strategy_spec s;
  s.k = kind::threshold_map;
  s.scale_overrides.push_back({std::move(at), scale});
  s.validate();
  return s;
}

strategy_spec strategy_spec::scaled_many(std::vector<scale_override> overrides) {
  strategy_spec s;
  s.k = kind::threshold_map;
  s.scale_overrides = std::move(overrides);
  s.validate();
  return s;
}

strategy_spec strategy_spec::two_threshold(std::vector<two_threshold_rule> rules) {
  strategy_spec s;
  s.k = kind::two_threshold_map;
  s.rules = std::move(rules);
  s.validate();
  return s;
}

strategy_spec strategy_spec::script(strategy_spec base_strategy, std::vector<std::pair<int, int>> forced) {
  strategy_spec s;
  s.k = kind::deviation_script;
  s.base = std::make_shared<const strategy_spec>(std::move(base_strategy));
  s.forced = std::move(forced);
  s.validate();
  return s;
}

void strategy_spec::validate() const {
  switch (k) {
    case kind::myopic:
      break;
    case kind::threshold_map:
      for (const auto& o : scale_overrides)
        if (!std::isfinite(o.scale)) fail(errc::invalid_argument, "strategy: scale must be finite");
      break;
    case kind::two_threshold_map:
      if (rules.empty()) fail(errc::invalid_argument, "strategy: two-threshold map needs at least one rule");
      for (const auto& r : rules) {
        if (!(r.mu1 < r.mu2)) fail(errc::invalid_argument, "strategy: two-threshold rule needs mu1 < mu2");
        check_action(r.outer_action, "strategy");
      }
      break;
    case kind::deviation_script:
      if (!base) fail(errc::invalid_argument, "strategy: script without base");
      if (base->k == kind::deviation_script) fail(errc::invalid_argument, "strategy: nested scripts");
      base->validate();
      for (const auto& f : forced) {
        if (f.first < 0) fail(errc::invalid_argument, "strategy: forced date must be >= 0");
        check_action(f.second, "strategy");
      }
      break;
  }
  if (presumed_as) {
    if (!presumed_as->threshold_class())
      fail(errc::unsupported, "strategy: presumption must be threshold-class");
    presumed_as->validate();
  }
}

const strategy_spec& strategy_spec::presumed() const {
  if (presumed_as) return *presumed_as;
  if (k == kind::deviation_script) return base->presumed_as ? *base->presumed_as : *base;
  return *this;
}

bool strategy_spec::stationary_after(int date) const {
  for (const auto& o : scale_overrides)
    if (static_cast<int>(o.at.size()) >= date) return false;
  for (const auto& r : rules)
    if (static_cast<int>(r.at.size()) >= date) return false;
  for (const auto& f : forced)
    if (f.first >= date) return false;
  if (base && !base->stationary_after(date)) return false;
  return true;
}

int strategy_spec::last_structured_date() const {
  int last = -1;
  for (const auto& o : scale_overrides) last = std::max(last, static_cast<int>(o.at.size()));
  for (const auto& r : rules) last = std::max(last, static_cast<int>(r.at.size()));
  for (const auto& f : forced) last = std::max(last, f.first);
  if (base) last = std::max(last, base->last_structured_date());
  return last;
}

std::string strategy_spec::label() const {
  switch (k) {
    case kind::myopic:
      return "myopic";
    case kind::threshold_map: {
      std::string out = "scaled(";
      for (size_t i = 0; i < scale_overrides.size(); ++i) {
        if (i) out += ';';
        char buf[64];
        snprintf(buf, sizeof buf, "%s*%g", history_label(scale_overrides[i].at).c_str(),
                 scale_overrides[i].scale);
        out += buf;
      }
      return out + ")";
    }
    case kind::two_threshold_map:
      return "two_threshold";
    case kind::deviation_script: {
      std::string out = base->label();
      for (const auto& f : forced) {
        char buf[48];
        snprintf(buf, sizeof buf, "+force(%d,%+d)", f.first, f.second);
        out += buf;
      }
      return out;
    }
  }
  return "?";
}

}  // namespace obslearn
