#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/belief.hpp"
#include "core/equilibrium.hpp"
#include "core/play.hpp"

namespace obslearn {

// Shortest-round-trip style is deliberately avoided: every double is printed
// with 17 significant digits so files are byte-stable across runs and exact
// to re-read.
std::string fmt17(double v);

// JSON document builder that emits keys in insertion order, 2-space pretty
// printed. Non-finite doubles serialize as null.
class json_writer {
public:
  json_writer();
  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(const std::string& k);
  void value(double v);
  void value(int v);
  void value(std::int64_t v);
  void value(std::uint64_t v);
  void value(bool v);
  void value(const std::string& v);
  void value(const char* v);
  void null();

  // key(k) + value(v)
  template <class T>
  void kv(const std::string& k, const T& v) {
    key(k);
    value(v);
  }

  std::string str() const;

private:
  void pad();
  void before_value();
  std::string out_;
  std::vector<bool> first_stack_;
  bool pending_key_ = false;
  int depth_ = 0;
};

std::string json_escape(const std::string& s);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex16(std::uint64_t v);

// Interval endpoints land in flat files clipped to +-clip, so columns stay
// finite and plottable; clip is recorded alongside.
double trace_clip(const gaussian_model& m);

std::string myopic_trace_csv(const myopic_trace& tr, const gaussian_model& m);
std::string myopic_trace_json(const myopic_trace& tr, const gaussian_model& m, double s_a, double s_b);
std::string play_trace_csv(const play_trace& tr, const gaussian_model& m);
std::string play_trace_json(const play_trace& tr, const gaussian_model& m, double s_a, double s_b);

std::string aggregation_csv(const aggregation_report& rep);
std::string mismatch_points_csv(const aggregation_report& rep);
std::string deviation_reports_csv(const std::vector<deviation_report>& reports);
std::string construction_csv(const escape_construction& c);
std::string dominance_csv(const dominance_report& rep);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace obslearn
