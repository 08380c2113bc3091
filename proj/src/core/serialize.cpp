#include "core/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace obslearn {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json_writer::json_writer() { first_stack_.push_back(true); }

void json_writer::pad() { out_.append(static_cast<size_t>(depth_) * 2, ' '); }

void json_writer::before_value() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_stack_.back()) out_ += ",";
  if (depth_ > 0) out_ += "\n";
  pad();
  first_stack_.back() = false;
}

void json_writer::begin_object() {
  before_value();
  out_ += "{";
  first_stack_.push_back(true);
  ++depth_;
}

void json_writer::end_object() {
  --depth_;
  if (!first_stack_.back()) {
    out_ += "\n";
    pad();
  }
  first_stack_.pop_back();
  out_ += "}";
}

void json_writer::begin_array() {
  before_value();
  out_ += "[";
  first_stack_.push_back(true);
  ++depth_;
}

void json_writer::end_array() {
  --depth_;
  if (!first_stack_.back()) {
    out_ += "\n";
    pad();
  }
  first_stack_.pop_back();
  out_ += "]";
}

void json_writer::key(const std::string& k) {
  if (!first_stack_.back()) out_ += ",";
  out_ += "\n";
  pad();
  first_stack_.back() = false;
  out_ += "\"" + json_escape(k) + "\": ";
  pending_key_ = true;
}

void json_writer::value(double v) {
  before_value();
  if (!std::isfinite(v))
    out_ += "null";
  else
    out_ += fmt17(v);
}

void json_writer::value(int v) {
  before_value();
  out_ += std::to_string(v);
}

void json_writer::value(std::int64_t v) {
  before_value();
  out_ += std::to_string(v);
}

void json_writer::value(std::uint64_t v) {
  before_value();
  out_ += std::to_string(v);
}

void json_writer::value(bool v) {
  before_value();
  out_ += v ? "true" : "false";
}

void json_writer::value(const std::string& v) {
  before_value();
  out_ += "\"" + json_escape(v) + "\"";
}

void json_writer::value(const char* v) { value(std::string(v)); }

void json_writer::null() {
  before_value();
  out_ += "null";
}

std::string json_writer::str() const { return out_ + "\n"; }

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double trace_clip(const gaussian_model& m) {
  return 12.0 * (m.sigma0() + m.noise_sd(player::a) + m.noise_sd(player::b));
}

namespace {
double clipped(double v, double clip) {
  if (v < -clip) return -clip;
  if (v > clip) return clip;
  return v;
}

void interval_json(json_writer& w, const belief_interval& iv, double clip) {
  w.begin_object();
  w.kv("lo", clipped(iv.lo, clip));
  w.kv("hi", clipped(iv.hi, clip));
  w.end_object();
}
}  // namespace

std::string myopic_trace_csv(const myopic_trace& tr, const gaussian_model& m) {
  const double clip = trace_clip(m);
  std::string out = "date,z_a,z_b,S_a.lo,S_a.hi,S_b.lo,S_b.hi,m_a,m_b,agreed\n";
  for (const myopic_row& r : tr.rows) {
    out += std::to_string(r.date) + "," + std::to_string(r.z_a) + "," + std::to_string(r.z_b) + "," +
           fmt17(clipped(r.s_a.lo, clip)) + "," + fmt17(clipped(r.s_a.hi, clip)) + "," +
           fmt17(clipped(r.s_b.lo, clip)) + "," + fmt17(clipped(r.s_b.hi, clip)) + "," +
           fmt17(r.m_a) + "," + fmt17(r.m_b) + "," + (r.agreed ? "1" : "0") + "\n";
  }
  return out;
}

std::string myopic_trace_json(const myopic_trace& tr, const gaussian_model& m, double s_a, double s_b) {
  const double clip = trace_clip(m);
  json_writer w;
  w.begin_object();
  w.kv("kind", "myopic_trace");
  w.kv("s_a", s_a);
  w.kv("s_b", s_b);
  w.kv("clip", clip);
  w.kv("first_agreement", tr.first_agreement);
  w.key("rows");
  w.begin_array();
  for (const myopic_row& r : tr.rows) {
    w.begin_object();
    w.kv("date", r.date);
    w.kv("z_a", r.z_a);
    w.kv("z_b", r.z_b);
    w.key("S_a");
    interval_json(w, r.s_a, clip);
    w.key("S_b");
    interval_json(w, r.s_b, clip);
    w.kv("m_a", r.m_a);
    w.kv("m_b", r.m_b);
    w.kv("agreed", r.agreed);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string play_trace_csv(const play_trace& tr, const gaussian_model& m) {
  const double clip = trace_clip(m);
  std::string out =
      "date,z_a,z_b,S_a.lo,S_a.hi,S_b.lo,S_b.hi,m_a,m_b,agreed,stage_payoff_a,stage_payoff_b,off_path\n";
  for (const play_row& r : tr.rows) {
    out += std::to_string(r.date) + "," + std::to_string(r.z_a) + "," + std::to_string(r.z_b) + "," +
           fmt17(clipped(r.s_a.lo, clip)) + "," + fmt17(clipped(r.s_a.hi, clip)) + "," +
           fmt17(clipped(r.s_b.lo, clip)) + "," + fmt17(clipped(r.s_b.hi, clip)) + "," +
           fmt17(r.m_a) + "," + fmt17(r.m_b) + "," + (r.agreed ? "1" : "0") + "," +
           fmt17(r.stage_payoff_a) + "," + fmt17(r.stage_payoff_b) + "," + (r.off_path ? "1" : "0") +
           "\n";
  }
  return out;
}

std::string play_trace_json(const play_trace& tr, const gaussian_model& m, double s_a, double s_b) {
  const double clip = trace_clip(m);
  json_writer w;
  w.begin_object();
  w.kv("kind", "play_trace");
  w.kv("s_a", s_a);
  w.kv("s_b", s_b);
  w.kv("delta_a", tr.delta_a);
  w.kv("delta_b", tr.delta_b);
  w.kv("clip", clip);
  w.kv("first_agreement", tr.first_agreement);
  w.kv("total_a", tr.total_a);
  w.kv("total_b", tr.total_b);
  w.key("rows");
  w.begin_array();
  for (const play_row& r : tr.rows) {
    w.begin_object();
    w.kv("date", r.date);
    w.kv("z_a", r.z_a);
    w.kv("z_b", r.z_b);
    w.key("S_a");
    interval_json(w, r.s_a, clip);
    w.key("S_b");
    interval_json(w, r.s_b, clip);
    w.kv("m_a", r.m_a);
    w.kv("m_b", r.m_b);
    w.kv("agreed", r.agreed);
    w.kv("stage_payoff_a", r.stage_payoff_a);
    w.kv("stage_payoff_b", r.stage_payoff_b);
    w.kv("off_path", r.off_path);
    w.end_object();
  }
  w.end_array();
  w.key("off_path_events");
  w.begin_array();
  for (const off_path_event& e : tr.events) {
    w.begin_object();
    w.kv("date", e.date);
    w.kv("player", player_name(e.who));
    w.kv("note", e.note);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string aggregation_csv(const aggregation_report& rep) {
  std::string out = "profile,grid_n,span,sampled,excluded,wrong,unsettled,mismatch_fraction\n";
  out += rep.profile + "," + std::to_string(rep.grid_n) + "," + fmt17(rep.span) + "," +
         std::to_string(rep.sampled) + "," + std::to_string(rep.excluded) + "," +
         std::to_string(rep.wrong) + "," + std::to_string(rep.unsettled) + "," +
         fmt17(rep.mismatch_fraction) + "\n";
  return out;
}

std::string mismatch_points_csv(const aggregation_report& rep) {
  std::string out = "s_a,s_b,final_action\n";
  for (const auto& p : rep.mismatch_points)
    out += fmt17(p.s_a) + "," + fmt17(p.s_b) + "," + std::to_string(p.final_action) + "\n";
  return out;
}

std::string deviation_reports_csv(const std::vector<deviation_report>& reports) {
  std::string out = "player,type,script,gap\n";
  for (const deviation_report& r : reports)
    out += std::string(player_name(r.who)) + "," + fmt17(r.type_value) + "," + r.script + "," +
           fmt17(r.gap) + "\n";
  return out;
}

std::string construction_csv(const escape_construction& c) {
  std::string out = "k,r,s\n";
  for (size_t k = 0; k < c.r_seq.size(); ++k)
    out += std::to_string(k) + "," + fmt17(c.r_seq[k]) + "," + fmt17(c.s_seq[k]) + "\n";
  return out;
}

std::string dominance_csv(const dominance_report& rep) {
  std::string out = "s,stage_loss,continuation_cap,dominated\n";
  for (const dominance_row& r : rep.rows)
    out += fmt17(r.s) + "," + fmt17(r.stage_loss) + "," + fmt17(r.continuation_cap) + "," +
           (r.dominated ? "1" : "0") + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(errc::io, "cannot open for writing: " + path);
  f << content;
  if (!f) fail(errc::io, "short write: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(errc::io, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace obslearn
