#pragma once

#include <stdexcept>
#include <string>

namespace obslearn {

enum class errc {
  ok = 0,
  invalid_argument,
  degenerate_support,
  no_sign_change,
  off_path,
  incomplete_strategy,
  not_asymmetric,
  non_termination,
  precondition,
  config,
  io,
  unsupported,
  internal,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "ok";
    case errc::invalid_argument: return "invalid_argument";
    case errc::degenerate_support: return "degenerate_support";
    case errc::no_sign_change: return "no_sign_change";
    case errc::off_path: return "off_path";
    case errc::incomplete_strategy: return "incomplete_strategy";
    case errc::not_asymmetric: return "not_asymmetric";
    case errc::non_termination: return "non_termination";
    case errc::precondition: return "precondition";
    case errc::config: return "config";
    case errc::io: return "io";
    case errc::unsupported: return "unsupported";
    case errc::internal: return "internal";
  }
  return "unknown";
}

}  // namespace obslearn
