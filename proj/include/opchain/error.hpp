#pragma once

#include <stdexcept>
#include <string>

namespace opchain {

enum class Errc {
  empty_set,
  boundary_mismatch,
  not_invertible,
  domain_mismatch,
  out_of_domain,
  model_mismatch,
  bad_params,
  precondition,
  verification_failed,
  not_orientation_preserving,
  too_large,
  parse_error,
  unsupported,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace opchain
