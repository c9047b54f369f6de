#ifndef SGTW_ERRORS_HPP
#define SGTW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace sgtw {

// Library error carrying a stable machine-readable code; the CLI maps
// codes to exit status and emits them as JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace sgtw

#endif
