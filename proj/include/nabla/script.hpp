#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "nabla/derivation.hpp"

namespace nabla {

/// Parse failure with a 1-based line number (0 when not tied to a line).
class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::size_t line, const std::string& msg);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the line-oriented derivation format:
///
///   assume <id> lwff <label>+ : <formula>
///   assume <id> rwff le(<label>,<label>) | succ(<label>,<label>)
///   node <id> <rule> concl <label>+ : <formula> prem <id>,... [disch <id>,...] [subst <l> <l>]
///   ltl <id> <ltl formula>
///   root <id>
///
/// `#` starts a comment. Steps may only reference ids defined above them.
/// Rule names are not validated here; unknown names are left to the kernel.
Derivation parse_script(std::string_view text);
Derivation load_script(const std::string& path);

/// Prints steps in dependency order so the output parses back.
std::string print_script(const Derivation& d);

std::string read_file(const std::string& path);

}  // namespace nabla
