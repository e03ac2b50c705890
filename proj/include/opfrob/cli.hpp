#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opfrob {

// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Names of the embedded fixtures and their JSON text.
std::vector<std::string> builtin_names();
const std::string* builtin_text(const std::string& name);

}  // namespace opfrob
