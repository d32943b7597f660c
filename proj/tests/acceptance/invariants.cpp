// Prints one PASS/FAIL line per module invariant. Exit status 0 only if
// every invariant holds.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "starcalc/verify.hpp"

int main(int argc, char** argv) {
  starcalc::VerifyOptions opt;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--seed") opt.seed = std::strtoull(argv[i + 1], nullptr, 10);
    else if (flag == "--n") opt.n = static_cast<unsigned>(std::strtoul(argv[i + 1], nullptr, 10));
  }
  const auto checks = starcalc::invariant_checks(opt);
  for (const auto& c : checks) std::printf("%s\n", starcalc::format_check(c).c_str());
  const bool ok = starcalc::all_passed(checks);
  std::printf("%s\n", ok ? "ALL INVARIANTS HOLD" : "SOME INVARIANTS FAIL");
  return ok ? 0 : 1;
}
