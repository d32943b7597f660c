#pragma once

#include <functional>
#include <string>
#include <utility>

#include "starcalc/phase_space.hpp"
#include "starcalc/verify.hpp"

namespace starcalc::detail {

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));

/// Runs the body; an exception turns into a failed check carrying its message.
CheckResult guarded(std::string id, std::string title, const std::function<std::pair<bool, std::string>()>& body);

PhaseSpace unit_interval(double z);

}  // namespace starcalc::detail
