#ifndef LIFTSYS_BUNDLED_HPP
#define LIFTSYS_BUNDLED_HPP

// Scenario files compiled into the library.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace liftsys::bundled {

std::vector<std::string> names();

// Accepts the file name ("thm55_demo") and the short id ("thm55").
std::optional<std::string_view> scenario_text(std::string_view id);

}  // namespace liftsys::bundled

#endif  // LIFTSYS_BUNDLED_HPP
