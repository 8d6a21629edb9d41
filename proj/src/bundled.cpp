#include "liftsys/bundled.hpp"

#include <utility>

namespace liftsys::bundled {

namespace {

struct Entry {
  const char* name;
  const char* text;
};

const Entry kEntries[] = {
#include "liftsys/bundled_scenarios.inc"
};

const std::pair<const char*, const char*> kAliases[] = {{"thm55", "thm55_demo"}};

}  // namespace

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& e : kEntries) out.emplace_back(e.name);
  return out;
}

std::optional<std::string_view> scenario_text(std::string_view id) {
  for (const auto& [alias, target] : kAliases)
    if (id == alias) id = target;
  for (const auto& e : kEntries)
    if (id == e.name) return std::string_view(e.text);
  return std::nullopt;
}

}  // namespace liftsys::bundled
