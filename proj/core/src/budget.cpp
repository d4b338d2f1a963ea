#include "hooley/budget.hpp"

#include <thread>

#include "hooley/error.hpp"

namespace hooley {

Budget Budget::small() {
  Budget b;
  b.name = "small";
  b.max_points = 1'000'000;
  b.max_box = 1'000'000;
  b.max_enum = 100'000;
  b.max_x = 1'000'000;
  return b;
}

Budget Budget::medium() { return Budget{}; }

Budget Budget::large() {
  Budget b;
  b.name = "large";
  b.max_points = 1'000'000'000;
  b.max_box = 1'000'000'000;
  b.max_enum = 100'000'000;
  b.max_x = 10'000'000'000ull;
  return b;
}

Budget Budget::preset(std::string_view name) {
  if (name == "small") return small();
  if (name == "medium") return medium();
  if (name == "large") return large();
  throw PreconditionError("unknown budget preset '" + std::string(name) +
                          "' (expected small|medium|large)");
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace hooley
