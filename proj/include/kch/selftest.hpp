#pragma once

#include <functional>
#include <string>
#include <vector>

namespace kch {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Property suite at small grid sizes (16 x 16 x 17): geometry identities,
/// plate gradient and symbol, pressure solve, compatibility of the presets,
/// serial/parallel kernel agreement, snapshot round trip and a short coupled run.
std::vector<SelftestCheck> run_selftest(const std::function<void(const SelftestCheck&)>& on_check = {});

}  // namespace kch
