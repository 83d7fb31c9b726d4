#pragma once

#include <string>

namespace staleracer {

// Numbers in every CSV we emit are printed with 9 significant digits so that
// repeated runs produce byte-identical files.
std::string format_sig9(double x);

}  // namespace staleracer
