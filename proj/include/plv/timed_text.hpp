#pragma once

#include <string>

#include "plv/timed.hpp"

namespace plv {

// Text form of a timed network; the grammar is documented in
// docs/timed-net-format.md and the shipped platoon net serves as reference.
std::string serialize_net(const TimedNet& net);
TimedNet parse_net(const std::string& text);

}  // namespace plv
