#pragma once

#include "rasp/graph.hpp"

namespace rasp::detail {

/// Returns the id of the unique node structurally equal to `n`.
NodeId intern(Node n);

}  // namespace rasp::detail
