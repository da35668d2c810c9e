// model_io.hpp -- model files: JSON in, ModelSpec out.
//
// Schema:
//   {"system": {"dim": d, "H_S": [[[re,im],...],...], "V": [matrix,...]},
//    "bath": {"gamma": [..], "state": {"type":"gibbs","beta":b}
//                            or {"type":"weights","weights":[..]}},
//    "coupling": {"type":"explicit"} or {"type":"ladder"}}
// With ladder coupling, system.V is generated and must be omitted.
#pragma once

#include <string>

#include "qlv/model.hpp"

namespace qlv {

ModelSpec parse_model(const std::string& json_text);
ModelSpec load_model(const std::string& path);

} // namespace qlv
